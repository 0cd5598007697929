"""Bilinear group layer: BLS12-381 points, scalars, hashing, encodings, BSGS.

Everything above this module treats scalars as plain ``int`` values reduced
modulo :data:`ORDER` and points as the backend's ``G1``/``G2``/``GT``
types, which support ``+``, ``-``, unary ``-``, ``int * point`` and ``==``.

The backend is the compiled ``silentledger._native`` extension when it
imports, else the pure-Python module. Set ``SILENTLEDGER_BACKEND=python``
to force the fallback.
"""

from __future__ import annotations

import hashlib
import os
import random
import secrets
import struct
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

_choice = os.environ.get("SILENTLEDGER_BACKEND", "auto").lower()
if _choice not in ("auto", "native", "python"):
    raise ImportError(f"SILENTLEDGER_BACKEND must be auto, native or python, not {_choice!r}")
if _choice == "python":
    from silentledger import _purepy as _backend
else:
    try:
        from silentledger import _native as _backend
    except ImportError:
        if _choice == "native":
            raise
        from silentledger import _purepy as _backend

BACKEND = "native" if _backend.__name__.endswith("_native") else "python"

G1 = _backend.G1
G2 = _backend.G2
GT = _backend.GT

ORDER = _backend.group_order()
FIELD_MODULUS = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
CURVE_ID = "BLS12-381"
SCALAR_BYTES = 32
G1_BYTES = 48
G2_BYTES = 96
DEFAULT_BSGS_BOUND = 1 << 32


class DecodeError(ValueError):
    """Raised when a byte string is not a valid canonical encoding."""


class LengthError(DecodeError):
    pass


class EncodingError(DecodeError):
    """Bad flag bits, or a coordinate/scalar outside its field."""


class NotOnCurveError(DecodeError):
    pass


class SubgroupError(DecodeError):
    pass


_DECODE_ERRORS = {
    "length": LengthError,
    "encoding": EncodingError,
    "curve": NotOnCurveError,
    "subgroup": SubgroupError,
}


# -- randomness ---------------------------------------------------------------

_seed = os.environ.get("SL_SEED")
_default_rng: random.Random = random.Random(int(_seed)) if _seed else secrets.SystemRandom()


def default_rng() -> random.Random:
    return _default_rng


def random_scalar(rng: random.Random | None = None) -> int:
    """Uniform element of Z_q^* (never zero)."""
    rng = rng or _default_rng
    return rng.randrange(1, ORDER)


def inv(a: int) -> int:
    a %= ORDER
    if a == 0:
        raise ZeroDivisionError("scalar inverse of zero")
    return pow(a, -1, ORDER)


# -- public parameters --------------------------------------------------------


@dataclass(frozen=True)
class PublicParams:
    G1: object
    G2: object
    g: object
    q: int
    curve_id: str = CURVE_ID

    @property
    def G(self):
        """Alias: the protocol layer writes the G1 generator as plain G."""
        return self.G1


_SUPPORTED_LEVELS = {128: CURVE_ID}


@lru_cache(maxsize=None)
def setup(security_level: int = 128) -> PublicParams:
    if security_level not in _SUPPORTED_LEVELS:
        raise ValueError(f"unsupported security level: {security_level}")
    g1, g2 = G1.generator(), G2.generator()
    return PublicParams(G1=g1, G2=g2, g=pairing(g1, g2), q=ORDER, curve_id=_SUPPORTED_LEVELS[security_level])


def pairing(p, q):
    return _backend.pairing(p, q)


def pairing_product_is_one(pairs) -> bool:
    """Check prod e(P_i, Q_i) == 1 with a single final exponentiation."""
    return _backend.pairing_product_is_one(list(pairs))


def msm(points, scalars):
    return _backend.msm(list(points), [s % ORDER for s in scalars])


def fold(lo, hi, a: int, b: int):
    """Element-wise ``a*lo[i] + b*hi[i]``."""
    return _backend.fold(list(lo), list(hi), a % ORDER, b % ORDER)


# -- hashing ------------------------------------------------------------------


def _frame(tag: bytes, parts) -> bytes:
    if not tag:
        raise ValueError("domain tag must be non-empty")
    out = [struct.pack(">I", len(tag)), tag]
    for p in parts:
        p = bytes(p)
        out.append(struct.pack(">Q", len(p)))
        out.append(p)
    return b"".join(out)


def hash_to_scalar(tag: bytes | str, parts) -> int:
    """Domain-separated hash of length-prefixed parts, reduced mod q.

    64 bytes of SHAKE256 output keep the modular bias below 2^-256.
    """
    if isinstance(tag, str):
        tag = tag.encode("ascii")
    digest = hashlib.shake_256(_frame(tag, parts)).digest(64)
    return int.from_bytes(digest, "big") % ORDER


def hash_to_g1(tag: bytes | str, index: int):
    """Deterministic G1 point with unknown discrete log (try-and-increment).

    The candidate x is hashed to the base field; the first x on the curve is
    lifted with the hashed sign bit and pushed into the subgroup by cofactor
    clearing.
    """
    if isinstance(tag, str):
        tag = tag.encode("ascii")
    ctr = 0
    while True:
        d = hashlib.shake_256(_frame(tag, [struct.pack(">QI", index, ctr)])).digest(65)
        x = int.from_bytes(d[:64], "big") % FIELD_MODULUS
        ctr += 1
        rhs = (pow(x, 3, FIELD_MODULUS) + 4) % FIELD_MODULUS
        if pow(rhs, (FIELD_MODULUS - 1) // 2, FIELD_MODULUS) != 1:
            continue
        enc = bytearray(x.to_bytes(G1_BYTES, "big"))
        enc[0] |= 0x80 | (0x20 if d[64] & 1 else 0)
        pt = G1.from_bytes(bytes(enc), False).clear_cofactor()
        if not pt.is_identity():
            return pt


@lru_cache(maxsize=None)
def generator_vector(tag: str, n: int) -> tuple:
    return tuple(hash_to_g1(tag, i) for i in range(n))


# -- encodings ----------------------------------------------------------------


def encode_scalar(s: int) -> bytes:
    if not 0 <= s < ORDER:
        raise ValueError("scalar out of range")
    return s.to_bytes(SCALAR_BYTES, "big")


def decode_scalar(data: bytes) -> int:
    if len(data) != SCALAR_BYTES:
        raise LengthError("length")
    s = int.from_bytes(data, "big")
    if s >= ORDER:
        raise EncodingError("scalar not reduced")
    return s


def encode_point(p) -> bytes:
    return p.to_bytes()


def _decode(cls, data: bytes):
    try:
        return cls.from_bytes(bytes(data))
    except ValueError as exc:
        kind = str(exc)
        raise _DECODE_ERRORS.get(kind, DecodeError)(f"{cls.__name__}: {kind}") from None


def decode_g1(data: bytes):
    return _decode(G1, data)


def decode_g2(data: bytes):
    return _decode(G2, data)


# -- bounded discrete log -----------------------------------------------------


@dataclass
class BsgsTable:
    """Reusable baby-step table for one (base, bound) pair."""

    base: object
    bound: int
    baby_steps: int = 0
    _table: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("bound must be >= 1")
        if not self.baby_steps:
            self.baby_steps = max(1, isqrt(self.bound - 1) + 1)
        self._table = _backend.BabySteps(self.base, self.baby_steps)
        self.giant_steps = -(-self.bound // self.baby_steps)

    def solve(self, target) -> int | None:
        v = self._table.solve(target, self.giant_steps)
        if v is None or v >= self.bound:
            return None
        return v


_tables: dict[tuple[bytes, int, int], BsgsTable] = {}
_tables_lock = threading.Lock()


def bsgs_table(base, bound: int = DEFAULT_BSGS_BOUND, baby_steps: int = 0) -> BsgsTable:
    key = (base.to_bytes(), bound, baby_steps)
    with _tables_lock:
        t = _tables.get(key)
        if t is None:
            t = _tables[key] = BsgsTable(base, bound, baby_steps)
    return t


def bsgs_dlog(base, target, bound: int = DEFAULT_BSGS_BOUND) -> int | None:
    """Return v in [0, bound) with target == v*base, or None."""
    return bsgs_table(base, bound).solve(target)
