"""Pure-Python fallback for the native BLS12-381 kernels.

Mirrors the interface of ``silentledger._native`` exactly (class names,
method names, error strings) so :mod:`silentledger.groups` can swap one for
the other at import time. Field and pairing arithmetic come from py_ecc;
encodings, subgroup checks and the BSGS table are implemented here so that
byte output matches the native backend.
"""

from __future__ import annotations

from py_ecc.bls.point_compression import modular_squareroot_in_FQ2
from py_ecc.optimized_bls12_381 import (
    FQ,
    FQ2,
    FQ12,
    G1 as _G1_GEN,
    G2 as _G2_GEN,
    Z1,
    Z2,
    add,
    b,
    b2,
    curve_order,
    double,
    eq,
    field_modulus,
    final_exponentiate,
    is_inf,
    is_on_curve,
    multiply,
    neg,
    normalize,
)
from py_ecc.optimized_bls12_381.optimized_pairing import miller_loop

P = field_modulus
Q = curve_order
G1_H_EFF = 0xD201000000010001
_HALF = (P - 1) // 2


def group_order() -> int:
    return Q


def _check_flags(data: bytes) -> bool:
    b0 = data[0]
    if not b0 & 0x80:
        raise ValueError("encoding")
    if b0 & 0x40:
        if (b0 & 0x3F) or any(data[1:]):
            raise ValueError("encoding")
        return True
    return False


def _mul(pt, k: int):
    k %= Q
    if k == 0:
        return Z1 if isinstance(pt[0], FQ) else Z2
    return multiply(pt, k)


class G1:
    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    @staticmethod
    def generator() -> "G1":
        return G1(_G1_GEN)

    @staticmethod
    def identity() -> "G1":
        return G1(Z1)

    def __add__(self, other: "G1") -> "G1":
        return G1(add(self.p, other.p))

    def __sub__(self, other: "G1") -> "G1":
        return G1(add(self.p, neg(other.p)))

    def __neg__(self) -> "G1":
        return G1(neg(self.p))

    def __mul__(self, k: int) -> "G1":
        return G1(_mul(self.p, k))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, G1):
            return False
        if is_inf(self.p) or is_inf(other.p):
            return is_inf(self.p) and is_inf(other.p)
        return eq(self.p, other.p)

    def __hash__(self) -> int:
        return hash(self.to_bytes())

    def __repr__(self) -> str:
        return f"G1({self.to_bytes()[:8].hex()}..)"

    def is_identity(self) -> bool:
        return is_inf(self.p)

    def double(self) -> "G1":
        return G1(double(self.p))

    def affine_x(self) -> int:
        x, _ = normalize(self.p)
        return int(x)

    def to_bytes(self) -> bytes:
        if is_inf(self.p):
            return bytes([0xC0]) + bytes(47)
        x, y = normalize(self.p)
        flags = 0x80 | (0x20 if int(y) > _HALF else 0)
        out = bytearray(int(x).to_bytes(48, "big"))
        out[0] |= flags
        return bytes(out)

    @staticmethod
    def from_bytes(data: bytes, check_subgroup: bool = True) -> "G1":
        if len(data) != 48:
            raise ValueError("length")
        if _check_flags(data):
            return G1.identity()
        sign = bool(data[0] & 0x20)
        x = int.from_bytes(bytes([data[0] & 0x1F]) + data[1:], "big")
        if x >= P:
            raise ValueError("encoding")
        rhs = (pow(x, 3, P) + 4) % P
        y = pow(rhs, (P + 1) // 4, P)
        if y * y % P != rhs:
            raise ValueError("curve")
        if (y > _HALF) != sign:
            y = P - y
        pt = G1((FQ(x), FQ(y), FQ.one()))
        if check_subgroup and not pt.in_subgroup():
            raise ValueError("subgroup")
        return pt

    def clear_cofactor(self) -> "G1":
        return G1(multiply(self.p, G1_H_EFF))

    def in_subgroup(self) -> bool:
        return is_inf(multiply(self.p, Q))


def _fq2_sign(y) -> bool:
    re, im = (int(c) for c in y.coeffs)
    return im > _HALF if im else re > _HALF


class G2:
    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    @staticmethod
    def generator() -> "G2":
        return G2(_G2_GEN)

    @staticmethod
    def identity() -> "G2":
        return G2(Z2)

    def __add__(self, other: "G2") -> "G2":
        return G2(add(self.p, other.p))

    def __sub__(self, other: "G2") -> "G2":
        return G2(add(self.p, neg(other.p)))

    def __neg__(self) -> "G2":
        return G2(neg(self.p))

    def __mul__(self, k: int) -> "G2":
        return G2(_mul(self.p, k))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, G2):
            return False
        if is_inf(self.p) or is_inf(other.p):
            return is_inf(self.p) and is_inf(other.p)
        return eq(self.p, other.p)

    def __hash__(self) -> int:
        return hash(self.to_bytes())

    def __repr__(self) -> str:
        return f"G2({self.to_bytes()[:8].hex()}..)"

    def is_identity(self) -> bool:
        return is_inf(self.p)

    def to_bytes(self) -> bytes:
        if is_inf(self.p):
            return bytes([0xC0]) + bytes(95)
        x, y = normalize(self.p)
        re, im = (int(c) for c in x.coeffs)
        out = bytearray(im.to_bytes(48, "big") + re.to_bytes(48, "big"))
        out[0] |= 0x80 | (0x20 if _fq2_sign(y) else 0)
        return bytes(out)

    @staticmethod
    def from_bytes(data: bytes, check_subgroup: bool = True) -> "G2":
        if len(data) != 96:
            raise ValueError("length")
        if _check_flags(data):
            return G2.identity()
        sign = bool(data[0] & 0x20)
        im = int.from_bytes(bytes([data[0] & 0x1F]) + data[1:48], "big")
        re = int.from_bytes(data[48:], "big")
        if im >= P or re >= P:
            raise ValueError("encoding")
        x = FQ2([re, im])
        y = modular_squareroot_in_FQ2(x**3 + b2)
        if y is None:
            raise ValueError("curve")
        if _fq2_sign(y) != sign:
            y = -y
        pt = (x, y, FQ2.one())
        if not is_on_curve(pt, b2):
            raise ValueError("curve")
        if check_subgroup and not is_inf(multiply(pt, Q)):
            raise ValueError("subgroup")
        return G2(pt)


class GT:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    @staticmethod
    def identity() -> "GT":
        return GT(FQ12.one())

    def __mul__(self, other: "GT") -> "GT":
        return GT(self.v * other.v)

    def __truediv__(self, other: "GT") -> "GT":
        return GT(self.v / other.v)

    def __pow__(self, k: int, modulo=None) -> "GT":
        return GT(self.v ** (k % Q))

    def __eq__(self, other) -> bool:
        return isinstance(other, GT) and self.v == other.v

    __hash__ = None

    def is_identity(self) -> bool:
        return self.v == FQ12.one()

    def __repr__(self) -> str:
        return "GT(..)"


def _miller(p: G1, q: G2):
    if is_inf(p.p) or is_inf(q.p):
        return FQ12.one()
    return miller_loop(q.p, p.p, final_exponentiate=False)


def pairing(p: G1, q: G2) -> GT:
    return GT(final_exponentiate(_miller(p, q)))


def pairing_product_is_one(pairs) -> bool:
    acc = FQ12.one()
    for p, q in pairs:
        acc = acc * _miller(p, q)
    return final_exponentiate(acc) == FQ12.one()


def msm(points, scalars) -> G1:
    if len(points) != len(scalars):
        raise ValueError("msm: length mismatch")
    acc = Z1
    for pt, k in zip(points, scalars):
        acc = add(acc, _mul(pt.p, k))
    return G1(acc)


def fold(lo, hi, a: int, b: int):
    if len(lo) != len(hi):
        raise ValueError("fold: length mismatch")
    return [G1(add(_mul(l.p, a), _mul(h.p, b))) for l, h in zip(lo, hi)]


class BabySteps:
    """Baby-step table keyed by affine x coordinate."""

    def __init__(self, base: G1, m: int):
        if m <= 0 or m > 1 << 30:
            raise ValueError("baby-step count out of range")
        self.base = base
        self._m = m
        self.table: dict[int, int] = {}
        cur = Z1
        for j in range(m):
            key = -1 if is_inf(cur) else int(normalize(cur)[0])
            self.table.setdefault(key, j)
            cur = add(cur, base.p)

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return len(self.table)

    def solve(self, target: G1, giant_steps: int):
        stride = neg(_mul(self.base.p, self._m))
        cur = target.p
        for i in range(giant_steps):
            key = -1 if is_inf(cur) else int(normalize(cur)[0])
            j = self.table.get(key)
            if j is not None:
                v = i * self._m + j
                # x matches for both +/-; confirm the sign
                if G1(_mul(self.base.p, j)) == G1(cur):
                    return v
            cur = add(cur, stride)
        return None
