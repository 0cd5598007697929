"""Aggregated logarithmic range proofs for ``cm = v*G + c*T``.

Proves ``0 <= v < 2**(n-1)`` for one or two commitments in a single
transcript. The bit vector is padded to a power of two with zero-weight
positions; the inner-product argument halves the vectors each round with
``a' = a_lo/x + a_hi*x`` and ``P' = P + L/x^2 + R*x^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from silentledger.groups import (
    G1_BYTES,
    ORDER,
    SCALAR_BYTES,
    LengthError,
    PublicParams,
    decode_g1,
    decode_scalar,
    encode_scalar,
    fold,
    hash_to_g1,
    hash_to_scalar,
    inv,
    msm,
    random_scalar,
)

RANGE_TAG = "SL/FS/range"
GEN_TAG = "SL/GEN/bp"
MAX_BITS = 64
MAX_PARTIES = 2
_MAX_N = MAX_PARTIES * MAX_BITS


def _next_pow2(k: int) -> int:
    return 1 << (k - 1).bit_length()


@lru_cache(maxsize=None)
def _gen(i: int):
    return hash_to_g1(GEN_TAG, i)


def generators(N: int) -> tuple[list, list, object]:
    """Vector bases G_i, H_i (i < N) and the inner-product base u."""
    if N > _MAX_N:
        raise ValueError("vector length exceeds generator capacity")
    return [_gen(i) for i in range(N)], [_gen(_MAX_N + i) for i in range(N)], _gen(2 * _MAX_N)


@dataclass(frozen=True)
class RangeStatement:
    commitments: tuple
    n: int
    G: object
    T: object

    def __post_init__(self):
        if not 2 <= self.n <= MAX_BITS:
            raise ValueError("bit width n must be in [2, 64]")
        if not 1 <= len(self.commitments) <= MAX_PARTIES:
            raise ValueError("one or two commitments supported")

    @property
    def bits(self) -> int:
        return self.n - 1

    @property
    def padded_bits(self) -> int:
        return _next_pow2(self.bits)

    @property
    def vector_len(self) -> int:
        return len(self.commitments) * self.padded_bits

    @property
    def rounds(self) -> int:
        return self.vector_len.bit_length() - 1


@dataclass(frozen=True)
class RangeWitness:
    values: tuple
    blinders: tuple


@dataclass(frozen=True)
class RangeProof:
    A: object
    S: object
    T1: object
    T2: object
    L: tuple
    R: tuple
    tau_x: int
    mu: int
    t_hat: int
    a: int
    b: int

    @staticmethod
    def element_count(rounds: int) -> int:
        return 4 + 2 * rounds

    @property
    def group_elements(self) -> int:
        return self.element_count(len(self.L))

    def to_bytes(self) -> bytes:
        pts = [self.A, self.S, self.T1, self.T2]
        for l, r in zip(self.L, self.R):
            pts += [l, r]
        out = b"".join(p.to_bytes() for p in pts)
        return out + b"".join(encode_scalar(s) for s in (self.tau_x, self.mu, self.t_hat, self.a, self.b))

    @classmethod
    def from_bytes(cls, data: bytes) -> "RangeProof":
        body = len(data) - 5 * SCALAR_BYTES
        if body < 4 * G1_BYTES or body % G1_BYTES or (body // G1_BYTES - 4) % 2:
            raise LengthError("range proof length")
        npts = body // G1_BYTES
        pts = [decode_g1(data[i * G1_BYTES:(i + 1) * G1_BYTES]) for i in range(npts)]
        sc = [decode_scalar(data[body + i * SCALAR_BYTES:body + (i + 1) * SCALAR_BYTES]) for i in range(5)]
        return cls(*pts[:4], tuple(pts[4::2]), tuple(pts[5::2]), *sc)


class _Transcript:
    def __init__(self, x: RangeStatement):
        self.parts = [x.n.to_bytes(2, "big"), x.G.to_bytes(), x.T.to_bytes()]
        self.parts += [c.to_bytes() for c in x.commitments]

    def absorb(self, *points):
        self.parts += [p.to_bytes() for p in points]

    def challenge(self, label: bytes) -> int:
        c = hash_to_scalar(RANGE_TAG, self.parts + [label])
        self.parts.append(encode_scalar(c))
        return c


def _powers(base: int, k: int) -> list[int]:
    out, acc = [], 1
    for _ in range(k):
        out.append(acc)
        acc = acc * base % ORDER
    return out


def _weights(x: RangeStatement, z: int) -> list[int]:
    """d-vector: z^(2+j) * 2^i on real bit slots, zero on padding."""
    nb, bits = x.padded_bits, x.bits
    d = []
    for j in range(len(x.commitments)):
        zj = pow(z, 2 + j, ORDER)
        d += [zj * (1 << i) % ORDER if i < bits else 0 for i in range(nb)]
    return d


def _delta(x: RangeStatement, y: int, z: int) -> int:
    N = x.vector_len
    sum_y = sum(_powers(y, N)) % ORDER
    sum_d = sum(pow(z, 2 + j, ORDER) for j in range(len(x.commitments))) * ((1 << x.bits) - 1)
    return ((z - z * z) * sum_y - z * sum_d) % ORDER


def _inner(a, b) -> int:
    return sum(x * y for x, y in zip(a, b)) % ORDER


def in_range(v: int, n: int) -> bool:
    return 0 <= v < 1 << (n - 1)


def prove_range(pp: PublicParams, x: RangeStatement, w: RangeWitness, rng=None) -> RangeProof:
    if len(w.values) != len(x.commitments) or len(w.blinders) != len(x.commitments):
        raise ValueError("witness arity does not match statement")
    for v in w.values:
        if not in_range(v, x.n):
            raise ValueError(f"value {v} outside [0, 2^{x.n - 1})")
    for v, c, cm in zip(w.values, w.blinders, x.commitments):
        if v * x.G + c * x.T != cm:
            raise ValueError("witness does not open commitment")
    return _prove(x, w, rng)


def forge_range_transcript(pp: PublicParams, x: RangeStatement, w: RangeWitness, rng=None) -> RangeProof:
    """Run the prover with no range or opening check (bits are truncated).

    Test hook: lets negative tests feed a dishonest transcript to the verifier.
    """
    return _prove(x, w, rng)


def _prove(x: RangeStatement, w: RangeWitness, rng) -> RangeProof:
    N, nb, bits = x.vector_len, x.padded_bits, x.bits
    Gs, Hs, u = generators(N)
    H = x.T

    aL = []
    for v in w.values:
        aL += [(v >> i) & 1 if i < bits else 0 for i in range(nb)]
    aR = [(a - 1) % ORDER for a in aL]
    alpha, rho = random_scalar(rng), random_scalar(rng)
    sL = [random_scalar(rng) for _ in range(N)]
    sR = [random_scalar(rng) for _ in range(N)]

    A = msm([H] + Gs + Hs, [alpha] + aL + aR)
    S = msm([H] + Gs + Hs, [rho] + sL + sR)
    ts = _Transcript(x)
    ts.absorb(A, S)
    y = ts.challenge(b"y")
    z = ts.challenge(b"z")

    yN = _powers(y, N)
    d = _weights(x, z)
    l0 = [(a - z) % ORDER for a in aL]
    r0 = [(yi * (a + z) + di) % ORDER for yi, a, di in zip(yN, aR, d)]
    r1 = [yi * s % ORDER for yi, s in zip(yN, sR)]
    t1 = (_inner(l0, r1) + _inner(sL, r0)) % ORDER
    t2 = _inner(sL, r1)
    tau1, tau2 = random_scalar(rng), random_scalar(rng)
    T1 = t1 * x.G + tau1 * H
    T2 = t2 * x.G + tau2 * H
    ts.absorb(T1, T2)
    xc = ts.challenge(b"x")

    l = [(a + s * xc) % ORDER for a, s in zip(l0, sL)]
    r = [(a + s * xc) % ORDER for a, s in zip(r0, r1)]
    t_hat = _inner(l, r)
    zpow = sum(pow(z, 2 + j, ORDER) * g for j, g in enumerate(w.blinders))
    tau_x = (tau2 * xc * xc + tau1 * xc + zpow) % ORDER
    mu = (alpha + rho * xc) % ORDER
    ts.parts += [encode_scalar(tau_x), encode_scalar(mu), encode_scalar(t_hat)]
    wc = ts.challenge(b"w")
    U = wc * u

    y_inv = inv(y)
    Hp = [p * yi for p, yi in zip(Hs, _powers(y_inv, N))]
    a, b, Gv = l, r, Gs
    Ls, Rs = [], []
    while len(a) > 1:
        k = len(a) // 2
        a_lo, a_hi, b_lo, b_hi = a[:k], a[k:], b[:k], b[k:]
        G_lo, G_hi, H_lo, H_hi = Gv[:k], Gv[k:], Hp[:k], Hp[k:]
        L = msm(G_hi + H_lo + [U], a_lo + b_hi + [_inner(a_lo, b_hi)])
        R = msm(G_lo + H_hi + [U], a_hi + b_lo + [_inner(a_hi, b_lo)])
        Ls.append(L)
        Rs.append(R)
        ts.absorb(L, R)
        e = ts.challenge(b"ipa")
        ei = inv(e)
        a = [(lo * ei + hi * e) % ORDER for lo, hi in zip(a_lo, a_hi)]
        b = [(lo * e + hi * ei) % ORDER for lo, hi in zip(b_lo, b_hi)]
        Gv = fold(G_lo, G_hi, e, ei)
        Hp = fold(H_lo, H_hi, ei, e)
    return RangeProof(A, S, T1, T2, tuple(Ls), tuple(Rs), tau_x, mu, t_hat, a[0], b[0])


def verify_range(pp: PublicParams, x: RangeStatement, proof: RangeProof) -> bool:
    try:
        return _verify(x, proof)
    except (TypeError, AttributeError, ZeroDivisionError):
        return False


def _verify(x: RangeStatement, pf: RangeProof) -> bool:
    N = x.vector_len
    if len(pf.L) != x.rounds or len(pf.R) != x.rounds:
        return False
    for s in (pf.tau_x, pf.mu, pf.t_hat, pf.a, pf.b):
        if not 0 <= s < ORDER:
            return False
    Gs, Hs, u = generators(N)
    H = x.T

    ts = _Transcript(x)
    ts.absorb(pf.A, pf.S)
    y = ts.challenge(b"y")
    z = ts.challenge(b"z")
    ts.absorb(pf.T1, pf.T2)
    xc = ts.challenge(b"x")
    ts.parts += [encode_scalar(pf.tau_x), encode_scalar(pf.mu), encode_scalar(pf.t_hat)]
    wc = ts.challenge(b"w")
    ch = []
    for L, R in zip(pf.L, pf.R):
        ts.absorb(L, R)
        ch.append(ts.challenge(b"ipa"))

    # t_hat*G + tau_x*H == sum z^(2+j) V_j + delta*G + x*T1 + x^2*T2
    m = len(x.commitments)
    lhs = msm(
        [x.G, H, *x.commitments, pf.T1, pf.T2],
        [pf.t_hat - _delta(x, y, z), pf.tau_x]
        + [-pow(z, 2 + j, ORDER) for j in range(m)]
        + [-xc, -xc * xc],
    )
    if not lhs.is_identity():
        return False

    # s_i: product over rounds of x_k (lo half) or x_k^-1 (hi half), MSB first
    ch_inv = [inv(c) for c in ch]
    k = len(ch)
    s = []
    for i in range(N):
        acc = 1
        for r in range(k):
            bit = (i >> (k - 1 - r)) & 1
            acc = acc * (ch_inv[r] if bit else ch[r]) % ORDER
        s.append(acc)
    y_inv_pows = _powers(inv(y), N)
    d = _weights(x, z)
    g_sc = [(-z - pf.a * si) % ORDER for si in s]
    h_sc = [
        (z + (di - pf.b * inv_si) * yi) % ORDER
        for di, inv_si, yi in zip(d, (inv(si) for si in s), y_inv_pows)
    ]
    pts = [pf.A, pf.S, H, u] + Gs + Hs + list(pf.L) + list(pf.R)
    sc = [1, xc, -pf.mu, wc * (pf.t_hat - pf.a * pf.b)] + g_sc + h_sc
    sc += [pow(c, -2, ORDER) for c in ch] + [c * c for c in ch]
    return msm(pts, sc).is_identity()


def aggregate_prove(pp: PublicParams, x: RangeStatement, w: RangeWitness, rng=None) -> RangeProof:
    """Both output commitments in one transcript."""
    if len(x.commitments) != 2:
        raise ValueError("aggregate proof expects two commitments")
    return prove_range(pp, x, w, rng)


def aggregate_verify(pp: PublicParams, x: RangeStatement, proof: RangeProof) -> bool:
    if len(x.commitments) != 2:
        return False
    return verify_range(pp, x, proof)

