"""Fiat-Shamir signatures of knowledge.

Three relations live here: knowledge of a discrete log, knowledge of ``w``
with ``y1 = w*g`` and ``y2 = (a*w + b)*g`` for public ``a, b``, and the
multi-clause transaction relation tying a 2-in/2-out transfer together.

All responses follow ``z = r - w*e (mod q)``; verifiers rebuild every
commitment as ``z*base + e*public`` and recompute the challenge.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from silentledger.groups import (
    G1_BYTES,
    ORDER,
    SCALAR_BYTES,
    LengthError,
    PublicParams,
    decode_g1,
    decode_scalar,
    encode_scalar,
    hash_to_scalar,
    random_scalar,
)

DL_TAG = "SL/FS/dl"
BDL_TAG = "SL/FS/bdl"
TX1_TAG = "SL/FS/tx1"


# -- discrete log -------------------------------------------------------------


@dataclass(frozen=True)
class DlProof:
    challenge: int
    response: int

    def to_bytes(self) -> bytes:
        return encode_scalar(self.challenge) + encode_scalar(self.response)

    @classmethod
    def from_bytes(cls, data: bytes) -> "DlProof":
        if len(data) != 2 * SCALAR_BYTES:
            raise LengthError("dl proof length")
        return cls(decode_scalar(data[:SCALAR_BYTES]), decode_scalar(data[SCALAR_BYTES:]))


def _dl_challenge(base, y, A, m: bytes) -> int:
    return hash_to_scalar(DL_TAG, [base.to_bytes(), y.to_bytes(), A.to_bytes(), m])


def prove_dl(pp: PublicParams, base, y, w: int, m: bytes = b"", rng=None) -> DlProof:
    if w * base != y:
        raise ValueError("witness does not match y")
    r = random_scalar(rng)
    e = _dl_challenge(base, y, r * base, m)
    return DlProof(e, (r - w * e) % ORDER)


def verify_dl(pp: PublicParams, base, y, proof: DlProof, m: bytes = b"") -> bool:
    A = proof.response * base + proof.challenge * y
    return _dl_challenge(base, y, A, m) == proof.challenge


# -- bounded (linearly related) discrete log ----------------------------------


@dataclass(frozen=True)
class BdlProof:
    challenge: int
    response: int

    def to_bytes(self) -> bytes:
        return encode_scalar(self.challenge) + encode_scalar(self.response)


def _bdl_challenge(base, y1, y2, a, b, A1, A2, m) -> int:
    parts = [base.to_bytes(), y1.to_bytes(), y2.to_bytes(), encode_scalar(a % ORDER), encode_scalar(b % ORDER)]
    return hash_to_scalar(BDL_TAG, parts + [A1.to_bytes(), A2.to_bytes(), m])


def prove_bdl(pp: PublicParams, base, y1, y2, w: int, a: int, b: int, m: bytes = b"", rng=None) -> BdlProof:
    if w * base != y1 or ((a * w + b) % ORDER) * base != y2:
        raise ValueError("witness does not match (y1, y2)")
    r = random_scalar(rng)
    A1 = r * base
    e = _bdl_challenge(base, y1, y2, a, b, A1, (a * r) * base, m)
    return BdlProof(e, (r - w * e) % ORDER)


def verify_bdl(pp: PublicParams, base, y1, y2, a: int, b: int, proof: BdlProof, m: bytes = b"") -> bool:
    z, e = proof.response, proof.challenge
    A1 = z * base + e * y1
    # a*r*g = a*z*g + e*(y2 - b*g)
    A2 = (a * z) * base + e * (y2 - b * base)
    return _bdl_challenge(base, y1, y2, a, b, A1, A2, m) == e


# -- transaction relation -----------------------------------------------------


@dataclass(frozen=True)
class Tx1Statement:
    """Public side of the transfer relation. Pairs are indexed (1, 2)."""

    cm: tuple  # input amount ciphertexts
    cm_hat: tuple  # output amount ciphertexts
    Q: tuple  # input anonymous addresses
    Q_hat: tuple  # output anonymous addresses
    C_hat: tuple  # trace ciphertext first halves
    D_hat: tuple  # trace ciphertext second halves
    R_hat: tuple  # ephemeral keys
    Z_prime: tuple  # adapted certificate Z components
    T_prime: tuple  # adapted certificate T_sig components
    T: object  # auditor tracing key
    G: object
    m: bytes = b""

    def transcript_parts(self) -> list[bytes]:
        pts = [
            *self.cm, *self.cm_hat, *self.Q, *self.C_hat, *self.D_hat, *self.R_hat,
            *self.Q_hat, *self.Z_prime, *self.T_prime, self.G, self.T,
        ]
        return [p.to_bytes() for p in pts] + [self.m]

    def replace(self, **changes) -> "Tx1Statement":
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        kw.update(changes)
        return Tx1Statement(**kw)


@dataclass(frozen=True)
class Tx1Witness:
    v: tuple
    c: tuple
    s: tuple  # payer long-term secret per input
    gamma: tuple
    r: tuple
    v_hat: tuple
    c_hat: tuple
    S_hat: tuple  # payee long-term addresses (points)
    W: tuple  # s'^-1 * Z per output certificate (points)


# Scalar response names in wire order, then group responses.
TX1_SCALARS = (
    "z_v1", "z_v2", "z_vh1", "z_vh2", "z_c1", "z_c2", "z_sc1", "z_sc2",
    "z_r1", "z_r2", "z_g1", "z_g2", "z_ch1", "z_ch2", "z_bal",
)
TX1_POINTS = ("Z_S1", "Z_S2", "Z_W1", "Z_W2")


@dataclass(frozen=True)
class Tx1Proof:
    e: int
    z_v1: int
    z_v2: int
    z_vh1: int
    z_vh2: int
    z_c1: int
    z_c2: int
    z_sc1: int
    z_sc2: int
    z_r1: int
    z_r2: int
    z_g1: int
    z_g2: int
    z_ch1: int
    z_ch2: int
    z_bal: int
    Z_S1: object
    Z_S2: object
    Z_W1: object
    Z_W2: object

    ENCODED_LEN = (1 + len(TX1_SCALARS)) * SCALAR_BYTES + len(TX1_POINTS) * G1_BYTES

    def to_bytes(self) -> bytes:
        out = [encode_scalar(self.e)]
        out += [encode_scalar(getattr(self, n)) for n in TX1_SCALARS]
        out += [getattr(self, n).to_bytes() for n in TX1_POINTS]
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Tx1Proof":
        if len(data) != cls.ENCODED_LEN:
            raise LengthError("tx1 proof length")
        n = 1 + len(TX1_SCALARS)
        scalars = [decode_scalar(data[i * SCALAR_BYTES:(i + 1) * SCALAR_BYTES]) for i in range(n)]
        off = n * SCALAR_BYTES
        points = [decode_g1(data[off + i * G1_BYTES:off + (i + 1) * G1_BYTES]) for i in range(len(TX1_POINTS))]
        return cls(*scalars, *points)

    def replace(self, **changes) -> "Tx1Proof":
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        kw.update(changes)
        return Tx1Proof(**kw)


def tx1_relation_holds(pp: PublicParams, x: Tx1Statement, w: Tx1Witness) -> bool:
    """Direct substitution of the witness into every clause."""
    G, T = x.G, x.T
    ok = True
    for j in range(2):
        ok &= x.cm[j] == w.v[j] * G + w.c[j] * T
        ok &= x.Q[j] == (w.s[j] + w.c[j]) * G
        ok &= x.cm_hat[j] == w.v_hat[j] * G + w.c_hat[j] * T
        ok &= x.Q_hat[j] == w.S_hat[j] + w.c_hat[j] * G
        ok &= x.C_hat[j] == w.gamma[j] * G
        ok &= x.D_hat[j] == w.c_hat[j] * G + w.gamma[j] * T
        ok &= x.R_hat[j] == w.r[j] * G
        ok &= x.Z_prime[j] == w.W[j] + w.c_hat[j] * x.T_prime[j]
    bal = (w.c[0] + w.c[1] - w.c_hat[0] - w.c_hat[1]) % ORDER
    ok &= (x.cm[0] + x.cm[1]) - (x.cm_hat[0] + x.cm_hat[1]) == bal * T
    return bool(ok)


def _tx1_commitments(x: Tx1Statement, z: dict, e: int) -> list:
    """Commitment points from responses ``z`` and challenge ``e``.

    With ``e = 0`` and the blinding values in place of responses this is the
    prover's commitment; with the real ``e`` it is the verifier's rebuild.
    Order: cm, cm_hat, Q, C, D, R, Q_hat, balance, binding.
    """
    G, T = x.G, x.T
    out = [
        z["z_v1"] * G + z["z_c1"] * T + e * x.cm[0],
        z["z_v2"] * G + z["z_c2"] * T + e * x.cm[1],
        z["z_vh1"] * G + z["z_ch1"] * T + e * x.cm_hat[0],
        z["z_vh2"] * G + z["z_ch2"] * T + e * x.cm_hat[1],
        z["z_sc1"] * G + e * x.Q[0],
        z["z_sc2"] * G + e * x.Q[1],
        z["z_g1"] * G + e * x.C_hat[0],
        z["z_g2"] * G + e * x.C_hat[1],
        z["z_ch1"] * G + z["z_g1"] * T + e * x.D_hat[0],
        z["z_ch2"] * G + z["z_g2"] * T + e * x.D_hat[1],
        z["z_r1"] * G + e * x.R_hat[0],
        z["z_r2"] * G + e * x.R_hat[1],
        z["Z_S1"] + z["z_ch1"] * G + e * x.Q_hat[0],
        z["Z_S2"] + z["z_ch2"] * G + e * x.Q_hat[1],
        z["z_bal"] * T + e * ((x.cm[0] + x.cm[1]) - (x.cm_hat[0] + x.cm_hat[1])),
        z["Z_W1"] + z["z_ch1"] * x.T_prime[0] + e * x.Z_prime[0],
        z["Z_W2"] + z["z_ch2"] * x.T_prime[1] + e * x.Z_prime[1],
    ]
    return out


def tx1_challenge(x: Tx1Statement, commitments) -> int:
    return hash_to_scalar(TX1_TAG, x.transcript_parts() + [c.to_bytes() for c in commitments])


def _witness_values(w: Tx1Witness) -> dict:
    bal = w.c[0] + w.c[1] - w.c_hat[0] - w.c_hat[1]
    return {
        "z_v1": w.v[0], "z_v2": w.v[1], "z_vh1": w.v_hat[0], "z_vh2": w.v_hat[1],
        "z_c1": w.c[0], "z_c2": w.c[1],
        "z_sc1": w.s[0] + w.c[0], "z_sc2": w.s[1] + w.c[1],
        "z_r1": w.r[0], "z_r2": w.r[1], "z_g1": w.gamma[0], "z_g2": w.gamma[1],
        "z_ch1": w.c_hat[0], "z_ch2": w.c_hat[1], "z_bal": bal,
        "Z_S1": w.S_hat[0], "Z_S2": w.S_hat[1], "Z_W1": w.W[0], "Z_W2": w.W[1],
    }


def tx1_commit(pp: PublicParams, x: Tx1Statement, rng=None) -> tuple[dict, list]:
    """First move: fresh blinding values and their commitment points."""
    blinds = {n: random_scalar(rng) for n in TX1_SCALARS}
    for n in TX1_POINTS:
        blinds[n] = random_scalar(rng) * x.G
    return blinds, _tx1_commitments(x, blinds, 0)


def tx1_respond(w: Tx1Witness, blinds: dict, e: int) -> Tx1Proof:
    wit = _witness_values(w)
    scalars = {n: (blinds[n] - wit[n] * e) % ORDER for n in TX1_SCALARS}
    points = {n: blinds[n] - e * wit[n] for n in TX1_POINTS}
    return Tx1Proof(e=e, **scalars, **points)


def prove_tx1(pp: PublicParams, x: Tx1Statement, w: Tx1Witness, rng=None) -> Tx1Proof:
    if not tx1_relation_holds(pp, x, w):
        raise ValueError("witness does not satisfy the transaction statement")
    blinds, commitments = tx1_commit(pp, x, rng)
    return tx1_respond(w, blinds, tx1_challenge(x, commitments))


def verify_tx1(pp: PublicParams, x: Tx1Statement, proof: Tx1Proof) -> bool:
    z = {n: getattr(proof, n) for n in TX1_SCALARS + TX1_POINTS}
    return tx1_challenge(x, _tx1_commitments(x, z, proof.e)) == proof.e
