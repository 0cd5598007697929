"""Renewable anonymous certificates.

A certificate is a signature on an identity point ``C = r*G1``. Any holder
can shift the identity to ``C + r'*G1`` and adapt the signature to match,
without the signing key. Verification is three pairing equations.
"""

from __future__ import annotations

from dataclasses import dataclass

from silentledger.groups import (
    G1_BYTES,
    G2_BYTES,
    LengthError,
    PublicParams,
    decode_g1,
    decode_g2,
    inv,
    pairing_product_is_one,
    random_scalar,
)


@dataclass(frozen=True)
class Identity:
    C: object
    r: int | None = None


@dataclass(frozen=True)
class SigningKey:
    x: int


@dataclass(frozen=True)
class VerifKey:
    X: object


@dataclass(frozen=True)
class RacSignature:
    Z: object
    S: object
    S_hat: object
    T_sig: object

    ENCODED_LEN = 3 * G1_BYTES + G2_BYTES

    def to_bytes(self) -> bytes:
        return self.Z.to_bytes() + self.S.to_bytes() + self.S_hat.to_bytes() + self.T_sig.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "RacSignature":
        if len(data) != cls.ENCODED_LEN:
            raise LengthError("signature length")
        a, b = G1_BYTES, 2 * G1_BYTES
        c = b + G2_BYTES
        return cls(decode_g1(data[:a]), decode_g1(data[a:b]), decode_g2(data[b:c]), decode_g1(data[c:]))


def cert_gen(pp: PublicParams, rng=None) -> Identity:
    r = random_scalar(rng)
    return Identity(C=r * pp.G1, r=r)


def rndmz(pp: PublicParams, C, r_prime: int):
    return C + r_prime * pp.G1


def skey_gen(pp: PublicParams, rng=None) -> tuple[SigningKey, VerifKey]:
    x = random_scalar(rng)
    return SigningKey(x), VerifKey(x * pp.G2)


def sign(pp: PublicParams, sk: SigningKey, C, rng=None) -> RacSignature:
    s = random_scalar(rng)
    s_inv = inv(s)
    return RacSignature(
        Z=s_inv * (pp.G1 + sk.x * C),
        S=s * pp.G1,
        S_hat=s * pp.G2,
        T_sig=(s_inv * sk.x) * pp.G1,
    )


def adapt_with(sig: RacSignature, r_prime: int, s_prime: int) -> RacSignature:
    """Adapt with caller-chosen randomness ``s_prime``.

    Exposed for provers that need ``s_prime`` as a witness and for tests of
    the structural relation ``s' * Z' == Z + r' * T_sig``.
    """
    s_inv = inv(s_prime)
    return RacSignature(
        Z=s_inv * (sig.Z + r_prime * sig.T_sig),
        S=s_prime * sig.S,
        S_hat=s_prime * sig.S_hat,
        T_sig=s_inv * sig.T_sig,
    )


def adapt(sig: RacSignature, r_prime: int, rng=None) -> RacSignature:
    return adapt_with(sig, r_prime, random_scalar(rng))


def verify(pp: PublicParams, vk: VerifKey, C, sig: RacSignature) -> bool:
    # Each equation is checked as a pairing product equal to 1:
    #   e(Z, S^) = e(G1, G2) e(C, X)
    #   e(G1, S^) = e(S, G2)
    #   e(T, S^) = e(G1, X)
    try:
        if sig.S_hat.is_identity():
            return False
        G1, G2 = pp.G1, pp.G2
        return (
            pairing_product_is_one([(sig.Z, sig.S_hat), (-G1, G2), (-C, vk.X)])
            and pairing_product_is_one([(G1, sig.S_hat), (-sig.S, G2)])
            and pairing_product_is_one([(sig.T_sig, sig.S_hat), (-G1, vk.X)])
        )
    except (TypeError, AttributeError):
        return False


def encode_certificate(C, sig: RacSignature) -> bytes:
    """Certificate file body: C, Z, S, S^, T_sig."""
    return C.to_bytes() + sig.to_bytes()


def decode_certificate(data: bytes) -> tuple[object, RacSignature]:
    if len(data) != G1_BYTES + RacSignature.ENCODED_LEN:
        raise LengthError("certificate length")
    return decode_g1(data[:G1_BYTES]), RacSignature.from_bytes(data[G1_BYTES:])
