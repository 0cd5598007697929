"""Auxiliary primitives: ElGamal over G1, additive point encryption,
static Diffie-Hellman key agreement, and the amount encoding inverted by BSGS.
"""

from __future__ import annotations

from dataclasses import dataclass

from silentledger.groups import (
    DEFAULT_BSGS_BOUND,
    PublicParams,
    bsgs_table,
    hash_to_scalar,
    random_scalar,
)

AKE_TAG = "SL/H2S/ake"


@dataclass(frozen=True)
class ElGamalKeyPair:
    secret: int
    public: object


@dataclass(frozen=True)
class ElGamalCiphertext:
    C: object
    D: object


@dataclass(frozen=True)
class SharedKey:
    point: object
    scalar: int


def pke_keygen(pp: PublicParams, rng=None) -> ElGamalKeyPair:
    sk = random_scalar(rng)
    return ElGamalKeyPair(sk, sk * pp.G1)


def pke_encrypt(pp: PublicParams, M, pk, gamma: int | None = None, rng=None) -> tuple[ElGamalCiphertext, int]:
    """Encrypt point ``M``; returns the ciphertext and the randomness used."""
    if gamma is None:
        gamma = random_scalar(rng)
    return ElGamalCiphertext(gamma * pp.G1, M + gamma * pk), gamma


def pke_decrypt(ct: ElGamalCiphertext, sk: int):
    return ct.D - sk * ct.C


def ske_encrypt(m, xk):
    return m + xk


def ske_decrypt(c, xk):
    return c - xk


def ake_shared(sk: int, pk) -> SharedKey:
    point = sk * pk
    return SharedKey(point, hash_to_scalar(AKE_TAG, [point.to_bytes()]))


def of_map(pp: PublicParams, c: int):
    return c * pp.G1


def rf_encode(pp: PublicParams, v: int, bound: int = DEFAULT_BSGS_BOUND):
    if not 0 <= v < bound:
        raise ValueError(f"amount {v} outside [0, {bound})")
    return v * pp.G1


def rf_decode(pp: PublicParams, vx, bound: int = DEFAULT_BSGS_BOUND) -> int | None:
    return bsgs_table(pp.G1, bound).solve(vx)
