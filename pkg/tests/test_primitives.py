from hypothesis import given
from hypothesis import strategies as st
import pytest

from silentledger import primitives as P
from silentledger.groups import G1, ORDER, hash_to_scalar, random_scalar

scalars = st.integers(min_value=1, max_value=ORDER - 1)


def test_keygen(pp, rng):
    a, b = P.pke_keygen(pp, rng), P.pke_keygen(pp, rng)
    assert a.public == a.secret * pp.G1
    assert a.secret != b.secret


def test_elgamal_roundtrip_1000(pp, rng):
    kp = P.pke_keygen(pp, rng)
    for _ in range(1000):
        M = random_scalar(rng) * pp.G1
        ct, gamma = P.pke_encrypt(pp, M, kp.public, rng=rng)
        assert ct.C == gamma * pp.G1
        assert P.pke_decrypt(ct, kp.secret) == M


def test_elgamal_edge_cases(pp, rng):
    kp = P.pke_keygen(pp, rng)
    ct, _ = P.pke_encrypt(pp, G1.identity(), kp.public, rng=rng)
    assert P.pke_decrypt(ct, kp.secret).is_identity()
    M = 42 * pp.G1
    ct0, g0 = P.pke_encrypt(pp, M, kp.public, gamma=0)
    assert g0 == 0 and ct0.C.is_identity() and ct0.D == M
    ct, _ = P.pke_encrypt(pp, M, kp.public, rng=rng)
    assert P.pke_decrypt(ct, kp.secret + 1) != M


@given(k=scalars, sk=scalars)
def test_elgamal_property(pp, k, sk):
    M = k * pp.G1
    ct, _ = P.pke_encrypt(pp, M, sk * pp.G1)
    assert P.pke_decrypt(ct, sk) == M


def test_ske(pp):
    m, k = 5 * pp.G1, 7 * pp.G1
    assert P.ske_encrypt(m, k) == 12 * pp.G1
    assert P.ske_decrypt(P.ske_encrypt(m, k), k) == m
    m2, k2 = 9 * pp.G1, 2 * pp.G1
    assert P.ske_encrypt(m, k) + P.ske_encrypt(m2, k2) == P.ske_encrypt(m + m2, k + k2)


@given(a=scalars, b=scalars)
def test_ake_symmetry(pp, a, b):
    A, B = a * pp.G1, b * pp.G1
    x, y = P.ake_shared(a, B), P.ake_shared(b, A)
    assert x.point == y.point
    assert x.scalar == y.scalar == hash_to_scalar("SL/H2S/ake", [x.point.to_bytes()])


def test_ake_zero(pp):
    assert P.ake_shared(0, 5 * pp.G1).point.is_identity()


def test_of_map(pp, rng):
    assert P.of_map(pp, 0).is_identity()
    assert P.of_map(pp, 1) == pp.G1
    c = random_scalar(rng)
    assert P.of_map(pp, c) == c * pp.G1


def test_rf_roundtrip(pp, rng):
    assert P.rf_decode(pp, P.rf_encode(pp, 0)) == 0
    assert P.rf_decode(pp, P.rf_encode(pp, 1000000), 2 ** 32) == 1000000
    for _ in range(100):
        v = rng.randrange(2 ** 32)
        assert P.rf_decode(pp, P.rf_encode(pp, v)) == v
    with pytest.raises(ValueError):
        P.rf_encode(pp, 2 ** 32)
    assert P.rf_decode(pp, 2 ** 32 * pp.G1) is None


@given(c=scalars, mk=scalars)
def test_trace_algebra(pp, c, mk):
    T = mk * pp.G1
    K = c * pp.G1
    assert mk * K == c * T
