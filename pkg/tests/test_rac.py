import pytest
from hypothesis import given
from hypothesis import strategies as st

from silentledger import rac
from silentledger.groups import G1, ORDER, LengthError, inv, pairing, random_scalar

scalars = st.integers(min_value=0, max_value=ORDER - 1)


@pytest.fixture
def signed(pp, rng):
    ident = rac.cert_gen(pp, rng)
    sk, vk = rac.skey_gen(pp, rng)
    return ident, sk, vk, rac.sign(pp, sk, ident.C, rng)


def test_cert_gen(pp, rng):
    a, b = rac.cert_gen(pp, rng), rac.cert_gen(pp, rng)
    assert a.C != b.C
    assert a.C == a.r * pp.G1
    assert rac.rndmz(pp, a.C, 0) == a.C


def test_rndmz_arithmetic(pp):
    assert rac.rndmz(pp, 5 * pp.G1, 3) == 8 * pp.G1
    C = 11 * pp.G1
    assert rac.rndmz(pp, rac.rndmz(pp, C, 4), 9) == rac.rndmz(pp, C, 13)


def test_skey_gen(pp, rng):
    (s1, v1), (s2, _) = rac.skey_gen(pp, rng), rac.skey_gen(pp, rng)
    assert v1.X == s1.x * pp.G2
    assert s1.x != s2.x


def test_sign_verify(pp, signed):
    ident, sk, vk, sig = signed
    assert rac.verify(pp, vk, ident.C, sig)
    assert pairing(sig.T_sig, sig.S_hat) == pairing(pp.G1, vk.X)


def test_two_signatures_differ(pp, rng, signed):
    ident, sk, vk, sig = signed
    sig2 = rac.sign(pp, sk, ident.C, rng)
    for f in ("Z", "S", "S_hat", "T_sig"):
        assert getattr(sig, f) != getattr(sig2, f)
    assert rac.verify(pp, vk, ident.C, sig2)


def test_adapt(pp, rng, signed):
    ident, sk, vk, sig = signed
    r = random_scalar(rng)
    assert rac.verify(pp, vk, rac.rndmz(pp, ident.C, r), rac.adapt(sig, r, rng))
    same = rac.adapt(sig, 0, rng)
    assert same.Z != sig.Z
    assert rac.verify(pp, vk, ident.C, same)


def test_adapt_structural_relation(pp, rng, signed):
    ident, sk, vk, sig = signed
    r, s = random_scalar(rng), random_scalar(rng)
    a = rac.adapt_with(sig, r, s)
    assert s * a.Z == sig.Z + r * sig.T_sig
    assert a.S == s * sig.S and a.S_hat == s * sig.S_hat
    assert a.T_sig == inv(s) * sig.T_sig


def test_adapt_composition(pp, rng, signed):
    ident, sk, vk, sig = signed
    a, b = random_scalar(rng), random_scalar(rng)
    twice = rac.adapt(rac.adapt(sig, a, rng), b, rng)
    assert rac.verify(pp, vk, rac.rndmz(pp, ident.C, a + b), twice)


def test_mutations_rejected(pp, rng, signed):
    ident, sk, vk, sig = signed
    for _ in range(20):
        delta = random_scalar(rng)
        for f in ("Z", "S", "T_sig"):
            bad = rac.RacSignature(**{**sig.__dict__, f: getattr(sig, f) + delta * pp.G1})
            assert not rac.verify(pp, vk, ident.C, bad)
        bad = rac.RacSignature(**{**sig.__dict__, "S_hat": sig.S_hat + delta * pp.G2})
        assert not rac.verify(pp, vk, ident.C, bad)
        assert not rac.verify(pp, vk, ident.C + delta * pp.G1, sig)


def test_single_component_examples(pp, signed):
    ident, sk, vk, sig = signed
    bad = rac.RacSignature(sig.Z + pp.G1, sig.S, sig.S_hat, sig.T_sig)
    assert not rac.verify(pp, vk, ident.C, bad)
    assert not rac.verify(pp, vk, ident.C + pp.G1, sig)


def test_adversarial_inputs_do_not_raise(pp, signed):
    ident, sk, vk, sig = signed
    zero = rac.RacSignature(G1.identity(), G1.identity(), sig.S_hat * 0, G1.identity())
    assert not rac.verify(pp, vk, ident.C, zero)
    assert not rac.verify(pp, vk, ident.C, rac.RacSignature(None, None, None, None))
    assert not rac.verify(pp, vk, ident.C, rac.RacSignature(sig.Z, sig.S, sig.S, sig.T_sig))


def test_wrong_key(pp, rng, signed):
    ident, sk, vk, sig = signed
    _, other = rac.skey_gen(pp, rng)
    assert not rac.verify(pp, other, ident.C, sig)


@given(r=scalars)
def test_adapt_property(pp, signed, r):
    ident, sk, vk, sig = signed
    assert rac.verify(pp, vk, rac.rndmz(pp, ident.C, r), rac.adapt(sig, r))


def test_adapted_first_components_vary(pp, rng, signed):
    ident, sk, vk, sig = signed
    r = random_scalar(rng)
    C2 = rac.rndmz(pp, ident.C, r)
    adapted = [rac.adapt(sig, r, rng) for _ in range(5)]
    fresh = [rac.sign(pp, sk, C2, rng) for _ in range(5)]
    assert len({a.Z.to_bytes() for a in adapted}) == 5
    assert len({f.Z.to_bytes() for f in fresh}) == 5
    assert all(rac.verify(pp, vk, C2, s) for s in adapted + fresh)


def test_certificate_encoding(pp, signed):
    ident, sk, vk, sig = signed
    blob = rac.encode_certificate(ident.C, sig)
    assert len(blob) == 4 * 48 + 96
    C, s2 = rac.decode_certificate(blob)
    assert C == ident.C and s2 == sig
    assert blob[:48] == ident.C.to_bytes() and blob[48:96] == sig.Z.to_bytes()
    with pytest.raises(LengthError):
        rac.decode_certificate(blob[:-1])
