import random

import pytest

from silentledger import rac, sok
from silentledger.groups import ORDER, LengthError, inv, random_scalar
from silentledger.sok import TX1_POINTS, TX1_SCALARS, Tx1Proof, Tx1Statement, Tx1Witness


def make_tx1(pp, rng, v_in=None, v_out=None, m=b"ctx"):
    """Independent construction of a valid (statement, witness) pair."""
    G = pp.G
    T = random_scalar(rng) * G
    if v_in is None:
        v_in = (rng.randrange(2 ** 32), rng.randrange(2 ** 32))
    if v_out is None:
        total = sum(v_in)
        a = rng.randrange(total + 1)
        v_out = (a, total - a)
    R = lambda: random_scalar(rng)  # noqa: E731
    c, s, gamma, r, c_hat = (R(), R()), (R(), R()), (R(), R()), (R(), R()), (R(), R())
    sk, _ = rac.skey_gen(pp, rng)
    S_hat, Zp, Tp, W = [], [], [], []
    for j in range(2):
        S = R() * G
        sig = rac.adapt_with(rac.sign(pp, sk, S, rng), c_hat[j], R())
        S_hat.append(S)
        Zp.append(sig.Z)
        Tp.append(sig.T_sig)
        W.append(sig.Z - c_hat[j] * sig.T_sig)
    x = Tx1Statement(
        cm=tuple(v_in[j] * G + c[j] * T for j in range(2)),
        cm_hat=tuple(v_out[j] * G + c_hat[j] * T for j in range(2)),
        Q=tuple((s[j] + c[j]) * G for j in range(2)),
        Q_hat=tuple(S_hat[j] + c_hat[j] * G for j in range(2)),
        C_hat=tuple(gamma[j] * G for j in range(2)),
        D_hat=tuple(c_hat[j] * G + gamma[j] * T for j in range(2)),
        R_hat=tuple(r[j] * G for j in range(2)),
        Z_prime=tuple(Zp), T_prime=tuple(Tp), T=T, G=G, m=m,
    )
    w = Tx1Witness(v=tuple(v_in), c=c, s=s, gamma=gamma, r=r, v_hat=tuple(v_out), c_hat=c_hat,
                   S_hat=tuple(S_hat), W=tuple(W))
    return x, w


# -- dl / bdl -----------------------------------------------------------------


def test_dl(pp, rng):
    w = random_scalar(rng)
    y = w * pp.G
    pf = sok.prove_dl(pp, pp.G, y, w, b"m", rng)
    assert sok.verify_dl(pp, pp.G, y, pf, b"m")
    assert not sok.verify_dl(pp, pp.G, y + pp.G, pf, b"m")
    assert not sok.verify_dl(pp, pp.G, y, pf, b"other")
    assert sok.DlProof.from_bytes(pf.to_bytes()) == pf
    with pytest.raises(LengthError):
        sok.DlProof.from_bytes(pf.to_bytes()[:-1])


def test_dl_zero_witness(pp, rng):
    y = 0 * pp.G
    assert sok.verify_dl(pp, pp.G, y, sok.prove_dl(pp, pp.G, y, 0, b"", rng), b"")


def test_dl_wrong_witness_refused(pp, rng):
    with pytest.raises(ValueError):
        sok.prove_dl(pp, pp.G, 5 * pp.G, 6)


def test_bdl(pp, rng):
    base = random_scalar(rng) * pp.G
    w, a, b = random_scalar(rng), random_scalar(rng), random_scalar(rng)
    y1, y2 = w * base, ((a * w + b) % ORDER) * base
    pf = sok.prove_bdl(pp, base, y1, y2, w, a, b, b"m", rng)
    assert sok.verify_bdl(pp, base, y1, y2, a, b, pf, b"m")
    assert not sok.verify_bdl(pp, base, y1, y2, a, b + 1, pf, b"m")
    assert not sok.verify_bdl(pp, base, y1, y2 + base, a, b, pf, b"m")
    # a=1, b=0: equality of discrete logs
    pf = sok.prove_bdl(pp, base, y1, y1, w, 1, 0, b"", rng)
    assert sok.verify_bdl(pp, base, y1, y1, 1, 0, pf)
    with pytest.raises(ValueError):
        sok.prove_bdl(pp, base, y1, y2, w, a, b + 1)


# -- tx1 ----------------------------------------------------------------------


def test_relation_check(pp, rng):
    x, w = make_tx1(pp, rng)
    assert sok.tx1_relation_holds(pp, x, w)
    bad = Tx1Witness(**{**w.__dict__, "v": (w.v[0] + 1, w.v[1])})
    assert not sok.tx1_relation_holds(pp, x, bad)
    with pytest.raises(ValueError):
        sok.prove_tx1(pp, x, bad, rng)


def test_completeness_500(pp):
    rng = random.Random(500)
    for _ in range(500):
        x, w = make_tx1(pp, rng)
        assert sok.verify_tx1(pp, x, sok.prove_tx1(pp, x, w, rng))


def test_zero_amounts(pp, rng):
    x, w = make_tx1(pp, rng, (0, 0), (0, 0))
    assert sok.verify_tx1(pp, x, sok.prove_tx1(pp, x, w, rng))


def test_imbalance_is_not_a_witness(pp, rng):
    with pytest.raises(ValueError):
        x, w = make_tx1(pp, rng, (3, 5), (6, 3))
        sok.prove_tx1(pp, x, w, rng)


def test_response_mutation_sweep(pp, rng):
    x, w = make_tx1(pp, rng)
    pf = sok.prove_tx1(pp, x, w, rng)
    for name in ("e",) + TX1_SCALARS:
        bad = pf.replace(**{name: (getattr(pf, name) + 1) % ORDER})
        assert not sok.verify_tx1(pp, x, bad), name
    for name in TX1_POINTS:
        bad = pf.replace(**{name: getattr(pf, name) + pp.G})
        assert not sok.verify_tx1(pp, x, bad), name


def test_statement_binding_sweep(pp, rng):
    x, w = make_tx1(pp, rng)
    pf = sok.prove_tx1(pp, x, w, rng)
    for name in ("cm", "cm_hat", "Q", "Q_hat", "C_hat", "D_hat", "R_hat", "Z_prime", "T_prime"):
        for j in range(2):
            pair = list(getattr(x, name))
            pair[j] = pair[j] + pp.G
            assert not sok.verify_tx1(pp, x.replace(**{name: tuple(pair)}), pf), (name, j)
    assert not sok.verify_tx1(pp, x.replace(T=x.T + pp.G), pf)
    assert not sok.verify_tx1(pp, x.replace(G=2 * pp.G), pf)
    assert not sok.verify_tx1(pp, x.replace(m=x.m + b"!"), pf)


def test_transplant_example(pp, rng):
    x, w = make_tx1(pp, rng)
    pf = sok.prove_tx1(pp, x, w, rng)
    moved = x.replace(cm=(x.cm[0] + pp.G, x.cm[1]))
    assert not sok.verify_tx1(pp, moved, pf)


def test_special_soundness_c1_c3(pp, rng):
    for _ in range(10):
        x, w = make_tx1(pp, rng)
        blinds, _ = sok.tx1_commit(pp, x, rng)
        e1, e2 = random_scalar(rng), random_scalar(rng)
        p1, p2 = sok.tx1_respond(w, blinds, e1), sok.tx1_respond(w, blinds, e2)
        d = inv(e2 - e1)
        assert (p1.z_v1 - p2.z_v1) * d % ORDER == w.v[0]
        assert (p1.z_c1 - p2.z_c1) * d % ORDER == w.c[0]
        assert (p1.z_sc1 - p2.z_sc1) * d % ORDER == (w.s[0] + w.c[0]) % ORDER
        # group responses extract the same way
        assert (d * (p1.Z_S1 - p2.Z_S1)) == w.S_hat[0]


def test_interactive_transcript_verifies(pp, rng):
    x, w = make_tx1(pp, rng)
    blinds, commitments = sok.tx1_commit(pp, x, rng)
    e = sok.tx1_challenge(x, commitments)
    assert sok.verify_tx1(pp, x, sok.tx1_respond(w, blinds, e))
    assert not sok.verify_tx1(pp, x, sok.tx1_respond(w, blinds, e + 1))


def test_fiat_shamir_determinism(pp, rng):
    x, w = make_tx1(pp, rng)
    a = sok.prove_tx1(pp, x, w, random.Random(9))
    b = sok.prove_tx1(pp, x, w, random.Random(9))
    assert a.to_bytes() == b.to_bytes()
    assert a.to_bytes() != sok.prove_tx1(pp, x, w, random.Random(10)).to_bytes()


def test_proof_serialization(pp, rng):
    x, w = make_tx1(pp, rng)
    pf = sok.prove_tx1(pp, x, w, rng)
    blob = pf.to_bytes()
    assert len(blob) == Tx1Proof.ENCODED_LEN == 16 * 32 + 4 * 48
    assert blob[:32] == pf.e.to_bytes(32, "big")
    assert blob[32:64] == pf.z_v1.to_bytes(32, "big")
    assert blob[-48:] == pf.Z_W2.to_bytes()
    assert Tx1Proof.from_bytes(blob) == pf
    with pytest.raises(LengthError):
        Tx1Proof.from_bytes(blob[:-1])
