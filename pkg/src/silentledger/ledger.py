"""Protocol orchestration: keys, registration, accounts, transfers, audit.

Roles are kept apart by signature. Building a transaction needs only the
payees' public accounts; tracing needs only the auditor's ``mk`` and chain
data; scanning needs only the payee's own secrets and chain data.
"""

from __future__ import annotations

import hashlib
import os
import threading
from dataclasses import dataclass, field

from silentledger import rac
from silentledger.groups import (
    BACKEND,
    ORDER,
    DecodeError,
    PublicParams,
    bsgs_table,
    random_scalar,
)
from silentledger.primitives import (
    ElGamalCiphertext,
    ake_shared,
    of_map,
    pke_decrypt,
    pke_encrypt,
    rf_encode,
    ske_decrypt,
)
from silentledger.rangeproof import (
    RangeProof,
    RangeStatement,
    RangeWitness,
    aggregate_prove,
    aggregate_verify,
    forge_range_transcript,
)
from silentledger.sok import (
    DlProof,
    Tx1Proof,
    Tx1Statement,
    Tx1Witness,
    prove_dl,
    prove_tx1,
    tx1_challenge,
    tx1_commit,
    tx1_respond,
    verify_dl,
    verify_tx1,
)
from silentledger.wire import Reader, Writer

AMOUNT_BITS = 33  # proves v < 2^32
AMOUNT_BOUND = 1 << (AMOUNT_BITS - 1)
REGISTER_CONTEXT = b"SL/register"
GENESIS_CONTEXT = b"SL/genesis"

# Larger baby-step table for the protocol tracer: ~2^12 giant steps per solve.
_NATIVE_BABY_STEPS = 1 << 20


def amount_table(pp: PublicParams):
    baby = _NATIVE_BABY_STEPS if BACKEND == "native" else 0
    return bsgs_table(pp.G, AMOUNT_BOUND, baby)


class ProtocolError(ValueError):
    """A request the local party refuses to build (imbalance, range, etc.)."""


class RegistrationError(ValueError):
    pass


class TraceError(LookupError):
    """BSGS found no amount in range: the output is malformed."""


# -- keys and accounts --------------------------------------------------------


@dataclass(frozen=True)
class AuditorPublic:
    T: object
    X: object

    def to_bytes(self) -> bytes:
        return Writer().point(self.T, self.X).getvalue()

    @classmethod
    def read(cls, r: Reader) -> "AuditorPublic":
        return cls(r.g1(), r.g2())


@dataclass(frozen=True)
class ManagementKeys:
    mk: int
    T: object
    x: int
    X: object

    def public(self) -> AuditorPublic:
        return AuditorPublic(self.T, self.X)

    @property
    def signing_key(self) -> rac.SigningKey:
        return rac.SigningKey(self.x)

    @property
    def verif_key(self) -> rac.VerifKey:
        return rac.VerifKey(self.X)


def mk_gen(pp: PublicParams, rng=None) -> ManagementKeys:
    mk = random_scalar(rng)
    sk, vk = rac.skey_gen(pp, rng)
    return ManagementKeys(mk, mk * pp.G, sk.x, vk.X)


@dataclass(frozen=True)
class LongTermAccount:
    S: object
    V: object
    sigma: rac.RacSignature

    def write(self, w: Writer) -> Writer:
        return w.point(self.S, self.V).raw(self.sigma.to_bytes())

    @classmethod
    def read(cls, r: Reader) -> "LongTermAccount":
        return cls(r.g1(), r.g1(), rac.RacSignature.from_bytes(r.take(rac.RacSignature.ENCODED_LEN)))


@dataclass(frozen=True)
class UserSecret:
    sk: int  # S = sk*G
    vk: int  # V = vk*G

    def public(self, pp: PublicParams) -> tuple:
        return self.sk * pp.G, self.vk * pp.G


@dataclass(frozen=True)
class RegistrationRequest:
    S: object
    V: object
    proof: DlProof  # knowledge of sk, bound to V


@dataclass(frozen=True)
class Registration:
    account: LongTermAccount
    proof: DlProof

    def to_bytes(self) -> bytes:
        return self.account.write(Writer()).raw(self.proof.to_bytes()).getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Registration":
        r = Reader(data)
        acct = LongTermAccount.read(r)
        pf = DlProof.from_bytes(r.take(64))
        r.finish()
        return cls(acct, pf)


def _register_msg(V) -> bytes:
    return REGISTER_CONTEXT + V.to_bytes()


def uk_gen(pp: PublicParams, rng=None) -> tuple[UserSecret, RegistrationRequest]:
    ident = rac.cert_gen(pp, rng)
    vk = random_scalar(rng)
    V = vk * pp.G
    proof = prove_dl(pp, pp.G, ident.C, ident.r, _register_msg(V), rng)
    return UserSecret(ident.r, vk), RegistrationRequest(ident.C, V, proof)


def register(pp: PublicParams, keys: ManagementKeys, req: RegistrationRequest, state: "LedgerState", rng=None) -> LongTermAccount:
    """Auditor side: check the request, certify S, publish in the directory."""
    if not verify_dl(pp, pp.G, req.S, req.proof, _register_msg(req.V)):
        raise RegistrationError("proof of key knowledge failed")
    sigma = rac.sign(pp, keys.signing_key, req.S, rng)
    acct = LongTermAccount(req.S, req.V, sigma)
    state.add_registration(pp, Registration(acct, req.proof))
    return acct


def uk_gen_and_register(pp: PublicParams, keys: ManagementKeys, state: "LedgerState", rng=None) -> tuple[LongTermAccount, UserSecret]:
    secret, req = uk_gen(pp, rng)
    return register(pp, keys, req, state, rng), secret


# -- anonymous accounts -------------------------------------------------------


@dataclass(frozen=True)
class AnonymousAccount:
    Q: object
    cm: object


@dataclass(frozen=True)
class TraceBundle:
    CT: ElGamalCiphertext
    R: object


@dataclass(frozen=True)
class Output:
    """An anonymous account as published: (Q, cm), adapted certificate, trace bundle."""

    Q: object
    cm: object
    sigma: rac.RacSignature
    bundle: TraceBundle

    @property
    def account(self) -> AnonymousAccount:
        return AnonymousAccount(self.Q, self.cm)

    def write(self, w: Writer) -> Writer:
        w.point(self.Q, self.cm).raw(self.sigma.to_bytes())
        return w.point(self.bundle.CT.C, self.bundle.CT.D, self.bundle.R)

    @classmethod
    def read(cls, r: Reader) -> "Output":
        Q, cm = r.g1(), r.g1()
        sigma = rac.RacSignature.from_bytes(r.take(rac.RacSignature.ENCODED_LEN))
        C, D, R = r.g1(), r.g1(), r.g1()
        return cls(Q, cm, sigma, TraceBundle(ElGamalCiphertext(C, D), R))


@dataclass(frozen=True)
class OutputSecrets:
    v: int
    c: int
    gamma: int
    r: int
    S_hat: object
    W: object  # s'^-1 * Z of the payee's certificate


def aa_gen(pp: PublicParams, v: int, payee: LongTermAccount, pub: AuditorPublic, rng=None,
           *, bound: int = AMOUNT_BOUND) -> tuple[Output, OutputSecrets]:
    if not 0 <= v < bound:
        raise ProtocolError(f"amount {v} outside [0, {bound})")
    G = pp.G
    r = random_scalar(rng)
    R = r * G
    c = ake_shared(r, payee.V).scalar
    if c == 0:
        raise ProtocolError("degenerate shared key")
    K = of_map(pp, c)
    CT, gamma = pke_encrypt(pp, K, pub.T, rng=rng)
    Q = rac.rndmz(pp, payee.S, c)
    s_prime = random_scalar(rng)
    sigma = rac.adapt_with(payee.sigma, c, s_prime)
    cm = rf_encode(pp, v, bound) + c * pub.T
    W = sigma.Z - c * sigma.T_sig
    out = Output(Q, cm, sigma, TraceBundle(CT, R))
    return out, OutputSecrets(v, c, gamma, r, payee.S, W)


# -- transactions -------------------------------------------------------------


@dataclass(frozen=True)
class SpendInput:
    """An owned output: account plus the secrets recovered by scanning."""

    account: AnonymousAccount
    spend_key: int  # s + c, the dlog of Q
    v: int
    c: int

    @property
    def s(self) -> int:
        return (self.spend_key - self.c) % ORDER


@dataclass(frozen=True)
class Transaction:
    Q: tuple
    cm: tuple
    outputs: tuple  # two Output records
    pi1: Tx1Proof
    pi2: RangeProof
    m: bytes = b""

    def statement(self, pp: PublicParams, T) -> Tx1Statement:
        o1, o2 = self.outputs
        return Tx1Statement(
            cm=self.cm, cm_hat=(o1.cm, o2.cm), Q=self.Q, Q_hat=(o1.Q, o2.Q),
            C_hat=(o1.bundle.CT.C, o2.bundle.CT.C), D_hat=(o1.bundle.CT.D, o2.bundle.CT.D),
            R_hat=(o1.bundle.R, o2.bundle.R), Z_prime=(o1.sigma.Z, o2.sigma.Z),
            T_prime=(o1.sigma.T_sig, o2.sigma.T_sig), T=T, G=pp.G, m=self.m,
        )

    def range_statement(self, pp: PublicParams, T) -> RangeStatement:
        return RangeStatement(tuple(o.cm for o in self.outputs), AMOUNT_BITS, pp.G, T)

    def to_bytes(self) -> bytes:
        o1, o2 = self.outputs
        w = Writer().point(*self.cm, o1.cm, o2.cm, *self.Q, o1.Q, o2.Q)
        w.raw(self.pi1.to_bytes()).blob16(self.pi2.to_bytes())
        w.raw(o1.sigma.to_bytes()).raw(o2.sigma.to_bytes())
        for o in self.outputs:
            w.point(o.bundle.CT.C, o.bundle.CT.D, o.bundle.R)
        return w.blob16(self.m).getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Transaction":
        r = Reader(data)
        cm = (r.g1(), r.g1())
        cm_hat = (r.g1(), r.g1())
        Q = (r.g1(), r.g1())
        Q_hat = (r.g1(), r.g1())
        pi1 = Tx1Proof.from_bytes(r.take(Tx1Proof.ENCODED_LEN))
        pi2 = RangeProof.from_bytes(r.blob16())
        sig = [rac.RacSignature.from_bytes(r.take(rac.RacSignature.ENCODED_LEN)) for _ in range(2)]
        bundles = [TraceBundle(ElGamalCiphertext(r.g1(), r.g1()), r.g1()) for _ in range(2)]
        m = r.blob16()
        r.finish()
        outs = tuple(Output(Q_hat[j], cm_hat[j], sig[j], bundles[j]) for j in range(2))
        return cls(Q, cm, outs, pi1, pi2, m)

    @property
    def txid(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()

    def group_element_count(self) -> int:
        """Points on the wire: 8 account points, pi1, pi2, 2 certificates, 2 bundles."""
        return 8 + 4 + self.pi2.group_elements + 2 * 4 + 2 * 3

    def scalar_count(self) -> int:
        return 16 + 5


def trans(pp: PublicParams, inputs, payees, v_hat, pub: AuditorPublic, m: bytes = b"", rng=None,
          *, unchecked: bool = False) -> Transaction:
    """Build a 2-in/2-out transfer.

    ``unchecked=True`` is a test hook: it skips the local balance, range and
    witness checks so that dishonest transactions reach the validator.
    """
    if len(inputs) != 2 or len(payees) != 2 or len(v_hat) != 2:
        raise ProtocolError("2-in/2-out transactions only")
    if not unchecked:
        if sum(i.v for i in inputs) != sum(v_hat):
            raise ProtocolError("inputs and outputs do not balance")
        for i in inputs:
            if i.spend_key * pp.G != i.account.Q:
                raise ProtocolError("spend key does not match input address")
    bound = AMOUNT_BOUND if not unchecked else ORDER
    made = [aa_gen(pp, v, p, pub, rng, bound=bound) for v, p in zip(v_hat, payees)]
    outs = tuple(o for o, _ in made)
    sec = [s for _, s in made]
    tx = Transaction(tuple(i.account.Q for i in inputs), tuple(i.account.cm for i in inputs), outs, None, None, m)

    x1 = tx.statement(pp, pub.T)
    w1 = Tx1Witness(
        v=tuple(i.v for i in inputs), c=tuple(i.c for i in inputs), s=tuple(i.s for i in inputs),
        gamma=tuple(s.gamma for s in sec), r=tuple(s.r for s in sec),
        v_hat=tuple(v_hat), c_hat=tuple(s.c for s in sec),
        S_hat=tuple(s.S_hat for s in sec), W=tuple(s.W for s in sec),
    )
    x2 = tx.range_statement(pp, pub.T)
    w2 = RangeWitness(tuple(v_hat), tuple(s.c for s in sec))
    if unchecked:
        blinds, commitments = tx1_commit(pp, x1, rng)
        pi1 = tx1_respond(w1, blinds, tx1_challenge(x1, commitments))
        pi2 = forge_range_transcript(pp, x2, w2, rng)
    else:
        pi1 = prove_tx1(pp, x1, w1, rng)
        pi2 = aggregate_prove(pp, x2, w2, rng)
    return Transaction(tx.Q, tx.cm, outs, pi1, pi2, m)


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.accepted


ACCEPTED = Verdict(True)

REASONS = (
    "malformed",
    "degenerate-randomness",
    "duplicate-input",
    "double-spend",
    "unknown-input",
    "input-mismatch",
    "duplicate-output",
    "certificate-invalid",
    "sok-challenge-mismatch",
    "range-invalid",
)


@dataclass(frozen=True)
class GenesisRecord:
    output: Output
    proof: DlProof  # auditor's knowledge of mk, bound to the output bytes

    def body(self) -> bytes:
        return self.output.write(Writer()).getvalue()

    def to_bytes(self) -> bytes:
        return self.body() + self.proof.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "GenesisRecord":
        r = Reader(data)
        out = Output.read(r)
        pf = DlProof.from_bytes(r.take(64))
        r.finish()
        return cls(out, pf)


LEDGER_MAGIC = b"SLEDGER"
LEDGER_VERSION = 1
_REC_REG, _REC_GEN, _REC_TX = 1, 2, 3


class LedgerError(ValueError):
    pass


@dataclass
class LedgerState:
    """Directory, append-only log and spent set. Writes take ``lock``."""

    pub: AuditorPublic
    directory: dict = field(default_factory=dict)  # S bytes -> LongTermAccount
    log: list = field(default_factory=list)  # Transaction
    spent: set = field(default_factory=set)  # Q bytes
    outputs: dict = field(default_factory=dict)  # Q bytes -> Output
    records: list = field(default_factory=list)  # (kind, object) in append order
    lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)

    # reads

    def lookup(self, S) -> LongTermAccount | None:
        return self.directory.get(S.to_bytes())

    def known_outputs(self):
        """(origin, index, Output) for genesis records and transaction outputs."""
        for kind, obj in list(self.records):
            if kind == _REC_GEN:
                yield ("genesis", 0, obj.output)
            elif kind == _REC_TX:
                for j, o in enumerate(obj.outputs):
                    yield (obj.txid, j, o)

    def is_spent(self, Q) -> bool:
        return Q.to_bytes() in self.spent

    # writes

    def add_registration(self, pp: PublicParams, reg: Registration) -> None:
        acct = reg.account
        if not verify_dl(pp, pp.G, acct.S, reg.proof, _register_msg(acct.V)):
            raise RegistrationError("proof of key knowledge failed")
        if not rac.verify(pp, rac.VerifKey(self.pub.X), acct.S, acct.sigma):
            raise RegistrationError("certificate does not verify")
        with self.lock:
            key = acct.S.to_bytes()
            if key in self.directory:
                raise RegistrationError("duplicate long-term address")
            self.directory[key] = acct
            self.records.append((_REC_REG, reg))

    def add_genesis(self, pp: PublicParams, rec: GenesisRecord) -> None:
        o = rec.output
        if not verify_dl(pp, pp.G, self.pub.T, rec.proof, GENESIS_CONTEXT + rec.body()):
            raise LedgerError("genesis record not signed by the auditor")
        if not rac.verify(pp, rac.VerifKey(self.pub.X), o.Q, o.sigma):
            raise LedgerError("genesis certificate invalid")
        with self.lock:
            if o.Q.to_bytes() in self.outputs:
                raise LedgerError("duplicate output address")
            self.outputs[o.Q.to_bytes()] = o
            self.records.append((_REC_GEN, rec))

    def check(self, pp: PublicParams, tx: Transaction) -> Verdict:
        """Full validation against the current state, with no mutation."""
        try:
            return self._check(pp, tx)
        except (TypeError, AttributeError, ValueError):
            return Verdict(False, "malformed")

    def _check(self, pp: PublicParams, tx: Transaction) -> Verdict:
        X = rac.VerifKey(self.pub.X)
        for o in tx.outputs:
            if o.bundle.CT.C.is_identity() or o.bundle.R.is_identity():
                return Verdict(False, "degenerate-randomness")
        qk = [q.to_bytes() for q in tx.Q]
        if qk[0] == qk[1]:
            return Verdict(False, "duplicate-input")
        if any(k in self.spent for k in qk):
            return Verdict(False, "double-spend")
        for k, cm in zip(qk, tx.cm):
            known = self.outputs.get(k)
            if known is None:
                return Verdict(False, "unknown-input")
            if known.cm != cm:
                return Verdict(False, "input-mismatch")
        ok = [o.Q.to_bytes() for o in tx.outputs]
        if ok[0] == ok[1] or any(k in self.outputs for k in ok):
            return Verdict(False, "duplicate-output")
        for o in tx.outputs:
            if not rac.verify(pp, X, o.Q, o.sigma):
                return Verdict(False, "certificate-invalid")
        if not verify_tx1(pp, tx.statement(pp, self.pub.T), tx.pi1):
            return Verdict(False, "sok-challenge-mismatch")
        if not aggregate_verify(pp, tx.range_statement(pp, self.pub.T), tx.pi2):
            return Verdict(False, "range-invalid")
        return ACCEPTED

    def apply(self, pp: PublicParams, tx: Transaction) -> Verdict:
        # Crypto checks run outside the lock; state-dependent checks rerun inside.
        verdict = self.check(pp, tx)
        if not verdict:
            return verdict
        with self.lock:
            qk = [q.to_bytes() for q in tx.Q]
            if any(k in self.spent for k in qk):
                return Verdict(False, "double-spend")
            if any(o.Q.to_bytes() in self.outputs for o in tx.outputs):
                return Verdict(False, "duplicate-output")
            self.spent.update(qk)
            for o in tx.outputs:
                self.outputs[o.Q.to_bytes()] = o
            self.log.append(tx)
            self.records.append((_REC_TX, tx))
        return verdict

    # persistence

    def to_bytes(self) -> bytes:
        w = Writer().raw(LEDGER_MAGIC).u16(LEDGER_VERSION).raw(self.pub.to_bytes())
        with self.lock:
            for kind, obj in self.records:
                w.u8(kind).blob32(obj.to_bytes())
        return w.getvalue()

    @classmethod
    def from_bytes(cls, pp: PublicParams, data: bytes, *, verify: bool = False) -> "LedgerState":
        """Replay records. With ``verify`` every record is revalidated."""
        try:
            r = Reader(data)
            if r.take(len(LEDGER_MAGIC)) != LEDGER_MAGIC:
                raise LedgerError("not a ledger file")
            version = r.u16()
            if version != LEDGER_VERSION:
                raise LedgerError(f"unsupported ledger version {version}")
            state = cls(AuditorPublic.read(r))
            while not r.at_end():
                kind, body = r.u8(), r.blob32()
                state._replay(pp, kind, body, verify)
            return state
        except DecodeError as exc:
            raise LedgerError(f"corrupt ledger: {exc}") from None

    def _replay(self, pp: PublicParams, kind: int, body: bytes, verify: bool) -> None:
        if kind == _REC_REG:
            reg = Registration.from_bytes(body)
            if verify:
                self.add_registration(pp, reg)
            else:
                self.directory[reg.account.S.to_bytes()] = reg.account
                self.records.append((kind, reg))
        elif kind == _REC_GEN:
            rec = GenesisRecord.from_bytes(body)
            if verify:
                self.add_genesis(pp, rec)
            else:
                self.outputs[rec.output.Q.to_bytes()] = rec.output
                self.records.append((kind, rec))
        elif kind == _REC_TX:
            tx = Transaction.from_bytes(body)
            if verify:
                v = self.apply(pp, tx)
                if not v:
                    raise LedgerError(f"logged transaction rejected: {v.reason}")
            else:
                self.spent.update(q.to_bytes() for q in tx.Q)
                for o in tx.outputs:
                    self.outputs[o.Q.to_bytes()] = o
                self.log.append(tx)
                self.records.append((kind, tx))
        else:
            raise LedgerError(f"unknown record type {kind}")

    def save(self, path: str | os.PathLike) -> None:
        tmp = f"{os.fspath(path)}.tmp"
        with open(tmp, "wb") as f:
            f.write(self.to_bytes())
        os.replace(tmp, path)

    @classmethod
    def load(cls, pp: PublicParams, path: str | os.PathLike, *, verify: bool = False) -> "LedgerState":
        with open(path, "rb") as f:
            return cls.from_bytes(pp, f.read(), verify=verify)


def new_ledger(keys: ManagementKeys | AuditorPublic) -> LedgerState:
    pub = keys.public() if isinstance(keys, ManagementKeys) else keys
    return LedgerState(pub)


def genesis(pp: PublicParams, keys: ManagementKeys, payee: LongTermAccount, v: int, state: LedgerState, rng=None) -> Output:
    """Mint an output for a registered user. Seeds tests and demos."""
    if state.lookup(payee.S) is None:
        raise RegistrationError("payee is not registered")
    out, _ = aa_gen(pp, v, payee, keys.public(), rng)
    body = out.write(Writer()).getvalue()
    proof = prove_dl(pp, pp.G, keys.T, keys.mk, GENESIS_CONTEXT + body, rng)
    state.add_genesis(pp, GenesisRecord(out, proof))
    return out


def verf_tx(pp: PublicParams, pub: AuditorPublic, tx: Transaction, state: LedgerState) -> Verdict:
    """Validate ``tx``; on acceptance append it and mark inputs spent."""
    if pub != state.pub:
        return Verdict(False, "malformed")
    return state.apply(pp, tx)


# -- audit and receipt --------------------------------------------------------


@dataclass(frozen=True)
class TraceResult:
    S: object
    v: int
    registered: bool


def trace_output(pp: PublicParams, mk: int, output: Output, state: LedgerState | None = None) -> TraceResult:
    K = pke_decrypt(output.bundle.CT, mk)
    S = ske_decrypt(output.Q, K)
    tc = mk * K
    v = amount_table(pp).solve(output.cm - tc)
    if v is None:
        raise TraceError("amount not found in range")
    registered = state is None or state.lookup(S) is not None
    return TraceResult(S, v, registered)


def trace(pp: PublicParams, mk: int, tx: Transaction, index: int, state: LedgerState | None = None) -> TraceResult:
    return trace_output(pp, mk, tx.outputs[index], state)


@dataclass(frozen=True)
class ScanHit:
    index: int
    output: Output
    spend_key: int
    v: int
    c: int

    def as_input(self) -> SpendInput:
        return SpendInput(self.output.account, self.spend_key, self.v, self.c)


def scan_output(pp: PublicParams, secret: UserSecret, output: Output, T, index: int = 0) -> ScanHit | None:
    """Payee side: recognise an output via the shared key and open its amount."""
    c = ake_shared(secret.vk, output.bundle.R).scalar
    spend_key = (secret.sk + c) % ORDER
    if output.Q != spend_key * pp.G:
        return None
    v = amount_table(pp).solve(output.cm - c * T)
    if v is None:
        raise TraceError("owned output carries no in-range amount")
    return ScanHit(index, output, spend_key, v, c)


def scan(pp: PublicParams, secret: UserSecret, tx: Transaction, T) -> list[ScanHit]:
    hits = (scan_output(pp, secret, o, T, j) for j, o in enumerate(tx.outputs))
    return [h for h in hits if h is not None]


def wallet(pp: PublicParams, secret: UserSecret, state: LedgerState, *, unspent_only: bool = True) -> list[ScanHit]:
    """Every ledger output owned by ``secret``."""
    out = []
    for _, j, o in state.known_outputs():
        if unspent_only and state.is_spent(o.Q):
            continue
        hit = scan_output(pp, secret, o, state.pub.T, j)
        if hit is not None:
            out.append(hit)
    return out
