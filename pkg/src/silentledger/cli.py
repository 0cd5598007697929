"""Command-line front end.

Exit codes: 0 ok, 1 refused request, 2 usage, 3 missing file,
4 malformed input, 5 transaction rejected, 6 trace found nothing.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from silentledger import bench as bench_mod
from silentledger import ledger as L
from silentledger.groups import CURVE_ID, DecodeError, PublicParams, decode_g1, setup
from silentledger.wire import Reader, Writer

EXIT_OK, EXIT_REFUSED, EXIT_MISSING, EXIT_MALFORMED, EXIT_REJECTED, EXIT_NOT_FOUND = 0, 1, 3, 4, 5, 6

PP_MAGIC = b"SLPP"
KEYS_MAGIC = b"SLKEYS"
USER_MAGIC = b"SLUSER"
FILE_VERSION = 1


class CliError(Exception):
    def __init__(self, code: int, reason: str):
        super().__init__(reason)
        self.code = code
        self.reason = reason


# -- file formats -------------------------------------------------------------


def _read(path: str) -> bytes:
    if not os.path.exists(path):
        raise CliError(EXIT_MISSING, f"missing file: {path}")
    with open(path, "rb") as f:
        return f.read()


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as f:
        f.write(data)


def _open(data: bytes, magic: bytes, what: str) -> Reader:
    r = Reader(data)
    if data[: len(magic)] != magic:
        raise CliError(EXIT_MALFORMED, f"not a {what} file")
    r.take(len(magic))
    if r.u16() != FILE_VERSION:
        raise CliError(EXIT_MALFORMED, f"unsupported {what} file version")
    return r


def encode_pp(pp: PublicParams) -> bytes:
    return Writer().raw(PP_MAGIC).u16(FILE_VERSION).blob16(pp.curve_id.encode()).point(pp.G1, pp.G2).getvalue()


def load_pp(path: str | None) -> PublicParams:
    pp = setup(128)
    if path is None:
        return pp
    r = _open(_read(path), PP_MAGIC, "parameter")
    curve = r.blob16().decode("ascii", "replace")
    G1, G2 = r.g1(), r.g2()
    r.finish()
    if curve != CURVE_ID or G1 != pp.G1 or G2 != pp.G2:
        raise CliError(EXIT_MALFORMED, "parameter file does not match supported curve")
    return pp


def encode_keys(keys: L.ManagementKeys) -> bytes:
    return Writer().raw(KEYS_MAGIC).u16(FILE_VERSION).scalar(keys.mk, keys.x).getvalue()


def load_keys(pp: PublicParams, path: str) -> L.ManagementKeys:
    r = _open(_read(path), KEYS_MAGIC, "key")
    mk, x = r.scalar(), r.scalar()
    r.finish()
    return L.ManagementKeys(mk, mk * pp.G, x, x * pp.G2)


def encode_user(secret: L.UserSecret) -> bytes:
    return Writer().raw(USER_MAGIC).u16(FILE_VERSION).scalar(secret.sk, secret.vk).getvalue()


def load_user(path: str) -> L.UserSecret:
    r = _open(_read(path), USER_MAGIC, "user")
    sk, vk = r.scalar(), r.scalar()
    r.finish()
    return L.UserSecret(sk, vk)


def load_ledger(pp: PublicParams, path: str) -> L.LedgerState:
    data = _read(path)
    try:
        return L.LedgerState.from_bytes(pp, data)
    except L.LedgerError as exc:
        raise CliError(EXIT_MALFORMED, str(exc)) from None


def load_tx(path: str) -> L.Transaction:
    try:
        return L.Transaction.from_bytes(_read(path))
    except DecodeError as exc:
        raise CliError(EXIT_MALFORMED, f"malformed transaction: {exc}") from None


def _resolve_payee(pp: PublicParams, state: L.LedgerState, ref: str) -> L.LongTermAccount:
    """A payee is a hex long-term address or a user file (its public half is used)."""
    if os.path.exists(ref):
        S = load_user(ref).sk * pp.G
    else:
        try:
            S = decode_g1(bytes.fromhex(ref))
        except ValueError:
            raise CliError(EXIT_MISSING, f"payee not found: {ref}") from None
    acct = state.lookup(S)
    if acct is None:
        raise CliError(EXIT_REFUSED, f"payee is not registered: {S.to_bytes().hex()}")
    return acct


# -- commands -----------------------------------------------------------------


def cmd_setup(a, pp):
    _write(a.pp, encode_pp(setup(a.security)))
    return {"pp": a.pp, "curve": CURVE_ID}


def cmd_auditor_keygen(a, pp):
    keys = L.mk_gen(pp)
    _write(a.keys, encode_keys(keys))
    L.new_ledger(keys).save(a.ledger)
    return {"keys": a.keys, "ledger": a.ledger, "T": keys.T.to_bytes().hex(), "X": keys.X.to_bytes().hex()}


def cmd_register(a, pp):
    keys = load_keys(pp, a.keys)
    state = load_ledger(pp, a.ledger)
    try:
        acct, secret = L.uk_gen_and_register(pp, keys, state)
    except L.RegistrationError as exc:
        raise CliError(EXIT_REFUSED, str(exc)) from None
    _write(a.out, encode_user(secret))
    state.save(a.ledger)
    return {"user": a.out, "S": acct.S.to_bytes().hex()}


def cmd_genesis(a, pp):
    keys = load_keys(pp, a.keys)
    state = load_ledger(pp, a.ledger)
    payee = _resolve_payee(pp, state, a.to)
    try:
        out = L.genesis(pp, keys, payee, a.amount, state)
    except (L.ProtocolError, L.RegistrationError) as exc:
        raise CliError(EXIT_REFUSED, str(exc)) from None
    state.save(a.ledger)
    return {"Q": out.Q.to_bytes().hex(), "amount": a.amount}


def cmd_pay(a, pp):
    state = load_ledger(pp, a.ledger)
    me = load_user(a.from_)
    if not 1 <= len(a.to) <= 2 or len(a.amount) != len(a.to):
        raise CliError(EXIT_REFUSED, "give one or two --to, each with an --amount")
    owned = sorted(L.wallet(pp, me, state), key=lambda h: h.v, reverse=True)
    if len(owned) < 2:
        raise CliError(EXIT_REFUSED, "need two unspent outputs to build a 2-in/2-out transfer")
    inputs = [h.as_input() for h in owned[:2]]
    total = sum(i.v for i in inputs)
    payees = [_resolve_payee(pp, state, t) for t in a.to]
    amounts = list(a.amount)
    if len(payees) == 1:
        payees.append(state.lookup(me.sk * pp.G))
        amounts.append(total - amounts[0])
    if amounts[-1] < 0 or sum(amounts) != total:
        raise CliError(EXIT_REFUSED, f"amounts must sum to the selected inputs ({total})")
    try:
        tx = L.trans(pp, inputs, payees, amounts, state.pub, a.memo.encode())
    except L.ProtocolError as exc:
        raise CliError(EXIT_REFUSED, str(exc)) from None
    _write(a.out, tx.to_bytes())
    return {"tx": a.out, "txid": tx.txid, "inputs": [i.v for i in inputs], "amounts": amounts}


def cmd_verify(a, pp):
    state = load_ledger(pp, a.ledger)
    tx = load_tx(a.tx)
    verdict = state.check(pp, tx) if a.dry_run else L.verf_tx(pp, state.pub, tx, state)
    if not verdict:
        raise CliError(EXIT_REJECTED, verdict.reason)
    if not a.dry_run:
        state.save(a.ledger)
    return {"status": "accepted", "txid": tx.txid}


def cmd_trace(a, pp):
    keys = load_keys(pp, a.keys)
    state = load_ledger(pp, a.ledger)
    if a.tx:
        tx = load_tx(a.tx)
    else:
        if not -len(state.log) <= a.log_index < len(state.log):
            raise CliError(EXIT_NOT_FOUND, "no such logged transaction")
        tx = state.log[a.log_index]
    idx = [a.output] if a.output is not None else [0, 1]
    results = []
    for j in idx:
        try:
            r = L.trace(pp, keys.mk, tx, j, state)
        except L.TraceError:
            raise CliError(EXIT_NOT_FOUND, f"not-found: output {j} carries no in-range amount") from None
        if not r.registered:
            raise CliError(EXIT_NOT_FOUND, f"unknown-S: output {j} resolves to {r.S.to_bytes().hex()}")
        results.append({"output": j, "S": r.S.to_bytes().hex(), "v": r.v})
    return {"txid": tx.txid, "outputs": results}


def cmd_scan(a, pp):
    state = load_ledger(pp, a.ledger)
    me = load_user(a.user)
    hits = L.wallet(pp, me, state, unspent_only=not a.all)
    rows = [{"Q": h.output.Q.to_bytes().hex(), "v": h.v, "spent": state.is_spent(h.output.Q)} for h in hits]
    return {"outputs": rows, "balance": sum(r["v"] for r in rows if not r["spent"])}


def _payee_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("payees must be a comma-separated list of integers") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("payee counts must be >= 1")
    return vals


def cmd_bench(a, pp):
    report = bench_mod.run(a.iters, a.payees, a.amount, a.sweep_iters)
    if a.csv_out:
        with open(a.csv_out, "w", newline="") as f:
            f.write(report.to_csv())
    if not a.json:
        print(report.table())
        return None
    return report.to_dict()


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--pp", help="public parameter file")

    p = argparse.ArgumentParser(prog="silentledger", description="Auditable private transfers over BLS12-381.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("setup", parents=[common], help="write public parameters")
    s.add_argument("--security", type=int, default=128)
    s.set_defaults(func=cmd_setup, pp_required=True)

    s = sub.add_parser("auditor-keygen", parents=[common], help="auditor keys and an empty ledger")
    s.add_argument("--keys", required=True)
    s.add_argument("--ledger", required=True)
    s.set_defaults(func=cmd_auditor_keygen)

    s = sub.add_parser("register", parents=[common], help="create and certify a long-term account")
    s.add_argument("--keys", required=True)
    s.add_argument("--ledger", required=True)
    s.add_argument("--out", required=True, help="user secret file to write")
    s.set_defaults(func=cmd_register)

    s = sub.add_parser("genesis", parents=[common], help="mint an output for a registered user")
    s.add_argument("--keys", required=True)
    s.add_argument("--ledger", required=True)
    s.add_argument("--to", required=True, help="hex long-term address or user file")
    s.add_argument("--amount", type=int, required=True)
    s.set_defaults(func=cmd_genesis)

    s = sub.add_parser("pay", parents=[common], help="build a 2-in/2-out transfer")
    s.add_argument("--ledger", required=True)
    s.add_argument("--from", dest="from_", required=True, help="payer user file")
    s.add_argument("--to", action="append", required=True)
    s.add_argument("--amount", type=int, action="append", required=True)
    s.add_argument("--memo", default="")
    s.add_argument("--out", required=True, help="transaction file to write")
    s.set_defaults(func=cmd_pay)

    s = sub.add_parser("verify", parents=[common], help="validate a transaction and append it")
    s.add_argument("--ledger", required=True)
    s.add_argument("--tx", required=True)
    s.add_argument("--dry-run", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("trace", parents=[common], help="auditor: recover payee and amount")
    s.add_argument("--keys", required=True)
    s.add_argument("--ledger", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--tx")
    g.add_argument("--log-index", type=int, default=-1)
    s.add_argument("--output", type=int, choices=(0, 1))
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("scan", parents=[common], help="payee: list owned outputs")
    s.add_argument("--ledger", required=True)
    s.add_argument("--user", required=True)
    s.add_argument("--all", action="store_true", help="include spent outputs")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("bench", parents=[common], help="time the protocol algorithms")
    s.add_argument("--iters", type=_positive, default=bench_mod.DEFAULT_ITERATIONS)
    s.add_argument("--sweep-iters", type=_positive, default=bench_mod.DEFAULT_SWEEP_ITERATIONS)
    s.add_argument("--payees", type=_payee_list, default=bench_mod.DEFAULT_PAYEES)
    s.add_argument("--amount", type=int, default=bench_mod.DEFAULT_AMOUNT)
    s.add_argument("--csv-out")
    s.set_defaults(func=cmd_bench)
    return p


def _emit(args, payload: dict, stream=None) -> None:
    stream = stream or sys.stdout
    if args.json:
        print(json.dumps(payload, sort_keys=True), file=stream)
        return
    if "status" in payload:
        reason = payload.get("reason")
        print(f"{payload['status']}: {reason}" if reason else payload["status"], file=stream)
    for k, v in payload.items():
        if k in ("status", "reason"):
            continue
        if k == "outputs" and isinstance(v, list):
            for row in v:
                print("  " + " ".join(f"{rk}={rv}" for rk, rv in row.items()), file=stream)
        else:
            print(f"{k}: {v}", file=stream)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "pp_required", False):
            if not args.pp:
                raise CliError(2, "--pp is required")
            if args.security != 128:
                raise CliError(EXIT_REFUSED, f"unsupported security level: {args.security}")
            pp = None
        else:
            pp = load_pp(args.pp)
        payload = args.func(args, pp)
    except CliError as exc:
        _emit(args, {"status": "rejected" if exc.code == EXIT_REJECTED else "error", "reason": exc.reason},
              sys.stdout if exc.code == EXIT_REJECTED else sys.stderr)
        return exc.code
    except DecodeError as exc:
        _emit(args, {"status": "error", "reason": f"malformed: {exc}"}, sys.stderr)
        return EXIT_MALFORMED
    if payload is not None:
        _emit(args, payload)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
