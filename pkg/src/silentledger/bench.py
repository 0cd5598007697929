"""Timing harness for the seven protocol algorithms plus a payee sweep."""

from __future__ import annotations

import csv
import io
import platform
import statistics
import time
from dataclasses import asdict, dataclass, field

from silentledger import groups, ledger as L
from silentledger.wire import Writer

CSV_COLUMNS = ("op", "payees", "iterations", "mean_ms", "median_ms", "stddev_ms", "bytes")
OPERATIONS = ("Setup", "MKGen", "UKGen", "AAGen", "Trans", "VerfTX", "Trace")
SWEEP_OPERATIONS = ("AAGen", "Trans", "VerfTX")
DEFAULT_ITERATIONS = 1000
DEFAULT_AMOUNT = 1_000_000
DEFAULT_PAYEES = (2, 4, 8)
DEFAULT_SWEEP_ITERATIONS = 100

# Published reference timings in ms, printed for context only.
REFERENCE_MS = {"Trans": 9.75, "VerfTX": 22.43, "Trace": 2030.0}
REFERENCE_SIZE_FORMULA = "27 + 2*log2(n) group elements"


@dataclass
class Row:
    op: str
    payees: int
    iterations: int
    mean_ms: float
    median_ms: float
    stddev_ms: float
    bytes: int = 0


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    machine: dict = field(default_factory=dict)
    tx_group_elements: int = 0
    tx_scalars: int = 0
    range_rounds: int = 0

    def row(self, op: str, payees: int = 2) -> Row:
        for r in self.rows:
            if r.op == op and r.payees == payees:
                return r
        raise KeyError((op, payees))

    def sweep(self, op: str) -> list[tuple[int, float]]:
        """(payees, mean_ms) for the sweep rows of ``op``, in payee order."""
        return sorted((r.payees, r.mean_ms) for r in self.rows if r.op == f"{op}/sweep")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.op, r.payees, r.iterations, f"{r.mean_ms:.4f}", f"{r.median_ms:.4f}",
                        f"{r.stddev_ms:.4f}", r.bytes])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "machine": self.machine,
            "rows": [asdict(r) for r in self.rows],
            "tx_group_elements": self.tx_group_elements,
            "tx_scalars": self.tx_scalars,
            "reference_ms": REFERENCE_MS,
            "reference_size_formula": REFERENCE_SIZE_FORMULA,
        }

    def table(self) -> str:
        lines = [f"{'op':<14}{'payees':>7}{'iters':>7}{'mean ms':>11}{'median':>10}{'stddev':>10}{'bytes':>8}{'ref ms':>9}"]
        for r in self.rows:
            ref = REFERENCE_MS.get(r.op)
            lines.append(
                f"{r.op:<14}{r.payees:>7}{r.iterations:>7}{r.mean_ms:>11.3f}{r.median_ms:>10.3f}"
                f"{r.stddev_ms:>10.3f}{r.bytes:>8}{(f'{ref:.2f}' if ref else '-'):>9}"
            )
        lines.append(
            f"tx wire: {self.tx_group_elements} group elements + {self.tx_scalars} scalars "
            f"(reference shape {REFERENCE_SIZE_FORMULA}, range vector n={2 ** self.range_rounds})"
        )
        lines.append("sweep rows are a proxy: k payees = k/2 independent 2-in/2-out transfers")
        lines.append(f"backend: {self.machine.get('backend')}  cpu: {self.machine.get('processor') or self.machine.get('machine')}")
        return "\n".join(lines)


def _time(fn, iterations: int) -> list[float]:
    out = []
    for _ in range(iterations):
        t0 = time.perf_counter()
        fn()
        out.append((time.perf_counter() - t0) * 1000.0)
    return out


def _row(op: str, samples: list[float], payees: int = 2, nbytes: int = 0) -> Row:
    sd = statistics.pstdev(samples) if len(samples) > 1 else 0.0
    return Row(op, payees, len(samples), statistics.fmean(samples), statistics.median(samples), sd, nbytes)


def machine_descriptor() -> dict:
    return {
        "python": platform.python_version(),
        "machine": platform.machine(),
        "processor": platform.processor(),
        "system": platform.system(),
        "backend": groups.BACKEND,
    }


def run(iterations: int = DEFAULT_ITERATIONS, payees=DEFAULT_PAYEES, amount: int = DEFAULT_AMOUNT,
        sweep_iterations: int = DEFAULT_SWEEP_ITERATIONS, rng=None) -> BenchReport:
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    sweep_iterations = max(1, min(iterations, sweep_iterations))
    pp = groups.setup()
    L.amount_table(pp)  # one-off table build is not part of a trace

    keys = L.mk_gen(pp, rng)
    pub = keys.public()
    state = L.new_ledger(keys)
    (alice, asec), (bob, _), (carol, _) = (L.uk_gen_and_register(pp, keys, state, rng) for _ in range(3))
    L.genesis(pp, keys, alice, amount, state, rng)
    L.genesis(pp, keys, alice, amount, state, rng)
    inputs = [h.as_input() for h in L.wallet(pp, asec, state)]
    out_amounts = [amount + amount // 2, amount - amount // 2]
    tx = L.trans(pp, inputs, [bob, carol], out_amounts, pub, b"bench", rng)
    if not state.check(pp, tx):
        raise RuntimeError("benchmark transaction failed validation")

    scratch = L.new_ledger(keys)
    report = BenchReport(machine=machine_descriptor())
    setup_raw = groups.setup.__wrapped__
    out_bytes = len(tx.outputs[0].write(Writer()).getvalue())

    report.rows.append(_row("Setup", _time(lambda: setup_raw(128), iterations)))
    report.rows.append(_row("MKGen", _time(lambda: L.mk_gen(pp, rng), iterations)))
    report.rows.append(_row("UKGen", _time(lambda: L.uk_gen_and_register(pp, keys, scratch, rng), iterations)))
    report.rows.append(_row("AAGen", _time(lambda: L.aa_gen(pp, amount, bob, pub, rng), iterations), nbytes=out_bytes))
    report.rows.append(_row("Trans", _time(lambda: L.trans(pp, inputs, [bob, carol], out_amounts, pub, b"bench", rng), iterations),
                            nbytes=len(tx.to_bytes())))
    report.rows.append(_row("VerfTX", _time(lambda: state.check(pp, tx), iterations), nbytes=len(tx.to_bytes())))
    report.rows.append(_row("Trace", _time(lambda: L.trace(pp, keys.mk, tx, 0, state), iterations)))

    for k in payees:
        reps = max(1, (k + 1) // 2)
        a = _time(lambda: [L.aa_gen(pp, amount, bob, pub, rng) for _ in range(k)], sweep_iterations)
        t = _time(lambda: [L.trans(pp, inputs, [bob, carol], out_amounts, pub, b"bench", rng) for _ in range(reps)], sweep_iterations)
        v = _time(lambda: [state.check(pp, tx) for _ in range(reps)], sweep_iterations)
        report.rows.append(_row("AAGen/sweep", a, k, k * out_bytes))
        report.rows.append(_row("Trans/sweep", t, k, reps * len(tx.to_bytes())))
        report.rows.append(_row("VerfTX/sweep", v, k, reps * len(tx.to_bytes())))

    report.tx_group_elements = tx.group_element_count()
    report.tx_scalars = tx.scalar_count()
    report.range_rounds = len(tx.pi2.L)
    return report
