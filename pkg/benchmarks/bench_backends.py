"""Compare the compiled and pure-Python group backends on the hot kernels.

Each backend runs in its own interpreter (the backend is fixed at import),
selected through SILENTLEDGER_BACKEND.

    python3 benchmarks/bench_backends.py [--reps N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

KERNELS = ("g1_mul", "g2_mul", "pairing", "msm_64", "hash_to_g1", "bsgs_2^20", "range_prove_n8")


def _worker(reps: int) -> dict:
    import random

    from silentledger import groups as g
    from silentledger.rangeproof import RangeStatement, RangeWitness, prove_range

    rng = random.Random(7)
    pp = g.setup()
    P, Q = pp.G1, pp.G2
    pts = [g.random_scalar(rng) * P for _ in range(64)]
    sc = [g.random_scalar(rng) for _ in range(64)]
    T = g.random_scalar(rng) * P
    c = g.random_scalar(rng)
    xr = RangeStatement((5 * P + c * T,), 9, P, T)
    wr = RangeWitness((5,), (c,))
    table = g.BsgsTable(P, 1 << 20)

    def timed(fn, n):
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        return (time.perf_counter() - t0) / n * 1000.0

    k = g.random_scalar(rng)
    target = 777_777 * P
    out = {
        "g1_mul": timed(lambda: k * P, reps),
        "g2_mul": timed(lambda: k * Q, reps),
        "pairing": timed(lambda: g.pairing(P, Q), max(1, reps // 4)),
        "msm_64": timed(lambda: g.msm(pts, sc), max(1, reps // 4)),
        "hash_to_g1": timed(lambda: g.hash_to_g1("bench", 1), reps),
        "bsgs_2^20": timed(lambda: table.solve(target), max(1, reps // 4)),
        "range_prove_n8": timed(lambda: prove_range(pp, xr, wr, rng), max(1, reps // 8)),
    }
    return {"backend": g.BACKEND, "ms": out}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=8)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    a = ap.parse_args()
    if a.worker:
        print(json.dumps(_worker(a.reps)))
        return 0

    results = {}
    for name in ("native", "python"):
        env = dict(os.environ, SILENTLEDGER_BACKEND=name)
        proc = subprocess.run([sys.executable, __file__, "--worker", "--reps", str(a.reps)],
                              env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"{name}: unavailable ({proc.stderr.strip().splitlines()[-1] if proc.stderr else 'error'})")
            continue
        results[name] = json.loads(proc.stdout)["ms"]

    print(f"{'kernel':<16}" + "".join(f"{n + ' ms':>14}" for n in results) + f"{'speedup':>10}")
    for k in KERNELS:
        row = [results[n][k] for n in results]
        speed = f"{results['python'][k] / results['native'][k]:>9.0f}x" if len(results) == 2 else ""
        print(f"{k:<16}" + "".join(f"{v:>14.3f}" for v in row) + speed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
