import csv
import io
import random

import pytest

from silentledger import bench


@pytest.fixture(scope="module")
def report():
    return bench.run(iterations=1, payees=(2, 4, 8), sweep_iterations=1, rng=random.Random(3))


def test_single_iteration_has_zero_spread(report):
    for op in bench.OPERATIONS:
        r = report.row(op)
        assert r.iterations == 1
        assert r.stddev_ms == 0.0
        assert r.mean_ms == r.median_ms > 0


def test_csv_schema(report):
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    assert tuple(rows[0]) == bench.CSV_COLUMNS
    ops = [r[0] for r in rows[1:]]
    assert ops[:7] == list(bench.OPERATIONS)
    assert ops.count("Trans/sweep") == 3
    for r in rows[1:]:
        assert len(r) == len(bench.CSV_COLUMNS)
        float(r[3]), float(r[4]), float(r[5])
        assert int(r[1]) >= 1 and int(r[2]) >= 1


def test_sizes_and_table(report):
    assert report.tx_group_elements == 42 and report.tx_scalars == 21
    assert report.row("Trans").bytes == report.row("VerfTX").bytes > 0
    text = report.table()
    assert "Trace" in text and "27 + 2*log2(n)" in text
    d = report.to_dict()
    assert d["reference_ms"]["Trans"] == 9.75 and len(d["rows"]) == len(report.rows)


def test_sweep_bytes_monotone(report):
    for op in bench.SWEEP_OPERATIONS:
        sizes = [report.row(f"{op}/sweep", k).bytes for k in (2, 4, 8)]
        assert sizes == sorted(sizes) and sizes[0] < sizes[-1]
    means = [m for _, m in report.sweep("AAGen")]
    assert means[0] < means[-1]


def test_bad_iterations():
    with pytest.raises(ValueError):
        bench.run(iterations=0)
    with pytest.raises(KeyError):
        bench.BenchReport().row("Trans")
