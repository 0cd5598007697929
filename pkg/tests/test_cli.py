import json
import os
import subprocess
import sys

import pytest

from silentledger.cli import main


@pytest.fixture
def run(capsys):
    def _run(*argv):
        rc = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return rc, out, err
    return _run


def _json(run, *argv):
    rc, out, err = run(*argv, "--json")
    assert rc == 0, err
    return json.loads(out)


def test_scripted_session(run, tmp_path):
    d = tmp_path
    pp, keys, led = d / "pp.bin", d / "auditor.keys", d / "ledger.bin"
    assert run("setup", "--pp", pp)[0] == 0
    assert run("auditor-keygen", "--pp", pp, "--keys", keys, "--ledger", led)[0] == 0
    users = {}
    for name in ("alice", "bob", "carol"):
        users[name] = _json(run, "register", "--pp", pp, "--keys", keys, "--ledger", led, "--out", d / name)["S"]
    for v in (700, 300):
        _json(run, "genesis", "--pp", pp, "--keys", keys, "--ledger", led, "--to", d / "alice", "--amount", v)

    rc, _, err = run("pay", "--ledger", led, "--from", d / "alice", "--to", d / "bob", "--to", d / "carol",
                     "--amount", 600, "--amount", 500, "--out", d / "bad.tx")
    assert rc == 1 and "sum" in err

    p = _json(run, "pay", "--ledger", led, "--from", d / "alice", "--to", users["bob"], "--to", d / "carol",
              "--amount", 600, "--amount", 400, "--memo", "rent", "--out", d / "tx.bin")
    assert p["amounts"] == [600, 400]

    # memo byte flipped: the proof no longer binds the message
    raw = (d / "tx.bin").read_bytes()
    (d / "tampered.bin").write_bytes(raw[:-1] + bytes([raw[-1] ^ 1]))
    rc, out, _ = run("verify", "--ledger", led, "--tx", d / "tampered.bin")
    assert rc == 5 and out.strip() == "rejected: sok-challenge-mismatch"

    assert run("verify", "--ledger", led, "--tx", d / "tx.bin", "--dry-run")[0] == 0
    rc, out, _ = run("verify", "--ledger", led, "--tx", d / "tx.bin")
    assert rc == 0 and out.startswith("accepted")
    rc, out, _ = run("verify", "--ledger", led, "--tx", d / "tx.bin")
    assert rc == 5 and "double-spend" in out

    t = _json(run, "trace", "--keys", keys, "--ledger", led, "--log-index", 0)
    assert [(o["S"], o["v"]) for o in t["outputs"]] == [(users["bob"], 600), (users["carol"], 400)]
    t = _json(run, "trace", "--keys", keys, "--ledger", led, "--tx", d / "tx.bin", "--output", 1)
    assert t["outputs"] == [{"output": 1, "S": users["carol"], "v": 400}]

    other_led = d / "other.bin"
    assert run("auditor-keygen", "--keys", d / "other.keys", "--ledger", other_led)[0] == 0
    rc, _, err = run("trace", "--keys", d / "other.keys", "--ledger", led, "--log-index", 0)
    assert rc == 6
    assert run("trace", "--keys", keys, "--ledger", led, "--log-index", 5)[0] == 6

    assert _json(run, "scan", "--ledger", led, "--user", d / "bob")["balance"] == 600
    assert _json(run, "scan", "--ledger", led, "--user", d / "alice")["balance"] == 0
    assert len(_json(run, "scan", "--ledger", led, "--user", d / "alice", "--all")["outputs"]) == 2

    # bob pays carol with change back to himself: needs two outputs
    rc, _, err = run("pay", "--ledger", led, "--from", d / "bob", "--to", d / "carol", "--amount", 1, "--out", d / "x")
    assert rc == 1 and "two unspent" in err
    _json(run, "genesis", "--keys", keys, "--ledger", led, "--to", d / "bob", "--amount", 5)
    p = _json(run, "pay", "--ledger", led, "--from", d / "bob", "--to", d / "carol", "--amount", 100, "--out", d / "tx2.bin")
    assert p["amounts"] == [100, 505]
    assert run("verify", "--ledger", led, "--tx", d / "tx2.bin")[0] == 0
    assert _json(run, "scan", "--ledger", led, "--user", d / "carol")["balance"] == 500
    assert _json(run, "scan", "--ledger", led, "--user", d / "bob")["balance"] == 505


def test_error_codes(run, tmp_path):
    d = tmp_path
    keys, led = d / "k", d / "l"
    assert run("auditor-keygen", "--keys", keys, "--ledger", led)[0] == 0
    assert run("verify", "--ledger", led, "--tx", d / "nope")[0] == 3
    assert run("register", "--keys", d / "missing", "--ledger", led, "--out", d / "u")[0] == 3
    (d / "junk.tx").write_bytes(b"\x01" * 100)
    assert run("verify", "--ledger", led, "--tx", d / "junk.tx")[0] == 4
    (d / "junk.led").write_bytes(b"garbage")
    assert run("scan", "--ledger", d / "junk.led", "--user", keys)[0] == 4
    assert run("scan", "--ledger", led, "--user", keys)[0] == 4  # key file is not a user file
    assert run("setup", "--pp", d / "pp", "--security", 80)[0] == 1
    assert run("genesis", "--keys", keys, "--ledger", led, "--to", "zz", "--amount", 1)[0] == 3
    assert run("setup")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--iters", "0"])
    assert exc.value.code == 2


def test_truncated_tx_is_malformed(run, tmp_path):
    d = tmp_path
    assert run("auditor-keygen", "--keys", d / "k", "--ledger", d / "l")[0] == 0
    for name in ("a", "b"):
        assert run("register", "--keys", d / "k", "--ledger", d / "l", "--out", d / name)[0] == 0
    for v in (1, 2):
        assert run("genesis", "--keys", d / "k", "--ledger", d / "l", "--to", d / "a", "--amount", v)[0] == 0
    assert run("pay", "--ledger", d / "l", "--from", d / "a", "--to", d / "b", "--amount", 3, "--out", d / "t")[0] == 0
    raw = (d / "t").read_bytes()
    (d / "t").write_bytes(raw[:-5])
    assert run("verify", "--ledger", d / "l", "--tx", d / "t")[0] == 4


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "silentledger.cli", "setup", "--pp", str(tmp_path / "pp"), "--json"],
                          capture_output=True, text=True, env=dict(os.environ))
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["curve"] == "BLS12-381"
