import random
import zlib
from dataclasses import dataclass

import pytest
from hypothesis import HealthCheck, settings

from silentledger import ledger as L
from silentledger.groups import setup

settings.register_profile(
    "sl", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("sl")


@pytest.fixture(scope="session")
def pp():
    return setup(128)


@pytest.fixture
def rng(request):
    return random.Random(zlib.crc32(request.node.nodeid.encode()))


@dataclass
class World:
    pp: object
    keys: L.ManagementKeys
    state: L.LedgerState
    users: list  # (LongTermAccount, UserSecret)

    @property
    def pub(self):
        return self.keys.public()

    def inputs(self, i: int):
        return [h.as_input() for h in L.wallet(self.pp, self.users[i][1], self.state)]


def build_world(pp, rng, funding=(700, 300), n_users=3) -> World:
    keys = L.mk_gen(pp, rng)
    state = L.new_ledger(keys)
    users = [L.uk_gen_and_register(pp, keys, state, rng) for _ in range(n_users)]
    for v in funding:
        L.genesis(pp, keys, users[0][0], v, state, rng)
    return World(pp, keys, state, users)


@pytest.fixture
def world(pp, rng):
    return build_world(pp, rng)


@pytest.fixture
def honest_tx(world, rng):
    """World plus one unsubmitted honest transfer alice -> (bob 999, carol 1)."""
    w = world
    tx = L.trans(w.pp, w.inputs(0), [w.users[1][0], w.users[2][0]], [999, 1], w.pub, b"memo", rng)
    return w, tx


ACCEPTANCE = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
