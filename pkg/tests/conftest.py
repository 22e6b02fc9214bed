from collections import deque

import pytest

from rotcost.error_model import PhysicalParams
from rotcost.ring import GATES, IDENTITY


@pytest.fixture(scope="session")
def pg3():
    return PhysicalParams(1e-3)


@pytest.fixture(scope="session")
def pg4():
    return PhysicalParams(1e-4)


def bfs_by_tcount(n_max):
    """Minimal T-count of every Clifford+T operator (mod phase) up to ``n_max``.

    0-1 breadth-first search over right multiplication by H, S (free) and T
    (cost 1), hashing exact matrices. Knows nothing about normal forms.
    """
    dist = {IDENTITY.phase_key(): 0}
    mats = {IDENTITY.phase_key(): IDENTITY}
    dq = deque([(IDENTITY, 0)])
    while dq:
        u, du = dq.popleft()
        if dist[u.phase_key()] != du:
            continue
        for g, cost in (("H", 0), ("S", 0), ("T", 1)):
            v = u @ GATES[g]
            key, nd = v.phase_key(), du + cost
            if nd > n_max:
                continue
            if key not in dist or nd < dist[key]:
                dist[key] = nd
                mats[key] = v
                (dq.appendleft if cost == 0 else dq.append)((v, nd))
    return dist, mats


@pytest.fixture(scope="session")
def bfs6():
    return bfs_by_tcount(6)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
