import random

import numpy as np
import pytest

from hpmp.instance import from_points
from hpmp.matching import GeneralGraph

_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = "; ".join(f"{k}={v}" for k, v in report.user_properties)
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _acceptance:
        line = f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)


def random_graph(rng, n, density, with_perfect=True):
    """Random simple graph with weights in [0, 100]; optionally planted with
    a perfect matching so one is guaranteed to exist."""
    pairs = set()
    if with_perfect:
        perm = list(range(n))
        rng.shuffle(perm)
        for i in range(0, n - 1, 2):
            a, b = perm[i], perm[i + 1]
            pairs.add((min(a, b), max(a, b)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                pairs.add((i, j))
    edges = [(i, j, rng.uniform(0, 100)) for i, j in sorted(pairs)]
    return GeneralGraph.from_edges(n, edges)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def two_clusters():
    """Two tight five-point clusters 1000 apart."""
    angles = np.linspace(0, 2 * np.pi, 5, endpoint=False)
    ring = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    pts = np.vstack([ring, ring + [1000.0, 0.0]])
    return from_points(pts, name="two-clusters")
