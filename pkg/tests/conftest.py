import os
import random

import pytest

from mldegree.polyring import PolyRing
from mldegree.scalar import PrimeModulus

SMALL_PRIME = PrimeModulus(32003)

# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def random_poly(ring: PolyRing, rng: random.Random, max_deg: int = 2, max_terms: int = 4):
    d = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * ring.nvars
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(ring.nvars)] += 1
        d[tuple(e)] = rng.randrange(1, ring.p)
    return ring.from_dict(d)


@pytest.fixture
def xy():
    return PolyRing(("x", "y"), SMALL_PRIME)


@pytest.fixture
def xyz():
    return PolyRing(("x", "y", "z"), SMALL_PRIME)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criteria")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MLDEGREE_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="stretch run; set MLDEGREE_STRETCH=1")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
