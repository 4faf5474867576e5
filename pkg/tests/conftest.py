from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from qovoid.gf import field_create
from qovoid.orbits import Action
from qovoid.ovoid import construct_M
from qovoid.quadric import Quadric

SEED = 20260101

_acceptance_lines: list[str] = []


@lru_cache(maxsize=None)
def field(p: int, k: int = 1):
    return field_create(p, k)


@lru_cache(maxsize=None)
def geometry(p: int, k: int = 1):
    """(quadric, action, M) for q = p**k, shared between tests."""
    quad = Quadric(field(p, k))
    action = Action(quad)
    return quad, action, construct_M(quad, action=action)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def acceptance_report():
    """Collect one line per acceptance criterion for the terminal summary."""
    def report(n: int, ok: bool, detail: str = "") -> None:
        _acceptance_lines.append("criterion %2d: %s  %s" % (n, "PASS" if ok else "FAIL", detail))
        print(_acceptance_lines[-1])
    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
