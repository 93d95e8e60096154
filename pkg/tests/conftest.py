from functools import lru_cache

import numpy as np
import pytest

from heckman_opdam.heat import HeatKernelEvaluator
from heckman_opdam.jacobi import build_basis
from heckman_opdam.rootsys import build_root_system

ALL_SYSTEMS = [
    ("A1", (2,)),
    ("BC1", (1, 2)),
    ("A2", (1,)),
    ("B2", (2, 2)),
    ("G2", (2, 2)),
    ("BC2", (1, 1, 1)),
]


@lru_cache(maxsize=None)
def cached_basis(name, mult, max_shell=10.0, backend="auto"):
    return build_basis(build_root_system(name, mult), max_shell, backend=backend)


@lru_cache(maxsize=None)
def cached_evaluator(name, mult, max_shell=20.0, eps=1e-8):
    return HeatKernelEvaluator(cached_basis(name, mult, max_shell), tolerance=eps)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
