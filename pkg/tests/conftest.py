import functools

import pytest

from anosov_lie.families import build_family

GOLDEN = "x^2-3x+1"
CUBIC = "x^3+x^2-2x-1"

# unit choices every family is exercised with
SHIPPED = {
    "type-pq": [(GOLDEN, CUBIC), (CUBIC, GOLDEN), (GOLDEN, "x^2-x-1")],
    "bipartite": [(GOLDEN, CUBIC)],
    "three-unit-2step": [(GOLDEN, "x^2-4x+1", "x^2-5x+1")],
    "three-unit-3step": [(GOLDEN, "x^2-4x+1", "x^2-5x+1")],
    "p2": [(GOLDEN, "x^2-x-1"), (GOLDEN, CUBIC)],
    "dim13": [(GOLDEN, CUBIC)],
    "dim16": [(GOLDEN, CUBIC)],
}

SHIPPED_UNITS = sorted({p for choices in SHIPPED.values() for args in choices for p in args})


@functools.lru_cache(maxsize=None)
def built(family, args):
    return build_family(family, args)


@pytest.fixture
def build():
    return built


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
