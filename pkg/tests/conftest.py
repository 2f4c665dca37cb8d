import itertools
from fractions import Fraction

import pytest

from normlap import digraph as dg
from normlap.generators import bidirected_from_graph, rotational_tournament


@pytest.fixture
def c3():
    return dg.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def k3():
    return bidirected_from_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3():
    return dg.from_arcs(3, [(0, 1), (1, 2)])


@pytest.fixture
def t5():
    return rotational_tournament(5, [1, 2])


def ternary_separations(g):
    """Literal 3^n scan: label every vertex Y, Z or neither and keep valid separations."""
    out = []
    for labels in itertools.product("YZ-", repeat=g.n):
        y = frozenset(v for v, c in enumerate(labels) if c == "Y")
        z = frozenset(v for v, c in enumerate(labels) if c == "Z")
        if y and z and not any(g.has_arc(a, b) for a in z for b in y):
            out.append((y, z))
    return out


def ternary_max_lhs(g):
    n = g.n
    return max((Fraction(len(y) * len(z), (n - len(y)) * (n - len(z))) for y, z in ternary_separations(g)),
               default=Fraction(0))


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash[_ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
