from fractions import Fraction
from itertools import permutations

import pytest

from hassett_chow.weights import parse_weights


@pytest.fixture
def W():
    return parse_weights


def brute_isomorphic(g, h):
    """Search a vertex bijection preserving tails, edges and r-structure."""
    if g.weights != h.weights or len(g.vertices) != len(h.vertices):
        return False
    gv, hv = list(g.vertices), list(h.vertices)

    def edge_set(t, vmap=None):
        out = set()
        for f, f2 in t.edges:
            a, b = t.boundary[f], t.boundary[f2]
            if vmap:
                a, b = vmap[a], vmap[b]
            out.add(frozenset((a, b)))
        return out

    target_edges = edge_set(h)
    for perm in permutations(hv):
        vmap = dict(zip(gv, perm))
        if any(g.tails_at(v) != h.tails_at(vmap[v]) for v in gv):
            continue
        if any(g.r_structure[v] != h.r_structure[vmap[v]] for v in gv):
            continue
        if edge_set(g, vmap) == target_edges:
            return True
    return False


def frac(s):
    return Fraction(s)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
