"""Independent brute-force oracles shared by the tests.

These enumerate subsets directly and never call the library's search
routines, so they can be used to check them.
"""
import itertools

import numpy as np
import pytest


def subsets(nodes):
    nodes = list(nodes)
    for k in range(len(nodes) + 1):
        yield from itertools.combinations(nodes, k)


def feasible_by_definition(g, s):
    s = list(s)
    if g.is_binary:
        return not any(g.adjacency[u, v] for u, v in itertools.combinations(s, 2))
    return all(sum(g.weights[u, v] for u in s) < 1 for v in s)


def enum_mwis(g, w):
    best = 0.0
    for s in subsets(range(g.n)):
        if feasible_by_definition(g, s):
            best = max(best, float(sum(w[v] for v in s)))
    return best


def enum_rho(g):
    """Raw inductive independence for the graph's order by full enumeration."""
    raw = 0.0
    for s in subsets(range(g.n)):
        if not feasible_by_definition(g, s):
            continue
        for v in range(g.n):
            later = [u for u in s if g.rank[u] > g.rank[v]]
            if g.is_binary:
                val = sum(1 for u in later if g.adjacency[u, v])
            else:
                val = sum(g.weights[u, v] + g.weights[v, u] for u in later)
            raw = max(raw, val)
    return raw


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
