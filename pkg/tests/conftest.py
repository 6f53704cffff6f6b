from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest

from ordmet import FinSpace, make_space


def chain_space(k: int, top: int | None = None) -> FinSpace:
    """Chain a_0 .. a_top with d(a_i, a_j) = |i - j| / k (top defaults to 3k)."""
    top = 3 * k if top is None else top
    names = [f"a{i}" for i in range(top + 1)]
    dists = {
        (f"a{i}", f"a{j}"): Fraction(j - i, k)
        for i, j in combinations(range(top + 1), 2)
    }
    return make_space(names, dists)


def path_metric_space(size: int, weights: dict[tuple[int, int], Fraction]) -> FinSpace:
    """Valid space from arbitrary positive pair weights via shortest-path
    closure (Floyd-Warshall); the independent generator for random tests."""
    dist = {}
    for i, j in combinations(range(size), 2):
        dist[(i, j)] = dist[(j, i)] = Fraction(weights[(i, j)])
    for via in range(size):
        for i in range(size):
            for j in range(size):
                if i == j or via in (i, j):
                    continue
                through = dist[(i, via)] + dist[(via, j)]
                if through < dist[(i, j)]:
                    dist[(i, j)] = through
    entries = {(i, j): dist[(i, j)] for i, j in combinations(range(size), 2)}
    return FinSpace(tuple(range(size)), entries)


@pytest.fixture
def unit_pair() -> FinSpace:
    return make_space(["p", "q"], {("p", "q"): 1})


@pytest.fixture
def k1_chain() -> FinSpace:
    return chain_space(1)
