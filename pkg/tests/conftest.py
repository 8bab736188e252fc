"""Shared graph fixtures.

Deterministic small codes cover the exact-arithmetic paths; the two
randomized families exercise the generic construction at the sizes the
certification experiments need.
"""

from itertools import combinations

import pytest

from lpdecode.tanner import TannerGraph, build_regular_graph, from_chk_adj


def _six_cycle() -> TannerGraph:
    return from_chk_adj(3, [(0, 1), (1, 2), (2, 0)])


def _hamming_7_4() -> TannerGraph:
    # rows of the standard [7,4] parity matrix 1110100 / 1101010 / 1011001;
    # column weights vary, so this one is irregular by design
    return from_chk_adj(7, [(0, 1, 2, 4), (0, 1, 3, 5), (0, 2, 3, 6)], regular=False)


def _k44_cycle_code() -> TannerGraph:
    # variables = edges of K_{4,4}, checks = its 8 vertices; girth 8
    chk_adj = [[] for _ in range(8)]
    for u in range(4):
        for v in range(4):
            var = 4 * u + v
            chk_adj[u].append(var)
            chk_adj[4 + v].append(var)
    return from_chk_adj(16, chk_adj)


def _petersen_cycle_code() -> TannerGraph:
    # variables = edges of the Petersen graph, checks = its 10 vertices; girth 10
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))          # outer cycle
        edges.append((i, 5 + i))                # spokes
        edges.append((5 + i, 5 + (i + 2) % 5))  # inner pentagram
    chk_adj = [[] for _ in range(10)]
    for var, (u, v) in enumerate(edges):
        chk_adj[u].append(var)
        chk_adj[v].append(var)
    return from_chk_adj(15, chk_adj)


def _generalized_quadrangle_code() -> TannerGraph:
    # points = 2-subsets of {0..5}, lines = perfect matchings of K_6;
    # the incidence graph is 3-regular on both sides with girth 8
    points = list(combinations(range(6), 2))
    index = {p: i for i, p in enumerate(points)}

    def matchings(elems):
        if not elems:
            yield []
            return
        first = elems[0]
        for k in range(1, len(elems)):
            pair = (first, elems[k])
            rest = elems[1:k] + elems[k + 1:]
            for sub in matchings(rest):
                yield [pair] + sub

    chk_adj = [tuple(index[p] for p in line) for line in matchings(tuple(range(6)))]
    return from_chk_adj(15, chk_adj)


@pytest.fixture(scope="session")
def six_cycle():
    return _six_cycle()


@pytest.fixture(scope="session")
def hamming_7_4():
    return _hamming_7_4()


@pytest.fixture(scope="session")
def k44():
    return _k44_cycle_code()


@pytest.fixture(scope="session")
def petersen():
    return _petersen_cycle_code()


@pytest.fixture(scope="session")
def quadrangle():
    return _generalized_quadrangle_code()


@pytest.fixture(scope="session")
def g36_girth6():
    return build_regular_graph(32, 3, 6, min_girth=6, seed=1)


@pytest.fixture(scope="session")
def g34_girth8():
    return build_regular_graph(56, 3, 4, min_girth=8, seed=0)
