"""(d_L, d_R)-regular Tanner graphs: construction, girth, parity checks.

A Tanner graph is a bipartite graph between ``n`` variable nodes and ``m``
check nodes; every variable node has degree ``d_L`` and every check node
degree ``d_R``, so ``n * d_L == m * d_R``. The graph doubles as a parity
check matrix: a binary word is a codeword iff every check node sees even
parity on its neighborhood.

Node indexing convention used throughout: variables are ``0..n-1`` and
checks ``0..m-1`` in their own namespaces; helpers that need a single
namespace map check ``j`` to ``n + j``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConstructionError",
    "TannerGraph",
    "build_regular_graph",
    "girth",
    "is_codeword",
    "read_graph_file",
    "write_graph_file",
]

INFINITE_GIRTH = math.inf


class ConstructionError(RuntimeError):
    """Randomized graph construction exhausted its retry budget."""


@dataclass
class TannerGraph:
    """Immutable-by-convention regular bipartite factor graph.

    var_adj[i] lists the checks incident to variable i (ordered);
    chk_adj[j] lists the variables incident to check j.
    """

    n: int
    m: int
    var_adj: tuple[tuple[int, ...], ...]
    chk_adj: tuple[tuple[int, ...], ...]
    girth_cache: float | None = field(default=None, compare=False)
    regular: bool = True

    def __post_init__(self):
        self.var_adj = tuple(tuple(row) for row in self.var_adj)
        self.chk_adj = tuple(tuple(row) for row in self.chk_adj)
        if len(self.var_adj) != self.n or len(self.chk_adj) != self.m:
            raise ValueError("adjacency length does not match n/m")
        if self.regular:
            d_l = len(self.var_adj[0]) if self.n else 0
            d_r = len(self.chk_adj[0]) if self.m else 0
            if any(len(row) != d_l for row in self.var_adj):
                raise ValueError("graph is not left-regular")
            if any(len(row) != d_r for row in self.chk_adj):
                raise ValueError("graph is not right-regular")
            if self.n * d_l != self.m * d_r:
                raise ValueError("edge count mismatch: n*d_L != m*d_R")
        for i, row in enumerate(self.var_adj):
            if len(set(row)) != len(row):
                raise ValueError(f"parallel edges at variable {i}")
            if any(not 0 <= j < self.m for j in row):
                raise ValueError(f"check index out of range at variable {i}")
        # cross-check the two adjacency views agree
        edges_from_vars = {(i, j) for i, row in enumerate(self.var_adj) for j in row}
        edges_from_chks = {(i, j) for j, row in enumerate(self.chk_adj) for i in row}
        if edges_from_vars != edges_from_chks:
            raise ValueError("var_adj and chk_adj describe different edge sets")

    @property
    def d_l(self) -> int:
        if not self.regular:
            raise ValueError("irregular graph has no single variable degree")
        return len(self.var_adj[0])

    @property
    def d_r(self) -> int:
        if not self.regular:
            raise ValueError("irregular graph has no single check degree")
        return len(self.chk_adj[0])

    @property
    def num_edges(self) -> int:
        return sum(len(row) for row in self.var_adj)

    def edges(self):
        for i, row in enumerate(self.var_adj):
            for j in row:
                yield (i, j)


def from_chk_adj(n: int, chk_adj, regular: bool = True) -> TannerGraph:
    """Build a TannerGraph from check-side adjacency only."""
    var_adj = [[] for _ in range(n)]
    for j, row in enumerate(chk_adj):
        for i in row:
            var_adj[i].append(j)
    return TannerGraph(n, len(chk_adj), tuple(map(tuple, var_adj)),
                       tuple(map(tuple, chk_adj)), regular=regular)


def _combined_adjacency(g: TannerGraph) -> list[list[int]]:
    # single namespace: variables 0..n-1, checks n..n+m-1
    adj = [list() for _ in range(g.n + g.m)]
    for i, row in enumerate(g.var_adj):
        for j in row:
            adj[i].append(g.n + j)
            adj[g.n + j].append(i)
    return adj


def girth(g: TannerGraph) -> float:
    """Length of the shortest cycle; INFINITE_GIRTH for forests.

    BFS from every vertex, O(V*E). Exact: for the start vertex lying on a
    shortest cycle the first cross edge closes that cycle, and bipartiteness
    rules out odd closures.
    """
    if g.girth_cache is not None:
        return g.girth_cache
    adj = _combined_adjacency(g)
    nv = len(adj)
    best = INFINITE_GIRTH
    dist = np.empty(nv, dtype=np.int64)
    parent = np.empty(nv, dtype=np.int64)
    for s in range(nv):
        dist.fill(-1)
        dist[s] = 0
        parent[s] = -1
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cyc = int(dist[u] + dist[w] + 1)
                    if cyc < best:
                        best = cyc
    g.girth_cache = best
    return best


def _shortest_cycle(g: TannerGraph):
    """Return (length, edge list) of one shortest cycle, or (inf, [])."""
    adj = _combined_adjacency(g)
    nv = len(adj)
    best = INFINITE_GIRTH
    witness = None
    for s in range(nv):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cyc = dist[u] + dist[w] + 1
                    if cyc < best:
                        best = cyc
                        witness = (dict(parent), u, w)
    if witness is None:
        return INFINITE_GIRTH, []
    parent, u, w = witness
    path_u, path_w = [u], [w]
    while parent[path_u[-1]] != -1:
        path_u.append(parent[path_u[-1]])
    while parent[path_w[-1]] != -1:
        path_w.append(parent[path_w[-1]])
    # trim the common tail down to the lowest common ancestor
    while len(path_u) > 1 and len(path_w) > 1 and path_u[-2] == path_w[-2]:
        path_u.pop()
        path_w.pop()
    cycle_nodes = path_u + path_w[-2::-1]
    n = g.n
    edges = []
    for a, b in zip(cycle_nodes, cycle_nodes[1:] + cycle_nodes[:1]):
        i, j = (a, b - n) if a < n else (b, a - n)
        edges.append((i, j))
    return best, edges


def _cycle_through_edge(adj, src, dst) -> float:
    """Shortest cycle through edge (src, dst): skip it once, BFS src -> dst."""
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if u == src and w == dst:
                continue  # the edge under test
            if w not in dist:
                dist[w] = dist[u] + 1
                if w == dst:
                    return dist[w] + 1
                queue.append(w)
    return INFINITE_GIRTH


def build_regular_graph(
    n: int,
    d_l: int,
    d_r: int,
    min_girth: int = 4,
    seed: int = 0,
    max_retries: int = 10_000,
) -> TannerGraph:
    """Sample a (d_l, d_r)-regular Tanner graph with girth >= min_girth.

    Configuration-model stub matching, followed by rejection of short
    cycles: as long as a cycle shorter than min_girth exists, one of its
    edges is swapped against a random other edge (a degree-preserving
    double edge swap), accepting the swap only if the two new edges do not
    themselves lie on cycles shorter than the current shortest. Both the
    initial matching draws and the swap attempts count against
    ``max_retries``; a ConstructionError is raised when the budget runs out.

    Deterministic for a fixed seed.
    """
    if d_l < 1 or d_r < 1:
        raise ValueError("degrees must be positive")
    if (n * d_l) % d_r != 0:
        raise ValueError(f"n*d_L = {n * d_l} is not divisible by d_R = {d_r}")
    if min_girth < 4 or min_girth % 2 != 0:
        raise ValueError("min_girth must be an even integer >= 4")
    m = n * d_l // d_r
    rng = np.random.default_rng(seed)
    budget = max_retries

    var_stubs = np.repeat(np.arange(n), d_l)
    chk_stubs = np.repeat(np.arange(m), d_r)
    edge_set = None
    while budget > 0:
        budget -= 1
        perm = rng.permutation(n * d_l)
        pairs = list(zip(var_stubs.tolist(), chk_stubs[perm].tolist()))
        if len(set(pairs)) == len(pairs):
            edge_set = set(pairs)
            break
    if edge_set is None:
        raise ConstructionError("could not draw a simple matching within the retry budget")

    def graph_of(edges) -> TannerGraph:
        chk_adj = [[] for _ in range(m)]
        for i, j in sorted(edges):
            chk_adj[j].append(i)
        return from_chk_adj(n, chk_adj)

    # cycle-breaking double edge swaps, annealed through girth targets
    # 6, 8, ...: an accepted swap removes an edge of a shortest cycle and
    # both replacement edges lie on no cycle shorter than the phase target,
    # so the number of offending cycles strictly decreases per phase
    adj = [set() for _ in range(n + m)]
    for i, j in edge_set:
        adj[i].add(n + j)
        adj[n + j].add(i)

    def swap(i1, j1, i2, j2):
        adj[i1].remove(n + j1); adj[n + j1].remove(i1)
        adj[i2].remove(n + j2); adj[n + j2].remove(i2)
        adj[i1].add(n + j2); adj[n + j2].add(i1)
        adj[i2].add(n + j1); adj[n + j1].add(i2)

    for target in range(6, min_girth + 2, 2):
        while budget > 0:
            g = graph_of(edge_set)
            glen, cycle_edges = _shortest_cycle(g)
            if glen >= target:
                break
            edge_list = sorted(edge_set)
            accepted = False
            while budget > 0 and not accepted:
                budget -= 1
                i1, j1 = cycle_edges[rng.integers(len(cycle_edges))]
                i2, j2 = edge_list[rng.integers(len(edge_list))]
                if i1 == i2 or j1 == j2:
                    continue
                if (i1, j2) in edge_set or (i2, j1) in edge_set:
                    continue
                swap(i1, j1, i2, j2)
                c1 = _cycle_through_edge(adj, i1, n + j2)
                c2 = _cycle_through_edge(adj, i2, n + j1)
                if min(c1, c2) >= target:
                    edge_set -= {(i1, j1), (i2, j2)}
                    edge_set |= {(i1, j2), (i2, j1)}
                    accepted = True
                else:
                    swap(i1, j2, i2, j1)  # revert
            if not accepted:
                break
    g = graph_of(edge_set)
    if girth(g) >= min_girth:
        return g
    raise ConstructionError(
        f"girth {min_girth} not reached at n={n} within {max_retries} retries"
    )


def is_codeword(g: TannerGraph, bits) -> bool:
    """True iff every check sees even parity. Raises on length mismatch."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape != (g.n,):
        raise ValueError(f"expected a length-{g.n} binary vector, got shape {bits.shape}")
    for row in g.chk_adj:
        if int(bits[list(row)].sum()) % 2 != 0:
            return False
    return True


def write_graph_file(g: TannerGraph, path) -> None:
    """Serialize check adjacency: header 'n m d_L d_R', one check row per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m} {g.d_l} {g.d_r}\n")
        for row in g.chk_adj:
            fh.write(" ".join(map(str, row)) + "\n")


def read_graph_file(path) -> TannerGraph:
    with open(path, encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 4:
            raise ValueError("bad header, expected 'n m d_L d_R'")
        n, m, d_l, d_r = map(int, header)
        chk_adj = []
        for _ in range(m):
            row = tuple(int(tok) for tok in fh.readline().split())
            if len(row) != d_r:
                raise ValueError("check row length differs from header d_R")
            chk_adj.append(row)
    g = from_chk_adj(n, chk_adj)
    if g.d_l != d_l or g.d_r != d_r:
        raise ValueError("degrees in file body do not match header")
    return g
