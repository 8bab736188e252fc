"""Minimal local deviations, skinny-tree certificates, and graph covers.

A depth-T minimal deviation at a variable node i0 is a subtree of the
radius-2T ball around i0 in which i0 keeps all its checks, every other
internal variable keeps full degree, and every check keeps exactly two
neighbors (its parent variable and one child variable). The ball must be a
tree, which is what the 4T < girth precondition guarantees.

The cost of a deviation against a codeword x under LLRs lam is

    sum over deviation variables v != i0 of
        w[depth(v)/2] * (-1)^{x_v} * lam_v

with depth measured from i0. Note that the root's own LLR never enters;
weights are indexed by depth t = 1..T. A codeword is certified locally
optimal when this cost is strictly positive for every deviation at every
root, which implies it is the unique ML codeword and the unique LP optimum.
Certification is insensitive to positive rescaling of either the weights or
the LLRs, so any convenient scaling of both may be used.

The DP that computes the minimum cost at one root is a min-sum sweep:
check nodes take the minimum over their d_R - 1 child variables, variable
nodes add their weighted LLR to the sum of their child checks, and the root
adds up its d_L check values. Arithmetic is generic, so Fractions give
exact certificates.

Covers: an M-cover replaces every node by M copies and every base edge by a
permutation matching between the fibers. Certificates survive lifting, and
cover codewords project (by fiber averaging) into the fundamental polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .tanner import TannerGraph, from_chk_adj, girth, is_codeword

__all__ = [
    "CertificationResult",
    "CoverSpec",
    "Deviation",
    "ExplosionGuardError",
    "GirthViolationError",
    "NotACoverCodewordError",
    "WeightVector",
    "certify_local_optimality",
    "deviation_cost",
    "enumerate_deviations",
    "lift_graph",
    "lift_vector",
    "min_deviation_cost",
    "project_pseudocodeword",
    "random_cover_spec",
]

ENUMERATION_CAP = 10 ** 6


class GirthViolationError(ValueError):
    """Deviation depth too large: the radius-2T ball is not a tree."""


class ExplosionGuardError(RuntimeError):
    """Deviation enumeration would exceed the configured cap."""


class NotACoverCodewordError(ValueError):
    """Vector is not a codeword of the lifted graph."""


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative deviation weights indexed by depth, w[t-1] at depth 2t.

    The level view omega(l) = w[T-l] (l = 0 at the deepest level) is what
    the tree recursion and the density engine consume.
    """

    w: tuple

    def __post_init__(self):
        w = tuple(self.w)
        object.__setattr__(self, "w", w)
        if len(w) < 1:
            raise ValueError("need at least one weight")
        if any(v < 0 for v in w):
            raise ValueError("weights must be nonnegative")
        if all(v == 0 for v in w):
            raise ValueError("weights must not all be zero")

    @property
    def depth(self) -> int:
        return len(self.w)

    def omega(self, level: int):
        return self.w[self.depth - 1 - level]

    def omegas(self) -> tuple:
        """Level-indexed view (deepest level first)."""
        return tuple(reversed(self.w))

    @classmethod
    def uniform(cls, depth: int) -> "WeightVector":
        return cls((1,) * depth)

    @classmethod
    def geometric(cls, depth: int, d_l: int) -> "WeightVector":
        """omega(l) = (d_L - 1)^l: every level of a skinny tree contributes
        equally when all LLRs coincide."""
        return cls(tuple((d_l - 1) ** (depth - t) for t in range(1, depth + 1)))

    @classmethod
    def preset(cls, name: str, depth: int, d_l: int) -> "WeightVector":
        if name == "uniform":
            return cls.uniform(depth)
        if name == "geometric":
            return cls.geometric(depth, d_l)
        raise ValueError(f"unknown weight preset {name!r}")


@dataclass(frozen=True)
class Deviation:
    """Support of one minimal deviation: root plus selected variables."""

    root: int
    support: frozenset
    depth: int

    def __post_init__(self):
        if self.root not in self.support:
            raise ValueError("root must belong to the support")


class _Ball:
    """Rooted tree view of B(i0, 2T); children exclude the parent edge."""

    def __init__(self, g: TannerGraph, i0: int, depth: int):
        self.g = g
        self.root = i0
        self.depth = depth
        self.var_depth = {i0: 0}

    def check_children(self, var: int, parent_check: int | None):
        return [j for j in self.g.var_adj[var] if j != parent_check]

    def var_children(self, chk: int, parent_var: int):
        return [i for i in self.g.chk_adj[chk] if i != parent_var]


def _require_tree_ball(g: TannerGraph, depth: int):
    if 4 * depth >= girth(g):
        raise GirthViolationError(
            f"need 4T < girth, got T={depth} with girth {girth(g)}"
        )


def _signed(lam, x, v):
    return -lam[v] if x[v] else lam[v]


def _min_cost_support(g: TannerGraph, lam, x, i0: int, wv: WeightVector):
    """Min-sum DP over the ball; returns (cost, minimizing support set)."""
    T = wv.depth

    def var_value(v, parent_chk, t):
        val = wv.w[t - 1] * _signed(lam, x, v)
        support = {v}
        if t < T:
            for c in g.var_adj[v]:
                if c == parent_chk:
                    continue
                cval, csup = chk_value(c, v, t + 1)
                val = val + cval
                support |= csup
        return val, support

    def chk_value(c, parent_var, t):
        best = None
        best_sup = None
        for v in g.chk_adj[c]:
            if v == parent_var:
                continue
            val, sup = var_value(v, c, t)
            if best is None or val < best:
                best, best_sup = val, sup
        return best, best_sup

    total = None
    support = {i0}
    for c in g.var_adj[i0]:
        cval, csup = chk_value(c, i0, 1)
        total = cval if total is None else total + cval
        support |= csup
    return total, frozenset(support)


def min_deviation_cost(g: TannerGraph, lam, x, i0: int, wv: WeightVector):
    """Minimum weighted cost over all depth-T deviations rooted at i0."""
    _require_tree_ball(g, wv.depth)
    cost, _ = _min_cost_support(g, lam, x, i0, wv)
    return cost


def deviation_cost(g: TannerGraph, lam, x, dev: Deviation, wv: WeightVector):
    """Cost of one explicit deviation (oracle-friendly direct sum)."""
    depths = _var_depths(g, dev.root, dev.depth)
    total = 0
    for v in dev.support:
        if v == dev.root:
            continue
        t = depths[v]
        total = total + wv.w[t - 1] * _signed(lam, x, v)
    return total


def _var_depths(g: TannerGraph, i0: int, T: int):
    """Depth t (in variable steps) of every variable within B(i0, 2T)."""
    depths = {i0: 0}
    frontier = [(i0, None)]
    for t in range(1, T + 1):
        nxt = []
        for v, parent_chk in frontier:
            for c in g.var_adj[v]:
                if c == parent_chk:
                    continue
                for u in g.chk_adj[c]:
                    if u != v:
                        if u not in depths:
                            depths[u] = t
                        nxt.append((u, c))
        frontier = nxt
    return depths


def enumerate_deviations(g: TannerGraph, i0: int, T: int,
                         cap: int = ENUMERATION_CAP) -> list[Deviation]:
    """All minimal depth-T deviations rooted at i0.

    Every check reached by a selected variable picks exactly one of its
    d_R - 1 children, so the count is (d_R - 1)^(number of selected
    checks); an ExplosionGuardError fires when that exceeds the cap.
    """
    _require_tree_ball(g, T)
    checks = 0
    vars_here = 1
    for t in range(1, T + 1):
        branch = g.d_l if t == 1 else g.d_l - 1
        checks += vars_here * branch
        vars_here *= branch  # each selected check contributes one variable
    count = (g.d_r - 1) ** checks
    if count > cap:
        raise ExplosionGuardError(f"{count} deviations exceed the cap {cap}")

    def expand_var(v, parent_chk, t):
        # returns list of support sets for the subtree hanging below v
        if t == T:
            return [frozenset([v])]
        options = [frozenset([v])]
        for c in g.var_adj[v]:
            if c == parent_chk:
                continue
            child_sets = []
            for u in g.chk_adj[c]:
                if u == v:
                    continue
                child_sets.extend(expand_var(u, c, t + 1))
            options = [opt | extra for opt in options for extra in child_sets]
        return options

    supports = [frozenset([i0])]
    for c in g.var_adj[i0]:
        child_sets = []
        for u in g.chk_adj[c]:
            if u == i0:
                continue
            child_sets.extend(expand_var(u, c, 1))
        supports = [opt | extra for opt in supports for extra in child_sets]
    return [Deviation(i0, sup, T) for sup in supports]


@dataclass
class CertificationResult:
    certified: bool
    witness_root: int | None = None
    witness: Deviation | None = None
    witness_cost: object | None = None

    def __bool__(self) -> bool:
        return self.certified


def certify_local_optimality(g: TannerGraph, x, lam, wv: WeightVector) -> CertificationResult:
    """Check that every deviation at every root costs strictly more than x.

    Returns a refutation witness (root plus a minimizing deviation) when
    some deviation has nonpositive cost. Exact when lam and weights are
    Fractions; with floats, costs within rounding of zero are refuted.
    """
    _require_tree_ball(g, wv.depth)
    if not is_codeword(g, x):
        raise ValueError("x is not a codeword of g")
    for i0 in range(g.n):
        cost, support = _min_cost_support(g, lam, x, i0, wv)
        if cost <= 0:
            return CertificationResult(
                certified=False,
                witness_root=i0,
                witness=Deviation(i0, support, wv.depth),
                witness_cost=cost,
            )
    return CertificationResult(certified=True)


# ---------------------------------------------------------------------------
# graph covers


@dataclass(frozen=True)
class CoverSpec:
    """Fold number M and one fiber permutation per base edge.

    matchings[(i, j)][a] = b means copy a of variable i is joined to copy b
    of check j.
    """

    fold: int
    matchings: dict

    def __post_init__(self):
        if self.fold < 1:
            raise ValueError("fold number must be >= 1")
        for edge, perm in self.matchings.items():
            if sorted(perm) != list(range(self.fold)):
                raise ValueError(f"matching at edge {edge} is not a permutation")


def random_cover_spec(g: TannerGraph, fold: int, seed: int = 0) -> CoverSpec:
    rng = np.random.default_rng(seed)
    matchings = {
        (i, j): tuple(int(v) for v in rng.permutation(fold)) for i, j in g.edges()
    }
    return CoverSpec(fold, matchings)


def lift_graph(g: TannerGraph, spec: CoverSpec) -> TannerGraph:
    """The M-cover graph. Variable (i, a) gets index i*M + a, check (j, b)
    index j*M + b."""
    M = spec.fold
    chk_adj = [[] for _ in range(g.m * M)]
    for (i, j), perm in spec.matchings.items():
        for a in range(M):
            chk_adj[j * M + perm[a]].append(i * M + a)
    if len(spec.matchings) != g.num_edges:
        raise ValueError("cover spec does not label every base edge")
    return from_chk_adj(g.n * M, [sorted(row) for row in chk_adj])


def lift_vector(vec, fold: int):
    """Repeat every coordinate across its fiber, matching lift_graph's
    variable indexing."""
    return [v for v in vec for _ in range(fold)]


def project_pseudocodeword(g: TannerGraph, cover_word, spec: CoverSpec):
    """Average a cover codeword over fibers; lands in the fundamental
    polytope of the base graph."""
    lifted = lift_graph(g, spec)
    bits = [int(b) for b in cover_word]
    if len(bits) != g.n * spec.fold:
        raise NotACoverCodewordError("wrong length for this cover")
    if not is_codeword(lifted, bits):
        raise NotACoverCodewordError("vector fails the lifted parity checks")
    M = spec.fold
    return tuple(Fraction(sum(bits[i * M:(i + 1) * M]), M) for i in range(g.n))
