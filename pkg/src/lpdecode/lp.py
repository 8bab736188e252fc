"""Fundamental-polytope LP decoding.

The feasible region is the intersection, over all checks, of the convex
hulls of the single-check codes, written with one inequality per check and
odd-cardinality subset S of its neighborhood:

    sum_{i in S} x_i - sum_{i in N(j) \\ S} x_i <= |S| - 1,

plus the box 0 <= x_i <= 1. That is 2^(d_R - 1) rows per check and 2n box
rows. Integral vertices are exactly the codewords; decoding minimizes
<llr, x> over the region, so an integral optimum comes with a maximum
likelihood certificate.

A decode is reported unique only when no other optimal point exists. In
exact mode that is decided by exploring the optimal face coordinate by
coordinate; in float mode by re-solving under a tiny deterministic
objective perturbation (a heuristic, which is why certification tests run
in exact mode). Following the strict reading of decoding success, callers
should treat "optimal but not unique" as a failure even if the transmitted
word is among the optima.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .channel import ChannelModel, llr
from .simplex import ExactTableau, FloatTableau, LpNumericalError
from .tanner import TannerGraph

__all__ = [
    "DegreeTooLargeError",
    "LpNumericalError",
    "LpProblem",
    "LpSolution",
    "build_polytope",
    "check_solution",
    "decode_word",
    "lp_decode",
]

FLOAT_POINT_TOL = 1e-9
MAX_CHECK_DEGREE = 12

_PERTURB_RNG_SEED = 0x5EED


class DegreeTooLargeError(ValueError):
    """Check degree too large to enumerate odd-subset rows at desk scale."""


@dataclass
class LpProblem:
    """Inequality system a_ub @ x <= b_ub over [0,1]^n plus an objective.

    Rows 0..n-1 are x_i <= 1, rows n..2n-1 are -x_i <= 0, the rest are the
    odd-subset parity rows grouped by check. ``objective`` is bound by
    lp_decode and left None by build_polytope.
    """

    n_vars: int
    a_ub: np.ndarray
    b_ub: np.ndarray
    objective: np.ndarray | None = None

    @property
    def n_rows(self) -> int:
        return self.a_ub.shape[0]


@dataclass
class LpSolution:
    point: object  # np.ndarray (float mode) or tuple[Fraction] (exact mode)
    objective_value: object
    is_integral: bool
    is_unique: bool
    status: str = "optimal"
    mode: str = "float"

    def as_bits(self):
        """Round an integral point to a plain int tuple."""
        if not self.is_integral:
            raise ValueError("solution is not integral")
        return tuple(int(round(float(v))) for v in self.point)


def build_polytope(g: TannerGraph) -> LpProblem:
    """Assemble the box and odd-subset rows for a graph."""
    if g.d_r > MAX_CHECK_DEGREE:
        raise DegreeTooLargeError(
            f"d_R = {g.d_r} would need {2 ** (g.d_r - 1)} rows per check"
        )
    n = g.n
    rows = 2 * n + g.m * 2 ** (g.d_r - 1)
    a = np.zeros((rows, n))
    b = np.zeros(rows)
    a[:n, :] = np.eye(n)
    b[:n] = 1.0
    a[n:2 * n, :] = -np.eye(n)
    r = 2 * n
    for neigh in g.chk_adj:
        for size in range(1, g.d_r + 1, 2):
            for subset in combinations(neigh, size):
                a[r, list(neigh)] = -1.0
                a[r, list(subset)] = 1.0
                b[r] = size - 1
                r += 1
    assert r == rows
    return LpProblem(n, a, b)


def check_solution(problem: LpProblem, sol: LpSolution, tol: float = FLOAT_POINT_TOL) -> bool:
    """Feasibility of a solution point against every row (used by tests)."""
    if sol.mode == "exact":
        x = sol.point
        for row, bound in zip(problem.a_ub, problem.b_ub):
            lhs = sum(Fraction(c) * v for c, v in zip(row, x) if c)
            if lhs > Fraction(bound):
                return False
        return True
    x = np.asarray(sol.point, dtype=np.float64)
    return bool((problem.a_ub @ x <= problem.b_ub + tol).all())


def _solve_float(problem: LpProblem, lam: np.ndarray) -> LpSolution:
    tab = FloatTableau(lam, problem.a_ub, problem.b_ub)
    tab.solve()
    x = tab.solution()
    integral = bool(np.all(np.minimum(np.abs(x), np.abs(x - 1.0)) <= FLOAT_POINT_TOL))
    # deterministic perturbation re-solve to sniff out alternative optima
    rng = np.random.default_rng(_PERTURB_RNG_SEED)
    scale = 1e-7 * max(float(np.max(np.abs(lam))), 1.0)
    lam2 = lam + scale * rng.uniform(-1.0, 1.0, size=lam.shape)
    tab2 = FloatTableau(lam2, problem.a_ub, problem.b_ub)
    tab2.solve()
    unique = bool(np.allclose(tab2.solution(), x, atol=1e-6))
    return LpSolution(x, tab.objective(), integral, unique, mode="float")


def _solve_exact(problem: LpProblem, lam) -> LpSolution:
    lam_f = [Fraction(v) for v in lam]
    a = [[Fraction(int(v)) for v in row] for row in problem.a_ub.astype(np.int64)]
    b = [Fraction(int(v)) for v in problem.b_ub.astype(np.int64)]
    tab = ExactTableau(lam_f, a, b)
    tab.solve()
    x = tuple(tab.solution())
    integral = all(v == 0 or v == 1 for v in x)
    unique = tab.probe_alternate_optimum() is None
    return LpSolution(x, tab.objective(), integral, unique, mode="exact")


def lp_decode(g: TannerGraph, lam, mode: str = "float",
              problem: LpProblem | None = None) -> LpSolution:
    """Minimize <lam, x> over the fundamental polytope of g.

    mode="exact" works in rational arithmetic (floats are converted to
    their exact binary rationals) and certifies uniqueness; mode="float"
    is the fast path. Pass a prebuilt ``problem`` to amortize row
    construction across repeated decodes of one graph.
    """
    if problem is None:
        problem = build_polytope(g)
    lam_arr = np.asarray([float(v) for v in lam], dtype=np.float64)
    if lam_arr.shape != (g.n,):
        raise ValueError(f"llr vector has wrong length (expected {g.n})")
    if mode == "float":
        sol = _solve_float(problem, lam_arr)
    elif mode == "exact":
        sol = _solve_exact(problem, lam if not isinstance(lam, np.ndarray) else lam_arr.tolist())
    else:
        raise ValueError("mode must be 'float' or 'exact'")
    problem.objective = lam_arr
    return sol


def decode_word(g: TannerGraph, ch: ChannelModel, received, mode: str = "float",
                problem: LpProblem | None = None) -> LpSolution:
    """Convenience wrapper: LLR computation followed by LP decoding."""
    return lp_decode(g, llr(ch, received), mode=mode, problem=problem)
