"""Self-contained primal simplex for min c'x s.t. Ax <= b, x >= 0, b >= 0.

Two backends share one algorithm: a numpy float tableau for Monte Carlo
scale work and a Fraction tableau for exact certification. Bland's rule
(smallest eligible index enters; ratio ties resolved toward the smallest
basic index) guarantees termination without cycling in exact arithmetic.

Because b >= 0, the all-slack basis is feasible and no phase-1 is needed;
the feasible regions built by :mod:`lpdecode.lp` are bounded, so an
unbounded ray signals a bug rather than a legitimate outcome.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

__all__ = ["LpNumericalError", "FloatTableau", "ExactTableau"]

FLOAT_TOL = 1e-9


class LpNumericalError(RuntimeError):
    """Float-mode simplex lost its numerical footing; retry in exact mode."""


class FloatTableau:
    """Dense float tableau. Columns: n structural, then one slack per row."""

    def __init__(self, c, a_ub, b_ub):
        a = np.asarray(a_ub, dtype=np.float64)
        b = np.asarray(b_ub, dtype=np.float64)
        c = np.asarray(c, dtype=np.float64)
        m, n = a.shape
        if (b < -FLOAT_TOL).any():
            raise ValueError("b must be nonnegative (slack basis must be feasible)")
        self.m, self.n = m, n
        self.ncols = n + m
        t = np.zeros((m + 1, self.ncols + 1))
        t[:m, :n] = a
        t[:m, n:n + m] = np.eye(m)
        t[:m, -1] = np.maximum(b, 0.0)
        t[m, :n] = c
        self.t = t
        self.basis = np.arange(n, n + m)

    def _pivot(self, row, col):
        t = self.t
        t[row] /= t[row, col]
        colvals = t[:, col].copy()
        colvals[row] = 0.0
        t -= np.outer(colvals, t[row])
        t[:, col] = 0.0
        t[row, col] = 1.0
        self.basis[row] = col

    def solve(self, max_iters=None):
        t = self.t
        m = self.m
        if max_iters is None:
            max_iters = 200 * (self.m + self.ncols) + 10_000
        for _ in range(max_iters):
            red = t[m, :self.ncols]
            candidates = np.flatnonzero(red < -FLOAT_TOL)
            if candidates.size == 0:
                return
            col = int(candidates[0])  # Bland: smallest index
            colvec = t[:m, col]
            rows = np.flatnonzero(colvec > FLOAT_TOL)
            if rows.size == 0:
                raise LpNumericalError("unbounded direction in a bounded polytope")
            ratios = t[rows, -1] / colvec[rows]
            best = ratios.min()
            ties = rows[ratios <= best + FLOAT_TOL * (1.0 + abs(best))]
            row = int(ties[np.argmin(self.basis[ties])])
            self._pivot(row, col)
        raise LpNumericalError("iteration cap exceeded")

    def solution(self) -> np.ndarray:
        x = np.zeros(self.n)
        for row, var in enumerate(self.basis):
            if var < self.n:
                x[var] = self.t[row, -1]
        return x

    def objective(self) -> float:
        return -float(self.t[self.m, -1])


class ExactTableau:
    """Fraction tableau; same layout and pivoting rules as FloatTableau."""

    def __init__(self, c, a_ub, b_ub):
        m = len(a_ub)
        n = len(c)
        self.m, self.n = m, n
        self.ncols = n + m
        zero = Fraction(0)
        one = Fraction(1)
        self.rows = []
        for i in range(m):
            row = [Fraction(v) for v in a_ub[i]] + [zero] * m + [Fraction(b_ub[i])]
            row[n + i] = one
            if row[-1] < 0:
                raise ValueError("b must be nonnegative (slack basis must be feasible)")
            self.rows.append(row)
        self.obj = [Fraction(v) for v in c] + [zero] * (m + 1)
        self.basis = list(range(n, n + m))

    def _pivot(self, row, col):
        piv = self.rows[row][col]
        self.rows[row] = [v / piv for v in self.rows[row]]
        prow = self.rows[row]
        for r in range(self.m):
            if r == row:
                continue
            factor = self.rows[r][col]
            if factor:
                self.rows[r] = [a - factor * p for a, p in zip(self.rows[r], prow)]
        factor = self.obj[col]
        if factor:
            self.obj = [a - factor * p for a, p in zip(self.obj, prow)]
        self.basis[row] = col

    def _entering(self, objrow, allowed=None):
        for j in range(self.ncols):
            if objrow[j] < 0 and (allowed is None or j in allowed):
                return j
        return None

    def _leaving(self, col):
        best = None
        best_row = None
        for r in range(self.m):
            a = self.rows[r][col]
            if a > 0:
                ratio = self.rows[r][-1] / a
                if best is None or ratio < best or (ratio == best and self.basis[r] < self.basis[best_row]):
                    best, best_row = ratio, r
        return best_row

    def solve(self, max_iters=1_000_000):
        for _ in range(max_iters):
            col = self._entering(self.obj)
            if col is None:
                return
            row = self._leaving(col)
            if row is None:
                raise LpNumericalError("unbounded direction in a bounded polytope")
            self._pivot(row, col)
        raise LpNumericalError("iteration cap exceeded")

    def solution(self):
        x = [Fraction(0)] * self.n
        for row, var in enumerate(self.basis):
            if var < self.n:
                x[var] = self.rows[row][-1]
        return x

    def objective(self) -> Fraction:
        return -self.obj[-1]

    def _face_optimize(self, direction, allowed, max_iters=100_000):
        # Minimize `direction` (length ncols) over the optimal face: only
        # columns with zero reduced cost may enter, so optimality of the
        # primary objective is preserved throughout.
        drow = list(direction) + [Fraction(0)]
        for r, var in enumerate(self.basis):
            factor = direction[var]
            if factor:
                drow = [a - factor * p for a, p in zip(drow, self.rows[r])]
        for _ in range(max_iters):
            col = self._entering(drow, allowed)
            if col is None:
                return
            row = self._leaving(col)
            if row is None:
                raise LpNumericalError("unbounded face direction in a bounded polytope")
            piv_factor = drow[col]
            self._pivot(row, col)
            if piv_factor:
                drow = [a - piv_factor * p for a, p in zip(drow, self.rows[row])]
        raise LpNumericalError("iteration cap exceeded on face exploration")

    def _clone(self) -> "ExactTableau":
        # Fractions are immutable, so row-level copies are enough
        other = object.__new__(ExactTableau)
        other.m, other.n, other.ncols = self.m, self.n, self.ncols
        other.rows = [list(r) for r in self.rows]
        other.obj = list(self.obj)
        other.basis = list(self.basis)
        return other

    def probe_alternate_optimum(self):
        """Search the optimal face for a point different from the current one.

        Returns an alternate optimal solution vector, or None when the
        optimum is unique. Exhaustive over coordinates: for each structural
        variable the face is searched in both directions, which decides
        uniqueness even at degenerate vertices where a single zero
        reduced-cost pivot would not move the point.
        """
        base_x = self.solution()
        allowed = {j for j in range(self.ncols) if self.obj[j] == 0}
        allowed.update(self.basis)
        if all(j in self.basis for j in allowed):
            return None
        zero = Fraction(0)
        for i in range(self.n):
            for sign in (1, -1):
                probe = self._clone()
                direction = [zero] * self.ncols
                direction[i] = Fraction(sign)
                probe._face_optimize(direction, allowed)
                x = probe.solution()
                if x != base_x:
                    return x
        return None
