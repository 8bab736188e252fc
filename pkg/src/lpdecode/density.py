"""Quantized probability densities and the min/sum evolution on trees.

A real random variable is represented by point masses on the uniform grid
``delta * k`` for ``k in [k_min, k_max]``; mass that falls outside the grid
is tracked, never silently dropped. All operations return new densities.

The level recursion implemented by :func:`evolve` is

    Y_0 = omega_0 * gamma
    X_l = min of (d_R - 1) independent copies of Y_l
    Y_l = omega_l * gamma + sum of (d_L - 1) independent copies of X_{l-1}

where gamma is distributed like the channel's (scaled) LLR under all-zero
transmission. Minima go through the c.d.f. identity F_min = 1-(1-F)^n,
which is exact for lattice variables; sums go through FFT convolution with
zero padding to the full output support. With geometric level weights
omega_l = (d_L-1)^l the grid step is widened each level so the array length
grows only linearly in the level index.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as _fft
from scipy.special import logsumexp

__all__ = [
    "QuantizationSpec",
    "QuantizedDensity",
    "TailOverflowError",
    "convolve_power",
    "evolve",
    "from_point_masses",
    "laplace",
    "log_laplace",
    "min_density",
    "min_laplace",
    "quantize_cdf",
    "regrid",
    "scale_density",
]

# defaults for channel quantization; CLI flags override these
DEFAULT_DELTA = 0.005
DEFAULT_SPAN_SIGMAS = 12.0
DEFAULT_TAIL_TOLERANCE = 1e-9

# coarse/fine stages of the minimizing-t search
T_SEARCH_POINTS = 200
T_SEARCH_XTOL = 1e-5

_EPS = float(np.finfo(np.float64).eps)


class TailOverflowError(RuntimeError):
    """Truncated tail mass exceeded the configured tolerance."""


@dataclass(frozen=True)
class QuantizationSpec:
    """Uniform grid ``delta * k`` for integer k in [k_min, k_max]."""

    delta: float
    k_min: int
    k_max: int
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.k_min >= self.k_max:
            raise ValueError("need k_min < k_max")
        if self.tail_tolerance < 0:
            raise ValueError("tail_tolerance must be nonnegative")

    @property
    def size(self) -> int:
        return self.k_max - self.k_min + 1

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1) * self.delta

    @property
    def lo(self) -> float:
        return self.k_min * self.delta

    @property
    def hi(self) -> float:
        return self.k_max * self.delta

    @classmethod
    def centered(cls, center: float, half_width: float, delta: float = DEFAULT_DELTA,
                 tail_tolerance: float = DEFAULT_TAIL_TOLERANCE) -> "QuantizationSpec":
        k_min = math.floor((center - half_width) / delta)
        k_max = math.ceil((center + half_width) / delta)
        return cls(delta, k_min, k_max, tail_tolerance)


@dataclass
class QuantizedDensity:
    """Masses on a QuantizationSpec grid plus truncated-tail bookkeeping.

    pdf[k - k_min] is the probability mass at delta*k, i.e. roughly
    delta * f(delta*k) for an underlying density f. The invariant
    sum(pdf) + truncated = 1 is enforced to 1e-9 at construction.
    """

    spec: QuantizationSpec
    pdf: np.ndarray
    truncated_lo: float = 0.0
    truncated_hi: float = 0.0

    def __post_init__(self):
        pdf = np.asarray(self.pdf, dtype=np.float64)
        if pdf.shape != (self.spec.size,):
            raise ValueError("pdf length does not match grid")
        if pdf.min() < 0:
            raise ValueError("negative mass")
        object.__setattr__(self, "pdf", pdf)
        err = abs(float(pdf.sum()) + self.truncated_mass - 1.0)
        if err > 1e-9:
            raise ValueError(f"mass not conserved: off by {err:.3e}")
        pdf.flags.writeable = False

    @property
    def truncated_mass(self) -> float:
        return self.truncated_lo + self.truncated_hi

    @property
    def x(self) -> np.ndarray:
        return self.spec.grid

    @cached_property
    def cdf(self) -> np.ndarray:
        """P(X <= delta*k), including mass truncated below the grid."""
        return self.truncated_lo + np.cumsum(self.pdf)

    def total_mass(self) -> float:
        return float(self.pdf.sum())

    def mean(self) -> float:
        return float(np.dot(self.x, self.pdf) / self.pdf.sum())

    def var(self) -> float:
        mu = self.mean()
        return float(np.dot((self.x - mu) ** 2, self.pdf) / self.pdf.sum())

    def std(self) -> float:
        return math.sqrt(self.var())


def quantize_cdf(cdf_func, spec: QuantizationSpec) -> QuantizedDensity:
    """Bin a continuous distribution onto the grid.

    Mass of grid point k is the exact probability of the bin
    [delta*(k-1/2), delta*(k+1/2)); whatever lies beyond the outermost bin
    edges becomes truncated tail mass.
    """
    edges = (np.arange(spec.k_min, spec.k_max + 2) - 0.5) * spec.delta
    c = np.asarray(cdf_func(edges), dtype=np.float64)
    lo = float(c[0])
    hi = float(1.0 - c[-1])
    return QuantizedDensity(spec, np.diff(c), truncated_lo=lo, truncated_hi=hi)


def from_point_masses(points, spec: QuantizationSpec) -> QuantizedDensity:
    """Snap (value, mass) atoms to their nearest grid points."""
    pdf = np.zeros(spec.size)
    lo = hi = 0.0
    for value, mass in points:
        k = round(value / spec.delta)
        if k < spec.k_min:
            lo += mass
        elif k > spec.k_max:
            hi += mass
        else:
            pdf[k - spec.k_min] += mass
    return QuantizedDensity(spec, pdf, truncated_lo=lo, truncated_hi=hi)


def scale_density(f: QuantizedDensity, omega: float,
                  target: QuantizationSpec | None = None) -> QuantizedDensity:
    """Density of omega*X for omega > 0.

    Without a target spec this is an exact relabeling of the grid
    (delta -> omega*delta); with one, the relabeled density is re-binned
    onto the target.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    spec = QuantizationSpec(f.spec.delta * omega, f.spec.k_min, f.spec.k_max,
                            f.spec.tail_tolerance)
    out = QuantizedDensity(spec, f.pdf, f.truncated_lo, f.truncated_hi)
    if target is not None:
        out = regrid(out, target)
    return out


def regrid(f: QuantizedDensity, target: QuantizationSpec) -> QuantizedDensity:
    """Re-bin masses onto a new grid, preserving total mass and mean.

    Linear interpolation of the c.d.f. sampled at bin edges: every source
    mass is spread uniformly over its own bin and re-collected into the
    target bins. Point masses that sit exactly on a target grid point stay
    there, so lattice distributions survive compatible re-gridding exactly.
    """
    if target.delta == f.spec.delta and target.k_min <= f.spec.k_min and target.k_max >= f.spec.k_max:
        pdf = np.zeros(target.size)
        off = f.spec.k_min - target.k_min
        pdf[off:off + f.spec.size] = f.pdf
        return QuantizedDensity(target, pdf, f.truncated_lo, f.truncated_hi)
    src_edges = (np.arange(f.spec.k_min, f.spec.k_max + 2) - 0.5) * f.spec.delta
    src_cdf = np.concatenate(([0.0], np.cumsum(f.pdf)))
    total = src_cdf[-1]
    tgt_edges = (np.arange(target.k_min, target.k_max + 2) - 0.5) * target.delta
    c = np.interp(tgt_edges, src_edges, src_cdf, left=0.0, right=total)
    pdf = np.diff(c)
    lo = f.truncated_lo + float(c[0])
    hi = f.truncated_hi + float(total - c[-1])
    return QuantizedDensity(target, pdf, truncated_lo=lo, truncated_hi=hi)


def min_density(f: QuantizedDensity, n: int) -> QuantizedDensity:
    """Density of the minimum of n i.i.d. copies of X ~ f.

    Uses F_min(x) = 1 - (1 - F(x))^n on the grid and differences back to
    masses; exact for lattice variables (no tie bias) and numerically stable
    for large n, unlike multiplying out the p.d.f. product form.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return QuantizedDensity(f.spec, f.pdf, f.truncated_lo, f.truncated_hi)
    surv = 1.0 - f.cdf  # includes lower truncated mass via f.cdf
    surv = np.clip(surv, 0.0, 1.0)
    lo = 1.0 - (1.0 - f.truncated_lo) ** n
    g = 1.0 - surv ** n
    pdf = np.diff(g, prepend=lo)
    pdf = np.maximum(pdf, 0.0)
    # upper tail closes the mass balance exactly against cumsum rounding
    hi = max(1.0 - lo - float(pdf.sum()), 0.0)
    return QuantizedDensity(f.spec, pdf, truncated_lo=lo, truncated_hi=hi)


def _clean_fft_output(out: np.ndarray, size: int, folds: int, expected_mass: float) -> np.ndarray:
    # FFT roundoff leaves O(eps) debris across the whole support; far-tail
    # debris would later be amplified by exp(-t x), so zero anything below
    # the backward-error floor and restore the exact output mass.
    floor = 32.0 * folds * _EPS * math.log2(max(size, 2))
    out[out < floor] = 0.0
    s = out.sum()
    if s > 0:
        out *= expected_mass / s
    return out


def convolve_power(f: QuantizedDensity, d: int, method: str = "fft") -> QuantizedDensity:
    """Density of the sum of d i.i.d. copies of X ~ f (the d-fold convolution).

    method="fft" raises the transform to the d-th power over a zero-padded
    support; method="direct" is the O(K^2) reference used as a cross-check
    oracle at small grid sizes.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return QuantizedDensity(f.spec, f.pdf, f.truncated_lo, f.truncated_hi)
    out_len = d * (f.spec.size - 1) + 1
    expected = f.total_mass() ** d
    if method == "fft":
        size = _fft.next_fast_len(out_len)
        out = _fft.irfft(_fft.rfft(f.pdf, size) ** d, size)[:out_len]
        np.maximum(out, 0.0, out=out)
        out = _clean_fft_output(out, size, d, expected)
    elif method == "direct":
        out = f.pdf.copy()
        for _ in range(d - 1):
            out = np.convolve(out, f.pdf)
        np.maximum(out, 0.0, out=out)
    else:
        raise ValueError(f"unknown method {method!r}")
    # any copy landing in a truncated tail puts the sum's mass there too
    tr = 1.0 - expected
    lo_share = f.truncated_lo / f.truncated_mass if f.truncated_mass > 0 else 0.5
    spec = QuantizationSpec(f.spec.delta, d * f.spec.k_min, d * f.spec.k_max,
                            f.spec.tail_tolerance)
    return QuantizedDensity(spec, out, truncated_lo=tr * lo_share,
                            truncated_hi=tr * (1.0 - lo_share))


def convolve_pair(f: QuantizedDensity, g: QuantizedDensity) -> QuantizedDensity:
    """Density of X + Y for independent X ~ f, Y ~ g on equal-step grids."""
    if abs(f.spec.delta - g.spec.delta) > 1e-12 * f.spec.delta:
        raise ValueError("grids must share the same step; regrid first")
    out_len = f.spec.size + g.spec.size - 1
    size = _fft.next_fast_len(out_len)
    out = _fft.irfft(_fft.rfft(f.pdf, size) * _fft.rfft(g.pdf, size), size)[:out_len]
    np.maximum(out, 0.0, out=out)
    expected = f.total_mass() * g.total_mass()
    out = _clean_fft_output(out, size, 2, expected)
    tr_lo = f.truncated_lo + g.truncated_lo
    tr_hi = max(1.0 - expected - tr_lo, 0.0)
    spec = QuantizationSpec(f.spec.delta, f.spec.k_min + g.spec.k_min,
                            f.spec.k_max + g.spec.k_max, f.spec.tail_tolerance)
    return QuantizedDensity(spec, out, truncated_lo=tr_lo, truncated_hi=tr_hi)


def _coarsen_spec_for(f: QuantizedDensity, delta: float, max_points: int) -> QuantizationSpec:
    # smallest power-of-two multiple of `delta` that keeps the array bounded
    span = f.spec.hi - f.spec.lo
    while span / delta > max_points:
        delta *= 2
    k_min = math.floor(f.spec.lo / delta) - 1
    k_max = math.ceil(f.spec.hi / delta) + 1
    return QuantizationSpec(delta, k_min, k_max, f.spec.tail_tolerance)


def evolve(
    base: QuantizedDensity,
    omegas,
    d_l: int,
    d_r: int,
    s: int,
    max_points: int = 1 << 21,
    return_levels: bool = False,
):
    """Run the min/sum level recursion and return the density of X_s.

    ``omegas`` supplies the level weights omega_0 .. omega_s (leaf level
    first). Each level the (d_L-1)-fold convolution of X is re-binned onto
    the grid of the next weighted-channel term, so geometric weights give
    the step-doubling behavior that keeps array sizes bounded.

    With return_levels=True, returns a list of (level, f_X, f_Y) instead.
    """
    omegas = list(omegas)
    if s < 0:
        raise ValueError("s must be >= 0")
    if len(omegas) < s + 1:
        raise ValueError(f"need omega_0..omega_{s}, got {len(omegas)} weights")
    if d_l < 2 or d_r < 2:
        raise ValueError("degrees must be >= 2")
    tol = base.spec.tail_tolerance
    levels = []
    f_y = scale_density(base, omegas[0])
    for level in range(s + 1):
        f_x = min_density(f_y, d_r - 1)
        levels.append((level, f_x, f_y))
        if f_x.truncated_mass > tol:
            raise TailOverflowError(
                f"truncated mass {f_x.truncated_mass:.3e} above {tol:.1e} at level {level}"
            )
        if level == s:
            break
        summed = convolve_power(f_x, d_l - 1)
        g = scale_density(base, omegas[level + 1])
        target = _coarsen_spec_for(summed, g.spec.delta, max_points)
        summed = regrid(summed, target)
        if abs(g.spec.delta - target.delta) > 1e-12 * target.delta:
            g = regrid(g, _coarsen_spec_for(g, target.delta, max_points))
        f_y = convolve_pair(summed, g)
    return levels if return_levels else levels[-1][1]


def log_laplace(f: QuantizedDensity, t: float) -> float:
    """ln E[exp(-t X)] of the lattice distribution."""
    nz = f.pdf > 0
    if not nz.any():
        return -math.inf
    return float(logsumexp(np.log(f.pdf[nz]) - t * f.x[nz]))


def laplace(f: QuantizedDensity, t: float) -> float:
    """E[exp(-t X)] as the grid sum of mass * exp(-t * grid point).

    For t > 0 a truncated lower tail biases the value downward; a warning
    flags the estimate as a possible underestimate when that mass is not
    negligible.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t > 0 and f.truncated_lo > 1e-12:
        warnings.warn(
            f"lower-tail truncated mass {f.truncated_lo:.2e}; E exp(-tX) may be underestimated",
            RuntimeWarning,
            stacklevel=2,
        )
    val = log_laplace(f, t)
    return math.exp(val) if val < 709 else math.inf


def _golden_min(func, a: float, b: float, xtol: float):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = func(c), func(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = func(d)
    t = (a + b) / 2.0
    return t, func(t)


def min_laplace(f: QuantizedDensity, t_max: float | None = None):
    """Minimize E[exp(-t X)] over t in [0, t_max]; returns (t_star, value).

    Coarse scan over T_SEARCH_POINTS points, then golden-section refinement
    of the bracketing interval (log E exp(-tX) is convex in t, so the local
    bracket is global). t_max defaults to a moment-based bracket that covers
    the Gaussian-like minimizer mean/variance with a wide margin. A warning
    is emitted when the minimum sits on the t_max boundary.
    """
    if t_max is None:
        m, v = f.mean(), f.var()
        t_max = 4.0 * max(m, 0.0) / v + 4.0 / math.sqrt(v)
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    ts = np.linspace(0.0, t_max, T_SEARCH_POINTS + 1)
    vals = np.array([log_laplace(f, t) for t in ts])
    i = int(np.argmin(vals))
    if i == len(ts) - 1:
        warnings.warn("minimum of E exp(-tX) hit the t_max boundary", RuntimeWarning,
                      stacklevel=2)
        return float(ts[-1]), math.exp(vals[-1])
    if i == 0:
        # nonpositive drift: minimum at t = 0 (value = retained mass)
        lo, hi = ts[0], ts[1]
    else:
        lo, hi = ts[i - 1], ts[i + 1]
    t_star, log_val = _golden_min(lambda t: log_laplace(f, t), lo, hi, T_SEARCH_XTOL)
    if vals[0] <= log_val:
        t_star, log_val = 0.0, float(vals[0])
    return float(t_star), math.exp(log_val)
