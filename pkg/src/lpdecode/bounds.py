"""Contraction conditions, noise thresholds, and decoding error bounds.

Everything here reduces to one question: is the constant

    c = min_t  E exp(-t X) * ((d_R - 1) * B) ** (1 / (d_L - 2))

below 1? X is a stage of the min/sum tree recursion and B a channel
constant. Three flavors appear:

* uniform_condition: X = X_0 and B must share the same t as the first
  factor (B becomes E exp(-t * llr), closed form for AWGN). Evaluated by
  quadrature, independent of the quantized pipeline.
* mbios_condition: the same uniform-weight condition evaluated on any
  quantized LLR density (the two paths agree for AWGN and cross-check each
  other).
* the finite-level condition behind sigma0_search / bsc_threshold_search:
  X = X_s evolved with geometric level weights, and B is the t-decoupled
  channel constant min_t E exp(-t * llr) (exp(-1/(2 sigma^2)) for AWGN,
  2 sqrt(p(1-p)) for the BSC). This is the condition that produces the
  strong thresholds; the uniform condition alone is markedly weaker (for
  the (3,6) BSC it certifies only p ~ 0.02, not the ~0.05 the finite-level
  computation reaches).

When c < 1 the word error probability of LP decoding on an n-variable
graph of girth g is at most prefactor * n * c ** ((d_L-1) ** (T - s)) with
T = floor((g - 1) / 4), which is doubly exponential in the girth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .channel import BiAwgn, Bsc, ChannelModel, llr_density
from .density import (
    QuantizedDensity,
    evolve,
    log_laplace,
    min_density,
    min_laplace,
)
from .deviation import WeightVector

__all__ = [
    "BoundReport",
    "BracketError",
    "ConditionFailsError",
    "GirthTooSmallError",
    "REFERENCE_SIGMA0_36",
    "SigmaAboveThresholdError",
    "bsc_threshold_search",
    "eb_n0_db",
    "error_bound",
    "evolved_min_laplace",
    "general_error_bound",
    "mbios_condition",
    "nonuniform_condition",
    "sigma0_search",
    "tree_failure_bound",
    "uniform_condition",
]

QUAD_SPAN_SIGMAS = 12.0
QUAD_REL_TOL = 1e-10
BISECTION_TOL_SIGMA = 0.002
BISECTION_TOL_P = 0.0005

# previously reported (3,6) BI-AWGN thresholds, by evolution level; the
# table1 CLI subcommand prints computed values next to these
REFERENCE_SIGMA0_36 = {
    0: 0.605, 1: 0.635, 2: 0.66, 3: 0.675, 4: 0.685, 6: 0.70, 8: 0.71,
    10: 0.715, 12: 0.72, 14: 0.725, 18: 0.73, 22: 0.735,
}


class BracketError(RuntimeError):
    """Bisection bracket does not straddle the threshold."""


class SigmaAboveThresholdError(ValueError):
    """Requested noise level sits above the certified threshold."""


class GirthTooSmallError(ValueError):
    """Girth leaves no room for the requested evolution level."""


class ConditionFailsError(ValueError):
    """The contraction condition does not hold at these parameters."""


@dataclass
class BoundReport:
    """Outcome of one condition evaluation."""

    regime: str  # "uniform" or "nonuniform"
    channel: str
    d_l: int
    d_r: int
    c: float
    t_star: float
    prefactor: float
    condition_holds: bool
    c1: float | None = None  # uniform regime factor values at t_star
    c2: float | None = None
    s: int | None = None  # evolution level (nonuniform regime)
    rho: float | None = None  # implied uniform suffix weight (AWGN)

    def __post_init__(self):
        if self.condition_holds != (self.c < 1.0):
            raise ValueError("condition_holds must mirror c < 1")
        if self.c <= 0:
            raise ValueError("c must be positive")


def _require_wide_degrees(d_l: int, d_r: int):
    if d_l <= 2 or d_r <= 2:
        raise ValueError("conditions require d_L > 2 and d_R > 2")


def _golden_min(func, a, b, xtol=1e-6):
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


def _minimize_scan(func, t_max, points=120, xtol=1e-6):
    ts = np.linspace(0.0, t_max, points + 1)
    vals = np.array([func(t) for t in ts])
    i = int(np.argmin(vals))
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    t_star, val = _golden_min(func, lo, hi, xtol)
    if vals[0] <= val:
        return float(ts[0]), float(vals[0])
    return float(t_star), float(val)


def gauss_min_moment(sigma: float, n: int, t: float) -> float:
    """E exp(-t * min of n i.i.d. N(0, sigma^2)) by adaptive quadrature."""
    span = QUAD_SPAN_SIGMAS * sigma

    def integrand(x):
        z = x / sigma
        pdf = math.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))
        return n * (1.0 - ndtr(z)) ** (n - 1) * pdf * math.exp(-t * x)

    val, _ = integrate.quad(integrand, -span, span, epsrel=QUAD_REL_TOL, limit=400)
    return val


def uniform_condition(sigma: float, d_l: int, d_r: int,
                      t_max: float | None = None) -> BoundReport:
    """Uniform-weight contraction condition for BI-AWGN, by quadrature.

    c1(t) = E exp(-t X_0) with X_0 = 1 + min of (d_R - 1) Gaussians,
    c2(t) = (d_R - 1) E exp(-t (1 + noise)), and c = min_t c1 * c2^(1/(d_L-2)).
    At t = 0 the integral collapses to 1/(d_R-1), so c(0) >= 1: the minimum
    is always interior when the condition holds.
    """
    _require_wide_degrees(d_l, d_r)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if t_max is None:
        t_max = 4.0 / (sigma * sigma)
    drm = d_r - 1

    def log_c(t):
        # the min-moment integral already carries the d_R - 1 multiplicity
        c1 = math.exp(-t) * gauss_min_moment(sigma, drm, t)
        log_c2 = math.log(drm) + 0.5 * t * t * sigma * sigma - t
        return math.log(c1) + log_c2 / (d_l - 2)

    t_star, log_val = _minimize_scan(log_c, t_max)
    c1 = math.exp(-t_star) * gauss_min_moment(sigma, drm, t_star)
    c2 = drm * math.exp(0.5 * t_star ** 2 * sigma ** 2 - t_star)
    c = math.exp(log_val)
    return BoundReport(
        regime="uniform", channel=f"biawgn:{sigma:g}", d_l=d_l, d_r=d_r,
        c=c, t_star=t_star, prefactor=1.0, condition_holds=c < 1.0,
        c1=c1, c2=c2,
    )


def mbios_condition(base: QuantizedDensity, d_l: int, d_r: int,
                    t_max: float | None = None,
                    channel: str = "density") -> BoundReport:
    """Uniform-weight condition evaluated on a quantized LLR density.

    Works for any MBIOS channel given its (scaled) LLR density under
    all-zero transmission; the minimum of d_R - 1 copies is taken through
    the c.d.f. identity so discrete densities (BSC) are handled exactly.
    """
    _require_wide_degrees(d_l, d_r)
    drm = d_r - 1
    f_min = min_density(base, drm)
    if t_max is None:
        m, v = base.mean(), base.var()
        t_max = 4.0 * max(m, 0.0) / v + 4.0 / math.sqrt(v) if v > 0 else 4.0

    def log_c(t):
        return log_laplace(f_min, t) + (math.log(drm) + log_laplace(base, t)) / (d_l - 2)

    t_star, log_val = _minimize_scan(log_c, t_max)
    c = math.exp(log_val)
    c1 = math.exp(log_laplace(f_min, t_star))
    c2 = drm * math.exp(log_laplace(base, t_star))
    return BoundReport(
        regime="uniform", channel=channel, d_l=d_l, d_r=d_r,
        c=c, t_star=t_star, prefactor=1.0, condition_holds=c < 1.0,
        c1=c1, c2=c2,
    )


def evolved_min_laplace(ch: ChannelModel, d_l: int, d_r: int, s: int,
                        quant=None, t_max: float | None = None):
    """min_t E exp(-t X_s) with geometric level weights; returns (t*, value)."""
    base = llr_density(ch, quant)
    omegas = WeightVector.geometric(s + 1, d_l).omegas()
    f_x = evolve(base, omegas, d_l, d_r, s)
    return min_laplace(f_x, t_max)


def _suffix_constant(ch: ChannelModel) -> float:
    # min over t of E exp(-t * scaled llr), in closed form per channel
    if isinstance(ch, BiAwgn):
        return math.exp(-1.0 / (2.0 * ch.sigma * ch.sigma))
    return 2.0 * math.sqrt(ch.p * (1.0 - ch.p))


def nonuniform_condition(ch: ChannelModel, d_l: int, d_r: int, s: int,
                         quant=None) -> BoundReport:
    """Finite-level condition: min_t E exp(-t X_s) * ((d_R-1) B)^(1/(d_L-2)) < 1.

    B is the channel's t-decoupled constant (see module docstring); the
    decoupling is what lets the condition certify noise levels the uniform
    condition cannot.
    """
    _require_wide_degrees(d_l, d_r)
    if s < 0:
        raise ValueError("s must be >= 0")
    t_star, a_val = evolved_min_laplace(ch, d_l, d_r, s, quant)
    b_const = _suffix_constant(ch)
    log_tail = (math.log(d_r - 1) + math.log(b_const)) / (d_l - 2)
    # far below threshold the Laplace minimum underflows; clamp in log space
    log_c = (math.log(a_val) if a_val > 0 else -745.0) + log_tail
    c = math.exp(max(log_c, -700.0))
    prefactor = math.exp(-d_l / (d_l - 2) * (math.log(d_r - 1) + math.log(b_const)))
    rho = None
    if isinstance(ch, BiAwgn) and t_star > 0:
        rho = 1.0 / (t_star * ch.sigma * ch.sigma)
    return BoundReport(
        regime="nonuniform", channel=str(ch), d_l=d_l, d_r=d_r,
        c=c, t_star=t_star, prefactor=prefactor, condition_holds=c < 1.0,
        s=s, rho=rho,
    )


def _bisect_threshold(holds, lo, hi, tol):
    if not holds(lo):
        raise BracketError(f"condition already fails at the lower bracket {lo}")
    if holds(hi):
        raise BracketError(f"condition still holds at the upper bracket {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sigma0_search(d_l: int, d_r: int, s: int, weight_preset: str = "geometric",
                  bracket=(0.3, 1.0), tol: float = BISECTION_TOL_SIGMA,
                  quant=None):
    """Largest AWGN sigma at which the finite-level condition holds.

    Bisection over sigma; returns (sigma0, c_at) where c_at(sigma) gives
    the contraction constant for use in error bounds. Table granularity is
    0.005, so the default bisection tolerance of 0.002 is comfortably
    inside it.
    """
    if weight_preset != "geometric":
        raise ValueError("threshold search is defined for the geometric preset")

    def c_at(sigma: float) -> float:
        return nonuniform_condition(BiAwgn(sigma), d_l, d_r, s, quant).c

    sigma0 = _bisect_threshold(lambda v: c_at(v) < 1.0, bracket[0], bracket[1], tol)
    return sigma0, c_at


def bsc_threshold_search(d_l: int, d_r: int, s: int, bracket=(0.005, 0.2),
                         tol: float = BISECTION_TOL_P, quant=None):
    """Largest BSC crossover p at which the finite-level condition holds."""

    def c_at(p: float) -> float:
        return nonuniform_condition(Bsc(p), d_l, d_r, s, quant).c

    p0 = _bisect_threshold(lambda v: c_at(v) < 1.0, bracket[0], bracket[1], tol)
    return p0, c_at


def _pow_capped(c: float, exponent: float) -> float:
    # c ** exponent for c < 1 and potentially astronomical exponents
    if c <= 0:
        return 0.0
    return math.exp(max(exponent * math.log(c), -745.0)) if c < 1 else c ** exponent


def max_depth_for_girth(girth_len) -> int:
    """Largest T with 4T < girth."""
    if math.isinf(girth_len):
        raise ValueError("forest has no decoding horizon")
    return (int(girth_len) - 1) // 4


def error_bound(n: int, girth_len: int, sigma: float, d_l: int, d_r: int,
                s: int, quant=None) -> float:
    """Word-error upper bound for BI-AWGN at noise sigma and level s.

    prefactor * n * c ** ((d_L - 1) ** (T - s)) with T = floor((girth-1)/4),
    clipped to 1. Raises when the girth leaves no room above s or when
    sigma is above the level-s threshold (c >= 1).
    """
    T = max_depth_for_girth(girth_len)
    if T <= s:
        raise GirthTooSmallError(f"girth {girth_len} admits T={T}, need T > s={s}")
    report = nonuniform_condition(BiAwgn(sigma), d_l, d_r, s, quant)
    if not report.condition_holds:
        raise SigmaAboveThresholdError(
            f"c = {report.c:.4f} >= 1 at sigma={sigma} for s={s}"
        )
    exponent = float(d_l - 1) ** (T - s)
    return min(1.0, report.prefactor * n * _pow_capped(report.c, exponent))


def general_error_bound(n: int, girth_len: int, report: BoundReport) -> float:
    """Word-error upper bound n * c ** ((d_L - 1) ** T) from a uniform-regime
    condition report (any MBIOS channel, any d_L, d_R > 2)."""
    if report.regime != "uniform":
        raise ValueError("general_error_bound consumes uniform-regime reports")
    if not report.condition_holds:
        raise ConditionFailsError(f"c = {report.c:.4f} >= 1")
    T = max_depth_for_girth(girth_len)
    exponent = float(report.d_l - 1) ** T
    return min(1.0, n * _pow_capped(report.c, exponent))


def tree_failure_bound(ch: ChannelModel, d_l: int, d_r: int, T: int,
                       s: int | None = None, quant=None) -> float:
    """Analytic upper bound on the tree-process failure probability.

    P(sum of d_L copies of X_{T-1} <= 0) <= (min_t E exp(-t X_{T-1}))^d_L
    when s = T - 1 (pure geometric weights; valid for any degrees); for
    s < T - 1 the level gap is bridged by the channel's suffix constant,
    costing the usual prefactor. Returns 1.0 when nothing bites.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if s is None:
        s = T - 1
    if not 0 <= s <= T - 1:
        raise ValueError("need 0 <= s <= T - 1")
    if s == T - 1:
        _, a_val = evolved_min_laplace(ch, d_l, d_r, s, quant)
        return min(1.0, a_val ** d_l)
    report = nonuniform_condition(ch, d_l, d_r, s, quant)
    if not report.condition_holds:
        return 1.0
    exponent = d_l * float(d_l - 1) ** (T - s - 1)
    return min(1.0, report.prefactor * _pow_capped(report.c, exponent))


def eb_n0_db(sigma: float, rate: float) -> float:
    """Eb/N0 in dB for BPSK at unit symbol energy: 1 / (2 * rate * sigma^2)."""
    if not 0 < rate < 1:
        raise ValueError("rate must be in (0, 1)")
    return -10.0 * math.log10(2.0 * rate * sigma * sigma)
