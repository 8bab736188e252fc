import math

import numpy as np
import pytest

from lpdecode.bounds import (
    BracketError,
    ConditionFailsError,
    GirthTooSmallError,
    SigmaAboveThresholdError,
    bsc_threshold_search,
    eb_n0_db,
    error_bound,
    gauss_min_moment,
    general_error_bound,
    max_depth_for_girth,
    mbios_condition,
    nonuniform_condition,
    sigma0_search,
    tree_failure_bound,
    uniform_condition,
)
from lpdecode.channel import BiAwgn, Bsc, llr_density
from lpdecode.density import QuantizationSpec, from_point_masses

from oracles import bsc_uniform_c


def test_min_moment_at_t_zero():
    """At t = 0 the min integral is exactly 1/n: c1(0) = 1, c(0) >= 1."""
    for n in (2, 5, 9):
        assert gauss_min_moment(0.7, n, 0.0) == pytest.approx(1.0, abs=1e-9)
    rep = uniform_condition(0.55, 3, 6)
    assert rep.t_star > 0  # the optimum cannot sit at t = 0


def test_uniform_condition_holds_at_055():
    rep = uniform_condition(0.55, 3, 6)
    assert rep.condition_holds and rep.c < 1
    assert rep.c1 > 0 and rep.c2 > 0


def test_uniform_condition_fails_at_high_noise():
    rep = uniform_condition(0.75, 3, 6)
    assert not rep.condition_holds


def test_uniform_condition_degree_guard():
    with pytest.raises(ValueError):
        uniform_condition(0.5, 2, 6)


def test_mbios_matches_uniform_for_awgn():
    """Quadrature and quantized-density paths agree on c."""
    for sigma in (0.5, 0.57):
        base = llr_density(BiAwgn(sigma))
        a = uniform_condition(sigma, 3, 6)
        b = mbios_condition(base, 3, 6)
        assert abs(a.c - b.c) < 1e-3


def test_mbios_bsc_matches_closed_form():
    """Two-point density path against the exact closed-form expression."""
    for p in (0.01, 0.02, 0.04):
        base = llr_density(Bsc(p))
        got = mbios_condition(base, 3, 6).c
        assert got == pytest.approx(bsc_uniform_c(p, 3, 6), abs=1e-3)


def test_mbios_degenerate_point_mass_holds():
    """A noiseless channel (single positive atom) always satisfies it."""
    spec = QuantizationSpec(0.01, -10, 400)
    base = from_point_masses([(2.9444, 1.0)], spec)
    rep = mbios_condition(base, 3, 6, t_max=30.0)
    assert rep.condition_holds


def test_nonuniform_reports_rho(g36_girth6):
    rep = nonuniform_condition(BiAwgn(0.6), 3, 6, 2)
    assert rep.condition_holds
    assert rep.rho == pytest.approx(1.0 / (rep.t_star * 0.36), rel=1e-9)
    assert rep.prefactor == pytest.approx(
        (5 * math.exp(-1 / (2 * 0.36))) ** -3.0, rel=1e-9
    )


def test_sigma0_s0(g36_girth6):
    sigma0, c_at = sigma0_search(3, 6, 0)
    assert sigma0 == pytest.approx(0.605, abs=0.005)
    assert c_at(0.55) < 1 < c_at(0.65)


def test_sigma0_monotone_in_sigma():
    _, c_at = sigma0_search(3, 6, 1)
    cs = [c_at(s) for s in np.linspace(0.45, 0.75, 20)]
    assert all(b >= a - 1e-9 for a, b in zip(cs, cs[1:]))


def test_sigma0_exceeds_uniform_threshold():
    """Decoupling the exponential tilt must help: level-0 threshold above
    the uniform-weight one."""
    sigma0, _ = sigma0_search(3, 6, 0)
    lo, hi = 0.5, 0.7
    while hi - lo > 0.002:
        mid = (lo + hi) / 2
        if uniform_condition(mid, 3, 6).condition_holds:
            lo = mid
        else:
            hi = mid
    assert sigma0 > (lo + hi) / 2


def test_sigma0_bracket_failure():
    with pytest.raises(BracketError):
        sigma0_search(3, 6, 0, bracket=(0.9, 1.0))


def test_sigma0_rejects_other_presets():
    with pytest.raises(ValueError):
        sigma0_search(3, 6, 0, weight_preset="uniform")


def test_bsc_threshold_small_s():
    """Level 0 lands near the uniform-ish regime, far below the large-level
    threshold (the decoupled tilt already helps a little)."""
    p0, c_at = bsc_threshold_search(3, 6, 0)
    assert 0.02 < p0 < 0.03
    assert c_at(0.01) < 1 < c_at(0.05)


def test_error_bound_shape():
    b16 = error_bound(1024, 16, 0.55, 3, 6, 0)
    b20 = error_bound(1024, 20, 0.55, 3, 6, 0)
    assert 0 < b20 < b16 <= 1
    # prefactor for (3,6) is e^{3/(2 sigma^2)} / 125
    rep = nonuniform_condition(BiAwgn(0.55), 3, 6, 0)
    assert rep.prefactor == pytest.approx(math.exp(3 / (2 * 0.55**2)) / 125, rel=1e-9)


def test_error_bound_rejects_high_sigma():
    with pytest.raises(SigmaAboveThresholdError):
        error_bound(1024, 16, 0.64, 3, 6, 0)


def test_error_bound_girth_guard():
    with pytest.raises(GirthTooSmallError):
        error_bound(1024, 16, 0.55, 3, 6, 3)  # T = 3 not > s = 3


def test_general_error_bound():
    rep = uniform_condition(0.5, 3, 6)
    b16 = general_error_bound(1000, 16, rep)
    b20 = general_error_bound(1000, 20, rep)
    assert 0 < b20 < b16 < 1
    # monotone decreasing in girth at fixed n and sigma, down to zero
    rep55 = uniform_condition(0.55, 3, 6)
    b24 = general_error_bound(10_000, 24, rep55)
    b28 = general_error_bound(10_000, 28, rep55)
    assert 0 < b28 < b24 < 1
    huge = general_error_bound(10_000, 200, rep55)
    assert huge == pytest.approx(0.0, abs=1e-300)


def test_general_error_bound_condition_guard():
    rep = uniform_condition(0.70, 3, 6)
    with pytest.raises(ConditionFailsError):
        general_error_bound(1000, 16, rep)


def test_tree_failure_bound_levels():
    # pure geometric weights: bound = (min_t E exp(-t X_{T-1}))^{d_L}
    b = tree_failure_bound(BiAwgn(0.5), 3, 6, T=2)
    assert 0 < b < 1
    # far above threshold nothing bites
    assert tree_failure_bound(BiAwgn(1.5), 3, 6, T=2, s=0) == 1.0


def test_max_depth_for_girth():
    assert max_depth_for_girth(8) == 1
    assert max_depth_for_girth(10) == 2
    assert max_depth_for_girth(12) == 2
    assert max_depth_for_girth(13) == 3
    with pytest.raises(ValueError):
        max_depth_for_girth(math.inf)


def test_eb_n0_reference_points():
    assert eb_n0_db(0.735, 0.5) == pytest.approx(2.67, abs=0.01)
    assert eb_n0_db(0.605, 0.5) == pytest.approx(4.36, abs=0.01)
    with pytest.raises(ValueError):
        eb_n0_db(0.7, 1.5)
