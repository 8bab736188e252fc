import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpdecode.channel import (
    BiAwgn,
    Bsc,
    GridTooSmallError,
    default_quantization,
    llr,
    llr_density,
    parse_channel_spec,
    sample,
    scaled_llr_samples,
)
from lpdecode.density import QuantizationSpec


def test_parameter_validation():
    with pytest.raises(ValueError):
        Bsc(0.5)
    with pytest.raises(ValueError):
        Bsc(0.0)
    with pytest.raises(ValueError):
        BiAwgn(0.0)


def test_parse_channel_spec_roundtrip():
    assert parse_channel_spec("bsc:0.05") == Bsc(0.05)
    assert parse_channel_spec("biawgn:0.7") == BiAwgn(0.7)
    assert str(Bsc(0.05)) == "bsc:0.05"
    with pytest.raises(ValueError):
        parse_channel_spec("laplace:1.0")
    with pytest.raises(ValueError):
        parse_channel_spec("bsc")


def test_awgn_noiseless_limit():
    y = sample(BiAwgn(1e-9), np.zeros(64, dtype=int), 0)
    assert np.allclose(y, 1.0, atol=1e-6)
    y1 = sample(BiAwgn(1e-9), np.ones(64, dtype=int), 0)
    assert np.allclose(y1, -1.0, atol=1e-6)


def test_bsc_flip_rate_monte_carlo():
    p = 0.1
    n = 100_000
    y = sample(Bsc(p), np.zeros(n, dtype=int), 123)
    flips = int(y.sum())
    std = math.sqrt(n * p * (1 - p))
    assert abs(flips - n * p) <= 3 * std


def test_sampling_determinism():
    for ch in (Bsc(0.2), BiAwgn(0.8)):
        a = sample(ch, np.zeros(50, dtype=int), 42)
        b = sample(ch, np.zeros(50, dtype=int), 42)
        assert np.array_equal(a, b)


def test_llr_awgn_formula():
    # 2y/sigma^2 at sigma = 1, y = 0.5
    assert llr(BiAwgn(1.0), [0.5])[0] == pytest.approx(1.0)


def test_llr_bsc_uninformative_limit():
    assert abs(llr(Bsc(0.5 - 1e-12), [0.0])[0]) < 1e-8


@given(st.floats(-3, 3), st.floats(0.2, 2.0))
@settings(max_examples=40, deadline=None)
def test_llr_awgn_linearity(y, sigma):
    """Scaling the observation by sigma^2/2 recovers it as its own LLR."""
    lam = llr(BiAwgn(sigma), [y * sigma * sigma / 2.0])[0]
    assert lam == pytest.approx(y, rel=1e-12, abs=1e-12)


def test_llr_bsc_signs():
    ch = Bsc(0.05)
    lam = llr(ch, [0.0, 1.0])
    assert lam[0] == pytest.approx(math.log(19))
    assert lam[1] == pytest.approx(-math.log(19))


def test_llr_density_awgn_moments():
    dens = llr_density(BiAwgn(0.7))
    assert dens.mean() == pytest.approx(1.0, abs=1e-3)
    assert dens.std() == pytest.approx(0.7, abs=1e-3)
    assert dens.total_mass() + dens.truncated_mass == pytest.approx(1.0, abs=1e-9)


def test_llr_density_bsc_two_points():
    dens = llr_density(Bsc(0.05))
    support = dens.pdf[dens.pdf > 0]
    assert len(support) == 2
    assert dens.total_mass() == pytest.approx(1.0)
    xs = dens.x[dens.pdf > 0]
    mag = math.log(19)
    assert xs[0] == pytest.approx(-mag, abs=dens.spec.delta)
    assert xs[1] == pytest.approx(mag, abs=dens.spec.delta)
    assert dens.pdf[dens.pdf > 0][0] == pytest.approx(0.05)


def test_llr_density_grid_too_small():
    spec = QuantizationSpec.centered(1.0, 2 * 0.7, delta=0.005)  # only +-2 sigma
    with pytest.raises(GridTooSmallError):
        llr_density(BiAwgn(0.7), spec)


def test_output_symmetry_monte_carlo():
    """Mirrored all-zero LLR samples match all-one LLR samples in law."""
    ch = BiAwgn(0.9)
    n = 60_000
    lam0 = llr(ch, sample(ch, np.zeros(n, dtype=int), 5))
    lam1 = llr(ch, sample(ch, np.ones(n, dtype=int), 6))
    a = np.sort(-lam0)
    b = np.sort(lam1)
    # two-sample Kolmogorov distance via the merged grid
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / n
    fb = np.searchsorted(b, grid, side="right") / n
    assert np.max(np.abs(fa - fb)) < 0.012


def test_llr_samples_match_density_cdf():
    """Empirical c.d.f. of llr(sample(...)) tracks the quantized density.

    The density uses the scaled convention (1 + noise), so the raw LLRs are
    mapped back through the positive factor sigma^2/2 before comparing.
    """
    ch = BiAwgn(0.7)
    n = 100_000
    raw = llr(ch, sample(ch, np.zeros(n, dtype=int), 17))
    samples = raw * ch.sigma**2 / 2.0
    dens = llr_density(ch)
    edges = dens.x + dens.spec.delta / 2.0
    emp = np.searchsorted(np.sort(samples), edges, side="right") / n
    assert np.max(np.abs(emp - dens.cdf)) < 0.01

    scaled = scaled_llr_samples(ch, np.random.default_rng(17), n)
    emp2 = np.searchsorted(np.sort(scaled), edges, side="right") / n
    assert np.max(np.abs(emp2 - dens.cdf)) < 0.01


def test_scaled_vs_raw_llr_consistency():
    """Raw LLRs are the scaled ones times 2/sigma^2 (AWGN)."""
    ch = BiAwgn(0.6)
    rng = np.random.default_rng(3)
    y = sample(ch, np.zeros(1000, dtype=int), 4)
    raw = llr(ch, y)
    assert np.allclose(raw * ch.sigma**2 / 2.0 - 1.0, y - 1.0)


def test_default_quantization_spans():
    spec = default_quantization(BiAwgn(0.7))
    assert spec.lo <= 1 - 12 * 0.7 and spec.hi >= 1 + 12 * 0.7
    spec_bsc = default_quantization(Bsc(0.05))
    assert spec_bsc.lo <= -math.log(19) and spec_bsc.hi >= math.log(19)
