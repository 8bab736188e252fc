"""MBIOS channel models: BSC and binary-input AWGN.

Bits are mapped to symbols as 0 -> +1, 1 -> -1 for the AWGN channel; the
BSC transports the bits themselves. LLRs are positive when the evidence
favors bit 0.

Two LLR scalings appear on purpose. The LP decoder consumes the raw LLR
(2y/sigma^2 for AWGN); density evolution and the tree process use the
positively rescaled form 1 + noise, which has the same sign pattern and
keeps the grids sigma-independent. Rescaling by a positive constant changes
neither the LP optimum nor any min/sum sign, so the two views are
interchangeable where only signs or thresholds matter.

RNG: numpy's default PCG64 generator, always explicitly seeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .density import (
    DEFAULT_DELTA,
    DEFAULT_SPAN_SIGMAS,
    DEFAULT_TAIL_TOLERANCE,
    QuantizationSpec,
    QuantizedDensity,
    from_point_masses,
    quantize_cdf,
)

__all__ = [
    "BiAwgn",
    "Bsc",
    "ChannelModel",
    "GridTooSmallError",
    "llr",
    "llr_density",
    "parse_channel_spec",
    "sample",
    "scaled_llr_samples",
]


class GridTooSmallError(ValueError):
    """Quantization grid leaves more tail mass than the tolerance allows."""


@dataclass(frozen=True)
class Bsc:
    """Binary symmetric channel with crossover probability p."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 0.5:
            raise ValueError("BSC requires 0 < p < 1/2")

    @property
    def llr_magnitude(self) -> float:
        return math.log((1.0 - self.p) / self.p)

    def __str__(self) -> str:
        return f"bsc:{self.p:g}"


@dataclass(frozen=True)
class BiAwgn:
    """Binary-input AWGN channel with noise standard deviation sigma."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("BI-AWGN requires sigma > 0")

    def __str__(self) -> str:
        return f"biawgn:{self.sigma:g}"


ChannelModel = Bsc | BiAwgn


def parse_channel_spec(spec: str) -> ChannelModel:
    """Parse 'bsc:P' or 'biawgn:SIGMA'."""
    try:
        kind, _, value = spec.partition(":")
        param = float(value)
    except ValueError as exc:
        raise ValueError(f"bad channel spec {spec!r}") from exc
    if kind == "bsc":
        return Bsc(param)
    if kind == "biawgn":
        return BiAwgn(param)
    raise ValueError(f"unknown channel kind {kind!r} (expected bsc or biawgn)")


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample(ch: ChannelModel, codeword, seed) -> np.ndarray:
    """Transmit a codeword and return the received word.

    AWGN: y_i = (-1)^{x_i} + noise. BSC: y_i is x_i flipped with
    probability p. ``seed`` may be an int or an existing Generator.
    """
    rng = _as_rng(seed)
    bits = np.asarray(codeword, dtype=np.int64)
    if isinstance(ch, BiAwgn):
        symbols = 1.0 - 2.0 * bits
        return symbols + ch.sigma * rng.standard_normal(bits.shape)
    flips = rng.random(bits.shape) < ch.p
    return np.asarray((bits ^ flips).astype(np.float64))


def llr(ch: ChannelModel, received) -> np.ndarray:
    """Raw log-likelihood ratios of a received word."""
    y = np.asarray(received, dtype=np.float64)
    if isinstance(ch, BiAwgn):
        return 2.0 * y / (ch.sigma * ch.sigma)
    mag = ch.llr_magnitude
    return np.where(y < 0.5, mag, -mag)


def scaled_llr_samples(ch: ChannelModel, rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. scaled-LLR draws under all-zero transmission.

    AWGN gives 1 + noise; the BSC gives +/- llr_magnitude with the minus
    sign at probability p. Only the (positive) scale differs from raw LLRs.
    """
    if isinstance(ch, BiAwgn):
        return 1.0 + ch.sigma * rng.standard_normal(shape)
    mag = ch.llr_magnitude
    return np.where(rng.random(shape) < ch.p, -mag, mag)


def default_quantization(ch: ChannelModel, delta: float = DEFAULT_DELTA,
                         span_sigmas: float = DEFAULT_SPAN_SIGMAS,
                         tail_tolerance: float = DEFAULT_TAIL_TOLERANCE) -> QuantizationSpec:
    if isinstance(ch, BiAwgn):
        return QuantizationSpec.centered(1.0, span_sigmas * ch.sigma, delta, tail_tolerance)
    half = ch.llr_magnitude + 2 * delta
    return QuantizationSpec.centered(0.0, half, delta, tail_tolerance)


def llr_density(ch: ChannelModel, spec: QuantizationSpec | None = None) -> QuantizedDensity:
    """Scaled-LLR density under all-zero transmission, quantized on a grid.

    AWGN: the law of 1 + N(0, sigma^2), binned exactly by its c.d.f.
    BSC: point masses (1-p) at +llr_magnitude and p at -llr_magnitude,
    snapped to the nearest grid points.

    Raises GridTooSmallError when the grid leaves more than the spec's
    tail tolerance outside.
    """
    if spec is None:
        spec = default_quantization(ch)
    if isinstance(ch, BiAwgn):
        dens = quantize_cdf(lambda x: ndtr((x - 1.0) / ch.sigma), spec)
    else:
        mag = ch.llr_magnitude
        dens = from_point_masses([(-mag, ch.p), (mag, 1.0 - ch.p)], spec)
    if dens.truncated_mass > spec.tail_tolerance:
        raise GridTooSmallError(
            f"grid [{spec.lo:.3g}, {spec.hi:.3g}] leaves {dens.truncated_mass:.3e} mass outside"
        )
    return dens
