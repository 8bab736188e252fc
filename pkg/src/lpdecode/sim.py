"""Monte Carlo oracles: the min/sum tree process and end-to-end LP decoding.

The tree process materializes one array per level and trial chunk rather
than the tree itself: level l holds the values of all its min/sum nodes for
a whole chunk of independent trials, so memory is O(chunk * level width)
and the inner loops are plain numpy reductions.

Determinism contract: a report is reproducible from (seed, trials) with the
default chunk size; the chunk size takes part in the draw order, so change
it only together with the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelModel, llr, sample, scaled_llr_samples
from .deviation import WeightVector, certify_local_optimality
from .lp import LpProblem, build_polytope, lp_decode
from .tanner import TannerGraph, girth

__all__ = [
    "LpSimReport",
    "TrialReport",
    "simulate_lp",
    "simulate_tree_process",
    "simulate_tree_values",
]

DEFAULT_CHUNK = 4096


@dataclass
class TrialReport:
    trials: int
    failures: int
    seed: int

    @property
    def estimate(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        e = self.estimate
        return math.sqrt(e * (1.0 - e) / self.trials)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "seed": self.seed,
        }


@dataclass
class LpSimReport(TrialReport):
    certified: int = 0
    certified_and_failed: int = 0

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["certified"] = self.certified
        d["certified_and_failed"] = self.certified_and_failed
        return d


def _level_widths(d_l: int, d_r: int, levels: int, top_width: int):
    """Width of the X and Y arrays per level, top level first element."""
    w_x = [0] * levels
    w_y = [0] * levels
    w_x[levels - 1] = top_width
    for l in range(levels - 1, -1, -1):
        w_y[l] = w_x[l] * (d_r - 1)
        if l > 0:
            w_x[l - 1] = w_y[l] * (d_l - 1)
    return w_x, w_y


def _run_tree_chunk(ch, rng, d_l, d_r, omegas, w_x, w_y, chunk):
    x = None
    for l in range(len(w_x)):
        gamma = scaled_llr_samples(ch, rng, (chunk, w_y[l]))
        y = omegas[l] * gamma
        if l > 0:
            y = y + x.reshape(chunk, w_y[l], d_l - 1).sum(axis=2)
        x = y.reshape(chunk, w_x[l], d_r - 1).min(axis=2)
    return x


def simulate_tree_process(d_l: int, d_r: int, depth: int, weights: WeightVector,
                          ch: ChannelModel, trials: int, seed: int,
                          chunk: int = DEFAULT_CHUNK) -> TrialReport:
    """Estimate the probability that the min/sum tree value is nonpositive.

    Each trial samples i.i.d. scaled LLRs on a depth-2T tree, runs the
    min/sum recursion with level weights omega_0..omega_{T-1}, and counts
    the trial as a failure when the sum of the d_L top-level values is <= 0.

    Qualitative sanity (not asserted anywhere): as the channel approaches
    pure noise (BSC p near 1/2) the minimum drifts negative and the
    estimate tends to 1 for deep trees.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if weights.depth != depth:
        raise ValueError("weight vector length must equal the process depth")
    omegas = [float(v) for v in weights.omegas()]
    w_x, w_y = _level_widths(d_l, d_r, depth, top_width=d_l)
    rng = np.random.default_rng(seed)
    failures = 0
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        x_top = _run_tree_chunk(ch, rng, d_l, d_r, omegas, w_x, w_y, k)
        failures += int((x_top.sum(axis=1) <= 0.0).sum())
        done += k
    return TrialReport(trials, failures, seed)


def simulate_tree_values(d_l: int, d_r: int, s: int, weights: WeightVector,
                         ch: ChannelModel, trials: int, seed: int,
                         chunk: int = DEFAULT_CHUNK) -> np.ndarray:
    """Sample the level-s min/sum value directly (one value per trial).

    The returned samples follow the same law as the density-evolution
    output for level s, which makes them the natural fidelity oracle.
    """
    if weights.depth != s + 1:
        raise ValueError("need s + 1 weights for level s")
    omegas = [float(v) for v in weights.omegas()]
    w_x, w_y = _level_widths(d_l, d_r, s + 1, top_width=1)
    rng = np.random.default_rng(seed)
    out = np.empty(trials)
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        out[done:done + k] = _run_tree_chunk(ch, rng, d_l, d_r, omegas, w_x, w_y, k)[:, 0]
        done += k
    return out


def simulate_lp(g: TannerGraph, ch: ChannelModel, trials: int, seed: int,
                mode: str = "float", certify_depth: int | None = None,
                weight_preset: str = "uniform",
                problem: LpProblem | None = None) -> LpSimReport:
    """Word-error Monte Carlo under all-zero transmission.

    A trial fails when the LP optimum is not the all-zero word or is not
    unique (ties count as failures). Each trial also runs the local
    optimality certificate; certified trials that fail are tallied in
    certified_and_failed, which soundness demands stay at zero.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if problem is None:
        problem = build_polytope(g)
    depth = certify_depth
    if depth is None:
        depth = (int(girth(g)) - 1) // 4  # 0 on girth-4 graphs: no valid depth
    wv = WeightVector.preset(weight_preset, depth, g.d_l) if depth >= 1 else None
    zero = np.zeros(g.n, dtype=np.int64)
    rng = np.random.default_rng(seed)
    failures = certified = certified_and_failed = 0
    for _ in range(trials):
        y = sample(ch, zero, rng)
        lam = llr(ch, y)
        sol = lp_decode(g, lam, mode=mode, problem=problem)
        ok = sol.is_integral and sol.is_unique and all(float(v) == 0.0 for v in sol.point)
        cert = certify_local_optimality(g, zero, lam, wv) if wv is not None else False
        failures += not ok
        certified += bool(cert)
        certified_and_failed += bool(cert) and not ok
    return LpSimReport(trials, failures, seed,
                       certified=certified, certified_and_failed=certified_and_failed)
