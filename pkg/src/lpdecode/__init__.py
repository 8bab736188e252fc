"""LP decoding of regular LDPC codes over memoryless symmetric channels.

Subpackages by concern: tanner graphs, channel models, the fundamental
polytope LP, local-optimality certificates (with graph-cover utilities),
quantized density evolution, contraction-condition bounds and thresholds,
and Monte Carlo simulation oracles.
"""

from .bounds import (
    BoundReport,
    bsc_threshold_search,
    eb_n0_db,
    error_bound,
    general_error_bound,
    mbios_condition,
    nonuniform_condition,
    sigma0_search,
    tree_failure_bound,
    uniform_condition,
)
from .channel import BiAwgn, Bsc, llr, llr_density, parse_channel_spec, sample
from .density import (
    QuantizationSpec,
    QuantizedDensity,
    convolve_power,
    evolve,
    laplace,
    min_density,
    min_laplace,
    scale_density,
)
from .deviation import (
    CoverSpec,
    Deviation,
    WeightVector,
    certify_local_optimality,
    enumerate_deviations,
    lift_graph,
    lift_vector,
    min_deviation_cost,
    project_pseudocodeword,
)
from .lp import LpProblem, LpSolution, build_polytope, decode_word, lp_decode
from .sim import TrialReport, simulate_lp, simulate_tree_process, simulate_tree_values
from .tanner import TannerGraph, build_regular_graph, girth, is_codeword

__version__ = "0.1.0"
