"""Leave-one-out neighborhood smoothing for graphon edge probabilities.

The estimation path (``fit_loo``, ``interval_matrices``, ``cv_select``) only
ever sees the adjacency matrix. Functions that take a ``LatentSample`` are
simulation-side oracles that need the true probability matrix.
"""

__version__ = "0.1.0"

import warnings

from numba.core.errors import NumbaWarning

# numba probes for TBB on first parallel launch and falls back on its own
warnings.filterwarnings("ignore", message=".*TBB threading layer.*", category=NumbaWarning)

from .estimator import (  # noqa: E402
    EstimateMatrix,
    ErrorDecomposition,
    LooFit,
    ZlzFit,
    bias_matrix,
    error_decompose,
    fit_loo,
    fit_zlz,
    loo_predict,
    symmetrize,
    zlz_predict,
)
from .graphon import (  # noqa: E402
    GraphonModel,
    LatentSample,
    check_adjacency,
    graphon_eval,
    latent_from_positions,
    parse_graphon,
    sample_adjacency,
    sample_latent,
    substream,
)
from .harness import SimConfig, SimReport, mse_row, run_replicated, run_simulation  # noqa: E402
from .inference import (  # noqa: E402
    IntervalReport,
    coverage,
    eb_halfwidth,
    eb_interval,
    interval_matrices,
    normal_interval,
    oracle_variance,
    plugin_variance,
    sample_variance,
    standardized_fluctuations,
    widen,
)
from .neighborhood import (  # noqa: E402
    Neighborhood,
    default_bandwidth,
    loo_neighborhood,
    loo_neighborhoods,
    undersmooth_bandwidth,
    zlz_neighborhood,
)
from .tuning import CvResult, cv_score, cv_select, default_grid, oracle_prediction_risk  # noqa: E402
from .twohop import LooTwoHopView, TwoHop, full_twohop, loo_distance, loo_twohop, zlz_distance  # noqa: E402
