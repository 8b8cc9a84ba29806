"""Online multiplier bootstrap for dependent data streams.

Quantifies uncertainty in running averages of time-series data with
O(1)-per-observation updates, alongside classical iid-multiplier and
blockwise baselines, synthetic scenario generators and an experiment
harness.
"""

from ._validation import BETA_DEFAULT
from .engine import (
    HistoryBudgetError,
    OnlineBootstrap,
    UncertaintySummary,
    interpolated_quantiles,
)
from .generators import (
    GarchParams,
    MaParams,
    Scenario,
    make_scenario,
    scenario_stream,
    sigma_inf_ma,
    sigma_inf_mc,
    true_mean,
)
from .weights import (
    ArWeightState,
    BlockWeightVector,
    ar_next,
    ar_weight_cov,
    block_regenerate,
    block_size,
    iid_next,
    rho,
)

__version__ = "0.1.0"

__all__ = [
    "BETA_DEFAULT",
    "ArWeightState",
    "BlockWeightVector",
    "GarchParams",
    "HistoryBudgetError",
    "MaParams",
    "OnlineBootstrap",
    "Scenario",
    "UncertaintySummary",
    "ar_next",
    "ar_weight_cov",
    "block_regenerate",
    "block_size",
    "iid_next",
    "interpolated_quantiles",
    "make_scenario",
    "rho",
    "scenario_stream",
    "sigma_inf_ma",
    "sigma_inf_mc",
    "true_mean",
]
