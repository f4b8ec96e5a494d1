"""greenpod: energy-aware TOPSIS pod scheduling, simulation, and impact accounting."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigError,
    GreenPodError,
    Infeasible,
    InvalidAssumptions,
    InvalidMatrix,
    InvalidParams,
    InvalidWeights,
    NoFeasibleNodes,
    NoNodes,
)
from .model import NodeProfile, WeightScheme, WorkloadSpec, schedule  # noqa: F401
from .topsis import CriterionSpec, DecisionMatrix, RankResult, normalize, rank  # noqa: F401
