"""Exception hierarchy shared across the package."""


class GreenPodError(Exception):
    """Base class for all domain errors."""


class InvalidMatrix(GreenPodError):
    """Decision matrix violates its invariants (shape, finiteness, sign)."""


class InvalidWeights(GreenPodError):
    """Criteria weights are negative or do not sum to 1."""


class NoNodes(GreenPodError):
    """An operation that needs candidate nodes received an empty list."""


class NoFeasibleNodes(GreenPodError):
    """Every candidate node was rejected by the feasibility filter."""

    def __init__(self, rejected):
        self.rejected = dict(rejected)
        super().__init__(f"no feasible node ({len(self.rejected)} rejected)")


class Infeasible(GreenPodError):
    """The node cannot host the pod (precondition violation)."""


class InvalidParams(GreenPodError):
    """Power-model utilization parameters out of range."""


class InvalidAssumptions(GreenPodError):
    """Impact-calculator assumptions out of range."""


class ConfigError(GreenPodError):
    """Unknown scheme/level name or malformed configuration file."""
