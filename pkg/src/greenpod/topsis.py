"""Generic TOPSIS ranking over a decision matrix.

Domain-agnostic: alternatives and criteria are just labels. The pipeline is
vector (Euclidean) normalization, weighting, ideal / anti-ideal points,
Euclidean distances, and the closeness coefficient C = D- / (D+ + D-).
Conventions:

* all-zero columns normalize to all-zero (the criterion is non-informative);
* negative or non-finite inputs are rejected, never shifted;
* if D+ + D- == 0 (all alternatives identical) closeness is 1.0;
* ranking ties break by input order, so runs are reproducible.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrix, InvalidWeights
from .kernels import topsis_closeness, vector_normalize

BENEFIT = "benefit"
COST = "cost"

_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class CriterionSpec:
    """One criterion: its label, optimization direction, and weight."""

    name: str
    direction: str
    weight: float

    def __post_init__(self):
        if self.direction not in (BENEFIT, COST):
            raise InvalidMatrix(f"criterion {self.name!r}: direction must be 'benefit' or 'cost'")
        if not np.isfinite(self.weight) or self.weight < 0:
            raise InvalidWeights(f"criterion {self.name!r}: weight must be finite and >= 0")


def make_criteria(names, directions, weights, renormalize=False):
    """Build a validated criteria tuple whose weights sum to 1.

    With renormalize=True the weights are rescaled by their sum instead of
    rejected; silent renormalization is never done.
    """
    weights = [float(w) for w in weights]
    if any(w < 0 or not np.isfinite(w) for w in weights):
        raise InvalidWeights("weights must be finite and >= 0")
    total = sum(weights)
    if renormalize:
        if total <= 0:
            raise InvalidWeights("cannot renormalize weights summing to 0")
        weights = [w / total for w in weights]
    elif abs(total - 1.0) > _WEIGHT_TOL:
        raise InvalidWeights(f"weights sum to {total!r}, expected 1.0 within {_WEIGHT_TOL}")
    return tuple(
        CriterionSpec(name=n, direction=d, weight=w)
        for n, d, w in zip(names, directions, weights, strict=True)
    )


class DecisionMatrix:
    """Alternatives x criteria raw values with per-criterion direction/weight."""

    def __init__(self, alternatives, criteria, values):
        self.alternatives = tuple(alternatives)
        self.criteria = tuple(criteria)
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2:
            raise InvalidMatrix(f"values must be 2-D, got shape {values.shape}")
        if len(self.alternatives) < 1 or len(self.criteria) < 1:
            raise InvalidMatrix("need at least one alternative and one criterion")
        if values.shape != (len(self.alternatives), len(self.criteria)):
            raise InvalidMatrix(
                f"values shape {values.shape} does not match "
                f"{len(self.alternatives)} alternatives x {len(self.criteria)} criteria"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidMatrix("values must all be finite")
        if np.any(values < 0):
            raise InvalidMatrix("negative values are rejected, not shifted")
        self.values = values
        self.values.setflags(write=False)

    @property
    def weights(self):
        return np.array([c.weight for c in self.criteria])

    @property
    def benefit_mask(self):
        return np.array([c.direction == BENEFIT for c in self.criteria])

    def with_values(self, values):
        return DecisionMatrix(self.alternatives, self.criteria, values)

    def __repr__(self):
        return (
            f"DecisionMatrix({len(self.alternatives)} alternatives x "
            f"{len(self.criteria)} criteria)"
        )


@dataclass(frozen=True)
class RankResult:
    """Per-alternative TOPSIS outcome plus the induced total order."""

    alternatives: tuple
    weighted: np.ndarray
    distance_to_ideal: np.ndarray
    distance_to_anti_ideal: np.ndarray
    closeness: np.ndarray
    ranking: tuple

    @property
    def best(self):
        return self.ranking[0]

    def closeness_of(self, alternative):
        return float(self.closeness[self.alternatives.index(alternative)])

    def as_records(self):
        """Per-alternative dicts in input order (for logs / wire responses)."""
        return [
            {
                "alternative": alt,
                "weighted_row": [float(v) for v in self.weighted[i]],
                "distance_to_ideal": float(self.distance_to_ideal[i]),
                "distance_to_anti_ideal": float(self.distance_to_anti_ideal[i]),
                "closeness": float(self.closeness[i]),
            }
            for i, alt in enumerate(self.alternatives)
        ]


def normalize(matrix):
    """Vector-normalize each column; returns a new DecisionMatrix in [0, 1]."""
    return matrix.with_values(vector_normalize(matrix.values))


def _check_weights(matrix):
    total = float(np.sum(matrix.weights))
    if abs(total - 1.0) > _WEIGHT_TOL:
        raise InvalidWeights(f"weights sum to {total!r}, expected 1.0 within {_WEIGHT_TOL}")


def rank(matrix):
    """Rank alternatives by closeness coefficient, best first."""
    _check_weights(matrix)
    weighted, d_plus, d_minus, closeness = topsis_closeness(
        np.ascontiguousarray(matrix.values),
        np.ascontiguousarray(matrix.weights),
        np.ascontiguousarray(matrix.benefit_mask),
    )
    order = np.argsort(-closeness, kind="stable")
    ranking = tuple(matrix.alternatives[i] for i in order)
    return RankResult(
        alternatives=matrix.alternatives,
        weighted=weighted,
        distance_to_ideal=d_plus,
        distance_to_anti_ideal=d_minus,
        closeness=closeness,
        ranking=ranking,
    )


def rank_order_invariance_check(matrix, scale, column=None):
    """True iff scaling a column by `scale` leaves the ranking unchanged.

    column=None checks every column in turn; an int checks just that one.
    Exposed as a first-class call so the invariance is testable directly.
    """
    if not np.isfinite(scale) or scale <= 0:
        raise InvalidMatrix("scale must be a positive finite real")
    base = rank(matrix).ranking
    columns = range(len(matrix.criteria)) if column is None else [column]
    for j in columns:
        scaled = matrix.values.copy()
        scaled[:, j] *= scale
        if rank(matrix.with_values(scaled)).ranking != base:
            return False
    return True
