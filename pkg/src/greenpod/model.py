"""Cluster scheduling model: nodes, workloads, weighting schemes, selection.

Maps cluster state plus a pending pod onto a five-criterion decision matrix
(execution time, energy, core availability, memory availability, resource
balance) and picks the node with the highest closeness coefficient. The
first two criteria are costs, the rest benefits; availability and balance
are evaluated post-placement.
"""

import copy
from dataclasses import dataclass, field

import numpy as np

from . import topsis
from .energy import predict_exec_time, predict_pod_energy_kj
from .errors import ConfigError, Infeasible, NoFeasibleNodes, NoNodes

CRITERIA = (
    "execution_time",
    "energy",
    "core_availability",
    "memory_availability",
    "resource_balance",
)
DIRECTIONS = (topsis.COST, topsis.COST, topsis.BENEFIT, topsis.BENEFIT, topsis.BENEFIT)

NODE_CATEGORIES = ("A", "B", "C", "Default")
WORKLOAD_CLASSES = ("Light", "Medium", "Complex")

SCHEME_NAMES = ("general", "energy-centric", "performance-centric", "resource-efficient")
_SCHEME_ALIASES = {
    "general": "general",
    "balanced": "general",
    "energy": "energy-centric",
    "energy-centric": "energy-centric",
    "energy_centric": "energy-centric",
    "performance": "performance-centric",
    "performance-centric": "performance-centric",
    "performance_centric": "performance-centric",
    "resource": "resource-efficient",
    "resource-efficient": "resource-efficient",
    "resource_efficient": "resource-efficient",
}

INSUFFICIENT_CPU = "insufficient_cpu"
INSUFFICIENT_MEMORY = "insufficient_memory"


@dataclass
class NodeProfile:
    """A schedulable node: capacity, current allocation, energy character.

    speed_factor is relative execution speed (1.0 = baseline); power_scale is
    relative power draw (1.0 = baseline).
    """

    name: str
    category: str = "Default"
    vcpus: float = 2.0
    memory_gb: float = 8.0
    allocated_cpu: float = 0.0
    allocated_memory_gb: float = 0.0
    speed_factor: float = 1.0
    power_scale: float = 1.0

    def __post_init__(self):
        if self.category not in NODE_CATEGORIES:
            raise ConfigError(f"unknown node category {self.category!r}")
        if self.vcpus <= 0 or self.memory_gb <= 0:
            raise ConfigError(f"node {self.name!r}: capacity must be positive")
        if not 0 <= self.allocated_cpu <= self.vcpus:
            raise ConfigError(f"node {self.name!r}: allocated_cpu out of range")
        if not 0 <= self.allocated_memory_gb <= self.memory_gb:
            raise ConfigError(f"node {self.name!r}: allocated_memory_gb out of range")
        if self.speed_factor <= 0 or self.power_scale <= 0:
            raise ConfigError(f"node {self.name!r}: speed_factor and power_scale must be > 0")

    @property
    def free_cpu(self):
        return self.vcpus - self.allocated_cpu

    @property
    def free_memory_gb(self):
        return self.memory_gb - self.allocated_memory_gb

    def clone(self):
        return copy.copy(self)


@dataclass(frozen=True)
class WorkloadSpec:
    """A pod: resource requests plus abstract compute size.

    work_units are core-seconds at baseline speed.
    """

    name: str
    workload_class: str
    cpu_request: float
    memory_request_gb: float
    work_units: float

    def __post_init__(self):
        if self.workload_class not in WORKLOAD_CLASSES:
            raise ConfigError(f"unknown workload class {self.workload_class!r}")
        if self.cpu_request <= 0 or self.memory_request_gb <= 0 or self.work_units <= 0:
            raise ConfigError(f"pod {self.name!r}: requests and work_units must be > 0")


@dataclass(frozen=True)
class WeightScheme:
    """Named probability vector over the five scheduling criteria."""

    name: str
    weights: dict

    def __post_init__(self):
        if set(self.weights) != set(CRITERIA):
            raise ConfigError(
                f"scheme {self.name!r} must weight exactly the criteria {CRITERIA}"
            )
        vec = np.array([self.weights[c] for c in CRITERIA], dtype=float)
        if np.any(vec < 0) or abs(vec.sum() - 1.0) > 1e-9:
            raise ConfigError(f"scheme {self.name!r}: weights must be >= 0 and sum to 1")

    def as_vector(self):
        return np.array([self.weights[c] for c in CRITERIA], dtype=float)


@dataclass(frozen=True)
class ScheduleDecision:
    """Outcome of one scheduling call, with the full ranking for audit."""

    pod: str
    chosen_node: str
    rank_result: topsis.RankResult
    scheme_used: str
    filtered_out: dict = field(default_factory=dict)


def resolve_scheme_name(name):
    key = name.strip().lower().replace(" ", "-")
    if key not in _SCHEME_ALIASES:
        raise ConfigError(
            f"unknown scheme {name!r}; valid names: {', '.join(SCHEME_NAMES)}"
        )
    return _SCHEME_ALIASES[key]


def feasible_nodes(pod, nodes):
    """Split nodes into those that fit the pod's requests and the rejects.

    Rejection reasons are machine-readable: insufficient_cpu is reported
    first when both resources fall short.
    """
    if not nodes:
        raise NoNodes("no candidate nodes supplied")
    feasible = []
    rejected = {}
    for node in nodes:
        if node.free_cpu < pod.cpu_request:
            rejected[node.name] = INSUFFICIENT_CPU
        elif node.free_memory_gb < pod.memory_request_gb:
            rejected[node.name] = INSUFFICIENT_MEMORY
        else:
            feasible.append(node)
    return feasible, rejected


def criteria_row(pod, node, config=None):
    """Five-value criterion vector for placing `pod` on `node`.

    Returns (exec_time_s, energy_kj, free_cores, free_memory_gb, balance)
    with availability and balance computed post-placement; balance is
    1 - |cpu_fraction - memory_fraction|.
    """
    if node.free_cpu < pod.cpu_request or node.free_memory_gb < pod.memory_request_gb:
        raise Infeasible(f"pod {pod.name!r} does not fit on node {node.name!r}")
    exec_time = predict_exec_time(pod, node)
    energy_kj = predict_pod_energy_kj(pod, node, config=config)
    free_cores = node.vcpus - node.allocated_cpu - pod.cpu_request
    free_memory = node.memory_gb - node.allocated_memory_gb - pod.memory_request_gb
    cpu_fraction = (node.allocated_cpu + pod.cpu_request) / node.vcpus
    mem_fraction = (node.allocated_memory_gb + pod.memory_request_gb) / node.memory_gb
    balance = 1.0 - abs(cpu_fraction - mem_fraction)
    return np.array([exec_time, energy_kj, free_cores, free_memory, balance])


def build_matrix(pod, feasible, scheme, config=None):
    """One row per feasible node; columns carry the scheme's weights."""
    if not feasible:
        raise NoFeasibleNodes({})
    rows = np.stack([criteria_row(pod, node, config=config) for node in feasible])
    criteria = topsis.make_criteria(CRITERIA, DIRECTIONS, scheme.as_vector())
    return topsis.DecisionMatrix([n.name for n in feasible], criteria, rows)


def schedule(pod, nodes, scheme, config=None):
    """Filter, score, and pick the best node for the pod."""
    feasible, rejected = feasible_nodes(pod, nodes)
    if not feasible:
        raise NoFeasibleNodes(rejected)
    matrix = build_matrix(pod, feasible, scheme, config=config)
    result = topsis.rank(matrix)
    return ScheduleDecision(
        pod=pod.name,
        chosen_node=result.best,
        rank_result=result,
        scheme_used=scheme.name,
        filtered_out=rejected,
    )


def cluster_utilization(nodes):
    """Aggregate utilization in [0, 1]: max of CPU and memory fractions."""
    total_cpu = sum(n.vcpus for n in nodes)
    total_mem = sum(n.memory_gb for n in nodes)
    if total_cpu <= 0 or total_mem <= 0:
        return 0.0
    cpu = sum(n.allocated_cpu for n in nodes) / total_cpu
    mem = sum(n.allocated_memory_gb for n in nodes) / total_mem
    return max(cpu, mem)


def select_weights(scheme_name, utilization, schemes=None, adaptive=False, threshold=0.8):
    """Resolve a scheme, optionally blending toward resource-efficient.

    When adaptive is on and utilization exceeds the threshold, the named
    scheme is interpolated linearly toward the resource-efficient scheme:
    alpha ramps 0 -> 1 over [threshold, 1.0]. Output still sums to 1.
    """
    if schemes is None:
        from .config import default_config

        schemes = default_config().schemes
    base = schemes[resolve_scheme_name(scheme_name)]
    if not adaptive:
        return base
    utilization = min(max(float(utilization), 0.0), 1.0)
    span = 1.0 - threshold
    alpha = min(max((utilization - threshold) / span, 0.0), 1.0) if span > 0 else 1.0
    if alpha == 0.0:
        return base
    target = schemes["resource-efficient"]
    blended = {
        c: (1.0 - alpha) * base.weights[c] + alpha * target.weights[c] for c in CRITERIA
    }
    total = sum(blended.values())
    blended = {c: w / total for c, w in blended.items()}
    return WeightScheme(name=f"{base.name}+adaptive", weights=blended)
