"""Deterministic cluster experiment harness.

Replays a factorial design over competition levels and weighting schemes:
pod batches arrive on a fixed cadence, the TOPSIS scheduler and a
least-requested baseline each place the same batch on their own replica of
the cluster, resources release when predicted execution completes, and the
energy totals are compared. Everything downstream of the seed is
deterministic; optional multiplicative noise (shared per pod between the
two replicas, so a scheduler compared against itself nets out to exactly
zero) models run-to-run variance.
"""

import csv
import heapq
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .config import default_config
from .energy import predict_exec_time, predict_pod_energy_kj
from .errors import ConfigError, Infeasible, NoFeasibleNodes
from .model import (
    WORKLOAD_CLASSES,
    cluster_utilization,
    feasible_nodes,
    resolve_scheme_name,
    schedule,
    select_weights,
)

# Per-scheduler pod counts per class; the full batch is twice this.
COMPETITION_LEVELS = {
    "low": {"Light": 2, "Medium": 1, "Complex": 1},
    "medium": {"Light": 4, "Medium": 2, "Complex": 1},
    "high": {"Light": 6, "Medium": 3, "Complex": 2},
}

TOPSIS_SCHEDULER = "topsis"
DEFAULT_SCHEDULER = "default"


@dataclass(frozen=True)
class ExperimentConfig:
    level: str
    scheme: str
    seed: int
    noise_pct: float = 0.05
    repetitions: int = 1
    measure_timing: bool = False
    arrival_gap_s: float | None = None
    control: bool = False  # run the baseline in both slots (self-comparison)

    def __post_init__(self):
        if self.level not in COMPETITION_LEVELS:
            raise ConfigError(
                f"unknown competition level {self.level!r}; valid: {sorted(COMPETITION_LEVELS)}"
            )
        resolve_scheme_name(self.scheme)
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.noise_pct < 0:
            raise ConfigError("noise_pct must be >= 0")


@dataclass(frozen=True)
class PodPlacement:
    pod: str
    workload_class: str
    node: str
    start_s: float
    exec_s: float
    energy_kj: float


@dataclass
class SchedulerStats:
    """Per-scheduler aggregate over one experiment run."""

    scheduler: str
    energy_kj: float = 0.0
    mean_sched_ms: float = 0.0
    allocations: dict = field(default_factory=dict)
    placements: list = field(default_factory=list)
    unschedulable: list = field(default_factory=list)
    peak_cpu_fraction: float = 0.0
    peak_memory_fraction: float = 0.0


@dataclass
class ExperimentResult:
    level: str
    scheme: str
    seed: int
    noise_pct: float
    repetitions: int
    default: SchedulerStats
    topsis: SchedulerStats
    savings_kj: float
    optimization_pct: float


def optimization_from_totals(default_kj, topsis_kj):
    """Savings and optimization percentage from two energy totals."""
    savings = default_kj - topsis_kj
    pct = 100.0 * savings / default_kj if default_kj > 0 else 0.0
    return savings, pct


def baseline_score(pod, node):
    """Least-requested style score in [0, 100]; the baseline picks the max."""
    feasible, _ = feasible_nodes(pod, [node])
    if not feasible:
        raise Infeasible(f"pod {pod.name!r} does not fit on node {node.name!r}")
    free_cpu_after = node.vcpus - node.allocated_cpu - pod.cpu_request
    free_mem_after = node.memory_gb - node.allocated_memory_gb - pod.memory_request_gb
    return 50.0 * free_cpu_after / node.vcpus + 50.0 * free_mem_after / node.memory_gb


def _baseline_pick(pod, nodes):
    feasible, rejected = feasible_nodes(pod, nodes)
    if not feasible:
        raise NoFeasibleNodes(rejected)
    best = feasible[0]
    best_score = baseline_score(pod, best)
    for node in feasible[1:]:
        score = baseline_score(pod, node)
        if score > best_score:
            best, best_score = node, score
    return best


def _generate_batch(level, rng, app_config):
    """Arrival-ordered pods for one scheduler's share of the batch."""
    pods = []
    for cls in WORKLOAD_CLASSES:
        for i in range(COMPETITION_LEVELS[level][cls]):
            pods.append(app_config.make_workload(f"{cls.lower()}-{i}", cls))
    order = rng.permutation(len(pods))
    return [pods[i] for i in order]


def _run_replica(scheduler, pods, arrivals, noise, nodes, scheme, app_config, measure_timing,
                 use_baseline=False):
    """Place one pod sequence on a fresh cluster replica."""
    stats = SchedulerStats(scheduler=scheduler)
    stats.allocations = {n.name: 0 for n in nodes}
    by_name = {n.name: n for n in nodes}
    total_cpu = sum(n.vcpus for n in nodes)
    total_mem = sum(n.memory_gb for n in nodes)
    releases = []  # heap of (completion_s, arrival_idx, node, cpu, mem)
    sched_ms = []

    for idx, pod in enumerate(pods):
        now = arrivals[idx]
        while releases and releases[0][0] <= now:
            _, _, node_name, cpu, mem = heapq.heappop(releases)
            node = by_name[node_name]
            node.allocated_cpu -= cpu
            node.allocated_memory_gb -= mem

        started = time.perf_counter() if measure_timing else 0.0
        try:
            if scheduler == TOPSIS_SCHEDULER and not use_baseline:
                active = scheme
                if app_config.sim.adaptive_weights:
                    active = select_weights(
                        scheme.name, cluster_utilization(nodes), app_config.schemes,
                        adaptive=True, threshold=app_config.sim.adaptive_threshold,
                    )
                chosen = by_name[schedule(pod, nodes, active, config=app_config).chosen_node]
            else:
                chosen = _baseline_pick(pod, nodes)
        except NoFeasibleNodes:
            stats.unschedulable.append(pod.name)
            continue
        finally:
            if measure_timing:
                sched_ms.append((time.perf_counter() - started) * 1000.0)

        exec_s = predict_exec_time(pod, chosen) * noise[idx, 0]
        energy_kj = predict_pod_energy_kj(pod, chosen, config=app_config) * noise[idx, 1]
        chosen.allocated_cpu += pod.cpu_request
        chosen.allocated_memory_gb += pod.memory_request_gb
        heapq.heappush(
            releases, (now + exec_s, idx, chosen.name, pod.cpu_request, pod.memory_request_gb)
        )
        stats.allocations[chosen.name] += 1
        stats.energy_kj += energy_kj
        stats.placements.append(
            PodPlacement(pod.name, pod.workload_class, chosen.name, now, exec_s, energy_kj)
        )
        stats.peak_cpu_fraction = max(
            stats.peak_cpu_fraction, sum(n.allocated_cpu for n in nodes) / total_cpu
        )
        stats.peak_memory_fraction = max(
            stats.peak_memory_fraction, sum(n.allocated_memory_gb for n in nodes) / total_mem
        )
    stats.mean_sched_ms = float(np.mean(sched_ms)) if sched_ms else 0.0
    return stats


def _run_once(config, seed, app_config):
    rng = np.random.default_rng(seed)
    pods = _generate_batch(config.level, rng, app_config)
    n = len(pods)
    gap = config.arrival_gap_s if config.arrival_gap_s is not None else app_config.sim.arrival_gap_s
    arrivals = [i * gap for i in range(n)]
    # One (exec, energy) multiplier pair per pod, shared by both replicas.
    if config.noise_pct > 0:
        noise = rng.uniform(1.0 - config.noise_pct, 1.0 + config.noise_pct, size=(n, 2))
    else:
        noise = np.ones((n, 2))
    scheme = app_config.scheme(config.scheme)

    topsis_stats = _run_replica(
        TOPSIS_SCHEDULER, pods, arrivals, noise, app_config.fresh_nodes(), scheme,
        app_config, config.measure_timing, use_baseline=config.control,
    )
    default_stats = _run_replica(
        DEFAULT_SCHEDULER, pods, arrivals, noise, app_config.fresh_nodes(), scheme,
        app_config, config.measure_timing,
    )
    return default_stats, topsis_stats


def run_experiment(config, app_config=None):
    """Run one factorial cell; same seed means a bit-identical result."""
    app_config = app_config or default_config()
    defaults, topsises = [], []
    for rep in range(config.repetitions):
        d, t = _run_once(config, config.seed + rep, app_config)
        defaults.append(d)
        topsises.append(t)

    def _aggregate(stats_list, scheduler):
        agg = SchedulerStats(scheduler=scheduler)
        agg.energy_kj = float(np.mean([s.energy_kj for s in stats_list]))
        agg.mean_sched_ms = float(np.mean([s.mean_sched_ms for s in stats_list]))
        agg.allocations = {
            name: sum(s.allocations[name] for s in stats_list)
            for name in stats_list[0].allocations
        }
        agg.placements = [p for s in stats_list for p in s.placements]
        agg.unschedulable = [u for s in stats_list for u in s.unschedulable]
        agg.peak_cpu_fraction = max(s.peak_cpu_fraction for s in stats_list)
        agg.peak_memory_fraction = max(s.peak_memory_fraction for s in stats_list)
        return agg

    default_stats = _aggregate(defaults, DEFAULT_SCHEDULER)
    topsis_stats = _aggregate(topsises, TOPSIS_SCHEDULER)
    savings, pct = optimization_from_totals(default_stats.energy_kj, topsis_stats.energy_kj)
    return ExperimentResult(
        level=config.level,
        scheme=resolve_scheme_name(config.scheme),
        seed=config.seed,
        noise_pct=config.noise_pct,
        repetitions=config.repetitions,
        default=default_stats,
        topsis=topsis_stats,
        savings_kj=savings,
        optimization_pct=pct,
    )


def run_factorial(levels, schemes, seeds, noise_pct=0.05, measure_timing=False, app_config=None):
    """Cartesian product of the factor lists, in deterministic order."""
    if not levels or not schemes or not seeds:
        raise ConfigError("levels, schemes, and seeds must all be non-empty")
    app_config = app_config or default_config()
    results = []
    for level in levels:
        for scheme in schemes:
            for seed in seeds:
                results.append(
                    run_experiment(
                        ExperimentConfig(
                            level=level,
                            scheme=scheme,
                            seed=seed,
                            noise_pct=noise_pct,
                            measure_timing=measure_timing,
                        ),
                        app_config=app_config,
                    )
                )
    return results


def summarize(results):
    """Mean per (level, scheme) cell plus per-level and overall average rows.

    Average rows aggregate the per-cell optimization percentages (not the
    ratio of mean totals), matching how summary tables of this kind are
    conventionally assembled.
    """
    levels = []
    for r in results:
        if r.level not in levels:
            levels.append(r.level)
    schemes = []
    for r in results:
        if r.scheme not in schemes:
            schemes.append(r.scheme)

    rows = []
    per_level_cells = {lvl: [] for lvl in levels}
    for level in levels:
        for scheme in schemes:
            cell = [r for r in results if r.level == level and r.scheme == scheme]
            if not cell:
                continue
            row = {
                "level": level,
                "scheme": scheme,
                "default_kj": float(np.mean([r.default.energy_kj for r in cell])),
                "topsis_kj": float(np.mean([r.topsis.energy_kj for r in cell])),
                "savings_kj": float(np.mean([r.savings_kj for r in cell])),
                "optimization_pct": float(np.mean([r.optimization_pct for r in cell])),
                "runs": len(cell),
            }
            rows.append(row)
            per_level_cells[level].append(row)
    averages = []
    for level in levels:
        cells = per_level_cells[level]
        if not cells:
            continue
        averages.append(
            {
                "level": level,
                "scheme": "average",
                "default_kj": float(np.mean([c["default_kj"] for c in cells])),
                "topsis_kj": float(np.mean([c["topsis_kj"] for c in cells])),
                "savings_kj": float(np.mean([c["savings_kj"] for c in cells])),
                "optimization_pct": float(np.mean([c["optimization_pct"] for c in cells])),
                "runs": sum(c["runs"] for c in cells),
            }
        )
    scheme_rows = [r for r in rows]
    overall = {
        "level": "all",
        "scheme": "average",
        "default_kj": float(np.mean([c["default_kj"] for c in scheme_rows])),
        "topsis_kj": float(np.mean([c["topsis_kj"] for c in scheme_rows])),
        "savings_kj": float(np.mean([c["savings_kj"] for c in scheme_rows])),
        "optimization_pct": float(np.mean([c["optimization_pct"] for c in scheme_rows])),
        "runs": sum(c["runs"] for c in scheme_rows),
    }
    return {"cells": rows, "level_averages": averages, "overall": overall}


def _node_names(results):
    names = []
    for r in results:
        for name in r.topsis.allocations:
            if name not in names:
                names.append(name)
    return names


def csv_rows(results):
    """Stable CSV serialization (header + rows) for a result list."""
    nodes = _node_names(results)
    header = [
        "level", "scheme", "seed", "repetitions", "noise_pct",
        "default_kj", "topsis_kj", "savings_kj", "optimization_pct",
        "mean_sched_ms", "default_sched_ms",
        "unschedulable_topsis", "unschedulable_default",
    ]
    header += [f"topsis_alloc_{n}" for n in nodes]
    header += [f"default_alloc_{n}" for n in nodes]
    rows = [header]
    for r in results:
        row = [
            r.level, r.scheme, str(r.seed), str(r.repetitions), f"{r.noise_pct:.4f}",
            f"{r.default.energy_kj:.6f}", f"{r.topsis.energy_kj:.6f}",
            f"{r.savings_kj:.6f}", f"{r.optimization_pct:.4f}",
            f"{r.topsis.mean_sched_ms:.4f}", f"{r.default.mean_sched_ms:.4f}",
            str(len(r.topsis.unschedulable)), str(len(r.default.unschedulable)),
        ]
        row += [str(r.topsis.allocations.get(n, 0)) for n in nodes]
        row += [str(r.default.allocations.get(n, 0)) for n in nodes]
        rows.append(row)
    return rows


def write_csv(results, path):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(csv_rows(results))
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def report_doc(results):
    """Structured report: raw per-run rows plus the summary."""
    summary = summarize(results)
    runs = []
    for r in results:
        runs.append(
            {
                "level": r.level,
                "scheme": r.scheme,
                "seed": r.seed,
                "repetitions": r.repetitions,
                "noise_pct": r.noise_pct,
                "default_kj": r.default.energy_kj,
                "topsis_kj": r.topsis.energy_kj,
                "savings_kj": r.savings_kj,
                "optimization_pct": r.optimization_pct,
                "mean_sched_ms": r.topsis.mean_sched_ms,
                "allocations": {
                    "topsis": r.topsis.allocations,
                    "default": r.default.allocations,
                },
                "unschedulable": {
                    "topsis": list(r.topsis.unschedulable),
                    "default": list(r.default.unschedulable),
                },
            }
        )
    return {"runs": runs, "summary": summary}


def write_report(results, path):
    with open(path, "w") as fh:
        json.dump(report_doc(results), fh, indent=2, sort_keys=True)
        fh.write("\n")


def heatmap_rows(results):
    """scheme x level mean optimization %, the axes of the savings heatmap."""
    summary = summarize(results)
    levels = []
    schemes = []
    for cell in summary["cells"]:
        if cell["level"] not in levels:
            levels.append(cell["level"])
        if cell["scheme"] not in schemes:
            schemes.append(cell["scheme"])
    rows = [["scheme"] + levels]
    for scheme in schemes:
        row = [scheme]
        for level in levels:
            match = [
                c for c in summary["cells"] if c["scheme"] == scheme and c["level"] == level
            ]
            row.append(f"{match[0]['optimization_pct']:.4f}" if match else "")
        rows.append(row)
    return rows
