"""Blade-server power model and per-pod energy prediction.

Power draw follows the linear utilization model
``P = idle + a*u_cpu + b*u_mem + c*u_disk + d*u_net`` (watts, u_cpu in
percent); job energy applies the facility PUE on top. Per-pod predictions
feed the TOPSIS energy criterion: u_cpu is derived from the pod's request
over node capacity (the simulation proxy for live telemetry) and the
remaining utilization terms come from a per-workload-class table.
"""

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, InvalidParams

WH_PER_KWH = 3_600_000.0  # watt-seconds per kWh


@dataclass(frozen=True)
class PowerCoefficients:
    """Linear power-model coefficients; defaults match the blade-server fit."""

    idle_w: float = 14.45
    cpu_w_per_pct: float = 0.236
    mem_w_per_access: float = -4.47e-8
    disk_w_per_op: float = 0.00281
    net_w_per_op: float = 3.1e-8


DEFAULT_COEFFICIENTS = PowerCoefficients()


@dataclass(frozen=True)
class PowerParams:
    """Utilization point: CPU %, memory accesses/s, disk IOPS, network ops/s."""

    u_cpu: float
    u_mem: float = 0.0
    u_disk: float = 0.0
    u_net: float = 0.0

    def __post_init__(self):
        fields = (self.u_cpu, self.u_mem, self.u_disk, self.u_net)
        if any(not np.isfinite(v) or v < 0 for v in fields):
            raise InvalidParams("utilization parameters must be finite and >= 0")
        if self.u_cpu > 100.0:
            raise InvalidParams(f"u_cpu is a percentage, got {self.u_cpu}")


@dataclass(frozen=True)
class EnergyContext:
    """Facility multiplier and job runtime."""

    pue: float = 1.45
    runtime_s: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.pue) or self.pue < 1.0:
            raise InvalidParams(f"pue must be >= 1.0, got {self.pue}")
        if not np.isfinite(self.runtime_s) or self.runtime_s < 0:
            raise InvalidParams("runtime_s must be >= 0")


def blade_power_w(params, coefficients=None):
    """Instantaneous blade power in watts, clamped at 0.

    The memory term is subtractive, so absurd inputs could drive the linear
    model negative; physical power cannot go below zero.
    """
    c = coefficients or DEFAULT_COEFFICIENTS
    power = (
        c.idle_w
        + c.cpu_w_per_pct * params.u_cpu
        + c.mem_w_per_access * params.u_mem
        + c.disk_w_per_op * params.u_disk
        + c.net_w_per_op * params.u_net
    )
    return max(power, 0.0)


def job_energy_kwh(params, ctx, coefficients=None):
    """PUE-adjusted energy of one job in kWh."""
    return blade_power_w(params, coefficients) * ctx.pue * ctx.runtime_s / WH_PER_KWH


def predict_exec_time(pod, node):
    """Predicted execution time in seconds.

    work_units are core-seconds at baseline speed; the pod runs on
    min(request, free) cores scaled by the node's relative speed.
    """
    free_cpu = node.vcpus - node.allocated_cpu
    free_mem = node.memory_gb - node.allocated_memory_gb
    if free_cpu < pod.cpu_request or free_mem < pod.memory_request_gb:
        raise Infeasible(f"pod {pod.name!r} does not fit on node {node.name!r}")
    cores = min(pod.cpu_request, free_cpu)
    return pod.work_units / (cores * node.speed_factor)


def predict_pod_energy_kj(pod, node, config=None):
    """Predicted incremental energy of placing the pod, in kJ.

    Combines the class utilization profile with a request-derived CPU
    percentage, then scales blade power by the node's relative draw over the
    predicted runtime. Deterministic.
    """
    if config is None:
        from .config import default_config

        config = default_config()
    exec_time = predict_exec_time(pod, node)
    u_cpu = min(100.0 * pod.cpu_request / node.vcpus, 100.0)
    base = config.class_power_params(pod.workload_class)
    params = PowerParams(u_cpu=u_cpu, u_mem=base.u_mem, u_disk=base.u_disk, u_net=base.u_net)
    power = blade_power_w(params, config.coefficients)
    return power * node.power_scale * exec_time / 1000.0
