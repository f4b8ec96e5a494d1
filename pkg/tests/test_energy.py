import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenpod.energy import (
    EnergyContext,
    PowerCoefficients,
    PowerParams,
    blade_power_w,
    job_energy_kwh,
    predict_exec_time,
    predict_pod_energy_kj,
)
from greenpod.errors import Infeasible, InvalidParams
from greenpod.model import NodeProfile, WorkloadSpec

TYPICAL = PowerParams(u_cpu=60.0, u_mem=8e6, u_disk=350.0, u_net=3e6)


# ------------------------------------------------------------- blade power

def test_idle_power_is_constant_term():
    assert blade_power_w(PowerParams(0.0)) == pytest.approx(14.45)


def test_full_cpu_power():
    assert blade_power_w(PowerParams(100.0)) == pytest.approx(38.05)


def test_typical_workload_point():
    # 14.45 + 14.16 - 0.3576 + 0.9835 + 0.093
    assert blade_power_w(TYPICAL) == pytest.approx(29.3289, abs=1e-6)


def test_power_clamped_at_zero():
    assert blade_power_w(PowerParams(0.0, u_mem=1e10)) == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"u_cpu": -1.0},
        {"u_cpu": 120.0},
        {"u_cpu": 10.0, "u_mem": -5.0},
        {"u_cpu": 10.0, "u_disk": -1.0},
        {"u_cpu": float("nan")},
    ],
)
def test_invalid_params_rejected(kwargs):
    with pytest.raises(InvalidParams):
        PowerParams(**kwargs)


def test_cpu_coefficient_by_central_difference():
    h = 1e-3
    up = blade_power_w(PowerParams(50.0 + h, u_mem=1e6, u_disk=100.0, u_net=1e6))
    down = blade_power_w(PowerParams(50.0 - h, u_mem=1e6, u_disk=100.0, u_net=1e6))
    assert (up - down) / (2 * h) == pytest.approx(0.236, abs=1e-9)


@given(
    st.floats(0, 100), st.floats(0, 100), st.floats(0, 1e7),
    st.floats(0, 1e4), st.floats(0, 1e7),
)
@settings(max_examples=60, deadline=None)
def test_power_monotonicity(u1, u2, u_mem, u_disk, u_net):
    lo, hi = sorted((u1, u2))
    p_lo = blade_power_w(PowerParams(lo, u_mem, u_disk, u_net))
    p_hi = blade_power_w(PowerParams(hi, u_mem, u_disk, u_net))
    assert p_hi >= p_lo >= 0.0
    # nonincreasing in memory accesses
    assert blade_power_w(PowerParams(lo, u_mem + 1e6, u_disk, u_net)) <= p_lo


# ------------------------------------------------------------- job energy

def test_reference_job_energy():
    ctx = EnergyContext(pue=1.45, runtime_s=34 * 60.0)
    assert job_energy_kwh(TYPICAL, ctx) == pytest.approx(0.024, abs=0.001)


def test_zero_runtime_zero_energy():
    assert job_energy_kwh(TYPICAL, EnergyContext(pue=1.45, runtime_s=0.0)) == 0.0


def test_idle_hour_energy():
    ctx = EnergyContext(pue=1.0, runtime_s=3600.0)
    assert job_energy_kwh(PowerParams(0.0), ctx) == pytest.approx(0.01445)


def test_energy_linear_in_runtime_and_pue():
    base = job_energy_kwh(TYPICAL, EnergyContext(pue=1.2, runtime_s=600.0))
    assert job_energy_kwh(TYPICAL, EnergyContext(pue=1.2, runtime_s=1200.0)) == pytest.approx(2 * base)
    assert job_energy_kwh(TYPICAL, EnergyContext(pue=2.4, runtime_s=600.0)) == pytest.approx(2 * base)


def test_context_validation():
    with pytest.raises(InvalidParams):
        EnergyContext(pue=0.9, runtime_s=1.0)
    with pytest.raises(InvalidParams):
        EnergyContext(pue=1.2, runtime_s=-1.0)


def test_custom_coefficients_respected():
    coeffs = PowerCoefficients(idle_w=10.0, cpu_w_per_pct=1.0, mem_w_per_access=0.0,
                               disk_w_per_op=0.0, net_w_per_op=0.0)
    assert blade_power_w(PowerParams(5.0), coeffs) == pytest.approx(15.0)


# -------------------------------------------------------------- pod models

def _node(**kwargs):
    defaults = dict(name="n", category="Default", vcpus=2.0, memory_gb=8.0)
    defaults.update(kwargs)
    return NodeProfile(**defaults)


def _pod(work_units=100.0, cpu=1.0, mem=1.0, cls="Medium"):
    return WorkloadSpec(name="p", workload_class=cls, cpu_request=cpu,
                        memory_request_gb=mem, work_units=work_units)


def test_exec_time_baseline():
    assert predict_exec_time(_pod(), _node()) == pytest.approx(100.0)


def test_exec_time_speed_factor():
    assert predict_exec_time(_pod(), _node(speed_factor=1.4)) == pytest.approx(100.0 / 1.4)


def test_exec_time_complex_per_category(app_config):
    pod = app_config.make_workload("c", "Complex")  # 480 work units, 1 cpu
    expected = {"node-a": 480 / 0.8, "node-b": 480.0, "node-c": 480 / 1.4, "node-default": 480.0}
    for node in app_config.fresh_nodes():
        assert predict_exec_time(pod, node) == pytest.approx(expected[node.name])


def test_exec_time_infeasible():
    with pytest.raises(Infeasible):
        predict_exec_time(_pod(cpu=3.0), _node())
    with pytest.raises(Infeasible):
        predict_exec_time(_pod(mem=9.0), _node())


def test_pod_energy_scales_with_power_scale(app_config):
    pod = _pod()
    e_lo = predict_pod_energy_kj(pod, _node(power_scale=0.7), config=app_config)
    e_hi = predict_pod_energy_kj(pod, _node(power_scale=1.3), config=app_config)
    assert e_lo / e_hi == pytest.approx(0.7 / 1.3)


def test_pod_energy_vanishes_with_work(app_config):
    tiny = predict_pod_energy_kj(_pod(work_units=1e-9), _node(), config=app_config)
    assert tiny == pytest.approx(0.0, abs=1e-9)


def test_pod_energy_medium_on_node_b_golden(app_config):
    # hand arithmetic: u_cpu = 100*0.5/2 = 25%
    # power = 14.45 + 0.236*25 - 4.47e-8*8e6 + 0.00281*350 + 3.1e-8*3e6 = 21.0689 W
    # exec = 120 / (0.5 * 1.0) = 240 s; energy = 21.0689 * 0.9 * 240 / 1000
    pod = app_config.make_workload("m", "Medium")
    node_b = [n for n in app_config.fresh_nodes() if n.name == "node-b"][0]
    assert predict_pod_energy_kj(pod, node_b, config=app_config) == pytest.approx(
        21.0689 * 0.9 * 240.0 / 1000.0, abs=1e-9
    )


def test_pod_energy_monotone_in_speed(app_config):
    pod = _pod()
    slow = predict_pod_energy_kj(pod, _node(speed_factor=0.5), config=app_config)
    fast = predict_pod_energy_kj(pod, _node(speed_factor=2.0), config=app_config)
    assert fast < slow
