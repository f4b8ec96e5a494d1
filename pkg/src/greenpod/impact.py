"""Energy-savings extrapolation: MWh -> CO2 -> vehicles -> dollars -> credits.

compute_impact carries every figure at full precision (the multi-cluster
column is exactly the single-cluster column times the cluster count). The
rendered table applies a documented display pipeline that reproduces the
reference assessment table cell for cell; its quirks are confined to
rendering and spelled out in _display_cells.
"""

from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .errors import InvalidAssumptions


def round_half_up(x, places=0):
    """Decimal half-up rounding of a float (display layer only)."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(x).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ImpactAssumptions:
    """Inputs of the savings chain; defaults are the reference scenario.

    co2_kg_per_mwh_printed is the coarse emission factor the rendered table
    uses for its CO2 rows (the exact chain value is co2_lb_per_kwh *
    lb_to_kg * 1000, about 373.3); pass None to derive it from the chain.
    """

    jobs_per_day: float = 6304.0
    job_kwh: float = 0.024
    optimization_rate: float = 0.1938
    co2_lb_per_kwh: float = 0.823
    lb_to_kg: float = 0.4536
    vehicle_tons_per_year: float = 4.6
    electricity_usd_per_kwh: float = 0.1289
    credit_usd_per_ton_min: float = 0.46
    credit_usd_per_ton_max: float = 167.0
    clusters: int = 10
    days_per_month: float = 30.0
    days_per_year: float = 365.0
    co2_kg_per_mwh_printed: float | None = 373.2

    def __post_init__(self):
        nonneg = {
            "jobs_per_day": self.jobs_per_day,
            "job_kwh": self.job_kwh,
            "optimization_rate": self.optimization_rate,
            "co2_lb_per_kwh": self.co2_lb_per_kwh,
            "electricity_usd_per_kwh": self.electricity_usd_per_kwh,
            "credit_usd_per_ton_min": self.credit_usd_per_ton_min,
            "credit_usd_per_ton_max": self.credit_usd_per_ton_max,
        }
        for name, value in nonneg.items():
            if not np.isfinite(value) or value < 0:
                raise InvalidAssumptions(f"{name} must be finite and >= 0")
        positive = {
            "lb_to_kg": self.lb_to_kg,
            "vehicle_tons_per_year": self.vehicle_tons_per_year,
            "days_per_month": self.days_per_month,
            "days_per_year": self.days_per_year,
        }
        for name, value in positive.items():
            if not np.isfinite(value) or value <= 0:
                raise InvalidAssumptions(f"{name} must be finite and > 0")
        if self.optimization_rate > 1.0:
            raise InvalidAssumptions("optimization_rate must be in [0, 1]")
        if self.credit_usd_per_ton_min > self.credit_usd_per_ton_max:
            raise InvalidAssumptions("credit_usd_per_ton_min must be <= max")
        if self.clusters < 1:
            raise InvalidAssumptions("clusters must be >= 1")

    @property
    def co2_kg_per_mwh_exact(self):
        return self.co2_lb_per_kwh * self.lb_to_kg * 1000.0

    @property
    def co2_kg_per_mwh_display(self):
        if self.co2_kg_per_mwh_printed is None:
            return self.co2_kg_per_mwh_exact
        return self.co2_kg_per_mwh_printed

    def with_overrides(self, **kwargs):
        """Apply overrides; changing the CO2 chain re-derives the display
        factor unless it is overridden explicitly."""
        if ("co2_lb_per_kwh" in kwargs or "lb_to_kg" in kwargs) and (
            "co2_kg_per_mwh_printed" not in kwargs
        ):
            kwargs["co2_kg_per_mwh_printed"] = None
        return replace(self, **kwargs)


@dataclass(frozen=True)
class ImpactColumn:
    """Full-precision savings figures for a given number of clusters."""

    clusters: int
    daily_mwh: float
    monthly_mwh: float
    annual_mwh: float
    co2_tonnes: float
    vehicles: float
    electricity_usd: float
    credit_min_usd: float
    credit_max_usd: float
    total_1yr_min_usd: float
    total_1yr_max_usd: float
    total_5yr_min_usd: float
    total_5yr_max_usd: float


@dataclass(frozen=True)
class ImpactReport:
    assumptions: ImpactAssumptions
    single: ImpactColumn
    scaled: ImpactColumn


def _single_column(a):
    daily = a.job_kwh * a.jobs_per_day * a.optimization_rate / 1000.0
    monthly = daily * a.days_per_month
    annual = daily * a.days_per_year
    co2_t = annual * a.co2_kg_per_mwh_exact / 1000.0
    vehicles = co2_t / a.vehicle_tons_per_year
    usd = annual * 1000.0 * a.electricity_usd_per_kwh
    credit_min = co2_t * a.credit_usd_per_ton_min
    credit_max = co2_t * a.credit_usd_per_ton_max
    return ImpactColumn(
        clusters=1,
        daily_mwh=daily,
        monthly_mwh=monthly,
        annual_mwh=annual,
        co2_tonnes=co2_t,
        vehicles=vehicles,
        electricity_usd=usd,
        credit_min_usd=credit_min,
        credit_max_usd=credit_max,
        total_1yr_min_usd=usd + credit_min,
        total_1yr_max_usd=usd + credit_max,
        total_5yr_min_usd=5.0 * (usd + credit_min),
        total_5yr_max_usd=5.0 * (usd + credit_max),
    )


def _scale_column(col, clusters):
    # field-by-field scaling keeps multi = single * clusters exact
    fields = {
        name: getattr(col, name) * clusters
        for name in (
            "daily_mwh", "monthly_mwh", "annual_mwh", "co2_tonnes", "vehicles",
            "electricity_usd", "credit_min_usd", "credit_max_usd",
            "total_1yr_min_usd", "total_1yr_max_usd",
            "total_5yr_min_usd", "total_5yr_max_usd",
        )
    }
    return ImpactColumn(clusters=clusters, **fields)


def compute_impact(assumptions):
    """Run the savings chain at full precision for 1 and N clusters."""
    single = _single_column(assumptions)
    return ImpactReport(
        assumptions=assumptions,
        single=single,
        scaled=_scale_column(single, assumptions.clusters),
    )


def _display_cells(report):
    """Rendered numbers per cell, matching the reference table's rounding.

    The source table mixes rounding conventions, so exact reproduction needs
    these rules (exact values stay available on the report):
      * MWh rows round half-up to 2 decimals, except single-cluster daily
        which carries 4;
      * CO2 rows apply the coarse printed kg/MWh factor to the *rounded*
        annual MWh;
      * vehicles: single cluster from the displayed CO2, multi-cluster by
        scaling the displayed single-cluster value;
      * credit values come from full-precision CO2, rounded once (min to
        cents, max to dollars), then scaled by the cluster count;
      * yearly totals add the *displayed* credit value to the full-precision
        electricity cost, then round to whole dollars.
    """
    a = report.assumptions
    n = a.clusters
    single, scaled = report.single, report.scaled
    factor = a.co2_kg_per_mwh_display / 1000.0

    annual_disp = (round_half_up(single.annual_mwh, 2), round_half_up(scaled.annual_mwh, 2))
    co2_disp = tuple(round_half_up(v * factor, 2) for v in annual_disp)
    vehicles_single = round_half_up(co2_disp[0] / a.vehicle_tons_per_year, 2)
    vehicles_disp = (vehicles_single, round_half_up(vehicles_single * n, 2))
    credit_min_single = round_half_up(single.credit_min_usd, 2)
    credit_max_single = round_half_up(single.credit_max_usd, 0)
    credit_min_disp = (credit_min_single, round_half_up(credit_min_single * n, 2))
    credit_max_disp = (credit_max_single, round_half_up(credit_max_single * n, 0))
    electricity = (single.electricity_usd, scaled.electricity_usd)

    cells = {
        "daily_mwh": (round_half_up(single.daily_mwh, 4), round_half_up(scaled.daily_mwh, 2)),
        "monthly_mwh": (round_half_up(single.monthly_mwh, 2), round_half_up(scaled.monthly_mwh, 2)),
        "annual_mwh": annual_disp,
        "co2_tonnes": co2_disp,
        "vehicles": vehicles_disp,
        "cost_usd": tuple(round_half_up(v, 0) for v in electricity),
        "credit_min_usd": credit_min_disp,
        "credit_max_usd": credit_max_disp,
        "total_1yr_min_usd": tuple(
            round_half_up(e + c, 0) for e, c in zip(electricity, credit_min_disp)
        ),
        "total_1yr_max_usd": tuple(
            round_half_up(e + c, 0) for e, c in zip(electricity, credit_max_disp)
        ),
        "total_5yr_min_usd": tuple(
            round_half_up(5.0 * (e + c), 0) for e, c in zip(electricity, credit_min_disp)
        ),
        "total_5yr_max_usd": tuple(
            round_half_up(5.0 * (e + c), 0) for e, c in zip(electricity, credit_max_disp)
        ),
    }
    return cells


def report_rows(report):
    """The eleven rendered table rows as (label, single, multi) strings."""
    cells = _display_cells(report)
    rows = [
        ("Daily Energy Savings", f"{cells['daily_mwh'][0]:.4f} MWh", f"{cells['daily_mwh'][1]:.2f} MWh"),
        ("Monthly Energy Savings", f"{cells['monthly_mwh'][0]:.2f} MWh", f"{cells['monthly_mwh'][1]:.2f} MWh"),
        ("Annual Energy Savings", f"{cells['annual_mwh'][0]:.2f} MWh", f"{cells['annual_mwh'][1]:.2f} MWh"),
        ("Annual CO2 Reduction", f"{cells['co2_tonnes'][0]:.2f} metric tons", f"{cells['co2_tonnes'][1]:.2f} metric tons"),
        ("Vehicles Removed", f"{cells['vehicles'][0]:.2f} vehicles", f"{cells['vehicles'][1]:.2f} vehicles"),
        ("Annual Cost Savings", f"${cells['cost_usd'][0]:,.0f}", f"${cells['cost_usd'][1]:,.0f}"),
        (
            "Annual Carbon Credit Value",
            f"${cells['credit_min_usd'][0]:,.2f} - ${cells['credit_max_usd'][0]:,.0f}",
            f"${cells['credit_min_usd'][1]:,.2f} - ${cells['credit_max_usd'][1]:,.0f}",
        ),
        ("Total Savings (1 Yr, Min)", f"${cells['total_1yr_min_usd'][0]:,.0f}", f"${cells['total_1yr_min_usd'][1]:,.0f}"),
        ("Total Savings (1 Yr, Max)", f"${cells['total_1yr_max_usd'][0]:,.0f}", f"${cells['total_1yr_max_usd'][1]:,.0f}"),
        ("Total Savings (5 Yrs, Min)", f"${cells['total_5yr_min_usd'][0]:,.0f}", f"${cells['total_5yr_min_usd'][1]:,.0f}"),
        ("Total Savings (5 Yrs, Max)", f"${cells['total_5yr_max_usd'][0]:,.0f}", f"${cells['total_5yr_max_usd'][1]:,.0f}"),
    ]
    return rows


def render_table(report):
    """Plain-text rendering of the savings assessment table."""
    n = report.assumptions.clusters
    header = ("Metric", "Single Cluster", f"{n} Clusters")
    rows = [header] + [tuple(r) for r in report_rows(report)]
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * widths[j] for j in range(3)))
    return "\n".join(lines)


def impact_csv_rows(report):
    n = report.assumptions.clusters
    rows = [["metric", "single_cluster", f"clusters_{n}"]]
    rows += [[label, single, multi] for label, single, multi in report_rows(report)]
    return rows


def _column_doc(col):
    return {
        "clusters": col.clusters,
        "daily_mwh": col.daily_mwh,
        "monthly_mwh": col.monthly_mwh,
        "annual_mwh": col.annual_mwh,
        "co2_tonnes": col.co2_tonnes,
        "vehicles": col.vehicles,
        "electricity_usd": col.electricity_usd,
        "credit_min_usd": col.credit_min_usd,
        "credit_max_usd": col.credit_max_usd,
        "total_1yr_min_usd": col.total_1yr_min_usd,
        "total_1yr_max_usd": col.total_1yr_max_usd,
        "total_5yr_min_usd": col.total_5yr_min_usd,
        "total_5yr_max_usd": col.total_5yr_max_usd,
    }


def report_doc(report):
    """Structured document: assumptions, exact values, rendered cells."""
    a = report.assumptions
    return {
        "assumptions": {
            "jobs_per_day": a.jobs_per_day,
            "job_kwh": a.job_kwh,
            "optimization_rate": a.optimization_rate,
            "co2_lb_per_kwh": a.co2_lb_per_kwh,
            "lb_to_kg": a.lb_to_kg,
            "vehicle_tons_per_year": a.vehicle_tons_per_year,
            "electricity_usd_per_kwh": a.electricity_usd_per_kwh,
            "credit_usd_per_ton_min": a.credit_usd_per_ton_min,
            "credit_usd_per_ton_max": a.credit_usd_per_ton_max,
            "clusters": a.clusters,
            "days_per_month": a.days_per_month,
            "days_per_year": a.days_per_year,
            "co2_kg_per_mwh_display": a.co2_kg_per_mwh_display,
        },
        "exact": {
            "single": _column_doc(report.single),
            "scaled": _column_doc(report.scaled),
        },
        "rendered": {label: [single, multi] for label, single, multi in report_rows(report)},
    }
