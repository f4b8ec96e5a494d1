"""Command-line entry point: rank, simulate, factorial, impact, serve.

Exit codes: 0 success, 1 domain errors (unschedulable, bad config file),
2 usage errors (unknown names, unparseable flags).
"""

import csv
import json
import os
import sys

import click

from .config import ENV_PORT, load_config
from .errors import GreenPodError, NoFeasibleNodes
from .impact import ImpactAssumptions, compute_impact, impact_csv_rows, render_table, report_doc
from .model import schedule
from .simulate import (
    COMPETITION_LEVELS,
    ExperimentConfig,
    heatmap_rows,
    run_experiment,
    run_factorial,
    summarize,
    write_csv,
    write_report,
)

SCHEME_CHOICES = [
    "general", "balanced",
    "energy", "energy-centric",
    "performance", "performance-centric",
    "resource", "resource-efficient",
]
LEVEL_CHOICES = sorted(COMPETITION_LEVELS)


def _fail(message):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read {what} file {path!r}: {exc}")


def _parse_seeds(text):
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise click.UsageError(f"no seeds parsed from {text!r}")
    return seeds


@click.group()
def main():
    """Energy-aware TOPSIS pod scheduling toolkit."""


@main.command()
@click.option("--nodes", "nodes_file", required=True, type=click.Path(), help="JSON node catalog.")
@click.option("--pod", "pod_file", required=True, type=click.Path(), help="JSON pod document.")
@click.option("--scheme", default="general", type=click.Choice(SCHEME_CHOICES), show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(), help="Model-constants file.")
@click.option("--out", default=None, type=click.Path(), help="Write the full decision as JSON.")
def rank(nodes_file, pod_file, scheme, config_path, out):
    """Rank nodes for one pod and print the best placement."""
    cfg = _load_config_or_fail(config_path)
    node_doc = _load_json(nodes_file, "nodes")
    node_docs = node_doc["nodes"] if isinstance(node_doc, dict) else node_doc
    if not node_docs:
        raise click.UsageError(f"node file {nodes_file!r} contains no nodes")
    pod_doc = _load_json(pod_file, "pod")
    try:
        nodes = [cfg.node_from_doc(d) for d in node_docs]
        pod = cfg.pod_from_doc(pod_doc)
        decision = schedule(pod, nodes, cfg.scheme(scheme), config=cfg)
    except NoFeasibleNodes as exc:
        _fail(f"no feasible node for pod: {exc.rejected}")
    except GreenPodError as exc:
        _fail(str(exc))

    result = decision.rank_result
    click.echo(f"best: {decision.chosen_node}")
    click.echo(f"scheme: {decision.scheme_used}")
    click.echo("node            closeness")
    for name in result.ranking:
        click.echo(f"{name:<15s} {result.closeness_of(name):.6f}")
    if decision.filtered_out:
        click.echo(f"filtered out: {decision.filtered_out}")
    if out:
        doc = {
            "pod": decision.pod,
            "best": decision.chosen_node,
            "scheme": decision.scheme_used,
            "closeness": {n: result.closeness_of(n) for n in result.alternatives},
            "ranking": list(result.ranking),
            "filtered_out": decision.filtered_out,
            "records": result.as_records(),
        }
        with open(out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _load_config_or_fail(config_path):
    try:
        return load_config(config_path)
    except GreenPodError as exc:
        _fail(str(exc))


def _print_summary(summary):
    click.echo(f"{'level':<8s} {'scheme':<22s} {'default kJ':>11s} {'topsis kJ':>11s} "
               f"{'savings kJ':>11s} {'optimization %':>15s}")
    by_level = {}
    for cell in summary["cells"]:
        by_level.setdefault(cell["level"], []).append(cell)
    for level, cells in by_level.items():
        for c in cells:
            click.echo(
                f"{c['level']:<8s} {c['scheme']:<22s} {c['default_kj']:>11.4f} "
                f"{c['topsis_kj']:>11.4f} {c['savings_kj']:>11.4f} {c['optimization_pct']:>15.2f}"
            )
        avg = [a for a in summary["level_averages"] if a["level"] == level]
        if avg:
            a = avg[0]
            click.echo(
                f"{a['level']:<8s} {'average':<22s} {a['default_kj']:>11.4f} "
                f"{a['topsis_kj']:>11.4f} {a['savings_kj']:>11.4f} {a['optimization_pct']:>15.2f}"
            )
    o = summary["overall"]
    click.echo(
        f"{'all':<8s} {'average':<22s} {o['default_kj']:>11.4f} "
        f"{o['topsis_kj']:>11.4f} {o['savings_kj']:>11.4f} {o['optimization_pct']:>15.2f}"
    )


@main.command()
@click.option("--level", required=True, type=click.Choice(LEVEL_CHOICES))
@click.option("--scheme", required=True, type=click.Choice(SCHEME_CHOICES))
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--reps", default=1, show_default=True, type=int, help="Repetitions averaged into the run.")
@click.option("--noise", default=0.05, show_default=True, type=float, help="Multiplicative noise fraction.")
@click.option("--timing/--no-timing", default=False, show_default=True,
              help="Measure wall-clock scheduling time (non-reproducible).")
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--out", default=None, type=click.Path(), help="Write per-run CSV.")
@click.option("--report", "report_path", default=None, type=click.Path(), help="Write JSON report.")
def simulate(level, scheme, seed, reps, noise, timing, config_path, out, report_path):
    """Run one experiment cell (scheduler vs baseline on the same batch)."""
    cfg = _load_config_or_fail(config_path)
    try:
        result = run_experiment(
            ExperimentConfig(
                level=level, scheme=scheme, seed=seed, noise_pct=noise,
                repetitions=reps, measure_timing=timing,
            ),
            app_config=cfg,
        )
    except GreenPodError as exc:
        _fail(str(exc))
    _print_summary(summarize([result]))
    if result.topsis.unschedulable or result.default.unschedulable:
        click.echo(
            f"unschedulable: topsis={result.topsis.unschedulable} "
            f"default={result.default.unschedulable}"
        )
    if out:
        write_csv([result], out)
        click.echo(f"wrote {out}")
    if report_path:
        write_report([result], report_path)
        click.echo(f"wrote {report_path}")


@main.command()
@click.option("--levels", default=",".join(LEVEL_CHOICES), show_default=True,
              help="Comma-separated competition levels.")
@click.option("--schemes", default="general,energy,performance,resource", show_default=True,
              help="Comma-separated scheme names.")
@click.option("--seeds", default="1..30", show_default=True,
              help="Comma list and/or ranges, e.g. 1..30 or 1,2,5..9.")
@click.option("--noise", default=0.05, show_default=True, type=float)
@click.option("--timing/--no-timing", default=False, show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--out", default=None, type=click.Path(), help="Write per-run CSV.")
@click.option("--report", "report_path", default=None, type=click.Path())
@click.option("--heatmap", "heatmap_path", default=None, type=click.Path(),
              help="Write scheme x level optimization-% grid CSV.")
def factorial(levels, schemes, seeds, noise, timing, config_path, out, report_path, heatmap_path):
    """Run the full factorial design and print the summary table."""
    cfg = _load_config_or_fail(config_path)
    level_list = [s.strip() for s in levels.split(",") if s.strip()]
    scheme_list = [s.strip() for s in schemes.split(",") if s.strip()]
    for lvl in level_list:
        if lvl not in COMPETITION_LEVELS:
            raise click.UsageError(f"unknown level {lvl!r}; valid: {', '.join(LEVEL_CHOICES)}")
    for s in scheme_list:
        if s not in SCHEME_CHOICES:
            raise click.UsageError(f"unknown scheme {s!r}; valid: {', '.join(SCHEME_CHOICES)}")
    seed_list = _parse_seeds(seeds)
    try:
        results = run_factorial(
            level_list, scheme_list, seed_list,
            noise_pct=noise, measure_timing=timing, app_config=cfg,
        )
    except GreenPodError as exc:
        _fail(str(exc))
    _print_summary(summarize(results))
    if out:
        write_csv(results, out)
        click.echo(f"wrote {out}")
    if report_path:
        write_report(results, report_path)
        click.echo(f"wrote {report_path}")
    if heatmap_path:
        with open(heatmap_path, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(heatmap_rows(results))
        click.echo(f"wrote {heatmap_path}")


@main.command()
@click.option("--jobs-per-day", default=None, type=float)
@click.option("--job-kwh", default=None, type=float)
@click.option("--optimization", default=None, type=float, help="Optimization rate in [0, 1].")
@click.option("--co2-lb-per-kwh", default=None, type=float)
@click.option("--lb-to-kg", default=None, type=float)
@click.option("--vehicle-tons", default=None, type=float)
@click.option("--electricity-rate", default=None, type=float, help="USD per kWh.")
@click.option("--credit-min", default=None, type=float, help="USD per metric ton.")
@click.option("--credit-max", default=None, type=float, help="USD per metric ton.")
@click.option("--clusters", default=None, type=int)
@click.option("--days-per-month", default=None, type=float)
@click.option("--days-per-year", default=None, type=float)
@click.option("--co2-display-factor", default=None, type=float,
              help="kg CO2 per MWh used by the rendered table only.")
@click.option("--json", "json_path", default=None, type=click.Path())
@click.option("--csv", "csv_path", default=None, type=click.Path())
def impact(jobs_per_day, job_kwh, optimization, co2_lb_per_kwh, lb_to_kg, vehicle_tons,
           electricity_rate, credit_min, credit_max, clusters, days_per_month,
           days_per_year, co2_display_factor, json_path, csv_path):
    """Print the energy/cost savings assessment table."""
    overrides = {
        "jobs_per_day": jobs_per_day,
        "job_kwh": job_kwh,
        "optimization_rate": optimization,
        "co2_lb_per_kwh": co2_lb_per_kwh,
        "lb_to_kg": lb_to_kg,
        "vehicle_tons_per_year": vehicle_tons,
        "electricity_usd_per_kwh": electricity_rate,
        "credit_usd_per_ton_min": credit_min,
        "credit_usd_per_ton_max": credit_max,
        "clusters": clusters,
        "days_per_month": days_per_month,
        "days_per_year": days_per_year,
        "co2_kg_per_mwh_printed": co2_display_factor,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    try:
        assumptions = ImpactAssumptions().with_overrides(**overrides)
        report = compute_impact(assumptions)
    except GreenPodError as exc:
        _fail(str(exc))
    click.echo(render_table(report))
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(report_doc(report), fh, indent=2, sort_keys=True)
            fh.write("\n")
        click.echo(f"wrote {json_path}")
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(impact_csv_rows(report))
        click.echo(f"wrote {csv_path}")


@main.command()
@click.option("--host", default="0.0.0.0", show_default=True)
@click.option("--port", default=None, type=int, help=f"Defaults to ${ENV_PORT} or 8080.")
@click.option("--scheme", default=None, type=click.Choice(SCHEME_CHOICES),
              help="Default scheme (falls back to $GREENPOD_SCHEME).")
@click.option("--config", "config_path", default=None, type=click.Path())
def serve(host, port, scheme, config_path):
    """Run the scheduler-extender HTTP service."""
    from .service import serve as run_service

    if port is None:
        port = int(os.environ.get(ENV_PORT, "8080"))
    try:
        run_service(host=host, port=port, config_path=config_path, scheme=scheme)
    except GreenPodError as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
