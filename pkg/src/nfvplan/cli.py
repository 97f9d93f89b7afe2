"""Command-line interface: validate, solve, compare, sweep, generate.

Exit codes: 0 success/optimal, 2 infeasible, 1 any error.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import analysis
from .formulation import build_milp, check_plan_invariants, decode
from .generate import (
    VariabilityModel,
    paper_workload,
    random_scenario,
    sec2_combined,
    sec2_video,
)
from .model import (
    Scenario,
    ScenarioFormatError,
    dumps_scenario,
    load_scenario,
    validate,
)
from .solver import NodeBudgetExceeded, solve_milp, write_lp

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def plan_json(plan) -> str:
    """Canonical plan serialization shared by the CLI and the HTTP service."""
    return json.dumps(plan.to_dict(), sort_keys=True, indent=2) + "\n"


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except FileNotFoundError:
        raise click.ClickException(f"scenario file not found: {path}")
    except ScenarioFormatError as exc:
        raise click.ClickException(str(exc))


def _require_valid(scenario: Scenario) -> None:
    violations = validate(scenario)
    if violations:
        for v in violations:
            click.echo(f"violation: {v}", err=True)
        raise click.ClickException(f"{len(violations)} validation violation(s)")


@click.group()
def main() -> None:
    """Provisioning planner for NFV deployment scenarios."""


@main.command("validate")
@click.argument("scenario_path", type=click.Path())
def cmd_validate(scenario_path: str) -> None:
    """Check a scenario file; list violations if any."""
    scenario = _load(scenario_path)
    violations = validate(scenario)
    if violations:
        for v in violations:
            click.echo(f"violation: {v}")
        sys.exit(EXIT_ERROR)
    click.echo("ok")


@main.command("solve")
@click.argument("scenario_path", type=click.Path())
@click.option("--out-dir", default=".", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--node-budget", default=200_000, show_default=True)
@click.option("--export-lp", is_flag=True,
              help="Also write the program in CPLEX-LP text form.")
def cmd_solve(scenario_path: str, out_dir: str, node_budget: int,
              export_lp: bool) -> None:
    """Solve one scenario; write plan.json and report.csv."""
    scenario = _load(scenario_path)
    _require_valid(scenario)
    os.makedirs(out_dir, exist_ok=True)
    problem, vi = build_milp(scenario)
    if export_lp:
        with open(os.path.join(out_dir, "model.lp"), "w", encoding="utf-8") as fh:
            fh.write(write_lp(problem))
    try:
        solution = solve_milp(problem, node_budget=node_budget)
    except NodeBudgetExceeded as exc:
        raise click.ClickException(str(exc))
    if solution.status != "optimal":
        click.echo("infeasible")
        sys.exit(EXIT_INFEASIBLE)
    plan = decode(scenario, vi, solution)
    check_plan_invariants(scenario, vi, solution, plan)
    with open(os.path.join(out_dir, "plan.json"), "w", encoding="utf-8") as fh:
        fh.write(plan_json(plan))
    rows = [analysis.SOLVE_COLUMNS,
            ["optimal", f"{plan.cost_total:.6f}",
             f"{plan.cost_breakdown['fixed']:.6f}",
             f"{plan.cost_breakdown['hardware']:.6f}",
             f"{plan.cost_breakdown['elastic']:.6f}",
             str(solution.node_count)]]
    with open(os.path.join(out_dir, "report.csv"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(",".join(r) for r in rows) + "\n")
    click.echo(f"optimal cost {plan.cost_total:.6f} "
               f"({solution.node_count} nodes)")


@main.command("compare")
@click.argument("scenario_path", type=click.Path())
@click.option("--out-dir", default=".", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--node-budget", default=200_000, show_default=True)
def cmd_compare(scenario_path: str, out_dir: str, node_budget: int) -> None:
    """Cost comparison across the four deployment models."""
    scenario = _load(scenario_path)
    _require_valid(scenario)
    report = analysis.compare_models(scenario, node_budget=node_budget,
                                     label=os.path.basename(scenario_path))
    os.makedirs(out_dir, exist_ok=True)
    csv_text = analysis.comparison_to_csv(report)
    with open(os.path.join(out_dir, "report.csv"), "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    click.echo(csv_text, nl=False)


@main.command("sweep")
@click.argument("scenario_path", type=click.Path())
@click.option("--param", "parameter", required=True,
              help=f"One of: {', '.join(analysis.SWEEP_PARAMETERS)}.")
@click.option("--values", required=True,
              help="Comma-separated positive values, strictly monotone.")
@click.option("--out-dir", default=".", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--node-budget", default=200_000, show_default=True)
def cmd_sweep(scenario_path: str, parameter: str, values: str, out_dir: str,
              node_budget: int) -> None:
    """Re-solve across a parameter grid; write one CSV row per point."""
    scenario = _load(scenario_path)
    _require_valid(scenario)
    try:
        grid = tuple(float(v) for v in values.split(",") if v.strip())
        spec = analysis.SweepSpec(parameter=parameter, values=grid)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    points = analysis.sweep(spec, scenario, node_budget=node_budget)
    os.makedirs(out_dir, exist_ok=True)
    csv_text = analysis.sweep_to_csv(points)
    with open(os.path.join(out_dir, "report.csv"), "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    click.echo(csv_text, nl=False)


_GENERATORS = ("paper", "sec2-video", "sec2-combined", "random")


@main.command("generate")
@click.option("--kind", type=click.Choice(_GENERATORS), default="paper",
              show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--total-volume", default=2600.0, show_default=True,
              help="Gravity-model total volume (paper kind only).")
@click.option("--variability", default="uniform_jitter",
              type=click.Choice(["none", "uniform_jitter", "single_spike"]),
              show_default=True)
@click.option("--out", "out_path", default="scenario.json", show_default=True,
              type=click.Path(dir_okay=False))
def cmd_generate(kind: str, seed: int, total_volume: float, variability: str,
                 out_path: str) -> None:
    """Emit a scenario file from one of the built-in generators."""
    if kind == "paper":
        model = VariabilityModel(kind=variability, alpha=0.25, epoch=3,
                                 factor=5.0, seed=seed)
        scenario = paper_workload(seed=seed, total_volume=total_volume,
                                  variability=model)
    elif kind == "sec2-video":
        scenario = sec2_video()
    elif kind == "sec2-combined":
        scenario = sec2_combined()
    else:
        scenario = random_scenario(seed)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scenario(scenario))
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
