"""What-if analysis: deployment-model comparison and parameter sweeps.

The comparison solves the same scenario restricted to each deployment
model's candidate subset; sweeps rescale one cost or footprint dimension
and re-solve the hybrid from scratch at every grid point.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace

from .formulation import Plan, build_milp, check_plan_invariants, decode
from .model import (
    CostEntry,
    CostModel,
    FootprintTable,
    PlatformKind,
    Scenario,
    validate,
)
from .solver import MilpSolution, NodeBudgetExceeded, solve_milp

DEPLOYMENT_MODELS = ("single", "flexhw", "cloud", "hybrid")

_MODEL_KINDS = {
    "single": (PlatformKind.DEDICATED,),
    "flexhw": (PlatformKind.FLEXHW,),
    "cloud": (PlatformKind.CLOUD,),
    "hybrid": (PlatformKind.DEDICATED, PlatformKind.FLEXHW, PlatformKind.CLOUD),
}

SWEEP_PARAMETERS = ("cloud_elas_multiplier", "fixed_opex_multiplier",
                    "footprint_gap")


class AnalysisError(RuntimeError):
    pass


# -- scenario surgery ---------------------------------------------------------

def restrict_to_kinds(scenario: Scenario, kinds) -> Scenario:
    """Scenario with the candidate set filtered to the given platform kinds."""
    kinds = tuple(kinds)
    instances = tuple(p for p in scenario.instances if p.kind in kinds)
    return replace(scenario, instances=instances)


def scale_costs(scenario: Scenario, *, elas: float = 1.0,
                fixed: float = 1.0) -> Scenario:
    entries = {
        key: CostEntry(fixed=e.fixed * fixed, var=e.var, elas=e.elas * elas)
        for key, e in scenario.cost_model.entries.items()
    }
    return replace(scenario, cost_model=CostModel(entries))


def scale_virtual_footprints(scenario: Scenario, gap: float) -> Scenario:
    """Set virtualized footprints to ``gap`` times the specialized baseline.

    The dedicated-platform entry is the baseline where present; entries
    without one are scaled in place.
    """
    entries = dict(scenario.footprints.entries)
    out = {}
    for (c, m, kind), fp in entries.items():
        if kind in (PlatformKind.FLEXHW, PlatformKind.CLOUD):
            base = entries.get((c, m, PlatformKind.DEDICATED), fp)
            out[(c, m, kind)] = base * gap
        else:
            out[(c, m, kind)] = fp
    return replace(scenario, footprints=FootprintTable(out))


def without_threshold(scenario: Scenario, class_id: str | None = None) -> Scenario:
    """Drop latency SLAs (for one class, or all of them)."""
    classes = tuple(
        replace(c, latency_threshold=None)
        if class_id is None or c.id == class_id else c
        for c in scenario.classes
    )
    return replace(scenario, classes=classes)


# -- model comparison ----------------------------------------------------------

@dataclass
class ModelResult:
    model: str
    status: str                      # 'optimal' | 'infeasible'
    cost_total: float | None = None
    breakdown: dict[str, float] | None = None
    plan: Plan | None = None
    node_count: int = 0


@dataclass
class ComparisonReport:
    scenario_label: str
    results: dict[str, ModelResult] = field(default_factory=dict)

    def row(self, model: str) -> ModelResult:
        return self.results[model]


def _solve_scenario(scenario: Scenario,
                    node_budget: int = 200_000) -> tuple[str, MilpSolution | None, Plan | None]:
    """Solve one scenario variant; 'infeasible' covers uncoverable stages."""
    if validate(scenario):
        return "infeasible", None, None
    problem, vi = build_milp(scenario)
    solution = solve_milp(problem, node_budget=node_budget)
    if solution.status != "optimal":
        return "infeasible", None, None
    plan = decode(scenario, vi, solution)
    check_plan_invariants(scenario, vi, solution, plan)
    return "optimal", solution, plan


def compare_models(scenario: Scenario, node_budget: int = 200_000,
                   label: str = "") -> ComparisonReport:
    """Solve the scenario under each deployment model and tabulate costs.

    Models whose candidate subset cannot cover some chain stage, or whose
    latency SLAs are unsatisfiable, come back 'infeasible'.  The hybrid
    row is checked for dominance: its feasible set contains every other
    model's, so its optimal cost can never be worse.
    """
    report = ComparisonReport(scenario_label=label)
    for model in DEPLOYMENT_MODELS:
        sub = restrict_to_kinds(scenario, _MODEL_KINDS[model])
        try:
            status, solution, plan = _solve_scenario(sub, node_budget)
        except NodeBudgetExceeded as exc:
            raise AnalysisError(
                f"budget exhausted while solving the {model} model"
            ) from exc
        if status == "optimal":
            report.results[model] = ModelResult(
                model=model, status="optimal", cost_total=plan.cost_total,
                breakdown=dict(plan.cost_breakdown), plan=plan,
                node_count=solution.node_count)
        else:
            report.results[model] = ModelResult(model=model, status="infeasible")
    hybrid = report.results["hybrid"]
    if hybrid.status == "optimal":
        for model in ("single", "flexhw", "cloud"):
            other = report.results[model]
            if (other.status == "optimal"
                    and hybrid.cost_total > other.cost_total + 1e-6):
                raise AnalysisError(
                    f"dominance violated: hybrid {hybrid.cost_total} > "
                    f"{model} {other.cost_total}")
    return report


# -- sweeps ---------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]
    base_scenario: str = ""

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValueError(
                f"unknown sweep parameter {self.parameter!r}; "
                f"valid: {', '.join(SWEEP_PARAMETERS)}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if any(v <= 0 for v in self.values):
            raise ValueError("sweep values must be positive")
        diffs = [b - a for a, b in zip(self.values, self.values[1:])]
        if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ValueError("sweep values must be strictly monotone")


@dataclass
class SweepPoint:
    value: float
    status: str
    cost_total: float | None = None
    mix: dict[str, float] | None = None   # share of provisioned units by kind
    breakdown: dict[str, float] | None = None
    plan: Plan | None = None


def apply_sweep_value(scenario: Scenario, parameter: str, value: float) -> Scenario:
    if parameter == "cloud_elas_multiplier":
        return scale_costs(scenario, elas=value)
    if parameter == "fixed_opex_multiplier":
        return scale_costs(scenario, fixed=value)
    if parameter == "footprint_gap":
        return scale_virtual_footprints(scenario, value)
    raise ValueError(f"unknown sweep parameter {parameter!r}")


def platform_mix(scenario: Scenario, plan: Plan) -> dict[str, float]:
    """Share of provisioned resource-units per platform kind.

    Counts Res per platform, plus the summed per-epoch usage for elastic
    platforms (their Res is not a meaningful commitment).
    """
    units = {k.value: 0.0 for k in PlatformKind}
    for p in scenario.instances:
        if p.ptype.elastic:
            amount = sum(plan.res_epoch.get((p.id, e), 0.0)
                         for e in range(1, scenario.epochs + 1))
        else:
            amount = plan.res.get(p.id, 0.0)
        units[p.kind.value] += amount
    total = sum(units.values())
    if total <= 0:
        return {k: 0.0 for k in units}
    return {k: v / total for k, v in units.items()}


def sweep(spec: SweepSpec, scenario: Scenario,
          node_budget: int = 200_000) -> list[SweepPoint]:
    """Re-solve the scenario at every sweep value and record cost and mix.

    Footprint-gap sweeps compare repurposable against specialized hardware,
    so the candidate set drops cloud points for that parameter.  Infeasible
    points are recorded and the sweep continues.  For the two cost
    multipliers the optimal cost is checked to be non-decreasing in the
    multiplier (the feasible set is unchanged while objective coefficients
    scale up); a violation means a solver bug.
    """
    base = scenario
    if spec.parameter == "footprint_gap":
        base = restrict_to_kinds(scenario,
                                 (PlatformKind.FLEXHW, PlatformKind.DEDICATED))
    points: list[SweepPoint] = []
    for value in spec.values:
        variant = apply_sweep_value(base, spec.parameter, value)
        try:
            status, solution, plan = _solve_scenario(variant, node_budget)
        except NodeBudgetExceeded as exc:
            raise AnalysisError(
                f"budget exhausted at sweep value {value}") from exc
        if status == "optimal":
            points.append(SweepPoint(
                value=value, status="optimal", cost_total=plan.cost_total,
                mix=platform_mix(variant, plan),
                breakdown=dict(plan.cost_breakdown), plan=plan))
        else:
            points.append(SweepPoint(value=value, status="infeasible"))
    if spec.parameter in ("cloud_elas_multiplier", "fixed_opex_multiplier"):
        feas = [(p.value, p.cost_total) for p in points if p.status == "optimal"]
        for (v1, c1), (v2, c2) in zip(feas, feas[1:]):
            lo, hi = (c1, c2) if v1 <= v2 else (c2, c1)
            if lo > hi + 1e-6 * max(1.0, abs(hi)):
                raise AnalysisError(
                    f"cost not monotone in {spec.parameter}: "
                    f"{v1}->{c1}, {v2}->{c2}")
    return points


def breakdown(plan: Plan) -> dict[str, float]:
    """Fixed / hardware / elastic shares of a plan's total cost."""
    return dict(plan.cost_breakdown)


# -- report serialization --------------------------------------------------------

COMPARISON_COLUMNS = ["model", "status", "cost_total", "fixed", "hardware",
                      "elastic", "nodes"]
SWEEP_COLUMNS = ["value", "status", "cost_total", "fixed", "hardware", "elastic",
                 "mix_dedicated", "mix_flexhw", "mix_cloud"]
SOLVE_COLUMNS = ["status", "cost_total", "fixed", "hardware", "elastic", "nodes"]


def comparison_to_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARISON_COLUMNS)
    for model in DEPLOYMENT_MODELS:
        r = report.results[model]
        if r.status == "optimal":
            w.writerow([model, r.status, f"{r.cost_total:.6f}",
                        f"{r.breakdown['fixed']:.6f}",
                        f"{r.breakdown['hardware']:.6f}",
                        f"{r.breakdown['elastic']:.6f}", r.node_count])
        else:
            w.writerow([model, r.status, "", "", "", "", r.node_count])
    return buf.getvalue()


def sweep_to_csv(points: list[SweepPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for p in points:
        if p.status == "optimal":
            w.writerow([f"{p.value:g}", p.status, f"{p.cost_total:.6f}",
                        f"{p.breakdown['fixed']:.6f}",
                        f"{p.breakdown['hardware']:.6f}",
                        f"{p.breakdown['elastic']:.6f}",
                        f"{p.mix['dedicated']:.6f}",
                        f"{p.mix['flexhw']:.6f}",
                        f"{p.mix['cloud']:.6f}"])
        else:
            w.writerow([f"{p.value:g}", p.status, "", "", "", "", "", "", ""])
    return buf.getvalue()


def comparison_to_dict(report: ComparisonReport) -> dict:
    out = {"label": report.scenario_label, "models": {}}
    for model in DEPLOYMENT_MODELS:
        r = report.results[model]
        entry = {"status": r.status, "nodes": r.node_count}
        if r.status == "optimal":
            entry["cost_total"] = r.cost_total
            entry["breakdown"] = r.breakdown
            entry["plan"] = r.plan.to_dict()
        out["models"][model] = entry
    return out


def sweep_to_dict(spec: SweepSpec, points: list[SweepPoint]) -> dict:
    rows = []
    for p in points:
        row = {"value": p.value, "status": p.status}
        if p.status == "optimal":
            row["cost_total"] = p.cost_total
            row["breakdown"] = p.breakdown
            row["mix"] = p.mix
            row["plan"] = p.plan.to_dict()
        rows.append(row)
    return {"parameter": spec.parameter, "points": rows}
