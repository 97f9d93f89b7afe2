"""Compile scenarios into the provisioning MILP and decode solutions.

Decision variables, per candidate platform instance p, traffic class c,
epoch e and chain stage NF m:

* ``Active(p)``        binary: deploy p at all
* ``Res(p)``           resource-units provisioned on p for the horizon
* ``ResEpoch(p, e)``   resource-units used on p during epoch e
* ``FlowFirst(c,e,p)`` fraction of class c's epoch-e traffic entering its
  first chain stage on p
* ``Flow(c,e,p,m,q,m')`` fraction forwarded from stage NF m on p to the
  next stage NF m' on q

The objective charges fixed cost on Active, hardware cost on Res and
elastic cost on ResEpoch.  Constraints tie per-epoch load to ResEpoch
(equality), cap load by Res, cap Res by capacity and by Active (deployment
gating), route all traffic to first-stage hosts, conserve flow stage to
stage, and bound the flow-weighted average latency per class where a
threshold is given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .model import (
    PlatformInstance,
    PlatformKind,
    Scenario,
    TrafficClass,
    validate,
)
from .solver import MilpProblem, MilpSolution, ProblemBuilder

DEFAULT_VAR_BUDGET = 2_000_000
COST_CHECK_REL_TOL = 1e-6


class FormulationError(ValueError):
    """Scenario cannot be compiled (validation failures, size budget)."""


class DecodeMismatchError(RuntimeError):
    """Recomputed plan cost disagrees with the solver objective."""


# -- variable keys ----------------------------------------------------------

@dataclass(frozen=True)
class ActiveVar:
    p: str


@dataclass(frozen=True)
class ResVar:
    p: str


@dataclass(frozen=True)
class ResEpochVar:
    p: str
    e: int  # 1-based epoch


@dataclass(frozen=True)
class FlowFirstVar:
    c: str
    e: int
    p: str
    m: str


@dataclass(frozen=True)
class FlowVar:
    c: str
    e: int
    p: str
    m: str
    q: str
    mn: str


VarKey = Union[ActiveVar, ResVar, ResEpochVar, FlowFirstVar, FlowVar]


def _lp_id(s: str) -> str:
    return s.replace("-", "_").replace(" ", "_")


def var_name(key: VarKey) -> str:
    if isinstance(key, ActiveVar):
        return f"act_{_lp_id(key.p)}"
    if isinstance(key, ResVar):
        return f"res_{_lp_id(key.p)}"
    if isinstance(key, ResEpochVar):
        return f"rese_{_lp_id(key.p)}_{key.e}"
    if isinstance(key, FlowFirstVar):
        return f"f_{_lp_id(key.c)}_{key.e}_{_lp_id(key.p)}_{_lp_id(key.m)}"
    return (f"f_{_lp_id(key.c)}_{key.e}_{_lp_id(key.p)}_{_lp_id(key.m)}"
            f"_{_lp_id(key.q)}_{_lp_id(key.mn)}")


@dataclass
class VarIndex:
    """Bidirectional map between variable keys and column indices."""

    keys: list[VarKey] = field(default_factory=list)
    index: dict[VarKey, int] = field(default_factory=dict)

    def add(self, key: VarKey) -> int:
        j = len(self.keys)
        self.keys.append(key)
        self.index[key] = j
        return j

    def __getitem__(self, key: VarKey) -> int:
        return self.index[key]

    def __contains__(self, key: VarKey) -> bool:
        return key in self.index

    def __len__(self) -> int:
        return len(self.keys)


@dataclass
class Plan:
    """Operator-readable decode of an optimal solution."""

    active: set[str]
    res: dict[str, float]
    res_epoch: dict[tuple[str, int], float]
    flows: dict[VarKey, float]
    cost_total: float
    cost_breakdown: dict[str, float]  # fixed / hardware / elastic
    per_class_latency: dict[tuple[str, int], float]

    def to_dict(self) -> dict:
        flow_records = []
        for key, frac in self.flows.items():
            if isinstance(key, FlowFirstVar):
                flow_records.append({
                    "class": key.c, "epoch": key.e, "instance": key.p,
                    "nf": key.m, "fraction": frac,
                })
            else:
                flow_records.append({
                    "class": key.c, "epoch": key.e,
                    "src_instance": key.p, "src_nf": key.m,
                    "dst_instance": key.q, "dst_nf": key.mn,
                    "fraction": frac,
                })
        flow_records.sort(key=lambda r: (r["class"], r["epoch"],
                                         r.get("instance", r.get("src_instance", "")),
                                         r.get("dst_instance", "")))
        return {
            "active": sorted(self.active),
            "res": {p: v for p, v in sorted(self.res.items())},
            "res_epoch": {
                p: {str(e): val for (pp, e), val in sorted(self.res_epoch.items())
                    if pp == p}
                for p in sorted({pp for pp, _ in self.res_epoch})
            },
            "flows": flow_records,
            "cost_total": self.cost_total,
            "cost_breakdown": dict(sorted(self.cost_breakdown.items())),
            "per_class_latency": {
                c: {str(e): ms for (cc, e), ms in sorted(self.per_class_latency.items())
                    if cc == c}
                for c in sorted({cc for cc, _ in self.per_class_latency})
            },
        }


# -- build -------------------------------------------------------------------

def _stage_hosts(scenario: Scenario, cls: TrafficClass) -> list[list[PlatformInstance]]:
    return [scenario.hosts(m) for m in cls.chain.stages]


def count_variables(scenario: Scenario) -> int:
    """Variable count implied by the construction rules, without building."""
    n = 2 * len(scenario.instances) + len(scenario.instances) * scenario.epochs
    for cls in scenario.classes:
        hosts = _stage_hosts(scenario, cls)
        n += scenario.epochs * len(hosts[0])
        for j in range(len(hosts) - 1):
            n += scenario.epochs * len(hosts[j]) * len(hosts[j + 1])
    return n


def build_milp(scenario: Scenario,
               var_budget: int = DEFAULT_VAR_BUDGET) -> tuple[MilpProblem, VarIndex]:
    """Compile a validated scenario into a standard-form MILP."""
    violations = validate(scenario)
    if violations:
        raise FormulationError(
            "scenario fails validation: " + "; ".join(str(v) for v in violations))
    n_expected = count_variables(scenario)
    if n_expected > var_budget:
        raise FormulationError(
            f"instance too large: {n_expected} variables exceed the budget "
            f"of {var_budget}")

    b = ProblemBuilder()
    vi = VarIndex()
    epochs = range(1, scenario.epochs + 1)
    cost = scenario.cost_model

    def new_var(key: VarKey, **kw) -> int:
        j = b.add_var(var_name(key), **kw)
        assert vi.add(key) == j
        return j

    for p in scenario.instances:
        entry = cost.get(p.location, p.kind)
        new_var(ActiveVar(p.id), obj=entry.fixed, binary=True)
    for p in scenario.instances:
        entry = cost.get(p.location, p.kind)
        new_var(ResVar(p.id), obj=entry.var, lower=0.0, upper=p.capacity)
    for p in scenario.instances:
        entry = cost.get(p.location, p.kind)
        for e in epochs:
            new_var(ResEpochVar(p.id, e), obj=entry.elas, lower=0.0)

    hosts_by_class = {cls.id: _stage_hosts(scenario, cls) for cls in scenario.classes}
    for cls in scenario.classes:
        hosts = hosts_by_class[cls.id]
        stages = cls.chain.stages
        for e in epochs:
            for p in hosts[0]:
                new_var(FlowFirstVar(cls.id, e, p.id, stages[0]),
                        lower=0.0, upper=1.0)
            for j in range(len(stages) - 1):
                for p in hosts[j]:
                    for q in hosts[j + 1]:
                        new_var(FlowVar(cls.id, e, p.id, stages[j],
                                        q.id, stages[j + 1]),
                                lower=0.0, upper=1.0)
    assert len(vi) == n_expected

    def inflow_terms(cls: TrafficClass, e: int, p: PlatformInstance,
                     j: int) -> dict[int, float]:
        """Columns carrying class-c traffic into stage j (0-based) on p."""
        stages = cls.chain.stages
        if j == 0:
            return {vi[FlowFirstVar(cls.id, e, p.id, stages[0])]: 1.0}
        prev_hosts = hosts_by_class[cls.id][j - 1]
        return {
            vi[FlowVar(cls.id, e, q.id, stages[j - 1], p.id, stages[j])]: 1.0
            for q in prev_hosts
        }

    # Per-epoch load on each platform: sum over the chain stages it can
    # host of footprint x volume x inflow fraction.
    def load_terms(p: PlatformInstance, e: int) -> dict[int, float]:
        terms: dict[int, float] = {}
        for cls in scenario.classes:
            vol = cls.volumes[e - 1]
            for j, m in enumerate(cls.chain.stages):
                if not p.ptype.supports(m):
                    continue
                fp = scenario.footprints.get(cls.id, m, p.kind)
                coef = fp * vol
                for col, w in inflow_terms(cls, e, p, j).items():
                    terms[col] = terms.get(col, 0.0) + coef * w
        return terms

    for p in scenario.instances:
        for e in epochs:
            load = load_terms(p, e)
            # Load equals the per-epoch usage variable...
            row = dict(load)
            row[vi[ResEpochVar(p.id, e)]] = row.get(vi[ResEpochVar(p.id, e)], 0.0) - 1.0
            b.add_row(row, "=", 0.0, name=f"load_eq_{_lp_id(p.id)}_{e}")
            # ...and never exceeds the provisioned resources.
            row = dict(load)
            row[vi[ResVar(p.id)]] = row.get(vi[ResVar(p.id)], 0.0) - 1.0
            b.add_row(row, "<=", 0.0, name=f"load_cap_{_lp_id(p.id)}_{e}")

    # Deployment gating: resources only on activated platforms.  The plain
    # capacity cap Res <= Cap is carried by the variable's upper bound.
    for p in scenario.instances:
        b.add_row({vi[ResVar(p.id)]: 1.0, vi[ActiveVar(p.id)]: -p.capacity},
                  "<=", 0.0, name=f"gate_{_lp_id(p.id)}")

    for cls in scenario.classes:
        hosts = hosts_by_class[cls.id]
        stages = cls.chain.stages
        for e in epochs:
            # All traffic reaches some first-stage host.
            b.add_row({vi[FlowFirstVar(cls.id, e, p.id, stages[0])]: 1.0
                       for p in hosts[0]},
                      "=", 1.0, name=f"firsthop_{_lp_id(cls.id)}_{e}")
            # Per-node conservation: whatever enters a stage leaves for the
            # next one.
            for j in range(len(stages) - 1):
                for p in hosts[j]:
                    row = inflow_terms(cls, e, p, j)
                    for q in hosts[j + 1]:
                        col = vi[FlowVar(cls.id, e, p.id, stages[j],
                                         q.id, stages[j + 1])]
                        row[col] = row.get(col, 0.0) - 1.0
                    b.add_row(row, "=", 0.0,
                              name=f"cons_{_lp_id(cls.id)}_{e}_{_lp_id(p.id)}_{j + 1}")

    # Average-latency bound per class and epoch, where a threshold exists.
    legs = scenario.options.include_ingress_egress_latency
    for cls in scenario.classes:
        if cls.latency_threshold is None:
            continue
        hosts = hosts_by_class[cls.id]
        stages = cls.chain.stages
        for e in epochs:
            row: dict[int, float] = {}

            def bump(col: int, w: float) -> None:
                if w != 0.0:
                    row[col] = row.get(col, 0.0) + w

            for j in range(len(stages) - 1):
                for p in hosts[j]:
                    for q in hosts[j + 1]:
                        lat = scenario.latency.get(p.id, q.id)
                        bump(vi[FlowVar(cls.id, e, p.id, stages[j],
                                        q.id, stages[j + 1])], lat)
            if legs:
                for p in hosts[0]:
                    bump(vi[FlowFirstVar(cls.id, e, p.id, stages[0])],
                         scenario.latency.get(cls.ingress, p.id))
                for p in hosts[-1]:
                    lat = scenario.latency.get(p.id, cls.egress)
                    for col, w in inflow_terms(cls, e, p, len(stages) - 1).items():
                        bump(col, lat * w)
            b.add_row(row, "<=", cls.latency_threshold,
                      name=f"lat_{_lp_id(cls.id)}_{e}")

    # Advanced-start hint for the solver: activate everything at full
    # capacity and route each commodity down its first candidate path.
    # This is only a warm start; it never affects the optimum.
    hint: list[int] = []
    for p in scenario.instances:
        hint.append(vi[ActiveVar(p.id)])
        hint.append(vi[ResVar(p.id)])
    for cls in scenario.classes:
        hosts = hosts_by_class[cls.id]
        stages = cls.chain.stages
        for e in epochs:
            hint.append(vi[FlowFirstVar(cls.id, e, hosts[0][0].id, stages[0])])
            for j in range(len(stages) - 1):
                hint.append(vi[FlowVar(cls.id, e, hosts[j][0].id, stages[j],
                                       hosts[j + 1][0].id, stages[j + 1])])
    b.set_start_hint(hint)

    # Optional static routing: identical flow split in every epoch.
    if scenario.options.static_routing and scenario.epochs > 1:
        for cls in scenario.classes:
            hosts = hosts_by_class[cls.id]
            stages = cls.chain.stages
            for e in range(2, scenario.epochs + 1):
                for p in hosts[0]:
                    b.add_row({vi[FlowFirstVar(cls.id, e, p.id, stages[0])]: 1.0,
                               vi[FlowFirstVar(cls.id, 1, p.id, stages[0])]: -1.0},
                              "=", 0.0)
                for j in range(len(stages) - 1):
                    for p in hosts[j]:
                        for q in hosts[j + 1]:
                            b.add_row(
                                {vi[FlowVar(cls.id, e, p.id, stages[j],
                                            q.id, stages[j + 1])]: 1.0,
                                 vi[FlowVar(cls.id, 1, p.id, stages[j],
                                            q.id, stages[j + 1])]: -1.0},
                                "=", 0.0)

    return b.build(), vi


# -- decode -------------------------------------------------------------------

def _plan_latency(scenario: Scenario, cls: TrafficClass, e: int,
                  flows: Mapping[VarKey, float]) -> float:
    hosts = _stage_hosts(scenario, cls)
    stages = cls.chain.stages
    total = 0.0
    for j in range(len(stages) - 1):
        for p in hosts[j]:
            for q in hosts[j + 1]:
                frac = flows.get(FlowVar(cls.id, e, p.id, stages[j],
                                         q.id, stages[j + 1]), 0.0)
                if frac:
                    total += frac * scenario.latency.get(p.id, q.id)
    if scenario.options.include_ingress_egress_latency:
        if cls.ingress is not None:
            for p in hosts[0]:
                frac = flows.get(FlowFirstVar(cls.id, e, p.id, stages[0]), 0.0)
                if frac:
                    total += frac * scenario.latency.get(cls.ingress, p.id)
        if cls.egress is not None:
            for p in hosts[-1]:
                if len(stages) == 1:
                    frac = flows.get(FlowFirstVar(cls.id, e, p.id, stages[0]), 0.0)
                else:
                    frac = sum(
                        flows.get(FlowVar(cls.id, e, q.id, stages[-2],
                                          p.id, stages[-1]), 0.0)
                        for q in hosts[-2])
                if frac:
                    total += frac * scenario.latency.get(p.id, cls.egress)
    return total


def decode(scenario: Scenario, var_index: VarIndex,
           solution: MilpSolution) -> Plan:
    """Turn a solver solution into a Plan, re-deriving costs independently.

    Degenerate freedom in the solution (an activated platform carrying no
    load at zero fixed cost, or slack provisioning at zero hardware cost)
    is canonicalized away: Res becomes the peak per-epoch load and only
    platforms actually carrying resources count as active.  This never
    changes the cost, which is recomputed from the cost model and checked
    against the solver's objective; disagreement beyond tolerance signals
    a formulation bug and raises.
    """
    if solution.status != "optimal" or solution.x is None:
        raise ValueError(f"cannot decode a solution with status {solution.status!r}")
    x = solution.x
    res_epoch: dict[tuple[str, int], float] = {}
    flows: dict[VarKey, float] = {}
    peak: dict[str, float] = {}
    for key, j in var_index.index.items():
        val = float(x[j])
        if isinstance(key, ResEpochVar):
            if val > 1e-9:
                res_epoch[(key.p, key.e)] = val
            peak[key.p] = max(peak.get(key.p, 0.0), val)
        elif isinstance(key, (FlowFirstVar, FlowVar)):
            if val > 1e-12:
                flows[key] = min(1.0, val)
    res = {p: v for p, v in peak.items() if v > 1e-9}
    active = set(res)

    fixed = hardware = elastic = 0.0
    for p in scenario.instances:
        entry = scenario.cost_model.get(p.location, p.kind)
        if p.id in active:
            fixed += entry.fixed
        hardware += entry.var * res.get(p.id, 0.0)
        for e in range(1, scenario.epochs + 1):
            elastic += entry.elas * res_epoch.get((p.id, e), 0.0)
    total = fixed + hardware + elastic
    if abs(total - solution.objective) > COST_CHECK_REL_TOL * max(1.0, abs(solution.objective)):
        raise DecodeMismatchError(
            f"recomputed cost {total} disagrees with solver objective "
            f"{solution.objective}")

    latency = {
        (cls.id, e): _plan_latency(scenario, cls, e, flows)
        for cls in scenario.classes
        for e in range(1, scenario.epochs + 1)
    }
    return Plan(
        active=active,
        res=res,
        res_epoch=res_epoch,
        flows=flows,
        cost_total=total,
        cost_breakdown={"fixed": fixed, "hardware": hardware, "elastic": elastic},
        per_class_latency=latency,
    )


def latency_of(scenario: Scenario, plan: Plan, class_id: str, epoch: int) -> float:
    """Flow-weighted average latency of one class in one epoch."""
    cls = scenario.traffic_class(class_id)
    return _plan_latency(scenario, cls, epoch, plan.flows)


# -- plan invariants (used by tests and the analysis layer) -------------------

def check_plan_invariants(scenario: Scenario, var_index: VarIndex,
                          solution: MilpSolution, plan: Plan,
                          tol: float = 1e-6) -> None:
    """Assert the structural invariants every decoded plan must satisfy."""
    x = solution.x
    for cls in scenario.classes:
        hosts = _stage_hosts(scenario, cls)
        stages = cls.chain.stages
        for e in range(1, scenario.epochs + 1):
            for j in range(len(stages)):
                if j == 0:
                    mass = sum(
                        x[var_index[FlowFirstVar(cls.id, e, p.id, stages[0])]]
                        for p in hosts[0])
                else:
                    mass = sum(
                        x[var_index[FlowVar(cls.id, e, q.id, stages[j - 1],
                                            p.id, stages[j])]]
                        for q in hosts[j - 1] for p in hosts[j])
                if abs(mass - 1.0) > tol:
                    raise AssertionError(
                        f"stage mass {mass} != 1 for class {cls.id}, epoch {e}, "
                        f"stage {j + 1}")
    for p in scenario.instances:
        res_p = x[var_index[ResVar(p.id)]]
        for e in range(1, scenario.epochs + 1):
            load = 0.0
            for cls in scenario.classes:
                vol = cls.volumes[e - 1]
                for j, m in enumerate(cls.chain.stages):
                    if not p.ptype.supports(m):
                        continue
                    fp = scenario.footprints.get(cls.id, m, p.kind)
                    if j == 0:
                        inflow = x[var_index[FlowFirstVar(cls.id, e, p.id, m)]]
                    else:
                        inflow = sum(
                            x[var_index[FlowVar(cls.id, e, q.id,
                                                cls.chain.stages[j - 1], p.id, m)]]
                            for q in _stage_hosts(scenario, cls)[j - 1])
                    load += fp * vol * inflow
            rese = x[var_index[ResEpochVar(p.id, e)]]
            if abs(load - rese) > tol:
                raise AssertionError(
                    f"load {load} != res_epoch {rese} on {p.id}, epoch {e}")
            if load > res_p + tol:
                raise AssertionError(
                    f"load {load} exceeds res {res_p} on {p.id}, epoch {e}")
    total = sum(plan.cost_breakdown.values())
    if abs(total - plan.cost_total) > tol * max(1.0, abs(plan.cost_total)):
        raise AssertionError("cost breakdown does not sum to the total")
