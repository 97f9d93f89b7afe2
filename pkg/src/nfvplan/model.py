"""Domain model for NFV provisioning scenarios.

A :class:`Scenario` bundles everything the optimizer needs: candidate
platform instances, traffic classes with their service chains and per-epoch
volumes, processing footprints, the cost model and the latency matrix.
Scenarios are plain immutable dataclasses; :func:`validate` reports problems
instead of raising, so callers can surface every issue at once.
"""

from __future__ import annotations

import json
import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


SCENARIO_FORMAT = "nfv-scenario/1"


class PlatformKind(str, Enum):
    """How a candidate platform is realized."""

    DEDICATED = "dedicated"  # specialized appliance running a single function
    FLEXHW = "flexhw"        # commodity server, repurposable across functions
    CLOUD = "cloud"          # outsourced, elastically billed capacity


@dataclass(frozen=True)
class Location:
    id: str
    name: str = ""
    population: float = 0.0
    is_ingress: bool = False
    is_egress: bool = False


@dataclass(frozen=True)
class NetworkFunction:
    id: str
    name: str = ""


@dataclass(frozen=True)
class PlatformType:
    kind: PlatformKind
    supported_nfs: frozenset[str]
    elastic: bool

    def supports(self, nf_id: str) -> bool:
        return nf_id in self.supported_nfs


@dataclass(frozen=True)
class PlatformInstance:
    """A candidate deployment unit offered to the optimizer."""

    id: str
    location: str
    ptype: PlatformType
    capacity: float

    @property
    def kind(self) -> PlatformKind:
        return self.ptype.kind


@dataclass(frozen=True)
class ServiceChain:
    """Ordered network functions that one traffic class must traverse."""

    class_id: str
    stages: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.stages)


@dataclass(frozen=True)
class TrafficClass:
    id: str
    chain: ServiceChain
    volumes: tuple[float, ...]
    latency_threshold: float | None = None  # ms; None = unconstrained
    ingress: str | None = None
    egress: str | None = None


@dataclass(frozen=True)
class FootprintTable:
    """Resource-units consumed per traffic-unit, per (class, NF, platform kind)."""

    entries: Mapping[tuple[str, str, PlatformKind], float]

    def get(self, class_id: str, nf_id: str, kind: PlatformKind) -> float:
        return self.entries[(class_id, nf_id, kind)]

    def has(self, class_id: str, nf_id: str, kind: PlatformKind) -> bool:
        return (class_id, nf_id, kind) in self.entries


@dataclass(frozen=True)
class CostEntry:
    fixed: float = 0.0  # $ per deployment, charged once over the horizon
    var: float = 0.0    # $ per resource-unit provisioned
    elas: float = 0.0   # $ per resource-unit-epoch actually used


@dataclass(frozen=True)
class CostModel:
    entries: Mapping[tuple[str, PlatformKind], CostEntry]

    def get(self, location: str, kind: PlatformKind) -> CostEntry:
        return self.entries[(location, kind)]

    def has(self, location: str, kind: PlatformKind) -> bool:
        return (location, kind) in self.entries


@dataclass(frozen=True)
class LatencyMatrix:
    """Milliseconds between endpoints.

    Keys are (instance id, instance id) pairs, plus (ingress location,
    instance) and (instance, egress location) pairs when access legs are
    modeled.  Must be dense over the candidate set.
    """

    entries: Mapping[tuple[str, str], float]

    def get(self, src: str, dst: str) -> float:
        return self.entries[(src, dst)]

    def has(self, src: str, dst: str) -> bool:
        return (src, dst) in self.entries


@dataclass(frozen=True)
class ScenarioOptions:
    include_ingress_egress_latency: bool = False
    static_routing: bool = False


@dataclass(frozen=True)
class Scenario:
    locations: tuple[Location, ...]
    instances: tuple[PlatformInstance, ...]
    nfs: tuple[NetworkFunction, ...]
    classes: tuple[TrafficClass, ...]
    footprints: FootprintTable
    cost_model: CostModel
    latency: LatencyMatrix
    epochs: int
    options: ScenarioOptions = field(default_factory=ScenarioOptions)

    def location_ids(self) -> set[str]:
        return {l.id for l in self.locations}

    def nf_ids(self) -> set[str]:
        return {n.id for n in self.nfs}

    def instance(self, instance_id: str) -> PlatformInstance:
        for p in self.instances:
            if p.id == instance_id:
                return p
        raise KeyError(f"unknown platform instance: {instance_id!r}")

    def traffic_class(self, class_id: str) -> TrafficClass:
        for c in self.classes:
            if c.id == class_id:
                return c
        raise KeyError(f"unknown traffic class: {class_id!r}")

    def hosts(self, nf_id: str) -> list[PlatformInstance]:
        """Candidate instances able to run ``nf_id``, in scenario order."""
        return [p for p in self.instances if p.ptype.supports(nf_id)]


@dataclass(frozen=True)
class Violation:
    entity: str
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.entity}: {self.rule} ({self.detail})"


def hostable(scenario: Scenario, instance_id: str, nf_id: str) -> bool:
    """True iff the instance's platform type can run the network function.

    Raises KeyError for ids that do not resolve in the scenario.
    """
    inst = scenario.instance(instance_id)
    if nf_id not in scenario.nf_ids():
        raise KeyError(f"unknown network function: {nf_id!r}")
    return inst.ptype.supports(nf_id)


def stage_of(chain: ServiceChain, j: int) -> str:
    """The NF id at 1-based position ``j`` of the chain."""
    if not 1 <= j <= len(chain.stages):
        raise IndexError(f"stage index {j} out of range 1..{len(chain.stages)}")
    return chain.stages[j - 1]


def validate(scenario: Scenario) -> list[Violation]:
    """Check every invariant and cross-reference; return all violations.

    Never raises on malformed-but-parseable input.  An empty list means the
    scenario is safe to hand to the formulation.
    """
    out: list[Violation] = []
    v = out.append

    def dup_check(kind: str, ids: Iterable[str]) -> None:
        seen: set[str] = set()
        for i in ids:
            if i in seen:
                v(Violation(f"{kind} {i!r}", "duplicate id", f"{kind} ids must be unique"))
            seen.add(i)

    dup_check("location", (l.id for l in scenario.locations))
    dup_check("instance", (p.id for p in scenario.instances))
    dup_check("nf", (n.id for n in scenario.nfs))
    dup_check("class", (c.id for c in scenario.classes))

    loc_ids = scenario.location_ids()
    nf_ids = scenario.nf_ids()

    for l in scenario.locations:
        if l.population < 0:
            v(Violation(f"location {l.id!r}", "negative population", f"{l.population}"))

    if scenario.epochs < 1:
        v(Violation("scenario", "epochs", f"must be >= 1, got {scenario.epochs}"))

    for p in scenario.instances:
        if p.location not in loc_ids:
            v(Violation(f"instance {p.id!r}", "unknown location", p.location))
        if not p.capacity > 0:
            v(Violation(f"instance {p.id!r}", "nonpositive capacity", f"{p.capacity}"))
        if p.kind is PlatformKind.DEDICATED and len(p.ptype.supported_nfs) != 1:
            v(Violation(f"instance {p.id!r}", "dedicated hosts one nf",
                        f"supports {sorted(p.ptype.supported_nfs)}"))
        for m in sorted(p.ptype.supported_nfs):
            if m not in nf_ids:
                v(Violation(f"instance {p.id!r}", "unknown nf in supported set", m))
        if not scenario.cost_model.has(p.location, p.kind):
            v(Violation(f"instance {p.id!r}", "missing cost entry",
                        f"({p.location}, {p.kind.value})"))
        elif not p.ptype.elastic:
            entry = scenario.cost_model.get(p.location, p.kind)
            if entry.elas != 0.0:
                v(Violation(f"instance {p.id!r}", "elastic price on non-elastic type",
                            f"elas={entry.elas}"))

    for (loc, kind), entry in scenario.cost_model.entries.items():
        if entry.fixed < 0 or entry.var < 0 or entry.elas < 0:
            v(Violation(f"cost ({loc}, {kind.value})", "negative cost factor",
                        f"{entry}"))

    legs = scenario.options.include_ingress_egress_latency
    for c in scenario.classes:
        ent = f"class {c.id!r}"
        if c.chain.class_id != c.id:
            v(Violation(ent, "chain class_id mismatch", c.chain.class_id))
        if len(c.chain.stages) < 1:
            v(Violation(ent, "empty chain", "chains need at least one stage"))
        if len(set(c.chain.stages)) != len(c.chain.stages):
            v(Violation(ent, "repeated nf in chain",
                        "stage indexing would be ambiguous: " + "<".join(c.chain.stages)))
        if len(c.volumes) != scenario.epochs:
            v(Violation(ent, "epoch mismatch",
                        f"{len(c.volumes)} volumes for {scenario.epochs} epochs"))
        if any(x < 0 for x in c.volumes):
            v(Violation(ent, "negative volume", f"{c.volumes}"))
        if c.latency_threshold is not None and c.latency_threshold < 0:
            v(Violation(ent, "negative latency threshold", f"{c.latency_threshold}"))
        for m in c.chain.stages:
            if m not in nf_ids:
                v(Violation(ent, "unknown nf in chain", m))
                continue
            hosts = scenario.hosts(m)
            if not hosts:
                v(Violation(ent, "uncoverable stage", f"no candidate instance can run {m!r}"))
            for p in hosts:
                if not scenario.footprints.has(c.id, m, p.kind):
                    v(Violation(ent, "missing footprint",
                                f"({c.id}, {m}, {p.kind.value})"))
        if c.ingress is not None and c.ingress not in loc_ids:
            v(Violation(ent, "unknown ingress location", str(c.ingress)))
        if c.egress is not None and c.egress not in loc_ids:
            v(Violation(ent, "unknown egress location", str(c.egress)))
        if legs:
            if c.ingress is None or c.egress is None:
                v(Violation(ent, "missing ingress/egress",
                            "ingress/egress latency legs are enabled"))
            else:
                first, last = c.chain.stages[0], c.chain.stages[-1]
                if first in nf_ids:
                    for p in scenario.hosts(first):
                        if not scenario.latency.has(c.ingress, p.id):
                            v(Violation(ent, "missing ingress latency", f"({c.ingress}, {p.id})"))
                if last in nf_ids:
                    for p in scenario.hosts(last):
                        if not scenario.latency.has(p.id, c.egress):
                            v(Violation(ent, "missing egress latency", f"({p.id}, {c.egress})"))

    for (c_id, m, kind), fp in scenario.footprints.entries.items():
        if fp < 0:
            v(Violation(f"footprint ({c_id}, {m}, {kind.value})", "negative footprint", f"{fp}"))

    # Latency must be dense over the candidate set, with zero self-latency.
    for p in scenario.instances:
        for q in scenario.instances:
            if not scenario.latency.has(p.id, q.id):
                v(Violation("latency", "missing entry", f"({p.id}, {q.id})"))
            elif p.id == q.id and scenario.latency.get(p.id, q.id) != 0.0:
                v(Violation("latency", "nonzero self-latency",
                            f"({p.id}, {p.id}) = {scenario.latency.get(p.id, q.id)}"))
    for (src, dst), ms in scenario.latency.entries.items():
        if ms < 0:
            v(Violation("latency", "negative latency", f"({src}, {dst}) = {ms}"))

    return out


class ScenarioFormatError(ValueError):
    """Raised when a scenario document cannot be decoded at all."""


# ---------------------------------------------------------------------------
# Serialization (nfv-scenario/1)
# ---------------------------------------------------------------------------

def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "format": SCENARIO_FORMAT,
        "epochs": scenario.epochs,
        "options": {
            "include_ingress_egress_latency": scenario.options.include_ingress_egress_latency,
            "static_routing": scenario.options.static_routing,
        },
        "locations": [
            {
                "id": l.id,
                "name": l.name,
                "population": l.population,
                "is_ingress": l.is_ingress,
                "is_egress": l.is_egress,
            }
            for l in scenario.locations
        ],
        "nfs": [{"id": n.id, "name": n.name} for n in scenario.nfs],
        "instances": [
            {
                "id": p.id,
                "location": p.location,
                "kind": p.kind.value,
                "supported_nfs": sorted(p.ptype.supported_nfs),
                "elastic": p.ptype.elastic,
                "capacity": p.capacity,
            }
            for p in scenario.instances
        ],
        "classes": [
            {
                "id": c.id,
                "chain": list(c.chain.stages),
                "volumes": list(c.volumes),
                "latency_threshold": c.latency_threshold,
                "ingress": c.ingress,
                "egress": c.egress,
            }
            for c in scenario.classes
        ],
        "footprints": [
            {"class_id": k[0], "nf_id": k[1], "kind": k[2].value, "value": fp}
            for k, fp in sorted(scenario.footprints.entries.items(),
                                key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].value))
        ],
        "costs": [
            {"location": k[0], "kind": k[1].value,
             "fixed": e.fixed, "var": e.var, "elas": e.elas}
            for k, e in sorted(scenario.cost_model.entries.items(),
                               key=lambda kv: (kv[0][0], kv[0][1].value))
        ],
        "latency": [
            {"src": k[0], "dst": k[1], "ms": ms}
            for k, ms in sorted(scenario.latency.entries.items())
        ],
    }


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioFormatError("scenario document must be a JSON object")
    fmt = doc.get("format")
    if fmt != SCENARIO_FORMAT:
        raise ScenarioFormatError(
            f"unsupported scenario format {fmt!r}; expected {SCENARIO_FORMAT!r}")
    try:
        locations = tuple(
            Location(
                id=str(l["id"]),
                name=str(l.get("name", "")),
                population=float(l.get("population", 0.0)),
                is_ingress=bool(l.get("is_ingress", False)),
                is_egress=bool(l.get("is_egress", False)),
            )
            for l in doc.get("locations", [])
        )
        nfs = tuple(NetworkFunction(id=str(n["id"]), name=str(n.get("name", "")))
                    for n in doc.get("nfs", []))
        instances = tuple(
            PlatformInstance(
                id=str(p["id"]),
                location=str(p["location"]),
                ptype=PlatformType(
                    kind=PlatformKind(p["kind"]),
                    supported_nfs=frozenset(str(m) for m in p["supported_nfs"]),
                    elastic=bool(p["elastic"]),
                ),
                capacity=float(p["capacity"]),
            )
            for p in doc.get("instances", [])
        )
        classes = tuple(
            TrafficClass(
                id=str(c["id"]),
                chain=ServiceChain(class_id=str(c["id"]),
                                   stages=tuple(str(m) for m in c["chain"])),
                volumes=tuple(float(x) for x in c["volumes"]),
                latency_threshold=(None if c.get("latency_threshold") is None
                                   else float(c["latency_threshold"])),
                ingress=(None if c.get("ingress") is None else str(c["ingress"])),
                egress=(None if c.get("egress") is None else str(c["egress"])),
            )
            for c in doc.get("classes", [])
        )
        footprints = FootprintTable({
            (str(f["class_id"]), str(f["nf_id"]), PlatformKind(f["kind"])): float(f["value"])
            for f in doc.get("footprints", [])
        })
        costs = CostModel({
            (str(e["location"]), PlatformKind(e["kind"])): CostEntry(
                fixed=float(e.get("fixed", 0.0)),
                var=float(e.get("var", 0.0)),
                elas=float(e.get("elas", 0.0)),
            )
            for e in doc.get("costs", [])
        })
        latency = LatencyMatrix({
            (str(e["src"]), str(e["dst"])): float(e["ms"])
            for e in doc.get("latency", [])
        })
        options = ScenarioOptions(
            include_ingress_egress_latency=bool(
                doc.get("options", {}).get("include_ingress_egress_latency", False)),
            static_routing=bool(doc.get("options", {}).get("static_routing", False)),
        )
        epochs = int(doc["epochs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"malformed scenario document: {exc}") from exc
    return Scenario(
        locations=locations,
        instances=instances,
        nfs=nfs,
        classes=classes,
        footprints=footprints,
        cost_model=costs,
        latency=latency,
        epochs=epochs,
        options=options,
    )


def dumps_scenario(scenario: Scenario) -> str:
    """Canonical textual form; equal scenarios produce equal bytes."""
    return json.dumps(scenario_to_dict(scenario), sort_keys=True, indent=2) + "\n"


def loads_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_scenario(fh.read())


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scenario(scenario))


def scenario_hash(scenario: Scenario) -> str:
    """Content address of the canonical form, stable across re-serialization."""
    canon = json.dumps(scenario_to_dict(scenario), sort_keys=True,
                       separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()
