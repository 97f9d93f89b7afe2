"""Scenario generators: topology ingestion, gravity traffic, cost presets.

Everything here is deterministic given a seed, so generated scenario files
are byte-stable across runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import networkx as nx
import numpy as np

from .model import (
    CostEntry,
    CostModel,
    FootprintTable,
    LatencyMatrix,
    Location,
    NetworkFunction,
    PlatformInstance,
    PlatformKind,
    PlatformType,
    Scenario,
    ScenarioOptions,
    ServiceChain,
    TrafficClass,
    validate,
)

TOPOLOGY_FORMAT = "nfv-topology/1"
PRESET_FORMAT = "nfv-preset/1"

# Default per-instance capacities in resource-units (Mbps of processing
# at footprint 1.0).  The cloud cap is an effectively-unbounded ceiling for
# desk-scale demand, kept small enough not to wreck LP conditioning.
FLEX_CAPACITY = 10_000.0
DEDICATED_CAPACITY = 20_000.0
CLOUD_CAPACITY = 100_000.0

# GB transferred per sustained Mbps over a 30-day month (decimal GB).
_GB_PER_MBPS_MONTH = 125_000.0 * 30 * 86_400 / 1e9  # = 324.0


# ---------------------------------------------------------------------------
# Topology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TopologyNode:
    id: str
    name: str
    lat: float
    lon: float
    population: float
    cloud: bool = False


@dataclass(frozen=True)
class TopologyEdge:
    a: str
    b: str
    ms: float


@dataclass(frozen=True)
class TopologySpec:
    name: str
    nodes: tuple[TopologyNode, ...]
    edges: tuple[TopologyEdge, ...]

    def sites(self) -> list[TopologyNode]:
        return [n for n in self.nodes if not n.cloud]

    def cloud_sites(self) -> list[TopologyNode]:
        return [n for n in self.nodes if n.cloud]


def topology_from_dict(doc: dict) -> TopologySpec:
    if doc.get("format") != TOPOLOGY_FORMAT:
        raise ValueError(f"unsupported topology format: {doc.get('format')!r}")
    nodes = tuple(
        TopologyNode(id=n["id"], name=n.get("name", n["id"]),
                     lat=float(n.get("lat", 0.0)), lon=float(n.get("lon", 0.0)),
                     population=float(n.get("population", 0.0)),
                     cloud=bool(n.get("cloud", False)))
        for n in doc["nodes"])
    edges = tuple(TopologyEdge(a=e["a"], b=e["b"], ms=float(e["ms"]))
                  for e in doc["edges"])
    return TopologySpec(name=doc.get("name", "topology"), nodes=nodes, edges=edges)


def load_topology(path) -> TopologySpec:
    with open(path, "r", encoding="utf-8") as fh:
        return topology_from_dict(json.load(fh))


def abilene_topology() -> TopologySpec:
    """The PoP-level Internet2/Abilene topology shipped with the package."""
    text = resources.files("nfvplan").joinpath("data/abilene.json").read_text()
    return topology_from_dict(json.loads(text))


def great_circle_ms(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """One-way propagation delay over the great circle at 2/3 light speed."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = math.radians(lat2 - lat1)
    dl = math.radians(lon2 - lon1)
    h = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    km = 2 * 6371.0 * math.asin(math.sqrt(h))
    return km / 200.0


def all_pairs_latency(topology: TopologySpec) -> dict[tuple[str, str], float]:
    """Shortest-path latency between every pair of topology nodes."""
    g = nx.Graph()
    for n in topology.nodes:
        g.add_node(n.id)
    for e in topology.edges:
        # Symmetric unless a reverse edge overrides it explicitly.
        if g.has_edge(e.a, e.b):
            g[e.a][e.b]["ms"] = min(g[e.a][e.b]["ms"], e.ms)
        else:
            g.add_edge(e.a, e.b, ms=e.ms)
    dist = dict(nx.all_pairs_dijkstra_path_length(g, weight="ms"))
    out: dict[tuple[str, str], float] = {}
    for a in g.nodes:
        for b, d in dist[a].items():
            out[(a, b)] = float(d)
        out[(a, a)] = 0.0
    return out


# ---------------------------------------------------------------------------
# Gravity traffic and variability
# ---------------------------------------------------------------------------

def gravity_traffic(populations: dict[str, float],
                    total_volume: float) -> dict[tuple[str, str], float]:
    """Pairwise volumes proportional to population products.

    volume(i, j) = total * pop_i * pop_j / (sum pop)^2, so the entries sum
    to ``total_volume`` exactly (up to rounding).
    """
    if not populations:
        raise ValueError("gravity model needs at least one location")
    if total_volume < 0:
        raise ValueError("total volume must be nonnegative")
    for loc, pop in populations.items():
        if pop <= 0:
            raise ValueError(f"population of {loc!r} must be positive, got {pop}")
    s = sum(populations.values())
    out: dict[tuple[str, str], float] = {}
    for i in sorted(populations):
        for j in sorted(populations):
            out[(i, j)] = total_volume * populations[i] * populations[j] / (s * s)
    return out


@dataclass(frozen=True)
class VariabilityModel:
    """How per-epoch demand deviates from its baseline."""

    kind: str = "none"        # none | uniform_jitter | single_spike
    alpha: float = 0.0        # jitter half-width, in [0, 1)
    epoch: int = 1            # 1-based epoch hit by the spike
    factor: float = 1.0       # spike multiplier, >= 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "uniform_jitter", "single_spike"):
            raise ValueError(f"unknown variability kind {self.kind!r}")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("jitter alpha must lie in [0, 1)")
        if self.factor < 1.0:
            raise ValueError("spike factor must be >= 1")
        if self.epoch < 1:
            raise ValueError("spike epoch is 1-based")


TrafficMatrix = dict[str, tuple[float, ...]]


def apply_variability(base: TrafficMatrix, model: VariabilityModel) -> TrafficMatrix:
    """Perturb per-class, per-epoch volumes; never produces negatives."""
    if model.kind == "none":
        return {c: tuple(v) for c, v in base.items()}
    out: TrafficMatrix = {}
    if model.kind == "uniform_jitter":
        rng = np.random.default_rng(model.seed)
        for c in sorted(base):
            vols = base[c]
            scale = rng.uniform(1.0 - model.alpha, 1.0 + model.alpha, size=len(vols))
            out[c] = tuple(float(v * s) for v, s in zip(vols, scale))
        return out
    for c in sorted(base):
        vols = list(base[c])
        if model.epoch <= len(vols):
            vols[model.epoch - 1] *= model.factor
        out[c] = tuple(float(v) for v in vols)
    return out


# ---------------------------------------------------------------------------
# Cost presets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PresetCosts:
    name: str
    description: str
    per_kind: dict[PlatformKind, CostEntry]
    parameters: dict


def _load_preset_doc(name: str) -> dict:
    try:
        text = resources.files("nfvplan").joinpath(f"presets/{name}.json").read_text()
    except FileNotFoundError:
        raise ValueError(f"unknown cost preset {name!r}") from None
    doc = json.loads(text)
    if doc.get("format") != PRESET_FORMAT:
        raise ValueError(f"bad preset file format for {name!r}")
    return doc


def list_presets() -> list[str]:
    files = resources.files("nfvplan").joinpath("presets")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def preset_costs(name: str, **overrides) -> PresetCosts:
    """Per-platform-kind cost factors for a named preset.

    ``overrides`` replace entries of the preset's parameter table (for
    example ``flexhw_server_throughput_gbps=20`` or
    ``cloud_price_per_gb_usd=0.03``).
    """
    doc = _load_preset_doc(name)
    params = dict(doc["parameters"])
    unknown = set(overrides) - set(params)
    if unknown:
        raise ValueError(f"unknown preset parameters: {sorted(unknown)}")
    params.update(overrides)

    if name == "toy-sec2":
        per_kind = {
            PlatformKind.FLEXHW: CostEntry(fixed=0.0,
                                           var=params["flexhw_var_per_unit"],
                                           elas=0.0),
            PlatformKind.CLOUD: CostEntry(fixed=0.0, var=0.0,
                                          elas=params["cloud_elas_per_unit_epoch"]),
            PlatformKind.DEDICATED: CostEntry(fixed=0.0,
                                              var=params["dedicated_var_per_unit"],
                                              elas=0.0),
        }
    elif name == "paper-2014":
        opex = params["opex_factor"]
        ded_var = (params["dedicated_device_price_usd"]
                   / params["dedicated_device_capacity_mbps"])
        flex_var = (params["flexhw_server_price_usd"]
                    / (params["flexhw_server_throughput_gbps"] * 1000.0))
        cloud_elas = (params["cloud_price_per_gb_usd"] * _GB_PER_MBPS_MONTH
                      * params["epoch_length_months"])
        per_kind = {
            PlatformKind.DEDICATED: CostEntry(
                fixed=opex * params["dedicated_device_price_usd"],
                var=ded_var, elas=0.0),
            PlatformKind.FLEXHW: CostEntry(
                fixed=opex * params["flexhw_server_price_usd"],
                var=flex_var, elas=0.0),
            PlatformKind.CLOUD: CostEntry(fixed=0.0, var=0.0, elas=cloud_elas),
        }
    else:
        raise ValueError(f"unknown cost preset {name!r}")
    return PresetCosts(name=name, description=doc.get("description", ""),
                       per_kind=per_kind, parameters=params)


# ---------------------------------------------------------------------------
# Candidate placement policies
# ---------------------------------------------------------------------------

PLACEMENT_POLICIES = ("full-hybrid", "single-only", "flex-only", "cloud-only")


def make_candidates(topology: TopologySpec, policy: str,
                    nf_catalog: list[str], *,
                    flex_capacity: float = FLEX_CAPACITY,
                    dedicated_capacity: float = DEDICATED_CAPACITY,
                    cloud_capacity: float = CLOUD_CAPACITY) -> list[PlatformInstance]:
    """Candidate platform instances for one of the deployment policies.

    ``full-hybrid`` places one repurposable server plus one dedicated
    appliance per catalog NF at every site, and a cloud point at each
    designated cloud site; the *-only policies emit the matching subset.
    """
    if policy not in PLACEMENT_POLICIES:
        raise ValueError(f"unknown placement policy {policy!r}")
    all_nfs = frozenset(nf_catalog)
    flex_type = PlatformType(kind=PlatformKind.FLEXHW, supported_nfs=all_nfs,
                             elastic=False)
    cloud_type = PlatformType(kind=PlatformKind.CLOUD, supported_nfs=all_nfs,
                              elastic=True)
    out: list[PlatformInstance] = []
    if policy in ("full-hybrid", "flex-only"):
        for node in topology.sites():
            out.append(PlatformInstance(id=f"flex-{node.id}", location=node.id,
                                        ptype=flex_type, capacity=flex_capacity))
    if policy in ("full-hybrid", "single-only"):
        for node in topology.sites():
            for nf in nf_catalog:
                ded = PlatformType(kind=PlatformKind.DEDICATED,
                                   supported_nfs=frozenset({nf}), elastic=False)
                out.append(PlatformInstance(id=f"ded-{nf}-{node.id}",
                                            location=node.id, ptype=ded,
                                            capacity=dedicated_capacity))
    if policy in ("full-hybrid", "cloud-only"):
        clouds = topology.cloud_sites()
        if policy == "cloud-only" and not clouds:
            raise ValueError("cloud-only policy needs at least one designated "
                             "cloud location")
        for node in clouds:
            out.append(PlatformInstance(id=f"cloud-{node.id}", location=node.id,
                                        ptype=cloud_type, capacity=cloud_capacity))
    return out


# ---------------------------------------------------------------------------
# The evaluation workload
# ---------------------------------------------------------------------------

NF_CATALOG = ["sgw", "pgw", "fw", "nat", "ims", "dpi", "lb", "proxy"]

# Synthetic chain assignment: four classes of three NFs each, jointly using
# all eight catalog functions.  The mapping is ours, not measured.
WORKLOAD_CHAINS = {
    "regular": ("sgw", "pgw", "fw"),
    "video": ("sgw", "lb", "proxy"),
    "voice": ("sgw", "pgw", "ims"),
    "m2m": ("nat", "dpi", "fw"),
}


def paper_workload(seed: int = 0, total_volume: float = 2600.0, epochs: int = 4,
                   variability: VariabilityModel | None = None,
                   preset: str = "paper-2014") -> Scenario:
    """The Abilene-based evaluation scenario: 4 classes x 3-NF chains, 8 NFs.

    Traffic is a gravity baseline over metro populations with a seeded
    variability model on top (default: 25% uniform jitter).  Dedicated
    appliances are offered at the largest site, repurposable servers at
    every site, and one cloud point at the designated cloud region.  No
    latency SLAs are attached by default.
    """
    if variability is None:
        variability = VariabilityModel(kind="uniform_jitter", alpha=0.25, seed=seed)
    topo = abilene_topology()
    sites = topo.sites()
    pops = {n.id: n.population for n in sites}
    pair_volume = gravity_traffic(pops, total_volume)

    rng = np.random.default_rng(seed)
    pairs = sorted(pair_volume)
    weights = np.array([pair_volume[p] for p in pairs])
    chosen = rng.choice(len(pairs), size=len(WORKLOAD_CHAINS), replace=False,
                        p=weights / weights.sum())
    class_ids = sorted(WORKLOAD_CHAINS)
    share = np.array([pair_volume[pairs[k]] for k in chosen])
    share = share / share.sum() * total_volume

    base: TrafficMatrix = {
        cid: tuple([float(share[i])] * epochs) for i, cid in enumerate(class_ids)
    }
    volumes = apply_variability(base, variability)

    primary = max(sites, key=lambda n: (n.population, n.id)).id
    flex = make_candidates(topo, "flex-only", NF_CATALOG)
    dedicated = [p for p in make_candidates(topo, "single-only", NF_CATALOG)
                 if p.location == primary]
    cloud = make_candidates(topo, "cloud-only", NF_CATALOG)
    instances = flex + dedicated + cloud

    costs = preset_costs(preset)
    # Site-dependent deployment cost: power/cooling/labor differ by site,
    # spanning roughly a 2x range across the eleven PoPs.
    site_factor = {n.id: 1.0 + 0.12 * i for i, n in enumerate(sorted(sites, key=lambda s: s.id))}
    entries: dict[tuple[str, PlatformKind], CostEntry] = {}
    for p in instances:
        kind_entry = costs.per_kind[p.kind]
        factor = site_factor.get(p.location, 1.0)
        entries[(p.location, p.kind)] = CostEntry(
            fixed=kind_entry.fixed * factor,
            var=kind_entry.var,
            elas=kind_entry.elas,
        )

    footprints = {}
    for cid, chain in WORKLOAD_CHAINS.items():
        for m in chain:
            for kind in PlatformKind:
                footprints[(cid, m, kind)] = 1.0

    loc_lat = all_pairs_latency(topo)
    latency = {
        (p.id, q.id): loc_lat[(p.location, q.location)]
        for p in instances for q in instances
    }

    classes = []
    for i, cid in enumerate(class_ids):
        src, dst = pairs[chosen[i]]
        classes.append(TrafficClass(
            id=cid,
            chain=ServiceChain(class_id=cid, stages=WORKLOAD_CHAINS[cid]),
            volumes=volumes[cid],
            latency_threshold=None,
            ingress=src,
            egress=dst,
        ))

    scenario = Scenario(
        locations=tuple(Location(id=n.id, name=n.name, population=n.population)
                        for n in topo.nodes),
        instances=tuple(instances),
        nfs=tuple(NetworkFunction(id=m, name=m.upper()) for m in NF_CATALOG),
        classes=tuple(classes),
        footprints=FootprintTable(footprints),
        cost_model=CostModel(entries),
        latency=LatencyMatrix(latency),
        epochs=epochs,
        options=ScenarioOptions(),
    )
    problems = validate(scenario)
    assert not problems, f"generated workload failed validation: {problems}"
    return scenario


# ---------------------------------------------------------------------------
# Golden two-platform teaching fixtures
# ---------------------------------------------------------------------------

def _toy_platforms(nf_ids: frozenset[str], include_flex: bool = True,
                   include_cloud: bool = True) -> list[PlatformInstance]:
    out = []
    if include_flex:
        out.append(PlatformInstance(
            id="flex1", location="site1",
            ptype=PlatformType(kind=PlatformKind.FLEXHW, supported_nfs=nf_ids,
                               elastic=False),
            capacity=100.0))
    if include_cloud:
        out.append(PlatformInstance(
            id="cloud1", location="cloud",
            ptype=PlatformType(kind=PlatformKind.CLOUD, supported_nfs=nf_ids,
                               elastic=True),
            capacity=1000.0))
    return out


def _toy_costs(flex_var: float = 20.0, cloud_elas: float = 10.0) -> CostModel:
    return CostModel({
        ("site1", PlatformKind.FLEXHW): CostEntry(fixed=0.0, var=flex_var, elas=0.0),
        ("cloud", PlatformKind.CLOUD): CostEntry(fixed=0.0, var=0.0, elas=cloud_elas),
    })


def _dense_instance_latency(instances, cross_ms: float = 150.0):
    lat = {}
    for p in instances:
        for q in instances:
            lat[(p.id, q.id)] = 0.0 if p.id == q.id else cross_ms
    return lat


def sec2_video(include_flex: bool = True, include_cloud: bool = True,
               cloud_elas: float = 10.0) -> Scenario:
    """Single Video class, volumes {1,1,10,1}, flexible hardware vs cloud.

    Routing is pinned per class (static across epochs), matching the
    all-or-nothing provisioning comparison this scenario illustrates.
    """
    nfs = frozenset({"video-svc"})
    instances = _toy_platforms(nfs, include_flex, include_cloud)
    video = TrafficClass(
        id="video",
        chain=ServiceChain(class_id="video", stages=("video-svc",)),
        volumes=(1.0, 1.0, 10.0, 1.0),
        latency_threshold=None,
    )
    footprints = {("video", "video-svc", k): 1.0 for k in PlatformKind}
    scenario = Scenario(
        locations=(Location(id="site1", name="Location 1"),
                   Location(id="cloud", name="Cloud region")),
        instances=tuple(instances),
        nfs=(NetworkFunction(id="video-svc", name="Video service chain"),),
        classes=(video,),
        footprints=FootprintTable(footprints),
        cost_model=_toy_costs(cloud_elas=cloud_elas),
        latency=LatencyMatrix(_dense_instance_latency(instances)),
        epochs=4,
        options=ScenarioOptions(static_routing=True),
    )
    assert not validate(scenario)
    return scenario


def sec2_combined(voice_sla: bool = True, include_flex: bool = True,
                  include_cloud: bool = True) -> Scenario:
    """Video plus latency-bound Voice: the hybrid-provisioning scenario.

    Access legs are modeled: the in-network path meets the 100 ms Voice
    budget exactly, while any cloud leg exceeds it, so Voice cannot be
    served from the cloud.  Video is unconstrained and may burst to the
    cloud in the peak epoch.
    """
    nfs = frozenset({"video-svc", "voice-svc"})
    instances = _toy_platforms(nfs, include_flex, include_cloud)
    video = TrafficClass(
        id="video",
        chain=ServiceChain(class_id="video", stages=("video-svc",)),
        volumes=(1.0, 1.0, 10.0, 1.0),
        latency_threshold=None,
        ingress="ue", egress="pdn",
    )
    voice = TrafficClass(
        id="voice",
        chain=ServiceChain(class_id="voice", stages=("voice-svc",)),
        volumes=(5.0, 5.0, 10.0, 5.0),
        latency_threshold=100.0 if voice_sla else None,
        ingress="ue", egress="pdn",
    )
    footprints = {(c, m, k): 1.0
                  for c in ("video", "voice")
                  for m in ("video-svc", "voice-svc")
                  for k in PlatformKind}
    latency = _dense_instance_latency(instances)
    for p in instances:
        if p.kind is PlatformKind.CLOUD:
            latency[("ue", p.id)] = 150.0
            latency[(p.id, "pdn")] = 150.0
        else:
            latency[("ue", p.id)] = 50.0
            latency[(p.id, "pdn")] = 50.0
    scenario = Scenario(
        locations=(Location(id="site1", name="Location 1"),
                   Location(id="cloud", name="Cloud region"),
                   Location(id="ue", name="Subscriber edge", is_ingress=True),
                   Location(id="pdn", name="Packet data network", is_egress=True)),
        instances=tuple(instances),
        nfs=(NetworkFunction(id="video-svc", name="Video service chain"),
             NetworkFunction(id="voice-svc", name="Voice service chain")),
        classes=(video, voice),
        footprints=FootprintTable(footprints),
        cost_model=_toy_costs(),
        latency=LatencyMatrix(latency),
        epochs=4,
        options=ScenarioOptions(include_ingress_egress_latency=True),
    )
    assert not validate(scenario)
    return scenario


# ---------------------------------------------------------------------------
# Random scenarios for solver verification
# ---------------------------------------------------------------------------

def random_scenario(seed: int, max_platforms: int = 8, max_classes: int = 3,
                    max_epochs: int = 4) -> Scenario:
    """Small seeded random scenario; valid by construction.

    Exercises mixed platform kinds, tight and loose capacities, optional
    latency thresholds (feasible and not), access legs and static routing.
    """
    rng = np.random.default_rng(seed)
    n_loc = int(rng.integers(1, 4))
    loc_ids = [f"L{i}" for i in range(n_loc)]
    n_nf = int(rng.integers(1, 5))
    nf_ids = [f"nf{i}" for i in range(n_nf)]
    epochs = int(rng.integers(1, max_epochs + 1))
    n_classes = int(rng.integers(1, max_classes + 1))

    classes = []
    used_nfs: set[str] = set()
    for k in range(n_classes):
        length = int(rng.integers(1, min(3, n_nf) + 1))
        stages = tuple(rng.choice(nf_ids, size=length, replace=False))
        used_nfs.update(stages)
        vols = tuple(float(x) for x in np.round(rng.uniform(0.0, 10.0, size=epochs), 3))
        thr = None
        if rng.random() < 0.4:
            thr = float(np.round(rng.uniform(20.0, 200.0), 1))
        classes.append(TrafficClass(
            id=f"c{k}",
            chain=ServiceChain(class_id=f"c{k}", stages=stages),
            volumes=vols,
            latency_threshold=thr,
            ingress=loc_ids[0],
            egress=loc_ids[-1],
        ))

    all_nfs = frozenset(nf_ids)
    instances: list[PlatformInstance] = []
    for loc in loc_ids:
        if rng.random() < 0.85 and len(instances) < max_platforms:
            cap = float(np.round(rng.uniform(15.0, 80.0), 1))
            instances.append(PlatformInstance(
                id=f"flex-{loc}", location=loc,
                ptype=PlatformType(PlatformKind.FLEXHW, all_nfs, elastic=False),
                capacity=cap))
        for m in nf_ids:
            if rng.random() < 0.25 and len(instances) < max_platforms:
                instances.append(PlatformInstance(
                    id=f"ded-{m}-{loc}", location=loc,
                    ptype=PlatformType(PlatformKind.DEDICATED, frozenset({m}),
                                       elastic=False),
                    capacity=float(np.round(rng.uniform(20.0, 60.0), 1))))
    has_cloud = rng.random() < 0.6 and len(instances) < max_platforms
    if has_cloud:
        instances.append(PlatformInstance(
            id="cloud-0", location="Lcloud",
            ptype=PlatformType(PlatformKind.CLOUD, all_nfs, elastic=True),
            capacity=1000.0))
    # Guarantee coverage of every chained NF.
    covered = {m for m in used_nfs if any(p.ptype.supports(m) for p in instances)}
    if covered != used_nfs:
        instances.append(PlatformInstance(
            id="flex-backstop", location=loc_ids[0],
            ptype=PlatformType(PlatformKind.FLEXHW, all_nfs, elastic=False),
            capacity=200.0))
    locations = [Location(id=l, name=l, population=1.0,
                          is_ingress=(l == loc_ids[0]), is_egress=(l == loc_ids[-1]))
                 for l in loc_ids]
    if any(p.location == "Lcloud" for p in instances):
        locations.append(Location(id="Lcloud", name="cloud region"))

    cost_entries: dict[tuple[str, PlatformKind], CostEntry] = {}
    for p in instances:
        key = (p.location, p.kind)
        if key in cost_entries:
            continue
        if p.kind is PlatformKind.CLOUD:
            cost_entries[key] = CostEntry(fixed=0.0, var=0.0,
                                          elas=float(np.round(rng.uniform(1.0, 20.0), 2)))
        else:
            fixed = float(np.round(rng.uniform(0.0, 60.0), 1)) if rng.random() < 0.6 else 0.0
            cost_entries[key] = CostEntry(
                fixed=fixed,
                var=float(np.round(rng.uniform(0.5, 30.0), 2)),
                elas=0.0)

    loc_pairs = [l.id for l in locations]
    base_lat = {}
    for i, a in enumerate(loc_pairs):
        for b in loc_pairs[i:]:
            ms = 0.0 if a == b else float(np.round(rng.uniform(1.0, 150.0), 1))
            base_lat[(a, b)] = ms
            base_lat[(b, a)] = ms
    latency = {}
    for p in instances:
        for q in instances:
            latency[(p.id, q.id)] = 0.0 if p.id == q.id else base_lat[(p.location, q.location)]
    legs = bool(rng.random() < 0.3)
    if legs:
        for cls in classes:
            for p in instances:
                latency[(cls.ingress, p.id)] = base_lat[(cls.ingress, p.location)]
                latency[(p.id, cls.egress)] = base_lat[(p.location, cls.egress)]

    footprints = {}
    for cls in classes:
        for m in cls.chain.stages:
            for kind in PlatformKind:
                footprints[(cls.id, m, kind)] = float(np.round(rng.uniform(0.5, 2.0), 2))

    scenario = Scenario(
        locations=tuple(locations),
        instances=tuple(instances),
        nfs=tuple(NetworkFunction(id=m, name=m) for m in nf_ids),
        classes=tuple(classes),
        footprints=FootprintTable(footprints),
        cost_model=CostModel(cost_entries),
        latency=LatencyMatrix(latency),
        epochs=epochs,
        options=ScenarioOptions(include_ingress_egress_latency=legs,
                                static_routing=bool(rng.random() < 0.25)),
    )
    problems = validate(scenario)
    assert not problems, f"random scenario {seed} invalid: {problems}"
    return scenario
