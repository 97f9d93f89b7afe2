"""Generators: gravity traffic, variability, presets, candidates, workload."""

import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from nfvplan.generate import (
    DEDICATED_CAPACITY,
    FLEX_CAPACITY,
    NF_CATALOG,
    TopologySpec,
    VariabilityModel,
    WORKLOAD_CHAINS,
    abilene_topology,
    all_pairs_latency,
    apply_variability,
    gravity_traffic,
    great_circle_ms,
    list_presets,
    make_candidates,
    paper_workload,
    preset_costs,
)
from nfvplan.model import PlatformKind, dumps_scenario, validate


class TestGravity:
    def test_two_city_example(self):
        vols = gravity_traffic({"A": 2.0, "B": 1.0}, 9.0)
        assert vols == pytest.approx({
            ("A", "A"): 4.0, ("A", "B"): 2.0, ("B", "A"): 2.0, ("B", "B"): 1.0,
        })

    def test_single_location(self):
        assert gravity_traffic({"A": 3.0}, 7.0) == pytest.approx({("A", "A"): 7.0})

    def test_uniform_four_cities(self):
        vols = gravity_traffic({c: 5.0 for c in "ABCD"}, 16.0)
        assert all(v == pytest.approx(1.0) for v in vols.values())

    def test_empty_map_rejected(self):
        with pytest.raises(ValueError):
            gravity_traffic({}, 1.0)

    def test_nonpositive_population_rejected(self):
        with pytest.raises(ValueError):
            gravity_traffic({"A": 0.0}, 1.0)

    @settings(max_examples=40, deadline=None)
    @given(
        pops=st.dictionaries(st.sampled_from("ABCDEFG"),
                             st.floats(0.1, 50.0), min_size=1, max_size=7),
        total=st.floats(0.0, 1e6),
    )
    def test_output_sums_to_total(self, pops, total):
        vols = gravity_traffic(pops, total)
        assert sum(vols.values()) == pytest.approx(total, abs=1e-9 * max(1.0, total))


class TestVariability:
    def test_none_is_identity(self):
        base = {"a": (1.0, 2.0), "b": (3.0, 4.0)}
        assert apply_variability(base, VariabilityModel(kind="none")) == base

    def test_single_spike_matches_motivating_volumes(self):
        base = {"video": (1.0, 1.0, 1.0, 1.0)}
        out = apply_variability(
            base, VariabilityModel(kind="single_spike", epoch=3, factor=10.0))
        assert out["video"] == (1.0, 1.0, 10.0, 1.0)

    def test_zero_jitter_is_identity(self):
        base = {"a": (1.0, 2.0, 3.0)}
        out = apply_variability(
            base, VariabilityModel(kind="uniform_jitter", alpha=0.0, seed=5))
        assert out["a"] == pytest.approx(base["a"])

    def test_jitter_stays_in_band_and_is_seeded(self):
        base = {"a": tuple([10.0] * 8), "b": tuple([4.0] * 8)}
        m = VariabilityModel(kind="uniform_jitter", alpha=0.3, seed=11)
        out1 = apply_variability(base, m)
        out2 = apply_variability(base, m)
        assert out1 == out2
        for cid, vols in out1.items():
            for v, b in zip(vols, base[cid]):
                assert b * 0.7 - 1e-12 <= v <= b * 1.3 + 1e-12

    def test_nonnegativity_preserved(self):
        base = {"a": (0.0, 5.0)}
        out = apply_variability(
            base, VariabilityModel(kind="uniform_jitter", alpha=0.99, seed=3))
        assert all(v >= 0.0 for v in out["a"])

    def test_invalid_models_rejected(self):
        with pytest.raises(ValueError):
            VariabilityModel(kind="weird")
        with pytest.raises(ValueError):
            VariabilityModel(kind="uniform_jitter", alpha=1.0)
        with pytest.raises(ValueError):
            VariabilityModel(kind="single_spike", factor=0.5)
        with pytest.raises(ValueError):
            VariabilityModel(kind="single_spike", epoch=0)


class TestPresets:
    def test_listing(self):
        assert set(list_presets()) >= {"paper-2014", "toy-sec2"}

    def test_toy_numbers(self):
        costs = preset_costs("toy-sec2")
        assert costs.per_kind[PlatformKind.FLEXHW].var == 20.0
        assert costs.per_kind[PlatformKind.FLEXHW].fixed == 0.0
        assert costs.per_kind[PlatformKind.CLOUD].elas == 10.0

    def test_paper_2014_derivations(self):
        costs = preset_costs("paper-2014")
        ded = costs.per_kind[PlatformKind.DEDICATED]
        # $80,000 device at 20 Gbps -> 4 $/Mbps; setup+OPEX is twice that.
        assert ded.var == pytest.approx(4.0)
        assert ded.fixed == pytest.approx(2 * 80_000.0)
        flex = costs.per_kind[PlatformKind.FLEXHW]
        assert flex.var == pytest.approx(2500.0 / 10_000.0)
        assert flex.fixed == pytest.approx(2 * 2500.0)
        cloud = costs.per_kind[PlatformKind.CLOUD]
        assert cloud.fixed == 0.0 and cloud.var == 0.0
        # $/GB x GB per sustained Mbps-month (324 decimal GB).
        assert cloud.elas == pytest.approx(0.05 * 324.0)

    def test_parameter_override(self):
        costs = preset_costs("paper-2014", flexhw_server_throughput_gbps=20.0)
        assert costs.per_kind[PlatformKind.FLEXHW].var == pytest.approx(0.125)

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            preset_costs("no-such-preset")

    def test_unknown_override(self):
        with pytest.raises(ValueError):
            preset_costs("toy-sec2", bogus_knob=1.0)

    def test_all_presets_nonnegative_and_elas_only_on_elastic(self):
        for name in list_presets():
            costs = preset_costs(name)
            for kind, entry in costs.per_kind.items():
                assert entry.fixed >= 0 and entry.var >= 0 and entry.elas >= 0
                if kind is not PlatformKind.CLOUD:
                    assert entry.elas == 0.0


class TestTopology:
    def test_abilene_shape(self):
        topo = abilene_topology()
        assert len(topo.sites()) == 11
        assert len(topo.cloud_sites()) == 1
        ids = {n.id for n in topo.nodes}
        assert {"NYCM", "LOSA", "STTL", "ATLA"} <= ids

    def test_link_latencies_match_great_circle(self):
        topo = abilene_topology()
        coords = {n.id: (n.lat, n.lon) for n in topo.nodes}
        for e in topo.edges:
            (la1, lo1), (la2, lo2) = coords[e.a], coords[e.b]
            expect = great_circle_ms(la1, lo1, la2, lo2)
            assert e.ms == pytest.approx(expect, abs=5e-4)

    def test_all_pairs_symmetric_zero_diagonal(self):
        topo = abilene_topology()
        lat = all_pairs_latency(topo)
        for n in topo.nodes:
            assert lat[(n.id, n.id)] == 0.0
        for m in topo.nodes:
            for n in topo.nodes:
                assert lat[(m.id, n.id)] == pytest.approx(lat[(n.id, m.id)])

    def test_triangle_paths(self):
        # Shortest path never exceeds any one-stop relay.
        topo = abilene_topology()
        lat = all_pairs_latency(topo)
        ids = [n.id for n in topo.nodes]
        for a in ids:
            for b in ids:
                for c in ids:
                    assert lat[(a, b)] <= lat[(a, c)] + lat[(c, b)] + 1e-9


class TestCandidates:
    def _topo(self, n_sites=2, n_cloud=1):
        from nfvplan.generate import TopologyEdge, TopologyNode

        nodes = [TopologyNode(id=f"N{i}", name=f"N{i}", lat=0.0, lon=float(i),
                              population=1.0) for i in range(n_sites)]
        nodes += [TopologyNode(id=f"C{i}", name=f"C{i}", lat=1.0, lon=float(i),
                               population=0.0, cloud=True) for i in range(n_cloud)]
        edges = [TopologyEdge(a=nodes[i].id, b=nodes[i + 1].id, ms=1.0)
                 for i in range(len(nodes) - 1)]
        return TopologySpec(name="t", nodes=tuple(nodes), edges=tuple(edges))

    def test_full_hybrid_count(self):
        cands = make_candidates(self._topo(2, 1), "full-hybrid", list("ABCDEFGH"))
        assert len(cands) == 2 * (1 + 8) + 1

    def test_flex_only_count(self):
        topo = self._topo(11, 0)
        cands = make_candidates(topo, "flex-only", ["a"])
        assert len(cands) == 11
        assert all(p.kind is PlatformKind.FLEXHW for p in cands)
        assert all(p.capacity == FLEX_CAPACITY for p in cands)

    def test_single_only(self):
        cands = make_candidates(self._topo(3, 0), "single-only", ["a", "b"])
        assert len(cands) == 6
        assert all(p.kind is PlatformKind.DEDICATED for p in cands)
        assert all(len(p.ptype.supported_nfs) == 1 for p in cands)
        assert all(p.capacity == DEDICATED_CAPACITY for p in cands)

    def test_cloud_only_requires_cloud_site(self):
        with pytest.raises(ValueError):
            make_candidates(self._topo(2, 0), "cloud-only", ["a"])

    def test_empty_catalog_single_only(self):
        assert make_candidates(self._topo(2, 1), "single-only", []) == []

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            make_candidates(self._topo(), "everything", ["a"])


class TestPaperWorkload:
    def test_structure(self):
        sc = paper_workload(seed=0)
        assert validate(sc) == []
        assert len(sc.classes) == 4
        assert all(len(c.chain.stages) == 3 for c in sc.classes)
        assert len(sc.nfs) == 8
        used = set().union(*(c.chain.stages for c in sc.classes))
        assert used == set(NF_CATALOG)

    def test_deterministic_bytes(self):
        a = dumps_scenario(paper_workload(seed=7))
        b = dumps_scenario(paper_workload(seed=7))
        assert a == b

    def test_seed_changes_traffic(self):
        a = paper_workload(seed=1)
        b = paper_workload(seed=2)
        assert dumps_scenario(a) != dumps_scenario(b)

    def test_chain_catalog_is_fixed(self):
        assert set(WORKLOAD_CHAINS) == {"regular", "video", "voice", "m2m"}

    def test_candidate_mix(self):
        sc = paper_workload(seed=0)
        kinds = [p.kind for p in sc.instances]
        assert kinds.count(PlatformKind.FLEXHW) == 11
        assert kinds.count(PlatformKind.DEDICATED) == 8
        assert kinds.count(PlatformKind.CLOUD) == 1

    def test_volume_conservation_before_variability(self):
        sc = paper_workload(seed=0, variability=VariabilityModel(kind="none"),
                            total_volume=1234.5)
        per_epoch = [sum(c.volumes[e] for c in sc.classes)
                     for e in range(sc.epochs)]
        for tot in per_epoch:
            assert tot == pytest.approx(1234.5, rel=1e-9)
