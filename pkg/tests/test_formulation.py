"""Formulation: variable construction, decode, latency, and invariants."""

import dataclasses

import numpy as np
import pytest

from nfvplan.analysis import scale_costs
from nfvplan.formulation import (
    DecodeMismatchError,
    FlowFirstVar,
    FlowVar,
    FormulationError,
    build_milp,
    check_plan_invariants,
    count_variables,
    decode,
    latency_of,
    var_name,
)
from nfvplan.generate import random_scenario, sec2_combined, sec2_video
from nfvplan.model import (
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
)
from nfvplan.solver import brute_force, solve_milp, write_lp


def two_stage_scenario(latency_threshold=None, epochs=3):
    """One class with a 2-NF chain, one hostable instance per stage."""
    nf_a = PlatformType(PlatformKind.DEDICATED, frozenset({"a"}), elastic=False)
    nf_b = PlatformType(PlatformKind.DEDICATED, frozenset({"b"}), elastic=False)
    pa = PlatformInstance(id="pa", location="L0", ptype=nf_a, capacity=100.0)
    pb = PlatformInstance(id="pb", location="L0", ptype=nf_b, capacity=100.0)
    cls = TrafficClass(
        id="c0", chain=ServiceChain(class_id="c0", stages=("a", "b")),
        volumes=tuple(float(i + 1) for i in range(epochs)),
        latency_threshold=latency_threshold)
    return Scenario(
        locations=(Location(id="L0"),),
        instances=(pa, pb),
        nfs=(NetworkFunction(id="a"), NetworkFunction(id="b")),
        classes=(cls,),
        footprints=FootprintTable({
            ("c0", "a", PlatformKind.DEDICATED): 1.0,
            ("c0", "b", PlatformKind.DEDICATED): 1.0,
        }),
        cost_model=CostModel({("L0", PlatformKind.DEDICATED): CostEntry(var=2.0)}),
        latency=LatencyMatrix({
            ("pa", "pa"): 0.0, ("pb", "pb"): 0.0,
            ("pa", "pb"): 10.0, ("pb", "pa"): 10.0,
        }),
        epochs=epochs,
    )


class TestBuild:
    def test_video_scenario_variable_count(self):
        # Hand count from the construction rules: 2 Active + 2 Res +
        # 2x4 ResEpoch + 1 class x 4 epochs x 2 first-stage hosts = 20.
        sc = sec2_video()
        problem, vi = build_milp(sc)
        assert problem.n_vars == 20
        assert count_variables(sc) == 20
        kinds = [type(k).__name__ for k in vi.keys]
        assert kinds.count("ActiveVar") == 2
        assert kinds.count("ResVar") == 2
        assert kinds.count("ResEpochVar") == 8
        assert kinds.count("FlowFirstVar") == 8
        assert kinds.count("FlowVar") == 0

    def test_two_stage_chain_flow_count(self):
        # One hostable instance per stage: exactly E flow variables.
        sc = two_stage_scenario(epochs=3)
        problem, vi = build_milp(sc)
        flows = [k for k in vi.keys if isinstance(k, FlowVar)]
        assert len(flows) == 3

    def test_zero_traffic_costs_nothing(self):
        sc = sec2_video()
        cls = dataclasses.replace(sc.classes[0], volumes=(0.0, 0.0, 0.0, 0.0))
        sc = dataclasses.replace(sc, classes=(cls,))
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(0.0, abs=1e-9)
        plan = decode(sc, vi, sol)
        assert plan.active == set()

    def test_invalid_scenario_refused(self):
        sc = sec2_video()
        sc = dataclasses.replace(sc, epochs=3)  # now volumes mismatch
        with pytest.raises(FormulationError):
            build_milp(sc)

    def test_variable_budget_guard(self):
        sc = sec2_video()
        with pytest.raises(FormulationError, match="too large"):
            build_milp(sc, var_budget=10)

    def test_latency_rows_only_for_thresholded_classes(self):
        unbounded, _ = build_milp(two_stage_scenario(latency_threshold=None))
        bounded, _ = build_milp(two_stage_scenario(latency_threshold=50.0))
        lat_rows = lambda p: [r for r in p.rows if r.name.startswith("lat_")]
        assert lat_rows(unbounded) == []
        assert len(lat_rows(bounded)) == 3  # one per epoch

    def test_lp_export_names(self):
        problem, vi = build_milp(sec2_video())
        text = write_lp(problem)
        assert "act_flex1" in text
        assert "res_cloud1" in text
        assert "rese_cloud1_3" in text
        assert "f_video_1_flex1_video_svc" in text


class TestDecode:
    def test_video_cloud_only_optimum(self):
        sc = sec2_video()
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        plan = decode(sc, vi, sol)
        assert plan.cost_total == pytest.approx(130.0, abs=1e-6)
        assert plan.cost_breakdown == pytest.approx(
            {"fixed": 0.0, "hardware": 0.0, "elastic": 130.0}, abs=1e-6)
        assert plan.active == {"cloud1"}

    def test_video_forced_flex(self):
        sc = sec2_video(include_cloud=False)
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        plan = decode(sc, vi, sol)
        assert plan.cost_total == pytest.approx(200.0, abs=1e-6)
        assert plan.res["flex1"] == pytest.approx(10.0, abs=1e-6)

    def test_combined_hybrid_breakdown(self):
        sc = sec2_combined()
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        plan = decode(sc, vi, sol)
        assert plan.cost_total == pytest.approx(300.0, abs=1e-6)
        assert plan.cost_breakdown == pytest.approx(
            {"fixed": 0.0, "hardware": 200.0, "elastic": 100.0}, abs=1e-6)
        # Cloud bursts only in the peak epoch.
        assert plan.res_epoch.get(("cloud1", 3), 0.0) == pytest.approx(10.0, abs=1e-6)
        assert ("cloud1", 1) not in plan.res_epoch

    def test_infeasible_latency_not_decoded(self):
        sc = sec2_combined(include_flex=False)
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        assert sol.status == "infeasible"
        with pytest.raises(ValueError):
            decode(sc, vi, sol)

    def test_cost_mismatch_detected(self):
        sc = sec2_video()
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        broken = dataclasses.replace(sol, objective=sol.objective + 1.0)
        with pytest.raises(DecodeMismatchError):
            decode(sc, vi, broken)


class TestLatency:
    def test_single_path_sums_stage_latencies(self):
        sc = two_stage_scenario()
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        plan = decode(sc, vi, sol)
        # All traffic must take pa -> pb, 10 ms apart.
        assert latency_of(sc, plan, "c0", 1) == pytest.approx(10.0, abs=1e-9)
        assert plan.per_class_latency[("c0", 1)] == pytest.approx(10.0, abs=1e-9)

    def test_split_paths_average(self):
        # Two first-stage hosts at different distances from the second stage;
        # a 50/50 split averages their latencies.
        from nfvplan.formulation import Plan

        sc = two_stage_scenario()
        pa2 = PlatformInstance(id="pa2", location="L0",
                               ptype=sc.instances[0].ptype, capacity=100.0)
        lat = dict(sc.latency.entries)
        lat.update({("pa2", "pa2"): 0.0, ("pa2", "pb"): 30.0, ("pb", "pa2"): 30.0,
                    ("pa", "pa2"): 0.0, ("pa2", "pa"): 0.0})
        sc = dataclasses.replace(sc, instances=sc.instances + (pa2,),
                                 latency=LatencyMatrix(lat))
        flows = {
            FlowFirstVar("c0", 1, "pa", "a"): 0.5,
            FlowFirstVar("c0", 1, "pa2", "a"): 0.5,
            FlowVar("c0", 1, "pa", "a", "pb", "b"): 0.5,
            FlowVar("c0", 1, "pa2", "a", "pb", "b"): 0.5,
        }
        plan = Plan(active=set(), res={}, res_epoch={}, flows=flows,
                    cost_total=0.0,
                    cost_breakdown={"fixed": 0.0, "hardware": 0.0, "elastic": 0.0},
                    per_class_latency={})
        assert latency_of(sc, plan, "c0", 1) == pytest.approx(20.0, abs=1e-12)

    def test_voice_on_flex_meets_threshold(self):
        # Intra-site chain stages co-located on one box: zero chain latency,
        # well under the 100 ms budget.
        sc = sec2_combined()
        sc_no_legs = dataclasses.replace(
            sc, options=ScenarioOptions(include_ingress_egress_latency=False))
        problem, vi = build_milp(sc_no_legs)
        sol = solve_milp(problem)
        plan = decode(sc_no_legs, vi, sol)
        # Without access legs the one-stage chain has no latency terms at all.
        for e in range(1, 5):
            assert plan.per_class_latency[("voice", e)] == 0.0 <= 100.0

    def test_combined_voice_latency_pinned_to_budget(self):
        sc = sec2_combined()
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        plan = decode(sc, vi, sol)
        for e in range(1, 5):
            assert plan.per_class_latency[("voice", e)] == pytest.approx(100.0, abs=1e-6)
            assert latency_of(sc, plan, "voice", e) == pytest.approx(100.0, abs=1e-6)


class TestInvariants:
    @pytest.mark.parametrize("factory", [
        sec2_video, sec2_combined,
        lambda: sec2_video(include_cloud=False),
        lambda: sec2_combined(voice_sla=False),
        two_stage_scenario,
    ])
    def test_plan_invariants_on_fixtures(self, factory):
        sc = factory()
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        plan = decode(sc, vi, sol)
        check_plan_invariants(sc, vi, sol, plan)

    def test_plan_invariants_on_random_scenarios(self):
        solved = 0
        for seed in range(24):
            sc = random_scenario(seed)
            problem, vi = build_milp(sc)
            sol = solve_milp(problem)
            if sol.status != "optimal":
                continue
            plan = decode(sc, vi, sol)
            check_plan_invariants(sc, vi, sol, plan)
            solved += 1
        assert solved >= 10

    def test_cost_scaling_leaves_structure(self):
        # Scaling every cost factor by k scales the optimum by k and keeps
        # the same active set; verified against the brute-force oracle.
        sc = sec2_combined()
        problem, vi = build_milp(sc)
        base = solve_milp(problem)
        base_plan = decode(sc, vi, base)
        for k in (0.5, 3.0, 7.25):
            scaled = scale_costs(sc, elas=1.0, fixed=1.0)
            entries = {
                key: CostEntry(fixed=e.fixed * k, var=e.var * k, elas=e.elas * k)
                for key, e in sc.cost_model.entries.items()
            }
            scaled = dataclasses.replace(sc, cost_model=CostModel(entries))
            p2, v2 = build_milp(scaled)
            sol2 = solve_milp(p2)
            assert sol2.objective == pytest.approx(k * base.objective, rel=1e-9)
            oracle = brute_force(p2)
            assert sol2.objective == pytest.approx(oracle.objective, abs=1e-6)
            plan2 = decode(scaled, v2, sol2)
            assert plan2.active == base_plan.active

    def test_static_routing_constrains_epochs(self):
        sc = sec2_video()  # static routing on
        problem, vi = build_milp(sc)
        sol = solve_milp(problem)
        plan = decode(sc, vi, sol)
        fracs = {e: plan.flows.get(FlowFirstVar("video", e, "cloud1", "video-svc"), 0.0)
                 for e in range(1, 5)}
        assert all(f == pytest.approx(1.0, abs=1e-9) for f in fracs.values())

    def test_var_names_deterministic(self):
        k = FlowVar("c", 2, "p-1", "m", "q 2", "n")
        assert var_name(k) == "f_c_2_p_1_m_q_2_n"
