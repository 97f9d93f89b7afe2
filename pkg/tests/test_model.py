"""Domain model: validation rules, accessors, and file round-trips."""

import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from nfvplan.generate import paper_workload, random_scenario, sec2_combined, sec2_video
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
    ScenarioFormatError,
    ServiceChain,
    TrafficClass,
    dumps_scenario,
    hostable,
    loads_scenario,
    scenario_from_dict,
    scenario_hash,
    scenario_to_dict,
    stage_of,
    validate,
)


def toy_scenario(**overrides) -> Scenario:
    """Minimal valid scenario: one NF, one flex box, one class."""
    nfs = frozenset({"fw"})
    flex = PlatformInstance(
        id="flex0", location="L0",
        ptype=PlatformType(PlatformKind.FLEXHW, nfs, elastic=False),
        capacity=50.0)
    base = dict(
        locations=(Location(id="L0"),),
        instances=(flex,),
        nfs=(NetworkFunction(id="fw"),),
        classes=(TrafficClass(
            id="web", chain=ServiceChain(class_id="web", stages=("fw",)),
            volumes=(1.0, 2.0)),),
        footprints=FootprintTable({("web", "fw", PlatformKind.FLEXHW): 1.0}),
        cost_model=CostModel({("L0", PlatformKind.FLEXHW): CostEntry(var=1.0)}),
        latency=LatencyMatrix({("flex0", "flex0"): 0.0}),
        epochs=2,
    )
    base.update(overrides)
    return Scenario(**base)


class TestValidate:
    def test_well_formed(self):
        assert validate(toy_scenario()) == []

    def test_uncoverable_stage(self):
        sc = toy_scenario(classes=(TrafficClass(
            id="web", chain=ServiceChain(class_id="web", stages=("ims",)),
            volumes=(1.0, 2.0)),),
            nfs=(NetworkFunction(id="fw"), NetworkFunction(id="ims")))
        rules = {v.rule for v in validate(sc)}
        assert "uncoverable stage" in rules

    def test_epoch_mismatch(self):
        sc = toy_scenario(epochs=4)
        rules = {v.rule for v in validate(sc)}
        assert "epoch mismatch" in rules

    def test_repeated_nf_rejected(self):
        sc = toy_scenario(
            nfs=(NetworkFunction(id="fw"), NetworkFunction(id="nat")),
            classes=(TrafficClass(
                id="web",
                chain=ServiceChain(class_id="web", stages=("fw", "nat", "fw")),
                volumes=(1.0, 2.0)),))
        rules = {v.rule for v in validate(sc)}
        assert "repeated nf in chain" in rules

    def test_dedicated_must_host_single_nf(self):
        bad = PlatformInstance(
            id="ded0", location="L0",
            ptype=PlatformType(PlatformKind.DEDICATED,
                               frozenset({"fw", "nat"}), elastic=False),
            capacity=10.0)
        sc = toy_scenario(
            instances=(toy_scenario().instances[0], bad),
            nfs=(NetworkFunction(id="fw"), NetworkFunction(id="nat")),
            cost_model=CostModel({
                ("L0", PlatformKind.FLEXHW): CostEntry(var=1.0),
                ("L0", PlatformKind.DEDICATED): CostEntry(var=1.0),
            }),
            latency=LatencyMatrix({
                (a, b): 0.0
                for a in ("flex0", "ded0") for b in ("flex0", "ded0")
            }))
        rules = {v.rule for v in validate(sc)}
        assert "dedicated hosts one nf" in rules

    def test_elastic_pricing_on_non_elastic_type(self):
        sc = toy_scenario(cost_model=CostModel({
            ("L0", PlatformKind.FLEXHW): CostEntry(var=1.0, elas=3.0)}))
        rules = {v.rule for v in validate(sc)}
        assert "elastic price on non-elastic type" in rules

    def test_missing_latency_entry(self):
        sc = toy_scenario(latency=LatencyMatrix({}))
        rules = {v.rule for v in validate(sc)}
        assert "missing entry" in rules

    def test_nonpositive_capacity(self):
        inst = dataclasses.replace(toy_scenario().instances[0], capacity=0.0)
        sc = toy_scenario(instances=(inst,))
        rules = {v.rule for v in validate(sc)}
        assert "nonpositive capacity" in rules

    def test_validate_never_raises_on_weird_input(self):
        sc = toy_scenario(
            classes=(TrafficClass(
                id="web", chain=ServiceChain(class_id="other", stages=()),
                volumes=(-1.0,), latency_threshold=-5.0,
                ingress="nowhere", egress="nowhere"),),
            epochs=0)
        violations = validate(sc)
        assert len(violations) >= 4


class TestAccessors:
    def test_hostable_true_false(self):
        sc = sec2_video()
        assert hostable(sc, "flex1", "video-svc") is True
        sc2 = toy_scenario()
        assert hostable(sc2, "flex0", "fw") is True

    def test_hostable_dedicated(self):
        ded = PlatformInstance(
            id="ded-sgw", location="L0",
            ptype=PlatformType(PlatformKind.DEDICATED, frozenset({"sgw"}),
                               elastic=False),
            capacity=5.0)
        sc = toy_scenario(
            instances=(toy_scenario().instances[0], ded),
            nfs=(NetworkFunction(id="fw"), NetworkFunction(id="sgw")))
        assert hostable(sc, "ded-sgw", "sgw") is True
        assert hostable(sc, "ded-sgw", "fw") is False

    def test_hostable_unknown_ids(self):
        sc = toy_scenario()
        with pytest.raises(KeyError):
            hostable(sc, "nope", "fw")
        with pytest.raises(KeyError):
            hostable(sc, "flex0", "nope")

    def test_stage_of(self):
        chain = ServiceChain(class_id="c", stages=("sgw", "pgw", "fw"))
        assert stage_of(chain, 1) == "sgw"
        assert stage_of(chain, 3) == "fw"
        with pytest.raises(IndexError):
            stage_of(chain, 4)
        with pytest.raises(IndexError):
            stage_of(chain, 0)


class TestSerialization:
    @pytest.mark.parametrize("factory", [
        sec2_video, sec2_combined, lambda: paper_workload(seed=3),
        lambda: random_scenario(17), toy_scenario,
    ])
    def test_round_trip_identity(self, factory):
        sc = factory()
        text = dumps_scenario(sc)
        again = loads_scenario(text)
        assert dumps_scenario(again) == text
        assert scenario_hash(again) == scenario_hash(sc)

    def test_format_field_mandatory(self):
        doc = scenario_to_dict(toy_scenario())
        del doc["format"]
        with pytest.raises(ScenarioFormatError):
            scenario_from_dict(doc)
        doc["format"] = "nfv-scenario/99"
        with pytest.raises(ScenarioFormatError):
            scenario_from_dict(doc)

    def test_bad_json_reports_position(self):
        with pytest.raises(ScenarioFormatError) as err:
            loads_scenario("{\n  broken")
        assert "line" in str(err.value)

    def test_hash_stable_across_reserialization(self):
        sc = sec2_combined()
        h1 = scenario_hash(sc)
        h2 = scenario_hash(loads_scenario(dumps_scenario(sc)))
        assert h1 == h2

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_random_scenarios_round_trip(self, seed):
        sc = random_scenario(seed)
        assert validate(sc) == []
        assert dumps_scenario(loads_scenario(dumps_scenario(sc))) == dumps_scenario(sc)
