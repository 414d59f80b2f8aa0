import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from faultminer.counting import ExpiryPolicy
from faultminer.episodes import Episode, FrequentEpisode, parse_episode
from faultminer.postfilter import (
    INDIVIDUAL,
    MULTIPLE,
    MULTIPLE_ZC,
    OTHER,
    KnownEpisodeList,
    Topology,
    apply_category_policy,
    categorize,
    category_policy,
    flag_known,
    restriction,
)
from faultminer.rules import ScoredEpisode

TOPO = Topology(stations={"ST3": "Z1", "ST4": "Z1", "ZC1": "Z0"}, controllers={"Z1": "ZC1"})


def scored(text):
    return ScoredEpisode(FrequentEpisode(parse_episode(text), 3), 100.0, 50.0)


class TestCategorize:
    def test_same_station(self):
        assert categorize(parse_episode("C_Y -> C_X")) == INDIVIDUAL

    def test_two_stations(self):
        assert categorize(parse_episode("B -> A"), TOPO) == MULTIPLE

    def test_zone_controller(self):
        assert categorize(parse_episode("ZC1 -> ST3"), TOPO) == MULTIPLE_ZC
        assert categorize(parse_episode("ST4_F1 -> ST3_F2 -> ZC1_F9"), TOPO) == MULTIPLE_ZC
        assert categorize(parse_episode("ST4 -> ST3"), TOPO) == MULTIPLE

    def test_no_station(self):
        assert categorize(Episode(("_F1", "ST1"))) == OTHER

    @given(st.lists(st.tuples(st.sampled_from(["ST3", "ST4", "ZC1", "B"]), st.sampled_from(["F1", "X_Y", ""])), min_size=1, max_size=4))
    def test_depends_only_on_stations(self, nodes):
        a = Episode(tuple(f"{s}_{c}" if c else s for s, c in nodes))
        b = Episode(tuple(s for s, _ in nodes))
        assert categorize(a, TOPO) == categorize(b, TOPO)


class TestPolicy:
    @pytest.mark.parametrize(
        "cat,mode", [(INDIVIDUAL, "end_to_start"), (MULTIPLE, "start_to_start"), (MULTIPLE_ZC, "start_to_start"), (OTHER, "full_span")]
    )
    def test_span_modes(self, cat, mode):
        assert apply_category_policy(parse_episode("A"), cat, 60) == ExpiryPolicy(60, mode)

    def test_per_category_limits(self):
        pol = category_policy(TOPO, 300, {INDIVIDUAL: 100})
        assert pol(parse_episode("ST3_F1 -> ST3_F2")) == ExpiryPolicy(100, "end_to_start")
        assert pol(parse_episode("ST3 -> ST4")) == ExpiryPolicy(300, "start_to_start")

    def test_restriction(self):
        prune, keep = restriction(INDIVIDUAL)
        assert prune(parse_episode("A_1 -> A_2")) and not prune(parse_episode("A -> B"))
        prune, keep = restriction(MULTIPLE)
        assert prune is None
        assert keep(parse_episode("A -> B")) and not keep(parse_episode("A -> A")) and keep(parse_episode("A"))
        with pytest.raises(ValueError):
            restriction("sideways")


class TestKnown:
    def test_parse(self):
        known, errors = KnownEpisodeList.parse(
            ["# comment", "well_known: A->B", "expected: B -> C", "", "maybe: C -> D", "well_known: X ->"]
        )
        assert known.entries == {"A -> B": "well_known", "B -> C": "expected"}
        assert [n for n, _ in errors] == [5, 6]

    def test_empty_list(self):
        eps = [scored("A -> B")]
        assert flag_known(eps, KnownEpisodeList()) == (eps, [])

    def test_all_well_known(self):
        known, _ = KnownEpisodeList.parse(["well_known: A -> B", "well_known: B -> C"])
        kept, flagged = flag_known([scored("A -> B"), scored("B -> C")], known)
        assert kept == [] and [str(s.episode) for s in flagged] == ["A -> B", "B -> C"]

    def test_expected_tag(self):
        known, _ = KnownEpisodeList.parse(["expected: A -> B"])
        kept, flagged = flag_known([scored("A -> B"), scored("C -> D")], known)
        assert [s.tag for s in kept] == ["expected", None] and flagged == []

    def test_idempotent_and_partition(self):
        known, _ = KnownEpisodeList.parse(["well_known: A -> B", "expected: C -> D"])
        eps = [scored(t) for t in ["A -> B", "C -> D", "E -> F", "A -> B -> C"]]
        kept, flagged = flag_known(eps, known)
        assert len(kept) + len(flagged) == len(eps)
        assert {str(s.episode) for s in kept} | {str(s.episode) for s in flagged} == {str(s.episode) for s in eps}
        assert flag_known(kept, known) == (kept, [])


def test_topology_file(tmp_path):
    p = tmp_path / "topo.json"
    p.write_text(json.dumps({"stations": {"ST3": "Z1"}, "controllers": {"Z1": "ZC1"}}))
    topo = Topology.load(p)
    assert topo.controls("ZC1", "ST3") and not topo.controls("ST3", "ZC1")
