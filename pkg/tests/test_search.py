"""Best-first search: plans, statistics, caps and configuration errors."""
from __future__ import annotations

import pytest

from absplan import ConfigurationError, SearchParams, plan_search, validate_plan
from absplan.fixtures import air_2p_3c, bags_full, monotone_negative
from absplan.search import HEURISTICS


class TestAir1:
    @pytest.mark.parametrize("heuristic", HEURISTICS)
    def test_astar_finds_two_step_plan(self, air1, heuristic):
        result = plan_search(air1, SearchParams("astar", heuristic))
        assert result.status == "solved"
        assert result.plan == ["board_person1_plane1_city1", "fly_city1_city2"]
        assert validate_plan(air1, result.plan).valid

    def test_stats(self, air1):
        stats = plan_search(air1).stats
        assert stats.nodes_expanded == 2
        assert stats.nodes_generated == 4
        assert stats.heuristic_evals == 4
        assert stats.wall_time_ms >= 0

    def test_unsolvable_root_is_pruned(self, air1_fuel):
        result = plan_search(air1_fuel)
        assert result.status == "unsolvable"
        assert result.stats.nodes_expanded == 0

    def test_callable_heuristic(self, air1):
        result = plan_search(air1, SearchParams(heuristic=lambda s: 0))
        assert result.cost == 2


class TestOtherAlgorithms:
    def test_gbfs_and_ucs_agree_on_cost_here(self):
        p = air_2p_3c()
        ucs = plan_search(p, SearchParams("ucs"))
        gbfs = plan_search(p, SearchParams("gbfs", "hadd"))
        assert ucs.cost == 7 and gbfs.cost == 7

    def test_ucs_exhausts_unsolvable(self):
        result = plan_search(bags_full(), SearchParams("ucs"))
        assert result.status == "unsolvable"

    def test_node_cap(self):
        result = plan_search(monotone_negative(), SearchParams("ucs", node_cap=50))
        assert result.status == "cap_exceeded"
        assert result.stats.nodes_generated == 51

    def test_deterministic(self):
        p = air_2p_3c()
        a = plan_search(p, SearchParams("gbfs", "hadd"))
        b = plan_search(p, SearchParams("gbfs", "hadd"))
        assert a.plan == b.plan and a.stats.nodes_expanded == b.stats.nodes_expanded


class TestConfiguration:
    def test_unknown_heuristic(self):
        with pytest.raises(ConfigurationError):
            SearchParams(heuristic="hff")

    def test_unknown_algorithm(self):
        with pytest.raises(ConfigurationError):
            SearchParams(algorithm="idastar")

    def test_bad_cap(self):
        with pytest.raises(ConfigurationError):
            SearchParams(node_cap=0)


class TestDocumentedProperties:
    def test_empty_goal(self):
        from absplan import parse_problem

        p = parse_problem("(domain empty)", "(problem p (init) (goal (and)))")
        result = plan_search(p)
        assert result.status == "solved" and result.plan == [] and result.cost == 0

    def test_informed_astar_not_worse_than_ucs(self):
        from absplan.fixtures import air

        for p in (air(2, 2), air_2p_3c(), air(1, 3, start=[1], dest=[3])):
            informed = plan_search(p, SearchParams("astar", "hmax"))
            ucs = plan_search(p, SearchParams("ucs"))
            assert informed.cost == ucs.cost
            assert informed.stats.nodes_expanded <= ucs.stats.nodes_expanded
