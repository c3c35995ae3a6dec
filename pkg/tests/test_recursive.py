import math

import pytest

from src.algorithms.bfdn import Bfdn
from src.engine import run
from src.engine.models import RoundRecord, RunTrace
from src.recursive import (AnchorBasedAlgorithm, AnchorInvariantObserver, AnchorSnapshot, BfdnEll,
                           bfdn1_depth_limited, bfdn_ell_bound, check_anchor_invariants, divide_depth,
                           integer_root, shallow_efficiency_audit, stage_spec, stage_summary)
from src.recursive import instances
from src.recursive.invariants import (DEEP_ACTIVITY, DFS_OPEN_COVERAGE, DIVIDE_DEPTH_ANCHORS, INACTIVE_DEPTH,
                                      LIMITED_ANCHOR_DEPTH, OPEN_NODE_COVERAGE, PARALLEL_POSITIONS,
                                      PARTIAL_EXPLORATION, SHALLOW_ACTIVITY, check_divide_depth_anchors)
from src.workbench.bounds import bfdn_ell_closed_form
from src.workbench.generators import gen_complete_tree, gen_random_tree, gen_spider
from src.workbench.runner import run_algorithm
from src.world import ExplorationView


def _moves(trace):
    return [sorted((mv.robot, mv.src, mv.dst) for mv in r.moves) for r in trace.rounds]


class TestBuilders:
    @pytest.mark.parametrize("k,ell,s", [(8, 2, 2), (9, 2, 3), (27, 3, 3), (63, 3, 3), (64, 3, 4), (1, 5, 1)])
    def test_integer_root(self, k, ell, s):
        assert integer_root(k, ell) == s

    def test_divide_depth_parameters(self):
        inner = bfdn1_depth_limited(3, 4)
        outer = divide_depth(inner, 2, 5)
        assert (outer.k_star, outer.k, outer.d) == (3, 6, 20)

    def test_stage_parameters(self):
        top = stage_spec(2, 3, 2)
        assert (top.k_star, top.k, top.d) == (3, 9, 16)
        assert not top.run_deep
        single = stage_spec(1, 4, 3)
        assert (single.k, single.d) == (4, 8)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            bfdn1_depth_limited(2, 0)
        with pytest.raises(ValueError):
            divide_depth(bfdn1_depth_limited(2, 2), 0, 1)
        with pytest.raises(ValueError):
            BfdnEll(0)

    def test_too_few_robots(self, path4):
        with pytest.raises(ValueError):
            run(path4, AnchorBasedAlgorithm(bfdn1_depth_limited(4, 2)), 2)


class TestDepthLimited:
    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_unlimited_depth_is_bfdn(self, k, spider45, binary3):
        for tree in (spider45, binary3, gen_random_tree(50, seed=9)):
            plain = run(tree, Bfdn(), k)
            limited = run(tree, AnchorBasedAlgorithm(bfdn1_depth_limited(k, tree.depth)), k)
            assert _moves(limited) == _moves(plain)

    def test_shallow_budget_keeps_invariants(self, spider45):
        observer = AnchorInvariantObserver(spider45)
        trace = run(spider45, AnchorBasedAlgorithm(bfdn1_depth_limited(4, 2)), 4, observers=[observer])
        assert observer.report.ok, observer.report.violations
        assert all(spider45.depth_of[p] <= 2 for p in trace.final_positions)

    def test_single_team_divide_depth_is_its_inner(self):
        tree = gen_random_tree(40, seed=3)
        inner = bfdn1_depth_limited(2, 2)
        a = run(tree, AnchorBasedAlgorithm(inner), 2)
        b = run(tree, AnchorBasedAlgorithm(divide_depth(inner, 1, 1)), 2)
        assert _moves(a) == _moves(b)

    @pytest.mark.parametrize("height", [4, 6])
    def test_divide_depth_anchors_sit_at_iteration_depth(self, height, mocker):
        spy = mocker.spy(instances, "check_divide_depth_anchors")
        tree = gen_complete_tree(2, height)
        spec = divide_depth(bfdn1_depth_limited(2, 2), 2, 2)
        run(tree, AnchorBasedAlgorithm(spec), 4)
        calls = [(call.args[1], call.args[2]) for call in spy.call_args_list]
        assert calls
        assert [depth for _, depth in calls] == [2, 4][:len(calls)]
        for anchors, depth in calls:
            assert all(tree.depth_of[v] == depth for v in anchors.values())


class TestInvariants:
    def _snapshot(self, tree, **kw):
        view = ExplorationView(tree)
        view.traverse(0, 0)
        base = dict(view=view, positions=[1], active={0}, anchors={0: 0}, depth_budget=3, k_star=1)
        base.update(kw)
        return AnchorSnapshot(**base)

    def test_clean_snapshot(self, path4):
        assert check_anchor_invariants(self._snapshot(path4)).ok

    def test_open_node_without_robot(self, path4):
        report = check_anchor_invariants(self._snapshot(path4, positions=[0]))
        assert DFS_OPEN_COVERAGE in {v.check for v in report.violations}

    def test_anchor_and_inactive_depth(self, path4):
        report = check_anchor_invariants(self._snapshot(path4, anchors={0: 1}, depth_budget=0))
        assert LIMITED_ANCHOR_DEPTH in {v.check for v in report.violations}
        report = check_anchor_invariants(self._snapshot(path4, active=set(), anchors={}, depth_budget=0))
        assert INACTIVE_DEPTH in {v.check for v in report.violations}

    def test_open_node_above_every_anchor(self, star4):
        report = check_anchor_invariants(self._snapshot(star4, anchors={0: 1}))
        assert {v.check for v in report.violations} == {OPEN_NODE_COVERAGE}

    def test_two_robots_below_an_open_node(self, star4):
        snap = self._snapshot(star4, positions=[1, 1], active={0, 1}, anchors={0: 0, 1: 0}, k_star=2)
        report = check_anchor_invariants(snap)
        assert {v.check for v in report.violations} == {PARALLEL_POSITIONS}

    def test_edge_crossed_both_ways_below_anchor(self, path4):
        snap = self._snapshot(path4)
        snap.view.traverse(0, 1)
        snap.view.traverse(0, 0)
        report = check_anchor_invariants(snap)
        assert {v.check for v in report.violations} == {PARTIAL_EXPLORATION}

    def test_deep_robot_without_edge_event(self, path4):
        view = ExplorationView(path4)
        view.traverse(0, 0)
        view.traverse(1, 1)
        snap = AnchorSnapshot(view=view, positions=[2], active={0}, anchors={0: 1}, depth_budget=1, k_star=1)
        assert {v.check for v in check_anchor_invariants(snap).violations} == {DEEP_ACTIVITY}
        snap.event_robots = {0}
        assert check_anchor_invariants(snap).ok

    def test_divide_depth_anchor_depths(self, binary3):
        view = ExplorationView(binary3)
        for e in sorted(range(binary3.num_edges), key=lambda e: binary3.depth_of[binary3.edges[e][1]]):
            view.traverse(e, binary3.edges[e][0])
        deep = [v for v in range(binary3.num_nodes) if binary3.depth_of[v] == 2]
        assert check_divide_depth_anchors(view, {0: deep[0], 1: deep[1]}, 2).ok
        report = check_divide_depth_anchors(view, {0: deep[0], 1: 1}, 2)
        assert [v.check for v in report.violations] == [DIVIDE_DEPTH_ANCHORS]
        assert "robot 1" in report.violations[0].detail

    def test_suspended_rounds_skip_activity(self, path4):
        busy = self._snapshot(path4, k_star=2)
        assert SHALLOW_ACTIVITY in {v.check for v in check_anchor_invariants(busy).violations}
        busy.suspended = True
        assert check_anchor_invariants(busy).ok


class TestBfdnEll:
    @pytest.mark.parametrize("ell,k", [(1, 4), (2, 4), (2, 8), (2, 9), (3, 8)])
    def test_explores_within_bound(self, ell, k):
        for tree in (gen_spider(6, 7), gen_random_tree(120, seed=ell * 10 + k), gen_complete_tree(3, 3)):
            outcome = run_algorithm(tree, "bfdn_ell", k, ell=ell)
            assert outcome.trace.completion_round is not None
            assert outcome.summary.bound_ok
            assert outcome.report.ok, outcome.report.violations[:3]

    def test_uses_a_perfect_power_of_robots(self):
        tree = gen_spider(8, 3)
        outcome = run_algorithm(tree, "bfdn_ell", 8, ell=2)
        counts = outcome.trace.move_counts()
        assert counts[4:] == [0, 0, 0, 0]

    def test_rounds_carry_stage_and_phase(self, binary3):
        outcome = run_algorithm(binary3, "bfdn_ell", 4, ell=2)
        stages = [s for s, _ in stage_summary(outcome.trace)]
        assert stages[0] == 1
        assert stages == sorted(stages)
        assert all(r.phase in ("shallow", "deep") for r in outcome.trace.rounds)

    def test_bound_formula(self):
        class World:
            num_nodes, depth, max_degree = 1000, 10, 3
        expected = 4 * 1000 / 2 + 2 ** 3 * (3 + 0.6931471805599453) * 10 ** 1.5
        assert bfdn_ell_bound(World, 4, 2) == pytest.approx(expected)

    def test_bound_uses_exact_root_of_k(self):
        class World:
            num_nodes, depth, max_degree = 1000, 10, 3
        expected = 4 * 1000 / 8 ** 0.5 + 2 ** 3 * (3 + math.log(8) / 2) * 10 ** 1.5
        assert bfdn_ell_bound(World, 8, 2) == pytest.approx(expected)
        assert bfdn_ell_bound(World, 8, 2) == pytest.approx(bfdn_ell_closed_form(1000, 10, 8, 3, 2))


class TestShallowEfficiency:
    def _trace(self, events_per_round):
        trace = RunTrace(algorithm="bfdn_ell", k=4, n=10, m=9, depth=3, max_degree=2)
        for t in range(1, 101):
            rec = RoundRecord(round=t, phase="shallow", stage=1)
            rec.edge_events = [(e, "down", 0) for e in range(events_per_round)]
            trace.rounds.append(rec)
        return trace

    def test_idle_stage_is_flagged(self):
        result = shallow_efficiency_audit(self._trace(0), ell=1, s=2, delta=2)
        assert not result.report.ok
        assert result.stages[0].shallow_rounds == 100

    def test_busy_stage_passes(self):
        result = shallow_efficiency_audit(self._trace(2), ell=1, s=2, delta=2)
        assert result.report.ok
        assert result.stages[0].waste == 0

    def test_stage_summary(self):
        trace = RunTrace(algorithm="x", k=1, n=1, m=0, depth=0, max_degree=0)
        trace.rounds = [RoundRecord(round=1, stage=1), RoundRecord(round=2, stage=1), RoundRecord(round=3, stage=2)]
        assert stage_summary(trace) == [(1, 2), (2, 1)]
