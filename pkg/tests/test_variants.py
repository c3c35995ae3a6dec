from collections import Counter

import pytest

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from src.algorithms.planner import (NodePartitionCounter, PlannerChannel, PlannerState, RobotMemory, memory_budget,
                                    partition_step, planner_round)
from src.algorithms.variants import bfs_tree_problems, run_graph_bfdn, run_planner_bfdn, run_with_breakdowns
from src.engine import BernoulliMask, BlockedRobotsMask, RoundRobinMask, bfdn_bound, mean_mobility
from src.engine.masks import BlockHeaviestAnchorMask
from src.utils.utils import AuditError, GridLayoutError, PlannerError
from src.workbench.generators import gen_random_tree
from src.workbench.grid import gen_grid_with_obstacles, manhattan_distance, parse_grid, parse_obstacle
from src.world import ExplorationView, Graph

PROPERTY_SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


class TestPlanner:
    def test_memory_budget_formula(self):
        assert memory_budget(4, 3) == 4 + 3 * 2
        assert memory_budget(5, 2) == 5 + 2 * 3

    def test_partition_hands_out_ports_from_the_top(self):
        counter = NodePartitionCounter()
        assert [partition_step(counter, 7, 4) for _ in range(5)] == [4, 3, 2, 1, 1]
        assert partition_step(counter, 8, 4) == 4

    def test_first_round_anchors_everyone_at_root(self):
        planner = PlannerState()
        out = planner_round(planner, [(i, RobotMemory(delta=3)) for i in range(4)])
        assert out == {i: () for i in range(4)}
        assert planner.d == 0

    def test_single_remaining_anchor_takes_everyone(self):
        planner = PlannerState(d=1, A=[(1,), (2,)], R={(1,)}, ever_assigned={(), (1,), (2,)})
        out = planner_round(planner, [(i, RobotMemory(delta=3)) for i in range(4)])
        assert out == {i: (2,) for i in range(4)}
        assert planner.d == 1

    def test_promotion_splits_robots_evenly(self):
        planner = PlannerState(d=1, A=[(1,)], ever_assigned={(), (1,)})
        back = RobotMemory(delta=4)
        back.anchor = (1,)
        returning = [(0, back)] + [(i, RobotMemory(delta=4)) for i in range(1, 4)]
        out = planner_round(planner, returning)
        assert planner.d == 2
        assert planner.A == [(1, 2), (1, 3), (1, 4)]
        loads = Counter(out.values())
        assert sorted(loads.values()) == [1, 1, 2]

    def test_finished_ports_are_skipped(self):
        planner = PlannerState(d=1, A=[(1,)], ever_assigned={(), (1,)})
        back = RobotMemory(delta=4)
        back.anchor = (1,)
        back.finished[2] = True
        planner_round(planner, [(0, back)])
        assert planner.A == [(1, 2), (1, 4)]

    def test_unknown_anchor_is_rejected(self):
        stray = RobotMemory(delta=3)
        stray.anchor = (3, 3)
        with pytest.raises(PlannerError):
            planner_round(PlannerState(), [(0, stray)])

    def test_runs_within_bound_and_memory(self, random_trees):
        for tree in random_trees:
            for k in (1, 3, 8):
                trace = run_planner_bfdn(tree, k)
                assert trace.extras["audit"].ok
                assert trace.extras["memory_peak_bits"] <= trace.extras["memory_budget_bits"]
                assert trace.final_positions == [0] * k

    def test_memory_reads_only_at_root(self, mocker):
        spy = mocker.spy(PlannerChannel, "read_memory")
        tree = gen_random_tree(120, seed=11)
        run_planner_bfdn(tree, 6)
        assert spy.call_count > 0
        assert all(call.args[2] == tree.root for call in spy.call_args_list)

    def test_same_runtime_scale_as_bfdn(self, spider45):
        trace = run_planner_bfdn(spider45, 4)
        assert trace.runtime <= bfdn_bound(spider45, 4)


class TestBreakdowns:
    @pytest.mark.parametrize("seed", range(5))
    def test_bernoulli_masks(self, seed):
        tree = gen_random_tree(60, seed=seed)
        trace = run_with_breakdowns(tree, 4, BernoulliMask(4, 0.6, seed=seed))
        assert trace.extras["audit"].ok
        assert trace.completion_round is not None

    def test_round_robin(self, binary3):
        trace = run_with_breakdowns(binary3, 3, RoundRobinMask(3))
        assert trace.completion_round is not None
        assert all(len(r.moves) <= 1 for r in trace.rounds)

    def test_adaptive_adversary(self, binary3):
        trace = run_with_breakdowns(binary3, 4, BlockHeaviestAnchorMask(4))
        assert trace.extras["audit"].ok

    def test_frozen_robots_never_move(self, spider45):
        trace = run_with_breakdowns(spider45, 3, BlockedRobotsMask(3, [1, 2]))
        assert trace.move_counts()[1:] == [0, 0]
        assert trace.completion_round is not None

    @PROPERTY_SETTINGS
    @given(n=st.integers(min_value=2, max_value=80), seed=st.integers(min_value=0, max_value=5_000),
           k=st.sampled_from([1, 2, 4, 6]), p=st.floats(min_value=0.5, max_value=1.0))
    def test_random_bernoulli_masks(self, n, seed, k, p):
        tree = gen_random_tree(n, seed=seed)
        mask = BernoulliMask(k, p, seed=seed)
        trace = run_with_breakdowns(tree, k, mask, strict=False)
        assert trace.extras["audit"].ok, trace.extras["audit"].violations
        for record in trace.rounds:
            bits = mask.rows[record.round - 1]
            assert record.blocked == [i for i in range(k) if not bits[i]]
            assert all(bits[mv.robot] for mv in record.moves)
        realized = sum(sum(row) for row in mask.rows[:trace.rounds_executed])
        assert mean_mobility(mask, trace.rounds_executed) * k == realized


class TestGrids:
    def test_three_by_three_distances(self):
        grid = gen_grid_with_obstacles(3, 3)
        assert grid.num_nodes == 9
        assert grid.num_edges == 12
        assert grid.dist(grid.index[(2, 2)]) == 4
        assert manhattan_distance((0, 0), (2, 2)) == 4

    def test_obstacle_keeps_manhattan(self):
        grid = gen_grid_with_obstacles(5, 5, [(2, 2, 3, 3)])
        assert grid.num_nodes == 21
        assert all(grid.dist(i) == x + y for i, (x, y) in enumerate(grid.cells))

    @pytest.mark.parametrize("rects", [
        [(0, 0, 0, 0)],
        [(1, 0, 1, 3)],
        [(0, 1, 2, 1), (4, 0, 4, 0)],
    ])
    def test_bad_layouts(self, rects):
        with pytest.raises(GridLayoutError):
            gen_grid_with_obstacles(5, 4, rects)

    def test_random_obstacles_are_seeded(self):
        a = gen_grid_with_obstacles(12, 12, seed=5, random_obstacles=3)
        b = gen_grid_with_obstacles(12, 12, seed=5, random_obstacles=3)
        assert a.cells == b.cells

    def test_parsers(self):
        assert parse_grid("40x30") == (40, 30)
        assert parse_obstacle("1,2,3,4") == (1, 2, 3, 4)
        with pytest.raises(ValueError):
            parse_grid("40")
        with pytest.raises(ValueError):
            parse_obstacle("1,2,3")


class TestGraphBfdn:
    @pytest.mark.parametrize("k", [1, 2, 5])
    def test_grid_exploration(self, k):
        grid = gen_grid_with_obstacles(8, 6, [(3, 1, 4, 2)])
        trace = run_graph_bfdn(grid, k)
        assert trace.extras["audit"].ok
        assert len(trace.extras["tree_edges"]) == grid.num_nodes - 1
        assert not bfs_tree_problems(grid, trace.extras["tree_edges"])

    def test_tree_as_graph_closes_nothing(self, binary3):
        trace = run_graph_bfdn(Graph.from_tree(binary3), 3)
        assert trace.extras["closed_edges"] == []

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_four_cycle_closes_one_edge(self, k):
        cycle = Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        trace = run_graph_bfdn(cycle, k)
        assert len(trace.extras["closed_edges"]) == 1
        assert trace.extras["closed_edges"][0] in (2, 3)

    def test_five_by_five_grid_bfs_tree(self):
        grid = gen_grid_with_obstacles(5, 5)
        trace = run_graph_bfdn(grid, 4)
        assert len(trace.extras["tree_edges"]) == 24
        assert len(trace.extras["closed_edges"]) == grid.num_edges - 24

    def test_subtree_queries_need_a_tree(self):
        view = ExplorationView(gen_grid_with_obstacles(3, 3))
        assert view.shallowest_open() == [0]
        with pytest.raises(ValueError, match="tree world"):
            view.shallowest_open(within=0)

    def test_bfs_tree_problems_flags_missing_edge(self):
        grid = gen_grid_with_obstacles(3, 3)
        problems = bfs_tree_problems(grid, [0, 1])
        assert problems

    def test_strict_raises(self, mocker):
        grid = gen_grid_with_obstacles(4, 4)
        mocker.patch("src.algorithms.variants.bfs_tree_problems", return_value=["forced"])
        with pytest.raises(AuditError):
            run_graph_bfdn(grid, 2)
