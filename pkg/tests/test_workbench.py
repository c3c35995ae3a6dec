import math
import sys

import orjson
import pandas as pd
import pytest

from config.config import Config
from run_cotex import main
from src.utils.utils import AuditError, InstanceTooLargeError, SweepError
from src.workbench import (AlgorithmSpec, ExperimentSpec, GeneratorSpec, bound_table, create_tree, cte_estimate,
                           gen_complete_tree, gen_path, gen_random_tree, gen_spider, gen_star,
                           gen_grid_with_obstacles, load_experiment, offline_floor, offline_schedule,
                           run_algorithm, single_dfs, sweep)
from src.workbench.models import EXTRA_COLUMNS, SUMMARY_COLUMNS


class TestGenerators:
    def test_spider(self):
        tree = gen_spider(4, 5)
        assert (tree.num_nodes, tree.depth, tree.max_degree) == (21, 5, 4)
        assert gen_spider(1, 3).edge_list() == gen_path(4).edge_list()

    @pytest.mark.parametrize("b,D,n", [(2, 3, 15), (3, 2, 13), (1, 5, 6), (4, 0, 1)])
    def test_complete(self, b, D, n):
        tree = gen_complete_tree(b, D)
        assert tree.num_nodes == n
        assert tree.depth == D

    def test_complete_guard(self, monkeypatch):
        monkeypatch.setattr(Config, "MAX_TREE_NODES", 10)
        with pytest.raises(InstanceTooLargeError):
            gen_complete_tree(2, 3)

    def test_random_is_seeded(self):
        assert gen_random_tree(300, seed=7).edge_list() == gen_random_tree(300, seed=7).edge_list()
        assert gen_random_tree(1).num_nodes == 1
        assert gen_random_tree(2).edge_list() == [(0, 1)]

    def test_env_seed_override(self, monkeypatch):
        monkeypatch.setattr(Config, "SEED", 99)
        assert gen_random_tree(200, seed=1).edge_list() == gen_random_tree(200, seed=2).edge_list()

    def test_star_and_factory(self):
        assert gen_star(0).num_nodes == 1
        assert create_tree("star", leaves=5).max_degree == 5
        with pytest.raises(ValueError):
            create_tree("forest", n=3)


class TestBaselines:
    def test_single_dfs(self, random_trees):
        for tree in random_trees:
            assert single_dfs(tree).runtime == 2 * (tree.num_nodes - 1)

    def test_offline_star(self):
        walks, makespan = offline_schedule(gen_star(3), 3)
        assert makespan == 2
        assert all(w[0] == w[-1] == 0 for w in walks)

    def test_offline_single_robot(self, binary3):
        _, makespan = offline_schedule(binary3, 1)
        assert makespan == 2 * (binary3.num_nodes - 1)

    def test_offline_path(self):
        tree = gen_path(5)
        _, makespan = offline_schedule(tree, 2)
        assert makespan <= 12
        assert offline_floor(tree, 2) == 4

    def test_offline_more_robots_than_edges(self, path4):
        walks, makespan = offline_schedule(path4, 10)
        assert len(walks) == 10
        assert makespan <= 2 * (1 + path4.depth)

    def test_offline_covers_every_node(self, random_trees):
        for tree in random_trees:
            for k in (1, 2, 7):
                walks, _ = offline_schedule(tree, k)
                assert set().union(*map(set, walks)) == set(range(tree.num_nodes))


class TestBounds:
    def test_headline_value(self):
        table = bound_table(10 ** 6, 100, 16, 3)
        bfdn = table.loc[table["algorithm"] == "bfdn", "bound"].item()
        assert bfdn == pytest.approx(155986.12, abs=0.01)
        assert table["best"].sum() == 1
        assert len(table) == 8

    def test_single_robot(self):
        table = bound_table(500, 10, 1, 4, ells=(2,))
        bfdn = table.loc[table["algorithm"] == "bfdn", "bound"].item()
        assert bfdn == 2 * 500 + 2 * 10 ** 2
        assert math.isnan(cte_estimate(500, 10, 1))

    def test_offline_column(self):
        table = bound_table(11, 1, 10, 10)
        assert table.loc[table["algorithm"] == "offline", "bound"].item() == pytest.approx(2 * (11 / 10 + 1))

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            bound_table(0, 1, 1, 1)


class TestRunner:
    @pytest.mark.parametrize("name,k", [
        ("bfdn", 3), ("dfs", 1), ("planner", 3), ("breakdown", 3), ("graph_bfdn", 3),
        ("bfdn1", 3), ("bfdn_ell", 4), ("offline", 3),
    ])
    def test_every_algorithm(self, binary3, name, k):
        outcome = run_algorithm(binary3, name, k, mask="bernoulli:0.5", seed=1)
        assert outcome.summary.bound_ok
        assert outcome.report.ok, outcome.report.violations[:3]
        assert outcome.summary.n == binary3.num_nodes

    def test_tree_algorithms_refuse_graphs(self):
        with pytest.raises(ValueError):
            run_algorithm(gen_grid_with_obstacles(3, 3), "bfdn", 2)

    def test_dfs_needs_one_robot(self, path4):
        with pytest.raises(ValueError):
            run_algorithm(path4, "dfs", 2)

    def test_unknown(self, path4):
        with pytest.raises(ValueError):
            run_algorithm(path4, "teleport", 2)


class TestSweep:
    def test_spider_per_robot_count(self, tmp_path):
        spec = ExperimentSpec(generators=[GeneratorSpec(name="spider", params={"k": "k", "D": 6})],
                              algorithms=[AlgorithmSpec(name="bfdn")], ks=[2, 4, 8],
                              output=str(tmp_path / "spider.csv"))
        df, ok = sweep(spec, progress=False)
        assert ok
        assert list(df["n"]) == [13, 25, 49]
        assert df["bound_ok"].all()
        saved = pd.read_csv(tmp_path / "spider.csv")
        assert list(saved.columns) == SUMMARY_COLUMNS + EXTRA_COLUMNS
        assert len(saved) == 3

    def test_empty_matrix_writes_header(self, tmp_path):
        df, ok = sweep(ExperimentSpec(), output=tmp_path / "empty.csv", progress=False)
        assert ok
        assert df.empty
        assert list(pd.read_csv(tmp_path / "empty.csv").columns) == SUMMARY_COLUMNS + EXTRA_COLUMNS

    def test_dfs_only_at_one_robot(self, tmp_path):
        spec = ExperimentSpec(generators=[GeneratorSpec(name="random", params={"n": 40})],
                              algorithms=[AlgorithmSpec(name="dfs"), AlgorithmSpec(name="offline")],
                              ks=[1, 4], seeds=[0, 1])
        df, ok = sweep(spec, output=tmp_path / "mixed.csv", progress=False)
        assert ok
        assert len(df) == 2 + 4
        assert set(df.loc[df["algorithm"] == "dfs", "k"]) == {1}

    def test_failure_names_cell(self, tmp_path):
        spec = ExperimentSpec(generators=[GeneratorSpec(name="spider", params={"k": 0, "D": 2})],
                              algorithms=[AlgorithmSpec(name="bfdn")], ks=[2])
        with pytest.raises(SweepError, match="algorithm=bfdn k=2 seed=0"):
            sweep(spec, output=tmp_path / "bad.csv", progress=False)

    def test_load_experiment(self, tmp_path):
        path = tmp_path / "exp.json"
        path.write_bytes(orjson.dumps({"generators": [{"name": "star", "params": {"leaves": 4}}],
                                       "algorithms": [{"name": "bfdn"}], "ks": [2]}))
        spec = load_experiment(path)
        assert spec.seeds == [0]
        with pytest.raises(SweepError):
            load_experiment(tmp_path / "missing.json")


class TestCli:
    def test_bounds(self, capsys):
        assert main(["bounds", "--n", "1000", "--D", "10", "--k", "4", "--delta", "3"]) == 0
        assert "bfdn_ell[2]" in capsys.readouterr().out

    def test_gen_run_verify(self, tmp_path):
        tree_file, trace_file = tmp_path / "spider.txt", tmp_path / "trace.jsonl"
        assert main(["gen", "--generator", "spider", "--legs", "3", "--depth-param", "4",
                     "--out", str(tree_file)]) == 0
        assert main(["run", "--tree", str(tree_file), "--k", "3", "--trace", str(trace_file)]) == 0
        assert main(["verify", "--trace", str(trace_file), "--world", str(tree_file)]) == 0

    def test_grid_model(self, capsys):
        assert main(["run", "--grid", "6x5", "--obstacle", "2,1,3,2", "--model", "graph", "--k", "2"]) == 0
        assert '"bound_ok": true' in capsys.readouterr().out

    def test_bad_grid_layout_exits_one(self):
        assert main(["run", "--grid", "4x4", "--obstacle", "0,0,0,0", "--model", "graph"]) == 1

    def test_missing_tree_exits_one(self, tmp_path):
        assert main(["run", "--tree", str(tmp_path / "nope.txt")]) == 1

    def test_game(self, capsys):
        assert main(["game", "--k", "8", "--delta", "3"]) == 0
        assert "ok=True" in capsys.readouterr().out
        assert main(["game", "--k", "8", "--delta", "3", "--init", "generalized:3", "--adversary", "random"]) == 0

    def test_sweep_exit_codes(self, tmp_path, mocker):
        exp = tmp_path / "exp.json"
        exp.write_bytes(orjson.dumps({"generators": [{"name": "path", "params": {"n": 6}}],
                                      "algorithms": [{"name": "bfdn"}], "ks": [2],
                                      "output": str(tmp_path / "out.csv")}))
        assert main(["sweep", str(exp), "--quiet"]) == 0
        failing = dict(n=6, D=5, Delta=2, k=2, algorithm="bfdn", seed=0, runtime=99, edge_events=10, bound=1.0,
                       bound_ok=False, generator="path(n=6)", checks_ok=True, violations="", memory_peak_bits=None)
        mocker.patch.object(sys.modules["src.workbench.sweep"], "run_cell", return_value=failing)
        assert main(["sweep", str(exp), "--quiet"]) == 2

    def test_audit_error_carries_report(self):
        err = AuditError("boom", report="r")
        assert err.report == "r"
