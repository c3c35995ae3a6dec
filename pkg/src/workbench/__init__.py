from .baselines import offline_floor, offline_schedule, single_dfs
from .bounds import bound_table, bfdn_closed_form, bfdn_ell_closed_form, cte_estimate, yo_star_estimate
from .generators import GENERATORS, create_tree, gen_complete_tree, gen_path, gen_random_tree, gen_spider, gen_star
from .grid import GridGraph, gen_grid_with_obstacles, manhattan_distance, parse_grid, parse_obstacle
from .models import AlgorithmSpec, ExperimentSpec, GeneratorSpec, SummaryRow
from .runner import RUNNABLE, RunOutcome, run_algorithm, summarize
from .sweep import build_world, load_experiment, plan_cells, run_cell, sweep

__all__ = [
    "offline_floor",
    "offline_schedule",
    "single_dfs",
    "bound_table",
    "bfdn_closed_form",
    "bfdn_ell_closed_form",
    "cte_estimate",
    "yo_star_estimate",
    "GENERATORS",
    "create_tree",
    "gen_complete_tree",
    "gen_path",
    "gen_random_tree",
    "gen_spider",
    "gen_star",
    "GridGraph",
    "gen_grid_with_obstacles",
    "manhattan_distance",
    "parse_grid",
    "parse_obstacle",
    "AlgorithmSpec",
    "ExperimentSpec",
    "GeneratorSpec",
    "SummaryRow",
    "RUNNABLE",
    "RunOutcome",
    "run_algorithm",
    "summarize",
    "build_world",
    "load_experiment",
    "plan_cells",
    "run_cell",
    "sweep",
]
