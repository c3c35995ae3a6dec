from .bfdn import Bfdn, BfdnState, BfdnTeam, bfdn_round, reanchor
from .dfs import SingleDfs
from .planner import (
    NodePartitionCounter,
    PlannerBfdn,
    PlannerChannel,
    PlannerState,
    RobotMemory,
    memory_budget,
    partition_step,
    planner_round,
)
from .variants import GraphBfdn, bfs_tree_problems, run_graph_bfdn, run_planner_bfdn, run_with_breakdowns
from .factory import ALGORITHMS, create_algorithm

__all__ = [
    "Bfdn",
    "BfdnState",
    "BfdnTeam",
    "bfdn_round",
    "reanchor",
    "SingleDfs",
    "NodePartitionCounter",
    "PlannerBfdn",
    "PlannerChannel",
    "PlannerState",
    "RobotMemory",
    "memory_budget",
    "partition_step",
    "planner_round",
    "GraphBfdn",
    "bfs_tree_problems",
    "run_graph_bfdn",
    "run_planner_bfdn",
    "run_with_breakdowns",
    "ALGORITHMS",
    "create_algorithm",
]
