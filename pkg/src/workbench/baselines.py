from __future__ import annotations
import logging
import math
from typing import List, Tuple

from src.algorithms.dfs import SingleDfs
from src.engine.models import RunTrace
from src.engine.simulator import run
from src.utils.utils import AuditError

logger = logging.getLogger(__name__)


def single_dfs(tree) -> RunTrace:
    """One robot, classical DFS; the run must take exactly 2(n-1) rounds."""
    trace = run(tree, SingleDfs(), 1)
    expected = 2 * (tree.num_nodes - 1)
    if trace.runtime != expected:
        raise AuditError(f"single-robot DFS took {trace.runtime} rounds, expected {expected}")
    return trace


def _root_path(tree, node: int) -> List[int]:
    return tree.path_to_root(node)[::-1]


def offline_schedule(tree, k: int) -> Tuple[List[List[int]], int]:
    """Cut the Euler tour into k pieces of ceil(2(n-1)/k) edges; each robot walks out, covers, walks back.

    Returns the node walks and the makespan (longest walk in edges).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    tour = tree.euler_tour()
    length = len(tour) - 1
    piece = math.ceil(length / k) if length else 0
    walks: List[List[int]] = []
    for i in range(k):
        start = i * piece
        if piece == 0 or start >= length:
            walks.append([tree.root])
            continue
        segment = tour[start:min(start + piece, length) + 1]
        walk = _root_path(tree, segment[0]) + segment[1:]
        walk += tree.path_to_root(segment[-1])[1:]
        walks.append(walk)
    makespan = max(len(w) - 1 for w in walks)
    cap = 2 * (math.ceil((tree.num_nodes - 1) / k) + tree.depth)
    if makespan > cap:
        raise AuditError(f"offline makespan {makespan} > 2(ceil((n-1)/k) + D) = {cap}")
    logger.debug("offline schedule k=%d: makespan %d, floor %d", k, makespan, offline_floor(tree, k))
    return walks, makespan


def offline_floor(tree, k: int) -> int:
    """max{ceil(2(n-1)/k), D}: no schedule can finish sooner."""
    return max(math.ceil(2 * (tree.num_nodes - 1) / k), tree.depth)
