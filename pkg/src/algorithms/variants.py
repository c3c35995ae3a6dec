from __future__ import annotations
import logging
import math
from typing import List, Optional

from config.config import Config
from src.engine.audit import BFDN_CHECKS, EXCURSION, IDLE_ROUNDS, audit_trace
from src.engine.base import bfdn_bound, breakdown_threshold
from src.engine.masks import MobilityMask, mean_mobility
from src.engine.models import AuditReport, RunTrace
from src.engine.simulator import run
from src.world.view import EdgeStatus
from .bfdn import Bfdn
from .planner import PlannerBfdn

logger = logging.getLogger(__name__)

BREAKDOWN_COMPLETENESS = "breakdown-completeness"
CLOSED_CROSSINGS = "closed-edge-crossings"
BFS_TREE = "bfs-tree"
EXPLORED = "fully-explored"
MEMORY = "memory-budget"


class GraphBfdn(Bfdn):
    """BFDN on a graph with a distance oracle; crossings that close an edge bounce back."""

    name = "graph_bfdn"


def run_planner_bfdn(tree, k: int, strict: bool = True) -> RunTrace:
    algorithm = PlannerBfdn()
    trace = run(tree, algorithm, k)
    bound = bfdn_bound(tree, k)
    report = audit_trace(trace, tree, k, checks=[c for c in BFDN_CHECKS if c not in (EXCURSION, IDLE_ROUNDS)],
                         bound=bound)
    report.checks.append(MEMORY)
    if algorithm.peak_bits > algorithm.budget:
        report.add(MEMORY, f"peak {algorithm.peak_bits} bits > {algorithm.budget}")
    _check_explored(algorithm.view, report)
    trace.extras.update(memory_peak_bits=algorithm.peak_bits, memory_budget_bits=algorithm.budget,
                        bound=bound, audit=report)
    if strict:
        report.raise_for_violations()
    return trace


def run_with_breakdowns(tree, k: int, mask: MobilityMask, strict: bool = True) -> RunTrace:
    """BFDN over movable robots only; every edge must be known once A(M) hits the threshold."""
    threshold = breakdown_threshold(tree, k)
    hit: List[Optional[int]] = [None]

    def reached(t: int, trace: RunTrace) -> bool:
        if hit[0] is None and mean_mobility(mask, t) >= threshold:
            hit[0] = t
        return hit[0] is not None

    limit = math.ceil(Config.ROUND_LIMIT_FACTOR * k * threshold) + k
    algorithm = Bfdn()
    trace = run(tree, algorithm, k, mask=mask, round_limit=limit, stop_when_explored=True, halt=reached)
    report = AuditReport(checks=[BREAKDOWN_COMPLETENESS])
    done_at = trace.completion_round
    if done_at is None or (hit[0] is not None and done_at > hit[0]):
        report.add(BREAKDOWN_COMPLETENESS,
                   f"explored at round {done_at}, A(M) >= {threshold:.3f} first at round {hit[0]}")
    trace.extras.update(threshold=threshold, threshold_round=hit[0],
                        mean_mobility=float(mean_mobility(mask, trace.rounds_executed)), audit=report)
    if strict:
        report.raise_for_violations()
    return trace


def run_graph_bfdn(graph, k: int, strict: bool = True) -> RunTrace:
    algorithm = GraphBfdn()
    trace = run(graph, algorithm, k)
    view = algorithm.view
    bound = bfdn_bound(graph, k)
    report = audit_trace(trace, graph, k, checks=[], bound=bound)
    _check_explored(view, report)

    report.checks.append(CLOSED_CROSSINGS)
    closed = [e for e, st in enumerate(view.status) if st is EdgeStatus.CLOSED]
    for e in closed:
        if view.crossings[e] > 2:
            report.add(CLOSED_CROSSINGS, f"closed edge {e} crossed {view.crossings[e]} times")

    report.checks.append(BFS_TREE)
    kept = [e for e, st in enumerate(view.status) if st is not EdgeStatus.CLOSED]
    problems = bfs_tree_problems(graph, kept)
    for problem in problems:
        report.add(BFS_TREE, problem)

    trace.extras.update(closed_edges=closed, tree_edges=kept, bound=bound, audit=report)
    logger.info("graph run: %d closed, %d tree edges", len(closed), len(kept))
    if strict:
        report.raise_for_violations()
    return trace


def bfs_tree_problems(graph, edges: List[int]) -> List[str]:
    """Empty when ``edges`` is a spanning tree whose edges all go one level deeper."""
    problems = []
    if len(edges) != graph.num_nodes - 1:
        problems.append(f"{len(edges)} surviving edges, expected {graph.num_nodes - 1}")
    parents = [0] * graph.num_nodes
    for e in edges:
        a, b = graph.edges[e]
        da, db = graph.dist(a), graph.dist(b)
        if abs(da - db) != 1:
            problems.append(f"edge {e} joins nodes at equal distance {da}")
            continue
        parents[b if db > da else a] += 1
    for v in range(graph.num_nodes):
        want = 0 if v == graph.root else 1
        if parents[v] != want:
            problems.append(f"node {v} has {parents[v]} surviving parent edges")
    return problems


def _check_explored(view, report: AuditReport) -> None:
    report.checks.append(EXPLORED)
    if not view.fully_explored or view.n_discovered != view.world.num_nodes:
        report.add(EXPLORED, f"{view.n_dangling} dangling edges, {view.n_discovered} discovered nodes")
