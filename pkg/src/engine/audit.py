from __future__ import annotations
import logging
import math
from collections import defaultdict
from typing import Dict, Iterable, List, Optional

from src.utils.utils import min_log
from src.world.view import ExplorationView
from .models import AuditReport, RoundRecord, RunTrace

logger = logging.getLogger(__name__)

IDLE_ROUNDS = "idle-rounds"
SINGLE_FIRST = "single-first-traversal"
EXCURSION = "excursion-length"
HOME = "return-to-root"
CONSERVATION = "conservation"
EDGE_EVENTS = "edge-events"
REANCHORS = "reanchor-count"
BOUND = "runtime-bound"
DANGLING_COVERAGE = "dangling-coverage"
HOSTING = "single-host"

BFDN_CHECKS = (IDLE_ROUNDS, SINGLE_FIRST, EXCURSION, HOME, CONSERVATION, EDGE_EVENTS)


def audit_trace(trace: RunTrace, world, k: int, checks: Iterable[str] = BFDN_CHECKS,
                bound: Optional[float] = None) -> AuditReport:
    """Re-check the BFDN guarantees on a completed run."""
    checks = list(checks)
    report = AuditReport(checks=list(checks))
    root = world.root

    if IDLE_ROUNDS in checks and trace.idle_rounds > world.depth + 1:
        report.add(IDLE_ROUNDS, f"{trace.idle_rounds} rounds with an idle robot > D+1={world.depth + 1}")

    if SINGLE_FIRST in checks:
        first_seen = set()
        for rec in trace.rounds:
            crossing: Dict[int, int] = defaultdict(int)
            for mv in rec.moves:
                if mv.edge not in first_seen:
                    crossing[mv.edge] += 1
            for edge, count in crossing.items():
                first_seen.add(edge)
                if count != 1:
                    report.add(SINGLE_FIRST, f"edge {edge} first crossed by {count} robots", rec.round)

    if EXCURSION in checks:
        _check_excursions(trace, world, report)

    if HOME in checks and any(p != root for p in trace.final_positions):
        away = [i for i, p in enumerate(trace.final_positions) if p != root]
        report.add(HOME, f"robots {away} did not return to the root")

    if CONSERVATION in checks:
        moving = [r for r in trace.rounds if r.moved]
        total = sum(len(r.moves) + len(r.idle) + len(r.blocked) for r in moving)
        if total != k * len(moving):
            report.add(CONSERVATION, f"idle+moving time {total} != k*runtime {k * len(moving)}")

    if EDGE_EVENTS in checks:
        limit = 2 * world.num_edges
        if trace.edge_events > limit:
            report.add(EDGE_EVENTS, f"{trace.edge_events} edge events > {limit}")

    if REANCHORS in checks:
        report.merge(check_reanchor_histogram(trace, k, world.max_degree, world.depth))

    if bound is not None:
        report.checks.append(BOUND)
        if trace.runtime > math.ceil(bound):
            report.add(BOUND, f"runtime {trace.runtime} > ceil({bound:.3f})")

    if report.violations:
        logger.warning("audit of %s: %d violation(s)", trace.algorithm, len(report.violations))
    return report


def check_reanchor_histogram(trace: RunTrace, k: int, delta: int, depth: int) -> AuditReport:
    report = AuditReport(checks=[REANCHORS])
    cap = k * (min_log(delta, k) + 2)
    for d, count in trace.reanchor_histogram().items():
        if 1 <= d <= depth - 1 and count > cap:
            report.add(REANCHORS, f"{count} reanchors at depth {d} > {cap:.3f}")
    return report


def _check_excursions(trace: RunTrace, world, report: AuditReport) -> None:
    """T_x - 2d = 2 * (dangling edges explored) for every complete root-to-root trip.

    d is the anchor depth, or the turning depth when a robot heads back
    before reaching an anchor that closed meanwhile.
    """
    root = world.root
    anchor_depth: Dict[int, int] = {}
    open_trips: Dict[int, List[int]] = {}   # robot -> [d, rounds, explored, deepest]
    for rec in trace.rounds:
        for robot, _, depth in rec.reanchors:
            anchor_depth[robot] = depth
        downs = {(edge, robot) for edge, kind, robot in rec.edge_events if kind == "down"}
        for mv in rec.moves:
            trip = open_trips.get(mv.robot)
            if trip is None and mv.src == root:
                trip = open_trips[mv.robot] = [anchor_depth.get(mv.robot, 0), 0, 0, 0]
            if trip is None:
                continue
            trip[1] += 1
            trip[3] = max(trip[3], world.dist(mv.dst))
            if (mv.edge, mv.robot) in downs:
                trip[2] += 1
            if mv.dst == root:
                anchor_d, rounds, explored, deepest = open_trips.pop(mv.robot)
                d = min(anchor_d, deepest)
                if rounds - 2 * d != 2 * explored:
                    report.add(EXCURSION, f"robot {mv.robot}: T_x={rounds}, d={d}, explored={explored}", rec.round)


class BfdnRoundObserver:
    """Per-round dangling-coverage and hosting checks on trees."""

    def __init__(self, tree):
        self.tree = tree
        self.report = AuditReport(checks=[DANGLING_COVERAGE, HOSTING])

    def __call__(self, view: ExplorationView, positions: List[int], record: RoundRecord, algorithm) -> None:
        anchors = set(algorithm.anchors().values())
        tree = self.tree
        for v in view.open_nodes():
            u = v
            while u not in anchors and u != tree.root:
                u = tree.parent[u]
            if u not in anchors:
                self.report.add(DANGLING_COVERAGE, f"open node {v} outside every anchor subtree", record.round)

        deepest = max((view.depth[a] for a in anchors), default=0)
        robots, open_below = subtree_counts(view, positions)
        for v in range(tree.num_nodes):
            if view.discovered[v] and view.depth[v] > deepest and open_below[v] and robots[v] != 1:
                self.report.add(HOSTING, f"node {v} at depth {view.depth[v]} hosts {robots[v]} robots", record.round)


def subtree_counts(view: ExplorationView, positions: List[int]):
    """Per discovered node: robots inside its subtree and whether an open node lies there."""
    tree = view.world
    n = tree.num_nodes
    robots = [0] * n
    open_below = [False] * n
    for p in positions:
        robots[p] += 1
    order = sorted((v for v in range(n) if view.discovered[v]), key=lambda v: -view.depth[v])
    for v in order:
        if view.is_open(v):
            open_below[v] = True
        if v != tree.root:
            par = tree.parent[v]
            robots[par] += robots[v]
            open_below[par] = open_below[par] or open_below[v]
    return robots, open_below
