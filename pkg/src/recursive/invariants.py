from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set

from config.config import Config
from src.engine.audit import subtree_counts
from src.engine.models import AuditReport, RoundRecord
from src.world.view import ExplorationView

logger = logging.getLogger(__name__)

DFS_OPEN_COVERAGE = "dfs-open-coverage"
PARALLEL_POSITIONS = "parallel-positions"
PARTIAL_EXPLORATION = "partial-exploration"
LIMITED_ANCHOR_DEPTH = "limited-anchor-depth"
INACTIVE_DEPTH = "inactive-depth"
OPEN_NODE_COVERAGE = "open-node-coverage"
SHALLOW_ACTIVITY = "shallow-activity"
DEEP_ACTIVITY = "deep-activity"
DIVIDE_DEPTH_ANCHORS = "divide-depth-anchors"

PARALLEL_DFS_POSITIONS = (DFS_OPEN_COVERAGE, PARALLEL_POSITIONS, PARTIAL_EXPLORATION)
ANCHOR_INVARIANTS = PARALLEL_DFS_POSITIONS + (
    LIMITED_ANCHOR_DEPTH, INACTIVE_DEPTH, OPEN_NODE_COVERAGE, SHALLOW_ACTIVITY, DEEP_ACTIVITY,
)
ACTIVITY_CHECKS = (SHALLOW_ACTIVITY, DEEP_ACTIVITY)


@dataclass
class AnchorSnapshot:
    """State of an anchor-based run at the end of one round.

    ``anchors`` holds active robots only; ``depth_budget`` is the absolute
    depth d the anchors may reach; ``event_robots`` triggered an edge event
    during the round.
    """
    view: ExplorationView
    positions: Sequence[int]
    active: Set[int]
    anchors: Dict[int, int]
    depth_budget: int
    k_star: int
    round: Optional[int] = None
    event_robots: Set[int] = field(default_factory=set)
    suspended: bool = False


def check_anchor_invariants(snap: AnchorSnapshot, checks: Iterable[str] = ANCHOR_INVARIANTS) -> AuditReport:
    checks = list(checks)
    if snap.suspended:
        skipped = [c for c in checks if c in ACTIVITY_CHECKS]
        if skipped:
            logger.debug("round %s: activity checks suspended", snap.round)
        checks = [c for c in checks if c not in ACTIVITY_CHECKS]
    report = AuditReport(checks=checks)
    view, world = snap.view, snap.view.world
    depth = view.depth
    t = snap.round

    if DFS_OPEN_COVERAGE in checks or PARALLEL_POSITIONS in checks:
        robots, _ = subtree_counts(view, list(snap.positions))
        for v in view.open_nodes():
            if DFS_OPEN_COVERAGE in checks and robots[v] == 0:
                report.add(DFS_OPEN_COVERAGE, f"open node {v} lies on no robot's root path", t)
        if PARALLEL_POSITIONS in checks:
            for v in range(world.num_nodes):
                if v != world.root and view.discovered[v] and robots[v] >= 2 and view.is_open(world.parent[v]):
                    report.add(PARALLEL_POSITIONS, f"open node {world.parent[v]} above two robots", t)

    if PARTIAL_EXPLORATION in checks:
        for i, v in snap.anchors.items():
            u = snap.positions[i]
            if not world.is_ancestor(v, u):
                continue
            while u != v:
                edge = view.parent_edge[u]
                if not view.is_half_explored(edge):
                    report.add(PARTIAL_EXPLORATION, f"robot {i}: edge {edge} below anchor {v} is not half explored", t)
                    break
                u = world.parent[u]

    if LIMITED_ANCHOR_DEPTH in checks:
        for i, v in snap.anchors.items():
            if depth[v] > snap.depth_budget:
                report.add(LIMITED_ANCHOR_DEPTH, f"robot {i} anchored at depth {depth[v]} > {snap.depth_budget}", t)

    if INACTIVE_DEPTH in checks:
        for i, u in enumerate(snap.positions):
            if i not in snap.active and depth[u] > snap.depth_budget:
                report.add(INACTIVE_DEPTH, f"inactive robot {i} at depth {depth[u]} > {snap.depth_budget}", t)

    if OPEN_NODE_COVERAGE in checks:
        anchored = set(snap.anchors.values())
        covered = _covered(view, anchored)
        for v in view.open_nodes():
            if not covered[v]:
                report.add(OPEN_NODE_COVERAGE, f"open node {v} outside every active anchor subtree", t)

    shallow = any(depth[v] < snap.depth_budget or view.is_open(v) for v in snap.anchors.values())
    if SHALLOW_ACTIVITY in checks and shallow and len(snap.active) < snap.k_star:
        report.add(SHALLOW_ACTIVITY, f"{len(snap.active)} active robots < k*={snap.k_star}", t)

    if DEEP_ACTIVITY in checks and snap.anchors and not shallow:
        idle = sorted(i for i in snap.active if i not in snap.event_robots)
        if idle:
            report.add(DEEP_ACTIVITY, f"active robots {idle} triggered no edge event", t)
    return report


def check_parallel_dfs_positions(view: ExplorationView, positions: Sequence[int],
                                 anchors: Dict[int, int]) -> AuditReport:
    """Precondition for starting an anchor-based algorithm on a partially explored tree."""
    snap = AnchorSnapshot(view=view, positions=positions, active=set(anchors), anchors=anchors,
                          depth_budget=view.world.depth, k_star=0)
    return check_anchor_invariants(snap, PARALLEL_DFS_POSITIONS)


def _covered(view: ExplorationView, anchored: Set[int]) -> List[bool]:
    world = view.world
    covered = [False] * world.num_nodes
    order = sorted((v for v in range(world.num_nodes) if view.discovered[v]), key=lambda v: view.depth[v])
    for v in order:
        covered[v] = v in anchored or (v != world.root and covered[world.parent[v]])
    return covered


class AnchorInvariantObserver:
    """Evaluates the anchor invariants after every round of an anchor-based run."""

    def __init__(self, tree, max_nodes: Optional[int] = None):
        self.tree = tree
        self.enabled = tree.num_nodes <= (max_nodes or Config.CHECK_EVERY_ROUND_MAX_N)
        self.report = AuditReport(checks=list(ANCHOR_INVARIANTS))
        if not self.enabled:
            logger.info("per-round invariant checks skipped for n=%d", tree.num_nodes)

    def __call__(self, view: ExplorationView, positions: List[int], record: RoundRecord, algorithm) -> None:
        if not self.enabled:
            return
        snap = algorithm.snapshot(positions, record)
        if snap.suspended:
            self.report.suspended_rounds += 1
        found = check_anchor_invariants(snap)
        self.report.violations.extend(found.violations)


def check_divide_depth_anchors(view: ExplorationView, anchors: Dict[int, int], depth: int,
                               round: Optional[int] = None) -> AuditReport:
    """Anchors carried out of a divide-depth iteration all sit at the iteration's depth."""
    report = AuditReport(checks=[DIVIDE_DEPTH_ANCHORS])
    for i, v in sorted(anchors.items()):
        if view.depth[v] != depth:
            report.add(DIVIDE_DEPTH_ANCHORS, f"robot {i}: anchor {v} at depth {view.depth[v]}, expected {depth}", round)
    return report
