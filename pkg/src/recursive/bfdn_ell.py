from __future__ import annotations
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import Field

from src.engine.base import ExplorationAlgorithm
from src.engine.models import AuditReport, Base, MoveKind, RoundRecord, RunTrace, STAY
from src.utils.utils import min_log
from .instances import AnchorInstance, AnchorSpec, Bfdn1Spec, DivideDepth, DivideDepthSpec
from .invariants import PARALLEL_DFS_POSITIONS, AnchorSnapshot, check_parallel_dfs_positions

logger = logging.getLogger(__name__)

SHALLOW_EFFICIENCY = "shallow-efficiency"


def bfdn1_depth_limited(k: int, d: int, k_star: Optional[int] = None) -> Bfdn1Spec:
    """BFDN₁(k*, k, d): depth-limited BFDN with k robots."""
    if d < 1:
        raise ValueError(f"depth budget must be >= 1, got {d}")
    return Bfdn1Spec(k_star=k if k_star is None else k_star, k=k, d=d)


def divide_depth(inner: AnchorSpec, n_team: int, n_iter: int, run_deep: bool = True) -> DivideDepthSpec:
    """D[inner; n_team; n_iter]: k = n_team·k', d = n_iter·d'."""
    if n_team < 1 or n_iter < 1:
        raise ValueError(f"n_team and n_iter must be >= 1, got {n_team}, {n_iter}")
    return DivideDepthSpec(k_star=inner.k_star, k=n_team * inner.k, d=n_iter * inner.d,
                           inner=inner, n_team=n_team, n_iter=n_iter, run_deep=run_deep)


def integer_root(k: int, ell: int) -> int:
    """floor(k^(1/ell)) without floating point drift."""
    s = max(1, int(round(k ** (1.0 / ell))))
    while s ** ell > k:
        s -= 1
    while (s + 1) ** ell <= k:
        s += 1
    return s


def stage_spec(ell: int, s: int, j: int) -> DivideDepthSpec:
    """Top-level algorithm of stage j: anchors reach depth 2^(j·ell)."""
    spec: AnchorSpec = bfdn1_depth_limited(s, 2 ** j)
    if ell == 1:
        return divide_depth(spec, 1, 1, run_deep=False)
    for level in range(2, ell + 1):
        spec = divide_depth(spec, s, 2 ** j, run_deep=level < ell)
    return spec


def bfdn_ell_bound(world, k: int, ell: int) -> float:
    """4n/k^(1/ell) + 2^(ell+1)·(ell + 1 + min{ln Δ, (ln k)/ell})·D^(1+1/ell)."""
    root = k ** (1 / ell)
    return (4 * world.num_nodes / root
            + 2 ** (ell + 1) * (ell + 1 + min_log(world.max_degree, root)) * world.depth ** (1 + 1 / ell))


class AnchorBasedAlgorithm(ExplorationAlgorithm):
    """Engine adapter running one anchor-based algorithm from the root with robots 0..k-1."""

    def __init__(self, spec: AnchorSpec, name: Optional[str] = None):
        super().__init__()
        self.spec = spec
        self.name = name or ("bfdn1" if isinstance(spec, Bfdn1Spec) else "divide_depth")
        self.instance: Optional[AnchorInstance] = None

    def reset(self, view, k):
        super().reset(view, k)
        if k < self.spec.k:
            raise ValueError(f"{self.name} needs {self.spec.k} robots, got {k}")
        root = view.world.root
        self.instance = self.spec.build(view, root, range(self.spec.k), log=self.reanchor_log)
        self.instance.start([root] * k, {})

    @property
    def top(self) -> AnchorInstance:
        return self.instance

    @property
    def depth_budget(self) -> int:
        return self.top.cap

    @property
    def k_star(self) -> int:
        return self.spec.k_star

    def select(self, positions, movable):
        movable_set = set(movable)
        moves = self._step(positions, movable_set)
        if not _moving(moves) and not self.finished:
            self.top.advance(positions)
            moves = self._step(positions, movable_set)
        return moves

    def _step(self, positions, movable_set) -> Dict:
        moves = self.top.step(positions, movable_set, set())
        for i in movable_set:
            moves.setdefault(i, STAY)
        return moves

    @property
    def finished(self) -> bool:
        return self.top.finished

    def observe(self, traversals, positions):
        self.top.observe(traversals, positions)

    def annotate(self, record: RoundRecord) -> None:
        record.phase = "deep" if self.top.running_deep() else "shallow"
        record.active_count = len(self.top.active)
        record.suspended = self.top.suspended

    def anchors(self):
        return self.top.anchors()

    def active(self):
        return set(self.top.active)

    def done(self, positions):
        return self.finished

    def snapshot(self, positions: Sequence[int], record: RoundRecord) -> AnchorSnapshot:
        return AnchorSnapshot(view=self.view, positions=list(positions), active=set(self.top.active),
                              anchors=self.top.anchors(), depth_budget=self.depth_budget,
                              k_star=self.k_star, round=record.round,
                              event_robots={robot for _, _, robot in record.edge_events},
                              suspended=record.suspended)


def _moving(moves) -> bool:
    return any(mv.kind is not MoveKind.STAY for mv in moves.values())


class BfdnEll(AnchorBasedAlgorithm):
    """Stages j = 1, 2, ... of the top-level divide-depth algorithm with anchors reaching depth 2^(j·ell).

    Uses K = s^ell robots, s = floor(k^(1/ell)); the others stay at the root.
    A stage ends once fewer than s robots remain active; robots still active
    carry their anchors into the next stage.
    """

    name = "bfdn_ell"

    def __init__(self, ell: int = 2):
        if ell < 1:
            raise ValueError(f"ell must be >= 1, got {ell}")
        self.ell = ell
        super().__init__(stage_spec(ell, 1, 1), name="bfdn_ell")
        self.s = 1
        self.stage = 0
        self.completed = False
        self.report = AuditReport(checks=list(PARALLEL_DFS_POSITIONS))

    def reset(self, view, k):
        ExplorationAlgorithm.reset(self, view, k)
        self.s = integer_root(k, self.ell)
        self.K = self.s ** self.ell
        if self.s == 1:
            logger.warning("bfdn_ell with ell=%d and k=%d runs a single robot (k* = 1)", self.ell, k)
        elif self.K < k:
            logger.info("bfdn_ell uses %d of %d robots (s=%d)", self.K, k, self.s)
        self.stage = 0
        self.completed = False
        self.instance = None
        self.report = AuditReport(checks=list(PARALLEL_DFS_POSITIONS))
        self._next_stage([view.world.root] * k)

    @property
    def k_star(self) -> int:
        return self.s

    def _next_stage(self, positions: Sequence[int]) -> None:
        progressed = self._progressed(positions)
        self.stage += 1
        self.spec = stage_spec(self.ell, self.s, self.stage)
        self.instance = self.spec.build(self.view, self.view.world.root, range(self.K), log=self.reanchor_log)
        self.instance.on_launch = self._validate_start
        self.instance.start(positions, progressed)
        logger.debug("bfdn_ell stage %d: depth budget %d, %d progressed robots",
                     self.stage, self.spec.d, len(progressed))

    def _progressed(self, positions) -> Dict[int, int]:
        top = self.instance
        if top is None:
            return {}
        root = self.view.world.root
        return {i: v for i, v in sorted(top.progressing(positions).items()) if top.closed_between(v, root)}

    def _validate_start(self, instance: DivideDepth, positions) -> None:
        if instance.iteration != 1:
            return
        found = check_parallel_dfs_positions(self.view, positions, instance.anchors())
        for violation in found.violations:
            violation.detail = f"stage {self.stage}: {violation.detail}"
            self.report.violations.append(violation)

    def select(self, positions, movable):
        movable_set = set(movable)
        if self.completed:
            return {i: STAY for i in movable_set}
        if self.top.finished:
            if self.view.fully_explored:
                self.completed = True
                return {i: STAY for i in movable_set}
            self._next_stage(positions)
        moves = self._step(positions, movable_set)
        if not _moving(moves) and self.top.finished and not self.view.fully_explored:
            self._next_stage(positions)
            moves = self._step(positions, movable_set)
        return moves

    @property
    def finished(self) -> bool:
        return self.completed or (self.top.finished and self.view.fully_explored)

    def active(self):
        return set() if self.completed else set(self.top.active)

    def anchors(self):
        return {} if self.completed else self.top.anchors()

    def annotate(self, record):
        super().annotate(record)
        record.stage = self.stage

    def runtime_bound(self, world, k):
        return bfdn_ell_bound(world, k, self.ell)


class StageEfficiency(Base):
    stage: int
    depth: int
    shallow_rounds: int
    shallow_events: int
    waste: float
    cap: float
    ok: bool = True


class ShallowEfficiency(Base):
    report: AuditReport
    stages: List[StageEfficiency] = Field(default_factory=list)


def shallow_efficiency_audit(trace: RunTrace, ell: int, s: int, delta: int) -> ShallowEfficiency:
    """Per stage: rounds running shallow minus their edge events / k* stays within c_ell·d^(1+1/ell)."""
    report = AuditReport(checks=[SHALLOW_EFFICIENCY])
    c_ell = min_log(delta, s) + 2 + ell - 1
    per_stage: Dict[int, List[int]] = {}
    for rec in trace.rounds:
        if rec.stage is None or rec.phase != "shallow":
            continue
        acc = per_stage.setdefault(rec.stage, [0, 0])
        acc[0] += 1
        acc[1] += len(rec.edge_events)
    stages = []
    for j in sorted(per_stage):
        rounds, events = per_stage[j]
        d = 2 ** (j * ell)
        waste = max(0.0, rounds - events / s)
        cap = c_ell * d ** (1 + 1 / ell)
        row = StageEfficiency(stage=j, depth=d, shallow_rounds=rounds, shallow_events=events,
                              waste=waste, cap=cap, ok=waste <= cap)
        if not row.ok:
            report.add(SHALLOW_EFFICIENCY, f"stage {j}: waste {waste:.2f} > {cap:.2f}")
        stages.append(row)
    return ShallowEfficiency(report=report, stages=stages)


def stage_summary(trace: RunTrace) -> List[Tuple[int, int]]:
    """(stage, rounds) in order of appearance."""
    out: List[Tuple[int, int]] = []
    for rec in trace.rounds:
        if out and out[-1][0] == rec.stage:
            out[-1] = (rec.stage, out[-1][1] + 1)
        else:
            out.append((rec.stage, 1))
    return out
