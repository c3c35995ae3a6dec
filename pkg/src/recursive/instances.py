"""Anchor-based exploration instances.

An instance runs on the subtree T(root) with a fixed team of robots. It keeps
robots active or inactive, assigns anchors to active ones, and can be started
from a partially explored tree where some robots already progressed inside
T(root). Instances compose: :class:`DivideDepth` drives parallel inner
instances on disjoint subtrees.
"""
from __future__ import annotations
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from src.algorithms.bfdn import BfdnState, BfdnTeam
from src.engine.models import Move, MoveKind, STAY, UP
from src.utils.utils import AuditError
from src.world.view import ExplorationView
from .invariants import check_divide_depth_anchors

logger = logging.getLogger(__name__)

ReanchorLog = List[Tuple[int, int, int]]


class AnchorInstance(ABC):
    """One anchor-based algorithm running on T(root) with a team."""

    def __init__(self, view: ExplorationView, root: int, team: Sequence[int], k_star: int, depth: int):
        self.view = view
        self.world = view.world
        self.root = root
        self.team = sorted(team)
        self.k_star = k_star
        self.cap = view.depth[root] + depth

    @abstractmethod
    def start(self, positions: Sequence[int], progressed: Dict[int, int]) -> None: ...

    @abstractmethod
    def step(self, positions: Sequence[int], movable: Set[int], selected: Set[int]) -> Dict[int, Move]: ...

    def observe(self, traversals, positions: Sequence[int]) -> None:
        """Post-round hook; ``positions`` are the robots' positions after the moves."""

    def advance(self, positions: Sequence[int]) -> None:
        """Re-evaluate loop conditions after a round."""

    @property
    @abstractmethod
    def active(self) -> Set[int]: ...

    @abstractmethod
    def anchors(self) -> Dict[int, int]: ...

    @property
    def suspended(self) -> bool:
        return False

    @property
    def finished(self) -> bool:
        return not self.active

    def running_deep(self) -> bool:
        anchors = self.anchors()
        return bool(anchors) and all(
            self.view.depth[v] == self.cap and not self.view.is_open(v) for v in anchors.values()
        )

    def progressing(self, positions: Sequence[int]) -> Dict[int, int]:
        """Active robots standing inside their anchor's subtree, with that anchor."""
        return {i: v for i, v in self.anchors().items()
                if positions[i] != self.root and self.world.is_ancestor(v, positions[i])}

    # ---- shared tree helpers ----
    def closed_between(self, node: int, top: int) -> bool:
        """All nodes strictly above ``node`` up to ``top`` (inclusive) are closed."""
        while node != top:
            node = self.world.parent[node]
            if self.view.is_open(node):
                return False
        return True


def step_toward(view: ExplorationView, pos: int, target: int) -> Move:
    """Next move on the tree path from ``pos`` to ``target``."""
    world = view.world
    if pos == target:
        return STAY
    if not world.is_ancestor(pos, target):
        return UP
    child = target
    while world.parent[child] != pos:
        child = world.parent[child]
    return Move.along(view.parent_edge[child])


def path_length(view: ExplorationView, pos: int, target: int) -> int:
    lca = view.world.lca(pos, target)
    return view.depth[pos] + view.depth[target] - 2 * view.depth[lca]


class DepthLimitedBfdn(AnchorInstance):
    """BFDN whose Reanchor only considers open nodes at relative depth <= d.

    Anchors are pushed down along the robot's path once nothing shallower is
    open. With open nodes left only below the cap, robots within the cap turn
    inactive where they stand. Once T(root) is fully explored, robots on the
    whole tree walk back to the root under the usual rules and turn inactive
    there; on a subtree they stop at the cap like in the deep case.
    """

    def __init__(self, view, root, team, k_star, depth, log: Optional[ReanchorLog] = None):
        super().__init__(view, root, team, k_star, depth)
        state = BfdnState.fresh(self.team, root, depth_cap=self.cap)
        self.core = BfdnTeam(view, state, log=log)
        self._active: Set[int] = set(self.team)
        self._homing = False
        self._homes = root == view.world.root
        self._within = None if self._homes else root

    @property
    def state(self) -> BfdnState:
        return self.core.state

    def start(self, positions, progressed):
        st = self.state
        for i, anchor in progressed.items():
            if i in st.anchors and positions[i] != self.root and self._valid_anchor(anchor, positions[i]):
                st.anchors[i] = st.assigned[i] = anchor

    def _valid_anchor(self, anchor: int, pos: int) -> bool:
        w = self.world
        return (w.is_ancestor(self.root, anchor) and w.is_ancestor(anchor, pos)
                and self.closed_between(anchor, self.root))

    @property
    def active(self):
        return self._active

    def anchors(self):
        return {i: self.state.anchors[i] for i in self._active}

    @property
    def suspended(self) -> bool:
        return self._homing

    def step(self, positions, movable, selected):
        st, view = self.state, self.view
        open_all = view.shallowest_open(within=self._within)
        min_open = view.depth[open_all[0]] if open_all else math.inf
        shallow_open = min_open <= self.cap
        self._homing = not open_all and bool(self._active)
        load = self.core.load()
        moves: Dict[int, Move] = {}
        for i in self.team:
            if i not in movable:
                continue
            if i not in self._active:
                moves[i] = STAY
                continue
            pos = positions[i]
            at_root = pos == self.root
            if open_all or not self._homes:
                done = not shallow_open and view.depth[pos] <= self.cap
            else:
                done = at_root
            if done:
                self._deactivate(i, load)
                moves[i] = STAY
                continue
            if not at_root and not st.stacks[i]:
                self._push_anchor(i, pos, min_open)
            moves[i] = self.core.select_one(i, pos, load, selected)
        return moves

    def _deactivate(self, i: int, load) -> None:
        st = self.state
        self._active.discard(i)
        st.stacks[i] = []
        load[st.assigned[i]] -= 1
        load[self.root] += 1
        st.assigned[i] = st.anchors[i] = self.root

    def _push_anchor(self, i: int, pos: int, min_open: float) -> None:
        st, depth = self.state, self.view.depth
        v = st.anchors[i]
        if v == pos or not self.world.is_ancestor(v, pos):
            return
        path = self.world.path_to_root(pos)     # path[x] sits at depth depth[pos] - x
        while min_open > depth[v] and depth[v] < self.cap and v != pos:
            v = path[depth[pos] - depth[v] - 1]
        st.anchors[i] = v

    def observe(self, traversals, positions):
        self.core.observe(traversals)
        open_all = self.view.shallowest_open(within=self._within)
        min_open = self.view.depth[open_all[0]] if open_all else math.inf
        if min_open <= self.cap or (not open_all and self._homes):
            return
        # nothing left within the cap: robots there are done
        load = self.core.load()
        for i in sorted(self._active):
            pos = positions[i]
            if self.view.depth[pos] <= self.cap:
                self._deactivate(i, load)
            elif not self.state.stacks[i]:
                self._push_anchor(i, pos, min_open)


class Rebalance:
    """Walks robots to target nodes along tree paths, one edge per round.

    ``arrived`` holds the robots standing on their target after the last step.
    """

    def __init__(self, view: ExplorationView, targets: Dict[int, int], positions: Sequence[int]):
        self.view = view
        self.targets = targets
        self.rounds_left = max((path_length(view, positions[i], t) for i, t in targets.items()), default=0)
        self.arrived: Set[int] = {i for i, t in targets.items() if positions[i] == t}

    @property
    def done(self) -> bool:
        return self.rounds_left <= 0

    def step(self, positions, movable) -> Dict[int, Move]:
        self.rounds_left -= 1
        world = self.view.world
        moves = {}
        for i, t in self.targets.items():
            if i not in movable:
                continue
            pos = positions[i]
            mv = moves[i] = step_toward(self.view, pos, t)
            if mv.kind is MoveKind.UP:
                pos = world.parent[pos]
            elif mv.kind is MoveKind.EDGE:
                pos = world.other_end(mv.edge, pos)
            if pos == t:
                self.arrived.add(i)
        return moves


@dataclass
class AnchorSpec(ABC):
    """Parameters (k*, k, d) of an anchor-based algorithm and a way to instantiate it."""
    k_star: int
    k: int
    d: int

    @abstractmethod
    def build(self, view, root: int, team: Sequence[int], log: Optional[ReanchorLog] = None) -> AnchorInstance: ...


@dataclass
class Bfdn1Spec(AnchorSpec):
    def build(self, view, root, team, log=None):
        return DepthLimitedBfdn(view, root, team, self.k_star, self.d, log=log)


@dataclass
class DivideDepthSpec(AnchorSpec):
    inner: AnchorSpec = None
    n_team: int = 1
    n_iter: int = 1
    run_deep: bool = True

    def build(self, view, root, team, log=None):
        return DivideDepth(view, root, team, self, log=log)


class DivideDepth(AnchorInstance):
    """n_iter iterations of parallel inner instances, each pushing anchors d' deeper."""

    def __init__(self, view, root, team, spec: DivideDepthSpec, log: Optional[ReanchorLog] = None):
        super().__init__(view, root, team, spec.k_star, spec.d)
        self.spec = spec
        self.log = log
        self.k_inner = spec.inner.k
        self.iteration = 0
        self.R: List[int] = [root]
        self.A: Set[int] = set()
        self.v: Dict[int, int] = {i: root for i in self.team}
        self.prior: Dict[int, int] = {}
        self.instances: Dict[int, AnchorInstance] = {}
        self.teams: Dict[int, List[int]] = {}
        self.unassigned: Set[int] = set()
        self.window: Optional[Rebalance] = None
        self.pending = True
        self.deep = False
        self.interrupted = False
        self.transition = False
        self.window_round = False
        self.on_launch: Optional[Callable[["DivideDepth", Sequence[int]], None]] = None

    def start(self, positions, progressed):
        self.A = {i for i in self.team if i in progressed and positions[i] != self.root}
        self.prior = {i: progressed[i] for i in self.A}

    # ---- state ----
    @property
    def active(self):
        if self.window is not None:
            return {i for i in self.team if i not in self.unassigned}
        if self.instances:
            return set().union(*(inst.active for inst in self.instances.values()))
        return set()

    def anchors(self):
        if self.window is not None:
            # robots still walking to their subtree root carry no anchor yet
            walking = set(self.window.targets) - self.window.arrived
            return {i: self.prior.get(i, self.v[i]) for i in self.team
                    if i not in self.unassigned and i not in walking}
        out = {}
        for inst in self.instances.values():
            out.update(inst.anchors())
        return out

    @property
    def suspended(self) -> bool:
        return self.window_round or self.transition or any(inst.suspended for inst in self.instances.values())

    @property
    def finished(self) -> bool:
        if self.interrupted:
            return True
        if self.pending:
            return self.iteration > 0 and not self.R
        return self.window is None and not self.active

    # ---- iterations ----
    def _begin_iteration(self, positions) -> None:
        self.iteration += 1
        self.pending = False
        if len(self.R) > self.spec.n_team:
            raise AuditError(f"{len(self.R)} subtree roots exceed n_team={self.spec.n_team}")
        teams = {r: sorted(i for i in self.A if self.v[i] == r) for r in sorted(self.R)}
        for r, members in teams.items():
            if len(members) > self.k_inner:
                raise AuditError(f"{len(members)} robots progressed in T({r}) exceed k'={self.k_inner}")
        fresh = sorted(set(self.team) - self.A)
        targets = {}
        for r in sorted(self.R):
            need = self.k_inner - len(teams[r])
            for i in fresh[:need]:
                teams[r].append(i)
                targets[i] = r
                self.v[i] = r
            fresh = fresh[need:]
        self.unassigned = set(fresh)
        self.teams = {r: sorted(m) for r, m in teams.items()}
        self.instances = {}
        self.window = Rebalance(self.view, targets, positions)
        logger.debug("divide-depth root=%d iteration %d: %d teams, window %d rounds",
                     self.root, self.iteration, len(self.teams), self.window.rounds_left)
        if self.window.done:
            self._launch(positions)

    def _launch(self, positions) -> None:
        self.window = None
        for r, members in self.teams.items():
            inst = self.spec.inner.build(self.view, r, members, log=self.log)
            progressed = {i: self.prior.get(i, self.v[i]) for i in members if i in self.A}
            inst.start(positions, progressed)
            self.instances[r] = inst
        if self.on_launch is not None:
            self.on_launch(self, positions)

    def step(self, positions, movable, selected):
        self.transition = False
        self.window_round = False
        if self.interrupted:
            return {i: STAY for i in self.team if i in movable}
        if self.pending:
            if self.iteration > 0 and not self.R:
                return {i: STAY for i in self.team if i in movable}
            self._begin_iteration(positions)
        if self.window is not None and self.window.done:
            self._launch(positions)
        moves = {i: STAY for i in self.team if i in movable}
        if self.window is not None:
            self.window_round = True
            moves.update(self.window.step(positions, movable))
            return moves
        for r in sorted(self.instances):
            moves.update(self.instances[r].step(positions, movable, selected))
        return moves

    def observe(self, traversals, positions):
        for inst in self.instances.values():
            inst.observe(traversals, positions)
        self._end_iteration(positions)

    def advance(self, positions):
        for inst in self.instances.values():
            inst.advance(positions)
        self._end_iteration(positions)

    def _end_iteration(self, positions) -> None:
        """Close the iteration once fewer than k* robots are active; the next one starts at once."""
        if self.pending or self.interrupted or self.deep or self.window is not None or not self.instances:
            return
        active = self.active
        if len(active) >= self.k_star:
            return
        carried = self.progressing(positions)
        if len(carried) < len(active):
            # robots outside a subtree with open nodes are still on their way back
            return
        depth = self.view.depth[self.root] + self.iteration * self.spec.inner.d
        report = check_divide_depth_anchors(self.view, carried, depth)
        if not report.ok:
            raise AuditError(f"divide-depth root={self.root} iteration {self.iteration}: "
                             f"{report.violations[0].detail}")
        self.A = set(carried)
        self.v.update(carried)
        self.prior = {}
        self.R = sorted(set(carried.values()))
        logger.debug("divide-depth root=%d iteration %d ends: %d carried, %d roots",
                     self.root, self.iteration, len(self.A), len(self.R))
        if self.iteration < self.spec.n_iter:
            self.transition = True
            if self.R:
                self._begin_iteration(positions)
            else:
                self.pending = True
        elif self.spec.run_deep:
            self.deep = True
        else:
            self.interrupted = True
            self.transition = True
