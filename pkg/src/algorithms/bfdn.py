from __future__ import annotations
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.engine.base import ExplorationAlgorithm
from src.engine.models import Move, STAY, UP
from src.utils.utils import IllegalSelectionError
from src.world.view import Arrival, EdgeStatus, ExplorationView, Traversal

logger = logging.getLogger(__name__)


@dataclass
class BfdnState:
    """Anchors v_i, stacks S_i and reanchor counts for one team of robots.

    ``assigned`` is the node Reanchor returned; ``anchors`` may sit deeper
    when a depth-limited variant pushes an anchor along the robot's path.
    Stacks hold edge ids with the next edge to take at the end.
    """
    team: List[int]
    root: int
    anchors: Dict[int, int] = field(default_factory=dict)
    assigned: Dict[int, int] = field(default_factory=dict)
    stacks: Dict[int, List[int]] = field(default_factory=dict)
    reanchors: Counter = field(default_factory=Counter)
    depth_cap: Optional[int] = None
    backtrack: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def fresh(cls, team: Sequence[int], root: int, depth_cap: Optional[int] = None) -> "BfdnState":
        team = sorted(team)
        return cls(team=team, root=root, anchors={i: root for i in team},
                   assigned={i: root for i in team}, stacks={i: [] for i in team},
                   depth_cap=depth_cap)


class BfdnTeam:
    """Breadth-first depth-next rules for a team exploring T(root)."""

    def __init__(self, view: ExplorationView, state: BfdnState,
                 log: Optional[List[Tuple[int, int, int]]] = None):
        self.view = view
        self.state = state
        self.log = log if log is not None else []
        self._world_root = view.world.root

    # ---- Reanchor ----
    def candidates(self) -> List[int]:
        st = self.state
        within = None if st.root == self._world_root else st.root
        return self.view.shallowest_open(within=within, max_depth=st.depth_cap)

    def reanchor(self, i: int, load: Counter) -> int:
        """Least-loaded open node of minimal depth (smallest id on ties), else the root."""
        st = self.state
        found = self.candidates()
        v = min(found, key=lambda c: (load[c], c)) if found else st.root
        load[st.assigned[i]] -= 1
        load[v] += 1
        st.assigned[i] = v
        st.anchors[i] = v
        depth = self.view.depth[v]
        if found and depth >= 1:
            st.reanchors[depth] += 1
        self.log.append((i, v, depth))
        return v

    def load_stack(self, i: int, anchor: int) -> None:
        path = self.view.path_from_root(anchor)
        below = path[self.view.depth[self.state.root]:]
        self.state.stacks[i] = below[::-1]

    def load(self) -> Counter:
        return Counter(self.state.assigned.values())

    # ---- moves ----
    def step(self, positions: Sequence[int], movable: Sequence[int], selected: Set[int]) -> Dict[int, Move]:
        load = self.load()
        members = set(self.state.team)
        return {i: self.select_one(i, positions[i], load, selected) for i in movable if i in members}

    def select_one(self, i: int, pos: int, load: Counter, selected: Set[int]) -> Move:
        st = self.state
        if i in st.backtrack:
            return Move.along(st.backtrack[i])
        if pos == st.root:
            self.load_stack(i, self.reanchor(i, load))
        stack = st.stacks[i]
        if stack and not self.view.is_open(st.assigned[i]):
            # anchor closed before arrival: turn back
            stack.clear()
        if stack:
            return self.breadth_first(i, pos, stack)
        return self.depth_next(pos, selected)

    def breadth_first(self, i: int, pos: int, stack: List[int]) -> Move:
        edge = stack.pop()
        if edge not in self.view.world.incident(pos) or self.view.status[edge] is not EdgeStatus.TRAVERSED:
            raise IllegalSelectionError(f"stack-path inconsistency for robot {i} at node {pos} (edge {edge})")
        return Move.along(edge)

    def depth_next(self, pos: int, selected: Set[int]) -> Move:
        for edge in self.view.dangling_edges_at(pos):
            if edge not in selected:
                selected.add(edge)
                return Move.along(edge)
        return STAY if pos == self.state.root else UP

    def observe(self, traversals: List[Traversal]) -> None:
        st = self.state
        for tr in traversals:
            if tr.robot not in st.anchors:
                continue
            if st.backtrack.get(tr.robot) == tr.edge:
                del st.backtrack[tr.robot]
            elif tr.arrival is Arrival.CLOSED:
                st.backtrack[tr.robot] = tr.edge
                st.stacks[tr.robot] = []


class Bfdn(ExplorationAlgorithm):
    """Breadth-First Depth-Next with k robots sharing one view."""

    name = "bfdn"

    def __init__(self):
        super().__init__()
        self.team: Optional[BfdnTeam] = None

    def reset(self, view, k):
        super().reset(view, k)
        state = BfdnState.fresh(range(k), view.world.root)
        self.team = BfdnTeam(view, state, log=self.reanchor_log)

    @property
    def state(self) -> BfdnState:
        return self.team.state

    def select(self, positions, movable):
        return self.team.step(positions, movable, set())

    def observe(self, traversals, positions):
        self.team.observe(traversals)

    def anchors(self):
        return dict(self.team.state.anchors)


def bfdn_round(state: BfdnState, view: ExplorationView, positions: Sequence[int],
               movable: Sequence[int]) -> Dict[int, Move]:
    """One round of selections for the robots in ``movable``."""
    return BfdnTeam(view, state).step(positions, movable, set())


def reanchor(state: BfdnState, view: ExplorationView, i: int) -> int:
    """Reanchor robot i against the current anchor loads."""
    team = BfdnTeam(view, state)
    return team.reanchor(i, team.load())
