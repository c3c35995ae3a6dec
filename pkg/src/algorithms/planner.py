"""BFDN under restricted communication.

Robots talk to a central planner only while standing at the root, carry a
port stack plus a finished-ports bitmap, and below their anchor descend with
the node-local PARTITION routine. Every piece of information the algorithm
consumes goes through :class:`PlannerChannel`, which logs each access.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.engine.base import ExplorationAlgorithm
from src.engine.models import Move, STAY, UP
from src.utils.utils import IllegalSelectionError, MemoryBudgetError, PlannerError, ceil_log2

logger = logging.getLogger(__name__)

Ports = Tuple[int, ...]
PARTITION_UP = 1


def first_child_port(node: int, root: int) -> int:
    return 1 if node == root else 2


@dataclass
class RobotMemory:
    """What a robot carries. Only the two stacks and the bitmap are accounted."""
    delta: int
    bf_stack: List[int] = field(default_factory=list)
    down_stack: List[int] = field(default_factory=list)
    finished: List[bool] = field(default_factory=list)
    anchor: Optional[Ports] = None
    left: bool = False

    def __post_init__(self):
        if not self.finished:
            self.finished = [False] * self.delta

    def load(self, anchor: Ports) -> None:
        self.anchor = anchor
        self.bf_stack = list(reversed(anchor))
        self.down_stack = []
        self.finished = [False] * self.delta
        self.left = False

    @property
    def at_anchor(self) -> bool:
        return self.anchor is not None and not self.bf_stack and not self.down_stack and not self.left

    def accounted_bits(self) -> int:
        return (len(self.bf_stack) + len(self.down_stack)) * ceil_log2(self.delta) + self.delta


def memory_budget(delta: int, depth: int) -> int:
    return delta + depth * ceil_log2(delta)


@dataclass
class PlannerState:
    """Working depth d, anchors A, returned R, children A', returned children R'."""
    d: int = 0
    A: List[Ports] = field(default_factory=lambda: [()])
    R: Set[Ports] = field(default_factory=set)
    A2: List[Ports] = field(default_factory=list)
    R2: Set[Ports] = field(default_factory=set)
    anchored: Dict[int, Ports] = field(default_factory=dict)
    ever_assigned: Set[Ports] = field(default_factory=lambda: {()})
    finished: bool = False


@dataclass
class NodePartitionCounter:
    """Per-node next port to hand out, starting at the node's degree."""
    next_port: Dict[int, int] = field(default_factory=dict)

    def partition_step(self, node: int, degree: int, first_port: int) -> int:
        port = self.next_port.get(node, degree)
        if port < first_port:
            return PARTITION_UP
        self.next_port[node] = port - 1
        return port


def partition_step(counter: NodePartitionCounter, node: int, degree: int, first_port: int = 2) -> int:
    """Hand out ports from the highest down; port 1 (up) once exhausted."""
    return counter.partition_step(node, degree, first_port)


def planner_round(planner: PlannerState, returning: Sequence[Tuple[int, RobotMemory]]) -> Dict[int, Optional[Ports]]:
    """Read memories of robots at the root, update R and R', and hand out anchors."""
    for robot, mem in returning:
        anchor = mem.anchor
        if anchor is None:
            continue
        if anchor not in planner.ever_assigned:
            raise PlannerError(f"robot {robot} reports unknown anchor {anchor}")
        if anchor not in planner.A:
            continue
        planner.R.add(anchor)
        first = 1 if anchor == () else 2
        for port in range(first, mem.delta + 1):
            child = anchor + (port,)
            if mem.finished[port - 1]:
                planner.R2.add(child)
            elif child not in planner.A2:
                planner.A2.append(child)

    if all(a in planner.R for a in planner.A):
        planner.A = [c for c in planner.A2 if c not in planner.R2]
        planner.R, planner.A2, planner.R2 = set(), [], set()
        planner.d += 1
        planner.ever_assigned.update(planner.A)
        logger.debug("planner promoted to depth %d with %d anchors", planner.d, len(planner.A))

    eligible = [a for a in planner.A if a not in planner.R]
    assignments: Dict[int, Optional[Ports]] = {}
    if not eligible:
        if not planner.finished:
            logger.info("planner: exploration finished at working depth %d", planner.d)
        planner.finished = True
        for robot, _ in returning:
            planner.anchored.pop(robot, None)
            assignments[robot] = None
        return assignments

    for robot, _ in returning:
        planner.anchored.pop(robot, None)
    counts = {a: 0 for a in eligible}
    for a in planner.anchored.values():
        if a in counts:
            counts[a] += 1
    order = {a: idx for idx, a in enumerate(eligible)}
    for robot, _ in returning:
        target = min(eligible, key=lambda a: (counts[a], order[a]))
        counts[target] += 1
        planner.anchored[robot] = target
        assignments[robot] = target
    return assignments


class PlannerChannel:
    """The only window the restricted algorithm has on the world; logs every access."""

    def __init__(self, world, memories: List[RobotMemory]):
        self.world = world
        self.memories = memories
        self.returned_ports: Dict[int, Set[int]] = {}
        self.log: List[Tuple[str, int, int]] = []

    def read_memory(self, robot: int, position: int) -> RobotMemory:
        self.log.append(("read_memory", robot, position))
        if position != self.world.root:
            raise IllegalSelectionError(f"planner read robot {robot} away from the root (node {position})")
        return self.memories[robot]

    def finished_ports(self, robot: int, node: int) -> Set[int]:
        self.log.append(("finished_ports", robot, node))
        return self.returned_ports.get(node, set())

    def local_port_edge(self, robot: int, node: int, port: int) -> int:
        self.log.append(("local_port_edge", robot, node))
        edge = self.world.edge_at_port(node, port)
        if edge is None:
            raise IllegalSelectionError(f"robot {robot} selected missing port {port} at node {node}")
        return edge

    def degree(self, robot: int, node: int) -> int:
        self.log.append(("degree", robot, node))
        return len(self.world.incident(node))

    def mark_returned(self, node: int, port: int) -> None:
        self.returned_ports.setdefault(node, set()).add(port)


class PlannerBfdn(ExplorationAlgorithm):
    """BFDN driven by a root planner, port stacks and node-local PARTITION."""

    name = "planner"

    def __init__(self):
        super().__init__()
        self.planner = PlannerState()
        self.counter = NodePartitionCounter()
        self.memories: List[RobotMemory] = []
        self.channel: Optional[PlannerChannel] = None
        self.peak_bits = 0
        self.budget = 0

    def reset(self, view, k):
        super().reset(view, k)
        world = view.world
        delta = max(world.max_degree, 1)
        self.planner = PlannerState()
        self.counter = NodePartitionCounter()
        self.memories = [RobotMemory(delta) for _ in range(k)]
        self.channel = PlannerChannel(world, self.memories)
        self.budget = memory_budget(delta, world.depth)
        self.peak_bits = 0

    def select(self, positions, movable):
        root = self.view.world.root
        ch = self.channel
        returning = [(i, ch.read_memory(i, positions[i])) for i in movable if positions[i] == root]
        for robot, anchor in planner_round(self.planner, returning).items():
            if anchor is not None:
                self.memories[robot].load(anchor)
                self.reanchor_log.append((robot, self._resolve(anchor), len(anchor)))
            else:
                self.memories[robot].anchor = None
                self.memories[robot].left = True

        moves: Dict[int, Move] = {}
        for i in movable:
            mem, pos = self.memories[i], positions[i]
            if mem.bf_stack:
                moves[i] = Move.along(ch.local_port_edge(i, pos, mem.bf_stack.pop()))
                continue
            if mem.left or mem.anchor is None:
                moves[i] = STAY if pos == root else UP
                continue
            port = self.counter.partition_step(pos, ch.degree(i, pos), first_child_port(pos, root))
            if port == PARTITION_UP:
                if pos == root:
                    moves[i] = STAY
                    continue
                if mem.down_stack:
                    mem.down_stack.pop()
                else:
                    mem.left = True
                moves[i] = UP
            else:
                mem.down_stack.append(port)
                moves[i] = Move.along(ch.local_port_edge(i, pos, port))
        return moves

    def observe(self, traversals, positions):
        world = self.view.world
        for tr in traversals:
            if world.dist(tr.dst) < world.dist(tr.src):
                self.channel.mark_returned(tr.dst, world.port_of(tr.dst, tr.edge))
        for i, mem in enumerate(self.memories):
            if mem.at_anchor:
                done = self.channel.finished_ports(i, positions[i])
                deg = self.channel.degree(i, positions[i])
                mem.finished = [(p in done) or p > deg for p in range(1, mem.delta + 1)]
            bits = mem.accounted_bits()
            self.peak_bits = max(self.peak_bits, bits)
            if bits > self.budget:
                raise MemoryBudgetError(f"robot {i} holds {bits} bits > budget {self.budget}")

    def anchors(self):
        return {}

    def _resolve(self, anchor: Ports) -> int:
        # trace instrumentation only; the planner itself never sees node ids
        world = self.view.world
        node = world.root
        for port in anchor:
            node = world.other_end(world.edge_at_port(node, port), node)
        return node
