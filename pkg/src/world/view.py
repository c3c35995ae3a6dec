from __future__ import annotations
import heapq
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Set, Tuple

from src.utils.utils import IllegalSelectionError, RevealError

logger = logging.getLogger(__name__)


class EdgeStatus(str, Enum):
    DANGLING = "dangling"
    TRAVERSED = "traversed"
    CLOSED = "closed"


class Arrival(str, Enum):
    REVEALED = "revealed"   # crossed a dangling edge and discovered its far end
    KNOWN = "known"         # crossed an already traversed edge
    CLOSED = "closed"       # crossed an edge that is closed after the move


class EdgeEvent(str, Enum):
    DOWN = "down"
    UP = "up"


@dataclass(slots=True)
class Traversal:
    robot: int
    edge: int
    src: int
    dst: int
    arrival: Arrival
    event: Optional[EdgeEvent] = None
    new_dangling: List[int] = field(default_factory=list)


class ExplorationView:
    """Shared partially explored world: discovered nodes, edge status, open nodes.

    Works for trees and for graphs with a distance oracle. A node is open while
    it has an incident dangling edge. Parent pointers follow traversed edges.
    """

    def __init__(self, world):
        self.world = world
        n, m = world.num_nodes, world.num_edges
        self.discovered = [False] * n
        self.depth = [-1] * n
        self.parent_edge = [-1] * n
        self.status: List[Optional[EdgeStatus]] = [None] * m
        self.dangling_end = [-1] * m
        self.crossings = [0] * m
        self.down_seen = [False] * m
        self.up_seen = [False] * m
        self.n_discovered = 0
        self.n_dangling = 0
        self.n_traversed = 0
        self.n_closed = 0
        self.edge_events = 0
        self._dangling_at = [0] * n
        self._cursor = [0] * n
        self._open_by_depth: Dict[int, Set[int]] = defaultdict(set)
        self._depth_heap: List[int] = []
        self.reveal(world.root)

    # ---- discovery ----
    def reveal(self, node: int, via: Optional[int] = None) -> List[int]:
        """Discover ``node``; its unknown incident edges become dangling."""
        if self.discovered[node]:
            return []
        if node != self.world.root:
            if via is None:
                if all(self.status[e] is None for e in self.world.incident(node)):
                    raise RevealError(f"node {node} is not adjacent to the discovered part")
            elif self.status[via] is None:
                raise RevealError(f"edge {via} into node {node} was never discovered")
        if via is not None and self.status[via] is EdgeStatus.DANGLING:
            self._leave_dangling(via, EdgeStatus.TRAVERSED)
            self.n_traversed += 1
            self.parent_edge[node] = via
        self.discovered[node] = True
        self.depth[node] = self.world.dist(node)
        self.n_discovered += 1
        fresh = []
        for e in self.world.incident(node):
            st = self.status[e]
            if st is None:
                self.status[e] = EdgeStatus.DANGLING
                self.dangling_end[e] = node
                self.n_dangling += 1
                self._inc_open(node)
                fresh.append(e)
            elif st is EdgeStatus.DANGLING:
                self._inc_open(node)
        return fresh

    def traverse(self, edge: int, src: int, robot: int = -1) -> Traversal:
        """Apply one robot crossing ``edge`` from ``src``."""
        st = self.status[edge]
        if st is None:
            raise IllegalSelectionError(f"robot {robot} crossed undiscovered edge {edge}")
        dst = self.world.other_end(edge, src)
        self.crossings[edge] += 1
        event = self._record_event(edge, src, dst)
        if st is EdgeStatus.DANGLING:
            if not self.discovered[dst] and self.world.dist(dst) == self.world.dist(src) + 1:
                fresh = self.reveal(dst, via=edge)
                return Traversal(robot, edge, src, dst, Arrival.REVEALED, event, fresh)
            self._leave_dangling(edge, EdgeStatus.CLOSED)
            self.n_closed += 1
            return Traversal(robot, edge, src, dst, Arrival.CLOSED, event)
        if st is EdgeStatus.CLOSED:
            return Traversal(robot, edge, src, dst, Arrival.CLOSED, event)
        return Traversal(robot, edge, src, dst, Arrival.KNOWN, event)

    # ---- queries ----
    @property
    def fully_explored(self) -> bool:
        return self.n_dangling == 0

    def is_open(self, node: int) -> bool:
        return self.discovered[node] and self._dangling_at[node] > 0

    def dangling_edges_at(self, node: int) -> Iterator[int]:
        """Dangling edges incident to ``node``, lowest port first."""
        ports = self.world.incident(node)
        i = self._cursor[node]
        while i < len(ports) and self.status[ports[i]] is not EdgeStatus.DANGLING:
            i += 1
        self._cursor[node] = i
        return (e for e in ports[i:] if self.status[e] is EdgeStatus.DANGLING)

    def dangling_edges_at_depth(self, d: int) -> List[Tuple[int, int]]:
        out = []
        for v in sorted(self._open_by_depth.get(d, ())):
            out.extend((v, e) for e in self.dangling_edges_at(v))
        return out

    def open_nodes(self) -> List[int]:
        return sorted(v for nodes in self._open_by_depth.values() for v in nodes)

    def min_open_depth(self) -> Optional[int]:
        heap = self._depth_heap
        while heap and not self._open_by_depth.get(heap[0]):
            heapq.heappop(heap)
        return heap[0] if heap else None

    def shallowest_open(self, within: Optional[int] = None,
                        max_depth: Optional[int] = None) -> List[int]:
        """Open nodes of minimal depth, optionally restricted to T(within) and a depth cap.

        Subtree restriction is only defined on trees.
        """
        if within is not None and not self.world.is_tree:
            raise ValueError("subtree restriction needs a tree world")
        if within is None:
            d = self.min_open_depth()
            if d is None or (max_depth is not None and d > max_depth):
                return []
            return sorted(self._open_by_depth[d])
        lo = self.depth[within]
        for d in sorted(k for k, nodes in self._open_by_depth.items() if nodes and k >= lo):
            if max_depth is not None and d > max_depth:
                break
            hits = sorted(v for v in self._open_by_depth[d] if self.world.is_ancestor(within, v))
            if hits:
                return hits
        return []

    def path_from_root(self, node: int) -> List[int]:
        """Traversed edges from the root down to ``node``."""
        path = []
        while node != self.world.root:
            e = self.parent_edge[node]
            if e < 0:
                raise IllegalSelectionError(f"node {node} has no traversed path to the root")
            path.append(e)
            node = self.world.other_end(e, node)
        path.reverse()
        return path

    def is_half_explored(self, edge: int) -> bool:
        return self.down_seen[edge] != self.up_seen[edge]

    # ---- internals ----
    def _record_event(self, edge: int, src: int, dst: int) -> Optional[EdgeEvent]:
        ds, dd = self.world.dist(src), self.world.dist(dst)
        down = dd > ds or (dd == ds and src == self.world.edges[edge][0])
        flags = self.down_seen if down else self.up_seen
        if flags[edge]:
            return None
        flags[edge] = True
        self.edge_events += 1
        return EdgeEvent.DOWN if down else EdgeEvent.UP

    def _leave_dangling(self, edge: int, new_status: EdgeStatus) -> None:
        self.status[edge] = new_status
        self.n_dangling -= 1
        for v in self.world.edges[edge]:
            if self.discovered[v]:
                self._dec_open(v)

    def _inc_open(self, node: int) -> None:
        self._dangling_at[node] += 1
        if self._dangling_at[node] == 1:
            d = self.depth[node]
            bucket = self._open_by_depth[d]
            if not bucket:
                heapq.heappush(self._depth_heap, d)
            bucket.add(node)

    def _dec_open(self, node: int) -> None:
        self._dangling_at[node] -= 1
        if self._dangling_at[node] == 0:
            self._open_by_depth[self.depth[node]].discard(node)
