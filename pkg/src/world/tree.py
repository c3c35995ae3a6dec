from __future__ import annotations
import logging
from collections import deque
from typing import Iterable, List, Optional, Sequence, Tuple

from src.utils.utils import TreeBuildError

logger = logging.getLogger(__name__)

ROOT = 0


class Tree:
    """Hidden rooted tree: dense node ids, root 0, port-numbered adjacency.

    Edge ids follow the order of the input edge list. ``ports[v]`` lists the
    incident edge ids of ``v`` in port order (index 0 is port 1): the parent
    edge first for non-root nodes, then child edges by ascending child id.
    """

    root = ROOT
    is_tree = True

    def __init__(self, n: int, edges: List[Tuple[int, int]], parent: List[int],
                 parent_edge: List[int], depth: List[int], ports: List[List[int]]):
        self.n = n
        self.edges = edges            # edge id -> (parent, child)
        self.parent = parent          # -1 at root
        self.parent_edge = parent_edge
        self.depth_of = depth
        self.ports = ports
        self.depth = max(depth) if depth else 0
        self.max_degree = max((len(p) for p in ports), default=0)
        self._tin, self._tout = self._euler_times()

    # ---- size parameters ----
    @property
    def num_nodes(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return self.n - 1

    # ---- world interface shared with Graph ----
    def incident(self, node: int) -> List[int]:
        return self.ports[node]

    def other_end(self, edge: int, node: int) -> int:
        u, v = self.edges[edge]
        if node == u:
            return v
        if node == v:
            return u
        raise ValueError(f"edge {edge} is not incident to node {node}")

    def dist(self, node: int) -> int:
        return self.depth_of[node]

    def port_of(self, node: int, edge: int) -> int:
        return self.ports[node].index(edge) + 1

    def edge_at_port(self, node: int, port: int) -> Optional[int]:
        ports = self.ports[node]
        return ports[port - 1] if 1 <= port <= len(ports) else None

    # ---- tree helpers ----
    def children(self, node: int) -> List[int]:
        start = 0 if node == ROOT else 1
        return [self.edges[e][1] for e in self.ports[node][start:]]

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when a lies on the path from b to the root (b included)."""
        return self._tin[a] <= self._tin[b] and self._tout[b] <= self._tout[a]

    def path_to_root(self, node: int) -> List[int]:
        path = [node]
        while node != ROOT:
            node = self.parent[node]
            path.append(node)
        return path

    def lca(self, a: int, b: int) -> int:
        while not self.is_ancestor(a, b):
            a = self.parent[a]
        return a

    def euler_tour(self) -> List[int]:
        """Closed depth-first walk from the root, children in port order."""
        tour = [ROOT]
        stack = [(ROOT, iter(self.children(ROOT)))]
        while stack:
            node, it = stack[-1]
            child = next(it, None)
            if child is None:
                stack.pop()
                if stack:
                    tour.append(stack[-1][0])
            else:
                tour.append(child)
                stack.append((child, iter(self.children(child))))
        return tour

    def edge_list(self) -> List[Tuple[int, int]]:
        return list(self.edges)

    def _euler_times(self):
        tin = [0] * self.n
        tout = [0] * self.n
        clock = 0
        stack = [(ROOT, False)]
        while stack:
            node, done = stack.pop()
            if done:
                tout[node] = clock
                clock += 1
                continue
            tin[node] = clock
            clock += 1
            stack.append((node, True))
            for child in reversed(self.children(node)):
                stack.append((child, False))
        return tin, tout

    def __repr__(self) -> str:
        return f"Tree(n={self.n}, D={self.depth}, Delta={self.max_degree})"


def build_tree(edge_list: Iterable[Sequence[int]]) -> Tree:
    """Build a rooted tree (root 0) from (parent, child) pairs.

    Orientation is recomputed by breadth-first search from node 0, so a pair
    listed as (child, parent) is accepted.
    """
    pairs = [(int(a), int(b)) for a, b in edge_list]
    n = 1 + max((max(a, b) for a, b in pairs), default=0)
    if any(a < 0 or b < 0 for a, b in pairs):
        raise TreeBuildError("node ids must be non-negative")

    seen = set()
    uf = list(range(n))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    adjacency: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for eid, (a, b) in enumerate(pairs):
        key = (min(a, b), max(a, b))
        if key in seen:
            raise TreeBuildError(f"duplicate edge {a}-{b}")
        seen.add(key)
        ra, rb = find(a), find(b)
        if ra == rb:
            raise TreeBuildError(f"cycle detected at edge {a}-{b}")
        uf[ra] = rb
        adjacency[a].append((b, eid))
        adjacency[b].append((a, eid))

    parent = [-1] * n
    parent_edge = [-1] * n
    depth = [-1] * n
    depth[ROOT] = 0
    queue = deque([ROOT])
    while queue:
        u = queue.popleft()
        for v, eid in adjacency[u]:
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                parent[v] = u
                parent_edge[v] = eid
                queue.append(v)
    missing = [v for v in range(n) if depth[v] < 0]
    if missing:
        raise TreeBuildError(f"disconnected input: {len(missing)} node(s) unreachable from 0, e.g. {missing[0]}")

    edges = [(a, b) if parent[b] == a else (b, a) for a, b in pairs]
    ports: List[List[int]] = []
    for v in range(n):
        child_edges = sorted((edges[eid][1], eid) for _, eid in adjacency[v] if edges[eid][0] == v)
        head = [] if v == ROOT else [parent_edge[v]]
        ports.append(head + [eid for _, eid in child_edges])

    tree = Tree(n, edges, parent, parent_edge, depth, ports)
    logger.debug("built %r", tree)
    return tree
