from __future__ import annotations
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from src.utils.utils import TreeBuildError

logger = logging.getLogger(__name__)


class Graph:
    """Undirected graph explored from ``origin`` with an exact distance oracle.

    Ports at a node list incident edges by ascending neighbour id (edge id
    breaks ties between parallel entries, which are rejected anyway).
    """

    is_tree = False

    def __init__(self, num_nodes: int, edges: Iterable[Sequence[int]], origin: int = 0,
                 dist: Optional[Dict[int, int]] = None):
        self.n = num_nodes
        self.edges: List[Tuple[int, int]] = [(int(a), int(b)) for a, b in edges]
        self.origin = origin
        self.root = origin

        g = self.to_networkx()
        if len(self.edges) != g.number_of_edges():
            raise TreeBuildError("duplicate edge in graph input")
        if any(a == b for a, b in self.edges):
            raise TreeBuildError("self-loop in graph input")
        if not nx.is_connected(g):
            raise TreeBuildError("disconnected graph input")
        if dist is None:
            dist = nx.single_source_shortest_path_length(g, origin)
        self._dist = [int(dist[v]) for v in range(num_nodes)]
        if self._dist[origin] != 0:
            raise TreeBuildError("dist(origin) must be 0")
        for a, b in self.edges:
            if abs(self._dist[a] - self._dist[b]) > 1:
                raise TreeBuildError(f"distance oracle inconsistent on edge {a}-{b}")

        incident: List[List[Tuple[int, int]]] = [[] for _ in range(num_nodes)]
        for eid, (a, b) in enumerate(self.edges):
            incident[a].append((b, eid))
            incident[b].append((a, eid))
        self.ports = [[eid for _, eid in sorted(lst)] for lst in incident]
        self.depth = max(self._dist)
        self.max_degree = max((len(p) for p in self.ports), default=0)

    @classmethod
    def from_tree(cls, tree) -> "Graph":
        return cls(tree.num_nodes, tree.edge_list(), origin=tree.root,
                   dist={v: tree.dist(v) for v in range(tree.num_nodes)})

    @property
    def num_nodes(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return len(self.edges)

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
        return self._dist[node]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for eid, (a, b) in enumerate(self.edges):
            g.add_edge(a, b, id=eid)
        return g

    def __repr__(self) -> str:
        return f"Graph(nodes={self.n}, m={self.num_edges}, D={self.depth}, Delta={self.max_degree})"
