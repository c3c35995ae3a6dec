from __future__ import annotations
import logging

from src.engine.base import ExplorationAlgorithm
from src.engine.models import Move, STAY, UP

logger = logging.getLogger(__name__)


class SingleDfs(ExplorationAlgorithm):
    """Classical depth-first search by one robot: lowest dangling port, else up."""

    name = "dfs"

    def reset(self, view, k):
        if k != 1:
            raise ValueError(f"single-robot DFS needs k=1, got {k}")
        super().reset(view, k)

    def select(self, positions, movable):
        moves = {}
        for i in movable:
            pos = positions[i]
            edge = next(self.view.dangling_edges_at(pos), None)
            if edge is not None:
                moves[i] = Move.along(edge)
            else:
                moves[i] = STAY if pos == self.view.world.root else UP
        return moves

    def runtime_bound(self, world, k):
        return 2 * (world.num_nodes - 1)
