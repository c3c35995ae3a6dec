from __future__ import annotations
import math
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.utils.utils import min_log
from src.world.view import ExplorationView, Traversal
from .models import Move, RoundRecord


def bfdn_bound(world, k: int) -> float:
    """2n/k + D²(min{ln Δ, ln k} + 2); n is the edge count on graphs."""
    size = world.num_nodes if world.is_tree else world.num_edges
    return 2 * size / k + world.depth ** 2 * (min_log(world.max_degree, k) + 2)


def breakdown_threshold(world, k: int) -> float:
    """A(M) level by which every edge must be explored: 2n/k + D²(ln k + 2)."""
    return 2 * world.num_nodes / k + world.depth ** 2 * (math.log(k) + 2)


class ExplorationAlgorithm(ABC):
    """Strategy queried once per round by the engine."""

    name = "abstract"

    def __init__(self):
        self.view: Optional[ExplorationView] = None
        self.k = 0
        self.reanchor_log: List[Tuple[int, int, int]] = []

    def reset(self, view: ExplorationView, k: int) -> None:
        self.view = view
        self.k = k
        self.reanchor_log.clear()

    @abstractmethod
    def select(self, positions: Sequence[int], movable: Sequence[int]) -> Dict[int, Move]: ...

    def observe(self, traversals: List[Traversal], positions: Sequence[int]) -> None:
        """Called after the round's moves are applied."""

    def annotate(self, record: RoundRecord) -> None:
        """Attach algorithm-specific tags (phase, active count, ...) to a round."""

    def anchors(self) -> Dict[int, int]:
        return {}

    def active(self) -> Optional[Set[int]]:
        return None

    def done(self, positions: Sequence[int]) -> bool:
        root = self.view.world.root
        return self.view.fully_explored and all(p == root for p in positions)

    def runtime_bound(self, world, k: int) -> float:
        return bfdn_bound(world, k)

    def drain_reanchors(self) -> List[Tuple[int, int, int]]:
        log = list(self.reanchor_log)
        self.reanchor_log.clear()
        return log
