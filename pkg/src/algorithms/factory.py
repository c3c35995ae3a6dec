from __future__ import annotations
import logging
from typing import Optional

from src.engine.base import ExplorationAlgorithm
from .bfdn import Bfdn
from .dfs import SingleDfs
from .planner import PlannerBfdn
from .variants import GraphBfdn

logger = logging.getLogger(__name__)

ALGORITHMS = ("bfdn", "dfs", "planner", "graph_bfdn", "bfdn1", "bfdn_ell")


def _recursive(name: str, k: Optional[int], depth: Optional[int], ell: int) -> ExplorationAlgorithm:
    """
    Anchor-based algorithms live in src.recursive, which builds on the BFDN team rules.
    """
    from src.recursive import AnchorBasedAlgorithm, BfdnEll, bfdn1_depth_limited

    if name == "bfdn_ell":
        return BfdnEll(ell=ell)
    if k is None or depth is None:
        raise ValueError("bfdn1 needs both k and a depth budget")
    return AnchorBasedAlgorithm(bfdn1_depth_limited(k, depth), name="bfdn1")


def create_algorithm(name: str, k: Optional[int] = None, depth: Optional[int] = None,
                     ell: int = 2) -> ExplorationAlgorithm:
    if name == "bfdn":
        return Bfdn()
    elif name == "dfs":
        return SingleDfs()
    elif name == "planner":
        return PlannerBfdn()
    elif name == "graph_bfdn":
        return GraphBfdn()
    elif name in ("bfdn1", "bfdn_ell"):
        return _recursive(name, k, depth, ell)
    else:
        raise ValueError(f"Unknown algorithm: {name}")
