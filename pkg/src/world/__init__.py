from .tree import ROOT, Tree, build_tree
from .graph import Graph
from .view import Arrival, EdgeEvent, EdgeStatus, ExplorationView, Traversal

__all__ = [
    "ROOT",
    "Tree",
    "build_tree",
    "Graph",
    "Arrival",
    "EdgeEvent",
    "EdgeStatus",
    "ExplorationView",
    "Traversal",
]
