from __future__ import annotations
import logging
from typing import Callable, Dict

import numpy as np

from config.config import Config
from src.utils.utils import InstanceTooLargeError
from src.world.tree import Tree, build_tree

logger = logging.getLogger(__name__)


def _single_node() -> Tree:
    return build_tree([])


def gen_random_tree(n: int, seed: int = 0) -> Tree:
    """Uniform random recursive tree: node i picks its parent uniformly in {0..i-1}."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return _single_node()
    rng = np.random.default_rng(Config.seed_or(seed))
    parents = rng.integers(0, np.arange(1, n))
    return build_tree([(int(p), child) for child, p in enumerate(parents, start=1)])


def gen_spider(k: int, D: int) -> Tree:
    """k legs of length D hanging off the root; leg j holds ids j·D+1 .. j·D+D."""
    if k < 1 or D < 1:
        raise ValueError(f"spider needs k >= 1 and D >= 1, got k={k}, D={D}")
    edges = []
    for leg in range(k):
        prev = 0
        for t in range(1, D + 1):
            node = leg * D + t
            edges.append((prev, node))
            prev = node
    return build_tree(edges)


def gen_complete_tree(b: int, D: int) -> Tree:
    """Complete b-ary tree of depth D in heap order (children of i are b·i+1 .. b·i+b)."""
    if b < 1 or D < 0:
        raise ValueError(f"complete tree needs b >= 1 and D >= 0, got b={b}, D={D}")
    n = D + 1 if b == 1 else (b ** (D + 1) - 1) // (b - 1)
    if n > Config.MAX_TREE_NODES:
        raise InstanceTooLargeError(f"complete tree b={b}, D={D} has {n} nodes > {Config.MAX_TREE_NODES}")
    return build_tree([((child - 1) // b, child) for child in range(1, n)])


def gen_star(leaves: int) -> Tree:
    if leaves < 0:
        raise ValueError(f"star needs leaves >= 0, got {leaves}")
    return build_tree([(0, i) for i in range(1, leaves + 1)])


def gen_path(n: int) -> Tree:
    if n < 1:
        raise ValueError(f"path needs n >= 1, got {n}")
    return build_tree([(i - 1, i) for i in range(1, n)])


GENERATORS: Dict[str, Callable[..., Tree]] = {
    "random": gen_random_tree,
    "spider": gen_spider,
    "complete": gen_complete_tree,
    "star": gen_star,
    "path": gen_path,
}


def create_tree(name: str, **params) -> Tree:
    if name not in GENERATORS:
        raise ValueError(f"Unknown generator: {name}")
    tree = GENERATORS[name](**params)
    logger.debug("generated %s%s -> %r", name, params, tree)
    return tree
