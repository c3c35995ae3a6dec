from __future__ import annotations
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from config.config import Config
from src.utils.utils import GridLayoutError
from src.world.graph import Graph

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
Rect = Tuple[int, int, int, int]    # x1, y1, x2, y2, inclusive


def manhattan_distance(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


class GridGraph(Graph):
    """Grid with rectangular obstacles; free cells numbered densely in row-major order."""

    def __init__(self, width: int, height: int, cells: List[Cell], edges, dist: Dict[int, int]):
        super().__init__(len(cells), edges, origin=0, dist=dist)
        self.width = width
        self.height = height
        self.cells = cells
        self.index = {cell: i for i, cell in enumerate(cells)}

    def __repr__(self) -> str:
        return f"GridGraph({self.width}x{self.height}, free={self.num_nodes}, m={self.num_edges})"


def blocked_cells(width: int, height: int, obstacles: Iterable[Sequence[int]]) -> Set[Cell]:
    blocked = set()
    for rect in obstacles:
        x1, y1, x2, y2 = (int(v) for v in rect)
        x1, x2 = sorted((max(0, x1), min(width - 1, x2)))
        y1, y2 = sorted((max(0, y1), min(height - 1, y2)))
        blocked.update((x, y) for x in range(x1, x2 + 1) for y in range(y1, y2 + 1))
    return blocked


def layout_problem(width: int, height: int, blocked: Set[Cell]) -> Optional[str]:
    """None when the free region is connected and every BFS distance is Manhattan."""
    if (0, 0) in blocked:
        return "origin (0,0) lies inside an obstacle"
    g = nx.grid_2d_graph(width, height)
    g.remove_nodes_from(blocked)
    if not nx.is_connected(g):
        return "free region is disconnected"
    for cell, d in nx.single_source_shortest_path_length(g, (0, 0)).items():
        if d != cell[0] + cell[1]:
            return f"cell {cell} at distance {d} != Manhattan {cell[0] + cell[1]}"
    return None


def _random_rects(rng: np.random.Generator, width: int, height: int, count: int) -> List[Rect]:
    rects = []
    span_x, span_y = max(1, width // 4), max(1, height // 4)
    while len(rects) < count:
        x1, y1 = int(rng.integers(0, width)), int(rng.integers(0, height))
        x2 = min(width - 1, x1 + int(rng.integers(0, span_x)))
        y2 = min(height - 1, y1 + int(rng.integers(0, span_y)))
        if x1 == 0 and y1 == 0:
            continue
        rects.append((x1, y1, x2, y2))
    return rects


def gen_grid_with_obstacles(width: int, height: int, obstacles: Iterable[Sequence[int]] = (),
                            seed: int = 0, random_obstacles: int = 0, max_attempts: int = 50) -> GridGraph:
    """Grid graph minus obstacle cells, validated against the Manhattan distance from (0,0).

    Explicit obstacle layouts that fail validation raise GridLayoutError;
    random layouts are redrawn up to ``max_attempts`` times.
    """
    if width < 1 or height < 1:
        raise ValueError(f"grid needs positive dimensions, got {width}x{height}")
    obstacles = [tuple(r) for r in obstacles]
    blocked = blocked_cells(width, height, obstacles)
    problem = layout_problem(width, height, blocked)
    if problem:
        raise GridLayoutError(problem)

    if random_obstacles:
        rng = np.random.default_rng(Config.seed_or(seed))
        for attempt in range(1, max_attempts + 1):
            extra = blocked | blocked_cells(width, height, _random_rects(rng, width, height, random_obstacles))
            problem = layout_problem(width, height, extra)
            if problem is None:
                blocked = extra
                break
            logger.warning("grid layout attempt %d rejected: %s", attempt, problem)
        else:
            raise GridLayoutError(f"no valid layout with {random_obstacles} random obstacles "
                                  f"after {max_attempts} attempts")

    cells = [(x, y) for y in range(height) for x in range(width) if (x, y) not in blocked]
    index = {cell: i for i, cell in enumerate(cells)}
    edges = []
    for (x, y) in cells:
        for nxt in ((x + 1, y), (x, y + 1)):
            if nxt in index:
                edges.append((index[(x, y)], index[nxt]))
    dist = {index[c]: c[0] + c[1] for c in cells}
    graph = GridGraph(width, height, cells, edges, dist)
    logger.info("generated %r with %d blocked cells", graph, len(blocked))
    return graph


def parse_grid(spec: str) -> Tuple[int, int]:
    """'WxH' -> (W, H)."""
    try:
        w, h = spec.lower().split("x")
        return int(w), int(h)
    except ValueError as e:
        raise ValueError(f"grid spec must look like WxH, got {spec!r}") from e


def parse_obstacle(spec: str) -> Rect:
    """'x1,y1,x2,y2' -> rectangle."""
    parts = [int(p) for p in spec.split(",")]
    if len(parts) != 4:
        raise ValueError(f"obstacle must be x1,y1,x2,y2, got {spec!r}")
    return tuple(parts)
