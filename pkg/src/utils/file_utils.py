import logging
from pathlib import Path
from typing import Iterable, List, Tuple, Union

import orjson
import pandas as pd

from src.utils.utils import TreeBuildError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _ensure_parent(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _int_lines(path: PathLike) -> List[List[int]]:
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                rows.append([int(tok) for tok in line.split()])
    except ValueError as e:
        raise TreeBuildError(f"{path}: non-integer token ({e})") from e
    except OSError as e:
        raise TreeBuildError(f"cannot read {path}: {e}") from e
    return rows

#################################################################
# Trees: first line n, then n-1 lines "parent child"
#################################################################


def write_tree(tree, path: PathLike) -> Path:
    path = _ensure_parent(path)
    lines = [str(tree.num_nodes)] + [f"{p} {c}" for p, c in tree.edge_list()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Wrote tree n=%d to %s", tree.num_nodes, path)
    return path


def read_tree(path: PathLike):
    from src.world.tree import build_tree

    rows = _int_lines(path)
    if not rows or len(rows[0]) != 1:
        raise TreeBuildError(f"{path}: first line must hold the node count")
    n = rows[0][0]
    edges = rows[1:]
    if len(edges) != n - 1 or any(len(r) != 2 for r in edges):
        raise TreeBuildError(f"{path}: expected {n - 1} lines 'parent child', got {len(edges)}")
    tree = build_tree(edges)
    if tree.num_nodes != n:
        raise TreeBuildError(f"{path}: header says n={n}, edges span {tree.num_nodes} nodes")
    return tree

#################################################################
# Graphs: "nodes m origin", m lines "u v", optional "dist" block
#################################################################


def write_graph(graph, path: PathLike, with_dist: bool = False) -> Path:
    path = _ensure_parent(path)
    lines = [f"{graph.num_nodes} {graph.num_edges} {graph.origin}"]
    lines += [f"{u} {v}" for u, v in graph.edges]
    if with_dist:
        lines.append("dist")
        lines += [str(graph.dist(v)) for v in range(graph.num_nodes)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Wrote graph nodes=%d m=%d to %s", graph.num_nodes, graph.num_edges, path)
    return path


def read_graph(path: PathLike):
    from src.world.graph import Graph

    try:
        raw = [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines()]
    except OSError as e:
        raise TreeBuildError(f"cannot read {path}: {e}") from e
    raw = [line for line in raw if line and not line.startswith("#")]
    try:
        nodes, m, origin = (int(tok) for tok in raw[0].split())
        edges = [tuple(int(tok) for tok in line.split()) for line in raw[1:1 + m]]
        rest = raw[1 + m:]
        dist = None
        if rest:
            if rest[0] != "dist" or len(rest) != nodes + 1:
                raise TreeBuildError(f"{path}: malformed dist block")
            dist = {v: int(d) for v, d in enumerate(rest[1:])}
    except (ValueError, IndexError) as e:
        raise TreeBuildError(f"{path}: malformed graph file ({e})") from e
    if len(edges) != m or any(len(e) != 2 for e in edges):
        raise TreeBuildError(f"{path}: expected {m} edge lines")
    return Graph(nodes, edges, origin=origin, dist=dist)

#################################################################
# Traces: JSON lines, header record first
#################################################################


def write_trace(trace, path: PathLike) -> Path:
    path = _ensure_parent(path)
    with open(path, "wb") as fh:
        fh.write(orjson.dumps({"header": trace.header()}) + b"\n")
        for record in trace.rounds:
            fh.write(orjson.dumps(record.to_dict()) + b"\n")
    logger.info("Wrote %d trace records to %s", len(trace.rounds), path)
    return path


def read_trace(path: PathLike) -> Tuple[dict, list]:
    from src.engine.models import RoundRecord

    header, rounds = {}, []
    with open(path, "rb") as fh:
        for line in fh:
            if not line.strip():
                continue
            raw = orjson.loads(line)
            if "header" in raw:
                header = raw["header"]
            else:
                rounds.append(RoundRecord.from_dict(raw))
    return header, rounds


def load_trace(path: PathLike):
    """Rebuild a RunTrace from a JSONL file."""
    from src.engine.models import RunTrace

    header, rounds = read_trace(path)
    if not header:
        raise TreeBuildError(f"{path}: trace has no header record")
    return RunTrace(algorithm=header["algorithm"], k=header["k"], n=header["n"], m=header["m"],
                    depth=header["D"], max_degree=header["Delta"], is_tree=header.get("is_tree", True),
                    rounds=rounds, final_positions=list(header.get("final_positions", [])),
                    rounds_executed=header.get("rounds_executed", len(rounds)),
                    completion_round=header.get("completion_round"), halted_at=header.get("halted_at"))

#################################################################
# CSV
#################################################################


def save_rows_to_csv(rows: Iterable[dict], path: PathLike, columns: List[str]) -> Path:
    path = _ensure_parent(path)
    df = pd.DataFrame(list(rows), columns=columns)
    df.to_csv(path, index=False)
    logger.info("Saved %d rows to %s", len(df), path)
    return path


def read_mask_rows(path: PathLike, k: int) -> List[List[int]]:
    """Mask file: one line of k bits per round, e.g. ``1011`` or ``1 0 1 1``."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            bits = line.strip().replace(" ", "").replace(",", "")
            if not bits:
                continue
            if len(bits) != k or set(bits) - {"0", "1"}:
                raise ValueError(f"{path}:{lineno}: expected {k} bits, got {line.strip()!r}")
            rows.append([int(b) for b in bits])
    return rows
