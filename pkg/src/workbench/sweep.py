from __future__ import annotations
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import orjson
import pandas as pd
from tqdm import tqdm

from config.config import Config
from src.utils.file_utils import save_rows_to_csv
from src.utils.utils import CotexError, SweepError
from .generators import create_tree
from .grid import gen_grid_with_obstacles
from .models import EXTRA_COLUMNS, SUMMARY_COLUMNS, AlgorithmSpec, ExperimentSpec, GeneratorSpec, SummaryRow
from .runner import run_algorithm

logger = logging.getLogger(__name__)

Cell = Tuple[GeneratorSpec, AlgorithmSpec, int, int]


def load_experiment(path) -> ExperimentSpec:
    try:
        raw = orjson.loads(Path(path).read_bytes())
    except (OSError, orjson.JSONDecodeError) as e:
        raise SweepError(f"cannot load experiment {path}: {e}") from e
    return ExperimentSpec.model_validate(raw)


def build_world(generator: GeneratorSpec, k: int, seed: int):
    params = generator.resolve(k, seed)
    if generator.name == "grid":
        return gen_grid_with_obstacles(**params)
    return create_tree(generator.name, **params)


def plan_cells(spec: ExperimentSpec) -> Iterator[Cell]:
    """Cells in row order; the single-robot dfs baseline only runs at k = 1."""
    for generator in spec.generators:
        for algorithm in spec.algorithms:
            for k in spec.ks:
                if algorithm.name == "dfs" and k != 1:
                    continue
                for seed in spec.seeds:
                    yield generator, algorithm, k, seed


def run_cell(cell: Cell) -> dict:
    generator, algorithm, k, seed = cell
    try:
        world = build_world(generator, k, seed)
        outcome = run_algorithm(world, algorithm.name, k, seed=seed, **algorithm.params)
    except (CotexError, ValueError, TypeError) as e:
        raise SweepError(f"cell generator={generator.label()} algorithm={algorithm.name} "
                         f"k={k} seed={seed}: {e}") from e
    s, report = outcome.summary, outcome.report
    row = SummaryRow(
        n=s.n, D=s.D, Delta=s.Delta, k=k, algorithm=algorithm.name, seed=seed,
        runtime=s.runtime, edge_events=s.edge_events, bound=s.bound, bound_ok=s.bound_ok,
        generator=generator.label(), checks_ok=report.ok,
        violations=";".join(sorted({v.check for v in report.violations})),
        memory_peak_bits=s.memory_peak_bits,
    )
    return row.model_dump()


def sweep(spec: ExperimentSpec, output: Optional[Path] = None, workers: Optional[int] = None,
          progress: bool = True) -> Tuple[pd.DataFrame, bool]:
    """Run every cell, write one CSV row per cell in plan order.

    Returns the table and whether every row kept its bound and checks.
    """
    cells: List[Cell] = list(plan_cells(spec))
    workers = workers or spec.workers or Config.SWEEP_WORKERS
    output = Path(output or spec.output or Config.OUTPUT_DIR / "sweep.csv")
    logger.info("sweep: %d cells, %d worker(s) -> %s", len(cells), workers, output)

    bar = dict(total=len(cells), desc="sweep", disable=not progress)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(tqdm(pool.map(run_cell, cells), **bar))
    else:
        rows = [run_cell(cell) for cell in tqdm(cells, **bar)]

    save_rows_to_csv(rows, output, SUMMARY_COLUMNS + EXTRA_COLUMNS)
    df = pd.DataFrame(rows, columns=SUMMARY_COLUMNS + EXTRA_COLUMNS)
    failed = df[~(df["bound_ok"] & df["checks_ok"])] if len(df) else df
    for _, row in failed.iterrows():
        logger.warning("sweep row failed: %s k=%d n=%d (%s)", row["algorithm"], row["k"], row["n"],
                       row["violations"] or "bound")
    return df, failed.empty
