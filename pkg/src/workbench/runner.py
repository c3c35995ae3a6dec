from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import Optional

from config.config import Config
from src.algorithms.variants import run_graph_bfdn, run_planner_bfdn, run_with_breakdowns
from src.algorithms.factory import create_algorithm
from src.engine.audit import (BFDN_CHECKS, CONSERVATION, EDGE_EVENTS, REANCHORS, BfdnRoundObserver,
                              audit_trace)
from src.engine.base import bfdn_bound
from src.engine.masks import parse_mask
from src.engine.models import AuditReport, RunSummary, RunTrace
from src.engine.simulator import run
from src.recursive import (AnchorBasedAlgorithm, AnchorInvariantObserver, bfdn_ell_bound,
                           shallow_efficiency_audit)
from src.world.graph import Graph
from .baselines import offline_schedule, single_dfs

logger = logging.getLogger(__name__)

RUNNABLE = ("bfdn", "dfs", "planner", "breakdown", "graph_bfdn", "bfdn1", "bfdn_ell", "offline")


@dataclass
class RunOutcome:
    """A finished run: the trace (None for the offline schedule), its summary and its audit."""
    trace: Optional[RunTrace]
    summary: RunSummary
    report: AuditReport


def summarize(trace: RunTrace, world, bound: float, bound_ok: Optional[bool] = None,
              algorithm: Optional[str] = None) -> RunSummary:
    if bound_ok is None:
        bound_ok = trace.runtime <= math.ceil(bound) if math.isfinite(bound) else True
    return RunSummary(
        algorithm=algorithm or trace.algorithm, k=trace.k, n=world.num_nodes, m=world.num_edges, D=world.depth,
        Delta=world.max_degree, runtime=trace.runtime, edge_events=trace.edge_events,
        idle_rounds=trace.idle_rounds, bound=bound, bound_ok=bound_ok,
        reanchors=trace.reanchor_histogram(), move_counts=trace.move_counts(),
        memory_peak_bits=trace.extras.get("memory_peak_bits"),
    )


def _per_round(world) -> bool:
    return world.is_tree and world.num_nodes <= Config.CHECK_EVERY_ROUND_MAX_N


def _bfdn(world, k: int) -> RunOutcome:
    observers = [BfdnRoundObserver(world)] if _per_round(world) else []
    trace = run(world, create_algorithm("bfdn"), k, observers=observers)
    bound = bfdn_bound(world, k)
    report = audit_trace(trace, world, k, checks=BFDN_CHECKS + (REANCHORS,), bound=bound)
    for observer in observers:
        report.merge(observer.report)
    return RunOutcome(trace, summarize(trace, world, bound), report)


def _dfs(world, k: int) -> RunOutcome:
    if k != 1:
        raise ValueError(f"dfs is the single-robot baseline, got k={k}")
    trace = single_dfs(world)
    bound = 2 * (world.num_nodes - 1)
    return RunOutcome(trace, summarize(trace, world, bound), AuditReport(checks=["single-dfs-runtime"]))


def _anchor_based(world, algorithm: AnchorBasedAlgorithm, k: int, bound: float) -> RunOutcome:
    observer = AnchorInvariantObserver(world)
    trace = run(world, algorithm, k, observers=[observer])
    report = audit_trace(trace, world, k, checks=[CONSERVATION, EDGE_EVENTS], bound=bound)
    report.merge(observer.report)
    return RunOutcome(trace, summarize(trace, world, bound), report)


def _bfdn1(world, k: int, depth: Optional[int]) -> RunOutcome:
    depth = depth or world.depth or 1
    algorithm = create_algorithm("bfdn1", k=k, depth=depth)
    # with d >= D the run is plain BFDN and inherits its bound
    bound = bfdn_bound(world, k) if depth >= world.depth else math.inf
    return _anchor_based(world, algorithm, k, bound)


def _bfdn_ell(world, k: int, ell: int) -> RunOutcome:
    algorithm = create_algorithm("bfdn_ell", ell=ell)
    outcome = _anchor_based(world, algorithm, k, bfdn_ell_bound(world, k, ell))
    outcome.report.merge(algorithm.report)
    efficiency = shallow_efficiency_audit(outcome.trace, ell, algorithm.s, world.max_degree)
    outcome.report.merge(efficiency.report)
    outcome.trace.extras.update(stages=[row.model_dump() for row in efficiency.stages])
    return outcome


def _offline(world, k: int) -> RunOutcome:
    _, makespan = offline_schedule(world, k)
    bound = 2 * (math.ceil((world.num_nodes - 1) / k) + world.depth)
    summary = RunSummary(algorithm="offline", k=k, n=world.num_nodes, m=world.num_edges, D=world.depth,
                         Delta=world.max_degree, runtime=makespan, edge_events=2 * (world.num_nodes - 1),
                         idle_rounds=0, bound=bound, bound_ok=makespan <= bound)
    return RunOutcome(None, summary, AuditReport(checks=["offline-makespan"]))


def run_algorithm(world, name: str, k: int, *, ell: int = 2, depth: Optional[int] = None,
                  mask: Optional[str] = None, seed: int = 0) -> RunOutcome:
    """Run one named algorithm on a tree or graph and audit it.

    Violations end up in ``outcome.report``; nothing is raised for them here.
    """
    if not world.is_tree and name not in ("graph_bfdn",):
        raise ValueError(f"{name} runs on trees only; use graph_bfdn on graphs")

    if name == "bfdn":
        outcome = _bfdn(world, k)
    elif name == "dfs":
        outcome = _dfs(world, k)
    elif name == "planner":
        trace = run_planner_bfdn(world, k, strict=False)
        bound = trace.extras["bound"]
        outcome = RunOutcome(trace, summarize(trace, world, bound), trace.extras["audit"])
    elif name == "breakdown":
        trace = run_with_breakdowns(world, k, parse_mask(mask, k, seed=seed), strict=False)
        report = trace.extras["audit"]
        outcome = RunOutcome(trace, summarize(trace, world, trace.extras["threshold"], bound_ok=report.ok,
                                                   algorithm="breakdown"), report)
    elif name == "graph_bfdn":
        graph = world if not world.is_tree else Graph.from_tree(world)
        trace = run_graph_bfdn(graph, k, strict=False)
        outcome = RunOutcome(trace, summarize(trace, graph, trace.extras["bound"]), trace.extras["audit"])
    elif name == "bfdn1":
        outcome = _bfdn1(world, k, depth)
    elif name == "bfdn_ell":
        outcome = _bfdn_ell(world, k, ell)
    elif name == "offline":
        outcome = _offline(world, k)
    else:
        raise ValueError(f"Unknown algorithm: {name}")

    s = outcome.summary
    logger.info("%s k=%d n=%d: runtime %d, bound %.1f, %d violation(s)",
                s.algorithm, k, s.n, s.runtime, s.bound, len(outcome.report.violations))
    return outcome
