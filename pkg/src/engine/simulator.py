from __future__ import annotations
import logging
import math
from typing import Callable, Iterable, List, Optional

from config.config import Config
from src.utils.utils import IllegalSelectionError, RoundLimitExceeded
from src.world.view import Arrival, EdgeStatus, ExplorationView
from .base import ExplorationAlgorithm
from .masks import AllOnes, MobilityMask
from .models import MoveKind, MoveRecord, RoundRecord, RunTrace, STAY

logger = logging.getLogger(__name__)

# observer(view, positions, record, algorithm) after every round
RoundObserver = Callable[[ExplorationView, List[int], RoundRecord, ExplorationAlgorithm], None]


def default_round_limit(world, k: int, algorithm: Optional[ExplorationAlgorithm] = None) -> int:
    bound = algorithm.runtime_bound(world, k) if algorithm is not None else None
    base = 2 * world.num_nodes / k + world.depth ** 2 * (math.log(k) + 2)
    return math.ceil(Config.ROUND_LIMIT_FACTOR * max(base, bound or 0.0)) + 1


def run(world, algorithm: ExplorationAlgorithm, k: int, mask: Optional[MobilityMask] = None,
        round_limit: Optional[int] = None, stop_when_explored: bool = False,
        halt: Optional[Callable[[int, RunTrace], bool]] = None,
        observers: Iterable[RoundObserver] = ()) -> RunTrace:
    """Synchronous round loop: select, check, move, reveal, record."""
    if k < 1:
        raise ValueError("k must be at least 1")
    view = ExplorationView(world)
    root = world.root
    positions = [root] * k
    mask = mask or AllOnes(k)
    observers = list(observers)
    algorithm.reset(view, k)
    limit = round_limit or default_round_limit(world, k, algorithm)
    trace = RunTrace(algorithm=algorithm.name, k=k, n=world.num_nodes, m=world.num_edges,
                     depth=world.depth, max_degree=world.max_degree, is_tree=world.is_tree)
    if view.fully_explored:
        trace.completion_round = 0
    logger.info("run start: %s k=%d world=%r limit=%d", algorithm.name, k, world, limit)

    # robot -> edge it just closed; the only closed edge it may cross next
    backtrack = {}
    t = 0
    while True:
        t += 1
        if t > limit:
            raise RoundLimitExceeded(f"{algorithm.name} did not terminate within {limit} rounds")
        bits = mask.row(t, algorithm)
        movable = [i for i in range(k) if bits[i]]
        selection = algorithm.select(positions, movable) if movable else {}
        record = RoundRecord(round=t, blocked=[i for i in range(k) if not bits[i]])
        record.reanchors = algorithm.drain_reanchors()

        planned = []
        claimed = set()
        for i in movable:
            mv = selection.get(i, STAY)
            pos = positions[i]
            if mv.kind is MoveKind.STAY:
                continue
            if mv.kind is MoveKind.UP:
                if pos == root:
                    continue
                edge = view.parent_edge[pos]
                if edge < 0:
                    raise IllegalSelectionError(f"robot {i} asked to go up from {pos} without a parent edge")
            else:
                edge = mv.edge
                if edge is None or edge not in world.incident(pos):
                    raise IllegalSelectionError(f"robot {i} at {pos} selected non-incident edge {edge}")
            st = view.status[edge]
            if st is EdgeStatus.DANGLING:
                # on graphs both endpoints of a dangling edge may be discovered
                key = edge if world.is_tree else (edge, pos)
                if key in claimed:
                    raise IllegalSelectionError(f"dangling edge {edge} selected twice in round {t}")
                claimed.add(key)
            elif st is EdgeStatus.CLOSED and backtrack.get(i) != edge:
                raise IllegalSelectionError(f"robot {i} reused closed edge {edge}")
            planned.append((i, edge))

        traversals = []
        for i, edge in planned:
            src = positions[i]
            tr = view.traverse(edge, src, robot=i)
            positions[i] = tr.dst
            traversals.append(tr)
            record.moves.append(MoveRecord(i, src, tr.dst, edge))
            record.discovered.extend(tr.new_dangling)
            if tr.event is not None:
                record.edge_events.append((edge, tr.event.value, i))
            if tr.arrival is Arrival.CLOSED and backtrack.get(i) != edge:
                backtrack[i] = edge
                if edge not in record.closed:
                    record.closed.append(edge)
            else:
                backtrack.pop(i, None)

        moved = {mv.robot for mv in record.moves}
        record.idle = [i for i in movable if i not in moved]
        algorithm.observe(traversals, positions)
        algorithm.annotate(record)

        if not record.moves and (len(movable) == k or algorithm.done(positions)):
            break
        trace.rounds.append(record)
        if trace.completion_round is None and view.fully_explored:
            trace.completion_round = t
        for observer in observers:
            observer(view, positions, record, algorithm)
        if stop_when_explored and view.fully_explored:
            break
        if halt is not None and halt(t, trace):
            trace.halted_at = t
            break

    trace.rounds_executed = t
    trace.final_positions = list(positions)
    trace.mask_rows = [list(r) for r in mask.rows[:t]]
    logger.info("run done: %s k=%d runtime=%d edge_events=%d", algorithm.name, k, trace.runtime, trace.edge_events)
    return trace
