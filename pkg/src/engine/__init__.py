from .models import (
    AuditReport,
    Move,
    MoveKind,
    MoveRecord,
    RoundRecord,
    RunSummary,
    RunTrace,
    STAY,
    UP,
    Violation,
)
from .base import ExplorationAlgorithm, bfdn_bound, breakdown_threshold
from .masks import (
    AllOnes,
    BernoulliMask,
    BlockHeaviestAnchorMask,
    BlockedRobotsMask,
    MobilityMask,
    RoundRobinMask,
    RowsMask,
    mean_mobility,
    parse_mask,
)
from .simulator import default_round_limit, run
from .audit import BfdnRoundObserver, audit_trace, check_reanchor_histogram

__all__ = [
    "AuditReport",
    "Move",
    "MoveKind",
    "MoveRecord",
    "RoundRecord",
    "RunSummary",
    "RunTrace",
    "STAY",
    "UP",
    "Violation",
    "ExplorationAlgorithm",
    "bfdn_bound",
    "breakdown_threshold",
    "AllOnes",
    "BernoulliMask",
    "BlockHeaviestAnchorMask",
    "BlockedRobotsMask",
    "MobilityMask",
    "RoundRobinMask",
    "RowsMask",
    "mean_mobility",
    "parse_mask",
    "default_round_limit",
    "run",
    "BfdnRoundObserver",
    "audit_trace",
    "check_reanchor_histogram",
]
