from .instances import (
    AnchorInstance,
    AnchorSpec,
    Bfdn1Spec,
    DepthLimitedBfdn,
    DivideDepth,
    DivideDepthSpec,
    Rebalance,
)
from .invariants import (
    ANCHOR_INVARIANTS,
    PARALLEL_DFS_POSITIONS,
    AnchorInvariantObserver,
    AnchorSnapshot,
    check_anchor_invariants,
    check_divide_depth_anchors,
    check_parallel_dfs_positions,
)
from .bfdn_ell import (
    AnchorBasedAlgorithm,
    BfdnEll,
    ShallowEfficiency,
    StageEfficiency,
    bfdn1_depth_limited,
    divide_depth,
    integer_root,
    shallow_efficiency_audit,
    stage_spec,
    stage_summary,
    bfdn_ell_bound,
)

__all__ = [
    "AnchorInstance",
    "AnchorSpec",
    "Bfdn1Spec",
    "DepthLimitedBfdn",
    "DivideDepth",
    "DivideDepthSpec",
    "Rebalance",
    "ANCHOR_INVARIANTS",
    "PARALLEL_DFS_POSITIONS",
    "AnchorInvariantObserver",
    "AnchorSnapshot",
    "check_anchor_invariants",
    "check_divide_depth_anchors",
    "check_parallel_dfs_positions",
    "AnchorBasedAlgorithm",
    "BfdnEll",
    "ShallowEfficiency",
    "StageEfficiency",
    "bfdn1_depth_limited",
    "divide_depth",
    "integer_root",
    "shallow_efficiency_audit",
    "stage_spec",
    "stage_summary",
    "bfdn_ell_bound",
]
