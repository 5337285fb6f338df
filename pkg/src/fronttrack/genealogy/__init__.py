from .paths import (
    JumpSet,
    NodeRole,
    PathNode,
    ShockFrontPath,
    extract_maximal_fronts,
    is_tracked,
    jump_set,
    ladder_monotonicity,
    segments_at,
    shock_graph,
    terminal_drops,
    tracked_segments,
)

__all__ = [
    "JumpSet",
    "NodeRole",
    "PathNode",
    "ShockFrontPath",
    "extract_maximal_fronts",
    "is_tracked",
    "jump_set",
    "ladder_monotonicity",
    "segments_at",
    "shock_graph",
    "terminal_drops",
    "tracked_segments",
]
