"""
Maximal (eps0, eps1)-shock fronts.

Shock segments of one family with |sigma| >= eps0 form a directed graph: a segment dying at an
event links to the leftmost tracked segment leaving it, and only the leftmost tracked incoming
segment continues. In/out degrees are therefore at most one, every weakly connected component
is a chain, and a chain is kept when some segment reaches |sigma| >= eps1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import pandas as pd

from fronttrack.engine.records import INITIAL_NODE, Front, InteractionEvent, RunLog
from fronttrack.model.systems import FieldKind
from fronttrack.riemann.waves import WaveKind

logger = logging.getLogger(__name__)

TRACKED_KINDS = (WaveKind.SHOCK, WaveKind.CONTACT)


class NodeRole(str, Enum):
    INITIAL = "initial"
    TRIPLE = "triple"
    MERGE_IN = "merge_in"
    CANCEL_HIT = "cancel_hit"
    INTERIOR = "interior"
    TERMINAL = "terminal"
    OPEN_END = "open_end"


@dataclass(frozen=True)
class PathNode:
    t: float
    x: float
    role: NodeRole
    event_id: Optional[int]
    sigma_in: Optional[float]
    sigma_out: Optional[float]


@dataclass(frozen=True)
class ShockFrontPath:
    path_id: int
    family: int
    segments: Tuple[int, ...]
    strengths: Tuple[float, ...]
    speeds: Tuple[float, ...]
    nodes: Tuple[PathNode, ...]
    t_minus: float
    t_plus: float
    informational: bool = False

    @property
    def max_strength(self) -> float:
        return max(abs(s) for s in self.strengths)

    @property
    def start(self) -> PathNode:
        return self.nodes[0]

    @property
    def end(self) -> PathNode:
        return self.nodes[-1]

    @property
    def terminates(self) -> bool:
        return self.end.role is NodeRole.TERMINAL

    def event_ids(self) -> List[int]:
        return [n.event_id for n in self.nodes if n.event_id is not None and n.event_id != INITIAL_NODE]

    def to_frame(self) -> pd.DataFrame:
        """Polyline rows (path_id, family, t, x, sigma); sigma is the strength leaving the node."""
        rows = []
        for node in self.nodes:
            sigma = node.sigma_out if node.sigma_out is not None else node.sigma_in
            rows.append({"path_id": self.path_id, "family": self.family, "t": node.t, "x": node.x, "sigma": sigma, "role": node.role.value})
        return pd.DataFrame(rows, columns=["path_id", "family", "t", "x", "sigma", "role"])


@dataclass(frozen=True)
class JumpSet:
    family: int
    eps0: float
    eps1: float
    paths: Tuple[ShockFrontPath, ...]
    segments: FrozenSet[int]

    def __contains__(self, front_id: int) -> bool:
        return front_id in self.segments

    def __len__(self) -> int:
        return len(self.segments)

    def issuperset(self, other: "JumpSet") -> bool:
        return self.segments >= other.segments

    def to_frame(self) -> pd.DataFrame:
        frames = [p.to_frame() for p in self.paths]
        if not frames:
            return pd.DataFrame(columns=["path_id", "family", "t", "x", "sigma", "role"])
        return pd.concat(frames, ignore_index=True)


def is_tracked(front: Front, family: int, eps0: float) -> bool:
    return front.is_physical and front.family == family and front.kind in TRACKED_KINDS and abs(front.strength) >= eps0


def tracked_segments(log: RunLog, family: int, eps0: float) -> List[int]:
    return sorted(fid for fid, f in log.fronts.items() if is_tracked(f, family, eps0))


def shock_graph(log: RunLog, family: int, eps0: float) -> nx.DiGraph:
    """Continuation graph of the i-shock segments above eps0."""
    graph = nx.DiGraph()
    tracked = set(tracked_segments(log, family, eps0))
    graph.add_nodes_from(sorted(tracked))
    for event in log.events:
        ins = [fid for fid in event.incoming if fid in tracked]
        outs = [fid for fid in event.outgoing if fid in tracked]
        if ins and outs:
            # leftmost incoming continues into the leftmost outgoing
            graph.add_edge(ins[0], outs[0], event=event.id)
    return graph


def _start_node(first: Front) -> PathNode:
    event_id = INITIAL_NODE if first.parent_event is None else first.parent_event
    return PathNode(first.birth_t, first.birth_x, NodeRole.INITIAL, event_id, None, first.strength)


def _interior_role(log: RunLog, event: InteractionEvent, tracked: set, seg_in: Front, family: int) -> NodeRole:
    if sum(1 for fid in event.incoming if fid in tracked) == 2:
        return NodeRole.TRIPLE
    for fid in event.incoming:
        other = log.fronts[fid]
        if fid != seg_in.id and other.is_physical and other.family == family and other.strength * seg_in.strength < 0.0:
            return NodeRole.CANCEL_HIT
    return NodeRole.INTERIOR


def _end_node(log: RunLog, last: Front, tracked: set) -> PathNode:
    if last.child_event is None:
        t = log.horizon
        return PathNode(t, last.position(t), NodeRole.OPEN_END, None, last.strength, None)
    event = log.events[last.child_event]
    ins = [fid for fid in event.incoming if fid in tracked]
    outs = [fid for fid in event.outgoing if fid in tracked]
    role = NodeRole.MERGE_IN if (outs and ins and ins[0] != last.id) else NodeRole.TERMINAL
    return PathNode(event.time, event.position, role, event.id, last.strength, None)


def _chain(graph: nx.DiGraph, component) -> List[int]:
    return list(nx.topological_sort(graph.subgraph(component)))


def extract_maximal_fronts(log: RunLog, family: int, eps0: float, eps1: float) -> List[ShockFrontPath]:
    """Maximal shock fronts of one family, ordered left to right by their starting point."""
    if not 0.0 < eps0 < eps1:
        raise ValueError("thresholds must satisfy 0 < eps0 < eps1")
    graph = shock_graph(log, family, eps0)
    tracked = set(graph.nodes)
    informational = log.model.field_kind(family) is FieldKind.LINEARLY_DEGENERATE

    raw: List[ShockFrontPath] = []
    for component in nx.weakly_connected_components(graph):
        chain = _chain(graph, component)
        segs = [log.fronts[fid] for fid in chain]
        if max(abs(s.strength) for s in segs) < eps1:
            continue

        nodes = [_start_node(segs[0])]
        for prev, nxt in zip(segs[:-1], segs[1:]):
            event = log.events[prev.child_event]
            role = _interior_role(log, event, tracked, prev, family)
            nodes.append(PathNode(event.time, event.position, role, event.id, prev.strength, nxt.strength))
        nodes.append(_end_node(log, segs[-1], tracked))

        raw.append(
            ShockFrontPath(
                path_id=-1,
                family=family,
                segments=tuple(chain),
                strengths=tuple(s.strength for s in segs),
                speeds=tuple(s.speed for s in segs),
                nodes=tuple(nodes),
                t_minus=nodes[0].t,
                t_plus=nodes[-1].t,
                informational=informational,
            )
        )

    raw.sort(key=lambda p: (p.start.x, p.start.t, p.segments[0]))
    paths = [replace(p, path_id=k) for k, p in enumerate(raw)]
    logger.debug("family %d, (%g, %g): %d maximal fronts from %d segments", family, eps0, eps1, len(paths), len(tracked))
    return paths


def jump_set(log: RunLog, family: int, eps0: float, eps1: float) -> JumpSet:
    paths = extract_maximal_fronts(log, family, eps0, eps1)
    segments = frozenset(fid for p in paths for fid in p.segments)
    return JumpSet(family=family, eps0=eps0, eps1=eps1, paths=tuple(paths), segments=segments)


def terminal_drops(log: RunLog, jumps: JumpSet) -> Dict[int, float]:
    """
    Strength of the family left behind at each terminal point, keyed by event id.

    Zero when the shock disappears entirely.
    """
    out: Dict[int, float] = {}
    for path in jumps.paths:
        if not path.terminates:
            continue
        event = log.events[path.end.event_id]
        out[event.id] = event.outgoing_total(jumps.family)
    return out


def ladder_monotonicity(log: RunLog, family: int, ladder: Sequence[Tuple[float, float]]) -> List[Tuple[int, List[int]]]:
    """
    Segments lost when moving down the threshold ladder; an empty list means every jump set
    contains the previous one.
    """
    sets = [jump_set(log, family, e0, e1) for e0, e1 in ladder]
    lost: List[Tuple[int, List[int]]] = []
    for k, (coarse, fine) in enumerate(zip(sets[:-1], sets[1:]), start=1):
        missing = sorted(coarse.segments - fine.segments)
        if missing:
            lost.append((k, missing))
    return lost


def segments_at(log: RunLog, jumps: JumpSet, t: float) -> List[Front]:
    return [log.fronts[fid] for fid in sorted(jumps.segments) if log.fronts[fid].alive_at(t)]

