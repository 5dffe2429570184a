"""Fixed points, quantum histories, stack states, and fixed-point networks.

A fixed point pins equal forward and backward temporal parts to one state
at one time; a history is a strictly increasing sequence of at least two
of them. The network view expands each time layer into a complete basis
of candidate fixed points and connects adjacent layers with one forward
and one backward line per node pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .contour import Branch
from .errors import (
    DimensionMismatch,
    NonMonotoneTimes,
    NotNormalized,
    TooFewPoints,
    ValidationError,
)
from .statespace import Basis, StateVector, tensor


@dataclass(frozen=True)
class FixedPoint:
    t: float
    state: StateVector


@dataclass(frozen=True)
class QuantumHistory:
    points: tuple[FixedPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        if len(pts) < 2:
            raise TooFewPoints("a history needs at least two fixed points")
        if any(a.t >= b.t for a, b in zip(pts, pts[1:])):
            raise NonMonotoneTimes("history times must be strictly increasing")
        dim = pts[0].state.dim
        if any(p.state.dim != dim for p in pts):
            raise DimensionMismatch("history states have differing dimensions")
        for p in pts:
            if not p.state.is_normalized():
                raise NotNormalized(f"fixed point at t={p.t} has norm {p.state.norm}")
        object.__setattr__(self, "points", pts)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points[0].state.dim

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(p.t for p in self.points)


def make_history(points: Sequence[FixedPoint]) -> QuantumHistory:
    return QuantumHistory(tuple(points))


@dataclass(frozen=True)
class StackPart:
    branch: Branch
    t: float
    state: StateVector


@dataclass(frozen=True)
class UniversalStack:
    """Tagged temporal parts, latest time outermost, backward before forward
    at each time. Kept as a part list; the full tensor is available on
    demand because it grows as dim**(2 n)."""

    parts: tuple[StackPart, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts or len(parts) % 2 != 0:
            raise ValidationError("stack needs an even, positive number of parts")
        pairs = [(parts[i], parts[i + 1]) for i in range(0, len(parts), 2)]
        for back, fwd in pairs:
            if back.branch is not Branch.BACKWARD or fwd.branch is not Branch.FORWARD:
                raise ValidationError("each time must carry a (backward, forward) pair")
            if back.t != fwd.t:
                raise ValidationError("paired parts must share one time")
        times = [back.t for back, _ in pairs]
        if any(a <= b for a, b in zip(times, times[1:])):
            raise NonMonotoneTimes("stack times must strictly decrease outward-in")
        for part in parts:
            if not part.state.is_normalized():
                raise NotNormalized(f"stack part at t={part.t} is not unit norm")
        object.__setattr__(self, "parts", parts)

    def as_tensor(self) -> StateVector:
        return tensor([p.state for p in self.parts])

    def forward_parts(self) -> tuple[StackPart, ...]:
        """Forward-tagged parts in increasing time order."""
        return tuple(p for p in reversed(self.parts) if p.branch is Branch.FORWARD)


def stack_state(history: QuantumHistory) -> UniversalStack:
    """Expand a history into its 2 n_points tagged temporal parts; both parts
    at each time equal that fixed point's state."""
    parts: list[StackPart] = []
    for point in reversed(history.points):
        parts.append(StackPart(Branch.BACKWARD, point.t, point.state))
        parts.append(StackPart(Branch.FORWARD, point.t, point.state))
    return UniversalStack(tuple(parts))


@dataclass(frozen=True)
class NetworkLayer:
    t: float
    nodes: Basis

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class NetworkEdge:
    """Directed branch line; source and target are (layer, node) index pairs."""

    branch: Branch
    source: tuple[int, int]
    target: tuple[int, int]


@dataclass(frozen=True)
class FixedPointNetwork:
    layers: tuple[NetworkLayer, ...]
    edges: tuple[NetworkEdge, ...]

    def edges_between(self, i: int) -> tuple[NetworkEdge, ...]:
        """All branch lines between layers i and i+1."""
        pair = {i, i + 1}
        return tuple(e for e in self.edges if {e.source[0], e.target[0]} == pair)

    def channels_between(self, i: int) -> tuple[tuple[int, int], ...]:
        """Two-way channels (node pairs) between layers i and i+1."""
        seen: dict[tuple[int, int], None] = {}
        for e in self.edges_between(i):
            a, b = sorted((e.source, e.target))
            seen[(a[1], b[1])] = None
        return tuple(seen)

    def out_degree(self, layer: int, node: int) -> int:
        return sum(1 for e in self.edges if e.source == (layer, node))

    def in_degree(self, layer: int, node: int) -> int:
        return sum(1 for e in self.edges if e.target == (layer, node))


def build_network(times: Sequence[float], bases: Sequence[Basis]) -> FixedPointNetwork:
    """Full bipartite forward/backward line sets between adjacent layers:
    one forward line earlier-to-later and one backward line later-to-earlier
    per node pair, 2*N1*N2 lines in total per adjacent pair."""
    ts = [float(t) for t in times]
    if len(ts) != len(bases):
        raise ValidationError(f"{len(ts)} times but {len(bases)} layer bases")
    if len(ts) < 2:
        raise TooFewPoints("a network needs at least two layers")
    if any(a >= b for a, b in zip(ts, ts[1:])):
        raise NonMonotoneTimes("layer times must be strictly increasing")
    layers = tuple(NetworkLayer(t, basis) for t, basis in zip(ts, bases))
    edges: list[NetworkEdge] = []
    for i in range(len(layers) - 1):
        for a in range(layers[i].size):
            for b in range(layers[i + 1].size):
                edges.append(NetworkEdge(Branch.FORWARD, (i, a), (i + 1, b)))
                edges.append(NetworkEdge(Branch.BACKWARD, (i + 1, b), (i, a)))
    return FixedPointNetwork(layers, tuple(edges))
