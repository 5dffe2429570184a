"""Two-branch contour times, their causal ordering, and integration paths.

A contour point is a real time tagged with a branch: the forward branch is
traversed in increasing real time, the backward branch after it in
decreasing real time. Points on different branches at the same real time
are distinct.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import NonMonotoneTimes, TooFewPoints, ValidationError


class Branch(enum.Enum):
    FORWARD = "f"
    BACKWARD = "b"


class Ordering(enum.IntEnum):
    BEFORE = -1
    EQUAL = 0
    AFTER = 1


@dataclass(frozen=True)
class ContourTime:
    t: float
    branch: Branch

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise ValidationError("contour time must be finite")


def contour_key(ct: ContourTime) -> tuple[int, float]:
    """Sort key realizing contour order: forward ascending, then backward
    descending."""
    if ct.branch is Branch.FORWARD:
        return (0, ct.t)
    return (1, -ct.t)


def contour_compare(a: ContourTime, b: ContourTime) -> Ordering:
    ka, kb = contour_key(a), contour_key(b)
    if ka < kb:
        return Ordering.BEFORE
    if ka > kb:
        return Ordering.AFTER
    return Ordering.EQUAL


@dataclass(frozen=True)
class PathSegment:
    branch: Branch
    t_from: float
    t_to: float

    def __post_init__(self):
        if self.branch is Branch.FORWARD and not self.t_from < self.t_to:
            raise ValidationError("forward segments must run toward larger times")
        if self.branch is Branch.BACKWARD and not self.t_from > self.t_to:
            raise ValidationError("backward segments must run toward smaller times")

    @property
    def interval(self) -> tuple[float, float]:
        return (min(self.t_from, self.t_to), max(self.t_from, self.t_to))


@dataclass(frozen=True)
class ContourPath:
    segments: tuple[PathSegment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValidationError("a contour path needs at least one segment")
        # forward block strictly precedes backward block
        branches = [s.branch for s in segs]
        if any(
            a is Branch.BACKWARD and b is Branch.FORWARD
            for a, b in zip(branches, branches[1:])
        ):
            raise ValidationError("forward segments must precede backward segments")
        for prev, nxt in zip(segs, segs[1:]):
            if prev.branch is nxt.branch and prev.t_to != nxt.t_from:
                raise ValidationError("consecutive segments must connect")
        if branches[0] is Branch.FORWARD and branches[-1] is Branch.BACKWARD:
            last_f = max(i for i, b in enumerate(branches) if b is Branch.FORWARD)
            if segs[last_f].t_to != segs[last_f + 1].t_from:
                raise ValidationError("branch turnaround must happen at the latest time")
        object.__setattr__(self, "segments", segs)

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)


def build_path(times: Sequence[float], n_points: int | None = None) -> ContourPath:
    """Contour path covering every interval between consecutive times once
    per branch: all forward segments in time order, then all backward
    segments in reverse order.

    n_points is redundant with len(times); when given, it is cross-checked.
    """
    ts = [float(t) for t in times]
    if n_points is not None and n_points != len(ts):
        raise ValidationError(f"n_points={n_points} but {len(ts)} times were given")
    if len(ts) < 2:
        raise TooFewPoints("a path needs at least two times")
    if any(a >= b for a, b in zip(ts, ts[1:])):
        raise NonMonotoneTimes("path times must be strictly increasing")
    forward = [PathSegment(Branch.FORWARD, a, b) for a, b in zip(ts, ts[1:])]
    backward = [PathSegment(Branch.BACKWARD, b, a) for a, b in zip(ts[-2::-1], ts[:0:-1])]
    return ContourPath(tuple(forward + backward))
