"""Measures of existence from products of conjugate branch amplitudes.

The weight of a history is the product, over consecutive fixed-point
pairs, of the forward amplitude and the matching backward amplitude. With
a branch-independent schedule the two are conjugate, so every weight is a
nonnegative real number; dividing by the sum over the open outcome slots
yields the measure. Two fixed points reproduce the Born rule, three the
pre/post-selection (ABL) rule, and longer chains generalize both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .contour import Branch
from .dynamics import HamiltonianSchedule, apply, propagate
from .errors import (
    DegenerateNormalizer,
    ImpossiblePostSelection,
    NumericalCheckFailure,
    RealnessViolation,
    ValidationError,
)
from .histories import FixedPoint
from .statespace import Basis, inner
from .tolerances import Tolerances, active_tolerances


@dataclass(frozen=True, eq=False)
class MeasureResult:
    """Unnormalized weights and normalized measures over an outcome set.

    labels identifies each outcome (basis indices, or index tuples for
    joint chain outcomes); selected marks the queried outcome when the
    caller asked about a single one.
    """

    delta_psi: np.ndarray
    normalizer: float
    measures: np.ndarray
    labels: tuple
    selected: int | None = None

    def __post_init__(self):
        delta = np.asarray(self.delta_psi, dtype=float)
        measures = np.asarray(self.measures, dtype=float)
        delta.setflags(write=False)
        measures.setflags(write=False)
        object.__setattr__(self, "delta_psi", delta)
        object.__setattr__(self, "measures", measures)
        tols = active_tolerances()
        if delta.shape != measures.shape or len(self.labels) != delta.shape[0]:
            raise NumericalCheckFailure("result arrays and labels disagree in length")
        if abs(float(np.sum(delta)) - self.normalizer) > 1e-9 * max(1.0, abs(self.normalizer)):
            raise NumericalCheckFailure("normalizer is not the sum of the weights")
        if float(np.max(np.abs(measures * self.normalizer - delta))) > 1e-9 * max(
            1.0, abs(self.normalizer)
        ):
            raise NumericalCheckFailure("measures are not the weights over the normalizer")
        if abs(float(np.sum(measures)) - 1.0) > tols.measure_sum:
            raise NumericalCheckFailure(
                f"measures sum to {float(np.sum(measures))!r}, not 1"
            )

    @property
    def selected_measure(self) -> float:
        if self.selected is None:
            raise ValidationError("no outcome was selected for this result")
        return float(self.measures[self.selected])


def branch_amplitude(
    sched: HamiltonianSchedule, branch: Branch, src: FixedPoint, dst: FixedPoint
) -> complex:
    """Transition amplitude <dst| U_branch(dst.t, src.t) |src>."""
    u = propagate(sched, branch, src.t, dst.t)
    return inner(dst.state, apply(u, src.state))


def chain_delta_psi(sched: HamiltonianSchedule, points: Sequence[FixedPoint]) -> complex:
    """Raw, possibly complex history weight: the product over consecutive
    pairs of forward and backward amplitudes. Diagnostic entry point; no
    realness filtering, no normalization."""
    if len(points) < 2:
        raise ValidationError("a history weight needs at least two fixed points")
    value = complex(1.0)
    for a, b in zip(points, points[1:]):
        forward = branch_amplitude(sched, Branch.FORWARD, a, b)
        backward = branch_amplitude(sched, Branch.BACKWARD, b, a)
        value *= forward * backward
    return value


def _real_weight(value: complex, tols: Tolerances) -> float:
    if abs(value.imag) > tols.realness_abort:
        raise RealnessViolation(
            f"history weight has imaginary part {value.imag:.3e}; "
            "schedule is branch-inconsistent or numerically broken"
        )
    if value.real < -tols.negativity:
        raise RealnessViolation(f"history weight is negative: {value.real:.3e}")
    return value.real


def delta_psi_pair(
    sched: HamiltonianSchedule,
    src: FixedPoint,
    snk: FixedPoint,
    tols: Tolerances | None = None,
) -> float:
    """Two-point history weight; equals |forward amplitude|^2 for
    branch-independent schedules."""
    if not src.t < snk.t:
        raise ValidationError("source must precede sink in time")
    tols = tols if tols is not None else active_tolerances()
    return _real_weight(chain_delta_psi(sched, (src, snk)), tols)


def born_measure(
    sched: HamiltonianSchedule,
    prep: FixedPoint,
    t2: float,
    outcomes: Basis,
    tols: Tolerances | None = None,
) -> MeasureResult:
    """Measure over a complete outcome basis at t2 given one preparation."""
    if not prep.t < t2:
        raise ValidationError("measurement time must follow the preparation")
    tols = tols if tols is not None else active_tolerances()
    delta = np.array(
        [delta_psi_pair(sched, prep, FixedPoint(t2, phi), tols) for phi in outcomes]
    )
    normalizer = float(np.sum(delta))
    if normalizer <= tols.degenerate_normalizer:
        raise DegenerateNormalizer(
            "outcome weights sum to zero; the outcome set cannot be complete"
        )
    return MeasureResult(
        delta_psi=delta,
        normalizer=normalizer,
        measures=delta / normalizer,
        labels=tuple(range(len(outcomes))),
    )


def abl_measure(
    sched: HamiltonianSchedule,
    pre_sel: FixedPoint,
    t: float,
    outcomes: Basis,
    post_sel: FixedPoint,
    tols: Tolerances | None = None,
) -> MeasureResult:
    """Measure over intermediate outcomes between a pre- and a
    post-selection; reproduces the ABL conditional probabilities."""
    if not pre_sel.t < t < post_sel.t:
        raise ValidationError("intermediate time must lie strictly between selections")
    tols = tols if tols is not None else active_tolerances()
    delta = np.array(
        [
            _real_weight(
                chain_delta_psi(sched, (pre_sel, FixedPoint(t, a), post_sel)), tols
            )
            for a in outcomes
        ]
    )
    normalizer = float(np.sum(delta))
    if normalizer <= tols.degenerate_normalizer:
        raise ImpossiblePostSelection(
            "post-selection is unreachable from the preparation through any outcome"
        )
    return MeasureResult(
        delta_psi=delta,
        normalizer=normalizer,
        measures=delta / normalizer,
        labels=tuple(range(len(outcomes))),
    )


def chain_measure(
    sched: HamiltonianSchedule,
    endpoints: tuple[FixedPoint, FixedPoint],
    interior: Sequence[tuple[float, Basis]],
    selection: Sequence[int],
    tols: Tolerances | None = None,
) -> MeasureResult:
    """General chain: endpoints held fixed, every joint assignment of the
    interior outcome slots enumerated. The result covers all joint
    outcomes, with the requested selection marked; zero interior slots
    reduce to the pair weight and one slot to the ABL measure."""
    src, snk = endpoints
    if not src.t < snk.t:
        raise ValidationError("chain endpoints must be time ordered")
    times = [src.t] + [float(t) for t, _ in interior] + [snk.t]
    if any(a >= b for a, b in zip(times, times[1:])):
        raise ValidationError("interior times must be strictly increasing inside the endpoints")
    if len(selection) != len(interior):
        raise ValidationError(
            f"selection has {len(selection)} entries for {len(interior)} interior slots"
        )
    for k, (idx, (_, basis)) in enumerate(zip(selection, interior)):
        if not 0 <= idx < len(basis):
            raise ValidationError(f"selection[{k}]={idx} out of range for its basis")
    tols = tols if tols is not None else active_tolerances()

    joints = list(itertools.product(*(range(len(basis)) for _, basis in interior)))
    delta = np.empty(len(joints))
    for j, joint in enumerate(joints):
        pts = (
            src,
            *(FixedPoint(t, basis[k]) for (t, basis), k in zip(interior, joint)),
            snk,
        )
        delta[j] = _real_weight(chain_delta_psi(sched, pts), tols)
    normalizer = float(np.sum(delta))
    if normalizer <= tols.degenerate_normalizer:
        raise ImpossiblePostSelection(
            "no joint interior outcome connects the chain endpoints"
        )
    return MeasureResult(
        delta_psi=delta,
        normalizer=normalizer,
        measures=delta / normalizer,
        labels=tuple(joints),
        selected=joints.index(tuple(selection)),
    )
