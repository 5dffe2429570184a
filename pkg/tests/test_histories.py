import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpf.contour import Branch
from fpf.errors import (
    DimensionMismatch,
    NonMonotoneTimes,
    NotNormalized,
    TooFewPoints,
    ValidationError,
)
from fpf.histories import (
    FixedPoint,
    build_network,
    make_history,
    stack_state,
)
from fpf.scenario import random_state
from fpf.statespace import StateVector, basis_state, standard_basis

E0, E1 = basis_state(2, 0), basis_state(2, 1)


class TestMakeHistory:
    def test_minimal_pair(self):
        h = make_history([FixedPoint(0.0, E0), FixedPoint(1.0, E1)])
        assert h.n_points == 2
        assert h.times == (0.0, 1.0)

    def test_single_point_rejected(self):
        with pytest.raises(TooFewPoints):
            make_history([FixedPoint(0.0, E0)])

    def test_non_monotone_rejected(self):
        with pytest.raises(NonMonotoneTimes):
            make_history([FixedPoint(1.0, E0), FixedPoint(0.0, E1)])

    def test_dim_mismatch_rejected(self):
        with pytest.raises(DimensionMismatch):
            make_history([FixedPoint(0.0, E0), FixedPoint(1.0, basis_state(3, 0))])

    def test_unnormalized_rejected(self):
        crooked = StateVector(np.array([0.5, 0.5]))
        with pytest.raises(NotNormalized):
            make_history([FixedPoint(0.0, E0), FixedPoint(1.0, crooked)])


class TestStackState:
    def test_pair_tags_and_order(self):
        h = make_history([FixedPoint(0.0, E0), FixedPoint(1.0, E1)])
        stack = stack_state(h)
        tags = [(p.branch, p.t) for p in stack.parts]
        assert tags == [
            (Branch.BACKWARD, 1.0),
            (Branch.FORWARD, 1.0),
            (Branch.BACKWARD, 0.0),
            (Branch.FORWARD, 0.0),
        ]

    def test_parts_equal_history_states(self):
        rng = np.random.default_rng(3)
        pts = [FixedPoint(float(t), random_state(rng, 3)) for t in (0, 1, 2)]
        stack = stack_state(make_history(pts))
        by_time = {p.t: p.state for p in pts}
        assert all(part.state == by_time[part.t] for part in stack.parts)

    def test_composite_tensor_is_unit_norm(self):
        rng = np.random.default_rng(4)
        pts = [FixedPoint(float(t), random_state(rng, 2)) for t in (0, 1, 2)]
        assert stack_state(make_history(pts)).as_tensor().norm == pytest.approx(1.0, abs=1e-12)

    def test_round_trip_forward_parts(self):
        rng = np.random.default_rng(5)
        pts = [FixedPoint(float(t), random_state(rng, 4)) for t in (0.0, 0.3, 1.7)]
        h = make_history(pts)
        recovered = stack_state(h).forward_parts()
        assert [p.t for p in recovered] == list(h.times)
        assert all(a.state == b.state for a, b in zip(recovered, h.points))


class TestNetwork:
    def test_two_by_three(self):
        net = build_network([0.0, 1.0], [standard_basis(2), standard_basis(3)])
        assert len(net.edges) == 12
        assert len(net.edges_between(0)) == 12
        assert len(net.channels_between(0)) == 6

    def test_interior_node_degrees(self):
        net = build_network(
            [0.0, 1.0, 2.0],
            [standard_basis(2), standard_basis(4), standard_basis(3)],
        )
        # interior node: source and sink of N_prev + N_next lines
        for node in range(4):
            assert net.out_degree(1, node) == 2 + 3
            assert net.in_degree(1, node) == 2 + 3

    def test_single_channel(self):
        net = build_network([0.0, 1.0], [standard_basis(1), standard_basis(1)])
        assert len(net.edges) == 2
        branches = sorted(e.branch.value for e in net.edges)
        assert branches == ["b", "f"]
        assert len(net.channels_between(0)) == 1

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            build_network([0.0, 1.0], [standard_basis(2)])

    def test_non_monotone_layers(self):
        with pytest.raises(NonMonotoneTimes):
            build_network([1.0, 0.0], [standard_basis(2), standard_basis(2)])

    @given(st.lists(st.integers(1, 5), min_size=2, max_size=5))
    @settings(max_examples=40, deadline=None)
    def test_counting_rules(self, sizes):
        times = [float(i) for i in range(len(sizes))]
        net = build_network(times, [standard_basis(n) for n in sizes])
        total = 0
        for i, (n1, n2) in enumerate(zip(sizes, sizes[1:])):
            assert len(net.edges_between(i)) == 2 * n1 * n2
            assert len(net.channels_between(i)) == n1 * n2
            total += 2 * n1 * n2
        assert len(net.edges) == total
        # every edge sits in exactly one adjacent pair
        assert sum(len(net.edges_between(i)) for i in range(len(sizes) - 1)) == total
