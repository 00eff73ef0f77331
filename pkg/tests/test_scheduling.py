import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from risswpcn.scheduling import (
    RotationOrder,
    brute_force_order,
    optimal_order,
    rotation_cost,
    waiting_cost,
)


class TestWaitingCost:
    def test_single_beam(self):
        rep = waiting_cost(RotationOrder((0,)), counts=[3], times=[2.0], initial_delays=[1.5])
        assert rep.total == pytest.approx(1.5)
        assert rep.average == pytest.approx(0.5)

    def test_symmetric_order_independent(self):
        for order in [(0, 1), (1, 0)]:
            rep = waiting_cost(RotationOrder(order), counts=[2, 2], times=[1.0, 1.0])
            assert rep.total == pytest.approx(2.0)

    def test_hand_evaluated_three_beams(self):
        # order [0, 2, 1]: beam 2 waits T0 = 1, beam 1 waits T0 + T2 = 2
        rep = waiting_cost(RotationOrder((0, 2, 1)), counts=[3, 1, 2], times=[1.0, 2.0, 1.0])
        assert rep.total == pytest.approx(4.0)
        assert rep.average == pytest.approx(4.0 / 6.0)

    def test_rejects_empty_network(self):
        with pytest.raises(ValueError):
            waiting_cost(RotationOrder((0, 1)), counts=[0, 0], times=[1.0, 1.0])

    def test_per_beam_start_non_decreasing(self):
        rep = waiting_cost(RotationOrder((2, 0, 1)), counts=[1, 2, 3], times=[0.5, 1.5, 1.0])
        assert list(rep.per_beam_start) == sorted(rep.per_beam_start)

    def test_delays_shift_total_but_not_order_term(self):
        a = waiting_cost(RotationOrder((0, 1)), [1, 1], [1.0, 2.0])
        b = waiting_cost(RotationOrder((0, 1)), [1, 1], [1.0, 2.0], initial_delays=[0.3, 0.2])
        assert b.total - a.total == pytest.approx(0.5)


class TestOptimalOrder:
    def test_equal_counts_ascending_time(self):
        order = optimal_order([2, 2, 2], [3.0, 1.0, 2.0])
        assert order.order == (1, 2, 0)

    def test_equal_times_descending_count(self):
        order = optimal_order([1, 5, 3], [2.0, 2.0, 2.0])
        assert order.order == (1, 2, 0)

    def test_ratio_ordering(self):
        # ratios [3, 0.5, 2] -> beams 0, 2, 1
        order = optimal_order([3, 1, 2], [1.0, 2.0, 1.0])
        assert order.order == (0, 2, 1)
        assert order.order == brute_force_order([3, 1, 2], [1.0, 2.0, 1.0])[0].order

    def test_zero_time_with_devices_goes_first(self):
        order = optimal_order([1, 4], [2.0, 0.0])
        assert order.order == (1, 0)

    def test_tie_break_by_index(self):
        order = optimal_order([2, 4], [1.0, 2.0])
        assert order.order == (0, 1)
        # any tie order is cost-optimal
        assert rotation_cost(order, [2, 4], [1.0, 2.0]) == pytest.approx(
            brute_force_order([2, 4], [1.0, 2.0])[1]
        )


class TestBruteForceAgreement:
    def test_guard(self):
        with pytest.raises(ValueError):
            brute_force_order(np.ones(11), np.ones(11))

    @settings(max_examples=150, deadline=None)
    @given(
        st.integers(2, 6),
        st.integers(0, 2**31 - 1),
    )
    def test_cost_always_matches_oracle(self, n, seed):
        rng = np.random.default_rng(seed)
        counts = rng.integers(0, 12, size=n).astype(float)
        if counts.sum() == 0:
            counts[0] = 1
        times = rng.uniform(0.1, 5.0, size=n)
        _, oracle_cost = brute_force_order(counts, times)
        cost = rotation_cost(optimal_order(counts, times), counts, times)
        assert cost == pytest.approx(oracle_cost, abs=1e-9)

    def test_campaign_eight_beams(self):
        rng = np.random.default_rng(2024)
        mismatches = 0
        for _ in range(200):
            counts = rng.integers(0, 20, size=8).astype(float)
            counts[0] = max(counts[0], 1)
            times = rng.uniform(0.05, 3.0, size=8)
            _, oracle_cost = brute_force_order(counts, times)
            cost = rotation_cost(optimal_order(counts, times), counts, times)
            if abs(cost - oracle_cost) > 1e-9:
                mismatches += 1
        assert mismatches == 0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(3, 7), st.integers(0, 2**31 - 1))
    def test_adjacent_swap_against_ratio_raises_cost(self, n, seed):
        rng = np.random.default_rng(seed)
        counts = rng.integers(1, 15, size=n).astype(float)
        times = rng.uniform(0.1, 4.0, size=n)
        order = list(optimal_order(counts, times).order)
        base = rotation_cost(RotationOrder(tuple(order)), counts, times)
        for m in range(n - 1):
            i, j = order[m], order[m + 1]
            # swap only strictly ratio-violating pairs
            if counts[i] * times[j] > counts[j] * times[i]:
                swapped = order.copy()
                swapped[m], swapped[m + 1] = swapped[m + 1], swapped[m]
                assert rotation_cost(RotationOrder(tuple(swapped)), counts, times) > base

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 6), st.floats(0.1, 100.0), st.integers(0, 2**31 - 1))
    def test_argmin_scale_invariance(self, n, scale, seed):
        rng = np.random.default_rng(seed)
        counts = rng.integers(1, 10, size=n).astype(float)
        times = rng.uniform(0.1, 4.0, size=n)
        assert optimal_order(counts, times).order == optimal_order(counts, times * scale).order

    def test_delay_term_order_invariant(self):
        counts, times, delays = [3, 1, 2], [1.0, 2.0, 1.0], [0.4, 0.1, 0.2]
        totals = set()
        fixed = []
        for perm in [(0, 1, 2), (2, 1, 0), (1, 2, 0)]:
            rep = waiting_cost(RotationOrder(perm), counts, times, delays)
            fixed.append(rep.total - rotation_cost(RotationOrder(perm), counts, times))
            totals.add(round(rep.total, 12))
        assert all(f == pytest.approx(sum(delays)) for f in fixed)
        assert len(totals) > 1
