import math

import numpy as np
import pytest

from risswpcn.arrays import PathLossModel, path_loss
from risswpcn.wet import (
    Beam,
    BeamPlan,
    DeviceCluster,
    EhModel,
    beam_gain,
    beam_widths,
    build_plan,
    charging_times,
    harvest,
    harvested_energy,
    received_power,
    slot_charging_times,
    slot_harvested_energy,
    stitch_beams,
    threshold_search,
    total_gain,
)


def gain_by_summation(direction, omega, n):
    """Independent geometric-series oracle: |sum_p e^{i p pi (sin w - sin d)}| / n."""
    phases = np.pi * (np.sin(omega) - np.sin(direction)) * np.arange(n)
    return np.abs(np.exp(1j * phases).sum()) / n


class TestBeamGain:
    def test_peak_is_one(self):
        assert beam_gain(0.3, 0.3, 16) == pytest.approx(1.0, abs=1e-12)

    def test_first_null(self):
        omega = math.asin(2.0 / 16.0)
        assert abs(beam_gain(0.0, omega, 16)) < 1e-12

    def test_matches_geometric_series(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            d = rng.uniform(-np.pi / 2, np.pi / 2)
            w = rng.uniform(-np.pi / 2, np.pi / 2)
            n = int(rng.integers(2, 40))
            assert abs(beam_gain(d, w, n)) == pytest.approx(
                gain_by_summation(d, w, n), abs=1e-10
            )


class TestBeamWidths:
    def test_gamma_near_one_collapses(self):
        wl, wr = beam_widths(0.0, 1 - 1e-9, 16)
        assert wl < 1e-4 and wr < 1e-4

    def test_broadside_symmetry(self):
        wl, wr = beam_widths(0.0, 0.5, 16)
        assert abs(wl - wr) < 1e-9

    def test_off_broadside_asymmetry_against_grid_oracle(self):
        # dense scan oracle at 1e-5 rad resolution
        direction, gamma, n = np.pi / 4, 0.5, 16
        omega = np.arange(-np.pi / 2, np.pi / 2, 1e-5)
        mask = beam_gain(direction, omega, n) ** 2 >= gamma
        i = int(np.argmin(np.abs(omega - direction)))
        il = ir = i
        while il > 0 and mask[il - 1]:
            il -= 1
        while ir < len(omega) - 1 and mask[ir + 1]:
            ir += 1
        oracle_l, oracle_r = direction - omega[il], omega[ir] - direction
        wl, wr = beam_widths(direction, gamma, n)
        assert wl == pytest.approx(oracle_l, abs=2e-5)
        assert wr == pytest.approx(oracle_r, abs=2e-5)
        # the endfire-facing side of the lobe is the broad one
        assert wr > wl

    def test_rejects_bad_gamma(self):
        for g in [0.0, 1.0, -0.2, 1.5]:
            with pytest.raises(ValueError):
                beam_widths(0.0, g, 16)


class TestStitching:
    def test_sixteen_beams_at_searched_gamma(self):
        found = threshold_search((0.2, 0.8), 200, 50, 16, 10)
        n_beams = [plan.n_beams for _, plan in found]
        assert 16 in n_beams

    def test_residual_small_at_peak(self):
        found = threshold_search((0.2, 0.8), 200, 50, 16, 10)
        gamma, plan = [t for t in found if t[1].n_beams == 16][0]
        _, residual = stitch_beams(gamma, 16)
        assert residual < 1e-5

    def test_half_space_edges_abut(self):
        # consecutive stitched beams meet at their threshold edges (any gamma)
        for gamma in [0.3, 0.406, 0.55, 0.7]:
            dirs, _ = stitch_beams(gamma, 16)
            for a, b in zip(dirs, dirs[1:]):
                if b == 0.0:
                    continue
                wl_a, _ = beam_widths(a, gamma, 16)
                _, wr_b = beam_widths(b, gamma, 16)
                assert (a - wl_a) - (b + wr_b) == pytest.approx(0.0, abs=1e-9)

    def test_first_beam_edge_touches_endfire(self):
        dirs, _ = stitch_beams(0.45, 16)
        _, wr = beam_widths(dirs[0], 0.45, 16)
        assert dirs[0] + wr == pytest.approx(np.pi / 2, abs=1e-9)

    def test_plan_sorted_and_mirrored(self):
        plan = build_plan(0.4066, 16)
        d = plan.directions
        assert np.all(np.diff(d) > 0)
        np.testing.assert_allclose(d, -d[::-1], atol=1e-12)


class TestThresholdSearch:
    def test_interval_widening_keeps_peaks(self):
        narrow = threshold_search((0.3, 0.6), 200, 50, 16, 10)
        wide = threshold_search((0.2, 0.8), 200, 50, 16, 10)
        wide_gammas = np.array([g for g, _ in wide])
        for g, _ in narrow:
            assert np.min(np.abs(wide_gammas - g)) < 2e-3

    def test_empty_between_adjacent_peaks(self):
        assert threshold_search((0.42, 0.445), 100, 50, 16, 10) == []

    def test_coverage_floor_on_fine_grid(self):
        found = threshold_search((0.2, 0.8), 200, 50, 16, 10)
        gamma, plan = [t for t in found if t[1].n_beams == 16][0]
        omega = np.arange(-np.pi / 2, np.pi / 2, 1e-4)
        floor = total_gain(plan, omega).min()
        assert floor >= gamma

    def test_residual_gap_invariant(self):
        found = threshold_search((0.2, 0.8), 200, 50, 16, 10)
        for gamma, plan in found:
            omega = np.arange(-np.pi / 2, np.pi / 2, 1e-4)
            covered = np.zeros_like(omega, dtype=bool)
            for b in plan.beams:
                covered |= beam_gain(b.direction, omega, 16) ** 2 >= gamma * (1 - 1e-9)
            gaps = (~covered).sum() * 1e-4
            assert gaps <= plan.coverage_residual + 2e-4


class TestHarvest:
    def test_zero_input_zero_output(self):
        model = EhModel()
        assert abs(harvest(model, 0.0)) <= 1e-15 * model.m_s

    def test_saturation(self):
        model = EhModel()
        assert harvest(model, 10.0) >= 0.999 * model.m_s
        assert harvest(model, 10.0) < model.m_s

    def test_knee_value(self):
        model = EhModel()
        # independent evaluation of m_s/(2x) - y with x, y from their closed forms
        assert harvest(model, model.b) == pytest.approx(0.009250021400009948, rel=1e-12)

    def test_strictly_increasing(self):
        model = EhModel()
        grid = np.linspace(0.0, 1.0, 10_000)
        vals = harvest(model, grid)
        # past ~0.25 W the sigmoid's increments drop to a few ulps of m_s, so
        # strictness is only representable below that point
        assert np.all(np.diff(vals) >= 0)
        resolvable = grid[:-1] < 0.2
        assert np.all(np.diff(vals)[resolvable] > 0)
        assert np.all(vals < model.m_s)

    def test_rejects_negative_power(self):
        with pytest.raises(ValueError):
            harvest(EhModel(), -1e-6)


class TestTotalGain:
    def test_single_beam_peak(self):
        plan = BeamPlan(beams=[Beam(0.2, 0.5, 0.1, 0.1)], n_elements=16)
        assert total_gain(plan, 0.2) == pytest.approx(1.0, abs=1e-12)

    def test_dominates_single_beam_gain(self):
        plan = build_plan(0.4066, 16)
        omega = np.linspace(-np.pi / 2, np.pi / 2, 500)
        tot = total_gain(plan, omega)
        for b in plan.beams:
            assert np.all(tot >= beam_gain(b.direction, omega, 16) ** 2 - 1e-12)


def _simple_cluster(plan, angles_per_beam, gains_per_beam, demand=1.35e-3):
    return DeviceCluster(
        angles=[np.asarray(a, dtype=float) for a in angles_per_beam],
        distances=[np.asarray(g, dtype=float) for g in gains_per_beam],
        demand=demand,
    )


class TestChargingTimes:
    def setup_method(self):
        self.plm = PathLossModel()
        self.pl_h2r = path_loss(self.plm, 20.0)

    def test_single_device_at_peak(self):
        plan = BeamPlan(beams=[Beam(0.0, 0.5, 0.1, 0.1)], n_elements=16)
        q = 1.35e-3
        rho = path_loss(self.plm, 5.0)
        cl = _simple_cluster(plan, [[0.0]], [[rho]], q)
        t = charging_times(plan, cl, 4.0, 256, 4, self.pl_h2r)
        expected = q / (4.0 * 256**2 * 4 * self.pl_h2r * rho)
        assert t[0] == pytest.approx(expected, rel=1e-12)

    def test_symmetric_peaks_equal_times(self):
        plan = [p for _, p in threshold_search((0.38, 0.43), 60, 50, 16, 10) if p.n_beams == 16][0]
        rho = path_loss(self.plm, 5.0)
        cl = _simple_cluster(plan, [[b.direction] for b in plan.beams], [[rho]] * 16)
        t = charging_times(plan, cl, 4.0, 256, 4, self.pl_h2r)
        np.testing.assert_allclose(t, t[0], rtol=1e-9)

    def test_empty_beam_zero_time(self):
        plan = build_plan(0.4066, 16)
        angles = [[b.direction] for b in plan.beams]
        gains = [[path_loss(self.plm, 3.0)]] * 16
        angles[4], gains[4] = [], []
        cl = _simple_cluster(plan, angles, gains)
        t = charging_times(plan, cl, 4.0, 256, 4, self.pl_h2r)
        assert t[4] == 0.0
        assert np.all(t[np.arange(16) != 4] > 0)

    def test_rejects_zero_denominator(self):
        plan = BeamPlan(beams=[Beam(0.0, 0.5, 0.1, 0.1)], n_elements=16)
        cl = _simple_cluster(plan, [[0.0]], [[0.0]])
        with pytest.raises(ValueError):
            charging_times(plan, cl, 4.0, 256, 4, self.pl_h2r)

    def test_device_order_permutation_invariant(self):
        plan = build_plan(0.4066, 16)
        rng = np.random.default_rng(5)
        angles, gains = [], []
        for b in plan.beams:
            k = rng.integers(1, 6)
            angles.append(rng.uniform(b.direction - b.width_left, b.direction + b.width_right, k))
            gains.append(path_loss(self.plm, rng.choice([3.0, 5.0, 7.0], k)))
        cl = _simple_cluster(plan, angles, gains)
        t1 = charging_times(plan, cl, 4.0, 256, 4, self.pl_h2r)
        perm_cl = _simple_cluster(
            plan, [a[::-1] for a in angles], [g[::-1] for g in gains]
        )
        t2 = charging_times(plan, perm_cl, 4.0, 256, 4, self.pl_h2r)
        np.testing.assert_allclose(t1, t2, rtol=1e-12)

    def test_slot_times_cover_worst_device_demand(self):
        # linear energy check: worst in-beam device reaches demand from its own slot
        plan = build_plan(0.4066, 16)
        rng = np.random.default_rng(6)
        angles, gains = [], []
        for b in plan.beams:
            k = rng.integers(1, 8)
            angles.append(rng.uniform(b.direction - b.width_left, b.direction + b.width_right, k))
            gains.append(path_loss(self.plm, rng.choice([3.0, 5.0, 7.0], k)))
        cl = _simple_cluster(plan, angles, gains)
        t = slot_charging_times(plan, cl, 4.0, 256, 4, self.pl_h2r)
        scale = 4.0 * 256**2 * 4 * self.pl_h2r
        for j, b in enumerate(plan.beams):
            own = beam_gain(b.direction, np.asarray(angles[j]), 16) ** 2
            linear = scale * own * np.asarray(gains[j]) * t[j]
            assert linear.min() == pytest.approx(cl.demand, rel=1e-9)


class TestEnergyAccounting:
    def test_received_power_peak_value(self):
        plan = BeamPlan(beams=[Beam(0.0, 0.5, 0.1, 0.1)], n_elements=16)
        rho = 2.0e-5
        p = received_power(plan, np.array([0.0]), np.array([rho]), 4.0, 256, 4, 1.37e-6)
        assert p[0, 0] == pytest.approx(4.0 * 256**2 * 4 * 1.37e-6 * rho, rel=1e-12)

    def test_harvested_energy_monotone_in_time(self):
        plan = build_plan(0.4066, 16)
        ang = np.array([0.05, -0.4])
        rho = np.array([2e-5, 1.4e-5])
        e1 = harvested_energy(plan, np.full(16, 1.0), ang, rho, EhModel(), 4.0, 256, 4, 1.37e-6)
        e2 = harvested_energy(plan, np.full(16, 2.0), ang, rho, EhModel(), 4.0, 256, 4, 1.37e-6)
        np.testing.assert_allclose(e2, 2 * e1, rtol=1e-12)

    def test_slot_energy_counts_only_own_beam(self):
        plan = build_plan(0.4066, 16)
        cl = _simple_cluster(plan, [[b.direction] for b in plan.beams], [[2e-5]] * 16)
        times = np.arange(1.0, 17.0)
        e = slot_harvested_energy(plan, times, cl, EhModel(), 4.0, 256, 4, 1.37e-6)
        p_peak = 4.0 * 256**2 * 4 * 1.37e-6 * 2e-5
        np.testing.assert_allclose(e, harvest(EhModel(), p_peak) * times, rtol=1e-12)
