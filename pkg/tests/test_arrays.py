import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from risswpcn.arrays import (
    AngleTriple,
    PathLossModel,
    UpaGeometry,
    los_channels,
    path_loss,
    rician_mix,
    spatial_frequencies,
    steer_ula,
    steer_upa,
)

ANGLES = st.tuples(
    st.floats(0.0, math.pi),
    st.floats(-math.pi / 2, math.pi / 2),
    st.floats(-math.pi / 2, math.pi / 2),
)


def upa_entrywise(n_x, n_y, vartheta, phi):
    """Index-by-index construction: x index slow, y index fast, zero-based."""
    out = np.empty(n_x * n_y, dtype=complex)
    for n in range(n_x * n_y):
        p, q = divmod(n, n_y)
        out[n] = np.exp(1j * p * phi) * np.exp(1j * q * vartheta)
    return out


class TestSpatialFrequencies:
    def test_broadside_is_zero(self):
        f = spatial_frequencies(AngleTriple(math.pi / 2, 0.0, 0.0))
        assert f.phi == pytest.approx(0.0, abs=1e-15)
        assert f.vartheta == pytest.approx(0.0, abs=1e-15)
        assert f.varpi == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("ele", [0.1, -0.4, 1.2])
    def test_coplanar_sources_reduce_to_sin_elevation(self, ele):
        # with azimuth pi/2 the y-axis increment is pi*sin(elevation)
        f = spatial_frequencies(AngleTriple(math.pi / 2, ele, 0.0))
        assert f.vartheta == pytest.approx(math.pi * math.sin(ele), rel=1e-15)

    def test_generic_triple(self):
        f = spatial_frequencies(AngleTriple(math.pi / 3, math.pi / 6, math.pi / 4))
        assert f.phi == pytest.approx(1.570796326794897, rel=1e-14)
        assert f.vartheta == pytest.approx(1.360349523175663, rel=1e-14)
        assert f.varpi == pytest.approx(2.221441469079183, rel=1e-14)

    def test_invariant_ranges(self):
        with pytest.raises(ValueError):
            AngleTriple(-0.1, 0.0, 0.0)
        with pytest.raises(ValueError):
            AngleTriple(0.5, 2.0, 0.0)


class TestSteering:
    def test_upa_zero_phases_all_ones(self):
        v = steer_upa(UpaGeometry(4, 4), 0.0, 0.0)
        np.testing.assert_allclose(v, np.ones(16))

    def test_upa_hand_expanded_kronecker(self):
        v = steer_upa(UpaGeometry(2, 2), math.pi, 0.0)
        np.testing.assert_allclose(v, [1, -1, 1, -1], atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(1, 6),
        st.integers(1, 6),
        st.floats(-math.pi, math.pi),
        st.floats(-math.pi, math.pi),
    )
    def test_upa_matches_entrywise_construction(self, n_x, n_y, vartheta, phi):
        v = steer_upa(UpaGeometry(n_x, n_y), vartheta, phi)
        np.testing.assert_allclose(v, upa_entrywise(n_x, n_y, vartheta, phi), atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 8), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
    def test_upa_unit_modulus_and_norm(self, n_x, n_y, vartheta, phi):
        v = steer_upa(UpaGeometry(n_x, n_y), vartheta, phi)
        np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-12)
        assert np.linalg.norm(v) ** 2 == pytest.approx(n_x * n_y, rel=1e-12)

    def test_ula_zero_phase_all_ones(self):
        np.testing.assert_allclose(steer_ula(4, 0.0), np.ones(4))

    def test_ula_quarter_turn(self):
        np.testing.assert_allclose(steer_ula(2, math.pi / 2), [1, 1j], atol=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 16), st.floats(-math.pi, math.pi))
    def test_ula_norm(self, m, varpi):
        assert np.linalg.norm(steer_ula(m, varpi)) ** 2 == pytest.approx(m, rel=1e-12)


class TestLosChannels:
    def setup_method(self):
        self.geom = UpaGeometry(4, 4)
        self.angles_g = AngleTriple(1.1, 0.3, -0.2)
        self.angles_h = [AngleTriple(1.4, -0.1, 0.0), AngleTriple(0.7, 0.5, 0.0)]

    def test_rank_one(self):
        ch = los_channels(self.geom, 4, self.angles_g, self.angles_h)
        assert np.linalg.matrix_rank(ch.g, tol=1e-9) == 1

    def test_outer_product_entries(self):
        ch = los_channels(self.geom, 3, self.angles_g, self.angles_h)
        f = spatial_frequencies(self.angles_g)
        a = steer_upa(self.geom, f.vartheta, f.phi)
        b = steer_ula(3, f.varpi)
        for n in [0, 5, 15]:
            for m in [0, 2]:
                assert ch.g[n, m] == pytest.approx(a[n] * b[m], rel=1e-12)

    def test_sizes_and_modulus(self):
        ch = los_channels(UpaGeometry(4, 4), 4, self.angles_g, self.angles_h)
        assert ch.g.shape == (16, 4)
        np.testing.assert_allclose(np.abs(ch.g), 1.0, atol=1e-12)
        assert len(ch.h) == 2


class TestRicianMix:
    def test_los_limit_returns_input(self):
        rng = np.random.default_rng(0)
        ch = np.exp(1j * np.linspace(0, 3, 8))
        out = rician_mix(ch, 1e12, rng)
        np.testing.assert_array_equal(out, ch)

    def test_rejects_negative_kappa(self):
        with pytest.raises(ValueError):
            rician_mix(np.ones(4, dtype=complex), -0.5, np.random.default_rng(0))

    def test_pure_scatter_unit_variance(self):
        rng = np.random.default_rng(7)
        draws = rician_mix(np.ones((10_000,), dtype=complex), 0.0, rng)
        var = np.mean(np.abs(draws) ** 2)
        assert var == pytest.approx(1.0, rel=0.05)

    def test_energy_expectation(self):
        rng = np.random.default_rng(11)
        kappa = 2.5
        ch = np.exp(1j * np.linspace(0, 5, 64)) * 1.3
        energies = [
            np.linalg.norm(rician_mix(ch, kappa, rng)) ** 2 for _ in range(4000)
        ]
        expected = np.linalg.norm(ch) ** 2 * kappa / (1 + kappa) + ch.size / (1 + kappa)
        assert np.mean(energies) == pytest.approx(expected, rel=0.05)

    def test_seeded_reproducibility(self):
        ch = np.ones(16, dtype=complex)
        a = rician_mix(ch, 1.0, np.random.default_rng(123))
        b = rician_mix(ch, 1.0, np.random.default_rng(123))
        np.testing.assert_array_equal(a, b)


class TestPathLoss:
    def test_reference_distance(self):
        assert path_loss(PathLossModel(), 1.0) == pytest.approx(1e-3, rel=1e-15)

    def test_ten_meters(self):
        assert path_loss(PathLossModel(), 10.0) == pytest.approx(6.3095734448019305e-06, rel=1e-14)

    def test_hap_riss_distance(self):
        assert path_loss(PathLossModel(), 20.0) == pytest.approx(1.3732006791326465e-06, rel=1e-14)

    def test_rejects_below_reference(self):
        with pytest.raises(ValueError):
            path_loss(PathLossModel(), 0.5)

    def test_monotone_decreasing_positive(self):
        gains = path_loss(PathLossModel(), np.linspace(1, 200, 400))
        assert np.all(gains > 0)
        assert np.all(np.diff(gains) < 0)
