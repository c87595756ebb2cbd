import numpy as np
import pytest

from wallwalk.lattice import LatticeGeometry
from wallwalk.observables import (
    ObservableSeries,
    SeriesRecord,
    axis_marginal,
    axis_moments,
    boundary_shell_mass,
    slab_mass,
    std_dev_per_axis,
)


def delta_density(sizes, site, mass=1.0):
    d = np.zeros(sizes)
    d[site] = mass
    return d


class TestMarginal:
    def test_delta(self):
        d = delta_density((6, 8), (2, 5))
        assert axis_marginal(d, 0)[2] == 1.0
        assert axis_marginal(d, 1)[5] == 1.0

    def test_separable_product(self):
        fx = np.array([0.1, 0.2, 0.3, 0.4])
        fy = np.array([0.25, 0.25, 0.5])
        d = np.outer(fx, fy)
        assert np.allclose(axis_marginal(d, 0), fx)
        assert np.allclose(axis_marginal(d, 1), fy)

    def test_sums_to_total(self):
        rng = np.random.default_rng(41)
        d = rng.random((5, 6, 7))
        for ax in range(3):
            assert abs(axis_marginal(d, ax).sum() - d.sum()) < 1e-12


class TestMoments:
    def test_delta_has_zero_sigma(self):
        g = LatticeGeometry(sizes=(9, 9), epsilon=0.2)
        d = delta_density((9, 9), (6, 2))
        assert std_dev_per_axis(d, g, 0) == 0.0
        mean, _ = axis_moments(d, g, 0)
        assert mean == pytest.approx(g.coordinate(0, 6))

    def test_two_deltas_give_half_separation(self):
        g = LatticeGeometry(sizes=(16,), epsilon=0.5)
        d = np.zeros(16)
        d[5] = 0.5
        d[11] = 0.5
        # physical separation 6 * 0.5 = 3.0
        assert std_dev_per_axis(d, g, 0) == pytest.approx(1.5)

    def test_two_deltas_across_the_seam(self):
        # minimal-image: sites 1 and 15 on a 16-ring are 2 apart, not 14
        g = LatticeGeometry(sizes=(16,), epsilon=1.0)
        d = np.zeros(16)
        d[1] = 0.5
        d[15] = 0.5
        assert std_dev_per_axis(d, g, 0) == pytest.approx(1.0)
        mean, _ = axis_moments(d, g, 0)
        assert mean == pytest.approx(-8.0)  # midpoint at site 0 = coordinate -8

    def test_matches_plain_moments_away_from_seam(self):
        rng = np.random.default_rng(42)
        g = LatticeGeometry(sizes=(32,), epsilon=0.1)
        d = np.zeros(32)
        d[8:25] = rng.random(17)
        coords = g.coordinates(0)
        mass = d.sum()
        plain_mean = (coords * d).sum() / mass
        plain_var = ((coords - plain_mean) ** 2 * d).sum() / mass
        mean, sigma = axis_moments(d, g, 0)
        assert mean == pytest.approx(plain_mean, abs=1e-12)
        assert sigma == pytest.approx(np.sqrt(plain_var), abs=1e-12)

    def test_symmetric_mass_increases_sigma(self):
        g = LatticeGeometry(sizes=(17,), epsilon=0.3)
        base = delta_density((17,), (8,), 0.8)
        sigmas = []
        for spread_mass in (0.0, 0.1, 0.2):
            d = base.copy()
            d[5] += spread_mass / 2
            d[11] += spread_mass / 2
            sigmas.append(std_dev_per_axis(d, g, 0))
        assert sigmas[0] < sigmas[1] < sigmas[2]

    def test_zero_mass_rejected(self):
        g = LatticeGeometry(sizes=(8,), epsilon=0.1)
        with pytest.raises(ValueError):
            std_dev_per_axis(np.zeros(8), g, 0)


class TestSlabMass:
    def test_full_axis_captures_everything(self):
        rng = np.random.default_rng(43)
        g = LatticeGeometry(sizes=(12, 10), epsilon=0.25)
        d = rng.random((12, 10))
        total = d.sum()
        assert slab_mass(d, g, 1, center=0.0, half_width=10 * 0.25) == pytest.approx(total)

    def test_delta_at_center_any_width(self):
        g = LatticeGeometry(sizes=(11,), epsilon=0.5)
        d = delta_density((11,), (5,))
        assert slab_mass(d, g, 0, center=0.0, half_width=0.0) == 1.0

    def test_monotone_in_half_width(self):
        rng = np.random.default_rng(44)
        g = LatticeGeometry(sizes=(20,), epsilon=0.1)
        d = rng.random(20)
        widths = np.linspace(0, 1.0, 11)
        masses = [slab_mass(d, g, 0, 0.0, w) for w in widths]
        assert all(a <= b + 1e-15 for a, b in zip(masses, masses[1:]))

    def test_negative_width_rejected(self):
        g = LatticeGeometry(sizes=(8,), epsilon=0.1)
        with pytest.raises(ValueError):
            slab_mass(np.ones(8), g, 0, 0.0, -0.1)


class TestShellMass:
    def test_counts_only_the_rim(self):
        d = np.zeros((8, 8))
        d[0, 4] = 0.25
        d[4, 7] = 0.5
        d[4, 4] = 0.25
        assert boundary_shell_mass(d, shell=2) == pytest.approx(0.75)

    def test_small_grids_count_everything(self):
        assert boundary_shell_mass(np.ones((3, 3)), shell=2) == 9.0


class TestSeries:
    def test_strictly_increasing_steps_enforced(self):
        s = ObservableSeries()
        s.append(SeriesRecord(step=1, time=0.1, norm=1.0, mean=(0.0,), sigma=(0.0,)))
        with pytest.raises(ValueError):
            s.append(SeriesRecord(step=1, time=0.2, norm=1.0, mean=(0.0,), sigma=(0.0,)))

    def test_column_extraction(self):
        s = ObservableSeries()
        s.append(SeriesRecord(step=1, time=0.1, norm=1.0, mean=(0.5, 0.1), sigma=(0.2, 0.3)))
        s.append(SeriesRecord(step=2, time=0.2, norm=1.0, mean=(0.6, 0.2), sigma=(0.25, 0.35)))
        assert np.allclose(s.column("sigma", axis=1), [0.3, 0.35])
        assert np.allclose(s.column("time"), [0.1, 0.2])
