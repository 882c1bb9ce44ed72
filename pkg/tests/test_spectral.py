import numpy as np
import pytest

from conftest import sample_resolvent_points
from toepres import (
    LaurentSymbol,
    curve_distance,
    dist_to_spectrum,
    exceptional_set,
    in_resolvent_set,
    partition,
    spectrum_curve,
    winding_number,
)


class TestPartition:
    def test_flower_at_zero_all_unimodular(self, flower):
        assert partition(flower, 0.0, 1e-6).counts == (0, 3, 0)

    def test_flower_far_outside(self, flower):
        assert partition(flower, 10.0, 1e-6).counts == (1, 0, 2)

    def test_band_membership_is_exact(self, flower):
        tau = 1e-3
        div = partition(flower, 0.0, tau)
        # roots sit on the circle, well inside the band
        assert div.counts[1] == 3
        mods = np.abs(div.root_set.roots)
        assert np.all(np.abs(mods - 1) <= tau / 2)

    def test_root_just_inside_band_is_unimodular(self, flower):
        # place a divisor root at radius 1 - tau/2: still labeled UN
        tau = 1e-3
        z0 = (1 - tau / 2) * np.exp(0.4j)
        w = flower.eval(z0)
        div = partition(flower, w, tau)
        i = int(np.argmin(np.abs(div.root_set.roots - z0)))
        assert div.label_names()[i] == "un"

    def test_counts_always_total(self, pentadiag):
        rng = np.random.default_rng(2)
        for _ in range(25):
            w = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            counts = partition(pentadiag, w).counts
            assert sum(counts) == pentadiag.m + pentadiag.k

    def test_tau_validation(self, flower):
        with pytest.raises(ValueError):
            partition(flower, 0.0, 0.5)


class TestResolventSet:
    def test_sector_point_is_resolvent(self, flower):
        assert in_resolvent_set(flower, 0.1 * np.exp(1j * np.pi / 3))

    def test_far_point_is_resolvent(self, flower):
        assert in_resolvent_set(flower, 3.0)

    def test_petal_interior_is_spectrum(self, flower):
        assert not in_resolvent_set(flower, 1.0)

    def test_curve_point_is_spectrum(self, flower):
        assert not in_resolvent_set(flower, flower.eval(np.exp(0.3j)))

    def test_winding_number_cross_check(self, flower, flower_curve):
        rng = np.random.default_rng(4)
        for _ in range(60):
            w = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            if np.abs(flower_curve.values - w).min() < 1e-3:
                continue
            div = partition(flower, w)
            n_in, n_un, _ = div.counts
            assert n_un == 0
            assert (n_in == flower.m) == (winding_number(flower, w) == 0)

    def test_stability_in_tau(self, flower, flower_curve):
        rng = np.random.default_rng(6)
        pts = sample_resolvent_points(flower, flower_curve, rng, 20, 1e-3)
        extra = [complex(rng.uniform(-4, 4), rng.uniform(-4, 4)) for _ in range(40)]
        for w in pts + [e for e in extra if np.abs(flower_curve.values - e).min() > 1e-3]:
            answers = {in_resolvent_set(flower, w, tau) for tau in (1e-8, 1e-6, 1e-4)}
            assert len(answers) == 1


class TestSpectrumCurve:
    def test_value_at_zero_angle(self, flower_curve):
        assert flower_curve.values[0] == pytest.approx(2.0)

    def test_minimum_modulus_near_symbol_roots(self, flower, flower_curve):
        # |b| vanishes on the circle at angles pi/3, pi, -pi/3
        mags = np.abs(flower_curve.values)
        for target in (np.pi / 3, np.pi, 5 * np.pi / 3):
            i = int(np.argmin(np.abs(flower_curve.thetas - target)))
            window = mags[max(0, i - 4): i + 5]
            assert window.min() < 1e-2

    def test_conjugation_symmetry_for_real_coefficients(self, flower_curve):
        # values at -theta are conjugates of values at theta
        vals = flower_curve.values
        flipped = np.conj(np.concatenate([[vals[0]], vals[1:][::-1]]))
        np.testing.assert_allclose(vals, flipped, atol=1e-12)

    def test_minimum_sample_count(self, flower):
        with pytest.raises(ValueError):
            spectrum_curve(flower, 100)


class TestDistToSpectrum:
    def test_flower_at_three(self, flower, flower_curve):
        assert dist_to_spectrum(flower, 3.0, flower_curve) == pytest.approx(1.0, abs=1e-6)

    def test_zero_on_curve(self, flower, flower_curve):
        w = flower.eval(np.exp(0.7j))
        assert dist_to_spectrum(flower, w, flower_curve) == 0.0

    def test_zero_inside_petal(self, flower, flower_curve):
        assert dist_to_spectrum(flower, 1.0, flower_curve) == 0.0

    def test_grid_refinement_consistency(self, flower, flower_curve):
        coarse = flower_curve
        fine = spectrum_curve(flower, 8192)
        rng = np.random.default_rng(8)
        pts = sample_resolvent_points(flower, coarse, rng, 100, 1e-3)
        for w in pts:
            d1 = dist_to_spectrum(flower, w, coarse)
            d2 = dist_to_spectrum(flower, w, fine)
            assert abs(d1 - d2) <= 1e-6

    def test_conjugation_symmetry(self, flower, flower_curve):
        rng = np.random.default_rng(10)
        pts = sample_resolvent_points(flower, flower_curve, rng, 20, 1e-3)
        for w in pts:
            d = dist_to_spectrum(flower, w, flower_curve)
            dc = dist_to_spectrum(flower, np.conj(w), flower_curve)
            assert abs(d - dc) <= 1e-9


class TestExceptionalSet:
    def test_flower_critical_data(self, flower):
        exc = exceptional_set(flower)
        lam_expected = 2.0 ** (-1.0 / 3.0) * np.exp(2j * np.pi * np.arange(3) / 3)
        assert len(exc.lambdas) == 3
        for lam in lam_expected:
            assert np.abs(exc.lambdas - lam).min() < 1e-10
        mod = 2.0 ** (1.0 / 3.0) + 2.0 ** (-2.0 / 3.0)
        assert len(exc.points) == 3
        np.testing.assert_allclose(np.abs(exc.points), mod, atol=1e-10)
        args = np.sort(np.angle(exc.points))
        np.testing.assert_allclose(args, [-2 * np.pi / 3, 0.0, 2 * np.pi / 3], atol=1e-10)

    def test_symmetric_symbol(self):
        b = LaurentSymbol(1, 1, np.array([1.0, 0.0, 1.0], dtype=complex))
        exc = exceptional_set(b)
        assert sorted(np.round(exc.points.real).astype(int).tolist()) == [-2, 2]
        np.testing.assert_allclose(exc.points.imag, 0.0, atol=1e-10)

    def test_lambdas_are_critical(self, pentadiag):
        exc = exceptional_set(pentadiag)
        assert np.abs(pentadiag.eval_derivative(exc.lambdas)).max() <= 1e-8

    def test_point_count_bound(self, pentadiag):
        exc = exceptional_set(pentadiag)
        assert len(exc.points) <= pentadiag.m + pentadiag.k + 1
