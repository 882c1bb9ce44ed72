import numpy as np
import pytest

from toepres import (
    ExceptionalPointError,
    InsufficientDataError,
    build_domain,
    contains,
    default_radii,
    exceptional_set,
    flower_preset,
    grid_scan,
    in_resolvent_set,
    ray_scan,
    spectrum_curve,
)

BISECTOR = np.exp(1j * np.pi / 3)


@pytest.fixture(scope="module")
def preset():
    return flower_preset()


@pytest.fixture(scope="module")
def flower_ray_report(preset):
    curve = spectrum_curve(preset.symbol, 2048)
    return ray_scan(
        preset.symbol,
        0.0,
        BISECTOR,
        default_radii(1e-1, 1e-4, 4),
        preset.domain,
        probes=4,
        N=256,
        curve=curve,
        preset_name="flower",
    )


class TestFlowerPreset:
    def test_symbol_and_divisor(self, preset):
        assert (preset.symbol.m, preset.symbol.k) == (1, 2)
        np.testing.assert_allclose(preset.symbol.coeffs, [1, 0, 0, 1])

    def test_sector_total_angle(self, preset):
        total = sum(hi - lo for lo, hi in preset.sectors)
        assert total == pytest.approx(np.pi)

    def test_defaults(self, preset):
        assert preset.C13 == pytest.approx(1 / 12)
        assert preset.eps == pytest.approx(0.25)
        assert preset.delta == pytest.approx(np.pi / 36)

    def test_delta_sectors_inside_approach_domain(self, preset):
        """Sector interiors land in the approach domain once the aperture is
        compatible: |cos| >= sin(delta) on the delta-interior, so any
        C13 < sin(delta)/3 works.  (The default pairing C13 = 1/12 with
        delta = pi/36 is not compatible: sin(pi/36)/3 ~ 0.029 < 1/12.)"""
        delta = np.pi / 9
        dom = build_domain(preset.symbol, 0.0, C13=1 / 12, eps=0.25)
        lo_hi = [(lo + delta, hi - delta) for lo, hi in preset.sectors]
        rng = np.random.default_rng(40)
        for _ in range(2000):
            lo, hi = lo_hi[rng.integers(3)]
            phi = rng.uniform(lo, hi)
            r = 0.2 * np.sqrt(rng.uniform(1e-4, 1.0))
            w = r * np.exp(1j * phi)
            assert contains(dom, preset.symbol, w)

    def test_default_pairing_has_counterexample(self, preset):
        # just inside the delta-interior edge the cosine is sin(delta) < 1/4
        phi = np.pi / 6 + preset.delta * 1.01
        w = 0.05 * np.exp(1j * phi)
        assert in_resolvent_set(preset.symbol, w)
        assert not contains(preset.domain, preset.symbol, w)


class TestRayScan:
    def test_all_records_inside_domain(self, flower_ray_report):
        assert all(rec.in_omega_prime for rec in flower_ray_report.records)

    def test_record_invariants(self, flower_ray_report):
        for rec in flower_ray_report.records:
            assert rec.product_lower <= rec.product_upper + 1e-12
            assert rec.dist <= rec.r + 1e-9  # vertex on the spectrum
            assert rec.lower <= rec.upper + 1e-12

    def test_members_are_resolvent_points(self, preset, flower_ray_report):
        for rec in flower_ray_report.records:
            if rec.in_omega_prime:
                assert rec.in_resolvent
                assert rec.dist > 0

    def test_tangential_direction_refused(self, preset):
        direction = np.exp(1j * 7 * np.pi / 6)  # cosine-zero for one entry
        with pytest.raises(InsufficientDataError):
            ray_scan(
                preset.symbol,
                0.0,
                direction,
                default_radii(1e-1, 1e-3, 3),
                preset.domain,
                probes=1,
                N=128,
            )

    def test_exceptional_vertex_refused(self, preset):
        exc = exceptional_set(preset.symbol)
        w0 = exc.points[0]
        dom = preset.domain
        with pytest.raises(ExceptionalPointError):
            ray_scan(preset.symbol, w0, 1.0, default_radii(1e-2, 1e-3, 4), dom)

    def test_radii_validation(self, preset):
        with pytest.raises(ValueError):
            ray_scan(preset.symbol, 0.0, BISECTOR, [1e-4, 1e-3], preset.domain)
        with pytest.raises(ValueError):
            ray_scan(preset.symbol, 0.0, BISECTOR, [0.5, 0.1], preset.domain)

    def test_csv_deterministic(self, preset):
        curve = spectrum_curve(preset.symbol, 2048)
        kwargs = dict(probes=2, N=128, curve=curve)
        r1 = ray_scan(preset.symbol, 0.0, BISECTOR,
                      default_radii(1e-1, 1e-3, 3), preset.domain, **kwargs)
        r2 = ray_scan(preset.symbol, 0.0, BISECTOR,
                      default_radii(1e-1, 1e-3, 3), preset.domain, **kwargs)
        assert r1.csv_text() == r2.csv_text()

    def test_thread_count_does_not_change_output(self, preset, monkeypatch):
        curve = spectrum_curve(preset.symbol, 2048)
        kwargs = dict(probes=2, N=128, curve=curve)
        serial = ray_scan(preset.symbol, 0.0, BISECTOR,
                          default_radii(1e-1, 1e-3, 3), preset.domain, **kwargs)
        monkeypatch.setenv("TOEPRES_THREADS", "4")
        threaded = ray_scan(preset.symbol, 0.0, BISECTOR,
                            default_radii(1e-1, 1e-3, 3), preset.domain, **kwargs)
        assert serial.csv_text() == threaded.csv_text()

    def test_csv_schema(self, flower_ray_report):
        lines = flower_ray_report.csv_text().strip().split("\n")
        assert lines[0] == (
            "w_re,w_im,r,dist,in_omega_prime,lower,upper,product_lower,product_upper"
        )
        assert len(lines) == 1 + len(flower_ray_report.records)
        assert all(len(line.split(",")) == 9 for line in lines[1:])


class TestRegularPointScan:
    def test_linear_growth_at_smooth_boundary_point(self, flower):
        """At a single-unimodular-root boundary point the factorization
        upper bound itself tracks 1/dist: slope -1 and a bounded product."""
        w0 = flower.eval(1j)  # -1 - i
        direction = (-2.0 + 1.0j) / np.sqrt(5.0)  # outward normal
        dom = build_domain(flower, w0, C13=1 / 12, eps=0.2)
        report = ray_scan(
            flower,
            w0,
            direction,
            default_radii(1e-1, 1e-4, 4),
            dom,
            probes=2,
            N=128,
        )
        assert -1.2 <= report.slope_fit_upper <= -0.8
        assert report.product_max_over_min <= 10.0


class TestGridScan:
    def test_membership_structure(self, preset):
        curve = spectrum_curve(preset.symbol, 2048)
        report = grid_scan(
            preset.symbol, 0.0, 0.2, 15, preset.domain,
            probes=1, N=128, curve=curve,
        )
        members = [r for r in report.records if r.in_omega_prime]
        frac = len(members) / len(report.records)
        assert 0.0 < frac < 1.0
        for rec in members:
            assert rec.in_resolvent
            assert np.isfinite(rec.lower) and np.isfinite(rec.upper)
        for rec in report.records:
            if not rec.in_omega_prime:
                assert np.isnan(rec.lower) and np.isnan(rec.upper)

    def test_threefold_symmetric_membership(self, preset):
        # rotating the window by 2 pi / 3 maps members to members
        dom = preset.domain
        rng = np.random.default_rng(41)
        rot = np.exp(2j * np.pi / 3)
        for _ in range(300):
            w = 0.2 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
            assert contains(dom, preset.symbol, w) == contains(dom, preset.symbol, w * rot)


class TestDefaultRadii:
    def test_log_spacing(self):
        r = default_radii(1e-1, 1e-4, 8)
        assert len(r) == 25
        assert r[0] == pytest.approx(1e-1)
        assert r[-1] == pytest.approx(1e-4)
        ratios = r[:-1] / r[1:]
        np.testing.assert_allclose(ratios, ratios[0])
