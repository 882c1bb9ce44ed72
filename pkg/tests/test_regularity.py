import numpy as np
import pytest

from toepres import (
    ExceptionalPointError,
    NotOnCurveError,
    build_domain,
    classify,
    contains,
    continue_roots,
    exceptional_set,
    p_coefficients,
    q_coefficients,
    solve_roots,
)

T_ANGLES = np.array([-np.pi / 3, np.pi, np.pi / 3])  # flower root angles at w0=0


def cosine_member(w, C13, eps):
    """Analytic membership criterion for the flower at the origin."""
    if abs(w) >= eps or w == 0:
        return False
    phi = np.angle(w)
    return bool(np.all(np.abs(np.cos(phi - 2 * T_ANGLES)) > 3 * C13))


class TestClassify:
    def test_flower_origin(self, flower):
        rep = classify(flower, 0.0)
        assert rep.counts == (0, 3, 0)
        assert not rep.cond_i and not rep.cond_ii and not rep.cond_iii
        assert not rep.locally_regular
        assert not rep.in_K
        assert rep.dist_to_K == pytest.approx(2 ** (1 / 3) + 2 ** (-2 / 3), abs=1e-8)
        assert rep.boundary_candidate
        assert rep.relaxed_simplicity

    def test_smooth_curve_point(self, flower):
        w0 = flower.eval(1j)  # -1 - i, a smooth point of the curve
        rep = classify(flower, w0)
        assert rep.cond_i
        assert rep.counts[1] == 1
        assert rep.boundary_candidate
        assert not rep.in_K

    def test_q_dominance_fails_at_origin(self, flower):
        rep = classify(flower, 0.0)
        assert rep.q_dominance is not None and len(rep.q_dominance) == 3
        # all three deflations have unimodular coefficients: 1 vs 2 fails
        assert all(flag is False for _, flag in rep.q_dominance)

    def test_q_dominance_none_off_curve(self, flower):
        rep = classify(flower, 3.0)
        assert rep.q_dominance is None
        assert not rep.boundary_candidate

    def test_cond_i_implies_deflation_nonzero_on_circle(self, flower):
        w0 = flower.eval(1j)
        rep = classify(flower, w0)
        assert rep.cond_i
        div_roots = solve_roots(p_coefficients(flower, w0)).roots
        t0 = div_roots[np.argmin(np.abs(np.abs(div_roots) - 1))]
        q = q_coefficients(p_coefficients(flower, w0), t0)
        grid = np.exp(2j * np.pi * np.arange(1024) / 1024)
        assert np.abs(q.eval(grid)).min() > 1e-3

    def test_exceptional_point_is_in_K(self, flower):
        exc = exceptional_set(flower)
        rep = classify(flower, exc.points[0])
        assert rep.in_K
        assert rep.dist_to_K <= 1e-8


class TestBuildDomain:
    def test_flower_entries(self, flower):
        dom = build_domain(flower, 0.0, C13=1 / 12, eps=0.25)
        assert len(dom.entries) == 3
        # c_j = conj(z_j) / (3 z_j) = 1/(3 z_j^2), so |c_j| = 1/3
        np.testing.assert_allclose(np.abs(dom.entries), 1 / 3, atol=1e-12)

    def test_entries_reciprocal_derivative_modulus(self, flower):
        w0 = flower.eval(1j)
        dom = build_domain(flower, w0)
        derivs = flower.eval_derivative(dom.roots)
        np.testing.assert_allclose(np.abs(dom.entries), 1 / np.abs(derivs), atol=1e-12)

    def test_exceptional_vertex_rejected(self, flower):
        exc = exceptional_set(flower)
        with pytest.raises(ExceptionalPointError):
            build_domain(flower, exc.points[0])

    def test_off_curve_vertex_rejected(self, flower):
        with pytest.raises(NotOnCurveError):
            build_domain(flower, 3.0)


class TestContains:
    def test_bisector_point_is_member(self, flower):
        dom = build_domain(flower, 0.0, C13=1 / 12, eps=0.25)
        w = 0.01 * np.exp(1j * np.pi / 3)
        # cosine values are (1, 1/2, 1/2): min |Re| = |w|/6 > |w|/12
        assert contains(dom, flower, w)

    def test_tangential_direction_excluded(self, flower):
        dom = build_domain(flower, 0.0, C13=1e-9, eps=0.25)
        w = 0.01 * np.exp(1j * 7 * np.pi / 6)  # cos(phi - 2 t_3) = 0
        assert not contains(dom, flower, w)

    def test_vertex_excluded(self, flower):
        dom = build_domain(flower, 0.0)
        assert not contains(dom, flower, 0.0)

    def test_outside_ball_excluded(self, flower):
        dom = build_domain(flower, 0.0, eps=0.25)
        assert not contains(dom, flower, 0.3 * np.exp(1j * np.pi / 3))

    def test_matches_cosine_criterion(self, flower):
        dom = build_domain(flower, 0.0, C13=1 / 12, eps=0.25)
        rng = np.random.default_rng(12)
        for _ in range(400):
            w = 0.25 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
            expected = cosine_member(w, 1 / 12, 0.25)
            if expected:
                from toepres import in_resolvent_set

                expected = in_resolvent_set(flower, w)
            assert contains(dom, flower, w) == expected

    def test_aperture_monotonicity(self, flower):
        wide = build_domain(flower, 0.0, C13=1 / 24, eps=0.25)
        narrow = build_domain(flower, 0.0, C13=1 / 12, eps=0.25)
        rng = np.random.default_rng(13)
        for _ in range(200):
            w = 0.2 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
            if contains(narrow, flower, w):
                assert contains(wide, flower, w)

    def test_threefold_rotation_covariance(self, flower):
        dom = build_domain(flower, 0.0, C13=1 / 12, eps=0.25)
        rot = np.exp(2j * np.pi / 3)
        rng = np.random.default_rng(14)
        for _ in range(150):
            w = 0.2 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
            assert contains(dom, flower, w) == contains(dom, flower, w * rot)


class TestStolzProperty:
    def test_unimodular_roots_leave_circle_linearly(self, flower):
        """Inside the approach domain the continued roots satisfy
        |1 - |z_j(w)|| >= C |z_j(w) - z_j(0)| with C bounded away from 0."""
        dom = build_domain(flower, 0.0, C13=1 / 12, eps=0.25)
        base = solve_roots(p_coefficients(flower, 0.0), w=0.0)
        direction = np.exp(1j * np.pi / 3)
        ratios = []
        for r in (1e-2, 1e-3, 1e-4):
            w = r * direction
            assert contains(dom, flower, w)
            cont = continue_roots(base, p_coefficients(flower, w), w=w)
            moved = np.abs(cont.roots - base.roots[cont.paired_base])
            off_circle = np.abs(1.0 - np.abs(cont.roots))
            ratios.extend((off_circle / moved).tolist())
        empirical_c = min(ratios)
        print(f"[empirical] non-tangential escape-rate constant: {empirical_c:.4f}")
        assert empirical_c > 0.1
