import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affinedescent.errors import NoFiniteStep, NotDescent
from affinedescent.line_search import (MAX_BACKTRACKS, ArmijoSearch,
                                       ExactSearch, FixedStep,
                                       LineSearchStatus, StrongWolfeSearch,
                                       armijo_backtrack, bb_initial_step,
                                       exact_search, strong_wolfe_search)


class TestSpecValidation:
    def test_bad_parameters_rejected(self):
        with pytest.raises(ValueError):
            ExactSearch(alpha_max=0.0)
        with pytest.raises(ValueError):
            ExactSearch(tol=-1.0)
        with pytest.raises(ValueError):
            ArmijoSearch(sigma=0.0)
        with pytest.raises(ValueError):
            ArmijoSearch(beta=1.0)
        with pytest.raises(ValueError):
            ArmijoSearch(alpha0=0.0)
        with pytest.raises(ValueError):
            StrongWolfeSearch(c1=0.5, c2=0.4)
        with pytest.raises(ValueError):
            StrongWolfeSearch(c1=0.0)
        with pytest.raises(ValueError):
            FixedStep(alpha=0.0)


class TestExactSearch:
    def test_quadratic_minimum_to_machine_precision(self):
        res = exact_search(lambda a: (a - 0.3) ** 2, alpha_max=10.0)
        assert res.status is LineSearchStatus.ACCEPTED
        assert res.alpha == pytest.approx(0.3, abs=1e-10)

    def test_tiny_quadratic_minimizer_resolved(self):
        # minimizer near 1e-4 of the span still found to ~1e-10
        t = 1.2345e-4
        res = exact_search(lambda a: (a - t) ** 2, alpha_max=10.0)
        assert res.alpha == pytest.approx(t, abs=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.01, 9.9))
    def test_random_quadratic_minimizers(self, t):
        res = exact_search(lambda a: 3.0 * (a - t) ** 2 - 1.0, alpha_max=10.0)
        assert res.alpha == pytest.approx(t, abs=1e-8)
        assert res.f_new == pytest.approx(-1.0, abs=1e-12)

    def test_increasing_phi_returns_zero(self):
        res = exact_search(lambda a: a * a + a, alpha_max=10.0)
        assert res.alpha == 0.0
        assert res.f_new == 0.0

    def test_upper_bound_shrinks_past_domain_wall(self):
        def phi(a):
            return np.inf if a > 0.5 else (a - 0.4) ** 2

        res = exact_search(phi, alpha_max=10.0)
        assert res.alpha == pytest.approx(0.4, abs=1e-8)

    def test_everything_infinite_raises(self):
        with pytest.raises(NoFiniteStep):
            exact_search(lambda a: np.inf if a > 0 else 0.0, alpha_max=10.0)

    def test_infinite_origin_raises(self):
        with pytest.raises(NoFiniteStep):
            exact_search(lambda a: np.inf, alpha_max=1.0)

    def test_nonsmooth_phi_still_bracketed(self):
        res = exact_search(lambda a: abs(a - 2.0), alpha_max=10.0)
        assert res.alpha == pytest.approx(2.0, abs=1e-8)


class TestArmijo:
    def test_full_step_accepted_on_well_scaled_quadratic(self):
        # phi = (a-1)^2 - 1: phi(1) = -1 <= 0 + sigma*1*(-2)
        res = armijo_backtrack(lambda a: (a - 1.0) ** 2 - 1.0, -2.0,
                               ArmijoSearch())
        assert res.status is LineSearchStatus.ACCEPTED
        assert res.alpha == 1.0
        assert res.f_new == -1.0

    def test_backtracks_to_half_on_overshoot(self):
        # phi = a^2 - a: phi(1) = 0 > sigma*(-1); phi(0.5) = -0.25 accepted
        res = armijo_backtrack(lambda a: a * a - a, -1.0, ArmijoSearch())
        assert res.alpha == 0.5
        assert res.f_new == -0.25

    def test_accepts_first_alpha_meeting_inequality(self):
        # phi = a^2/2 - a: phi(1) = -0.5 accepted immediately
        res = armijo_backtrack(lambda a: 0.5 * a * a - a, -1.0, ArmijoSearch())
        assert res.alpha == 1.0

    def test_infinite_values_are_backtracked_through(self):
        def phi(a):
            return np.inf if a > 0.3 else -a

        res = armijo_backtrack(phi, -1.0, ArmijoSearch())
        assert res.status is LineSearchStatus.ACCEPTED
        assert res.alpha == 0.25

    def test_nondescent_slope_rejected(self):
        with pytest.raises(NotDescent):
            armijo_backtrack(lambda a: a, 0.0, ArmijoSearch())

    def test_budget_exhaustion_reports_max_backtracks(self):
        res = armijo_backtrack(lambda a: a if a > 0 else 0.0, -1.0,
                               ArmijoSearch())
        assert res.status is LineSearchStatus.MAX_BACKTRACKS
        assert res.evals == MAX_BACKTRACKS + 2   # phi(0) plus every trial

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.05, 20.0), st.floats(0.1, 5.0))
    def test_accepted_step_satisfies_inequality(self, curv, slope):
        phi = lambda a: 0.5 * curv * a * a - slope * a
        spec = ArmijoSearch()
        res = armijo_backtrack(phi, -slope, spec)
        assert res.status is LineSearchStatus.ACCEPTED
        assert res.f_new <= 0.0 + spec.sigma * res.alpha * (-slope) + 1e-15


class TestStrongWolfe:
    def check(self, phi, dphi, spec=None):
        spec = spec or StrongWolfeSearch()
        res = strong_wolfe_search(phi, dphi, spec)
        assert res.status is LineSearchStatus.ACCEPTED
        assert res.f_new <= phi(0.0) + spec.c1 * res.alpha * dphi(0.0) + 1e-12
        assert abs(dphi(res.alpha)) <= -spec.c2 * dphi(0.0) + 1e-12
        return res

    def test_quadratic_accepts_unit_step(self):
        res = self.check(lambda a: (a - 1.0) ** 2 - 1.0,
                         lambda a: 2.0 * (a - 1.0))
        assert res.alpha == 1.0

    def test_narrow_quadratic_needs_zoom(self):
        # minimizer at 0.05: alpha=1 violates sufficient decrease
        res = self.check(lambda a: 100.0 * (a - 0.05) ** 2,
                         lambda a: 200.0 * (a - 0.05))
        assert 0.0 < res.alpha < 1.0

    def test_flat_tail_requires_expansion(self):
        # minimizer at 4: phi keeps decreasing past alpha=1, so the
        # bracketing loop must expand before any zoom
        res = self.check(lambda a: (a - 4.0) ** 2, lambda a: 2.0 * (a - 4.0),
                         StrongWolfeSearch(c2=0.1))
        assert res.alpha > 1.0

    def test_domain_wall_is_bracketed_through(self):
        def phi(a):
            return np.inf if a >= 2.0 else (a - 1.0) ** 2 - 1.0

        def dphi(a):
            return 2.0 * (a - 1.0)

        res = self.check(phi, dphi)
        assert res.alpha < 2.0

    def test_nondescent_slope_rejected(self):
        with pytest.raises(NotDescent):
            strong_wolfe_search(lambda a: a, lambda a: 1.0,
                                StrongWolfeSearch())

    def test_curvature_never_met_returns_best_decrease_point(self):
        # linear descent: |dphi| stays at 1, so the curvature condition is
        # unattainable and expansion runs out at alpha_max
        res = strong_wolfe_search(lambda a: -a, lambda a: -1.0,
                                  StrongWolfeSearch(alpha_max=1.0))
        assert res.status is LineSearchStatus.ZOOM_FAILED
        assert res.alpha == 1.0
        assert res.f_new == -1.0

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.02, 8.0), st.floats(0.05, 10.0))
    def test_wolfe_pair_holds_on_random_quadratics(self, t, curv):
        phi = lambda a: 0.5 * curv * (a - t) ** 2
        dphi = lambda a: curv * (a - t)
        self.check(phi, dphi)


class TestBarzilaiBorwein:
    def test_bb1_and_bb2_formulas(self):
        s = np.array([1.0, 2.0])
        y = np.array([0.5, 1.0])
        assert bb_initial_step(s, y, "BB1") == pytest.approx(5.0 / 2.5)
        assert bb_initial_step(s, y, "BB2") == pytest.approx(2.5 / 1.25)

    def test_nonpositive_curvature_falls_back_to_one(self):
        assert bb_initial_step(np.array([1.0]), np.array([-1.0])) == 1.0
        assert bb_initial_step(np.array([1.0]), np.array([0.0])) == 1.0

    def test_clamping(self):
        s = np.array([1e6])
        y = np.array([1e-6])
        assert bb_initial_step(s, y, "BB1") == 1e4
        s = np.array([1e-6])
        y = np.array([1e6])
        assert bb_initial_step(s, y, "BB1") == 1e-8

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            bb_initial_step(np.array([1.0]), np.array([1.0]), "BB3")

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            bb_initial_step(np.array([1.0]), np.array([1.0, 2.0]))

    def test_bb1_dominates_bb2(self):
        # Cauchy-Schwarz: s's/s'y >= s'y/y'y whenever s'y > 0
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = rng.normal(size=4)
            y = rng.normal(size=4)
            if float(s @ y) <= 0.0:
                continue
            assert bb_initial_step(s, y, "BB1") >= \
                bb_initial_step(s, y, "BB2") - 1e-12
