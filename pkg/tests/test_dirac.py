"""Tests for the Dirac-like systems D1, D2 and D3."""

import cmath
import math
from functools import partial

import numpy as np
import pytest

from susy_riccati.analysis import closed_form, darboux, dirac, numverify
from susy_riccati.analysis.models import FunctionTrace, Grid, ModelParams
from susy_riccati.config import BracketVariant, HypergeometricConvention, ReductionIntegration
from susy_riccati.exceptions import (
    BranchConflictError,
    DomainError,
    MissingDerivativeError,
    SingularPointError,
)


def riccati_grid(p: ModelParams, n_points: int = 200) -> Grid:
    lo, hi = (0.1 / p.c, 1.3 / p.c) if p.kappa == 1 else (0.2 / p.c, 3.0 / p.c)
    return closed_form.pole_free_grid(p, lo, hi, n_points, ("riccati",))


class TestD1:
    def test_components(self, params):
        grid = riccati_grid(params)
        spinor = dirac.solve_D1(params.with_(phase_phi=0.4, amp_W=2.0), grid)
        eta = grid.points
        if params.kappa == 1:
            np.testing.assert_allclose(spinor.w1, 1 / np.cos(eta))
            np.testing.assert_allclose(spinor.w2, np.cos(eta))
        else:
            np.testing.assert_allclose(spinor.w1, 1 / np.sinh(eta))
            np.testing.assert_allclose(spinor.w2, np.sinh(eta))

    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_first_order_rows(self, kappa, c):
        p = ModelParams(kappa=kappa, c=c)
        grid = riccati_grid(p)
        fermionic, bosonic = dirac.d1_residuals(p, dirac.solve_D1(p, grid))
        assert fermionic.passed, fermionic.sup_norm
        assert bosonic.passed, bosonic.sup_norm

    def test_momentum_factorization(self, params):
        fermionic, bosonic = dirac.momentum_factorization_residuals(params, riccati_grid(params))
        assert fermionic.passed, fermionic.sup_norm
        assert bosonic.passed, bosonic.sup_norm

    def test_needs_derivatives(self, params):
        grid = riccati_grid(params, 10)
        spinor = dirac.solve_D1(params, grid).model_copy(update={"dw1": None})
        with pytest.raises(MissingDerivativeError):
            dirac.d1_residuals(params, spinor)

    def test_grid_through_pole(self):
        p = ModelParams(kappa=1, c=1.0)
        with pytest.raises(SingularPointError):
            dirac.solve_D1(p, Grid(start=0.0, end=math.pi, n_points=3))


class TestD2Equations:
    def test_reduce_at_zero_coupling(self, params):
        eta = riccati_grid(params, 20).points
        fermionic, bosonic = dirac.d2_free_terms(params)
        _, q_bosonic = bosonic.coefficients(eta)
        _, q_fermionic = fermionic.coefficients(eta)
        np.testing.assert_allclose(q_bosonic, params.kappa * params.c**2, rtol=1e-12)
        np.testing.assert_allclose(
            q_fermionic, -params.c * closed_form.fermionic_free_term(params, eta), rtol=1e-12
        )

    def test_parameters(self):
        p = ModelParams(kappa=1, c=1.0, K=0.0)
        corrected = dirac.hypergeometric_parameters(p)
        assert corrected == pytest.approx((1.0, -1j))
        printed = dirac.hypergeometric_parameters(p, HypergeometricConvention.AS_PRINTED)
        assert printed == pytest.approx((1j, 1.0))

    def test_negative_kappa_parameters_continuous_at_zero_coupling(self):
        r0, s0 = dirac.hypergeometric_parameters(ModelParams(kappa=-1, c=1.0, K=0.0))
        assert r0 == pytest.approx(-1j)
        assert s0 == pytest.approx(1j)
        r_small, s_small = dirac.hypergeometric_parameters(ModelParams(kappa=-1, c=1.0, K=1e-12))
        assert abs(r_small - r0) < 1e-9
        assert abs(s_small - s0) < 1e-9

    @pytest.mark.parametrize("g", [0.5, 1.0, 4.0])
    def test_negative_kappa_parameters_principal_for_positive_coupling(self, g):
        r_val, s_val = dirac.hypergeometric_parameters(ModelParams(kappa=-1, c=2.0, K=g))
        assert r_val == pytest.approx(cmath.sqrt(-1 - 1j * g))
        assert s_val == pytest.approx(cmath.sqrt(-1 + 1j * g))

    def test_corrected_zero_coupling_is_plane_wave(self):
        p = ModelParams(kappa=1, c=1.0, K=0.0, A=1.0, B=0.0)
        eta = np.linspace(0.1, 1.3, 13)
        np.testing.assert_allclose(dirac.w2_closed_form(p, eta), np.exp(-1j * eta), rtol=1e-13)


class TestHypergeometricW2:
    @pytest.mark.parametrize(
        "p",
        [
            ModelParams(kappa=1, c=1.0, K=0.3, A=1.0, B=0.5),
            ModelParams(kappa=1, c=2.0, K=1.0, A=0.0, B=1.0),
            ModelParams(kappa=-1, c=1.0, K=1.0, C=1.0, D=0.5),
            ModelParams(kappa=-1, c=1.0, K=2.5, C=0.0, D=1.0),
        ],
        ids=["kappa+1-both", "kappa+1-B", "kappa-1-both", "kappa-1-D"],
    )
    def test_solves_bosonic_equation(self, p):
        grid = Grid(start=0.05, end=0.7 if p.c > 1 else 1.3, n_points=30)
        _, bosonic = dirac.d2_free_terms(p)
        report = numverify.residual(bosonic, partial(dirac.w2_closed_form_jet, p), grid, 1e-8)
        assert report.passed, report.sup_norm

    def test_scalar_evaluation(self):
        p = ModelParams(kappa=-1, c=1.0, K=1.0)
        value = dirac.w2_closed_form(p, 0.5)
        assert np.ndim(value) == 0
        assert value == dirac.w2_closed_form(p, np.array([0.5]))[0]

    @pytest.mark.parametrize("kappa", [1, -1])
    def test_match_superposition_reproduces_seed(self, kappa):
        p = ModelParams(kappa=kappa, c=1.0, K=0.0)
        anchor = closed_form.w_seed_jet(p, np.array([0.3]))
        first, second = dirac.match_superposition(
            p, 0.3, complex(anchor.value[0]), complex(anchor.d1[0])
        )
        names = ("A", "B") if kappa == 1 else ("C", "D")
        matched = p.with_(**{names[0]: first, names[1]: second})
        eta = np.linspace(0.05, 1.3, 40)
        np.testing.assert_allclose(
            dirac.w2_closed_form(matched, eta), closed_form.w_seed(p, eta), atol=1e-8
        )

    @pytest.mark.parametrize("eta", [math.pi - 0.3, math.pi, math.pi + 0.3])
    def test_branch_jets_smooth_past_half_turn(self, eta):
        # real irrational exponent sqrt(2), so y**mu has no single-valued form in y
        p = ModelParams(kappa=1, c=1.0, K=0.5)
        for index, jet in enumerate(dirac.w2_branch_jets(p, np.array([eta]))):

            def value(x, index=index):
                return complex(dirac.w2_branch_jets(p, np.array([x]))[index].value[0])

            d1, d2 = numverify.finite_diff(value, eta, h=1e-3)
            assert abs(jet.d1[0] - d1) < 1e-5 * max(1.0, abs(d1))
            assert abs(jet.d2[0] - d2) < 1e-5 * max(1.0, abs(d2))

    def test_branch_conflict(self):
        # 1 - p = -1 for K/c = 1.5 in the corrected convention
        p = ModelParams(kappa=1, c=1.0, K=1.5, A=1.0, B=0.0)
        with pytest.raises(BranchConflictError) as info:
            dirac.w2_closed_form(p, 0.5)
        assert info.value.branch == "A"

    def test_unused_branch_is_not_evaluated(self):
        p = ModelParams(kappa=1, c=1.0, K=1.5, A=0.0, B=1.0)
        assert np.isfinite(dirac.w2_closed_form(p, 0.5))


class TestD2Partner:
    @pytest.mark.parametrize("kappa", [1, -1])
    def test_coupling_map(self, kappa):
        p = ModelParams(kappa=kappa, c=1.0, K=1.0, A=1.0, B=0.5, C=1.0, D=0.5)
        grid = Grid(start=0.05, end=1.3, n_points=50)
        eta = grid.points
        w2 = dirac.w2_closed_form_jet(p, eta)
        w1 = dirac.w1_from_coupling(p, eta, w2)
        fermionic, _ = dirac.d2_free_terms(p)
        assert np.max(np.abs(fermionic.apply(eta, w1))) < 1e-6
        for report in dirac.d2_coupled_residuals(p, grid, w1, w2):
            assert report.passed, (report.name, report.sup_norm)

    def test_coupling_map_needs_coupling(self):
        p = ModelParams(K=0.0)
        eta = np.array([0.5])
        with pytest.raises(DomainError):
            dirac.w1_from_coupling(p, eta, closed_form.w_seed_jet(p, eta))

    @pytest.mark.parametrize("k", [0.0, 1.0, -0.5])
    def test_reduction_of_order(self, params, k):
        p = params.with_(k=k)
        grid = riccati_grid(p, 50)
        trace = dirac.w1_from_w2(p, partial(closed_form.w_seed_jet, p), grid)
        fermionic, _ = dirac.d2_free_terms(p)
        report = numverify.residual_trace(fermionic, trace, 1e-6)
        assert report.passed, report.sup_norm

    def test_reduction_without_k_is_reciprocal(self, params):
        grid = riccati_grid(params, 20)
        trace = dirac.w1_from_w2(params, partial(closed_form.w_seed_jet, params), grid)
        np.testing.assert_allclose(trace.values, 1 / closed_form.w_seed(params, grid.points))

    def test_reduction_modes_differ(self):
        p = ModelParams(kappa=1, c=1.0, k=1.0)
        grid = riccati_grid(p, 20)
        seed = partial(closed_form.w_seed_jet, p)
        eta_mode = dirac.w1_from_w2(p, seed, grid)
        jacobian_mode = dirac.w1_from_w2(p, seed, grid, ReductionIntegration.Y_JACOBIAN)
        assert eta_mode.values[0] == jacobian_mode.values[0]
        assert np.max(np.abs(eta_mode.values - jacobian_mode.values)) > 1e-3

    def test_reduction_through_zero(self):
        p = ModelParams(kappa=1, c=1.0)
        grid = Grid(start=0.0, end=math.pi, n_points=3)
        with pytest.raises(SingularPointError):
            dirac.w1_from_w2(p, partial(closed_form.w_seed_jet, p), grid)


class TestD3:
    def test_requires_phase_free_seed(self):
        p = ModelParams(kappa=1, phase_phi=0.2)
        with pytest.raises(DomainError):
            dirac.d3_system(p)
        with pytest.raises(DomainError):
            dirac.solve_D3_numeric(p, Grid(start=0.1, end=1.0, n_points=5), 1.0, 1.0)

    def test_gauge_round_trip(self):
        p = ModelParams(kappa=1, c=1.0, lam=1.0, K1=0.7, K2=0.4)
        grid = Grid(start=0.1, end=1.3, n_points=50)
        rng = np.random.default_rng(7)
        parts = [rng.normal(size=50) + 1j * rng.normal(size=50) for _ in range(3)]
        z = FunctionTrace(grid=grid, values=parts[0], d1=parts[1], d2=parts[2], name="z")
        back = dirac.inverse_gauge_transform(p, dirac.gauge_transform(p, z))
        np.testing.assert_allclose(back.values, z.values, rtol=1e-13)
        np.testing.assert_allclose(back.d1, z.d1, rtol=1e-12, atol=1e-13)
        np.testing.assert_allclose(back.d2, z.d2, rtol=1e-12, atol=1e-13)

    def test_gauge_factor_log_derivative(self):
        p = ModelParams(kappa=-1, c=1.0, lam=0.5, K1=0.3)
        eta = np.linspace(0.2, 1.2, 6)
        G = dirac.gauge_factor_jet(p, eta)
        P, _ = dirac.d3_system(p)[0].coefficients(eta)
        np.testing.assert_allclose(G.d1 / G.value, -P / 2, rtol=1e-13)

    def test_gauge_maps_solutions(self):
        p = ModelParams(kappa=1, c=1.0, lam=1.0, K1=0.7, K2=0.4)
        grid = Grid(start=0.1, end=1.3, n_points=100)
        gauged, _ = dirac.gauged_system(p)
        z = numverify.integrate_ode(gauged, 1.0, 0.5, grid)
        w = dirac.gauge_transform(p, z)
        direct, _ = dirac.d3_system(p)
        assert numverify.residual_trace(direct, w, 1e-8).passed

    def test_free_term_index(self):
        with pytest.raises(ValueError):
            dirac.q_free_term(ModelParams(), 3, 0.5)

    def test_zero_mass_anchor(self, params):
        p = params.with_(lam=1.0)
        lo, hi = (0.1, 1.3) if p.kappa == 1 else (0.2, 1.3)
        grid = closed_form.pole_free_grid(p, lo, hi, 200, ("riccati", "seed"))
        eta0 = float(grid.points[0])
        spinor = dirac.solve_D3_numeric(p, grid, *dirac.matched_initial_data(p, eta0))
        exact_w1 = closed_form.w_fermionic(p, grid.points)
        exact_w2 = darboux.w_general(p, grid.points)
        assert np.max(np.abs(spinor.w1 - exact_w1)) / np.max(np.abs(exact_w1)) < 1e-7
        assert np.max(np.abs(spinor.w2 - exact_w2)) / np.max(np.abs(exact_w2)) < 1e-7

    def test_initial_derivatives_match_closed_forms(self):
        p = ModelParams(kappa=1, c=1.0, lam=2.0)
        w1, w2 = dirac.matched_initial_data(p, 0.4)
        dw1, dw2 = dirac.d3_initial_derivatives(p, 0.4, w1, w2)
        assert dw1 == pytest.approx(complex(closed_form.w_fermionic_jet(p, 0.4).d1))
        assert dw2 == pytest.approx(complex(darboux.w_general_jet(p, 0.4).d1))

    @pytest.mark.parametrize("variant", list(BracketVariant))
    def test_coupled_rows(self, variant):
        p = ModelParams(kappa=1, c=1.0, lam=1.0, K1=0.7, K2=0.4)
        grid = Grid(start=0.1, end=1.3, n_points=200)
        spinor = dirac.solve_D3_numeric(p, grid, *dirac.matched_initial_data(p, 0.1), variant)
        row_w2, row_w1 = dirac.d3_coupled_residuals(p, spinor)
        assert row_w2.name == "d3_row_w2"
        assert row_w1.name == "d3_row_w1"
        if variant == BracketVariant.I_ON_BOTH:
            assert row_w2.passed, row_w2.sup_norm
            assert row_w1.passed, row_w1.sup_norm

    def test_free_term_limit(self):
        p = ModelParams(kappa=1, c=1.0, lam=1e6)
        eta = np.linspace(0.1, 1.0, 50)
        q = dirac.q_free_term(p, 2, eta)
        assert np.max(np.abs(q - p.kappa * p.c**2)) < 1e-4
