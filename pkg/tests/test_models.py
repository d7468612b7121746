"""Tests for parameter, grid, trace and report models."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from susy_riccati.analysis.models import (
    FunctionTrace,
    Grid,
    Jet,
    LinearODE,
    ModelParams,
    OrderEstimate,
    ResidualReport,
    SpinorTrace,
    zero_coefficient,
)


class TestModelParams:
    def test_defaults(self):
        p = ModelParams()
        assert p.kappa == 1
        assert p.c == 1.0
        assert p.lam == 1.0
        assert p.A == 1 + 0j
        assert p.delta_K == 0.0

    @pytest.mark.parametrize("c", [0.0, math.inf, math.nan])
    def test_rejects_bad_c(self, c):
        with pytest.raises(ValidationError):
            ModelParams(c=c)

    def test_rejects_kappa_outside_signs(self):
        with pytest.raises(ValidationError):
            ModelParams(kappa=0)

    @pytest.mark.parametrize(
        "field,value", [("lam", 0.0), ("amp_W", -1.0), ("K", -0.1), ("K1", -1.0)]
    )
    def test_rejects_out_of_range(self, field, value):
        with pytest.raises(ValidationError):
            ModelParams(**{field: value})

    def test_lambda_alias(self):
        assert ModelParams(**{"lambda": 2.5}).lam == 2.5
        assert ModelParams(lam=2.5).lam == 2.5

    def test_with_replaces_and_validates(self):
        p = ModelParams(kappa=-1, c=2.0)
        q = p.with_(**{"lambda": 4.0}, K1=0.3)
        assert (q.kappa, q.c, q.lam, q.K1) == (-1, 2.0, 4.0, 0.3)
        assert p.lam == 1.0
        with pytest.raises(ValidationError):
            p.with_(c=0.0)

    def test_complex_fields_accept_pairs(self):
        p = ModelParams(A=[0.5, -1.0], B="1+2j")
        assert p.A == 0.5 - 1j
        assert p.B == 1 + 2j

    def test_json_dump_uses_pairs_and_alias(self):
        data = ModelParams(D=2j).model_dump(mode="json", by_alias=True)
        assert data["D"] == [0.0, 2.0]
        assert "lambda" in data

    def test_is_frozen(self):
        with pytest.raises(ValidationError):
            ModelParams().c = 2.0  # type: ignore[misc]

    def test_delta_K(self):
        assert ModelParams(K1=0.7, K2=0.4).delta_K == pytest.approx(0.3)


class TestGrid:
    def test_points_are_inclusive(self):
        grid = Grid(start=0.0, end=1.0, n_points=11)
        np.testing.assert_allclose(grid.points, np.linspace(0, 1, 11))
        assert grid.spacing == pytest.approx(0.1)
        assert len(grid) == 11

    def test_excludes_points_near_singularities(self):
        grid = Grid(start=0.0, end=1.0, n_points=11, excluded_radius=0.05, singularities=(0.5,))
        assert 0.5 not in grid.points
        assert len(grid) == 10
        assert grid.lattice.size == 11

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"start": 1.0, "end": 0.0, "n_points": 5},
            {"start": 0.0, "end": 0.0, "n_points": 5},
            {"start": 0.0, "end": 1.0, "n_points": 1},
            {"start": 0.0, "end": math.inf, "n_points": 5},
            {"start": 0.0, "end": 1.0, "n_points": 5, "excluded_radius": 0.0},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            Grid(**kwargs)

    def test_rejects_fully_excluded(self):
        with pytest.raises(ValidationError):
            Grid(start=0.0, end=0.01, n_points=3, excluded_radius=1.0, singularities=(0.0,))


class TestTraces:
    def test_function_trace_shape_checked(self):
        grid = Grid(start=0.0, end=1.0, n_points=5)
        with pytest.raises(ValidationError):
            FunctionTrace(grid=grid, values=np.zeros(4))

    def test_function_trace_rejects_non_finite(self):
        grid = Grid(start=0.0, end=1.0, n_points=3)
        with pytest.raises(ValidationError):
            FunctionTrace(grid=grid, values=[1.0, math.nan, 2.0])

    def test_from_jet_broadcasts_constants(self):
        grid = Grid(start=0.0, end=1.0, n_points=4)
        trace = FunctionTrace.from_jet(grid, Jet(2.0, 0.0, 0.0), name="two")
        np.testing.assert_array_equal(trace.values, np.full(4, 2.0 + 0j))
        assert trace.name == "two"
        assert trace.values.dtype == complex

    def test_spinor_component(self):
        grid = Grid(start=0.0, end=1.0, n_points=3)
        spinor = SpinorTrace(grid=grid, w1=[1, 2, 3], w2=[4, 5, 6], dw1=[0, 0, 0])
        first = spinor.component(1)
        assert first.name == "w1"
        np.testing.assert_array_equal(first.d1, np.zeros(3))
        assert spinor.component(2).d1 is None
        with pytest.raises(ValueError):
            spinor.component(3)


class TestLinearODE:
    def test_apply_on_exact_solution(self):
        ode = LinearODE(P=zero_coefficient, Q=lambda eta: np.ones_like(eta))
        eta = np.linspace(0, 3, 7)
        jet = Jet(np.cos(eta), -np.sin(eta), -np.cos(eta))
        np.testing.assert_allclose(ode.apply(eta, jet), 0, atol=1e-15)

    def test_coefficients_broadcast_scalars(self):
        ode = LinearODE(P=lambda eta: 2.0, Q=lambda eta: 1j)
        P, Q = ode.coefficients(np.zeros(3))
        assert P.shape == Q.shape == (3,)
        assert Q[0] == 1j


class TestResidualReport:
    def test_from_residual(self):
        eta = np.linspace(0.0, 1.0, 5)
        residual = np.array([0.0, 1e-3, -3e-3j, 2e-3, 0.0])
        report = ResidualReport.from_residual("r", eta, residual, 1e-2, 0.25)
        assert report.sup_norm == pytest.approx(3e-3)
        assert report.worst_eta == 0.5
        assert report.n_points == 5
        assert report.passed
        assert report.l2_norm <= report.sup_norm * math.sqrt(5 * 0.25)

    def test_fails_above_tolerance(self):
        report = ResidualReport.from_residual("r", np.arange(2.0), np.array([0, 1.0]), 0.5, 1.0)
        assert not report.passed

    def test_non_finite_residual_fails(self):
        eta = np.arange(3.0)
        report = ResidualReport.from_residual("r", eta, np.array([0, np.inf, 0]), 1.0, 1.0)
        assert report.sup_norm == math.inf
        assert report.worst_eta == 1.0
        assert not report.passed

    def test_empty_residual(self):
        with pytest.raises(ValueError):
            ResidualReport.from_residual("r", np.array([]), np.array([]), 1.0, 1.0)

    def test_measured(self):
        report = ResidualReport.measured("ratio", 0.1, 0.125)
        assert report.passed
        assert report.sup_norm == report.l2_norm == 0.1
        assert not ResidualReport.measured("exact", 1e-300, 0.0).passed

    def test_summary_uses_pass_key(self):
        summary = ResidualReport.measured("x", 0.0, 0.0).summary()
        assert summary == {
            "name": "x",
            "sup_norm": 0.0,
            "l2_norm": 0.0,
            "tolerance": 0.0,
            "pass": True,
        }

    def test_validates_by_alias(self):
        report = ResidualReport.model_validate(
            {
                "sup_norm": 1.0,
                "l2_norm": 1.0,
                "worst_eta": 0.0,
                "n_points": 1,
                "tolerance": 2.0,
                "pass": True,
            }
        )
        assert report.passed


class TestOrderEstimate:
    def test_ratio_and_order(self):
        estimate = OrderEstimate(step=0.2, coarse_error=3.2e-5, fine_error=1e-6)
        assert estimate.ratio == pytest.approx(32.0)
        assert estimate.observed_order == pytest.approx(5.0)

    def test_exact_fine_error(self):
        estimate = OrderEstimate(step=0.2, coarse_error=1e-6, fine_error=0.0)
        assert estimate.ratio == math.inf
        assert estimate.observed_order == math.inf
