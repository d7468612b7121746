"""Tests for the 2F1 evaluator, against mpmath and classical identities."""

import cmath
import math

import mpmath
import numpy as np
import pytest

from susy_riccati.analysis.hyp2f1 import (
    Hyp2F1Args,
    hyp2f1,
    hyp2f1_jet,
    hyp2f1_via,
    nonpositive_integer,
    terminating_degree,
)
from susy_riccati.config import CutSide
from susy_riccati.exceptions import CutAmbiguityError, NoConvergenceError, PoleParameterError


def f(a, b, cc, z, cut_side=None):
    return hyp2f1(Hyp2F1Args(a=a, b=b, cc=cc, z=z, cut_side=cut_side))


def reference(a, b, cc, z):
    return complex(mpmath.hyp2f1(a, b, cc, z))


CASES = [
    pytest.param(0.5, 0.25, 1.5, 0.3, id="series-real"),
    pytest.param(1 + 0.5j, -0.3 + 0.2j, 2.2 - 0.1j, 0.5 + 0.4j, id="series-complex"),
    pytest.param(0.7, 1.3, 2.1, -3.0, id="pfaff"),
    pytest.param(0.5 + 0.5j, 0.2, 1.1, -0.5 + 1.5j, id="pfaff-complex"),
    pytest.param(0.3, 0.45, 1.9, 0.85 + 0.1j, id="near-one"),
    pytest.param(0.3, 0.6, 1.4, 2 + 1j, id="continuation-upper"),
    pytest.param(0.3, 0.6, 1.4, 2 - 1j, id="continuation-lower"),
    pytest.param(0.3, 0.7, 1.6, -20.0, id="continuation-negative"),
    pytest.param(1.0, 1.0, 2.0, 0.95, id="logarithmic-near-one"),
]


class TestValues:
    @pytest.mark.parametrize("a,b,cc,z", CASES)
    def test_matches_mpmath(self, a, b, cc, z):
        expected = reference(a, b, cc, z)
        assert abs(f(a, b, cc, z) - expected) <= 1e-10 * max(1.0, abs(expected))

    def test_value_at_zero(self):
        assert f(2.3 + 1j, -0.7, 0.4j + 1, 0.0) == 1.0

    @pytest.mark.parametrize("z", [-0.9, 0.5j, 0.6 - 0.6j, -5.0, 1.5 + 1j, 3 + 0.5j])
    def test_logarithmic_case(self, z):
        exact = -cmath.log(1 - z) / z
        assert abs(f(1, 1, 2, z) - exact) <= 1e-10 * abs(exact)

    def test_gauss_sum_at_one(self):
        a, b, cc = 0.3, 0.4, 1.5
        expected = math.gamma(cc) * math.gamma(cc - a - b) / (math.gamma(cc - a) * math.gamma(cc - b))
        assert f(a, b, cc, 1.0) == pytest.approx(expected, rel=1e-13)

    def test_divergent_at_one(self):
        with pytest.raises(NoConvergenceError):
            f(1, 1, 2, 1.0)

    def test_euler_transformation(self):
        a, b, cc, z = 0.4 - 0.2j, 1.1, 2.5 + 0.3j, -0.6 + 0.3j
        euler = (1 - z) ** (cc - a - b) * f(cc - a, cc - b, cc, z)
        assert abs(f(a, b, cc, z) - euler) <= 1e-12 * abs(euler)


def _complex(rng, re_range, im_range):
    return complex(rng.uniform(*re_range), rng.uniform(*im_range))


def _disc_point(rng, r_min, r_max):
    return rng.uniform(r_min, r_max) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))


class TestIdentities:
    def test_degenerate_lower_parameter(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a = _complex(rng, (-2, 2), (-1, 1))
            b = _complex(rng, (0.5, 3), (-0.5, 0.5))
            z = _disc_point(rng, 0.0, 0.9)
            expected = (1 - z) ** (-a)
            assert abs(f(a, b, b, z) - expected) <= 1e-11 * abs(expected), (a, b, z)

    def test_gauss_contiguous_relation(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 30:
            a = _complex(rng, (-2, 2), (-1, 1))
            b = _complex(rng, (-2, 2), (-1, 1))
            cc = _complex(rng, (0.5, 3), (-0.5, 0.5))
            z = _disc_point(rng, 0.0, 1.5)
            if abs(1 - z) < 0.25 or (z.real > 1 and abs(z.imag) < 0.1):
                continue
            terms = (
                (cc - a) * f(a - 1, b, cc, z),
                (2 * a - cc + (b - a) * z) * f(a, b, cc, z),
                a * (z - 1) * f(a + 1, b, cc, z),
            )
            assert abs(sum(terms)) <= 1e-9 * sum(abs(t) for t in terms), (a, b, cc, z)
            checked += 1

    def test_continuation_matches_series_inside_half_disc(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            args = Hyp2F1Args(
                a=_complex(rng, (-1, 1), (-0.5, 0.5)),
                b=_complex(rng, (-1, 1), (-0.5, 0.5)),
                cc=_complex(rng, (1, 2.5), (-0.5, 0.5)),
                z=_disc_point(rng, 0.1, 0.5),
            )
            series = hyp2f1_via(args, "series")
            continued = hyp2f1_via(args, "continuation")
            assert abs(series - continued) <= 1e-11 * max(1.0, abs(series)), args

    def test_connection_matches_series_inside_half_disc(self):
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 20:
            args = Hyp2F1Args(
                a=_complex(rng, (-1, 1), (-0.5, 0.5)),
                b=_complex(rng, (-1, 1), (-0.5, 0.5)),
                cc=_complex(rng, (1, 2.5), (-0.5, 0.5)),
                z=0.3 + _disc_point(rng, 0.0, 0.2),
            )
            s = args.cc - args.a - args.b
            if abs(s.real - round(s.real)) < 0.25 and abs(s.imag) < 0.25:
                continue
            series = hyp2f1_via(args, "series")
            connected = hyp2f1_via(args, "connection")
            assert abs(series - connected) <= 1e-11 * max(1.0, abs(series)), args
            checked += 1

    def test_connection_refuses_integer_gap(self):
        with pytest.raises(NoConvergenceError):
            hyp2f1_via(Hyp2F1Args(a=1, b=1, cc=2, z=0.4), "connection")


class TestPolynomials:
    def test_terminating_with_pole_beyond_degree(self):
        z = 0.7 - 0.2j
        assert f(-2, 1, -3, z) == pytest.approx(1 + 2 * z / 3 + z * z / 3, rel=1e-14)

    def test_terminating_on_cut_needs_no_side(self):
        assert f(-3, 0.5, 1.5, 5.0) == pytest.approx(reference(-3, 0.5, 1.5, 5.0), rel=1e-13)

    def test_pole_parameter(self):
        with pytest.raises(PoleParameterError):
            f(0.5, 0.5, -2, 0.3)
        with pytest.raises(PoleParameterError):
            f(-4, 0.5, -2, 0.3)

    def test_helpers(self):
        assert nonpositive_integer(-2 + 0j) == 2
        assert nonpositive_integer(0j) == 0
        assert nonpositive_integer(0.5 + 0j) is None
        assert nonpositive_integer(-1 + 0.1j) is None
        assert terminating_degree(-3 + 0j, -1 + 0j) == 1
        assert terminating_degree(0.5 + 0j, 1.5 + 0j) is None


class TestBranchCut:
    def test_on_cut_requires_side(self):
        with pytest.raises(CutAmbiguityError):
            f(0.3, 0.6, 1.4, 2.5)

    def test_upper_side_is_limit_from_above(self):
        upper = f(0.3, 0.6, 1.4, 2.5, CutSide.UPPER)
        above = reference(0.3, 0.6, 1.4, mpmath.mpc(2.5, 1e-12))
        assert abs(upper - above) <= 1e-9 * abs(above)

    def test_sides_are_conjugate_for_real_parameters(self):
        upper = f(0.3, 0.6, 1.4, 2.5, CutSide.UPPER)
        lower = f(0.3, 0.6, 1.4, 2.5, CutSide.LOWER)
        assert abs(upper.imag) > 1e-3
        assert abs(lower - upper.conjugate()) <= 1e-11 * abs(upper)

    def test_args_model(self):
        args = Hyp2F1Args(a=[1, 0], b=1, cc=2, z=[2.0, 0.0])
        assert args.z == 2 + 0j
        assert args.on_cut
        assert not Hyp2F1Args(a=1, b=1, cc=2, z=2 + 1e-3j).on_cut
        assert Hyp2F1Args(a=-3, b=-1, cc=2, z=0.5).terminating_degree == 1


class TestDerivatives:
    @pytest.mark.parametrize("z", [0.4 + 0.2j, -2.0, 1.5 + 0.8j])
    def test_jet_matches_contiguous_functions(self, z):
        a, b, cc = 0.6 + 0.1j, -0.4, 1.7
        jet = hyp2f1_jet(Hyp2F1Args(a=a, b=b, cc=cc, z=z))
        d1 = a * b / cc * reference(a + 1, b + 1, cc + 1, z)
        d2 = a * (a + 1) * b * (b + 1) / (cc * (cc + 1)) * reference(a + 2, b + 2, cc + 2, z)
        assert abs(jet.value - reference(a, b, cc, z)) <= 1e-10 * max(1.0, abs(jet.value))
        assert abs(jet.d1 - d1) <= 1e-10 * max(1.0, abs(d1))
        assert abs(jet.d2 - d2) <= 1e-9 * max(1.0, abs(d2))

    def test_polynomial_jet(self):
        jet = hyp2f1_jet(Hyp2F1Args(a=-2, b=1, cc=-3, z=0.5))
        assert jet.d1 == pytest.approx(2 / 3 + 2 * 0.5 / 3)
        assert jet.d2 == pytest.approx(2 / 3)

    def test_jet_singular_at_one(self):
        with pytest.raises(NoConvergenceError):
            hyp2f1_jet(Hyp2F1Args(a=0.3, b=0.4, cc=1.5, z=1.0))


def test_series_term_cap():
    with pytest.raises(NoConvergenceError):
        hyp2f1(Hyp2F1Args(a=0.5, b=0.5, cc=1.5, z=0.79), max_terms=5)
