"""Gauss hypergeometric function 2F1(a, b; c; z) for complex parameters and argument.

Evaluation path, in order of preference:

1. terminating polynomial when a or b is a nonpositive integer,
2. Maclaurin series for |z| <= 0.8,
3. Pfaff transformation when it maps z into that disc,
4. the 1 - z connection formula near z = 1 when c - a - b is not an integer,
5. Taylor continuation of the hypergeometric ODE along a path from |z| = 0.5.

The result is the principal branch with its cut along [1, inf). Arguments on the
cut need a side (``cut_side``); the value is the limit from that half plane.
"""

from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import gamma, rgamma

from ..config import HYP2F1_MAX_TERMS, HYP2F1_SERIES_RADIUS, CutSide
from ..exceptions import CutAmbiguityError, NoConvergenceError, PoleParameterError
from ..utils.logging import get_logger
from .models import ComplexNumber, Jet

logger = get_logger(__name__)

_RELATIVE_STOP = 1e-16
_STOP_RUN = 3
_START_RADIUS = 0.5
_MAX_STEPS = 10_000
_INTEGER_GAP = 0.1

EvaluationPath = Literal["series", "connection", "continuation"]


class Hyp2F1Args(BaseModel):
    """Parameters and argument of one 2F1 evaluation."""

    model_config = ConfigDict(frozen=True)

    a: ComplexNumber
    b: ComplexNumber
    cc: ComplexNumber
    z: ComplexNumber
    cut_side: Optional[CutSide] = None

    @property
    def terminating_degree(self) -> Optional[int]:
        """Degree of the polynomial when a or b is a nonpositive integer."""
        return terminating_degree(self.a, self.b)

    @property
    def on_cut(self) -> bool:
        return self.z.imag == 0.0 and self.z.real > 1.0


def nonpositive_integer(x: complex) -> Optional[int]:
    if abs(x.imag) > 1e-14 or x.real > 1e-14:
        return None
    nearest = round(x.real)
    if abs(x.real - nearest) > 1e-12:
        return None
    return -int(nearest)


def terminating_degree(a: complex, b: complex) -> Optional[int]:
    degrees = [d for d in (nonpositive_integer(a), nonpositive_integer(b)) if d is not None]
    return min(degrees) if degrees else None


def _check_lower_parameter(a: complex, b: complex, cc: complex) -> Optional[int]:
    """Return the polynomial degree if the series terminates, raise on a pole of cc."""
    degree = terminating_degree(a, b)
    pole = nonpositive_integer(cc)
    if pole is not None and (degree is None or degree > pole):
        raise PoleParameterError(cc)
    return degree


def _polynomial_coefficients(a: complex, b: complex, cc: complex, degree: int) -> np.ndarray:
    coefficients = [1.0 + 0j]
    for k in range(degree):
        coefficients.append(coefficients[-1] * (a + k) * (b + k) / ((cc + k) * (k + 1)))
    return np.asarray(coefficients, dtype=complex)


def _polynomial_jet(a: complex, b: complex, cc: complex, z: complex, degree: int) -> Jet:
    coefficients = _polynomial_coefficients(a, b, cc, degree)
    poly = np.polynomial.Polynomial(coefficients)
    d1 = poly.deriv(1) if degree >= 1 else np.polynomial.Polynomial([0j])
    d2 = poly.deriv(2) if degree >= 2 else np.polynomial.Polynomial([0j])
    return Jet(complex(poly(z)), complex(d1(z)), complex(d2(z)))


def _series_jet(a: complex, b: complex, cc: complex, z: complex, max_terms: int) -> Jet:
    """Maclaurin series for F, F' and F'' summed together."""
    coefficient = 1.0 + 0j
    pow_k, pow_km1, pow_km2 = 1.0 + 0j, 0j, 0j
    s0, s1, s2 = 0j, 0j, 0j
    small = 0

    for k in range(max_terms):
        t0 = coefficient * pow_k
        t1 = k * coefficient * pow_km1
        t2 = k * (k - 1) * coefficient * pow_km2
        s0 += t0
        s1 += t1
        s2 += t2

        if (
            abs(t0) <= _RELATIVE_STOP * abs(s0)
            and abs(t1) <= _RELATIVE_STOP * max(abs(s1), 1e-300)
            and abs(t2) <= _RELATIVE_STOP * max(abs(s2), 1e-300)
        ):
            small += 1
            if small >= _STOP_RUN:
                return Jet(s0, s1, s2)
        else:
            small = 0

        coefficient *= (a + k) * (b + k) / ((cc + k) * (k + 1))
        pow_km2, pow_km1, pow_k = pow_km1, pow_k, pow_k * z
        if coefficient == 0:
            return Jet(s0, s1, s2)

    raise NoConvergenceError("2F1 series", f"no convergence within {max_terms} terms at z={z}")


def _series_value(a: complex, b: complex, cc: complex, z: complex, max_terms: int) -> complex:
    term, total = 1.0 + 0j, 1.0 + 0j
    small = 0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((cc + k) * (k + 1)) * z
        total += term
        if abs(term) <= _RELATIVE_STOP * abs(total):
            small += 1
            if small >= _STOP_RUN:
                return total
        else:
            small = 0
        if term == 0:
            return total
    raise NoConvergenceError("2F1 series", f"no convergence within {max_terms} terms at z={z}")


def _disc_value(a: complex, b: complex, cc: complex, z: complex, max_terms: int) -> complex:
    degree = _check_lower_parameter(a, b, cc)
    if degree is not None:
        return _polynomial_jet(a, b, cc, z, degree).value
    return _series_value(a, b, cc, z, max_terms)


def _connection_value(a: complex, b: complex, cc: complex, z: complex, max_terms: int) -> complex:
    """Value from the two solutions around z = 1."""
    s = cc - a - b
    w = 1.0 - z
    first = gamma(cc) * gamma(s) * rgamma(cc - a) * rgamma(cc - b)
    second = gamma(cc) * gamma(-s) * rgamma(a) * rgamma(b)
    value = first * _disc_value(a, b, 1.0 - s, w, max_terms)
    if second != 0:
        value += second * w**s * _disc_value(cc - a, cc - b, 1.0 + s, w, max_terms)
    return complex(value)


def _taylor_step(
    a: complex,
    b: complex,
    cc: complex,
    z0: complex,
    f: complex,
    fp: complex,
    h: complex,
    max_terms: int,
) -> Tuple[complex, complex]:
    """Advance (F, F') from z0 to z0 + h with the local Taylor series of the ODE.

    Scaled coefficients T_k = t_k h^k obey
    T_{k+2} = -[(alpha1 k(k+1) + beta0 (k+1)) h T_{k+1}
               + (-k(k-1) + beta1 k - ab) h^2 T_k] / (alpha0 (k+1)(k+2))
    with alpha0 = z0(1-z0), alpha1 = 1-2 z0, beta0 = c-(a+b+1) z0, beta1 = -(a+b+1).
    """
    alpha0 = z0 * (1.0 - z0)
    alpha1 = 1.0 - 2.0 * z0
    beta0 = cc - (a + b + 1.0) * z0
    beta1 = -(a + b + 1.0)
    ab = a * b

    prev, cur = f, fp * h
    value, slope = prev + cur, cur
    small = 0
    for k in range(max_terms):
        nxt = -(
            (alpha1 * k * (k + 1) + beta0 * (k + 1)) * h * cur
            + (-k * (k - 1) + beta1 * k - ab) * h * h * prev
        ) / (alpha0 * (k + 1) * (k + 2))
        value += nxt
        slope += (k + 2) * nxt
        if abs(nxt) <= _RELATIVE_STOP * abs(value) and abs(cur) <= _RELATIVE_STOP * abs(value):
            small += 1
            if small >= _STOP_RUN:
                return value, slope / h
        else:
            small = 0
        prev, cur = cur, nxt

    raise NoConvergenceError("2F1 continuation", f"local Taylor series stalled at z={z0}")


def _continuation_path(z: complex, side: Optional[int]) -> List[complex]:
    if z.real > 1.0:
        sign = side if z.imag == 0.0 else (1 if z.imag > 0 else -1)
        return [0.5 * z + 0.5j * sign * abs(z), z]
    return [z]


def _continue(
    a: complex, b: complex, cc: complex, z: complex, side: Optional[int], max_terms: int
) -> Tuple[complex, complex]:
    waypoints = _continuation_path(z, side)
    first = waypoints[0]
    zc = _START_RADIUS * first / abs(first)
    start = _series_jet(a, b, cc, zc, max_terms)
    f, fp = start.value, start.d1

    steps = 0
    for target in waypoints:
        while zc != target:
            radius = 0.5 * min(abs(zc), abs(1.0 - zc))
            h = target - zc
            last = abs(h) <= radius
            if not last:
                h = h / abs(h) * radius
            f, fp = _taylor_step(a, b, cc, zc, f, fp, h, max_terms)
            zc = target if last else zc + h
            steps += 1
            if steps > _MAX_STEPS:
                raise NoConvergenceError(
                    "2F1 continuation", f"exceeded {_MAX_STEPS} steps toward z={z}"
                )

    logger.debug("2F1 continuation", z=str(z), steps=steps, waypoints=len(waypoints))
    return f, fp


def _near_integer(x: complex) -> bool:
    return abs(x.imag) < _INTEGER_GAP and abs(x.real - round(x.real)) < _INTEGER_GAP


def _evaluate(
    a: complex, b: complex, cc: complex, z: complex, side: Optional[int], max_terms: int
) -> complex:
    if z == 0:
        return 1.0 + 0j

    degree = _check_lower_parameter(a, b, cc)
    if degree is not None:
        return _polynomial_jet(a, b, cc, z, degree).value

    if z == 1:
        s = cc - a - b
        if s.real <= 0:
            raise NoConvergenceError("2F1 at z=1", f"Re(c - a - b) = {s.real:g} <= 0")
        return complex(gamma(cc) * gamma(s) * rgamma(cc - a) * rgamma(cc - b))

    if z.imag == 0.0 and z.real > 1.0 and side is None:
        raise CutAmbiguityError(z)

    if abs(z) <= HYP2F1_SERIES_RADIUS:
        return _series_value(a, b, cc, z, max_terms)

    w = z / (z - 1.0)
    if abs(w) <= HYP2F1_SERIES_RADIUS:
        return complex((1.0 - z) ** (-a) * _disc_value(a, cc - b, cc, w, max_terms))

    if abs(1.0 - z) <= HYP2F1_SERIES_RADIUS and not _near_integer(cc - a - b):
        if not (z.imag == 0.0 and z.real > 1.0):
            return _connection_value(a, b, cc, z, max_terms)

    return _continue(a, b, cc, z, side, max_terms)[0]


def hyp2f1(args: Hyp2F1Args, max_terms: int = HYP2F1_MAX_TERMS) -> complex:
    """Evaluate 2F1(a, b; c; z).

    Args:
        args: Parameters, argument and optional side of the cut
        max_terms: Hard cap on terms of any series

    Returns:
        Principal-branch value

    Raises:
        PoleParameterError: If c is a nonpositive integer and the series does not terminate
        CutAmbiguityError: If z lies on (1, inf) and no side is given
        NoConvergenceError: If a series or the continuation does not converge
    """
    side = None if args.cut_side is None else int(args.cut_side)
    return _evaluate(args.a, args.b, args.cc, args.z, side, max_terms)


def hyp2f1_via(
    args: Hyp2F1Args, path: EvaluationPath, max_terms: int = HYP2F1_MAX_TERMS
) -> complex:
    """Evaluate 2F1 along one named path instead of the region dispatch.

    Used to cross-check the paths against each other: ``series`` is the Maclaurin
    sum, ``connection`` the 1 - z formula and ``continuation`` the Taylor
    continuation of the ODE from |z| = 0.5.

    Raises:
        NoConvergenceError: If the chosen path does not apply at these arguments
    """
    a, b, cc, z = args.a, args.b, args.cc, args.z
    side = None if args.cut_side is None else int(args.cut_side)
    degree = _check_lower_parameter(a, b, cc)
    if degree is not None:
        return _polynomial_jet(a, b, cc, z, degree).value
    if args.on_cut and side is None:
        raise CutAmbiguityError(z)

    if path == "series":
        return _series_value(a, b, cc, z, max_terms)
    if path == "connection":
        if _near_integer(cc - a - b) or args.on_cut:
            raise NoConvergenceError(
                "2F1 connection", "c - a - b is close to an integer or z is on the cut"
            )
        return _connection_value(a, b, cc, z, max_terms)
    if z == 0:
        return 1.0 + 0j
    return _continue(a, b, cc, z, side, max_terms)[0]


def hyp2f1_jet(args: Hyp2F1Args, max_terms: int = HYP2F1_MAX_TERMS) -> Jet:
    """Value, first and second z-derivative of 2F1(a, b; c; z).

    F' = (ab/c) 2F1(a+1, b+1; c+1; z); F'' follows from the hypergeometric
    equation z(1-z)F'' + [c - (a+b+1)z]F' - abF = 0.

    Raises:
        NoConvergenceError: At z = 1, where the derivatives are not finite in general
    """
    a, b, cc, z = args.a, args.b, args.cc, args.z
    side = None if args.cut_side is None else int(args.cut_side)

    degree = _check_lower_parameter(a, b, cc)
    if degree is not None:
        return _polynomial_jet(a, b, cc, z, degree)
    if abs(z) <= HYP2F1_SERIES_RADIUS:
        return _series_jet(a, b, cc, z, max_terms)
    if z == 1:
        raise NoConvergenceError("2F1 derivatives", "z = 1 is a singular point of the ODE")

    f = _evaluate(a, b, cc, z, side, max_terms)
    fp = a * b / cc * _evaluate(a + 1.0, b + 1.0, cc + 1.0, z, side, max_terms)
    fpp = (a * b * f - (cc - (a + b + 1.0) * z) * fp) / (z * (1.0 - z))
    return Jet(complex(f), complex(fp), complex(fpp))

