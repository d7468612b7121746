"""Closed-form Riccati solutions, seed zero modes and their fermionic partners."""

import math
from typing import Iterable, Literal, Optional, Tuple

import numpy as np

from ..config import DEFAULT_EXCLUDED_RADIUS
from ..exceptions import MissingDerivativeError, SingularPointError
from ..utils.logging import get_logger
from .models import ArrayLike, FunctionTrace, Grid, Jet, JetFunction, ModelParams, ResidualReport

logger = get_logger(__name__)

SingularityKind = Literal["riccati", "seed", "fermionic"]


def _as_eta(eta: ArrayLike) -> np.ndarray:
    return np.asarray(eta, dtype=float)


def _scalar_or_array(value: np.ndarray) -> np.ndarray:
    return value[()]


def _nearest_tan_pole(c: float, shift: float, eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Distance from eta to the nearest zero of cos(c*eta + shift), and that zero."""
    m = (c * eta + shift - math.pi / 2) / math.pi
    n = np.round(m)
    pole = (n * math.pi + math.pi / 2 - shift) / c
    return np.abs(eta - pole), pole


def check_pole_distance(
    p: ModelParams,
    eta: ArrayLike,
    shift: float = 0.0,
    excluded_radius: float = DEFAULT_EXCLUDED_RADIUS,
    quantity: str = "function",
) -> None:
    """Reject points closer than excluded_radius to a singular point of the kappa branch.

    For kappa=+1 the singular points are the zeros of cos(c*eta + shift); for
    kappa=-1 the only singular point is eta=0.

    Raises:
        SingularPointError: For the first offending point
    """
    eta_arr = np.atleast_1d(_as_eta(eta))
    if p.kappa == 1:
        distance, pole = _nearest_tan_pole(p.c, shift, eta_arr)
    else:
        distance, pole = np.abs(eta_arr), np.zeros_like(eta_arr)

    bad = distance <= excluded_radius
    if np.any(bad):
        index = int(np.argmax(bad))
        raise SingularPointError(
            float(eta_arr[index]), float(pole[index]), excluded_radius, quantity=quantity
        )


def _log_derivative_jet(
    p: ModelParams, eta: ArrayLike, shift: float, excluded_radius: float, quantity: str
) -> Jet:
    eta_arr = _as_eta(eta)
    check_pole_distance(p, eta_arr, shift, excluded_radius, quantity)
    c = p.c
    if p.kappa == 1:
        t = np.tan(c * eta_arr + shift)
        sec2 = 1.0 + t * t
        return Jet(-t, -c * sec2, -2.0 * c * c * sec2 * t)

    ct = 1.0 / np.tanh(c * eta_arr)
    csch2 = ct * ct - 1.0
    return Jet(ct, -c * csch2, 2.0 * c * c * csch2 * ct)


def u_particular_jet(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> Jet:
    """Particular Riccati solution u_p with analytic first and second derivatives.

    Args:
        p: Model parameters (kappa and c are used)
        eta: Evaluation point(s)
        excluded_radius: Minimum distance to a pole

    Returns:
        Jet of -tan(c*eta) for kappa=+1, coth(c*eta) for kappa=-1

    Raises:
        SingularPointError: If a point lies within excluded_radius of a pole
    """
    return _log_derivative_jet(p, eta, 0.0, excluded_radius, "u_p")


def u_particular(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> np.ndarray:
    """Particular solution of u' + c*u^2 + kappa*c = 0."""
    return _scalar_or_array(u_particular_jet(p, eta, excluded_radius).value)


def seed_log_derivative_jet(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> Jet:
    """Jet of w_seed'/(c*w_seed), which carries the phase phi for kappa=+1."""
    shift = p.phase_phi if p.kappa == 1 else 0.0
    return _log_derivative_jet(p, eta, shift, excluded_radius, "w_seed'/w_seed")


def seed_log_derivative(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> np.ndarray:
    """Logarithmic derivative w_seed'/(c*w_seed); equals u_particular when phi=0."""
    return _scalar_or_array(seed_log_derivative_jet(p, eta, excluded_radius).value)


def w_seed_jet(p: ModelParams, eta: ArrayLike) -> Jet:
    """Seed zero mode of w'' + kappa*c^2*w = 0 with its derivatives.

    Args:
        p: Model parameters (kappa, c, amp_W and phase_phi are used)
        eta: Evaluation point(s)

    Returns:
        Jet of W*cos(c*eta + phi) for kappa=+1, W*sinh(c*eta) for kappa=-1
    """
    eta_arr = _as_eta(eta)
    c, W = p.c, p.amp_W
    if p.kappa == 1:
        x = c * eta_arr + p.phase_phi
        cos_x, sin_x = np.cos(x), np.sin(x)
        return Jet(W * cos_x, -W * c * sin_x, -W * c * c * cos_x)

    x = c * eta_arr
    sinh_x, cosh_x = np.sinh(x), np.cosh(x)
    return Jet(W * sinh_x, W * c * cosh_x, W * c * c * sinh_x)


def w_seed(p: ModelParams, eta: ArrayLike) -> np.ndarray:
    """Seed linear solution W*cos(c*eta + phi) or W*sinh(c*eta)."""
    return _scalar_or_array(w_seed_jet(p, eta).value)


def fermionic_free_term_jet(
    p: ModelParams,
    eta: ArrayLike,
    shift: float = 0.0,
    excluded_radius: float = DEFAULT_EXCLUDED_RADIUS,
) -> Jet:
    """Partner free term c_f = -u' + c*u^2 of the log-derivative u and its derivatives.

    The shift moves the trigonometric argument to c*eta + shift; it is used for
    partners of phase-shifted seeds and of w_f with a phase d. The hyperbolic
    branch has no shift.
    """
    eta_arr = _as_eta(eta)
    shift = shift if p.kappa == 1 else 0.0
    check_pole_distance(p, eta_arr, shift, excluded_radius, "c_f")
    c = p.c
    if p.kappa == 1:
        t = np.tan(c * eta_arr + shift)
        sec2 = 1.0 + t * t
        return Jet(
            c * (1.0 + 2.0 * t * t),
            4.0 * c * c * t * sec2,
            4.0 * c**3 * sec2 * (1.0 + 3.0 * t * t),
        )

    ct = 1.0 / np.tanh(c * eta_arr)
    csch2 = ct * ct - 1.0
    return Jet(
        c * (2.0 * ct * ct - 1.0),
        -4.0 * c * c * ct * csch2,
        4.0 * c**3 * csch2 * (3.0 * ct * ct - 1.0),
    )


def fermionic_free_term(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> np.ndarray:
    """c(1 + 2 tan^2(c*eta)) for kappa=+1, c(-1 + 2 coth^2(c*eta)) for kappa=-1."""
    return _scalar_or_array(fermionic_free_term_jet(p, eta, 0.0, excluded_radius).value)


def w_fermionic_jet(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> Jet:
    """Fermionic zero mode w_f with analytic derivatives.

    Args:
        p: Model parameters (kappa, c and phase_d are used)
        eta: Evaluation point(s)
        excluded_radius: Minimum distance to a zero of the denominator

    Returns:
        Jet of c/cos(c*eta + d) for kappa=+1, c/sinh(c*eta) for kappa=-1

    Raises:
        SingularPointError: If a point lies within excluded_radius of a pole
    """
    eta_arr = _as_eta(eta)
    shift = p.phase_d if p.kappa == 1 else 0.0
    check_pole_distance(p, eta_arr, shift, excluded_radius, "w_f")
    c = p.c
    if p.kappa == 1:
        x = c * eta_arr + shift
        sec, t = 1.0 / np.cos(x), np.tan(x)
        return Jet(c * sec, c * c * sec * t, c**3 * sec * (1.0 + 2.0 * t * t))

    x = c * eta_arr
    csch, ct = 1.0 / np.sinh(x), 1.0 / np.tanh(x)
    return Jet(c * csch, -c * c * csch * ct, c**3 * csch * (2.0 * ct * ct - 1.0))


def w_fermionic(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> np.ndarray:
    """Fermionic partner solution c/cos(c*eta + d) or c/sinh(c*eta)."""
    return _scalar_or_array(w_fermionic_jet(p, eta, excluded_radius).value)


def poles(
    p: ModelParams,
    start: float,
    end: float,
    kind: SingularityKind = "riccati",
    margin: float = 0.0,
) -> Tuple[float, ...]:
    """List the singular points of a closed form inside [start - margin, end + margin].

    Args:
        p: Model parameters
        start: Left end of the interval
        end: Right end of the interval
        kind: "riccati" for u_p and c_f, "seed" for the zeros of w_seed,
            "fermionic" for the poles of w_f
        margin: Extra width on both sides

    Returns:
        Sorted tuple of singular points
    """
    lo, hi = start - margin, end + margin
    if p.kappa == -1:
        return (0.0,) if lo <= 0.0 <= hi else ()

    shift = {"riccati": 0.0, "seed": p.phase_phi, "fermionic": p.phase_d}[kind]
    bounds = [(p.c * x + shift - math.pi / 2) / math.pi for x in (lo, hi)]
    n_lo, n_hi = math.floor(min(bounds)) - 1, math.ceil(max(bounds)) + 1
    found = (
        (n * math.pi + math.pi / 2 - shift) / p.c for n in range(n_lo, n_hi + 1)
    )
    return tuple(sorted(eta for eta in found if lo <= eta <= hi))


def pole_free_grid(
    p: ModelParams,
    start: float,
    end: float,
    n_points: int,
    kinds: Iterable[SingularityKind] = ("riccati", "fermionic"),
    excluded_radius: float = DEFAULT_EXCLUDED_RADIUS,
) -> Grid:
    """Build a uniform grid whose retained points avoid the listed singularities."""
    singular: set = set()
    for kind in kinds:
        singular.update(poles(p, start, end, kind, margin=excluded_radius))

    grid = Grid(
        start=start,
        end=end,
        n_points=n_points,
        excluded_radius=excluded_radius,
        singularities=tuple(sorted(singular)),
    )
    logger.debug(
        "Built pole-free grid",
        start=start,
        end=end,
        retained=len(grid),
        singularities=len(grid.singularities),
    )
    return grid


def riccati_residual(
    u: FunctionTrace, p: ModelParams, tolerance: float = 1e-12
) -> ResidualReport:
    """Residual of u' + c*u^2 + kappa*c = 0 for a sampled candidate.

    Raises:
        MissingDerivativeError: If the trace has no first derivative
    """
    if u.d1 is None:
        raise MissingDerivativeError(1, "riccati_residual")

    r = u.d1 + p.c * u.values**2 + p.kappa * p.c
    return ResidualReport.from_residual("riccati", u.eta, r, tolerance, u.grid.spacing)


def factorization_reports(
    p: ModelParams,
    grid: Grid,
    tolerance: float = 1e-10,
    seed: Optional[JetFunction] = None,
) -> Tuple[ResidualReport, ResidualReport]:
    """Residuals of the bosonic and fermionic second-order equations.

    The bosonic check is w'' + kappa*c^2*w = 0 on w_seed (or on the supplied
    seed jet); the fermionic check is w'' - c*c_f*w = 0 on w_f, with c_f taken
    at the phase d of w_f.

    Returns:
        Tuple of (bosonic report, fermionic report)
    """
    eta = grid.points
    seed_jet = seed(eta) if seed is not None else w_seed_jet(p, eta)
    bosonic = seed_jet.d2 + p.kappa * p.c**2 * seed_jet.value

    wf = w_fermionic_jet(p, eta, grid.excluded_radius)
    free = fermionic_free_term_jet(p, eta, p.phase_d, grid.excluded_radius).value
    fermionic = wf.d2 - p.c * free * wf.value

    return (
        ResidualReport.from_residual("bosonic_seed", eta, bosonic, tolerance, grid.spacing),
        ResidualReport.from_residual("fermionic_partner", eta, fermionic, tolerance, grid.spacing),
    )


def factorization_check(
    p: ModelParams,
    grid: Grid,
    tolerance: float = 1e-10,
    seed: Optional[JetFunction] = None,
) -> ResidualReport:
    """Combined report of both factorized equations, pointwise worst of the two."""
    bosonic, fermionic = factorization_reports(p, grid, tolerance, seed)
    worst = bosonic if bosonic.sup_norm >= fermionic.sup_norm else fermionic
    logger.debug(
        "Factorization check",
        kappa=p.kappa,
        c=p.c,
        bosonic=bosonic.sup_norm,
        fermionic=fermionic.sup_norm,
    )
    return ResidualReport(
        name="factorization",
        sup_norm=worst.sup_norm,
        l2_norm=max(bosonic.l2_norm, fermionic.l2_norm),
        worst_eta=worst.worst_eta,
        n_points=worst.n_points,
        tolerance=tolerance,
        passed=bosonic.passed and fermionic.passed,
    )
