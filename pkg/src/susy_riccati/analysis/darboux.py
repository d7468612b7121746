"""One-parameter Darboux family built on the seed zero mode."""

from functools import partial
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..config import DEFAULT_EXCLUDED_RADIUS
from ..exceptions import DomainError
from ..utils.logging import get_logger
from .closed_form import seed_log_derivative_jet, w_seed_jet
from .models import ArrayLike, Jet, LinearODE, ModelParams, zero_coefficient

logger = get_logger(__name__)


def _half_line(eta: ArrayLike, operation: str) -> np.ndarray:
    eta_arr = np.asarray(eta, dtype=float)
    if np.any(eta_arr < 0):
        bad = float(np.atleast_1d(eta_arr)[np.argmax(np.atleast_1d(eta_arr) < 0)])
        raise DomainError("eta", bad, f"{operation} is defined on the half line eta >= 0")
    return eta_arr


def integral_I_jet(p: ModelParams, eta: ArrayLike) -> Jet:
    """Jet of I(eta) = int_0^eta w_seed(y)^2 dy.

    Raises:
        DomainError: If any eta is negative
    """
    eta_arr = _half_line(eta, "I")
    c, W2 = p.c, p.amp_W**2
    if p.kappa == 1:
        phi = p.phase_phi
        oscillation = np.sin(2.0 * (c * eta_arr + phi)) - np.sin(2.0 * phi)
        value = W2 * (eta_arr / 2.0 + oscillation / (4.0 * c))
    else:
        value = W2 * (np.sinh(2.0 * c * eta_arr) / (4.0 * c) - eta_arr / 2.0)

    w = w_seed_jet(p, eta_arr)
    return Jet(value, w.value**2, 2.0 * w.value * w.d1)


def integral_I(p: ModelParams, eta: ArrayLike) -> np.ndarray:
    """Closed-form integral of w_seed^2 from 0 to eta.

    Args:
        p: Model parameters (kappa, c, amp_W, phase_phi)
        eta: Nonnegative evaluation point(s)

    Returns:
        W^2 [eta/2 + (sin(2(c*eta + phi)) - sin(2 phi))/(4c)] for kappa=+1,
        W^2 [sinh(2 c eta)/(4c) - eta/2] for kappa=-1

    Raises:
        DomainError: If any eta is negative
    """
    return integral_I_jet(p, eta).value[()]


def _family_pieces(p: ModelParams, eta: ArrayLike):
    eta_arr = _half_line(eta, "the Darboux family")
    w = w_seed_jet(p, eta_arr)
    J = integral_I_jet(p, eta_arr).value + p.lam
    return eta_arr, w, J


def u_general_jet(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> Jet:
    """General Riccati solution u_g = w'/(c w) - w^2/(c (I + lambda)) with derivatives.

    With g = w^2/J and J = I + lambda, J' = w^2 gives
    g' = 2ww'/J - w^4/J^2 and g'' = 2(w'^2 + ww'')/J - 6w^3 w'/J^2 + 2w^6/J^3.
    """
    eta_arr, w, J = _family_pieces(p, eta)
    log_d = seed_log_derivative_jet(p, eta_arr, excluded_radius)
    c = p.c
    w0, w1, w2 = w.value, w.d1, w.d2

    g = w0**2 / J
    g1 = 2.0 * w0 * w1 / J - w0**4 / J**2
    g2 = 2.0 * (w1**2 + w0 * w2) / J - 6.0 * w0**3 * w1 / J**2 + 2.0 * w0**6 / J**3
    return Jet(log_d.value - g / c, log_d.d1 - g1 / c, log_d.d2 - g2 / c)


def u_general(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> np.ndarray:
    """General solution of the fermionic Riccati equation for the family parameter lambda.

    Raises:
        SingularPointError: Near a zero of w_seed (the poles of u_p at phi=0)
        DomainError: For negative eta
    """
    return u_general_jet(p, eta, excluded_radius).value[()]


def family_free_term(p: ModelParams, eta: ArrayLike) -> np.ndarray:
    """Family free term c_kappa(eta; lambda).

    c_kappa = c + kappa [4 w w' / (c J) - 2 w^4 / (c J^2)], so that
    c*u_g^2 + u_g' = -kappa*c_kappa and c_kappa -> c as lambda -> infinity.
    """
    _, w, J = _family_pieces(p, eta)
    c = p.c
    correction = 4.0 * w.value * w.d1 / (c * J) - 2.0 * w.value**4 / (c * J**2)
    return (c + p.kappa * correction)[()]


def w_general_jet(p: ModelParams, eta: ArrayLike) -> Jet:
    """Jet of the parametric zero mode w_g = w_seed/(I + lambda)."""
    _, w, J = _family_pieces(p, eta)
    w0, w1, w2 = w.value, w.d1, w.d2
    return Jet(
        w0 / J,
        w1 / J - w0**3 / J**2,
        w2 / J - 4.0 * w0**2 * w1 / J**2 + 2.0 * w0**5 / J**3,
    )


def w_general(p: ModelParams, eta: ArrayLike) -> np.ndarray:
    """Zero mode w_seed(eta)/(I(eta) + lambda); bounded by sup|w_seed|/lambda."""
    return w_general_jet(p, eta).value[()]


def zero_mode_ode(p: ModelParams) -> LinearODE:
    """The equation w'' + kappa*c*c_kappa(eta; lambda)*w = 0 solved by w_general."""
    return LinearODE(
        P=zero_coefficient,
        Q=lambda eta: p.kappa * p.c * family_free_term(p, eta),
        description=f"Darboux zero mode, kappa={p.kappa}, lambda={p.lam:g}",
    )


class FamilyMember(BaseModel):
    """One member of the Darboux family, with its functions bound to the parameters."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: ModelParams
    u_g: Callable[[ArrayLike], np.ndarray]
    free_term: Callable[[ArrayLike], np.ndarray]
    w_g: Callable[[ArrayLike], np.ndarray]

    @property
    def ode(self) -> LinearODE:
        return zero_mode_ode(self.params)


def family_member(p: ModelParams) -> FamilyMember:
    """Bundle u_g, c_kappa and w_g at the parameters' lambda."""
    logger.debug("Family member", kappa=p.kappa, c=p.c, lam=p.lam)
    return FamilyMember(
        params=p,
        u_g=partial(u_general, p),
        free_term=partial(family_free_term, p),
        w_g=partial(w_general, p),
    )
