"""Dirac-like two-component systems D1, D2 and D3.

Conventions: P = -i d/deta. D1 has the matrix potential i c u_p, D2 adds the
constant K on the diagonal, and D3 pairs u_p with the Darboux solution u_g and
the constants K1, K2. All functions work on complex values throughout.
"""

import cmath
import math
from functools import partial
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..config import (
    DEFAULT_EXCLUDED_RADIUS,
    HYP2F1_MAX_TERMS,
    ODE_ATOL,
    ODE_RTOL,
    BracketVariant,
    CutSide,
    HypergeometricConvention,
    ReductionIntegration,
)
from ..exceptions import (
    BranchConflictError,
    DomainError,
    MissingDerivativeError,
    SingularPointError,
)
from ..utils.logging import get_logger
from . import closed_form, darboux
from .hyp2f1 import Hyp2F1Args, hyp2f1_jet, nonpositive_integer, terminating_degree
from .models import (
    ArrayLike,
    ComplexNumber,
    FunctionTrace,
    Grid,
    Jet,
    JetFunction,
    LinearODE,
    ModelParams,
    ResidualReport,
    SpinorTrace,
    zero_coefficient,
)
from .numverify import cumulative_quadrature, integrate_ode

logger = get_logger(__name__)


def _eta(eta: ArrayLike) -> np.ndarray:
    return np.asarray(eta, dtype=float)


# D1


def d1_jets(
    p: ModelParams, eta: ArrayLike, excluded_radius: float = DEFAULT_EXCLUDED_RADIUS
) -> Tuple[Jet, Jet]:
    """Closed-form D1 spinor (w1, w2) = (w_f, w_b) with unit constants.

    kappa=+1 gives (1/cos(c eta), cos(c eta)); kappa=-1 gives (1/sinh(c eta), sinh(c eta)).
    """
    eta_arr = _eta(eta)
    plain = p.with_(phase_phi=0.0, phase_d=0.0, amp_W=1.0)
    w1 = closed_form.w_fermionic_jet(plain, eta_arr, excluded_radius).scaled(1.0 / p.c)
    w2 = closed_form.w_seed_jet(plain, eta_arr)
    return w1, w2


def solve_D1(p: ModelParams, grid: Grid) -> SpinorTrace:
    """Zero-mass spinor of D1 on a pole-free grid.

    Raises:
        SingularPointError: If a grid point sits on a pole of 1/cos or 1/sinh
    """
    w1, w2 = d1_jets(p, grid.points, grid.excluded_radius)
    return SpinorTrace(grid=grid, w1=w1.value, w2=w2.value, dw1=w1.d1, dw2=w2.d1)


def d1_residuals(
    p: ModelParams, spinor: SpinorTrace, tolerance: float = 1e-11
) -> Tuple[ResidualReport, ResidualReport]:
    """Residuals of the two decoupled first-order D1 equations.

    With P = -i d/deta the rows read i(w1' + c u_p w1) = 0 and -i(w2' - c u_p w2) = 0.
    """
    if spinor.dw1 is None or spinor.dw2 is None:
        raise MissingDerivativeError(1, "d1_residuals")

    eta = spinor.eta
    u = closed_form.u_particular(p, eta, spinor.grid.excluded_radius)
    r1 = 1j * (spinor.dw1 + p.c * u * spinor.w1)
    r2 = -1j * (spinor.dw2 - p.c * u * spinor.w2)
    spacing = spinor.grid.spacing
    return (
        ResidualReport.from_residual("d1_fermionic_row", eta, r1, tolerance, spacing),
        ResidualReport.from_residual("d1_bosonic_row", eta, r2, tolerance, spacing),
    )


def momentum_factorization_residuals(
    p: ModelParams, grid: Grid, tolerance: float = 1e-10
) -> Tuple[ResidualReport, ResidualReport]:
    """Apply the momentum-operator factorizations to the D1 components.

    Fermionic: (-P - i c u_p)(P - i c u_p) w_f; bosonic: (P - i c u_p)(-P - i c u_p) w_b.
    Both products are composed factor by factor and must annihilate their zero mode.
    """
    eta = grid.points
    u = closed_form.u_particular_jet(p, eta, grid.excluded_radius)
    w_f, w_b = d1_jets(p, eta, grid.excluded_radius)
    c = p.c

    # inner (P - i c u) w_f and its derivative
    f = -1j * w_f.d1 - 1j * c * u.value * w_f.value
    df = -1j * w_f.d2 - 1j * c * (u.d1 * w_f.value + u.value * w_f.d1)
    fermionic = 1j * df - 1j * c * u.value * f

    # inner (-P - i c u) w_b and its derivative
    g = 1j * w_b.d1 - 1j * c * u.value * w_b.value
    dg = 1j * w_b.d2 - 1j * c * (u.d1 * w_b.value + u.value * w_b.d1)
    bosonic = -1j * dg - 1j * c * u.value * g

    return (
        ResidualReport.from_residual("momentum_fermionic", eta, fermionic, tolerance, grid.spacing),
        ResidualReport.from_residual("momentum_bosonic", eta, bosonic, tolerance, grid.spacing),
    )


# D2


def _d2_Q(p: ModelParams, eta: ArrayLike, sign: float) -> np.ndarray:
    u = closed_form.u_particular_jet(p, eta)
    c = p.c
    return sign * c * u.d1 - c * c * u.value**2 + 2j * c * p.K * u.value


def _d2_Q_derivative(p: ModelParams, eta: ArrayLike, sign: float) -> np.ndarray:
    u = closed_form.u_particular_jet(p, eta)
    c = p.c
    return sign * c * u.d2 - 2.0 * c * c * u.value * u.d1 + 2j * c * p.K * u.d1


def d2_free_terms(p: ModelParams) -> Tuple[LinearODE, LinearODE]:
    """Second-order D2 equations for (w1, w2).

    Fermionic: w1'' + [c u_p' - c^2 u_p^2 + 2icK u_p] w1 = 0.
    Bosonic:   w2'' + [-c u_p' - c^2 u_p^2 + 2icK u_p] w2 = 0.
    At K=0 they reduce to the partner equation and to w'' + kappa c^2 w = 0.
    """
    fermionic = LinearODE(
        P=zero_coefficient,
        Q=lambda eta: _d2_Q(p, eta, 1.0),
        description=f"D2 fermionic, kappa={p.kappa}, K={p.K:g}",
    )
    bosonic = LinearODE(
        P=zero_coefficient,
        Q=lambda eta: _d2_Q(p, eta, -1.0),
        description=f"D2 bosonic, kappa={p.kappa}, K={p.K:g}",
    )
    return fermionic, bosonic


class HypergeometricBranch(BaseModel):
    """One term coefficient * prefactor * y**exponent * 2F1(a, b; cc; sign * y**2)."""

    model_config = ConfigDict(frozen=True)

    label: str
    coefficient: ComplexNumber
    prefactor: ComplexNumber = 1.0 + 0j
    exponent: ComplexNumber
    a: ComplexNumber
    b: ComplexNumber
    cc: ComplexNumber
    sign: float

    def check_defined(self) -> None:
        """Raise if the lower parameter is a pole and the series does not terminate."""
        pole = nonpositive_integer(self.cc)
        if pole is None or self.coefficient == 0:
            return
        degree = terminating_degree(self.a, self.b)
        if degree is None or degree > pole:
            raise BranchConflictError(self.label, self.cc)


def hypergeometric_parameters(
    p: ModelParams,
    convention: HypergeometricConvention = HypergeometricConvention.CORRECTED,
) -> Tuple[complex, complex]:
    """Composite parameters (p, q) for kappa=+1 or (r, s) for kappa=-1, with g = 2K/c.

    As printed p = sqrt(-1 - g), q = sqrt(1 - g); the corrected convention rotates
    both by -i so that y**(-+p) solves the bosonic equation. r = sqrt(-1 - ig) and
    s = sqrt(-1 + ig) on the principal branch in both conventions, except that r = -i
    at K = 0, its limit as K -> 0+, where the principal root is +i.
    """
    g = 2.0 * p.K / p.c
    if p.kappa == 1:
        p_val = cmath.sqrt(complex(-1.0 - g, 0.0))
        q_val = cmath.sqrt(complex(1.0 - g, 0.0))
        if convention == HypergeometricConvention.CORRECTED:
            return -1j * p_val, -1j * q_val
        return p_val, q_val

    r_val = -1j * cmath.sqrt(1.0 + 1j * g)
    s_val = 1j * cmath.sqrt(1.0 - 1j * g)
    return r_val, s_val


def hypergeometric_branches(
    p: ModelParams,
    convention: HypergeometricConvention = HypergeometricConvention.CORRECTED,
    ln_minus_one_branch: int = 0,
) -> Tuple[HypergeometricBranch, HypergeometricBranch]:
    """The two hypergeometric terms of the bosonic D2 solution.

    kappa=+1, y = exp(i c eta), argument -y^2:
      A y^-p 2F1(-(p+iq)/2, -(p-iq)/2; 1-p) + B y^p 2F1((p-iq)/2, (p+iq)/2; 1+p).
    kappa=-1, y = exp(c eta), argument y^2, ln(-1) = i pi (2n+1):
      C (-1)^(-ir/2) y^-ir 2F1(.., ..; 1-ir) + D (-1)^(ir/2) y^ir 2F1((i/2)(r-s), (i/2)(r+s); 1+ir),
    where the first C parameter pair is -(i/2)(r +- is) as printed and -(i/2)(r +- s) corrected.
    """
    first, second = hypergeometric_parameters(p, convention)
    if p.kappa == 1:
        pp, qq = first, second
        return (
            HypergeometricBranch(
                label="A",
                coefficient=p.A,
                exponent=-pp,
                a=-(pp + 1j * qq) / 2,
                b=-(pp - 1j * qq) / 2,
                cc=1 - pp,
                sign=-1.0,
            ),
            HypergeometricBranch(
                label="B",
                coefficient=p.B,
                exponent=pp,
                a=(pp - 1j * qq) / 2,
                b=(pp + 1j * qq) / 2,
                cc=1 + pp,
                sign=-1.0,
            ),
        )

    r, s = first, second
    ln_minus_one = 1j * math.pi * (2 * ln_minus_one_branch + 1)
    c_shift = 1j * s if convention == HypergeometricConvention.AS_PRINTED else s
    return (
        HypergeometricBranch(
            label="C",
            coefficient=p.C,
            prefactor=cmath.exp(-0.5j * r * ln_minus_one),
            exponent=-1j * r,
            a=-0.5j * (r + c_shift),
            b=-0.5j * (r - c_shift),
            cc=1 - 1j * r,
            sign=1.0,
        ),
        HypergeometricBranch(
            label="D",
            coefficient=p.D,
            prefactor=cmath.exp(0.5j * r * ln_minus_one),
            exponent=1j * r,
            a=0.5j * (r - s),
            b=0.5j * (r + s),
            cc=1 + 1j * r,
            sign=1.0,
        ),
    )


def _branch_jet(
    branch: HypergeometricBranch,
    alpha: complex,
    eta: np.ndarray,
    cut_side: CutSide,
    max_terms: int,
) -> Jet:
    """Jet in eta of prefactor * y**mu * 2F1(t), y = exp(alpha eta), t = sign * y^2.

    The power uses the eta-continuous logarithm alpha*eta, which is the
    principal one while |Im(alpha eta)| <= pi. Past that y**mu is continued
    along eta rather than taken on the principal branch of log y.
    """
    mu = branch.exponent
    values = np.empty(eta.size, dtype=complex)
    d1 = np.empty(eta.size, dtype=complex)
    d2 = np.empty(eta.size, dtype=complex)
    for i, x in enumerate(eta):
        power = branch.prefactor * cmath.exp(mu * alpha * x)
        y2 = cmath.exp(2.0 * alpha * x)
        t = complex(branch.sign * y2.real, 0.0) if alpha.imag == 0 else branch.sign * y2
        F = hyp2f1_jet(
            Hyp2F1Args(a=branch.a, b=branch.b, cc=branch.cc, z=t, cut_side=cut_side),
            max_terms=max_terms,
        )
        G, G1 = F.value, F.d1 * 2.0 * alpha * t
        G2 = 4.0 * alpha * alpha * (t * t * F.d2 + t * F.d1)
        E1, E2 = mu * alpha * power, (mu * alpha) ** 2 * power
        values[i] = power * G
        d1[i] = E1 * G + power * G1
        d2[i] = E2 * G + 2.0 * E1 * G1 + power * G2
    return Jet(values, d1, d2)


def w2_branch_jets(
    p: ModelParams,
    eta: ArrayLike,
    convention: HypergeometricConvention = HypergeometricConvention.CORRECTED,
    cut_side: CutSide = CutSide.UPPER,
    ln_minus_one_branch: int = 0,
    max_terms: int = HYP2F1_MAX_TERMS,
) -> Tuple[Jet, Jet]:
    """Jets of both hypergeometric branches with unit coefficients."""
    eta_arr = np.atleast_1d(_eta(eta))
    alpha = 1j * p.c if p.kappa == 1 else complex(p.c)
    jets = []
    for branch in hypergeometric_branches(p, convention, ln_minus_one_branch):
        unit = branch.model_copy(update={"coefficient": 1.0 + 0j})
        unit.check_defined()
        jets.append(_branch_jet(unit, alpha, eta_arr, cut_side, max_terms))
    return jets[0], jets[1]


def w2_closed_form_jet(
    p: ModelParams,
    eta: ArrayLike,
    convention: HypergeometricConvention = HypergeometricConvention.CORRECTED,
    cut_side: CutSide = CutSide.UPPER,
    ln_minus_one_branch: int = 0,
    max_terms: int = HYP2F1_MAX_TERMS,
) -> Jet:
    """Bosonic D2 component as a superposition of the two hypergeometric branches.

    Branches with a zero coefficient are not evaluated.

    Raises:
        BranchConflictError: If a used branch has a nonpositive-integer lower parameter
            and a nonterminating series
        CutAmbiguityError, NoConvergenceError: Propagated from the 2F1 evaluation
    """
    eta_arr = np.atleast_1d(_eta(eta))
    alpha = 1j * p.c if p.kappa == 1 else complex(p.c)
    total = Jet(
        np.zeros(eta_arr.size, dtype=complex),
        np.zeros(eta_arr.size, dtype=complex),
        np.zeros(eta_arr.size, dtype=complex),
    )
    for branch in hypergeometric_branches(p, convention, ln_minus_one_branch):
        if branch.coefficient == 0:
            continue
        branch.check_defined()
        jet = _branch_jet(branch, alpha, eta_arr, cut_side, max_terms)
        total = total.plus(jet.scaled(branch.coefficient))
    logger.debug(
        "Evaluated hypergeometric w2",
        kappa=p.kappa,
        K=p.K,
        convention=convention.value,
        points=eta_arr.size,
    )
    return total


def w2_closed_form(
    p: ModelParams,
    eta: ArrayLike,
    convention: HypergeometricConvention = HypergeometricConvention.CORRECTED,
    cut_side: CutSide = CutSide.UPPER,
    ln_minus_one_branch: int = 0,
) -> np.ndarray:
    """Value of the hypergeometric bosonic D2 component at eta."""
    values = w2_closed_form_jet(p, eta, convention, cut_side, ln_minus_one_branch).value
    return values if np.ndim(eta) else values[0]


def match_superposition(
    p: ModelParams,
    eta0: float,
    value: complex,
    derivative: complex,
    convention: HypergeometricConvention = HypergeometricConvention.CORRECTED,
    cut_side: CutSide = CutSide.UPPER,
    ln_minus_one_branch: int = 0,
) -> Tuple[complex, complex]:
    """Coefficients of the two branches reproducing (value, derivative) at eta0."""
    first, second = w2_branch_jets(p, [eta0], convention, cut_side, ln_minus_one_branch)
    matrix = np.array(
        [[first.value[0], second.value[0]], [first.d1[0], second.d1[0]]], dtype=complex
    )
    coefficients = np.linalg.solve(matrix, np.array([value, derivative], dtype=complex))
    return complex(coefficients[0]), complex(coefficients[1])


def _y_jacobian(p: ModelParams, eta: np.ndarray) -> Tuple[np.ndarray, complex]:
    alpha = 1j * p.c if p.kappa == 1 else complex(p.c)
    return alpha * np.exp(alpha * eta), alpha


def w1_from_w2(
    p: ModelParams,
    w2: JetFunction,
    grid: Grid,
    integration: ReductionIntegration = ReductionIntegration.ETA,
    quad_tol: float = 1e-11,
) -> FunctionTrace:
    """Reduction of order w1 = (1 + k * int w2^2) / w2, integrated from the first grid point.

    In eta mode the integrand is w2(eta)^2; in y-jacobian mode it is
    w2^2 dy/deta with y = exp(i c eta) or exp(c eta).

    Raises:
        SingularPointError: If w2 vanishes at a grid point
    """
    eta = grid.points
    jet = w2(eta)
    w, dw, ddw = (np.asarray(part, dtype=complex) for part in jet)

    scale = float(np.max(np.abs(w))) or 1.0
    tiny = np.abs(w) <= 1e-12 * scale
    if np.any(tiny):
        index = int(np.argmax(tiny))
        raise SingularPointError(float(eta[index]), float(eta[index]), grid.excluded_radius, "1/w2")

    if integration == ReductionIntegration.Y_JACOBIAN:
        jac, alpha = _y_jacobian(p, eta)
        jac_d1 = alpha * jac

        def integrand(x: float) -> complex:
            j, _ = _y_jacobian(p, np.asarray(x))
            return complex(np.asarray(w2(np.asarray(x)).value) ** 2 * j)

    else:
        jac, jac_d1 = np.ones_like(w), np.zeros_like(w)

        def integrand(x: float) -> complex:
            return complex(np.asarray(w2(np.asarray(x)).value) ** 2)

    k = p.k
    integral = cumulative_quadrature(integrand, eta, quad_tol) if k != 0 else np.zeros_like(w)
    N = 1.0 + k * integral
    N1 = k * w * w * jac
    N2 = k * (2.0 * w * dw * jac + w * w * jac_d1)

    values = N / w
    d1 = N1 / w - N * dw / w**2
    d2 = N2 / w - 2.0 * N1 * dw / w**2 - N * ddw / w**2 + 2.0 * N * dw**2 / w**3
    return FunctionTrace(grid=grid, values=values, d1=d1, d2=d2, name="w1")


def w1_from_coupling(p: ModelParams, eta: ArrayLike, w2: Jet) -> Jet:
    """Fermionic component from the first-order D2 row w1 = [-i w2' + (icu_p + K) w2]/K.

    w2 must solve the bosonic equation; its third derivative is taken from it.

    Raises:
        DomainError: If K = 0, where the rows decouple
    """
    if p.K == 0:
        raise DomainError("K", p.K, "the coupling map divides by K")

    eta_arr = _eta(eta)
    u = closed_form.u_particular_jet(p, eta_arr)
    c, K = p.c, p.K
    Qb = _d2_Q(p, eta_arr, -1.0)
    Qb1 = _d2_Q_derivative(p, eta_arr, -1.0)
    w, dw, ddw = w2
    dddw = -Qb1 * w - Qb * dw

    A = 1j * c * u.value + K
    A1 = 1j * c * u.d1
    A2 = 1j * c * u.d2
    return Jet(
        (-1j * dw + A * w) / K,
        (-1j * ddw + A1 * w + A * dw) / K,
        (-1j * dddw + A2 * w + 2.0 * A1 * dw + A * ddw) / K,
    )


def d2_coupled_residuals(
    p: ModelParams, grid: Grid, w1: Jet, w2: Jet, tolerance: float = 1e-8
) -> Tuple[ResidualReport, ResidualReport]:
    """Residuals of the first-order D2 rows.

    i w1' + (icu_p + K) w1 - K w2 and -i w2' + (icu_p + K) w2 - K w1.
    """
    eta = grid.points
    u = closed_form.u_particular(p, eta, grid.excluded_radius)
    A = 1j * p.c * u + p.K
    r1 = 1j * w1.d1 + A * w1.value - p.K * w2.value
    r2 = -1j * w2.d1 + A * w2.value - p.K * w1.value
    return (
        ResidualReport.from_residual("d2_row_1", eta, r1, tolerance, grid.spacing),
        ResidualReport.from_residual("d2_row_2", eta, r2, tolerance, grid.spacing),
    )


# D3


def _require_phase_free(p: ModelParams) -> None:
    if p.kappa == 1 and p.phase_phi != 0:
        raise DomainError("phase_phi", p.phase_phi, "the D3 system is built on the phase-free seed")


def _gauge_P(p: ModelParams, eta: ArrayLike) -> Jet:
    """P = c(u_p - u_g) - i dK = w_seed^2/(I + lambda) - i dK, with its derivatives."""
    _require_phase_free(p)
    eta_arr = _eta(eta)
    w = closed_form.w_seed_jet(p, eta_arr)
    J = darboux.integral_I_jet(p, eta_arr).value + p.lam
    w0, w1, w2 = w.value, w.d1, w.d2
    value = w0**2 / J - 1j * p.delta_K
    d1 = 2.0 * w0 * w1 / J - w0**4 / J**2
    d2 = 2.0 * (w1**2 + w0 * w2) / J - 6.0 * w0**3 * w1 / J**2 + 2.0 * w0**6 / J**3
    return Jet(value, d1, d2)


def _d3_Q(p: ModelParams, index: int, eta: ArrayLike, variant: BracketVariant) -> np.ndarray:
    eta_arr = _eta(eta)
    up = closed_form.u_particular_jet(p, eta_arr)
    ug = darboux.u_general_jet(p, eta_arr)
    c = p.c
    if variant == BracketVariant.I_ON_BOTH:
        mass = 1j * c * (p.K1 * ug.value + p.K2 * up.value)
    else:
        mass = c * (1j * p.K1 * ug.value + p.K2 * up.value)
    derivative = c * up.d1 if index == 1 else -c * ug.d1
    return derivative + mass - c * c * up.value * ug.value


def d3_system(
    p: ModelParams, variant: BracketVariant = BracketVariant.AS_PRINTED
) -> Tuple[LinearODE, LinearODE]:
    """Second-order D3 equations w_i'' + P w_i' + Q_i w_i = 0 with P = c(u_p - u_g) - i(K1 - K2).

    Q_1 = c u_p' + m - c^2 u_p u_g and Q_2 = -c u_g' + m - c^2 u_p u_g, where the
    mass term m is c(i K1 u_g + K2 u_p) as printed or ic(K1 u_g + K2 u_p) with i on both.

    Raises:
        DomainError: If the seed phase is nonzero
    """
    _require_phase_free(p)

    def P(eta: ArrayLike) -> np.ndarray:
        return _gauge_P(p, eta).value

    return (
        LinearODE(
            P=P,
            Q=lambda eta: _d3_Q(p, 1, eta, variant),
            description=f"D3 w1 ({variant.value})",
        ),
        LinearODE(
            P=P,
            Q=lambda eta: _d3_Q(p, 2, eta, variant),
            description=f"D3 w2 ({variant.value})",
        ),
    )


def q_free_term(
    p: ModelParams,
    index: int,
    eta: ArrayLike,
    variant: BracketVariant = BracketVariant.AS_PRINTED,
) -> np.ndarray:
    """Free term of the gauged equation z_i'' + Q_i z_i = 0: Q_i - P'/2 - P^2/4."""
    if index not in (1, 2):
        raise ValueError("component index must be 1 or 2")
    P = _gauge_P(p, eta)
    return (_d3_Q(p, index, eta, variant) - P.d1 / 2.0 - P.value**2 / 4.0)[()]


def gauged_system(
    p: ModelParams, variant: BracketVariant = BracketVariant.AS_PRINTED
) -> Tuple[LinearODE, LinearODE]:
    """The two gauged D3 equations, free of first-derivative terms."""
    return tuple(
        LinearODE(
            P=zero_coefficient,
            Q=partial(q_free_term, p, index, variant=variant),
            description=f"D3 z{index} ({variant.value})",
        )
        for index in (1, 2)
    )  # type: ignore[return-value]


def gauge_factor_jet(p: ModelParams, eta: ArrayLike) -> Jet:
    """G = exp(i dK eta/2) (I + lambda)^(-1/2), with G'/G = -P/2."""
    eta_arr = _eta(eta)
    J = darboux.integral_I_jet(p, eta_arr).value + p.lam
    G = np.exp(0.5j * p.delta_K * eta_arr) / np.sqrt(J)
    P = _gauge_P(p, eta_arr)
    return Jet(G, -0.5 * P.value * G, (0.25 * P.value**2 - 0.5 * P.d1) * G)


def gauge_transform(p: ModelParams, z: FunctionTrace) -> FunctionTrace:
    """Assemble w = z * G from a gauged trace, carrying derivatives when present."""
    G = gauge_factor_jet(p, z.eta).value
    P = _gauge_P(p, z.eta)
    d1 = None if z.d1 is None else G * (z.d1 - 0.5 * P.value * z.values)
    d2 = None
    if z.d1 is not None and z.d2 is not None:
        d2 = G * (z.d2 - P.value * z.d1 + (0.25 * P.value**2 - 0.5 * P.d1) * z.values)
    return FunctionTrace(grid=z.grid, values=G * z.values, d1=d1, d2=d2, name=z.name)


def inverse_gauge_transform(p: ModelParams, w: FunctionTrace) -> FunctionTrace:
    """Gauged trace z = w / G, the inverse of gauge_transform."""
    G = gauge_factor_jet(p, w.eta).value
    P = _gauge_P(p, w.eta)
    d1 = None if w.d1 is None else (w.d1 + 0.5 * P.value * w.values) / G
    d2 = None
    if w.d1 is not None and w.d2 is not None:
        d2 = (w.d2 + P.value * w.d1 + (0.5 * P.d1 + 0.25 * P.value**2) * w.values) / G
    return FunctionTrace(grid=w.grid, values=w.values / G, d1=d1, d2=d2, name=w.name)


def d3_initial_derivatives(
    p: ModelParams, eta0: float, w1: complex, w2: complex
) -> Tuple[complex, complex]:
    """Derivatives (w1', w2') implied by the first-order D3 rows at eta0.

    w2' = i[K1 w1 - (icu_g + K2) w2] and w1' = -i[K2 w2 - (icu_p + K1) w1].
    """
    _require_phase_free(p)
    up = complex(closed_form.u_particular(p, eta0))
    ug = complex(darboux.u_general(p, eta0))
    c = p.c
    dw2 = 1j * (p.K1 * w1 - (1j * c * ug + p.K2) * w2)
    dw1 = -1j * (p.K2 * w2 - (1j * c * up + p.K1) * w1)
    return dw1, dw2


def matched_initial_data(p: ModelParams, eta0: float) -> Tuple[complex, complex]:
    """Values (w_f, w_g) at eta0, the K1 = K2 = 0 spinor."""
    w1 = closed_form.w_fermionic(p.with_(phase_d=0.0), eta0)
    w2 = darboux.w_general(p, eta0)
    return complex(w1), complex(w2)


def solve_D3_numeric(
    p: ModelParams,
    grid: Grid,
    w1_0: complex,
    w2_0: complex,
    variant: BracketVariant = BracketVariant.AS_PRINTED,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
) -> SpinorTrace:
    """Numerical D3 spinor from values at the first grid point.

    The derivatives at the start come from the first-order rows. Both gauged
    equations z_i'' + Q_i z_i = 0 are integrated and the result is mapped back
    with the gauge factor.

    Raises:
        StepSizeUnderflowError: Near singular Q_i
        SingularPointError, DomainError: Propagated from u_p and u_g
    """
    _require_phase_free(p)
    eta0 = float(grid.points[0])
    dw1_0, dw2_0 = d3_initial_derivatives(p, eta0, w1_0, w2_0)
    G0 = complex(gauge_factor_jet(p, eta0).value)
    P0 = complex(_gauge_P(p, eta0).value)

    components = []
    initial = zip(gauged_system(p, variant), (w1_0, w2_0), (dw1_0, dw2_0), ("w1", "w2"))
    for ode, w0, dw0, name in initial:
        z0 = w0 / G0
        dz0 = (dw0 + 0.5 * P0 * w0) / G0
        z = integrate_ode(ode, z0, dz0, grid, rtol=rtol, atol=atol, name=name)
        components.append(gauge_transform(p, z))

    w1, w2 = components
    logger.debug("Solved D3", K1=p.K1, K2=p.K2, lam=p.lam, variant=variant.value, points=len(grid))
    return SpinorTrace(grid=grid, w1=w1.values, w2=w2.values, dw1=w1.d1, dw2=w2.d1)


def d3_coupled_residuals(
    p: ModelParams, spinor: SpinorTrace, tolerance: float = 1e-6
) -> Tuple[ResidualReport, ResidualReport]:
    """Residuals of the first-order D3 rows.

    [P + icu_g + K2] w2 - K1 w1 and [-P + icu_p + K1] w1 - K2 w2, with P = -i d/deta.
    """
    if spinor.dw1 is None or spinor.dw2 is None:
        raise MissingDerivativeError(1, "d3_coupled_residuals")

    eta = spinor.eta
    up = closed_form.u_particular(p, eta, spinor.grid.excluded_radius)
    ug = darboux.u_general(p, eta, spinor.grid.excluded_radius)
    c = p.c
    r2 = -1j * spinor.dw2 + (1j * c * ug + p.K2) * spinor.w2 - p.K1 * spinor.w1
    r1 = 1j * spinor.dw1 + (1j * c * up + p.K1) * spinor.w1 - p.K2 * spinor.w2
    spacing = spinor.grid.spacing
    return (
        ResidualReport.from_residual("d3_row_w2", eta, r2, tolerance, spacing),
        ResidualReport.from_residual("d3_row_w1", eta, r1, tolerance, spacing),
    )
