"""Numerical oracles: ODE integration, quadrature, finite differences and residuals.

Nothing here depends on the closed forms it is used to check.
"""

import math
from typing import Any, Callable, Optional, Tuple

import numpy as np
from scipy.integrate import quad, solve_ivp

from ..config import FD_STEP, ODE_ATOL, ODE_RTOL, QUAD_LIMIT, QUAD_TOL
from ..exceptions import (
    DegeneratePairError,
    MaxDepthError,
    MissingDerivativeError,
    NonFiniteError,
    StepSizeUnderflowError,
)
from ..utils.logging import get_logger
from .models import FunctionTrace, Grid, JetFunction, LinearODE, OrderEstimate, ResidualReport

logger = get_logger(__name__)

ScalarFunction = Callable[[float], complex]


def integrate_ode(
    ode: LinearODE,
    y0: complex,
    dy0: complex,
    grid: Grid,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
    name: str = "w",
    **solver_options: Any,
) -> FunctionTrace:
    """Integrate w'' + P w' + Q w = 0 from the first grid point across the grid.

    The equation is solved as a complex first-order system with the RK45
    embedded pair; w'' on the grid is recovered from the equation itself.

    Args:
        ode: Equation to integrate
        y0: w at the first retained grid point
        dy0: w' at the first retained grid point
        grid: Output points; the first point is the initial point
        rtol: Relative tolerance of the step controller
        atol: Absolute tolerance of the step controller
        name: Name of the returned trace
        **solver_options: Extra keyword arguments for solve_ivp (max_step, first_step)

    Returns:
        Trace with values, first and second derivatives

    Raises:
        StepSizeUnderflowError: If the step size collapses (coefficient blow-up)
        NonFiniteError: If the solution becomes NaN or infinite
    """
    eta = grid.points

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        P, Q = ode.coefficients(t)
        return np.array([y[1], -P * y[1] - Q * y[0]], dtype=complex)

    y_init = np.array([complex(y0), complex(dy0)], dtype=complex)
    if eta.size == 1:
        values, d1 = y_init[:1], y_init[1:]
    else:
        solution = solve_ivp(
            rhs,
            (float(eta[0]), float(eta[-1])),
            y_init,
            method="RK45",
            t_eval=eta,
            rtol=rtol,
            atol=atol,
            **solver_options,
        )
        if solution.status != 0:
            reached = float(solution.t[-1]) if solution.t.size else float(eta[0])
            raise StepSizeUnderflowError(reached, solution.message)
        values, d1 = solution.y[0], solution.y[1]
        logger.debug(
            "Integrated ODE",
            description=ode.description,
            evaluations=solution.nfev,
            points=eta.size,
        )

    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(d1))):
        raise NonFiniteError(f"integration of {ode.description or 'ODE'}")

    P, Q = ode.coefficients(eta)
    d2 = -P * d1 - Q * values
    return FunctionTrace(grid=grid, values=values, d1=d1, d2=d2, name=name)


def _real_quad(f: Callable[[float], float], a: float, b: float, tol: float, limit: int) -> float:
    result = quad(f, a, b, epsabs=tol, epsrel=tol, limit=limit, full_output=1)
    if len(result) > 3:
        raise MaxDepthError(a, b, str(result[3]).splitlines()[0])
    return float(result[0])


def quadrature(
    f: ScalarFunction,
    a: float,
    b: float,
    tol: float = QUAD_TOL,
    limit: int = QUAD_LIMIT,
) -> complex:
    """Adaptive Gauss-Kronrod quadrature of a complex-valued function on [a, b].

    Real and imaginary parts are integrated separately.

    Raises:
        MaxDepthError: If the subdivision budget is exhausted or QUADPACK flags the result
    """
    if a == b:
        return 0j
    real = _real_quad(lambda x: complex(f(x)).real, a, b, tol, limit)
    imag = _real_quad(lambda x: complex(f(x)).imag, a, b, tol, limit)
    return complex(real, imag)


def cumulative_quadrature(
    f: ScalarFunction,
    eta: np.ndarray,
    tol: float = QUAD_TOL,
    limit: int = QUAD_LIMIT,
) -> np.ndarray:
    """Integral of f from eta[0] to each eta[i], accumulated interval by interval."""
    out = np.zeros(eta.size, dtype=complex)
    for i in range(1, eta.size):
        out[i] = out[i - 1] + quadrature(f, float(eta[i - 1]), float(eta[i]), tol, limit)
    return out


def finite_diff(f: ScalarFunction, eta: float, h: float = FD_STEP) -> Tuple[complex, complex]:
    """Central differences (f(x+h) - f(x-h))/2h and (f(x+h) - 2f(x) + f(x-h))/h^2."""
    forward, center, backward = complex(f(eta + h)), complex(f(eta)), complex(f(eta - h))
    return (forward - backward) / (2.0 * h), (forward - 2.0 * center + backward) / (h * h)


def residual(
    ode: LinearODE,
    w: JetFunction,
    grid: Grid,
    tolerance: float,
    name: str = "residual",
) -> ResidualReport:
    """Sup and L2 norm of w'' + P w' + Q w for a function with analytic derivatives.

    A zero function passes trivially; callers check nontriviality themselves.
    """
    eta = grid.points
    r = ode.apply(eta, w(eta))
    return ResidualReport.from_residual(name, eta, r, tolerance, grid.spacing)


def residual_trace(
    ode: LinearODE,
    trace: FunctionTrace,
    tolerance: float,
    name: Optional[str] = None,
) -> ResidualReport:
    """Residual of a sampled trace that carries both derivatives.

    Raises:
        MissingDerivativeError: If d1 or d2 is missing
    """
    if trace.d1 is None:
        raise MissingDerivativeError(1, "residual_trace")
    if trace.d2 is None:
        raise MissingDerivativeError(2, "residual_trace")

    P, Q = ode.coefficients(trace.eta)
    r = trace.d2 + P * trace.d1 + Q * trace.values
    return ResidualReport.from_residual(
        name or f"{trace.name}_residual", trace.eta, r, tolerance, trace.grid.spacing
    )


def wronskian_drift(w: FunctionTrace, v: FunctionTrace) -> float:
    """Relative drift max|W(eta) - W(eta0)|/|W(eta0)| of W = w v' - w' v.

    Raises:
        MissingDerivativeError: If either trace lacks d1
        ValueError: If the traces are sampled on different grids
        DegeneratePairError: If W(eta0) vanishes
    """
    if w.d1 is None or v.d1 is None:
        raise MissingDerivativeError(1, "wronskian_drift")
    if w.values.shape != v.values.shape or not np.array_equal(w.eta, v.eta):
        raise ValueError("wronskian_drift needs two traces on the same grid")

    wronskian = w.values * v.d1 - w.d1 * v.values
    w0 = wronskian[0]
    scale = abs(w.values[0] * v.d1[0]) + abs(w.d1[0] * v.values[0])
    if abs(w0) <= 1e-12 * scale or w0 == 0:
        raise DegeneratePairError(complex(w0))

    return float(np.max(np.abs(wronskian - w0)) / abs(w0))


def integrator_order(step: float = 0.2, t_end: float = math.pi) -> OrderEstimate:
    """Global error on w'' + w = 0 (cosine) with a capped step, then with half the step.

    The tolerances are loose so that the cap, not the controller, sets the step.
    """
    ode = LinearODE(
        P=lambda eta: np.zeros_like(eta, dtype=complex),
        Q=lambda eta: np.ones_like(eta, dtype=complex),
        description="cosine",
    )

    def final_error(h: float) -> float:
        n_points = max(2, int(round(t_end / h)) + 1)
        grid = Grid(start=0.0, end=t_end, n_points=n_points)
        trace = integrate_ode(
            ode, 1.0, 0.0, grid, rtol=1e-2, atol=1e-2, max_step=h, first_step=h
        )
        return float(abs(trace.values[-1] - math.cos(t_end)))

    estimate = OrderEstimate(
        step=step, coarse_error=final_error(step), fine_error=final_error(step / 2)
    )
    logger.debug("Integrator order", step=step, ratio=estimate.ratio)
    return estimate
