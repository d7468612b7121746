"""Acceptance suites behind ``susy-riccati verify``.

Each suite sweeps its own parameters on grids kept clear of singular points and
returns named checks. Suites that evaluate printed-formula alternatives record
the alternative that passes under ``variants``.
"""

import cmath
import math
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..analysis import closed_form, darboux, dirac, numverify
from ..analysis.hyp2f1 import Hyp2F1Args, hyp2f1, hyp2f1_via
from ..analysis.models import (
    FunctionTrace,
    Grid,
    JetFunction,
    LinearODE,
    ModelParams,
    ResidualReport,
)
from ..config import (
    BracketVariant,
    HypergeometricConvention,
    ReductionIntegration,
    Settings,
)
from ..exceptions import SusyRiccatiError
from ..utils.logging import get_logger, log_call
from .report import read_trace_csv, render_output
from .runs import RunConfig, RunResult, run_closed_form

logger = get_logger(__name__)

SUITE_NAMES: Tuple[str, ...] = (
    "closed-form",
    "family",
    "degeneration",
    "hyp2f1",
    "dirac2",
    "dirac3",
    "oracles",
)

RANDOM_SEED = 20240611


class SuiteResult(BaseModel):
    """Checks of one suite, plus the printed-formula alternatives it pinned."""

    model_config = ConfigDict(frozen=True)

    name: str
    checks: List[ResidualReport] = Field(default_factory=list)
    variants: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _renamed(report: ResidualReport, label: str) -> ResidualReport:
    return report.model_copy(update={"name": f"{label}:{report.name}"})


def _relative_error(numeric: np.ndarray, exact: np.ndarray) -> float:
    return float(np.max(np.abs(numeric - exact)) / np.max(np.abs(exact)))


def _pick_variant(outcomes: Dict[str, List[ResidualReport]], preferred: str) -> str:
    """The preferred alternative if it passes, else the first that does, else the preferred."""
    if all(check.passed for check in outcomes.get(preferred, [])):
        return preferred
    for name, checks in outcomes.items():
        if checks and all(check.passed for check in checks):
            return name
    return preferred


def _closed_form_checks(p: ModelParams, grid: Grid, label: str) -> List[ResidualReport]:
    eta = grid.points
    u = FunctionTrace.from_jet(
        grid, closed_form.u_particular_jet(p, eta, grid.excluded_radius), name="u_p"
    )
    bosonic, fermionic = closed_form.factorization_reports(p, grid, tolerance=1e-10)
    return [
        _renamed(closed_form.riccati_residual(u, p, tolerance=1e-12), label),
        _renamed(bosonic, label),
        _renamed(fermionic, label),
    ]


@log_call(logger)
def closed_form_suite(
    params: ModelParams, grid_spec: Tuple[float, float, int], settings: Settings
) -> SuiteResult:
    """Riccati and factorization identities on the requested grid and on a (kappa, c) sweep."""
    start, end, n_points = grid_spec
    user_grid = closed_form.pole_free_grid(
        params, start, end, n_points, ("riccati", "fermionic"), settings.excluded_radius
    )
    checks = _closed_form_checks(params, user_grid, "requested")

    for kappa in (1, -1):
        for c in (0.5, 1.0, 2.0):
            p = ModelParams(kappa=kappa, c=c)
            lo, hi = (0.0, 1.4 / c) if kappa == 1 else (0.2 / c, 5.0 / c)
            grid = closed_form.pole_free_grid(p, lo, hi, 500)
            checks.extend(_closed_form_checks(p, grid, f"kappa={kappa:+d},c={c:g}"))

    return SuiteResult(name="closed-form", checks=checks)


def _seed_squared(p: ModelParams, x: float) -> complex:
    return complex(closed_form.w_seed(p, x)) ** 2


@log_call(logger)
def family_suite(settings: Settings) -> SuiteResult:
    """Partner invariance, zero mode, the closed-form I and the decay of w_g."""
    checks: List[ResidualReport] = []
    for kappa, (lo, hi) in ((1, (0.0, 1.4)), (-1, (0.2, 4.0))):
        base = ModelParams(kappa=kappa, c=1.0)
        grid = closed_form.pole_free_grid(base, lo, hi, 500, ("seed",))
        eta = grid.points
        partner = closed_form.fermionic_free_term_jet(base, eta, base.phase_phi).value

        for lam in (0.5, 1.0, 10.0):
            p = base.with_(lam=lam)
            label = f"kappa={kappa:+d},lambda={lam:g}"
            ug = darboux.u_general_jet(p, eta)
            invariance = -ug.d1 + p.c * ug.value**2 - partner
            checks.append(
                ResidualReport.from_residual(
                    f"{label}:partner_invariance", eta, invariance, 1e-8, grid.spacing
                )
            )
            checks.append(
                numverify.residual(
                    darboux.zero_mode_ode(p),
                    partial(darboux.w_general_jet, p),
                    grid,
                    1e-9,
                    name=f"{label}:zero_mode",
                )
            )

        decayed = base.with_(lam=1000.0)
        ratio = np.max(np.abs(darboux.w_general(decayed, eta))) * 1000.0
        ratio /= np.max(np.abs(closed_form.w_seed(base, eta)))
        checks.append(ResidualReport.measured(f"kappa={kappa:+d}:w_g_decay", ratio, 1.05))

    rng = np.random.default_rng(RANDOM_SEED)
    samples = np.sort(rng.uniform(0.0, 5.0, 20))
    for p in (
        ModelParams(kappa=1, c=1.0),
        ModelParams(kappa=1, c=0.7, phase_phi=0.3, amp_W=1.5),
        ModelParams(kappa=-1, c=1.0),
    ):
        exact = darboux.integral_I(p, samples)
        numeric = np.array(
            [
                numverify.quadrature(
                    partial(_seed_squared, p), 0.0, float(x), tol=settings.quad_tol
                )
                for x in samples
            ]
        )
        error = np.abs(numeric - exact) / np.maximum(1.0, np.abs(exact))
        checks.append(
            ResidualReport.measured(
                f"kappa={p.kappa:+d},phi={p.phase_phi:g}:integral_quadrature",
                float(np.max(error)),
                1e-10,
                worst_eta=float(samples[int(np.argmax(error))]),
                n_points=samples.size,
            )
        )
    return SuiteResult(name="family", checks=checks)


@log_call(logger)
def degeneration_suite(settings: Settings) -> SuiteResult:
    """lambda -> infinity: the family collapses onto u_p and c."""
    checks: List[ResidualReport] = []
    for kappa, (lo, hi) in ((1, (0.1, 1.3)), (-1, (0.2, 1.3))):
        base = ModelParams(kappa=kappa, c=1.0)
        eta = Grid(start=lo, end=hi, n_points=200).points
        up = closed_form.u_particular(base, eta)

        errors = {}
        for lam in (1e3, 1e6):
            p = base.with_(lam=lam)
            free_error = float(np.max(np.abs(darboux.family_free_term(p, eta) - p.c)))
            u_error = float(np.max(np.abs(darboux.u_general(p, eta) - up)))
            errors[lam] = (free_error, u_error)

        label = f"kappa={kappa:+d}"
        free_error, u_error = errors[1e6]
        checks.append(ResidualReport.measured(f"{label}:free_term_limit", free_error, 1e-4))
        checks.append(ResidualReport.measured(f"{label}:u_general_limit", u_error, 1e-4))
        rate = u_error / errors[1e3][1] if errors[1e3][1] else 0.0
        checks.append(ResidualReport.measured(f"{label}:inverse_lambda_rate", rate, 1e-2))
    return SuiteResult(name="degeneration", checks=checks)


def _f(a: complex, b: complex, cc: complex, z: complex, settings: Settings) -> complex:
    return hyp2f1(Hyp2F1Args(a=a, b=b, cc=cc, z=z), max_terms=settings.hyp2f1_max_terms)


def _random_complex(
    rng: np.random.Generator, re_range: Tuple[float, float], im_range: Tuple[float, float]
) -> complex:
    return complex(rng.uniform(*re_range), rng.uniform(*im_range))


def _random_point(rng: np.random.Generator, r_min: float, r_max: float) -> complex:
    return rng.uniform(r_min, r_max) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))


LOG_CASE_ARGUMENTS: Tuple[complex, ...] = (
    -0.9, -0.5, -0.1, 0.1, 0.5, 0.9, 0.95, -0.99, 0.5j, -0.5j,
    0.6 + 0.6j, 0.6 - 0.6j, -2.0, -5.0, -10 + 1j, 2j, -3j, 1.5 + 1j, 1.5 - 1j, 3 + 0.5j,
)  # fmt: skip


def _identity_checks(rng: np.random.Generator, settings: Settings) -> List[ResidualReport]:
    """Degenerate lower parameter, Gauss contiguous relation and path agreement."""
    max_terms = settings.hyp2f1_max_terms

    degenerate = 0.0
    for _ in range(50):
        a = _random_complex(rng, (-2, 2), (-1, 1))
        b = _random_complex(rng, (0.5, 3), (-0.5, 0.5))
        z = _random_point(rng, 0.0, 0.9)
        expected = (1 - z) ** (-a)
        degenerate = max(degenerate, abs(_f(a, b, b, z, settings) - expected) / abs(expected))

    contiguous, n_contiguous = 0.0, 0
    while n_contiguous < 50:
        a = _random_complex(rng, (-2, 2), (-1, 1))
        b = _random_complex(rng, (-2, 2), (-1, 1))
        cc = _random_complex(rng, (0.5, 3), (-0.5, 0.5))
        z = _random_point(rng, 0.0, 1.5)
        if abs(1 - z) < 0.25 or (z.real > 1 and abs(z.imag) < 0.1):
            continue
        terms = (
            (cc - a) * _f(a - 1, b, cc, z, settings),
            (2 * a - cc + (b - a) * z) * _f(a, b, cc, z, settings),
            a * (z - 1) * _f(a + 1, b, cc, z, settings),
        )
        contiguous = max(contiguous, abs(sum(terms)) / sum(abs(t) for t in terms))
        n_contiguous += 1

    paths, n_paths = 0.0, 0
    while n_paths < 50:
        args = Hyp2F1Args(
            a=_random_complex(rng, (-1, 1), (-0.5, 0.5)),
            b=_random_complex(rng, (-1, 1), (-0.5, 0.5)),
            cc=_random_complex(rng, (1, 2.5), (-0.5, 0.5)),
            z=0.3 + _random_point(rng, 0.0, 0.2),
        )
        s = args.cc - args.a - args.b
        if abs(s.real - round(s.real)) < 0.25 and abs(s.imag) < 0.25:
            continue
        series = hyp2f1_via(args, "series", max_terms)
        scale = max(1.0, abs(series))
        for path in ("connection", "continuation"):
            paths = max(paths, abs(hyp2f1_via(args, path, max_terms) - series) / scale)
        n_paths += 1

    return [
        ResidualReport.measured("degenerate_case", degenerate, 1e-11, n_points=50),
        ResidualReport.measured("contiguous_relation", contiguous, 1e-9, n_points=50),
        ResidualReport.measured("series_vs_transformations", paths, 1e-11, n_points=50),
    ]


@log_call(logger)
def hyp2f1_suite(settings: Settings) -> SuiteResult:
    """Value at 0, Pfaff and Euler transformations, the logarithmic case and the identities."""
    rng = np.random.default_rng(RANDOM_SEED)
    zero_error = 0.0
    pfaff_error = euler_error = 0.0
    for _ in range(200):
        a = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        b = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        cc = complex(rng.uniform(0.5, 3), rng.uniform(-0.5, 0.5))
        z = 0.7 * math.sqrt(rng.uniform()) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))

        zero_error = max(zero_error, abs(_f(a, b, cc, 0j, settings) - 1.0))
        f = _f(a, b, cc, z, settings)
        pfaff = (1 - z) ** (-a) * _f(a, cc - b, cc, z / (z - 1), settings)
        euler = (1 - z) ** (cc - a - b) * _f(cc - a, cc - b, cc, z, settings)
        scale = max(1.0, abs(f))
        pfaff_error = max(pfaff_error, abs(f - pfaff) / scale)
        euler_error = max(euler_error, abs(f - euler) / scale)

    log_error = 0.0
    for z in LOG_CASE_ARGUMENTS:
        exact = -cmath.log(1 - z) / z
        log_error = max(log_error, abs(_f(1, 1, 2, z, settings) - exact) / abs(exact))

    return SuiteResult(
        name="hyp2f1",
        checks=[
            ResidualReport.measured("value_at_zero", zero_error, 0.0, n_points=200),
            ResidualReport.measured("pfaff", pfaff_error, 1e-10, n_points=200),
            ResidualReport.measured("euler", euler_error, 1e-10, n_points=200),
            ResidualReport.measured(
                "logarithmic_case", log_error, 1e-10, n_points=len(LOG_CASE_ARGUMENTS)
            ),
            *_identity_checks(rng, settings),
        ],
    )


def _w2_jet_function(
    p: ModelParams, convention: HypergeometricConvention, settings: Settings
) -> JetFunction:
    return partial(
        dirac.w2_closed_form_jet,
        p,
        convention=convention,
        cut_side=settings.cut_side,
        ln_minus_one_branch=settings.ln_minus_one_branch,
        max_terms=settings.hyp2f1_max_terms,
    )


def _safely(
    label: str, build: Callable[..., ResidualReport], *args: Any, **kwargs: Any
) -> ResidualReport:
    """Run one variant check, turning a library error into a failed check."""
    try:
        return build(*args, **kwargs)
    except SusyRiccatiError as e:
        logger.warning("Variant evaluation failed", check=label, error=str(e))
        return ResidualReport.measured(label, math.inf, 0.0)


def _reduction_report(
    p: ModelParams, grid: Grid, mode: ReductionIntegration, quad_tol: float, label: str
) -> ResidualReport:
    fermionic, _ = dirac.d2_free_terms(p)
    trace = dirac.w1_from_w2(p, partial(closed_form.w_seed_jet, p), grid, mode, quad_tol)
    return numverify.residual_trace(fermionic, trace, 1e-6, name=label)


@log_call(logger)
def dirac2_suite(settings: Settings) -> SuiteResult:
    """Hypergeometric w2, its K = 0 reduction, reduction of order and the coupling map."""
    checks: List[ResidualReport] = []
    variants: Dict[str, str] = {}
    grid = Grid(start=0.05, end=1.3, n_points=50)
    eta = grid.points

    outcomes: Dict[str, List[ResidualReport]] = {
        conv.value: [] for conv in HypergeometricConvention
    }
    coupling: List[ResidualReport] = []
    for kappa in (1, -1):
        for ratio in (0.3, 1.0, 2.5):
            p = ModelParams(kappa=kappa, c=1.0, K=ratio, A=1.0, B=0.5, C=1.0, D=0.5)
            label = f"kappa={kappa:+d},K/c={ratio:g}"
            fermionic, bosonic = dirac.d2_free_terms(p)
            for conv in HypergeometricConvention:
                name = f"{label}:w2_bosonic"
                outcomes[conv.value].append(
                    _safely(
                        name,
                        numverify.residual,
                        bosonic,
                        _w2_jet_function(p, conv, settings),
                        grid,
                        1e-8,
                        name=name,
                    )
                )

            w2_jet = _w2_jet_function(p, HypergeometricConvention.CORRECTED, settings)(eta)
            w1_jet = dirac.w1_from_coupling(p, eta, w2_jet)
            coupling.append(
                ResidualReport.from_residual(
                    f"{label}:w1_fermionic",
                    eta,
                    fermionic.apply(eta, w1_jet),
                    1e-6,
                    grid.spacing,
                )
            )
            coupling.extend(
                _renamed(report, label)
                for report in dirac.d2_coupled_residuals(p, grid, w1_jet, w2_jet, 1e-8)
            )

    chosen = _pick_variant(outcomes, settings.hypergeometric_convention.value)
    variants["hypergeometric_convention"] = chosen
    checks.extend(outcomes[chosen])
    checks.extend(coupling)

    for kappa in (1, -1):
        p = ModelParams(kappa=kappa, c=1.0, K=0.0)
        anchor = closed_form.w_seed_jet(p, np.array([0.3]))
        first, second = dirac.match_superposition(
            p,
            0.3,
            complex(anchor.value[0]),
            complex(anchor.d1[0]),
            HypergeometricConvention.CORRECTED,
            settings.cut_side,
            settings.ln_minus_one_branch,
        )
        names = ("A", "B") if kappa == 1 else ("C", "D")
        matched = p.with_(**{names[0]: first, names[1]: second})
        w2 = dirac.w2_closed_form(
            matched,
            eta,
            cut_side=settings.cut_side,
            ln_minus_one_branch=settings.ln_minus_one_branch,
        )
        error = float(np.max(np.abs(w2 - closed_form.w_seed(p, eta))))
        checks.append(ResidualReport.measured(f"kappa={kappa:+d}:K0_reduction", error, 1e-8))

    reductions: Dict[str, List[ResidualReport]] = {
        mode.value: [] for mode in ReductionIntegration
    }
    for kappa in (1, -1):
        for k in (0.0, 1.0, -0.5):
            p = ModelParams(kappa=kappa, c=1.0, K=0.0, k=k)
            label = f"kappa={kappa:+d},k={k:g}:reduction_of_order"
            for mode in ReductionIntegration:
                reductions[mode.value].append(
                    _safely(
                        label, _reduction_report, p, grid, mode, settings.quad_tol, label
                    )
                )

    chosen_mode = _pick_variant(reductions, settings.reduction_integration.value)
    variants["reduction_integration"] = chosen_mode
    checks.extend(reductions[chosen_mode])
    return SuiteResult(name="dirac2", checks=checks, variants=variants)


def _gauge_round_trip(p: ModelParams, grid: Grid) -> float:
    rng = np.random.default_rng(RANDOM_SEED)
    n = len(grid)
    parts = [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(3)]
    z = FunctionTrace(grid=grid, values=parts[0], d1=parts[1], d2=parts[2], name="z")
    back = dirac.inverse_gauge_transform(p, dirac.gauge_transform(p, z))
    return max(
        _relative_error(back.values, z.values),
        _relative_error(back.d1, z.d1),
        _relative_error(back.d2, z.d2),
    )


@log_call(logger)
def dirac3_suite(settings: Settings) -> SuiteResult:
    """Gauge identity, direct versus gauged integration, the K1 = K2 = 0 anchor, Wronskians."""
    checks: List[ResidualReport] = []
    grid = Grid(start=0.1, end=1.3, n_points=200)
    eta0 = float(grid.points[0])
    p = ModelParams(kappa=1, c=1.0, lam=1.0, K1=0.7, K2=0.4)
    solver = settings.solver_options

    round_trip = _gauge_round_trip(p, grid)
    checks.append(ResidualReport.measured("gauge_round_trip", round_trip, 1e-13))

    w1_0, w2_0 = dirac.matched_initial_data(p, eta0)
    dw1_0, dw2_0 = dirac.d3_initial_derivatives(p, eta0, w1_0, w2_0)
    consistency: Dict[str, List[ResidualReport]] = {}
    for variant in BracketVariant:
        spinor = dirac.solve_D3_numeric(p, grid, w1_0, w2_0, variant, **solver)
        direct = [
            numverify.integrate_ode(ode, w0, dw0, grid, **solver)
            for ode, w0, dw0 in zip(dirac.d3_system(p, variant), (w1_0, w2_0), (dw1_0, dw2_0))
        ]
        error = max(
            _relative_error(spinor.w1, direct[0].values),
            _relative_error(spinor.w2, direct[1].values),
        )
        consistency[variant.value] = [
            ResidualReport.measured(f"{variant.value}:direct_vs_gauged", error, 1e-7),
            *(
                _renamed(report, variant.value)
                for report in dirac.d3_coupled_residuals(p, spinor, 1e-6)
            ),
        ]

    chosen = _pick_variant(consistency, settings.bracket_variant.value)
    checks.extend(consistency[chosen])

    anchor = ModelParams(kappa=1, c=1.0, lam=1.0)
    spinor = dirac.solve_D3_numeric(
        anchor, grid, *dirac.matched_initial_data(anchor, eta0), **solver
    )
    exact_w1 = closed_form.w_fermionic(anchor, grid.points)
    exact_w2 = darboux.w_general(anchor, grid.points)
    checks.append(
        ResidualReport.measured("anchor_w1", _relative_error(spinor.w1, exact_w1), 1e-7)
    )
    checks.append(
        ResidualReport.measured("anchor_w2", _relative_error(spinor.w2, exact_w2), 1e-7)
    )

    for index, ode in enumerate(dirac.gauged_system(p, BracketVariant(chosen)), start=1):
        first = numverify.integrate_ode(ode, 1.0, 0.0, grid, **solver)
        second = numverify.integrate_ode(ode, 0.0, 1.0, grid, **solver)
        drift = numverify.wronskian_drift(first, second)
        checks.append(ResidualReport.measured(f"z{index}_wronskian_drift", drift, 1e-8))

    limit = anchor.with_(lam=1e6)
    eta = Grid(start=0.1, end=1.0, n_points=100).points
    q_limit = dirac.q_free_term(limit, 2, eta) - limit.kappa * limit.c**2
    q_error = float(np.max(np.abs(q_limit)))
    checks.append(ResidualReport.measured("q2_limit", q_error, 1e-4))

    return SuiteResult(name="dirac3", checks=checks, variants={"bracket_variant": chosen})


def _finite_difference_errors(
    name: str, jet_function: JetFunction, points: Sequence[float]
) -> List[ResidualReport]:
    """Central differences against the analytic jet: d1 with h = 1e-5, d2 with h = 1e-4."""
    d1_error = d2_error = 0.0
    for x in points:
        jet = jet_function(np.asarray(x))

        def value(t: float) -> complex:
            return complex(np.asarray(jet_function(np.asarray(t)).value))

        d1, _ = numverify.finite_diff(value, x, h=1e-5)
        _, d2 = numverify.finite_diff(value, x, h=1e-4)
        d1_error = max(d1_error, abs(d1 - complex(jet.d1)) / max(1.0, abs(complex(jet.d1))))
        d2_error = max(d2_error, abs(d2 - complex(jet.d2)) / max(1.0, abs(complex(jet.d2))))
    return [
        ResidualReport.measured(f"{name}:fd_d1", d1_error, 1e-6, n_points=len(points)),
        ResidualReport.measured(f"{name}:fd_d2", d2_error, 1e-6, n_points=len(points)),
    ]


def _rendered_closed_form() -> Tuple[str, RunResult]:
    config = RunConfig(subcommand="closed-form", grid=(0.0, 6.28, 400))
    result = run_closed_form(config)
    return render_output(config.subcommand, config.params, result, "csv"), result


@log_call(logger)
def oracle_suite(settings: Settings) -> SuiteResult:
    """Integrator order, quadrature, finite differences, determinism and CSV round trip."""
    checks: List[ResidualReport] = []

    order = numverify.integrator_order()
    inverse_ratio = 1.0 / order.ratio if order.ratio > 0 else math.inf
    checks.append(
        ResidualReport.measured("integrator_error_ratio_inverse", inverse_ratio, 1 / 8)
    )

    grow = numverify.integrate_ode(
        LinearODE(
            P=lambda eta: np.zeros_like(eta, dtype=complex),
            Q=lambda eta: -np.ones_like(eta, dtype=complex),
            description="sinh",
        ),
        0.0,
        1.0,
        Grid(start=0.0, end=1.0, n_points=11),
        **settings.solver_options,
    )
    checks.append(
        ResidualReport.measured("integrator_sinh", abs(grow.values[-1] - math.sinh(1.0)), 1e-9)
    )
    cos_squared = numverify.quadrature(lambda x: math.cos(x) ** 2, 0.0, math.pi)
    checks.append(
        ResidualReport.measured(
            "quadrature_cos_squared", abs(cos_squared - math.pi / 2), 1e-10
        )
    )

    for p, points in (
        (ModelParams(kappa=1, c=1.0, phase_phi=0.2, phase_d=0.1), (0.3, 0.7, 1.1)),
        (ModelParams(kappa=-1, c=1.0), (0.5, 1.0, 2.0)),
    ):
        label = f"kappa={p.kappa:+d}"
        jets: Dict[str, JetFunction] = {
            "u_particular": partial(closed_form.u_particular_jet, p),
            "seed_log_derivative": partial(closed_form.seed_log_derivative_jet, p),
            "w_seed": partial(closed_form.w_seed_jet, p),
            "fermionic_free_term": partial(closed_form.fermionic_free_term_jet, p),
            "w_fermionic": partial(closed_form.w_fermionic_jet, p),
            "integral_I": partial(darboux.integral_I_jet, p),
            "u_general": partial(darboux.u_general_jet, p),
            "w_general": partial(darboux.w_general_jet, p),
        }
        for name, jet_function in jets.items():
            checks.extend(_finite_difference_errors(f"{label}:{name}", jet_function, points))

    first, result = _rendered_closed_form()
    second, _ = _rendered_closed_form()
    checks.append(ResidualReport.measured("cli_determinism", float(first != second), 0.0))

    eta, columns = read_trace_csv(first)
    round_trip = max(
        float(np.max(np.abs(eta - result.eta))),
        *(
            float(np.max(np.abs(columns[name] - values)))
            for name, values in result.columns.items()
        ),
    )
    checks.append(ResidualReport.measured("csv_round_trip", round_trip, 0.0))
    return SuiteResult(name="oracles", checks=checks)


def run_suites(config: RunConfig, names: Optional[Sequence[str]] = None) -> RunResult:
    """Run the selected suites (all by default) and merge their checks.

    Check names are prefixed with the suite name.
    """
    selected = tuple(names) if names else SUITE_NAMES
    settings = config.settings
    builders: Dict[str, Callable[[], SuiteResult]] = {
        "closed-form": lambda: closed_form_suite(config.params, config.grid, settings),
        "family": lambda: family_suite(settings),
        "degeneration": lambda: degeneration_suite(settings),
        "hyp2f1": lambda: hyp2f1_suite(settings),
        "dirac2": lambda: dirac2_suite(settings),
        "dirac3": lambda: dirac3_suite(settings),
        "oracles": lambda: oracle_suite(settings),
    }

    checks: List[ResidualReport] = []
    variants: Dict[str, str] = {}
    for name in selected:
        suite = builders[name]()
        logger.info(
            "Suite finished", suite=name, passed=suite.passed, checks=len(suite.checks)
        )
        checks.extend(_renamed(check, name) for check in suite.checks)
        variants.update(suite.variants)
    return RunResult(checks=checks, variants=variants)
