"""Pydantic models for parameters, grids, sampled traces and residual reports."""

import math
from typing import (
    Annotated,
    Any,
    Callable,
    List,
    Literal,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)

from ..config import DEFAULT_EXCLUDED_RADIUS

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _to_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def _complex_pair(value: complex) -> List[float]:
    return [value.real, value.imag]


ComplexNumber = Annotated[
    complex,
    BeforeValidator(_to_complex),
    PlainSerializer(_complex_pair, return_type=list),
]


class Jet(NamedTuple):
    """Value and first two derivatives of a function sampled at the same points."""

    value: Any
    d1: Any
    d2: Any

    def scaled(self, factor: complex) -> "Jet":
        return Jet(factor * self.value, factor * self.d1, factor * self.d2)

    def plus(self, other: "Jet") -> "Jet":
        return Jet(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)


JetFunction = Callable[[np.ndarray], Jet]


class ModelParams(BaseModel):
    """All constant parameters of the Riccati, Darboux and Dirac-like problems."""

    model_config = ConfigDict(
        frozen=True, populate_by_name=True, arbitrary_types_allowed=True, extra="forbid"
    )

    kappa: Literal[1, -1] = 1
    c: float = 1.0
    phase_phi: float = 0.0
    amp_W: float = Field(default=1.0, gt=0)
    phase_d: float = 0.0
    lam: float = Field(default=1.0, gt=0, alias="lambda")
    K: float = Field(default=0.0, ge=0)
    K1: float = Field(default=0.0, ge=0)
    K2: float = Field(default=0.0, ge=0)
    k: float = 0.0
    A: ComplexNumber = 1.0 + 0j
    B: ComplexNumber = 0j
    C: ComplexNumber = 0j
    D: ComplexNumber = 1.0 + 0j

    @field_validator("c")
    @classmethod
    def validate_c(cls, v: float) -> float:
        """Ensure the Riccati coefficient is a finite nonzero real."""
        if v == 0 or not math.isfinite(v):
            raise ValueError("c must be a finite nonzero real")
        return v

    @field_validator("phase_phi", "phase_d", "k", "lam", "K", "K1", "K2", "amp_W")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("parameter must be finite")
        return v

    @property
    def delta_K(self) -> float:
        """Mass difference K1 - K2 of the D3 system."""
        return self.K1 - self.K2

    def with_(self, **updates: Any) -> "ModelParams":
        """Return a validated copy with some fields replaced."""
        data = self.model_dump(by_alias=False)
        data.update({"lam" if key == "lambda" else key: value for key, value in updates.items()})
        return ModelParams(**data)


class Grid(BaseModel):
    """Uniform 1-D evaluation domain with singularity exclusion."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    start: float
    end: float
    n_points: int = Field(ge=2)
    excluded_radius: float = Field(default=DEFAULT_EXCLUDED_RADIUS, gt=0)
    singularities: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def validate_interval(self) -> "Grid":
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ValueError("grid endpoints must be finite")
        if not self.start < self.end:
            raise ValueError(f"start ({self.start}) must be below end ({self.end})")
        if self.points.size == 0:
            raise ValueError("every grid point falls inside an excluded radius")
        return self

    @property
    def spacing(self) -> float:
        """Spacing of the underlying uniform lattice."""
        return (self.end - self.start) / (self.n_points - 1)

    @property
    def lattice(self) -> np.ndarray:
        """All lattice points before singularity exclusion."""
        return np.linspace(self.start, self.end, self.n_points)

    @property
    def points(self) -> np.ndarray:
        """Retained points: lattice points farther than excluded_radius from every singularity."""
        lattice = self.lattice
        if not self.singularities:
            return lattice
        poles = np.asarray(self.singularities, dtype=float)
        distance = np.abs(lattice[:, None] - poles[None, :]).min(axis=1)
        return lattice[distance > self.excluded_radius]

    def __len__(self) -> int:
        return int(self.points.size)


def _as_complex_array(value: Any) -> Optional[np.ndarray]:
    if value is None:
        return None
    return np.asarray(value, dtype=complex)


class FunctionTrace(BaseModel):
    """Complex-valued function sampled on a grid, optionally with derivatives."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    values: np.ndarray
    d1: Optional[np.ndarray] = None
    d2: Optional[np.ndarray] = None
    name: str = "w"

    @field_validator("values", "d1", "d2", mode="before")
    @classmethod
    def coerce_array(cls, v: Any) -> Optional[np.ndarray]:
        return _as_complex_array(v)

    @model_validator(mode="after")
    def validate_samples(self) -> "FunctionTrace":
        n = len(self.grid)
        for label, array in (("values", self.values), ("d1", self.d1), ("d2", self.d2)):
            if array is None:
                continue
            if array.shape != (n,):
                raise ValueError(f"{label} has shape {array.shape}, grid has {n} points")
            if not np.all(np.isfinite(array)):
                raise ValueError(f"{label} contains non-finite entries")
        return self

    @property
    def eta(self) -> np.ndarray:
        return self.grid.points

    @classmethod
    def from_jet(cls, grid: Grid, jet: Jet, name: str = "w") -> "FunctionTrace":
        """Sample a jet on the retained grid points."""
        n = len(grid)
        return cls(
            grid=grid,
            values=np.broadcast_to(jet.value, (n,)),
            d1=None if jet.d1 is None else np.broadcast_to(jet.d1, (n,)),
            d2=None if jet.d2 is None else np.broadcast_to(jet.d2, (n,)),
            name=name,
        )


class SpinorTrace(BaseModel):
    """Two-component spinor sampled on a grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    w1: np.ndarray
    w2: np.ndarray
    dw1: Optional[np.ndarray] = None
    dw2: Optional[np.ndarray] = None

    @field_validator("w1", "w2", "dw1", "dw2", mode="before")
    @classmethod
    def coerce_array(cls, v: Any) -> Optional[np.ndarray]:
        return _as_complex_array(v)

    @model_validator(mode="after")
    def validate_components(self) -> "SpinorTrace":
        n = len(self.grid)
        for label in ("w1", "w2", "dw1", "dw2"):
            array = getattr(self, label)
            if array is None:
                continue
            if array.shape != (n,):
                raise ValueError(f"{label} has shape {array.shape}, grid has {n} points")
            if not np.all(np.isfinite(array)):
                raise ValueError(f"{label} contains non-finite entries")
        return self

    @property
    def eta(self) -> np.ndarray:
        return self.grid.points

    def component(self, index: int) -> FunctionTrace:
        """Return component 1 or 2 as a FunctionTrace."""
        if index not in (1, 2):
            raise ValueError("spinor component index must be 1 or 2")
        values = self.w1 if index == 1 else self.w2
        d1 = self.dw1 if index == 1 else self.dw2
        return FunctionTrace(grid=self.grid, values=values, d1=d1, name=f"w{index}")


CoefficientFunction = Callable[[np.ndarray], Any]


class LinearODE(BaseModel):
    """Second-order scalar ODE w'' + P(eta) w' + Q(eta) w = 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    P: CoefficientFunction
    Q: CoefficientFunction
    description: str = ""

    def coefficients(self, eta: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """Evaluate (P, Q) as complex arrays broadcast to the shape of eta."""
        eta_arr = np.asarray(eta, dtype=float)
        P = np.broadcast_to(np.asarray(self.P(eta_arr), dtype=complex), eta_arr.shape)
        Q = np.broadcast_to(np.asarray(self.Q(eta_arr), dtype=complex), eta_arr.shape)
        return P, Q

    def apply(self, eta: ArrayLike, jet: Jet) -> np.ndarray:
        """Pointwise residual w'' + P w' + Q w of a jet sampled at eta."""
        P, Q = self.coefficients(eta)
        return np.asarray(jet.d2 + P * jet.d1 + Q * jet.value, dtype=complex)


def zero_coefficient(eta: np.ndarray) -> np.ndarray:
    """Coefficient function that vanishes identically."""
    return np.zeros_like(np.asarray(eta, dtype=float), dtype=complex)


class ResidualReport(BaseModel):
    """Sup and L2 residual of a candidate solution, with a pass/fail verdict."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str = "residual"
    sup_norm: float
    l2_norm: float
    worst_eta: float
    n_points: int
    tolerance: float
    passed: bool = Field(alias="pass")

    @classmethod
    def from_residual(
        cls,
        name: str,
        eta: np.ndarray,
        residual: np.ndarray,
        tolerance: float,
        spacing: float,
    ) -> "ResidualReport":
        """Summarise a pointwise residual sampled on a uniform grid.

        The L2 norm is the Riemann sum sqrt(sum |r|^2 * spacing), so that
        l2_norm <= sup_norm * sqrt(n_points * spacing).
        """
        magnitude = np.abs(np.asarray(residual, dtype=complex))
        eta = np.asarray(eta, dtype=float)
        if magnitude.size == 0:
            raise ValueError("cannot summarise an empty residual")
        if not np.all(np.isfinite(magnitude)):
            sup = math.inf
            worst = float(eta[~np.isfinite(magnitude)][0])
            l2 = math.inf
        else:
            index = int(np.argmax(magnitude))
            sup = float(magnitude[index])
            worst = float(eta[index])
            l2 = float(np.sqrt(np.sum(magnitude**2) * spacing))
        return cls(
            name=name,
            sup_norm=sup,
            l2_norm=l2,
            worst_eta=worst,
            n_points=int(magnitude.size),
            tolerance=tolerance,
            passed=sup <= tolerance,
        )

    @classmethod
    def measured(
        cls, name: str, error: float, tolerance: float, worst_eta: float = 0.0, n_points: int = 1
    ) -> "ResidualReport":
        """Report for a single measured error (a quadrature match, an error ratio)."""
        error = float(error)
        return cls(
            name=name,
            sup_norm=error,
            l2_norm=error,
            worst_eta=float(worst_eta),
            n_points=n_points,
            tolerance=tolerance,
            passed=bool(error <= tolerance),
        )

    def summary(self) -> dict:
        """Row of the JSON report."""
        return {
            "name": self.name,
            "sup_norm": self.sup_norm,
            "l2_norm": self.l2_norm,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


class OrderEstimate(BaseModel):
    """Observed convergence order of the integrator from two capped step sizes."""

    model_config = ConfigDict(frozen=True)

    step: float
    coarse_error: float
    fine_error: float

    @property
    def ratio(self) -> float:
        """Error reduction factor when the step is halved."""
        if self.fine_error == 0:
            return math.inf
        return self.coarse_error / self.fine_error

    @property
    def observed_order(self) -> float:
        return math.log2(self.ratio) if math.isfinite(self.ratio) else math.inf
