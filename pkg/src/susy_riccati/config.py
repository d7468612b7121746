"""Configuration management using Pydantic settings."""

from enum import Enum
from typing import Any, Tuple, Type

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

# Numerical defaults shared by the library and the CLI
DEFAULT_EXCLUDED_RADIUS = 1e-3
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
QUAD_TOL = 1e-11
QUAD_LIMIT = 200
HYP2F1_MAX_TERMS = 20_000
HYP2F1_SERIES_RADIUS = 0.8
FD_STEP = 1e-5


class BracketVariant(str, Enum):
    """Placement of the factor i on the K-terms of the D3 second-order bracket."""

    AS_PRINTED = "as-printed"
    I_ON_BOTH = "i-on-both"


class ReductionIntegration(str, Enum):
    """Integration variable of the reduction-of-order integral."""

    ETA = "eta"
    Y_JACOBIAN = "y-jacobian"


class HypergeometricConvention(str, Enum):
    """Parameter convention of the hypergeometric D2 solutions."""

    AS_PRINTED = "as-printed"
    CORRECTED = "corrected"


class CutSide(int, Enum):
    """Side of the 2F1 branch cut [1, inf) used for arguments on the cut."""

    UPPER = 1
    LOWER = -1


class Settings(BaseSettings):
    """Run settings. Built from CLI flags only; environment and dotenv are ignored."""

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")

    # Logging
    log_level: str = Field(default="WARNING", description="Logging level")
    log_structured: bool = Field(default=True, description="Use structured logging")

    # Numerics
    excluded_radius: float = Field(
        default=DEFAULT_EXCLUDED_RADIUS, gt=0, description="Minimum distance to a pole"
    )
    ode_rtol: float = Field(default=ODE_RTOL, gt=0, description="Integrator relative tolerance")
    ode_atol: float = Field(default=ODE_ATOL, gt=0, description="Integrator absolute tolerance")
    quad_tol: float = Field(default=QUAD_TOL, gt=0, description="Quadrature absolute tolerance")
    hyp2f1_max_terms: int = Field(
        default=HYP2F1_MAX_TERMS, ge=100, description="Hard cap on 2F1 series terms"
    )

    # Printed-formula switches
    bracket_variant: BracketVariant = Field(default=BracketVariant.AS_PRINTED)
    reduction_integration: ReductionIntegration = Field(default=ReductionIntegration.ETA)
    hypergeometric_convention: HypergeometricConvention = Field(
        default=HypergeometricConvention.CORRECTED
    )
    ln_minus_one_branch: int = Field(
        default=0, description="Branch index n in ln(-1) = i*pi*(2n+1)"
    )
    cut_side: CutSide = Field(default=CutSide.UPPER)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"Log level must be one of: {', '.join(valid_levels)}")
        return v_upper

    @property
    def solver_options(self) -> dict[str, Any]:
        """Keyword arguments forwarded to the ODE integrator."""
        return {"rtol": self.ode_rtol, "atol": self.ode_atol}
