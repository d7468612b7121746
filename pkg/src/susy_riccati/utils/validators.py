"""Input validation utilities for command-line values."""

import math
import re
from typing import Tuple

from ..exceptions import ConfigurationError

_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_GRID_SPEC = re.compile(rf"^\s*({_REAL})\s*:\s*({_REAL})\s*:\s*(\d+)\s*$")


def parse_grid_spec(spec: str) -> Tuple[float, float, int]:
    """Parse a grid specification of the form ``start:end:n``.

    Args:
        spec: Grid specification with decimal reals and inclusive endpoints

    Returns:
        Tuple of (start, end, n_points)

    Raises:
        ConfigurationError: If the specification is malformed or describes an empty grid
    """
    if not spec or not spec.strip():
        raise ConfigurationError("grid", "Cannot be empty")

    match = _GRID_SPEC.match(spec)
    if match is None:
        raise ConfigurationError("grid", f"Expected start:end:n, got {spec!r}")

    start, end, n_points = float(match.group(1)), float(match.group(2)), int(match.group(3))

    if n_points < 2:
        raise ConfigurationError("grid", f"Need at least 2 points, got {n_points}")
    if not start < end:
        raise ConfigurationError("grid", f"start ({start}) must be below end ({end})")

    return start, end, n_points


def parse_complex(value: str) -> complex:
    """Parse a complex constant such as ``1``, ``-0.5j`` or ``1+2j``.

    Args:
        value: Text of the constant

    Returns:
        Parsed complex number

    Raises:
        ConfigurationError: If the text is not a finite complex literal
    """
    text = value.strip().replace(" ", "").replace("i", "j")
    try:
        parsed = complex(text)
    except ValueError:
        raise ConfigurationError("complex constant", f"Cannot parse {value!r}")

    if not (math.isfinite(parsed.real) and math.isfinite(parsed.imag)):
        raise ConfigurationError("complex constant", f"Must be finite, got {value!r}")

    return parsed


def validate_kappa(value: str) -> int:
    """Validate the branch sign kappa.

    Args:
        value: Text of the sign, ``1``/``+1`` or ``-1``

    Returns:
        The sign as an integer

    Raises:
        ConfigurationError: If the value is not +1 or -1
    """
    try:
        kappa = int(value)
    except (TypeError, ValueError):
        raise ConfigurationError("kappa", f"Must be +1 or -1, got {value!r}")

    if kappa not in (1, -1):
        raise ConfigurationError("kappa", f"Must be +1 or -1, got {value!r}")

    return kappa
