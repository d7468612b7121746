"""Shared fixtures."""

import pytest

from susy_riccati.analysis import closed_form
from susy_riccati.analysis.models import Grid, ModelParams
from susy_riccati.utils.logging import setup_logging


@pytest.fixture(autouse=True)
def quiet_logging():
    # Re-bind after capsys restores the real stderr
    setup_logging("WARNING")
    yield
    setup_logging("WARNING")


@pytest.fixture(params=[1, -1], ids=["kappa+1", "kappa-1"])
def kappa(request) -> int:
    return request.param


@pytest.fixture
def params(kappa: int) -> ModelParams:
    return ModelParams(kappa=kappa, c=1.0)


@pytest.fixture
def safe_grid(params: ModelParams) -> Grid:
    """Grid clear of every singular point of u_p, w_f and the seed zeros."""
    lo, hi = (0.0, 1.4) if params.kappa == 1 else (0.2, 3.0)
    return closed_form.pole_free_grid(params, lo, hi, 300, ("riccati", "fermionic", "seed"))
