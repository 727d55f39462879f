"""Mittag-Leffler functions and the semigroup (exponential) law."""

import logging

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

from .exceptions import (  # noqa: E402
    ConvergenceError,
    DegenerateDivisionError,
    DomainError,
    EigenConvergenceError,
    EvaluationOverflowError,
    GridCellError,
    InconclusiveError,
    MLError,
)
from .models import EvalMethod, Verdict  # noqa: E402
from .schemas import MLParams, SeriesConfig  # noqa: E402
from .services.mlf_core import ml_at_time, ml_e, ml_e2  # noqa: E402
from .services.semigroup import classify_semigroup, defect  # noqa: E402

__all__ = [
    "__version__",
    "ConvergenceError",
    "DegenerateDivisionError",
    "DomainError",
    "EigenConvergenceError",
    "EvalMethod",
    "EvaluationOverflowError",
    "GridCellError",
    "InconclusiveError",
    "MLError",
    "MLParams",
    "SeriesConfig",
    "Verdict",
    "classify_semigroup",
    "defect",
    "ml_at_time",
    "ml_e",
    "ml_e2",
]
