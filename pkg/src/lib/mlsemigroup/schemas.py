from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .models import Command, EvalMethod, OutputFormat


class SeriesConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(1e-14, gt=0)
    max_terms: int = Field(10000, ge=1)
    z_cap: float = Field(50.0, gt=0)
    cancellation_limit: float = Field(50.0, ge=1)
    quad_tol: float = Field(1e-12, gt=0)


class EvalResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    error_estimate: float = Field(ge=0)
    terms_used: int = Field(ge=0)
    converged: bool
    method: EvalMethod = EvalMethod.SERIES


class MLParams(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    alpha: float = Field(gt=0, le=1)
    beta: float = Field(1.0, gt=0)
    lam: float = Field(0.0, alias="lambda")


class ResidualReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    grid_steps: int = Field(ge=2)
    max_residual: float = Field(ge=0)
    refined_residual: float = Field(ge=0)
    empirical_order: float
    window_start: float = 0.5
    converged: bool = True


class GridSpec(BaseModel):
    """Uniform grid ``linspace(t_min, t_max, n)`` used for both t and s."""

    model_config = ConfigDict(frozen=True)

    t_min: float = Field(0.25, ge=0)
    t_max: float = 2.0
    n: int = Field(8, ge=2)

    @model_validator(mode="after")
    def _check_range(self) -> "GridSpec":
        if self.t_max <= self.t_min:
            raise ValueError("t_max must exceed t_min")
        return self

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.t_min, self.t_max, self.n)]


def _as_float_array(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=float)


class DefectGrid(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t_values: List[float]
    s_values: List[float]
    defect: np.ndarray
    sup_abs: float = Field(ge=0)

    @field_validator("t_values", "s_values")
    @classmethod
    def _ascending(cls, values: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("grid values must be strictly ascending")
        if values and values[0] < 0:
            raise ValueError("grid values must be nonnegative")
        return values

    @field_validator("defect", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        return _as_float_array(value)

    @model_validator(mode="after")
    def _check_shape(self) -> "DefectGrid":
        if self.defect.shape != (len(self.t_values), len(self.s_values)):
            raise ValueError("defect must be indexed (t, s)")
        if self.sup_abs != float(np.max(np.abs(self.defect), initial=0.0)):
            raise ValueError("sup_abs must equal max |defect|")
        return self

    @classmethod
    def from_cells(cls, t_values: List[float], s_values: List[float], defect: np.ndarray) -> "DefectGrid":
        defect = _as_float_array(defect)
        return cls(
            t_values=list(t_values),
            s_values=list(s_values),
            defect=defect,
            sup_abs=float(np.max(np.abs(defect), initial=0.0)),
        )

    def cells(self):
        """Yield ``(t, s, defect)`` in row-major order."""
        for i, t in enumerate(self.t_values):
            for j, s in enumerate(self.s_values):
                yield t, s, float(self.defect[i, j])


class ExponentialFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    omega: float
    residual: float = Field(ge=0)


class Spectrum(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int = Field(ge=1)
    eigenvalues: np.ndarray
    basis: np.ndarray
    basis_inverse: np.ndarray

    @field_validator("eigenvalues", "basis", "basis_inverse", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        return _as_float_array(value)

    @model_validator(mode="after")
    def _check_basis(self) -> "Spectrum":
        n = self.order
        if self.eigenvalues.shape != (n,):
            raise ValueError(f"expected {n} eigenvalues")
        if self.basis.shape != (n, n) or self.basis_inverse.shape != (n, n):
            raise ValueError(f"basis and basis_inverse must be {n}x{n}")
        mismatch = np.max(np.abs(self.basis @ self.basis_inverse - np.eye(n)))
        if mismatch > 1e-10:
            raise ValueError(f"basis_inverse does not invert basis (max deviation {mismatch:.3e})")
        return self

    def reconstruct(self) -> np.ndarray:
        return self.basis @ np.diag(self.eigenvalues) @ self.basis_inverse


class Table(BaseModel):
    """What a CLI command produces before it is written as CSV or JSON."""

    columns: List[str]
    rows: List[List[Any]] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)


REQUIRED_PARAMETERS: Dict[Command, List[str]] = {
    Command.EVAL: ["alpha", "z"],
    Command.DEFECT: ["alpha", "lam", "t", "s"],
    Command.GRID: ["alpha", "lam", "tmax", "n"],
    Command.CLASSIFY: ["alpha", "lam"],
    Command.MATRIX: ["alpha", "matrix"],
    Command.CAPUTO_CHECK: ["alpha", "lam", "n"],
    Command.FIT: ["alpha", "lam"],
    Command.TRACE: ["alpha", "omega"],
}


class RunConfig(BaseModel):
    command: Command
    parameters: Dict[str, Any] = Field(default_factory=dict)
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[Path] = None

    @model_validator(mode="after")
    def _check_required(self) -> "RunConfig":
        missing = [
            name for name in REQUIRED_PARAMETERS[self.command]
            if self.parameters.get(name) is None
        ]
        if missing:
            raise ValueError(f"{self.command.value} requires {', '.join(missing)}")
        return self
