"""Semigroup defect of t -> E_alpha(lambda t**alpha) and the exponential-law toolkit.

The identity E(t+s) = E(t) E(s) on t, s >= 0 holds exactly when alpha == 1 or
lambda == 0. Numerically that becomes a two-threshold verdict on the sup-norm
of the defect over a grid.
"""

import logging
import math
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

import numpy as np

from ..exceptions import (
    DegenerateDivisionError,
    DomainError,
    EvaluationOverflowError,
    GridCellError,
    InconclusiveError,
    MLError,
)
from ..models import Verdict
from ..schemas import DefectGrid, ExponentialFit, GridSpec, MLParams, SeriesConfig
from .mlf_core import LOG_FLOAT_MAX, ml_at_time, ml_e2, ml_value

logger = logging.getLogger(__name__)

Evaluator = Callable[[float], float]

DEGENERATE_FLOOR = 1e-300


def defect(p: MLParams, t: float, s: float, cfg: Optional[SeriesConfig] = None) -> float:
    """E_alpha(lambda (t+s)**alpha) - E_alpha(lambda t**alpha) * E_alpha(lambda s**alpha)."""
    for name, value in (("t", t), ("s", s)):
        if not value >= 0.0:
            raise DomainError(f"must be nonnegative, got {value!r}", parameter=name)
    joint = ml_value(ml_at_time(p, t + s, cfg))
    left = ml_value(ml_at_time(p, t, cfg))
    right = ml_value(ml_at_time(p, s, cfg))
    return joint - left * right


def fill_grid(
    cell: Callable[[float, float], float], t_values: Sequence[float], s_values: Sequence[float]
) -> DefectGrid:
    """Evaluate ``cell`` on every (t, s) pair; a failing cell is reported with its indices."""
    table = np.empty((len(t_values), len(s_values)))
    for i, t in enumerate(t_values):
        for j, s in enumerate(s_values):
            try:
                table[i, j] = cell(float(t), float(s))
            except MLError as exc:
                raise GridCellError(i, j, exc) from exc
    return DefectGrid.from_cells([float(t) for t in t_values], [float(s) for s in s_values], table)


def defect_grid(
    p: MLParams,
    t_values: Sequence[float],
    s_values: Sequence[float],
    cfg: Optional[SeriesConfig] = None,
) -> DefectGrid:
    return fill_grid(lambda t, s: defect(p, t, s, cfg), t_values, s_values)


def judge_sup(sup_abs: float, tol: float, threshold: float) -> Verdict:
    if not 0.0 < tol < threshold:
        raise DomainError(f"need 0 < tol < threshold, got tol={tol!r}", parameter="tol")
    if sup_abs <= tol:
        return Verdict.HOLDS
    if sup_abs >= threshold:
        return Verdict.FAILS
    raise InconclusiveError(sup_abs, tol, threshold)


class Classification(NamedTuple):
    verdict: Verdict
    grid: DefectGrid


def classify_sweep(
    p: MLParams,
    grid: Optional[GridSpec] = None,
    tol: float = 1e-9,
    threshold: float = 1e-3,
    cfg: Optional[SeriesConfig] = None,
) -> Classification:
    """Verdict on the square defect grid over ``grid``, together with the grid itself."""
    grid = grid or GridSpec()
    # reject a bad band before paying for the sweep
    if not 0.0 < tol < threshold:
        raise DomainError(f"need 0 < tol < threshold, got tol={tol!r}", parameter="tol")
    values = grid.values()
    result = defect_grid(p, values, values, cfg)
    verdict = judge_sup(result.sup_abs, tol, threshold)
    logger.info(
        "alpha=%r lambda=%r: sup |defect| = %.3e -> %s", p.alpha, p.lam, result.sup_abs, verdict.value
    )
    return Classification(verdict=verdict, grid=result)


def classify_semigroup(
    p: MLParams,
    grid: Optional[GridSpec] = None,
    tol: float = 1e-9,
    threshold: float = 1e-3,
    cfg: Optional[SeriesConfig] = None,
) -> Verdict:
    return classify_sweep(p, grid, tol, threshold, cfg).verdict


def semigroup_expected(p: MLParams) -> bool:
    return p.alpha == 1.0 or p.lam == 0.0


def extend_multiplicative(f: Evaluator, n: int, tau: float) -> float:
    """psi_n(tau) = f(tau + n) / f(n), defined for tau >= -n."""
    if n < 1:
        raise DomainError(f"must be a positive integer, got {n!r}", parameter="n")
    if tau < -n:
        raise DomainError(f"must be >= -{n}, got {tau!r}", parameter="tau")
    base = f(float(n))
    if not base > 0.0:
        raise DomainError(f"f({n}) must be positive, got {base!r}", parameter="f")
    return f(tau + n) / base


def extend_to_real_line(f: Evaluator, tau: float) -> float:
    """Extension of f to the whole line through the smallest admissible psi_n."""
    n = max(1, math.ceil(-tau))
    return extend_multiplicative(f, n, tau)


def multiplicative_defect(f: Evaluator, t: float, s: float) -> float:
    return f(t + s) - f(t) * f(s)


def exponential_fit(f: Evaluator, T: float, samples: int) -> ExponentialFit:
    """Fit f ~ exp(omega t) with omega = ln f(1); the residual is the sup gap on linspace(0, T, samples)."""
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples!r}", parameter="samples")
    if not T > 0.0:
        raise DomainError(f"must be positive, got {T!r}", parameter="T")
    at_one = f(1.0)
    if not at_one > 0.0:
        raise DomainError(f"f(1) must be positive, got {at_one!r}", parameter="f")

    omega = math.log(at_one)
    if omega * T > LOG_FLOAT_MAX:
        raise EvaluationOverflowError(f"exp(omega T) overflows for omega = {omega!r}", parameter="T")
    residual = max(abs(f(float(t)) - math.exp(omega * t)) for t in np.linspace(0.0, T, samples))
    return ExponentialFit(omega=omega, residual=residual)


def proof_trace_lambda(
    p: MLParams, omega: float, t: float, cfg: Optional[SeriesConfig] = None
) -> float:
    """t**(1-alpha) omega exp(omega t) / E_{alpha,alpha}(lambda t**alpha).

    If E(t) = exp(omega t) solved the Caputo problem this would equal lambda
    for every t; for lambda = 0 it instead decays like t**(1-alpha).
    """
    if not t > 0.0:
        raise DomainError(f"must be positive, got {t!r}", parameter="t")
    if omega * t > LOG_FLOAT_MAX:
        raise EvaluationOverflowError(f"exp(omega t) overflows at omega t = {omega * t!r}", parameter="omega")
    denominator = ml_value(ml_e2(p.alpha, p.alpha, p.lam * t ** p.alpha, cfg))
    if abs(denominator) < DEGENERATE_FLOOR:
        raise DegenerateDivisionError(
            f"|E_(alpha,alpha)| = {abs(denominator)!r} at t = {t!r}", parameter="t"
        )
    estimate = t ** (1.0 - p.alpha) * omega * math.exp(omega * t) / denominator
    if not math.isfinite(estimate):
        raise EvaluationOverflowError(f"the trace at t = {t!r} exceeds the double range", parameter="omega")
    return estimate


def proof_trace_slope(
    p: MLParams, omega: float, t_values: Iterable[float], cfg: Optional[SeriesConfig] = None
) -> float:
    """Least-squares slope of log|proof_trace_lambda| against log t."""
    t_values = [float(t) for t in t_values]
    if len(t_values) < 2:
        raise DomainError("need at least 2 times", parameter="t")
    if omega == 0.0:
        raise DomainError("the trace vanishes identically for omega = 0", parameter="omega")
    estimates = [abs(proof_trace_lambda(p, omega, t, cfg)) for t in t_values]
    slope, _ = np.polyfit(np.log(t_values), np.log(estimates), 1)
    return float(slope)
