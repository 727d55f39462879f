import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..exceptions import DomainError
from ..schemas import MLParams, ResidualReport, SeriesConfig
from .mlf_core import gamma, ml_at_time, ml_e2, ml_value

logger = logging.getLogger(__name__)


def ml_derivative(p: MLParams, t: float, cfg: Optional[SeriesConfig] = None) -> float:
    """d/dt E_alpha(lambda t**alpha) = lambda t**(alpha-1) E_{alpha,alpha}(lambda t**alpha), t > 0."""
    cfg = cfg or SeriesConfig()
    if not t > 0.0:
        raise DomainError(f"the derivative is taken at t > 0, got {t!r}", parameter="t")
    if p.lam == 0.0:
        return 0.0
    z = p.lam * t ** p.alpha
    if abs(z) > cfg.z_cap:
        raise DomainError(f"lambda * t**alpha = {z!r} exceeds z_cap = {cfg.z_cap!r}", parameter="t")
    return p.lam * t ** (p.alpha - 1.0) * ml_value(ml_e2(p.alpha, p.alpha, z, cfg))


def finite_difference_check(
    p: MLParams, t: float, h: float = 1e-5, cfg: Optional[SeriesConfig] = None
) -> float:
    """Relative gap between the central difference of E_alpha(lambda t**alpha) and ``ml_derivative``."""
    cfg = cfg or SeriesConfig()
    if not t > 0.0:
        raise DomainError(f"must be positive, got {t!r}", parameter="t")
    if not 0.0 < h < t:
        raise DomainError(f"step must satisfy 0 < h < t = {t!r}, got {h!r}", parameter="h")

    forward = ml_value(ml_at_time(p, t + h, cfg))
    backward = ml_value(ml_at_time(p, t - h, cfg))
    central = (forward - backward) / (2.0 * h)
    exact = ml_derivative(p, t, cfg)
    return abs(central - exact) / max(abs(exact), 1e-300)


def ivp_solution(p: MLParams, u0: float, t: float, cfg: Optional[SeriesConfig] = None) -> float:
    """u(t) = E_alpha(lambda t**alpha) u0 for the problem cD^alpha u = lambda u, u(0) = u0."""
    return u0 * ml_value(ml_at_time(p, t, cfg))


def _l1_residual(
    p: MLParams, u0: float, T: float, n_steps: int, cfg: SeriesConfig, window_start: float
) -> Tuple[float, bool]:
    alpha = p.alpha
    nodes = np.linspace(0.0, T, n_steps + 1)
    results = [ml_at_time(p, float(t), cfg) for t in nodes]
    converged = all(result.converged for result in results)
    u = u0 * np.array([result.value for result in results])

    # b_j = (j+1)^(1-alpha) - j^(1-alpha); b_0 = 1 also in the alpha = 1 limit
    powers = np.arange(n_steps + 1, dtype=float) ** (1.0 - alpha)
    powers[0] = 0.0
    weights = np.diff(powers)

    h = T / n_steps
    l1 = np.convolve(weights, np.diff(u))[:n_steps] * h ** (-alpha) / gamma(2.0 - alpha)
    residual = np.abs(l1 - p.lam * u[1:])

    in_window = nodes[1:] >= window_start * T * (1.0 - 1e-12)
    return float(np.max(residual[in_window])), converged


def _empirical_order(coarse: float, fine: float) -> float:
    if fine > 0.0 and coarse > 0.0:
        return math.log2(coarse / fine)
    if coarse > 0.0:
        return math.inf
    return math.nan


def caputo_l1_residual(
    p: MLParams,
    u0: float,
    T: float,
    n_steps: int,
    cfg: Optional[SeriesConfig] = None,
    window_start: float = 0.5,
) -> ResidualReport:
    """Residual of the L1 Caputo quadrature applied to u(t) = E_alpha(lambda t**alpha) u0.

    The residual is the max of |L1[u](t_k) - lambda u(t_k)| over the nodes with
    ``t_k >= window_start * T``; the order comes from repeating the run on
    ``2 * n_steps`` steps.
    """
    cfg = cfg or SeriesConfig()
    if not T > 0.0:
        raise DomainError(f"must be positive, got {T!r}", parameter="T")
    if n_steps < 2:
        raise DomainError(f"needs at least 2 steps, got {n_steps!r}", parameter="n_steps")
    if not 0.0 <= window_start < 1.0:
        raise DomainError(f"must lie in [0, 1), got {window_start!r}", parameter="window_start")

    coarse, coarse_ok = _l1_residual(p, u0, T, n_steps, cfg, window_start)
    fine, fine_ok = _l1_residual(p, u0, T, 2 * n_steps, cfg, window_start)
    order = _empirical_order(coarse, fine)
    logger.debug(
        "L1 residual alpha=%r lambda=%r: n=%d -> %.3e, 2n -> %.3e, order %.3f",
        p.alpha, p.lam, n_steps, coarse, fine, order,
    )
    return ResidualReport(
        grid_steps=n_steps,
        max_residual=coarse,
        refined_residual=fine,
        empirical_order=order,
        window_start=window_start,
        converged=coarse_ok and fine_ok,
    )
