"""Gamma and Mittag-Leffler evaluation on the real line.

``ml_e2`` sums the defining power series with a running compensated sum and a
geometric tail bound. Two exact identities take over where the series loses
all its digits to cancellation on the negative axis:

* ``alpha == beta == 1``: ``E_1(z) = 1 / E_1(-z)``;
* ``0 < alpha < 1`` and ``beta`` in ``{1, alpha}``: the completely monotone
  (spectral) integral representation, integrated with ``scipy.integrate.quad``.
"""

import logging
import math
import sys
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

from scipy import integrate, special

from ..exceptions import ConvergenceError, DomainError, EvaluationOverflowError
from ..models import EvalMethod
from ..schemas import EvalResult, MLParams, SeriesConfig
from .summation import CompensatedSum

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon
GAMMA_MAX = 171.6

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
LOG_FLOAT_MAX = math.log(sys.float_info.max)
_POW_LOG_LIMIT = 700.0
# pow, Gamma and the division, in ulps of the term
_DIRECT_TERM_ULPS = 6.0

_CANCELLATION_FLOOR = 1e-8
_QUAD_EPSREL = 1e-13
_LOG_R_CUTOFF = 6.6  # exp(-exp(6.6)) underflows


def _lanczos_sum(z: float) -> float:
    acc = _LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        acc += coefficient / (z + i)
    return acc


def gamma(x: float) -> float:
    """Gamma function for ``0 < x <= 171.6``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma is only evaluated for x > 0, got {x!r}", parameter="x")
    if x > GAMMA_MAX:
        raise EvaluationOverflowError(f"gamma({x!r}) exceeds the double range", parameter="x")
    if x.is_integer():
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        value = math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
        if not math.isfinite(value):
            raise EvaluationOverflowError(f"gamma({x!r}) exceeds the double range", parameter="x")
        return value
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    # t ** (z + 0.5) alone overflows above x ~ 141
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_TWO_PI * half * (half * math.exp(-t)) * _lanczos_sum(z)


def log_gamma(x: float) -> float:
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma is only evaluated for x > 0, got {x!r}", parameter="x")
    if x < 0.5:
        return math.log(math.pi) - math.log(math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def _check_orders(alpha: float, beta: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"must lie in (0, 1], got {alpha!r}", parameter="alpha")
    if not 0.0 < beta < math.inf:
        raise DomainError(f"must be positive, got {beta!r}", parameter="beta")


class _Term(NamedTuple):
    magnitude: float
    error: float


def _order_argument(n: int, alpha: Fraction, beta: Fraction) -> Tuple[float, float]:
    """alpha*n + beta rounded to a double, and what the rounding dropped."""
    exact = alpha * n + beta
    x = float(exact)
    return x, float(exact - Fraction(x))


def _term_magnitude(n: int, alpha: Fraction, beta: Fraction, abs_z: float, log_abs_z: float) -> _Term:
    """|z|**n / Gamma(alpha*n + beta) with a bound on its rounding error.

    Gamma is evaluated at the rounded argument and corrected to first order
    through the digamma function. Once either factor leaves the double range
    the term is formed in log space, where the absolute error of the logs
    becomes relative error of the term.
    """
    x, dropped = _order_argument(n, alpha, beta)
    shift = float(special.digamma(x)) * dropped if dropped else 0.0
    log_power = n * log_abs_z
    if log_power < _POW_LOG_LIMIT and x <= 171.0:
        magnitude = abs_z ** n / gamma(x) * (1.0 - shift)
        return _Term(magnitude, _DIRECT_TERM_ULPS * EPS * magnitude)

    log_gamma_x = log_gamma(x)
    log_magnitude = log_power - log_gamma_x - shift
    if log_magnitude > LOG_FLOAT_MAX:
        raise EvaluationOverflowError(
            f"series term {n} exceeds the double range (log magnitude {log_magnitude:.1f})",
            parameter="z",
        )
    magnitude = math.exp(log_magnitude)
    ulps = 2.5 * (abs(log_power) + abs(log_gamma_x) + x) + _DIRECT_TERM_ULPS
    return _Term(magnitude, ulps * EPS * magnitude)


class _SeriesOutcome(NamedTuple):
    result: EvalResult
    abs_total: float


def _series(alpha: float, beta: float, z: float, cfg: SeriesConfig) -> _SeriesOutcome:
    abs_z = abs(z)
    log_abs_z = math.log(abs_z)
    alternating = z < 0.0
    alpha_q, beta_q = Fraction(alpha), Fraction(beta)

    acc = CompensatedSum()
    abs_total = 0.0
    term_error = 0.0
    largest = 0.0
    previous = 0.0
    tail = math.inf
    stopped = False
    terms_used = 0
    # the tail gets a tenth of the budget, the rest is left for rounding;
    # below half an ulp further terms cannot move the sum
    stop_tol = max(0.1 * cfg.tol, 0.5 * EPS)

    for n in range(cfg.max_terms):
        magnitude, error = _term_magnitude(n, alpha_q, beta_q, abs_z, log_abs_z)
        acc.add(-magnitude if alternating and n % 2 else magnitude)
        abs_total += magnitude
        term_error += error
        largest = max(largest, magnitude)
        terms_used = n + 1
        if n > 0:
            # log-convexity of Gamma keeps the ratio non-increasing in n,
            # so once below one the geometric tail bounds the remainder
            ratio = magnitude / previous
            if ratio < 1.0:
                tail = magnitude * ratio / (1.0 - ratio)
                if tail <= stop_tol * max(abs(acc.total), 1.0):
                    stopped = True
                    break
        previous = magnitude

    value = acc.total
    if not (math.isfinite(value) and math.isfinite(abs_total)):
        raise EvaluationOverflowError(f"series sum at z = {z!r} exceeds the double range", parameter="z")

    estimate = tail + 2.0 * EPS * abs(value) + term_error
    converged = stopped and estimate <= cfg.tol * max(abs(value), 1.0)
    if abs(value) < _CANCELLATION_FLOOR * largest:
        logger.debug("cancellation at z=%r: |sum|=%.3e, largest term=%.3e", z, abs(value), largest)
        converged = False
    if not stopped:
        logger.debug("series at z=%r stopped at max_terms=%d", z, cfg.max_terms)

    result = EvalResult(
        value=value,
        error_estimate=estimate,
        terms_used=terms_used,
        converged=converged,
        method=EvalMethod.SERIES,
    )
    return _SeriesOutcome(result=result, abs_total=abs_total)


def _reciprocal(z: float, cfg: SeriesConfig) -> EvalResult:
    mirrored = _series(1.0, 1.0, -z, cfg).result
    value = 1.0 / mirrored.value
    estimate = mirrored.error_estimate * value * value + EPS * value
    return EvalResult(
        value=value,
        error_estimate=estimate,
        terms_used=mirrored.terms_used,
        converged=mirrored.converged and estimate <= cfg.tol * max(value, 1.0),
        method=EvalMethod.RECIPROCAL,
    )


def _laplace(alpha: float, beta: float, x: float, cfg: SeriesConfig) -> EvalResult:
    """E_alpha(-x) (beta == 1) or E_{alpha,alpha}(-x) (beta == alpha) for x > 0, 0 < alpha < 1."""
    inv_alpha = 1.0 / alpha
    weighted = beta != 1.0
    # u*u + 2u cos(pi alpha) + 1 == (u - centre)**2 + width**2: a peak of
    # width sin(pi alpha) at u = centre, which narrows as alpha -> 1.
    # The integral runs over v = u - centre, which keeps the peak free of cancellation.
    reflected = math.pi * (1.0 - alpha)
    centre = math.cos(reflected)
    width = math.sin(reflected)

    def integrand(v: float) -> float:
        scaled = x * (v + centre)
        if scaled <= 0.0:
            kernel = 0.0 if weighted else 1.0
        else:
            log_r = inv_alpha * math.log(scaled)
            if log_r > _LOG_R_CUTOFF:
                return 0.0
            r = math.exp(log_r)
            kernel = math.exp(-r)
            if weighted:
                kernel *= r
        return kernel / (v * v + width * width)

    lower = -centre
    # the peak and its shoulders, r = 1, and u = 1
    cuts = sorted({c for c in (-width, 0.0, width, 1.0 / x - centre, 1.0 - centre) if c > lower})
    edges = [lower] + cuts + [math.inf]

    total = 0.0
    error = 0.0
    for a, b in zip(edges, edges[1:]):
        outcome = integrate.quad(
            integrand, a, b, epsabs=0.0, epsrel=_QUAD_EPSREL, limit=200, full_output=1
        )
        total += outcome[0]
        error += outcome[1]
        if len(outcome) > 3:
            logger.debug("quad on [%s, %s] for x=%r: %s", a, b, x, outcome[3])

    scale = width / (alpha * math.pi)
    if weighted:
        scale /= x
    value = scale * total
    estimate = scale * error + 4.0 * EPS * abs(value)
    return EvalResult(
        value=value,
        error_estimate=estimate,
        terms_used=0,
        converged=estimate <= cfg.quad_tol * max(abs(value), 1.0),
        method=EvalMethod.LAPLACE,
    )


def ml_e2(alpha: float, beta: float, z: float, cfg: Optional[SeriesConfig] = None) -> EvalResult:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z."""
    cfg = cfg or SeriesConfig()
    _check_orders(alpha, beta)
    if not abs(z) <= cfg.z_cap:
        raise DomainError(f"|z| = {abs(z)!r} exceeds z_cap = {cfg.z_cap!r}", parameter="z")

    if z == 0.0:
        value = 1.0 if beta == 1.0 else 1.0 / gamma(beta)
        return EvalResult(value=value, error_estimate=0.0, terms_used=1, converged=True)

    if z < 0.0 and alpha == 1.0 and beta == 1.0:
        return _reciprocal(z, cfg)

    has_integral = z < 0.0 and alpha < 1.0 and (beta == 1.0 or beta == alpha)
    try:
        outcome = _series(alpha, beta, z, cfg)
    except EvaluationOverflowError:
        if not has_integral:
            raise
        logger.debug("series overflow at z=%r, alpha=%r; using the Laplace path", z, alpha)
        return _laplace(alpha, beta, -z, cfg)

    if not has_integral:
        return outcome.result
    if outcome.abs_total > cfg.cancellation_limit * abs(outcome.result.value):
        logger.debug(
            "cancellation ratio %.3e at z=%r, alpha=%r; using the Laplace path",
            outcome.abs_total / max(abs(outcome.result.value), sys.float_info.min), z, alpha,
        )
        return _laplace(alpha, beta, -z, cfg)
    if not outcome.result.converged:
        logger.debug("series estimate %.3e at z=%r, alpha=%r; using the Laplace path",
                     outcome.result.error_estimate, z, alpha)
        return _laplace(alpha, beta, -z, cfg)
    return outcome.result


def ml_e(alpha: float, z: float, cfg: Optional[SeriesConfig] = None) -> EvalResult:
    return ml_e2(alpha, 1.0, z, cfg)


def ml_at_time(p: MLParams, t: float, cfg: Optional[SeriesConfig] = None) -> EvalResult:
    """E_alpha(lambda * t**alpha): the solution of the Caputo problem with u(0) = 1."""
    cfg = cfg or SeriesConfig()
    if not t >= 0.0:
        raise DomainError(f"must be nonnegative, got {t!r}", parameter="t")
    if t == 0.0:
        return EvalResult(value=1.0, error_estimate=0.0, terms_used=0, converged=True)
    z = p.lam * t ** p.alpha
    if abs(z) > cfg.z_cap:
        raise DomainError(
            f"lambda * t**alpha = {z!r} exceeds z_cap = {cfg.z_cap!r}", parameter="t"
        )
    return ml_e(p.alpha, z, cfg)


def ml_value(result: EvalResult) -> float:
    if not result.converged:
        raise ConvergenceError(
            f"evaluation did not converge (method={result.method.value}, "
            f"terms={result.terms_used}, estimate={result.error_estimate:.3e})"
        )
    return result.value
