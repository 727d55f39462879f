import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats, sampled_from
from scipy.special import erfcx

from mlsemigroup.exceptions import (
    DegenerateDivisionError,
    DomainError,
    EvaluationOverflowError,
    GridCellError,
    InconclusiveError,
)
from mlsemigroup.models import Verdict
from mlsemigroup.schemas import GridSpec, MLParams
from mlsemigroup.services.mlf_core import ml_at_time, ml_value
from mlsemigroup.services.semigroup import (
    classify_sweep,
    classify_semigroup,
    defect,
    defect_grid,
    exponential_fit,
    extend_multiplicative,
    extend_to_real_line,
    judge_sup,
    multiplicative_defect,
    proof_trace_lambda,
    proof_trace_slope,
    semigroup_expected,
)

ALPHAS = [0.3, 0.5, 0.7, 0.9, 1.0]
LAMBDAS = [-2.0, -1.0, 0.0, 1.0, 2.0]


def _solution(alpha, lam):
    p = MLParams(alpha=alpha, lam=lam)
    return lambda t: ml_value(ml_at_time(p, t))


def test_defect_vanishes_without_lambda():
    assert defect(MLParams(alpha=0.5, lam=0.0), 1.0, 2.0) == 0.0


def test_defect_of_the_exponential():
    assert abs(defect(MLParams(alpha=1.0, lam=-1.0), 1.0, 1.0)) <= 1e-12


def test_defect_matches_erfcx_oracle():
    expected = float(erfcx(math.sqrt(2.0))) - float(erfcx(1.0)) ** 2
    value = defect(MLParams(alpha=0.5, lam=-1.0), 1.0, 1.0)
    assert abs(value - expected) <= 1e-8
    assert value > 0.1


def test_defect_rejects_negative_times():
    with pytest.raises(DomainError) as info:
        defect(MLParams(alpha=0.5, lam=-1.0), 1.0, -0.5)
    assert info.value.parameter == "s"


@settings(max_examples=50, deadline=None)
@given(
    floats(min_value=0.0, max_value=2.0),
    floats(min_value=0.0, max_value=2.0),
    sampled_from(ALPHAS),
    sampled_from(LAMBDAS),
)
def test_defect_is_symmetric(t, s, alpha, lam):
    p = MLParams(alpha=alpha, lam=lam)
    assert defect(p, t, s) == defect(p, s, t)


@settings(max_examples=50, deadline=None)
@given(floats(min_value=0.0, max_value=4.0), sampled_from(ALPHAS), sampled_from(LAMBDAS))
def test_defect_vanishes_on_the_boundary(t, alpha, lam):
    assert abs(defect(MLParams(alpha=alpha, lam=lam), t, 0.0)) <= 1e-12


def test_grid_without_lambda():
    values = np.linspace(0.0, 5.0, 11)
    grid = defect_grid(MLParams(alpha=0.4, lam=0.0), values, values)
    assert grid.sup_abs <= 1e-12
    assert grid.defect.shape == (11, 11)


def test_grid_of_the_exponential():
    values = np.linspace(0.0, 3.0, 7)
    assert defect_grid(MLParams(alpha=1.0, lam=1.0), values, values).sup_abs <= 1e-9


def test_grid_detects_the_failure():
    values = np.linspace(0.0, 2.0, 9)
    grid = defect_grid(MLParams(alpha=0.5, lam=-1.0), values, values)
    assert grid.sup_abs >= 0.15
    assert np.array_equal(grid.defect, grid.defect.T)


def test_grid_cell_failure_is_located():
    with pytest.raises(GridCellError) as info:
        defect_grid(MLParams(alpha=1.0, lam=10.0), [0.0, 1.0, 3.0], [0.0, 1.0, 3.0])
    assert (info.value.t_index, info.value.s_index) == (2, 2)
    assert info.value.parameter == "t"


@pytest.mark.parametrize("alpha, lam", list(itertools.product(ALPHAS, LAMBDAS)))
def test_iff_criterion(alpha, lam):
    p = MLParams(alpha=alpha, lam=lam)
    verdict = classify_semigroup(p, GridSpec(t_min=0.25, t_max=2.0, n=8), tol=1e-9, threshold=1e-3)
    assert verdict == (Verdict.HOLDS if semigroup_expected(p) else Verdict.FAILS)


@pytest.mark.parametrize(
    "alpha, lam, expected",
    [(1.0, 3.0, Verdict.HOLDS), (0.7, 0.0, Verdict.HOLDS), (0.7, 1.0, Verdict.FAILS)],
)
def test_classification_examples(alpha, lam, expected):
    assert classify_semigroup(MLParams(alpha=alpha, lam=lam)) == expected


def test_classification_needs_an_ordered_band():
    with pytest.raises(DomainError):
        classify_semigroup(MLParams(alpha=0.5, lam=1.0), tol=1e-3, threshold=1e-3)


def test_judge_sup_bands():
    assert judge_sup(0.0, 1e-9, 1e-3) == Verdict.HOLDS
    assert judge_sup(1e-9, 1e-9, 1e-3) == Verdict.HOLDS
    assert judge_sup(1e-3, 1e-9, 1e-3) == Verdict.FAILS
    with pytest.raises(InconclusiveError) as info:
        judge_sup(1e-5, 1e-9, 1e-3)
    assert info.value.sup_abs == 1e-5
    assert info.value.parameter == "threshold"


def test_semigroup_expected():
    assert semigroup_expected(MLParams(alpha=1.0, lam=-3.0))
    assert semigroup_expected(MLParams(alpha=0.2, lam=0.0))
    assert not semigroup_expected(MLParams(alpha=0.9, lam=0.1))


def test_extension_of_an_exponential():
    assert extend_multiplicative(lambda t: math.exp(2.0 * t), 3, -1.0) == pytest.approx(math.exp(-2.0), rel=1e-12)


@pytest.mark.parametrize("omega", [-1.0, 0.0, 2.0])
def test_extensions_agree_on_overlaps(omega):
    f = lambda t: math.exp(omega * t)  # noqa: E731
    for tau in np.linspace(-1.0, 3.0, 9):
        values = [extend_multiplicative(f, n, float(tau)) for n in range(1, 6)]
        for value in values[1:]:
            assert value == pytest.approx(values[0], rel=1e-12, abs=1e-12)
        if tau >= 0.0:
            assert values[0] == pytest.approx(f(tau), rel=1e-12, abs=1e-12)


def test_extension_differs_for_mittag_leffler():
    f = _solution(0.5, -1.0)
    assert abs(extend_multiplicative(f, 2, 0.5) - f(0.5)) > 1e-3


def test_extension_domain():
    with pytest.raises(DomainError) as info:
        extend_multiplicative(math.exp, 2, -2.5)
    assert info.value.parameter == "tau"
    with pytest.raises(DomainError) as info:
        extend_multiplicative(lambda t: -1.0, 2, 0.0)
    assert info.value.parameter == "f"


def test_extension_to_the_real_line():
    f = lambda t: math.exp(0.5 * t)  # noqa: E731
    F = lambda tau: extend_to_real_line(f, tau)  # noqa: E731
    assert F(-2.5) == pytest.approx(math.exp(-1.25), rel=1e-12)
    assert F(0.75) == pytest.approx(f(0.75), rel=1e-12)
    assert abs(multiplicative_defect(F, -1.5, 0.7)) <= 1e-12


def test_multiplicative_defect_of_mittag_leffler():
    assert multiplicative_defect(_solution(0.5, -1.0), 1.0, 1.0) == pytest.approx(
        defect(MLParams(alpha=0.5, lam=-1.0), 1.0, 1.0), abs=1e-15
    )


def test_fit_of_an_exponential():
    fit = exponential_fit(lambda t: math.exp(-3.0 * t), 5.0, 101)
    assert fit.omega == pytest.approx(-3.0, abs=1e-14)
    assert fit.residual <= 1e-12


def test_fit_of_a_constant():
    fit = exponential_fit(lambda t: 1.0, 5.0, 11)
    assert fit.omega == 0.0
    assert fit.residual == 0.0


def test_fit_measures_non_exponential_behaviour():
    assert exponential_fit(_solution(0.5, -1.0), 5.0, 101).residual >= 0.01


def test_fit_needs_positive_value_at_one():
    with pytest.raises(DomainError) as info:
        exponential_fit(lambda t: 1.0 - t, 5.0, 11)
    assert info.value.parameter == "f"


def test_trace_without_rate_is_zero():
    assert proof_trace_lambda(MLParams(alpha=0.5, lam=1.0), 0.0, 0.7) == 0.0


def test_trace_matches_closed_form():
    denominator = 1.0 / math.sqrt(math.pi) + float(erfcx(-1.0))
    expected = 2.0 * math.exp(2.0) / denominator
    assert proof_trace_lambda(MLParams(alpha=0.5, lam=1.0), 2.0, 1.0) == pytest.approx(expected, rel=1e-10)


def test_trace_shrinks_towards_the_origin():
    p = MLParams(alpha=0.5, lam=0.0)
    values = [proof_trace_lambda(p, 1.0, t) for t in (1.0, 0.1, 0.01)]
    assert values[0] > values[1] > values[2] > 0.0


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_trace_slope(alpha):
    times = [10.0 ** -k for k in range(7)]
    slope = proof_trace_slope(MLParams(alpha=alpha, lam=0.0), 0.2, times)
    assert slope == pytest.approx(1.0 - alpha, abs=0.05)


def test_trace_rejects_degenerate_division(monkeypatch):
    from mlsemigroup.services import semigroup

    monkeypatch.setattr(semigroup, "ml_value", lambda result: 0.0)
    with pytest.raises(DegenerateDivisionError):
        proof_trace_lambda(MLParams(alpha=0.5, lam=1.0), 1.0, 1.0)


def test_trace_needs_positive_time():
    with pytest.raises(DomainError):
        proof_trace_lambda(MLParams(alpha=0.5, lam=1.0), 1.0, 0.0)


def test_trace_overflow_names_omega():
    with pytest.raises(EvaluationOverflowError) as info:
        proof_trace_lambda(MLParams(alpha=0.5, lam=0.0), 1000.0, 1.0)
    assert info.value.parameter == "omega"


def test_trace_survives_a_large_rate_near_the_origin():
    value = proof_trace_lambda(MLParams(alpha=0.5, lam=0.0), 1000.0, 1e-3)
    assert math.isfinite(value) and value > 0.0


def test_fit_overflow_names_the_horizon():
    with pytest.raises(EvaluationOverflowError) as info:
        exponential_fit(lambda t: math.exp(10.0 * t), 100.0, 11)
    assert info.value.parameter == "T"


def test_sweep_returns_the_grid_behind_the_verdict():
    p = MLParams(alpha=0.7, lam=1.0)
    spec = GridSpec(t_min=0.25, t_max=2.0, n=4)
    verdict, grid = classify_sweep(p, spec)
    assert verdict == Verdict.FAILS == classify_semigroup(p, spec)
    assert grid.defect.shape == (4, 4)
    assert grid.sup_abs >= 1e-3
    assert list(grid.t_values) == list(spec.values())
