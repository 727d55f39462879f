import numpy as np
import pytest
from pydantic import ValidationError

from mlsemigroup.models import Command, EvalMethod, OutputFormat
from mlsemigroup.schemas import DefectGrid, EvalResult, GridSpec, MLParams, ResidualReport, RunConfig


def test_params_accept_the_lambda_alias():
    assert MLParams(alpha=0.5, **{"lambda": -1.0}).lam == -1.0
    assert MLParams(alpha=0.5, lam=2.0).lam == 2.0
    assert MLParams(alpha=0.5).beta == 1.0


@pytest.mark.parametrize("alpha", [0.0, 1.01, -0.3])
def test_params_reject_orders_outside_the_unit_interval(alpha):
    with pytest.raises(ValidationError):
        MLParams(alpha=alpha)


def test_eval_result_rejects_negative_estimates():
    with pytest.raises(ValidationError):
        EvalResult(value=1.0, error_estimate=-1e-16, terms_used=1, converged=True)
    assert EvalResult(value=1.0, error_estimate=0.0, terms_used=1, converged=True).method == EvalMethod.SERIES


def test_residual_report_needs_two_steps():
    with pytest.raises(ValidationError):
        ResidualReport(grid_steps=1, max_residual=0.0, refined_residual=0.0, empirical_order=1.0)


def test_grid_spec_defaults():
    values = GridSpec().values()
    assert len(values) == 8
    assert values[0] == 0.25 and values[-1] == 2.0


def test_grid_spec_needs_a_range():
    with pytest.raises(ValidationError):
        GridSpec(t_min=1.0, t_max=1.0)


def test_defect_grid_from_cells():
    grid = DefectGrid.from_cells([0.0, 1.0], [0.0, 1.0], [[0.0, 0.5], [0.5, -2.0]])
    assert grid.sup_abs == 2.0
    assert list(grid.cells())[-1] == (1.0, 1.0, -2.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"t_values": [1.0, 0.0], "s_values": [0.0], "defect": [[0.0], [0.0]], "sup_abs": 0.0},
        {"t_values": [-1.0, 0.0], "s_values": [0.0], "defect": [[0.0], [0.0]], "sup_abs": 0.0},
        {"t_values": [0.0, 1.0], "s_values": [0.0], "defect": [[0.0, 0.0]], "sup_abs": 0.0},
        {"t_values": [0.0], "s_values": [0.0], "defect": [[0.3]], "sup_abs": 0.1},
    ],
)
def test_defect_grid_invariants(kwargs):
    with pytest.raises(ValidationError):
        DefectGrid(**kwargs)


def test_defect_grid_keeps_an_array():
    grid = DefectGrid.from_cells([0.0], [0.0, 1.0], [[0.0, 0.25]])
    assert isinstance(grid.defect, np.ndarray)
    assert grid.defect.shape == (1, 2)


def test_run_config_lists_missing_parameters():
    with pytest.raises(ValidationError) as info:
        RunConfig(command="grid", parameters={"alpha": 0.5, "lam": -1.0})
    assert "tmax" in str(info.value) and "n" in str(info.value)


def test_run_config_parses_enums():
    config = RunConfig(command="caputo-check", parameters={"alpha": 0.5, "lam": -1.0, "n": 64}, output_format="json")
    assert config.command == Command.CAPUTO_CHECK
    assert config.output_format == OutputFormat.JSON
    assert config.output_path is None
