import math

import pytest

from src.types.sweep import CSV_HEADER, create_sweep_spec
from src.services.sweep import SweepService, evaluate_point, rows_to_csv, run_sweep
from src.utils.error_handler import InvalidParameterError
from helpers import assert_angle_close


HALF_PI = math.pi / 2


def alpha_sweep(steps=9):
    return create_sweep_spec("su3", "alpha", -3.0, 3.0, steps,
                             {"s1": HALF_PI, "s2": HALF_PI, "beta": 0.0})


def test_sweep_spec_validation():
    fixed = {"s1": 0.5, "s2": 0.6, "beta": 0.4}
    with pytest.raises(InvalidParameterError):
        create_sweep_spec("su3", "beta1", 0.0, 1.0, 5, fixed)
    with pytest.raises(InvalidParameterError):
        create_sweep_spec("su5", "alpha", 0.0, 1.0, 5, fixed)
    with pytest.raises(InvalidParameterError):
        create_sweep_spec("su3", "alpha", 0.0, 1.0, 1, fixed)
    with pytest.raises(InvalidParameterError):
        create_sweep_spec("su3", "alpha", 0.5, 0.5, 5, fixed)
    with pytest.raises(InvalidParameterError) as exc:
        create_sweep_spec("su3", "alpha", 0.0, 1.0, 5, {"s1": 0.5})
    assert exc.value.details["missing"] == ["s2", "beta"]


def test_sweep_values_include_both_ends():
    spec = create_sweep_spec("su3", "s1", 0.0, HALF_PI, 2, {"s2": 0.5, "alpha": 0.1, "beta": 0.4})
    assert spec.values() == [0.0, HALF_PI]
    assert spec.point(0.0) == {"s1": 0.0, "s2": 0.5, "alpha": 0.1, "beta": 0.4}


def test_antipodal_alpha_sweep():
    rows = run_sweep(alpha_sweep(), max_workers=2)
    assert len(rows) == 9
    for row in rows:
        assert_angle_close(row.phi_closed, math.pi - row.param, 1e-12)
        assert_angle_close(row.phi_operator, math.pi - row.param, 1e-9)
        assert math.isnan(row.phi_bargmann)
        assert "bargmann" in row.errors
    assert SweepService.degenerate_count(rows) == 9


def test_beta_sweep_crosses_zero_at_right_angle():
    spec = create_sweep_spec("su3", "beta", 0.0, math.pi, 5, {"s1": 0.6, "s2": 0.8, "alpha": 1.1})
    rows = run_sweep(spec)
    middle = rows[2]
    assert middle.param == pytest.approx(HALF_PI)
    for phase in (middle.phi_closed, middle.phi_operator, middle.phi_bargmann):
        assert phase == pytest.approx(0.0, abs=1e-9)


def test_su4_sweep_agrees_across_methods():
    spec = create_sweep_spec("su4", "beta3", 0.1, 3.0, 6,
                             {"s1": 0.7, "s2": 0.9, "alpha": 1.2, "beta1": 0.4, "beta2": 0.8})
    for row in run_sweep(spec):
        assert not row.degenerate
        assert_angle_close(row.phi_closed, row.phi_operator, 1e-9)
        assert_angle_close(row.phi_bargmann, row.phi_operator, 1e-9)
        assert row.residual <= 1e-8


def test_sweep_is_independent_of_worker_count():
    spec = create_sweep_spec("su3", "alpha", -3.0, 3.0, 40, {"s1": 0.7, "s2": 0.9, "beta": 0.4})
    serial = rows_to_csv(SweepService(max_workers=1, progress=False).run(spec))
    parallel = rows_to_csv(SweepService(max_workers=8, progress=False).run(spec))
    assert serial == parallel


def test_rows_to_csv():
    text = rows_to_csv(run_sweep(alpha_sweep(steps=3)))
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4
    first = lines[1].split(",")
    assert float(first[0]) == -3.0
    assert first[3] == "nan"


def test_evaluate_point_with_invalid_parameters_gives_nan_row():
    row = evaluate_point({"s1": 2.0, "s2": 0.5, "alpha": 0.1, "beta": 0.4}, 2.0)
    assert row.degenerate
    assert "params" in row.errors
    for value in (row.phi_closed, row.phi_operator, row.phi_bargmann, row.residual):
        assert math.isnan(value)
