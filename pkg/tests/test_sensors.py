"""
传感器输出系数与输出模拟测试
"""
import math

import numpy as np
import pytest

from app.core.exceptions import InvalidArgumentException
from app.models.sensor import BoundaryPointwise, BoundaryZone, Filament, InternalPointwise, InternalZone, scale_sensor
from app.services.sensors import (
    coefficient_matrix,
    filament_curve,
    output_coefficient,
    sensor_row,
    simulate_outputs,
    uniform_times,
)
from app.services.spectral import ModeIndex, enumerate_modes
from app.services.spectral.modes import build_mode


def _mode(domain, i, j):
    return build_mode(domain, ModeIndex.rectangle(i, j))


def west_cosine_sensor(name="gamma0"):
    return BoundaryZone.model_validate({
        "name": name,
        "support": {"segments": [{"edge": "west", "lo": "0", "hi": "1"}]},
        "distribution": {"type": "cosine", "terms": [{"axis": 0, "frequency": 1.0}]},
    })


def test_boundary_cosine_sensor_sees_only_first_vertical_index(unit_square, rule):
    sensor = west_cosine_sensor()
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 2, 1), rule) == pytest.approx(1.0)
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 1, 2), rule) == pytest.approx(0.0, abs=1e-14)
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 0, 0), rule) == pytest.approx(0.0, abs=1e-14)


def test_pointwise_sensor_at_nodal_line(unit_square):
    sensor = InternalPointwise.model_validate({"name": "center", "location": ["1/2", "1/2"]})
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 1, 1)) == pytest.approx(0.0, abs=1e-14)
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 2, 2)) == pytest.approx(2.0)


def test_uniform_zone_over_domain(unit_square, rule):
    sensor = InternalZone.model_validate({"name": "zone", "support": {"lo": ["0", "0"], "hi": ["1", "1"]}})
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 0, 0), rule) == pytest.approx(1.0)
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 1, 0), rule) == pytest.approx(0.0, abs=1e-14)


def test_zone_outside_domain_rejected(unit_square):
    sensor = InternalZone.model_validate({"name": "zone", "support": {"lo": ["1/2", "1/2"], "hi": ["3/2", "1"]}})
    with pytest.raises(InvalidArgumentException):
        output_coefficient(sensor, unit_square, _mode(unit_square, 0, 0))


def test_boundary_pointwise_sensor(unit_square):
    sensor = BoundaryPointwise.model_validate({"name": "corner", "location": ["1/4", "0"]})
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 1, 1)) == pytest.approx(2 * math.cos(math.pi / 4))
    interior = BoundaryPointwise.model_validate({"name": "inside", "location": ["1/4", "1/4"]})
    with pytest.raises(InvalidArgumentException):
        output_coefficient(interior, unit_square, _mode(unit_square, 1, 1))


def test_straight_filament(unit_square, rule):
    sensor = Filament.model_validate({"name": "line", "points": [["0", "1/4"], ["1/2", "1/4"], ["1", "1/4"]]})
    curve = filament_curve(unit_square, sensor, rule)
    assert curve.total_length == pytest.approx(1.0)
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 0, 0), rule) == pytest.approx(1.0)
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 1, 0), rule) == pytest.approx(0.0, abs=1e-12)
    assert output_coefficient(sensor, unit_square, _mode(unit_square, 0, 1), rule) == pytest.approx(1.0)


def test_disc_pointwise_sensor(unit_disc):
    basis = enumerate_modes(unit_disc, (1, 1))
    sensor = InternalPointwise.model_validate({"name": "origin", "location": ["0", "0"]})
    row = sensor_row(sensor, basis)
    constant = basis.position(ModeIndex("axial", 0, 1))
    assert row[constant] == pytest.approx(1 / math.sqrt(math.pi))
    assert row[basis.position(ModeIndex("cosine", 1, 1))] == pytest.approx(0.0, abs=1e-14)


def test_location_outside_domain(unit_square):
    sensor = InternalPointwise.model_validate({"name": "far", "location": ["3/2", "1/2"]})
    with pytest.raises(InvalidArgumentException):
        output_coefficient(sensor, unit_square, _mode(unit_square, 0, 0))


def test_scaling_a_sensor_scales_its_row(square_basis, rule):
    basis = square_basis(2)
    sensor = west_cosine_sensor()
    np.testing.assert_allclose(
        sensor_row(scale_sensor(sensor, 3.0), basis, rule), 3.0 * sensor_row(sensor, basis, rule), atol=1e-14
    )


def test_coefficient_matrix_requires_sensors(square_basis):
    with pytest.raises(InvalidArgumentException):
        coefficient_matrix([], square_basis(1))


def test_simulated_outputs_follow_decay(square_basis):
    basis = square_basis(1)
    sensor = InternalPointwise.model_validate({"name": "p", "location": ["1/3", "1/5"]})
    x0 = np.zeros(basis.size)
    x0[basis.position(ModeIndex.rectangle(1, 1))] = 1.0
    times = uniform_times(0.0, 0.1, 5)
    samples = simulate_outputs([sensor], basis, x0, times)
    value = 2 * math.cos(math.pi / 3) * math.cos(math.pi / 5)
    np.testing.assert_allclose(samples.values[0], value * np.exp(-2 * math.pi ** 2 * times))


def test_noise_is_reproducible(square_basis):
    basis = square_basis(1)
    sensor = InternalPointwise.model_validate({"name": "p", "location": ["1/3", "1/5"]})
    x0 = np.ones(basis.size)
    times = uniform_times(0.0, 0.1, 8)
    first = simulate_outputs([sensor], basis, x0, times, noise=(1e-2, 7))
    second = simulate_outputs([sensor], basis, x0, times, noise=(1e-2, 7))
    np.testing.assert_array_equal(first.values, second.values)
    assert first.noise_seed == 7
    with pytest.raises(InvalidArgumentException):
        simulate_outputs([sensor], basis, x0, times, noise=(1e-2, None))


@pytest.mark.parametrize("times", [[], [0.2, 0.1], [-0.1, 0.1]])
def test_invalid_sample_times(square_basis, times):
    basis = square_basis(1)
    sensor = InternalPointwise.model_validate({"name": "p", "location": ["1/3", "1/5"]})
    with pytest.raises(InvalidArgumentException):
        simulate_outputs([sensor], basis, np.ones(basis.size), times)
