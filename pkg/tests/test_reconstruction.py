"""
初始状态重构、迹估计与反例测试
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.core.exceptions import InvalidArgumentException, ScenarioValidationException
from app.models.geometry import BoundaryRegion
from app.models.scenario import InitialState, ScenarioConfig
from app.models.sensor import InternalPointwise
from app.services.reconstruction import (
    counterexample_run,
    initial_coefficients,
    reconstruct,
    reconstruction_error,
    run_reconstruction,
    trace_estimate,
)
from app.services.sensors import coefficient_matrix, simulate_outputs, uniform_times
from app.services.spectral import ModeIndex


def pointwise(name, x, y):
    return InternalPointwise.model_validate({"name": name, "location": [x, y]})


def unit_vector(basis, i, j):
    x0 = np.zeros(basis.size)
    x0[basis.position(ModeIndex.rectangle(i, j))] = 1.0
    return x0


@pytest.fixture
def generic_pair():
    return [pointwise("s1", "23/100", "57/100"), pointwise("s2", "41/100", "13/100")]


def test_trace_of_single_mode(square_basis, south_edge, rule):
    basis = square_basis(2)
    samples = trace_estimate(unit_vector(basis, 2, 1), basis, south_edge, rule)
    np.testing.assert_allclose(samples.values, 2 * np.cos(2 * np.pi * samples.arc_length), atol=1e-12)
    assert np.all(trace_estimate(np.zeros(basis.size), basis, south_edge, rule).values == 0)


def test_trace_on_uniform_points(square_basis, south_edge):
    basis = square_basis(1)
    samples = trace_estimate(unit_vector(basis, 1, 1), basis, south_edge, count=4)
    np.testing.assert_allclose(samples.arc_length, [0.0, 0.25, 0.5, 0.75])
    np.testing.assert_allclose(samples.values, 2 * np.cos(np.pi * samples.arc_length), atol=1e-12)


def test_error_of_unit_mode_difference(square_basis, south_edge, rule):
    basis = square_basis(2)
    gamma_error, boundary_error = reconstruction_error(unit_vector(basis, 1, 1), np.zeros(basis.size), basis, south_edge, rule)
    assert gamma_error == pytest.approx(math.sqrt(2), abs=1e-10)
    assert boundary_error == pytest.approx(2 * math.sqrt(2), abs=1e-10)
    assert reconstruction_error(np.ones(basis.size), np.ones(basis.size), basis, south_edge, rule) == (0.0, 0.0)


def test_noiseless_round_trip(square_basis, south_edge, rule, generic_pair):
    basis = square_basis(2)
    x0 = np.linspace(1.0, -1.0, basis.size)
    times = uniform_times(0.0, 0.2, 80)
    samples = simulate_outputs(generic_pair, basis, x0, times, rule=rule)
    estimate = reconstruct(samples, generic_pair, basis, rule=rule)
    assert estimate.identifiable.all()
    assert estimate.sigma_min > 1e-8
    np.testing.assert_allclose(estimate.coefficients, x0, atol=1e-6)
    gamma_error, boundary_error = reconstruction_error(x0, estimate, basis, south_edge, rule)
    assert gamma_error < 1e-6
    assert gamma_error <= boundary_error + 1e-15


def test_blind_sensor_marks_mode_unidentifiable(square_basis, south_edge, rule):
    basis = square_basis(1)
    sensor = pointwise("center", "1/2", "1/2")
    x0 = unit_vector(basis, 1, 1)
    samples = simulate_outputs([sensor], basis, x0, uniform_times(0.0, 0.1, 10))
    estimate = reconstruct(samples, [sensor], basis)
    position = basis.position(ModeIndex.rectangle(1, 1))
    assert not estimate.identifiable[position]
    assert estimate.coefficients[position] == 0.0
    assert estimate.sigma_min < 1e-12
    assert reconstruction_error(x0, estimate, basis, south_edge, rule) == pytest.approx((0.0, 0.0), abs=1e-12)


def test_single_sensor_cannot_split_degenerate_groups(square_basis, south_edge, rule):
    basis = square_basis(2)
    sensor = pointwise("s1", "23/100", "57/100")
    x0 = unit_vector(basis, 1, 2)
    samples = simulate_outputs([sensor], basis, x0, uniform_times(0.0, 0.2, 40), rule=rule)
    estimate = reconstruct(samples, [sensor], basis, rule=rule)
    labels = {mode.index.label: flag for mode, flag in zip(basis.modes, estimate.identifiable)}
    for label in ("(1,0)", "(0,1)", "(2,0)", "(0,2)", "(2,1)", "(1,2)"):
        assert not labels[label]
    for i, j in ((0, 0), (1, 1), (2, 2)):
        position = basis.position(ModeIndex.rectangle(i, j))
        assert estimate.identifiable[position]
        assert estimate.coefficients[position] == pytest.approx(0.0, abs=1e-6)
    # 组内只能确定输出系数方向上的组合
    row = coefficient_matrix([sensor], basis, rule)[0]
    pair = [basis.position(ModeIndex.rectangle(2, 1)), basis.position(ModeIndex.rectangle(1, 2))]
    assert row[pair] @ estimate.coefficients[pair] == pytest.approx(row[pair[1]], abs=1e-6)
    assert estimate.scaled_condition is not None
    assert reconstruction_error(x0, estimate, basis, south_edge, rule)[0] < 1e-6


def test_dense_grid_recovers_every_mode_in_default_window(scenario_factory):
    # 8×8 中点网格上余弦采样两两正交，设计矩阵各列正交
    centers = [f"{2 * k - 1}/16" for k in range(1, 9)]
    sensors = [
        {"kind": "internal_pointwise", "name": f"g{a}{b}", "location": [x, y]}
        for a, x in enumerate(centers)
        for b, y in enumerate(centers)
    ]
    values = np.random.default_rng(6).uniform(-1.0, 1.0, 49)
    modes = [{"i": i, "j": j, "value": float(values[7 * i + j])} for i in range(7) for j in range(7)]
    config = ScenarioConfig.model_validate(
        scenario_factory(sensors=sensors, truncation={"rectangle_cutoff": 6}, initial_state={"modes": modes})
    )
    run = run_reconstruction(config)
    assert run.samples.times.size == 4 * 49
    assert run.samples.times[-1] == pytest.approx(0.05)
    assert run.estimate.identifiable.all()
    np.testing.assert_allclose(run.estimate.coefficients, run.x0, atol=1e-9)
    assert run.result.error_gamma < 1e-8


coefficient_vectors = st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=16, max_size=16)
edge_ends = st.tuples(
    st.fractions(min_value=0, max_value=1, max_denominator=12),
    st.fractions(min_value=0, max_value=1, max_denominator=12),
).filter(lambda pair: pair[0] != pair[1]).map(sorted)


@settings(max_examples=100)
@given(
    truth=coefficient_vectors,
    guess=coefficient_vectors,
    edge=st.sampled_from(["south", "east", "north", "west"]),
    ends=edge_ends,
)
def test_gamma_error_bounded_by_boundary_error(square_basis, rule, truth, guess, edge, ends):
    basis = square_basis(3)
    region = BoundaryRegion.single(edge, ends[0], ends[1])
    gamma_error, boundary_error = reconstruction_error(np.array(truth), np.array(guess), basis, region, rule)
    assert gamma_error <= boundary_error + 1e-14


def test_ridge_shrinks_estimate(square_basis, rule, generic_pair):
    basis = square_basis(2)
    x0 = np.ones(basis.size)
    samples = simulate_outputs(generic_pair, basis, x0, uniform_times(0.0, 0.2, 40), noise=(1e-3, 11), rule=rule)
    norms = [
        np.linalg.norm(reconstruct(samples, generic_pair, basis, ridge=ridge, rule=rule).coefficients)
        for ridge in (0.0, 1e-6, 1e-3, 1.0, 100.0)
    ]
    assert all(later <= earlier + 1e-9 for earlier, later in zip(norms, norms[1:]))


def test_error_grows_with_noise(square_basis, south_edge, rule, generic_pair):
    basis = square_basis(2)
    x0 = np.ones(basis.size)
    times = uniform_times(0.0, 0.2, 40)
    medians = []
    for sigma in (0.0, 1e-4, 1e-2):
        errors = []
        for seed in range(20):
            samples = simulate_outputs(generic_pair, basis, x0, times, noise=(sigma, seed), rule=rule)
            estimate = reconstruct(samples, generic_pair, basis, rule=rule)
            errors.append(reconstruction_error(x0, estimate, basis, south_edge, rule)[0])
        medians.append(float(np.median(errors)))
    assert medians[0] <= medians[1] <= medians[2]


def test_reconstruct_rejects_bad_input(square_basis, generic_pair):
    basis = square_basis(1)
    samples = simulate_outputs(generic_pair, basis, np.ones(basis.size), uniform_times(0.0, 0.1, 5))
    with pytest.raises(InvalidArgumentException):
        reconstruct(samples, generic_pair[:1], basis)
    with pytest.raises(InvalidArgumentException):
        reconstruct(samples, generic_pair, basis, ridge=-1.0)


def test_initial_state_preset(square_basis):
    basis = square_basis(2)
    state = InitialState(preset="mode 2 1")
    np.testing.assert_array_equal(initial_coefficients(state, basis), unit_vector(basis, 2, 1))
    with pytest.raises(InvalidArgumentException):
        initial_coefficients(InitialState(preset="mode 4 0"), basis)


def test_run_reconstruction_requires_initial_state(scenario_factory):
    config = ScenarioConfig.model_validate(scenario_factory())
    with pytest.raises(ScenarioValidationException) as info:
        run_reconstruction(config)
    assert info.value.field == "initial_state"


def test_run_reconstruction_report(scenario_factory):
    config = ScenarioConfig.model_validate(
        scenario_factory(initial_state={"preset": "mode 1 1"}, time_window={"end": 0.2, "samples": 60})
    )
    run = run_reconstruction(config)
    result = run.result
    assert len(result.coefficients) == 9
    assert result.error_gamma < 1e-6
    assert len(result.trace_profile.arc_length) == 32
    assert result.sample_count == 120
    assert result.recommended_samples == 5
    assert set(run.outputs.values) == {"s1", "s2"}


def test_counterexample():
    run = counterexample_run()
    summary = run.summary
    assert summary.omega_strategic is False
    assert summary.gamma_strategic is True
    assert summary.degenerate_group_rank == 1
    assert summary.degenerate_group_multiplicity == 2
    assert summary.reconstruction_error_gamma < 1e-6
    verdict = run.strategic.verdict_omega
    assert verdict.degenerate_witness_group is not None
    assert run.strategic.verdict_gamma.basis_size == 6
