"""
Ω秩检验、Γ核检验、分析与布置扫描测试
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from app.core.exceptions import InvalidArgumentException
from app.models.geometry import BoundaryRegion
from app.models.scenario import ScenarioConfig
from app.models.sensor import BoundaryZone, InternalPointwise, scale_sensor
from app.services.boundary import gamma_basis, restricted_gamma_basis
from app.services.observability import (
    analyze,
    assemble_group_matrix,
    corollary_check,
    effective_gamma_multiplicity,
    gamma_kernel_test,
    grid_points,
    observability_constant,
    omega_strategic_test,
    parse_grid,
    placement_sweep,
    placement_sweep_async,
)
from app.services.spectral import enumerate_modes

DEGENERATE = -5 * math.pi ** 2


def west_cosine_sensor(name="gamma0"):
    return BoundaryZone.model_validate({
        "name": name,
        "support": {"segments": [{"edge": "west", "lo": "0", "hi": "1"}]},
        "distribution": {"type": "cosine", "terms": [{"axis": 0, "frequency": 1.0}]},
    })


def pointwise(name, x, y):
    return InternalPointwise.model_validate({"name": name, "location": [x, y]})


@pytest.fixture
def counterexample_basis(unit_square):
    return enumerate_modes(unit_square, 5)


def test_degenerate_group_has_rank_one(counterexample_basis, rule):
    number = counterexample_basis.find_group(DEGENERATE)
    record = assemble_group_matrix([west_cosine_sensor()], counterexample_basis, number, rule=rule)
    np.testing.assert_allclose(record.entries, [[0.0, 1.0]], atol=1e-12)
    assert record.rank == 1
    assert not record.full_rank


def test_generic_pair_separates_degenerate_group(square_basis):
    basis = square_basis(2)
    sensors = [pointwise("s1", "23/100", "57/100"), pointwise("s2", "41/100", "13/100")]
    record = assemble_group_matrix(sensors, basis, basis.find_group(DEGENERATE))
    assert record.rank == 2


def test_counterexample_omega_fails(counterexample_basis, rule):
    result = omega_strategic_test([west_cosine_sensor()], counterexample_basis, rule=rule)
    assert not result.passed
    assert result.reason == "too_few_sensors"
    # 常数模态与余弦分布正交，λ=0 是第一个失败的组
    assert result.witness.group.eigenvalue == 0.0
    assert counterexample_basis.find_group(DEGENERATE) in result.failing_groups
    assert result.degenerate_witness.multiplicity == 2


def test_counterexample_kernel_passes(counterexample_basis, south_edge, rule):
    gamma = gamma_basis(counterexample_basis.domain, south_edge, 6, rule)
    result = gamma_kernel_test([west_cosine_sensor()], counterexample_basis, south_edge, gamma=gamma, rule=rule)
    assert result.passed
    assert result.basis_size == 6
    assert result.sigma_min > 1e-6
    assert result.nu == pytest.approx(1 / result.sigma_min)


def test_too_few_sensors_on_disc(unit_disc):
    basis = enumerate_modes(unit_disc, (2, 2))
    result = omega_strategic_test([pointwise("p", "1/3", "1/5")], basis)
    assert result.reason == "too_few_sensors"


def test_empty_sensor_set_fails_kernel(square_basis, south_edge, rule):
    result = gamma_kernel_test([], square_basis(2), south_edge, rule=rule)
    assert not result.passed
    assert result.sigma_min == 0.0
    assert result.nu is None


def test_center_pointwise_sensor_misses_odd_traces(square_basis, south_edge, rule):
    basis = square_basis(4)
    result = gamma_kernel_test([pointwise("center", "1/2", "1/2")], basis, south_edge, rule=rule)
    assert not result.passed


def test_duplicated_sensor_scales_constant(counterexample_basis, south_edge, rule):
    gamma = gamma_basis(counterexample_basis.domain, south_edge, 6, rule)
    _, single = observability_constant([west_cosine_sensor()], counterexample_basis, south_edge, gamma=gamma, rule=rule)
    _, double = observability_constant(
        [west_cosine_sensor("a"), west_cosine_sensor("b")], counterexample_basis, south_edge, gamma=gamma, rule=rule
    )
    assert double == pytest.approx(math.sqrt(2) * single, rel=1e-9)


def test_verdicts_invariant_under_scaling_and_order(counterexample_basis, south_edge, rule):
    gamma = gamma_basis(counterexample_basis.domain, south_edge, 6, rule)
    sensors = [west_cosine_sensor(), pointwise("p", "1/3", "1/7")]
    base = gamma_kernel_test(sensors, counterexample_basis, south_edge, gamma=gamma, rule=rule)
    scaled = gamma_kernel_test(
        [scale_sensor(sensors[0], 3.0), sensors[1]], counterexample_basis, south_edge, gamma=gamma, rule=rule
    )
    swapped = gamma_kernel_test(sensors[::-1], counterexample_basis, south_edge, gamma=gamma, rule=rule)
    assert base.passed == scaled.passed == swapped.passed
    assert swapped.sigma_min == pytest.approx(base.sigma_min, rel=1e-10)


def test_adding_sensors_never_lowers_sigma_min(square_basis, south_edge, rule):
    basis = square_basis(3)
    gamma = restricted_gamma_basis(basis, south_edge, rule)
    sensors = [pointwise("s1", "1/2", "1/2"), pointwise("s2", "1/7", "2/9"), west_cosine_sensor()]
    previous = 0.0
    for count in range(1, len(sensors) + 1):
        current = gamma_kernel_test(sensors[:count], basis, south_edge, gamma=gamma, rule=rule).sigma_min
        assert current >= previous - 1e-12
        previous = current


def test_effective_multiplicity(square_basis, south_edge, rule):
    basis = square_basis(2)
    degenerate = basis.find_group(DEGENERATE)
    assert effective_gamma_multiplicity(basis, degenerate, south_edge, rule) == 2
    single = basis.find_group(-2 * math.pi ** 2)
    assert effective_gamma_multiplicity(basis, single, south_edge, rule) == 1


coordinate = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=50)


@given(points=st.lists(st.tuples(coordinate, coordinate), min_size=2, max_size=3, unique=True))
def test_omega_strategic_implies_gamma_strategic(unit_square, south_edge, rule, points):
    basis = enumerate_modes(unit_square, 2)
    sensors = [pointwise(f"s{n}", str(x), str(y)) for n, (x, y) in enumerate(points)]
    omega = omega_strategic_test(sensors, basis, rule=rule)
    assume(omega.passed)
    assume(min(record.sigma_min / record.sigma_max for record in omega.records) > 1e-3)
    assert gamma_kernel_test(sensors, basis, south_edge, rule=rule).passed


def test_analyze_report(scenario_factory):
    config = ScenarioConfig.model_validate(scenario_factory())
    report = analyze(config)
    assert report.verdict_omega.passed
    assert report.verdict_gamma.passed
    assert report.verdict_gamma.basis == "restricted"
    assert len(report.groups) == 6
    assert [sensor.name for sensor in report.sensors] == ["s1", "s2"]
    assert report.simple_spectrum.aspect_ratio_squared == "1"
    assert report.simple_spectrum.in_naturals is True
    assert report.truncation.mode_count == 9


def test_single_pointwise_sensor_reports_corollary(scenario_factory):
    data = scenario_factory(sensors=[{"kind": "internal_pointwise", "name": "b", "location": ["1/3", "1/2"]}])
    data["truncation"] = {"rectangle_cutoff": 3}
    report = analyze(ScenarioConfig.model_validate(data))
    [result] = report.corollaries
    assert result.rule == "4.6"
    assert not result.passed
    assert result.witness == [3]


@pytest.mark.parametrize("text, expected", [("5x5", (5, 5)), ("3X2", (3, 2)), ("0x4", (0, 4))])
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


@pytest.mark.parametrize("text", ["5", "5x", "axb", "-1x2", "1x2x3"])
def test_parse_grid_rejects(text):
    with pytest.raises(InvalidArgumentException):
        parse_grid(text)


def test_grid_points_are_exact(unit_square, unit_disc):
    points = grid_points(unit_square, 3, 1)
    assert [p[0].ratio for p in points] == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert all(p[1].ratio == Fraction(1, 2) for p in points)
    disc = grid_points(unit_disc, 1, 4)
    assert [p[1].ratio for p in disc] == [0, Fraction(1, 2), 1, Fraction(3, 2)]
    assert all(p[1].pi_multiple for p in disc)
    assert grid_points(unit_square, 0, 3) == []


def test_placement_sweep_rows(square_basis, south_edge, rule):
    basis = square_basis(4)
    gamma = restricted_gamma_basis(basis, south_edge, rule)
    table = placement_sweep(pointwise("t", "1/3", "1/3"), [], 3, 3, basis, gamma, rule=rule)
    assert len(table.rows) == 9
    assert [(row.x, row.y) for row in table.rows[:2]] == [(0.25, 0.25), (0.25, 0.5)]
    center = table.rows[4]
    assert center.location == ["1/2", "1/2"]
    assert center.gamma_passed is False
    assert all(row.error is None for row in table.rows)


def test_sweep_rejects_boundary_template(square_basis, south_edge, rule):
    basis = square_basis(1)
    gamma = restricted_gamma_basis(basis, south_edge, rule)
    with pytest.raises(InvalidArgumentException):
        placement_sweep(west_cosine_sensor(), [], 2, 2, basis, gamma, rule=rule)


@pytest.mark.asyncio
async def test_async_sweep_matches_grid_order(square_basis, south_edge, rule):
    basis = square_basis(2)
    gamma = restricted_gamma_basis(basis, south_edge, rule)
    companion = pointwise("c", "1/7", "3/7")
    table = await placement_sweep_async(
        pointwise("t", "1/3", "1/3"), [companion], 2, 3, basis, gamma, rule=rule, max_concurrency=2
    )
    expected = [(float(p[0]), float(p[1])) for p in grid_points(basis.domain, 2, 3)]
    assert [(row.x, row.y) for row in table.rows] == expected


cosine_frequency = st.integers(min_value=0, max_value=3)
random_sensor = st.one_of(
    st.tuples(st.just("point"), coordinate, coordinate),
    st.tuples(st.just("edge"), st.sampled_from(["west", "east", "north"]), cosine_frequency),
)


def build_sensor(name, spec):
    if spec[0] == "point":
        return pointwise(name, str(spec[1]), str(spec[2]))
    _, edge, frequency = spec
    return BoundaryZone.model_validate({
        "name": name,
        "support": {"segments": [{"edge": edge, "lo": "0", "hi": "1"}]},
        "distribution": {"type": "cosine", "terms": [{"axis": 0, "frequency": float(frequency)}]},
    })


@settings(max_examples=50)
@given(specs=st.lists(random_sensor, min_size=2, max_size=5))
def test_appending_a_sensor_never_lowers_sigma_min(unit_square, south_edge, rule, specs):
    basis = enumerate_modes(unit_square, 3)
    gamma = restricted_gamma_basis(basis, south_edge, rule)
    sensors = [build_sensor(f"s{n}", spec) for n, spec in enumerate(specs)]
    previous = 0.0
    for count in range(1, len(sensors) + 1):
        current = gamma_kernel_test(sensors[:count], basis, south_edge, gamma=gamma, rule=rule).sigma_min
        assert current >= previous * (1 - 1e-10) - 1e-12
        previous = current


@pytest.fixture
def upper_half_circle():
    return BoundaryRegion.single("circle", "0", "pi")


def test_disc_pair_half_turn_apart_fails_kernel_and_corollary(unit_disc, upper_half_circle, rule):
    sensors = [pointwise("a", "1/2", "1/3*pi"), pointwise("b", "1/2", "4/3*pi")]
    basis = enumerate_modes(unit_disc)
    assert not gamma_kernel_test(sensors, basis, upper_half_circle, rule=rule).passed
    assert not corollary_check("4.9", sensors, unit_disc, basis.cutoff[0]).passed


def test_disc_pair_one_radian_apart_passes_kernel(unit_disc, upper_half_circle, rule):
    sensors = [pointwise("a", "1/2", "0"), pointwise("b", "1/2", "1")]
    basis = enumerate_modes(unit_disc)
    assert gamma_kernel_test(sensors, basis, upper_half_circle, rule=rule).passed


def test_sweep_disagreements_are_listed_deterministically(square_basis, south_edge, rule):
    basis = square_basis(4)
    gamma = restricted_gamma_basis(basis, south_edge, rule)
    template = pointwise("t", "1/3", "1/2")
    first = placement_sweep(template, [], 5, 5, basis, gamma, rule=rule)
    second = placement_sweep(template, [], 5, 5, basis, gamma, rule=rule)
    assert first.model_dump() == second.model_dump()
    assert all(row.corollary_passed is not None and row.gamma_passed is not None for row in first.rows)
    expected = [[row.x, row.y] for row in first.rows if row.corollary_passed != row.gamma_passed]
    assert [entry.location for entry in first.disagreements] == expected
    assert all(entry.corollary_passed != entry.kernel_passed for entry in first.disagreements)
