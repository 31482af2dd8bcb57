"""
放置推论的精确算术检验
"""
import pytest

from app.core.exceptions import InvalidArgumentException
from app.models.sensor import BoundaryPointwise, BoundaryZone, Filament, InternalPointwise, InternalZone
from app.services.observability import applicable_rules, check_applicable, corollary_check


def internal_point(name, x, y):
    return InternalPointwise.model_validate({"name": name, "location": [x, y]})


def sector(name, r_lo, r_hi, t_lo, t_hi):
    return InternalZone.model_validate({"name": name, "support": {"lo": [r_lo, t_lo], "hi": [r_hi, t_hi]}})


def test_pointwise_rectangle_rule_finds_first_violation(unit_square):
    outcome = corollary_check("4.6", [internal_point("b", "1/3", "1/2")], unit_square, 3)
    assert not outcome.passed
    assert outcome.witness == [3]
    assert outcome.exact and not outcome.advisory


def test_pointwise_rectangle_rule_passes_below_denominator(unit_square):
    outcome = corollary_check("4.6", [internal_point("b", "1/7", "2/9")], unit_square, 6)
    assert outcome.passed
    assert outcome.witness is None


def test_boundary_zone_rule(unit_square):
    sensor = BoundaryZone.model_validate({
        "name": "edge",
        "support": {"segments": [{"edge": "south", "lo": "27/100", "hi": "47/100"}]},
    })
    outcome = corollary_check("4.2", [sensor], unit_square, 5)
    assert outcome.passed
    assert applicable_rules(unit_square, [sensor]) == ["4.2"]


def test_boundary_zone_rule_requires_symmetry(unit_square):
    sensor = BoundaryZone.model_validate({
        "name": "edge",
        "support": {"segments": [{"edge": "south", "lo": "0", "hi": "1/2"}]},
        "distribution": {"type": "tabulated", "positions": [0.0, 0.5], "values": [0.0, 1.0]},
    })
    with pytest.raises(InvalidArgumentException):
        corollary_check("4.2", [sensor], unit_square, 5)
    assert applicable_rules(unit_square, [sensor]) == []


def test_disc_sector_pair_half_turn_apart(unit_disc):
    sensors = [sector("a", "1/4", "1/2", "0", "1/4*pi"), sector("b", "1/4", "1/2", "pi", "5/4*pi")]
    outcome = corollary_check("4.4", sensors, unit_disc, 4)
    assert not outcome.passed
    assert outcome.witness == [1]
    assert outcome.exact


def test_coincident_angles_count_zero_as_natural(unit_disc):
    sensors = [internal_point("a", "1/4", "1/3*pi"), internal_point("b", "1/2", "1/3*pi")]
    outcome = corollary_check("4.9", sensors, unit_disc, 3)
    assert not outcome.passed
    assert outcome.witness == [1]


def test_irrational_angle_difference_always_passes(unit_disc):
    sensors = [internal_point("a", "1/4", "1/2"), internal_point("b", "1/2", "0")]
    outcome = corollary_check("4.9", sensors, unit_disc, 10)
    assert outcome.passed


def test_float_coordinates_are_advisory(unit_square):
    outcome = corollary_check("4.6", [internal_point("b", 0.25, 0.3)], unit_square, 4)
    assert not outcome.passed
    assert outcome.witness == [4]
    assert outcome.advisory


def test_boundary_pointwise_rule(unit_square):
    sensor = BoundaryPointwise.model_validate({"name": "b", "location": ["1", "2/5"]})
    outcome = corollary_check("4.8", [sensor], unit_square, 4)
    assert outcome.passed
    assert not corollary_check("4.8", [sensor], unit_square, 5).passed


def test_filament_rule_uses_midpoint(unit_square):
    sensor = Filament.model_validate({"name": "line", "points": [["0", "1/4"], ["1/2", "1/4"], ["1", "1/4"]]})
    assert applicable_rules(unit_square, [sensor]) == ["4.7"]
    assert corollary_check("4.7", [sensor], unit_square, 8).passed


@pytest.mark.parametrize("rule", ["4.1", "4.4", "4.9"])
def test_mismatched_sensor_kind_rejected(unit_square, rule):
    with pytest.raises(InvalidArgumentException):
        corollary_check(rule, [internal_point("b", "1/3", "1/2")], unit_square, 3)


def test_unknown_rule_and_bad_bound(unit_square):
    sensors = [internal_point("b", "1/3", "1/2")]
    with pytest.raises(InvalidArgumentException):
        corollary_check("5.1", sensors, unit_square, 3)
    with pytest.raises(InvalidArgumentException):
        corollary_check("4.6", sensors, unit_square, 0)


def test_applicable_rules_by_domain(unit_square, unit_disc):
    pair = [internal_point("a", "1/4", "1/3*pi"), internal_point("b", "1/2", "2/3*pi")]
    assert applicable_rules(unit_disc, pair) == ["4.9"]
    assert applicable_rules(unit_square, [internal_point("b", "1/3", "1/2")]) == ["4.6"]
    assert applicable_rules(unit_square, pair) == []
    [outcome] = check_applicable(unit_disc, pair, 2)
    assert outcome.passed
