"""
边界求积、迹与试探基测试
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.core.exceptions import InvalidArgumentException
from app.models.geometry import BoundaryRegion, Edge
from app.services.boundary import (
    QuadratureRule,
    boundary_complement,
    boundary_length,
    gamma_basis,
    integrate_boundary,
    integrate_interval,
    locate,
    max_gamma_size,
    restricted_gamma_basis,
    restricted_mode_gram,
    restriction_norms,
    trace_value,
)
from app.services.boundary.trace import region_nodes
from app.services.spectral import ModeIndex


def test_interval_quadrature():
    assert integrate_interval(np.cos, 0.0, math.pi / 2) == pytest.approx(1.0, abs=1e-14)


def test_quadrature_rule_rejects_tiny_panels():
    with pytest.raises(InvalidArgumentException):
        QuadratureRule(nodes_per_panel=1, panels_per_segment=1)


def test_boundary_lengths(unit_square, unit_disc, south_edge):
    assert boundary_length(unit_square, south_edge) == pytest.approx(1.0)
    assert boundary_length(unit_square, BoundaryRegion.full(unit_square)) == pytest.approx(4.0)
    assert boundary_length(unit_disc, BoundaryRegion.full(unit_disc)) == pytest.approx(2 * math.pi)


def test_integrate_over_region(unit_square, south_edge, rule):
    assert integrate_boundary(unit_square, south_edge, lambda s: s ** 2, rule) == pytest.approx(1 / 3, abs=1e-14)


def test_arc_length_runs_counterclockwise(unit_square):
    full = BoundaryRegion.full(unit_square)
    point = locate(unit_square, full, 1.5)
    assert point.edge == Edge.EAST and point.coordinate == pytest.approx(0.5)
    point = locate(unit_square, full, 2.25)
    assert point.edge == Edge.NORTH and point.coordinate == pytest.approx(0.75)
    point = locate(unit_square, full, 3.5)
    assert point.edge == Edge.WEST and point.coordinate == pytest.approx(0.5)


def test_locate_rejects_out_of_range(unit_square, south_edge):
    with pytest.raises(InvalidArgumentException):
        locate(unit_square, south_edge, 1.0)
    with pytest.raises(InvalidArgumentException):
        locate(unit_square, south_edge, -0.1)


def test_region_nodes_are_sorted(unit_square, rule):
    region = BoundaryRegion(segments=(
        BoundaryRegion.single("west", 0, 1).segments[0],
        BoundaryRegion.single("south", 0, 1).segments[0],
    ))
    nodes = region_nodes(unit_square, region, rule)
    assert np.all(np.diff(nodes.arc_length) > 0)
    assert nodes.total_length == pytest.approx(2.0)
    assert nodes.weights.sum() == pytest.approx(2.0)


def test_trace_of_rectangle_mode(unit_square, south_edge):
    point = locate(unit_square, south_edge, 0.25)
    assert trace_value(unit_square, ModeIndex.rectangle(1, 1), point) == pytest.approx(2 * math.cos(math.pi / 4))


def test_cosine_basis_is_orthonormal(unit_square, south_edge, rule):
    basis = gamma_basis(unit_square, south_edge, 6, rule)
    np.testing.assert_allclose(basis.gram(), np.eye(6), atol=1e-12)


def test_cosine_basis_size_limited_by_resolution(unit_square, south_edge, rule):
    assert max_gamma_size(rule) == 16
    with pytest.raises(InvalidArgumentException):
        gamma_basis(unit_square, south_edge, 17, rule)
    with pytest.raises(InvalidArgumentException):
        gamma_basis(unit_square, south_edge, 0, rule)


def test_restricted_basis_spans_distinct_traces(square_basis, south_edge, rule):
    # φ_ij 在 y=0 上的迹为 N_ij cos(iπx)，i = 0, 1, 2 三个方向
    gamma = restricted_gamma_basis(square_basis(2), south_edge, rule)
    assert gamma.size == 3
    np.testing.assert_allclose(gamma.gram(), np.eye(3), atol=1e-10)


def test_boundary_complement(unit_square, south_edge):
    complement = boundary_complement(unit_square, south_edge)
    assert [segment.edge for segment in complement.segments] == [Edge.EAST, Edge.NORTH, Edge.WEST]
    assert boundary_complement(unit_square, BoundaryRegion.full(unit_square)) is None

    partial = BoundaryRegion.single("south", "1/4", "1/2")
    pieces = boundary_complement(unit_square, partial).segments
    assert [(s.edge, float(s.lo), float(s.hi)) for s in pieces[:2]] == [(Edge.SOUTH, 0.0, 0.25), (Edge.SOUTH, 0.5, 1.0)]


def test_restriction_norms(unit_square, south_edge, rule):
    gamma_norm, boundary_norm = restriction_norms(unit_square, south_edge, lambda u, v: np.ones_like(u), rule)
    assert gamma_norm == pytest.approx(1.0)
    assert boundary_norm == pytest.approx(2.0)


def test_region_outside_domain_rejected(unit_square):
    with pytest.raises(InvalidArgumentException):
        region_nodes(unit_square, BoundaryRegion.single("south", 0, 2))


def test_restricted_mode_gram_on_south_edge(square_basis, south_edge, rule):
    basis = square_basis(2)
    gram = restricted_mode_gram(basis, south_edge, rule)
    assert gram.shape == (basis.size, basis.size)
    np.testing.assert_allclose(gram, gram.T, atol=0.0)

    def entry(first, second):
        return gram[basis.position(ModeIndex.rectangle(*first)), basis.position(ModeIndex.rectangle(*second))]

    # 南边上 ψ_ij = c_i c_j cos(iπs)，只有 i 相同的模态不正交
    assert entry((0, 0), (0, 1)) == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert entry((1, 1), (1, 1)) == pytest.approx(2.0, abs=1e-12)
    assert entry((1, 0), (2, 0)) == pytest.approx(0.0, abs=1e-12)


region_ends = st.tuples(
    st.fractions(min_value=0, max_value=1, max_denominator=16),
    st.fractions(min_value=0, max_value=1, max_denominator=16),
).filter(lambda pair: pair[0] != pair[1]).map(sorted)
trig_terms = st.lists(
    st.tuples(
        st.floats(min_value=-2.0, max_value=2.0),
        st.integers(min_value=0, max_value=6),
        st.integers(min_value=0, max_value=6),
        st.floats(min_value=0.0, max_value=2 * math.pi),
    ),
    min_size=1,
    max_size=5,
)


def trig_polynomial(terms):
    def g(u, v):
        return sum(a * np.cos(p * math.pi * u + q * math.pi * v + phase) for a, p, q, phase in terms)
    return g


@settings(max_examples=100)
@given(edge=st.sampled_from(["south", "east", "north", "west"]), ends=region_ends, terms=trig_terms)
def test_gamma_norm_never_exceeds_boundary_norm_on_square(unit_square, rule, edge, ends, terms):
    region = BoundaryRegion.single(edge, ends[0], ends[1])
    gamma_norm, boundary_norm = restriction_norms(unit_square, region, trig_polynomial(terms), rule)
    assert gamma_norm <= boundary_norm


@settings(max_examples=100)
@given(ends=region_ends, terms=trig_terms)
def test_gamma_norm_never_exceeds_boundary_norm_on_disc(unit_disc, rule, ends, terms):
    lo, hi = (2 * end for end in ends)
    region = BoundaryRegion.single("circle", f"{lo}*pi", f"{hi}*pi")
    gamma_norm, boundary_norm = restriction_norms(unit_disc, region, trig_polynomial(terms), rule)
    assert gamma_norm <= boundary_norm
