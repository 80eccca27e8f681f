import random

import pytest
from sympy import Rational, symbols

from curvetop import (MultiPoly, ShearMap, ShearRetryPolicy, approximate, component_stats,
                      gamma_decomposition, plane_topology)
from curvetop.errors import (LeadingCoefficientVanishes, NotCertifiedGeneric, ShearBudgetExhausted,
                             UnknownVariable, ZeroPolynomial)
from curvetop.fibers import fiber_vanishes
from curvetop.plane import (certify_plane_generic, compute_plane_topology, critical_fibers,
                            critical_point_count, genericity_oracle, regular_abscissas)

Y = symbols('y')
TWO_PARABOLAS = '(y^2 - x)*((y - 3)^2 - x)'


def counts(graph):
    stats = component_stats(graph)
    return len(graph.vertices), len(graph.edges), stats.components, stats.cycle_rank


def test_circle_decomposition(poly):
    g = gamma_decomposition(poly('x^2 + y^2 - 1'))
    assert g.d == 2
    assert g.Gamma(1) == poly('x^2 - 1')
    numerator, denominator = g.params(1)
    assert numerator.is_zero
    assert denominator == 2


def test_nodal_cubic_decomposition(poly):
    g = gamma_decomposition(poly('y^2 - x^3 - x^2'))
    assert g.Gamma(1) == poly('x^2 + x')


def test_decomposition_needs_constant_leading_coefficient(poly):
    with pytest.raises(LeadingCoefficientVanishes):
        gamma_decomposition(poly('x*y^2 - 1'))
    with pytest.raises(ZeroPolynomial):
        gamma_decomposition(poly('0'))


def test_certificate(poly):
    assert certify_plane_generic(poly('x^2 + y^2 - 1')).passed
    report = certify_plane_generic(poly(TWO_PARABOLAS))
    assert report.status == 'non_generic'
    assert (report.witness['k'], report.witness['i']) == (2, 0)
    with pytest.raises(NotCertifiedGeneric):
        f = poly(TWO_PARABOLAS)
        critical_fibers(f, gamma_decomposition(f))


def test_circle_critical_fibers(poly):
    f = poly('x^2 + y^2 - 1')
    fibers = critical_fibers(f, gamma_decomposition(f))
    assert [round(float(approximate(fiber.x))) for fiber in fibers] == [-1, 1]
    assert all(fiber.kinds == ('x_critical',) for fiber in fibers)
    assert all(fiber.multiple_point_k == 1 for fiber in fibers)


def test_circle(poly):
    graph = plane_topology(poly('x^2 + y^2 - 1'))
    assert counts(graph) == (4, 4, 1, 1)
    assert component_stats(graph).degree_histogram == {2: 4}
    assert graph.frame == ()
    assert graph.certificates['plane_generic'] == 'passed'
    for vertex in graph.vertices:
        x, y = graph.approx_in_input_frame(vertex)
        assert abs(x * x + y * y - 1) < 1e-6


def test_nodal_cubic(poly):
    graph = plane_topology(poly('y^2 - x^3 - x^2'))
    assert counts(graph) == (6, 6, 1, 1)
    assert component_stats(graph).degree_histogram == {1: 2, 2: 3, 4: 1}
    kinds = sorted(vertex.kind for vertex in graph.vertices)
    assert kinds.count('real_singular') == 1
    assert kinds.count('x_critical') == 1


def test_parabola(poly):
    assert counts(plane_topology(poly('y^2 - x'))) == (3, 2, 1, 0)
    assert counts(plane_topology(poly('y - x^2'))) == (1, 0, 1, 0)


def test_empty_and_constant(poly):
    assert counts(plane_topology(poly('x^2 + y^2 + 1'))) == (0, 0, 0, 0)
    assert counts(plane_topology(poly('5'))) == (0, 0, 0, 0)
    with pytest.raises(ZeroPolynomial):
        plane_topology(poly('0'))
    with pytest.raises(UnknownVariable):
        plane_topology(poly('x + z'))


def test_squarefree_replacement(poly):
    topology = compute_plane_topology(poly('(y^2 - x)^2'))
    assert 'input replaced by its squarefree part' in topology.notes
    assert counts(topology.graph) == (3, 2, 1, 0)


def test_shear_for_asymptote(poly):
    topology = compute_plane_topology(poly('x*y - 1'))
    assert topology.trail[0].status == 'degenerate_lcoef'
    assert topology.shear == ShearMap.plane(1)
    assert topology.graph.frame == (ShearMap.plane(1),)
    assert counts(topology.graph) == (2, 0, 2, 0)
    for vertex in topology.graph.vertices:
        x, y = topology.graph.approx_in_input_frame(vertex)
        assert abs(x * y - 1) < 1e-6
    with pytest.raises(ShearBudgetExhausted):
        plane_topology(poly('x*y - 1'), ShearRetryPolicy(budget=0))


def test_shear_for_shared_critical_value(poly):
    topology = compute_plane_topology(poly(TWO_PARABOLAS))
    assert topology.trail[0].status == 'non_generic'
    assert topology.trail[-1].passed
    assert not topology.shear.is_identity
    stats = component_stats(topology.graph)
    assert (stats.components, stats.cycle_rank) == (1, 0)
    assert stats.degree_histogram[4] == 1
    assert stats.degree_histogram[1] == 4


def test_genericity_oracle(poly):
    assert critical_point_count(poly('x^2 + y^2 - 1')) == (2, 2)
    assert genericity_oracle(poly('x^2 + y^2 - 1'))
    assert critical_point_count(poly(TWO_PARABOLAS)) == (3, 2)
    assert not genericity_oracle(poly(TWO_PARABOLAS))


def test_regular_abscissas(poly):
    assert regular_abscissas([]) == ([], [0])
    f = poly('x^2 + y^2 - 1')
    fibers, abscissas = regular_abscissas(critical_fibers(f, gamma_decomposition(f)))
    assert abscissas == [-2, 0, 2]
    assert len(fibers) == 2


def test_finer_approximations(poly):
    graph = plane_topology(poly('x^2 + y^2 - 2'), ShearRetryPolicy(refine_width=Rational(1, 2 ** 50)))
    for vertex in graph.vertices:
        x, y = graph.approx_in_input_frame(vertex)
        assert abs(x * x + y * y - 2) < 1e-12


STACKED_CIRCLES = '(x^2 + (y - 2)^2 - 1)*(x^2 + (y + 2)^2 - 1)'


def assert_vertices_exact(topology):
    f = topology.f
    fy = f.derivative('y')
    for fiber in topology.fibers:
        for index, point in enumerate(fiber.points):
            assert fiber_vanishes(f, point)
            assert fiber_vanishes(fy, point) == (index == fiber.critical_index)


def test_stacked_circles(poly):
    f = poly(STACKED_CIRCLES)
    report = certify_plane_generic(f)
    assert not report.passed
    assert report.witness['k'] == 2
    assert not genericity_oracle(f)
    topology = compute_plane_topology(f)
    assert topology.shear == ShearMap.plane(1)
    assert topology.trail[-1].passed
    stats = component_stats(topology.graph)
    assert (stats.components, stats.cycle_rank) == (2, 2)
    assert stats.degree_histogram == {2: len(topology.graph.vertices)}
    assert_vertices_exact(topology)


@pytest.mark.parametrize('f', ['x^2 + y^2 - 1', 'y^2 - x^3 - x^2', TWO_PARABOLAS, 'x*y - 1',
                               'y^3 - 3*x*y + x^3'])
def test_vertices_lie_on_the_curve(poly, f):
    assert_vertices_exact(compute_plane_topology(poly(f)))


def _random_curve(rng: random.Random, degree: int) -> MultiPoly:
    terms = {(a, b): rng.randint(-4, 4) for a in range(degree + 1) for b in range(degree)
             if a + b <= degree}
    terms[(0, degree)] = rng.choice([-2, -1, 1, 2])
    return MultiPoly.from_terms(terms, ('x', 'y'))


def test_certificate_matches_critical_point_count():
    rng = random.Random(13)
    curves = [_random_curve(rng, rng.randint(2, 4)) for _ in range(40)]
    for _ in range(10):
        f = _random_curve(rng, 2)
        shifted = MultiPoly(f.poly.as_expr().subs(Y, Y - 3), ('x', 'y'))
        curves.append(f * shifted)
    assert len(curves) == 50
    for f in curves:
        f = f.squarefree_part()
        if f.degree('y') < 2:
            continue
        assert certify_plane_generic(f).passed == genericity_oracle(f), str(f)
