import random

import pytest
from sympy import Poly, Rational, im, re, resultant, symbols

from curvetop import (MultiPoly, RealAlgebraicNumber, ShearMap, ShearRetryPolicy, canonical_json,
                      certify_pseudo_generic, component_stats, delta_decomposition, lift_apparent,
                      lift_regular_point, projected_curve, space_topology)
from curvetop.errors import CommonComponent, NotCertified, ZeroPolynomial
from curvetop.fibers import isolate_fiber_roots
from curvetop.plane import build_plane_topology
from curvetop.space import (certify_space_curve, classify_singularities, compute_space_topology,
                            vertex_vanishes)

IDENTITY = ShearMap.space(0, 0)
NODAL_SHADOW = ('x - z^2 + 1', 'y - z^3 + z')
NODE = ('z^2 - 1', 'y - x*z + z^3 - z')
TANGENTIAL = ('z^2 - 1', 'y - x^2*z + z^3 - z')
CROSSING_LINES = ('z', 'y^2 - x^2')
TOLERANCE = 2 ** -30


def counts(graph):
    stats = component_stats(graph)
    return len(graph.vertices), len(graph.edges), stats.components, stats.cycle_rank


def z_of(graph, index):
    return float(graph.vertices[index].approx[2])


def assert_on_curve(topology):
    inp = topology.certification.inp
    for vertex in topology.graph.vertices:
        _, y, z = vertex.coords
        assert vertex_vanishes(inp.P1, y, z)
        assert vertex_vanishes(inp.P2, y, z)


def test_projection(poly):
    inp, h = projected_curve(poly('z - x'), poly('z - y'))
    assert h.normalized() == poly('x - y')
    assert inp.m == 1
    assert inp.shear_applied.is_identity
    inp, h = projected_curve(poly('z^2 - x'), poly('z - y'))
    assert h.normalized() == poly('y^2 - x').normalized()
    assert delta_decomposition(inp).Delta(1).normalized() == h.normalized()


def test_normalizing_shear(poly):
    inp, h = projected_curve(poly('z'), poly('x^2 + y^2 - 1'))
    assert inp.shear_applied == ShearMap.space(1, 0)
    assert h.normalized() == poly('x^2 + y^2 - 1')


def test_invalid_input(poly):
    with pytest.raises(CommonComponent):
        projected_curve(poly('z^2'), poly('x*z^2'))
    with pytest.raises(CommonComponent):
        space_topology(poly('(z - x)*(z + 1)'), poly('(z - x)*y'))
    with pytest.raises(ZeroPolynomial):
        projected_curve(MultiPoly(0), poly('z'))


def test_pseudo_generic_failure(poly):
    inp, h = projected_curve(poly('z^2 - x'), poly('z^2 - y'))
    d = delta_decomposition(inp)
    assert inp.m == 2
    assert d.Delta(1).is_constant
    assert d.Delta(2).normalized() == poly('x - y')
    report = certify_pseudo_generic(inp, d)
    assert report.status == 'non_generic'
    assert report.certificate == 'pseudo_generic'
    assert (report.witness['i'], report.witness['j']) == (2, 0)


def test_nodal_shadow_certificates(poly):
    cert = certify_space_curve(*map(poly, NODAL_SHADOW), IDENTITY)
    assert cert.passed
    assert cert.h.normalized() == poly('x^3 + x^2 - y^2')
    assert cert.delta.Delta(1).normalized() == cert.h.normalized()
    assert cert.delta.Delta(2).is_constant
    assert cert.classification.Gamma(1, 1).normalized() == poly('x + 1')
    assert cert.classification.chi(1, 2).normalized() == poly('x')
    assert cert.classification.classify(1, RealAlgebraicNumber.rational(0)) == ('apparent', 2)
    assert cert.classification.classify(1, RealAlgebraicNumber.rational(-1)) == ('real', 1)


def test_classification_needs_certificates(poly):
    cert = certify_space_curve(*map(poly, NODAL_SHADOW), IDENTITY)
    with pytest.raises(NotCertified):
        classify_singularities(cert.inp, cert.plane, cert.reports[:1])


def test_regular_lift(poly):
    cert = certify_space_curve(*map(poly, NODAL_SHADOW), IDENTITY)
    y = isolate_fiber_roots(cert.h, 'y', RealAlgebraicNumber.rational(3))[1]
    z = lift_regular_point(cert.delta, cert.inp.chain, y)
    assert z.lo <= 2 <= z.hi
    assert z.hi - z.lo <= Rational(1, 2 ** 30)
    assert z.param is not None
    assert vertex_vanishes(cert.inp.P1, y, z)
    assert vertex_vanishes(cert.inp.P2, y, z)


def test_apparent_lift(poly):
    cert = certify_space_curve(*map(poly, NODAL_SHADOW), IDENTITY)
    plane = build_plane_topology(cert.h, cert.plane, cert.reports[1])
    node = next(fiber for fiber in plane.fibers
                if fiber.is_critical and fiber.kinds[fiber.critical_index] == 'real_singular')
    y = node.points[node.critical_index]
    lift = lift_apparent(cert.inp, cert.delta, 2, y)
    assert len(lift.roots) == 2
    assert lift.components == (1,)
    assert lift.ordered == (0, 1)
    assert [float(s) for s in lift.slopes] == [-1.0, 1.0]
    assert lift.branches == {('left', 0): 1, ('left', 1): 0, ('right', 0): 0, ('right', 1): 1}
    assert abs(float(lift.roots[0].refine(Rational(1, 2 ** 30)).midpoint) + 1) < TOLERANCE


def test_nodal_shadow(poly):
    topology = compute_space_topology(*map(poly, NODAL_SHADOW))
    graph = topology.graph
    assert counts(graph) == (7, 6, 1, 0)
    assert component_stats(graph).degree_histogram == {1: 2, 2: 5}
    assert graph.frame == ()
    assert graph.certificates['space_generic'] == 'passed'
    assert [v.kind for v in graph.vertices].count('apparent_lift') == 2
    assert_on_curve(topology)
    for vertex in graph.vertices:
        x, y, z = (float(a) for a in vertex.approx)
        assert abs(x - z * z + 1) < 1e-6
        assert abs(y - z ** 3 + z) < 1e-6


def test_node_variant(poly):
    topology = compute_space_topology(*map(poly, NODE))
    assert counts(topology.plane.graph) == (5, 4, 1, 0)
    graph = topology.graph
    assert counts(graph) == (6, 4, 2, 0)
    # Each strand lies in a plane z = ±1
    for a, b in graph.edges:
        assert abs(z_of(graph, a) - z_of(graph, b)) < 1e-6
    assert_on_curve(topology)


def test_tangential_contact_needs_shear(poly):
    cert = certify_space_curve(*map(poly, TANGENTIAL), IDENTITY)
    assert cert.h.normalized() == poly('x^4 - y^2')
    assert cert.classification.chi(1, 2).normalized() == poly('x')
    assert not cert.passed
    report = cert.reports[-1]
    assert report.certificate == 'space_generic'
    assert report.witness['node'] == 'x'

    topology = compute_space_topology(*map(poly, TANGENTIAL))
    assert topology.trail[2] == report
    assert topology.trail[3].status == 'degenerate_lcoef'
    graph = topology.graph
    assert graph.frame == (ShearMap.space(0, 1),)
    assert counts(graph) == (10, 8, 2, 0)
    for a, b in graph.edges:
        assert abs(z_of(graph, a) - z_of(graph, b)) < 1e-6
    assert_on_curve(topology)


def test_planar_circle(poly):
    topology = compute_space_topology(poly('z'), poly('x^2 + y^2 - 1'))
    graph = topology.graph
    assert topology.trail[0].status == 'degenerate_lcoef'
    assert graph.frame == (ShearMap.space(1, 0),)
    assert counts(graph) == (4, 4, 1, 1)
    assert all(vertex.coords[2].is_rational for vertex in graph.vertices)
    for vertex in graph.vertices:
        x, y, z = graph.approx_in_input_frame(vertex)
        assert abs(x * x + y * y - 1) < 1e-6
        assert abs(z) < 1e-6


def test_crossing_lines(poly):
    topology = compute_space_topology(*map(poly, CROSSING_LINES))
    graph = topology.graph
    assert counts(graph) == (5, 4, 1, 0)
    assert component_stats(graph).degree_histogram == {1: 4, 4: 1}
    assert [v.kind for v in graph.vertices].count('real_singular') == 1
    assert_on_curve(topology)


def test_parallel_lifting(poly):
    serial = space_topology(*map(poly, NODAL_SHADOW), ShearRetryPolicy(processes=0))
    parallel = space_topology(*map(poly, NODAL_SHADOW), ShearRetryPolicy(processes=2))
    assert canonical_json(serial) == canonical_json(parallel)


def _random_surface(rng: random.Random) -> MultiPoly:
    degree, m = rng.randint(2, 4), rng.randint(1, 2)
    monomials = [(a, b, c) for a in range(degree + 1) for b in range(degree + 1) for c in range(m)
                 if a + b + c <= degree]
    terms = {e: rng.randint(-3, 3) for e in rng.sample(monomials, min(5, len(monomials)))}
    terms[(0, 0, m)] = rng.choice([-2, -1, 1, 2])
    return MultiPoly.from_terms(terms, ('x', 'y', 'z'))


def test_projection_splits_into_delta_factors():
    rng = random.Random(11)
    for _ in range(100):
        P1, P2 = _random_surface(rng), _random_surface(rng)
        try:
            inp, h = projected_curve(P1, P2, IDENTITY)
        except CommonComponent:
            continue
        d = delta_decomposition(inp)
        product = MultiPoly(1)
        for i in range(1, inp.m + 1):
            product = product * d.Delta(i)
        assert product.normalized() == h.normalized()


def test_cusp(poly):
    topology = compute_space_topology(poly('y^2 - x^3'), poly('z - x^2'))
    graph = topology.graph
    assert graph.frame
    stats = component_stats(graph)
    assert (stats.components, stats.cycle_rank) == (1, 0)
    assert [v.kind for v in graph.vertices].count('real_singular') == 1
    assert_on_curve(topology)


SPHERE_SADDLE = ('x^2 + y^2 + z^2 - 1', 'x^2 - y^2 - z + 1')


def test_symmetric_projection_moves_its_sweep(poly):
    P1, P2 = map(poly, SPHERE_SADDLE)
    cert = certify_space_curve(P1, P2, IDENTITY)
    assert cert.reports[0].passed
    assert cert.plane_failed
    swept = certify_space_curve(P1, P2, IDENTITY, ShearMap.plane(2))
    assert swept.passed
    assert swept.inp.frame == (ShearMap.plane(2),)
    expected = poly('((x + 2*y)^2 - y^2 + 1)^2 + (x + 2*y)^2 + y^2 - 1')
    assert swept.h.normalized() == expected.squarefree_part().normalized()
    assert swept.reports[-1].sweep_shear == ShearMap.plane(2)


def test_sphere_saddle(poly):
    topology = compute_space_topology(*map(poly, SPHERE_SADDLE))
    graph = topology.graph
    assert graph.frame
    assert graph.frame[-1].kind == 'plane'
    assert any(report.certificate == 'plane_generic' and not report.passed
               for report in topology.trail)
    stats = component_stats(graph)
    assert (stats.components, stats.cycle_rank) == (1, 2)
    assert_on_curve(topology)
    for vertex in graph.vertices:
        x, y, z = graph.approx_in_input_frame(vertex)
        assert abs(x * x + y * y + z * z - 1) < 1e-6
        assert abs(x * x - y * y - z + 1) < 1e-6


def real_solutions_above(P1: MultiPoly, P2: MultiPoly, a) -> int:
    """Distinct real points of P1 = P2 = 0 in the plane x = a, by elimination and numeric roots."""
    x, y, z = symbols('x y z')
    f1, f2 = P1.poly.as_expr().subs(x, a), P2.poly.as_expr().subs(x, a)
    points = set()
    for root in Poly(resultant(f1, f2, z), y).sqf_part().real_roots():
        y0 = root.evalf(40)
        for z0 in Poly(f1.subs(y, y0), z).nroots(n=30):
            if abs(im(z0)) < 1e-12 and abs(f2.subs({y: y0, z: re(z0)})) < 1e-12:
                points.add((round(float(y0), 8), round(float(re(z0)), 8)))
    return len(points)


@pytest.mark.parametrize('pair', [NODAL_SHADOW, NODE, TANGENTIAL, CROSSING_LINES])
def test_fiber_cardinality(poly, pair):
    topology = compute_space_topology(*map(poly, pair))
    inp = topology.certification.inp
    for fiber in topology.lifted:
        if fiber.base.is_critical:
            continue
        assert fiber.base.x.is_point
        assert len(fiber.points) == real_solutions_above(inp.P1, inp.P2, fiber.base.x.lo)
