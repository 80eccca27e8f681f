import pickle
import random
from itertools import islice

import pytest
from sympy import Rational

from curvetop import MultiPoly, ShearMap, plane_shears, space_shears
from curvetop.errors import BothZero, DivisionByZero, DivisionNotExact, UnknownVariable, ZeroPolynomial


def test_ring_operations(poly):
    p, q = poly('x^2 + y'), poly('x - 1')
    assert p + q == poly('x^2 + x + y - 1')
    assert p * q == poly('x^3 - x^2 + x*y - y')
    assert -q == poly('1 - x')
    assert 2 - q == poly('3 - x')
    assert q ** 2 == poly('x^2 - 2*x + 1')
    with pytest.raises(ValueError):
        q ** -1


def test_views(poly):
    p = poly('3*x^2*y - y^3 + 2*z')
    assert p.variables == ('x', 'y', 'z')
    assert p.degree('y') == 3
    assert p.degree('X') == 2
    assert p.total_degree() == 3
    assert MultiPoly(0).degree('x') == -1
    assert p.coefficients('y') == [poly('2*z'), poly('3*x^2'), MultiPoly(0), MultiPoly(-1)]
    assert p.leading_coefficient('y') == -1
    assert poly('7/2').constant_value() == Rational(7, 2)
    with pytest.raises(ValueError):
        p.constant_value()


def test_from_terms_and_terms(poly):
    p = MultiPoly.from_terms({(2, 0): 1, (0, 1): 3, (0, 0): Rational(-1, 2)}, ('x', 'y'))
    assert p == poly('x^2 + 3*y - 1/2')
    assert p.terms() == {(2, 0): 1, (0, 1): 3, (0, 0): Rational(-1, 2)}


def test_exact_division(poly):
    assert poly('x^2 - 1').exquo(poly('x - 1')) == poly('x + 1')
    assert poly('x - 1').divides(poly('x^2 - 1'))
    assert not poly('x - 2').divides(poly('x^2 - 1'))
    with pytest.raises(DivisionNotExact):
        poly('x^2 + 1').exquo(poly('x - 1'))
    with pytest.raises(DivisionByZero):
        poly('x').exquo(MultiPoly(0))


def test_univariate_division(poly):
    assert poly('x^3 + 2').rem(poly('x^2 + 1')) == poly('2 - x')
    assert poly('x^3 + 2').quo(poly('x^2 + 1')) == poly('x')


def test_pseudo_quotient(poly):
    P, Q = poly('x*y^2 + 1'), poly('2*y + x')
    quotient = P.pseudo_quotient(Q, 'y')
    assert quotient == poly('2*x*y - x^2')
    # lc(Q)^2 P - quotient Q has degree < 1 in y
    assert (P * 4 - quotient * Q).degree('y') < 1


def test_gcd_and_squarefree(poly):
    assert poly('x^2 - y^2').gcd(poly('x^2 + 2*x*y + y^2')) == poly('x + y')
    with pytest.raises(BothZero):
        MultiPoly(0).gcd(MultiPoly(0))
    assert poly('(x - 1)^2*(y + 1)').squarefree_part() == poly('x*y + x - y - 1')
    # Only the x-derivative: the repeated factor free of x stays
    assert poly('(y - 1)^2*x').squarefree_part('x') == poly('x')
    assert poly('(y - 1)^2*x').squarefree_part() == poly('x*y - x')
    assert poly('x^2 - y').is_squarefree()
    assert not poly('(x + y)^2').is_squarefree()
    with pytest.raises(ZeroPolynomial):
        MultiPoly(0).squarefree_part()


def test_normalized(poly):
    assert poly('4 - 6*x').normalized() == poly('3*x - 2')
    assert poly('1/2*x + 1/3').normalized() == poly('3*x + 2')


def test_derivative_and_specialize(poly):
    with pytest.raises(UnknownVariable):
        poly('x^2').derivative('y')
    assert MultiPoly(poly('x^2').poly, ('x', 'y')).derivative('y').is_zero
    for v in 'xyz':
        constant = poly('5').derivative(v)
        assert constant.is_zero
        assert v in constant.variables
    assert poly('z^3 - z - x').derivative('z') == poly('3*z^2 - 1')
    special = poly('x^2*y + z').specialize('y', Rational(1, 2))
    assert special == poly('1/2*x^2 + z')
    assert special.variables == ('x', 'z')
    with pytest.raises(UnknownVariable):
        poly('x').specialize('z', 1)
    assert poly('x*y + 1').evaluate({'x': 2, 'y': 3}) == 7


def test_substitute_fraction(poly):
    p = poly('y^2 - x')
    assert p.substitute_fraction('y', poly('x'), poly('2')) == poly('x^2 - 4*x')
    assert p.substitute_fraction('y', poly('x'), poly('2'), 3) == poly('2*x^2 - 8*x')
    with pytest.raises(ValueError):
        p.substitute_fraction('y', poly('x'), poly('2'), 1)


def test_dict_form(poly):
    p = poly('2*x*y - 1/3')
    assert p.to_dict() == {'variables': ['x', 'y'], 'terms': [[[1, 1], '2'], [[0, 0], '-1/3']]}
    assert MultiPoly.from_dict(p.to_dict()) == p


def test_pickle_keeps_variables(poly):
    p = MultiPoly(poly('x^2 - 1').poly, ('x', 'y'))
    copy = pickle.loads(pickle.dumps(p))
    assert copy == p
    assert copy.variables == ('x', 'y')


def test_immutable(poly):
    with pytest.raises(AttributeError):
        poly('x').poly = None


def test_text(poly):
    assert str(poly('-x^2 + 3*x*y - 1/2')) == '-x^2 + 3*x*y - 1/2'
    assert str(MultiPoly(0)) == '0'


def test_plane_shear(poly):
    shear = ShearMap.plane(2)
    f = poly('x^2 + y^2 - 1')
    assert shear.apply(f) == poly('(x + 2*y)^2 + y^2 - 1')
    assert shear.inverse().apply(shear.apply(f)) == f
    assert shear.unapply_point((1, 1)) == (3, 1)
    assert ShearMap.plane(0).is_identity
    with pytest.raises(ValueError):
        ShearMap('plane', 1, 2)
    with pytest.raises(ValueError):
        ShearMap('line', 1)


def test_space_shear(poly):
    shear = ShearMap.space(1, -1)
    assert shear.apply(poly('x*y')) == poly('(x + z)*(y - z)')
    assert shear.unapply_point((1, 2, 3)) == (4, -1, 3)
    assert shear.as_dict() == {'kind': 'space', 'lambda': '1', 'mu': '-1'}


def test_shear_sequences():
    assert list(islice(plane_shears(), 4)) == [ShearMap.plane(1), ShearMap.plane(-1),
                                               ShearMap.plane(2), ShearMap.plane(-2)]
    assert list(islice(space_shears(), 4)) == [ShearMap.space(1, 0), ShearMap.space(0, 1),
                                               ShearMap.space(1, 1), ShearMap.space(-1, 0)]
    assert list(islice(space_shears(), 8, 9)) == [ShearMap.space(2, 0)]


def test_space_shears_fill_the_box():
    pairs = [(s.lam, s.mu) for s in islice(space_shears(), 24)]
    assert len(set(pairs)) == 24
    assert set(pairs) == {(a, b) for a in range(-2, 3) for b in range(-2, 3)} - {(0, 0)}
    assert max(abs(a) + abs(b) for a, b in pairs[:8]) == 2


def test_plane_shear_on_space_polynomials(poly):
    shear = ShearMap.plane(2)
    assert shear.apply(poly('x*z - y')) == poly('(x + 2*y)*z - y')
    assert shear.apply(poly('x*z - y')).variables == ('x', 'y', 'z')
    assert shear.unapply_point((1, 1, 5)) == (3, 1, 5)


def _random_poly(rng: random.Random, variables: tuple[str, ...], degree: int) -> MultiPoly:
    exponents = [tuple(rng.randint(0, degree) for _ in variables) for _ in range(rng.randint(1, 4))]
    terms = {e: Rational(rng.randint(-6, 6), rng.randint(1, 3)) for e in exponents
             if sum(e) <= degree}
    terms[tuple(0 for _ in variables)] = rng.randint(-3, 3)
    return MultiPoly.from_terms(terms, variables)


def test_ring_axioms():
    rng = random.Random(21)
    for _ in range(100):
        p, q, r = (_random_poly(rng, ('x', 'y', 'z'), 3) for _ in range(3))
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p + q == q + p
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r
        assert p + 0 == p
        assert p * 1 == p
        assert (p - p).is_zero


def test_gcd_associates():
    rng = random.Random(22)
    for _ in range(50):
        g = _random_poly(rng, ('x', 'y'), 2)
        a, b = _random_poly(rng, ('x', 'y'), 2), _random_poly(rng, ('x', 'y'), 2)
        if g.is_zero or a.is_zero or b.is_zero:
            continue
        P, Q = g * a, g * b
        common = P.gcd(Q)
        assert common.divides(P) and common.divides(Q)
        assert g.divides(common)
        assert common == Q.gcd(P)
        assert common == (P * Rational(-3, 2)).gcd(Q * 5)
        assert common == common.normalized()


def test_squarefree_part_properties():
    rng = random.Random(23)
    for _ in range(50):
        a, b = _random_poly(rng, ('x', 'y'), 2), _random_poly(rng, ('x', 'y'), 2)
        if a.is_zero or b.is_zero or (a * b).is_constant:
            continue
        f = a * b ** 2
        part = f.squarefree_part()
        assert part == (a * b).squarefree_part()
        assert part.divides(f)
        assert part.is_squarefree()
        assert part.squarefree_part() == part
