import mpmath
import pytest
from sympy import Poly, Rational, symbols

from curvetop import RealAlgebraicNumber, approximate, compare, isolate_real_roots, refine, sign_at
from curvetop.errors import ZeroPolynomial
from curvetop.real_roots import descartes_count, root_bound, sign_variations

TOLERANCE = 2 ** -30
X = symbols('x')


@pytest.fixture
def sqrt2(poly):
    return isolate_real_roots(poly('x^2 - 2')).roots[1]


def test_square_root_of_two(poly):
    result = isolate_real_roots(poly('x^2 - 2'))
    assert len(result) == 2
    assert result.multiplicities == (1, 1)
    assert abs(approximate(result.roots[0]) + mpmath.sqrt(2)) < TOLERANCE
    assert abs(approximate(result.roots[1]) - mpmath.sqrt(2)) < TOLERANCE


def test_rational_roots(poly):
    roots = isolate_real_roots(poly('(x - 1)*(x - 2)*(2*x - 1)')).roots
    assert len(roots) == 3
    for root, expected in zip(roots, (0.5, 1, 2)):
        assert abs(approximate(root) - expected) < TOLERANCE
        assert sign_at(poly('(x - 1)*(x - 2)*(2*x - 1)'), root) == 0


def test_multiplicities(poly):
    result = isolate_real_roots(poly('(x - 1)^2*(x + 1)'))
    assert [root.lo for root in result.roots] == [-1, 1]
    assert all(root.is_point for root in result.roots)
    assert result.multiplicities == (1, 2)
    assert list(result) == list(zip(result.roots, (1, 2)))


def test_degenerate_inputs(poly):
    assert len(isolate_real_roots(poly('5'))) == 0
    assert len(isolate_real_roots(poly('x^2 + 1'))) == 0
    with pytest.raises(ZeroPolynomial):
        isolate_real_roots(poly('0'))
    with pytest.raises(ValueError):
        isolate_real_roots(poly('x*y - 1'))


def test_other_variable(poly):
    roots = isolate_real_roots(poly('z^3 - z')).roots
    assert [root.variable for root in roots] == ['z', 'z', 'z']
    assert [root.lo for root in roots if root.is_point] == [0]


def test_sign_at(poly, sqrt2):
    assert sign_at(poly('x^2 - 2'), sqrt2) == 0
    assert sign_at(poly('x^4 - 4'), sqrt2) == 0
    assert sign_at(poly('x - 1'), sqrt2) == 1
    assert sign_at(poly('x^2 - 2*x'), sqrt2) == -1
    assert sign_at(poly('-3'), sqrt2) == -1
    assert sign_at(poly('0'), sqrt2) == 0


def test_compare(poly, sqrt2):
    assert compare(sqrt2, RealAlgebraicNumber.rational(Rational(3, 2))) == -1
    assert compare(sqrt2, RealAlgebraicNumber.rational(1)) == 1
    other = isolate_real_roots(poly('x^4 - 4')).roots
    assert len(other) == 2
    assert compare(sqrt2, other[1]) == 0
    assert compare(other[0], sqrt2) == -1


def test_refine(sqrt2):
    narrow = refine(sqrt2, Rational(1, 2 ** 40))
    assert narrow.width <= Rational(1, 2 ** 40)
    assert float(narrow.lo) < 2 ** 0.5 < float(narrow.hi)
    assert narrow.defining == sqrt2.defining
    with pytest.raises(ValueError):
        refine(sqrt2, 0)


def test_rational_number(poly):
    number = RealAlgebraicNumber.rational(Rational(3, 2))
    assert number.is_point
    assert number.defining == poly('2*x - 3')
    assert str(number) == '3/2'
    assert number.to_dict() == {'variable': 'x', 'defining': poly('2*x - 3').to_dict(),
                                'interval': ['3/2', '3/2']}


def test_descartes_helpers():
    assert sign_variations([1, 0, -1, 2]) == 2
    assert sign_variations([]) == 0
    upoly = Poly(X ** 2 - 2, X)
    assert descartes_count(upoly, Rational(0), Rational(2)) == 1
    assert descartes_count(upoly, Rational(2), Rational(3)) == 0
    assert root_bound(upoly) == 4
    assert root_bound(Poly(X - 100, X)) == 128


def test_sign_variations_of_exact_coefficients():
    coeffs = [Rational(3), Rational(0), Rational(-1, 2), Rational(7, 3)]
    assert sign_variations(coeffs) == 2
    assert sign_variations(Poly(X ** 3 - 2 * X + 1, X, domain='QQ').all_coeffs()) == 2
