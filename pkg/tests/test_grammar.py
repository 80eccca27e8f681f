import pytest

from curvetop import MultiPoly, parse_polynomial
from curvetop.errors import ParseError
from curvetop.grammar import tokenize


def test_precedence():
    x, y = MultiPoly.variable('x'), MultiPoly.variable('y')
    assert parse_polynomial('x + 2*y^2') == x + y ** 2 * 2
    assert parse_polynomial('-x^2') == -(x ** 2)
    assert parse_polynomial('--x') == x
    assert parse_polynomial('+x - -y') == x + y
    assert parse_polynomial('(x + 1)^2') == x ** 2 + x * 2 + 1
    assert parse_polynomial('3/4*x') == x * MultiPoly.constant('3/4')


def test_case_and_whitespace():
    assert parse_polynomial('X*Y') == parse_polynomial('x*y')
    assert parse_polynomial(' x\n+\ty ') == parse_polynomial('x+y')


def test_declared_variables():
    assert parse_polynomial('z - 1').variables == ('z',)
    assert parse_polynomial('x*y + 0*z').variables == ('x', 'y', 'z')
    assert parse_polynomial('5').variables == ()


def test_tokens_carry_positions():
    tokens = tokenize('x +\n  y')
    assert [(t.kind, t.text, t.line, t.column) for t in tokens] == [
        ('name', 'x', 1, 1), ('op', '+', 1, 3), ('name', 'y', 2, 3), ('end', '', 2, 4)]


@pytest.mark.parametrize('text, line, column', [
    ('2x', 1, 2),
    ('(x+1)(x-1)', 1, 6),
    ('x +\n  y y', 2, 5),
])
def test_implicit_multiplication(text, line, column):
    with pytest.raises(ParseError, match='implicit multiplication') as error:
        parse_polynomial(text)
    assert (error.value.line, error.value.column) == (line, column)


@pytest.mark.parametrize('text', ['w + 1', 'x $ y', '1/0', 'x^', 'x^-1', '(x + 1', 'x +', ')'])
def test_rejected(text):
    with pytest.raises(ParseError):
        parse_polynomial(text)


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        parse_polynomial('x y')
