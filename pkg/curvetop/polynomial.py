# -*- coding: utf-8 -*-
"""
Exact multivariate polynomials over the rationals in the variables
x < y < z. Every polynomial is a sympy ``Poly`` over ``QQ`` in the
three fixed generators plus the ordered set of variables it was
declared with, so ring operations never need to re-map generators.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Union

from sympy import Poly, QQ, Rational, symbols
from sympy.polys.polyerrors import ExactQuotientFailed

from curvetop.errors import (BothZero, DivisionByZero, DivisionNotExact,
                             UnknownVariable, ZeroPolynomial)

VARIABLES: tuple[str, ...] = ('x', 'y', 'z')
GENS = symbols('x y z')
X, Y, Z = GENS

Number = Union[int, Rational]


def variable_index(v: str) -> int:
    """
    Position of a variable in the global order.
    :param v: Variable name, case-insensitive
    :return: 0 for x, 1 for y, 2 for z
    """
    try:
        return VARIABLES.index(str(v).lower())
    except ValueError:
        raise UnknownVariable(f'unknown variable {v!r}') from None


def _ordered(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted({str(n).lower() for n in names}, key=variable_index))


def _poly(data) -> Poly:
    if isinstance(data, dict):
        data = {m: c for m, c in data.items() if c}
        if not data:
            return Poly(0, *GENS, domain=QQ)
        return Poly.from_dict(data, *GENS, domain=QQ)
    return Poly(data, *GENS, domain=QQ)


class MultiPoly:
    """
    Immutable polynomial with rational coefficients.

    Equality and hashing look at the polynomial only, the declared
    variable set is bookkeeping for exports and for the UnknownVariable
    checks of derivative and specialize.
    """

    __slots__ = ('poly', 'variables')

    def __init__(self, data=0, variables: Iterable[str] | None = None):
        poly = data if isinstance(data, Poly) and data.gens == GENS and data.domain == QQ \
            else _poly(data.as_expr() if isinstance(data, Poly) else data)
        occurring = [VARIABLES[i] for i in range(3) if poly.degree(GENS[i]) > 0]
        declared = _ordered(list(variables or ()) + occurring)
        object.__setattr__(self, 'poly', poly)
        object.__setattr__(self, 'variables', declared)

    def __setattr__(self, key, value):
        raise AttributeError('MultiPoly is immutable')

    def __reduce__(self):
        return MultiPoly, (self.poly, self.variables)

    @classmethod
    def constant(cls, value: Number) -> 'MultiPoly':
        return cls(Rational(value))

    @classmethod
    def variable(cls, name: str) -> 'MultiPoly':
        return cls(GENS[variable_index(name)])

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, ...], Number],
                   variables: Iterable[str]) -> 'MultiPoly':
        """
        Build a polynomial from exponent vectors over ``variables``.
        :param terms: Map from exponent vector to coefficient
        :param variables: The variables the exponent vectors refer to
        :return: The polynomial
        """
        variables = _ordered(variables)
        data = {}
        for exponents, coeff in terms.items():
            monom = [0, 0, 0]
            for name, e in zip(variables, exponents):
                monom[variable_index(name)] = int(e)
            data[tuple(monom)] = data.get(tuple(monom), 0) + Rational(coeff)
        return cls(data, variables)

    # Views

    def terms(self) -> dict[tuple[int, ...], Rational]:
        """Exponent vectors over ``self.variables`` mapped to nonzero coefficients."""
        idx = [variable_index(v) for v in self.variables]
        return {tuple(monom[i] for i in idx): coeff for monom, coeff in self.poly.terms()
                if coeff != 0}

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    @property
    def is_constant(self) -> bool:
        return self.poly.is_ground

    def constant_value(self) -> Rational:
        if not self.is_constant:
            raise ValueError(f'{self} is not constant')
        return Rational(self.poly.as_expr())

    def degree(self, v: str) -> int:
        """Degree in ``v``; the zero polynomial has degree -1."""
        if self.is_zero:
            return -1
        return int(self.poly.degree(GENS[variable_index(v)]))

    def total_degree(self) -> int:
        return -1 if self.is_zero else int(self.poly.total_degree())

    def occurring(self) -> tuple[str, ...]:
        return tuple(VARIABLES[i] for i in range(3) if self.poly.degree(GENS[i]) > 0)

    def coefficients(self, v: str) -> list['MultiPoly']:
        """
        Coefficients of the polynomial seen as a polynomial in ``v``.
        :param v: The distinguished variable
        :return: List indexed by the power of ``v``, lowest first
        """
        i = variable_index(v)
        rest = [n for n in self.variables if n != VARIABLES[i]]
        buckets: dict[int, dict] = {}
        for monom, coeff in self.poly.terms():
            if not coeff:
                continue
            key = list(monom)
            e = key[i]
            key[i] = 0
            bucket = buckets.setdefault(e, {})
            bucket[tuple(key)] = coeff
        top = max(buckets, default=-1)
        return [MultiPoly(buckets.get(e, {}), rest) for e in range(top + 1)]

    def leading_coefficient(self, v: str) -> 'MultiPoly':
        coeffs = self.coefficients(v)
        return coeffs[-1] if coeffs else MultiPoly(0)

    def univariate(self, v: str) -> Poly:
        """
        The polynomial as a one-generator sympy Poly in ``v``.
        :param v: The only variable allowed to occur
        :return: Poly over QQ in the generator of ``v``
        """
        i = variable_index(v)
        if any(n != VARIABLES[i] for n in self.occurring()):
            raise ValueError(f'{self} is not univariate in {v}')
        data = {(monom[i],): coeff for monom, coeff in self.poly.terms() if coeff}
        if not data:
            return Poly(0, GENS[i], domain=QQ)
        return Poly.from_dict(data, GENS[i], domain=QQ)

    @classmethod
    def from_univariate(cls, poly: Poly, v: str) -> 'MultiPoly':
        i = variable_index(v)
        data = {}
        for (e,), coeff in poly.terms():
            monom = [0, 0, 0]
            monom[i] = e
            data[tuple(monom)] = coeff
        return cls(data, (VARIABLES[i],))

    # Ring operations

    @staticmethod
    def _coerce(other) -> 'MultiPoly':
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Rational)):
            return MultiPoly(Rational(other))
        return NotImplemented

    def _join(self, other: 'MultiPoly') -> tuple[str, ...]:
        return _ordered(self.variables + other.variables)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.poly + other.poly, self._join(other))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.poly - other.poly, self._join(other))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.poly * other.poly, self._join(other))

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly(-self.poly, self.variables)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError('negative exponent')
        return MultiPoly(self.poly ** int(exponent), self.variables)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def scale(self, factor: Number) -> 'MultiPoly':
        return MultiPoly(self.poly.mul_ground(Rational(factor)), self.variables)

    def exquo(self, divisor: 'MultiPoly') -> 'MultiPoly':
        """
        Exact division.
        :param divisor: A polynomial dividing ``self``
        :return: The quotient
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise DivisionByZero('division by the zero polynomial')
        try:
            quotient = self.poly.exquo(divisor.poly)
        except ExactQuotientFailed:
            raise DivisionNotExact(f'{divisor} does not divide {self}') from None
        return MultiPoly(quotient, self._join(divisor))

    def divides(self, other: 'MultiPoly') -> bool:
        """True when ``self`` divides ``other``."""
        try:
            other.exquo(self)
        except DivisionNotExact:
            return False
        return True

    def _common_variable(self, other: 'MultiPoly') -> str:
        names = set(self.occurring()) | set(other.occurring())
        if len(names) > 1:
            raise ValueError(f'{self} and {other} are not univariate in one variable')
        return names.pop() if names else 'x'

    def quo(self, divisor: 'MultiPoly') -> 'MultiPoly':
        """Quotient of univariate long division."""
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise DivisionByZero('division by the zero polynomial')
        v = self._common_variable(divisor)
        quotient = self.univariate(v).quo(divisor.univariate(v))
        return MultiPoly(MultiPoly.from_univariate(quotient, v).poly, self._join(divisor))

    def rem(self, divisor: 'MultiPoly') -> 'MultiPoly':
        """
        Remainder of division by ``divisor``: univariate long division
        when both are univariate in one variable, sympy's recursive
        division otherwise.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise DivisionByZero('division by the zero polynomial')
        try:
            v = self._common_variable(divisor)
        except ValueError:
            return MultiPoly(self.poly.rem(divisor.poly), self._join(divisor))
        remainder = self.univariate(v).rem(divisor.univariate(v))
        return MultiPoly(MultiPoly.from_univariate(remainder, v).poly, self._join(divisor))

    def pseudo_quotient(self, divisor: 'MultiPoly', v: str) -> 'MultiPoly':
        """
        Pseudo-division quotient in ``v``: lc(divisor)^(p-q+1)·self =
        quotient·divisor + remainder with deg_v(remainder) < q.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise DivisionByZero('division by the zero polynomial')
        p, q = self.degree(v), divisor.degree(v)
        if p < q:
            return MultiPoly(0, self._join(divisor))
        var = MultiPoly.variable(v)
        lead = divisor.leading_coefficient(v)
        remainder, quotient = self, MultiPoly(0)
        for _ in range(p - q + 1):
            quotient = quotient * lead
            if remainder.degree(v) >= q:
                e = remainder.degree(v) - q
                term = remainder.leading_coefficient(v) * var ** e
                quotient = quotient + term
                remainder = remainder * lead - term * divisor
            else:
                remainder = remainder * lead
        return MultiPoly(quotient.poly, self._join(divisor))

    # Calculus and substitution

    def derivative(self, v: str) -> 'MultiPoly':
        """Formal partial derivative; a constant belongs to every ring."""
        name = VARIABLES[variable_index(v)]
        if self.is_constant:
            return MultiPoly(0, self.variables + (name,))
        if name not in self.variables:
            raise UnknownVariable(f'{v} is not a variable of {self}')
        return MultiPoly(self.poly.diff(GENS[variable_index(v)]), self.variables)

    def specialize(self, v: str, value: Number) -> 'MultiPoly':
        """
        Substitute a rational value for ``v``.
        :param v: A declared variable
        :param value: The rational value
        :return: Polynomial over the remaining variables
        """
        i = variable_index(v)
        if VARIABLES[i] not in self.variables:
            raise UnknownVariable(f'{v} is not a variable of {self}')
        value = Rational(value)
        data: dict[tuple, Rational] = {}
        for monom, coeff in self.poly.terms():
            key = list(monom)
            e = key[i]
            key[i] = 0
            data[tuple(key)] = data.get(tuple(key), 0) + coeff * value ** e
        return MultiPoly(data, [n for n in self.variables if n != VARIABLES[i]])

    def evaluate(self, point: dict[str, Number]) -> Rational:
        result = self
        for name, value in point.items():
            result = result.specialize(name, value)
        return result.constant_value()

    def substitute_fraction(self, v: str, numerator: 'MultiPoly', denominator: 'MultiPoly',
                            exponent: int | None = None) -> 'MultiPoly':
        """
        Cleared substitution den^e · self(v = num/den).
        :param v: The variable replaced
        :param numerator: Numerator of the substituted value
        :param denominator: Denominator of the substituted value
        :param exponent: e, at least deg_v(self); defaults to deg_v(self)
        :return: A polynomial free of ``v``
        """
        coeffs = self.coefficients(v)
        e = len(coeffs) - 1 if exponent is None else exponent
        if e < len(coeffs) - 1:
            raise ValueError('exponent below the degree of the substituted variable')
        result = MultiPoly(0)
        num_power = MultiPoly(1)
        for power, coeff in enumerate(coeffs):
            result = result + coeff * num_power * denominator ** (e - power)
            num_power = num_power * numerator
        names = [n for n in self.variables if n != VARIABLES[variable_index(v)]]
        return MultiPoly(result.poly, names + list(numerator.variables + denominator.variables))

    def shear(self, shear: 'ShearMap') -> 'MultiPoly':
        return shear.apply(self)

    # GCD and normal forms

    def normalized(self) -> 'MultiPoly':
        """Primitive integer content and positive lex-leading coefficient."""
        if self.is_zero:
            return self
        coeffs = self.poly.coeffs()
        denominator = math.lcm(*[int(c.q) for c in coeffs])
        numerators = [int(c.p) * (denominator // int(c.q)) for c in coeffs]
        factor = Rational(denominator, math.gcd(*numerators))
        if coeffs[0] < 0:
            factor = -factor
        return self.scale(factor)

    def gcd(self, other: 'MultiPoly') -> 'MultiPoly':
        other = self._coerce(other)
        if self.is_zero and other.is_zero:
            raise BothZero('gcd(0, 0) is undefined')
        return MultiPoly(self.poly.gcd(other.poly), self._join(other)).normalized()

    def squarefree_part(self, v: str | None = None) -> 'MultiPoly':
        """
        Squarefree part. With ``v`` this is p / gcd(p, ∂_v p); without it
        the gcd runs over every partial derivative so repeated factors
        free of any single variable are removed as well.
        """
        if self.is_zero:
            raise ZeroPolynomial('squarefree part of the zero polynomial')
        if self.is_constant:
            return MultiPoly(1, self.variables)
        names = [v] if v is not None else self.occurring()
        common = self
        for name in names:
            common = common.gcd(MultiPoly(self.poly, self.variables + (name,)).derivative(name))
        return self.exquo(common).normalized()

    def is_squarefree(self) -> bool:
        return self.squarefree_part() == self.normalized()

    # Text

    def to_dict(self) -> dict:
        """JSON form: declared variables and [exponents, "p/q"] terms, lex order."""
        return {'variables': list(self.variables),
                'terms': [[list(monom), str(coeff)] for monom, coeff in self.terms().items()]}

    @classmethod
    def from_dict(cls, data: dict) -> 'MultiPoly':
        return cls.from_terms({tuple(monom): Rational(coeff) for monom, coeff in data['terms']},
                              data['variables'])

    def __str__(self):
        if self.is_zero:
            return '0'
        parts = []
        for monom, coeff in self.poly.terms():
            factors = [name if e == 1 else f'{name}^{e}'
                       for name, e in zip(VARIABLES, monom) if e]
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = '*'.join(factors)
            else:
                body = '*'.join([str(magnitude)] + factors)
            sign = '-' if coeff < 0 else '+'
            parts.append((sign, body))
        text = ('-' if parts[0][0] == '-' else '') + parts[0][1]
        for sign, body in parts[1:]:
            text += f' {sign} {body}'
        return text

    def __repr__(self):
        return f'MultiPoly({str(self)!r}, variables={self.variables})'


@dataclass(frozen=True)
class ShearMap:
    """
    Linear change of coordinates. ``plane``: X := X + λY.
    ``space``: X := X + λZ, Y := Y + μZ.
    """
    kind: str
    lam: Rational
    mu: Rational | None = None

    def __post_init__(self):
        if self.kind not in ('plane', 'space'):
            raise ValueError(f'unknown shear kind {self.kind!r}')
        object.__setattr__(self, 'lam', Rational(self.lam))
        if self.kind == 'plane':
            if self.mu not in (None, 0):
                raise ValueError('a plane shear has no mu')
            object.__setattr__(self, 'mu', None)
        else:
            object.__setattr__(self, 'mu', Rational(self.mu or 0))

    @classmethod
    def plane(cls, lam: Number) -> 'ShearMap':
        return cls('plane', Rational(lam))

    @classmethod
    def space(cls, lam: Number, mu: Number) -> 'ShearMap':
        return cls('space', Rational(lam), Rational(mu))

    @property
    def is_identity(self) -> bool:
        return self.lam == 0 and not self.mu

    def inverse(self) -> 'ShearMap':
        return ShearMap(self.kind, -self.lam, None if self.mu is None else -self.mu)

    def apply(self, p: MultiPoly) -> MultiPoly:
        if self.is_identity:
            return p
        if self.kind == 'plane':
            mapping = {X: X + self.lam * Y}
            extra = ('x', 'y')
        else:
            mapping = {X: X + self.lam * Z, Y: Y + self.mu * Z}
            extra = ('x', 'y', 'z')
        sheared = p.poly.as_expr().subs(mapping, simultaneous=True)
        return MultiPoly(_poly(sheared), p.variables + extra)

    def unapply_point(self, point: tuple, convert=Rational) -> tuple:
        """
        Map a point of the sheared frame back to the input frame. A
        point (x', y') of the curve of f(X + λY, Y) corresponds to the
        point (x' + λy', y') of the curve of f.
        :param point: Coordinates in the sheared frame
        :param convert: Turns λ and μ into the number type of the point
        """
        lam = convert(self.lam)
        if self.kind == 'plane':
            x, y = point[0], point[1]
            return (x + lam * y, y) + tuple(point[2:])
        x, y, z = point
        return x + lam * z, y + convert(self.mu) * z, z

    def as_dict(self) -> dict:
        data = {'kind': self.kind, 'lambda': str(self.lam)}
        if self.mu is not None:
            data['mu'] = str(self.mu)
        return data

    def __str__(self):
        if self.kind == 'plane':
            return f'X := X + ({self.lam})Y'
        return f'X := X + ({self.lam})Z, Y := Y + ({self.mu})Z'


def plane_shears():
    """Deterministic retry sequence λ = 1, -1, 2, -2, 3, ..."""
    n = 1
    while True:
        yield ShearMap.plane(n)
        yield ShearMap.plane(-n)
        n += 1


def _ring_order(pair: tuple[int, int]) -> tuple:
    a, b = pair
    return (a < 0) + (b < 0), abs(a) + abs(b), -abs(a), -a


def space_shears():
    """
    Deterministic retry sequence over every (λ, μ) != (0, 0), ring by ring
    of the box max(|λ|, |μ|) = n, nonnegative pairs and small ones first:
    (1,0), (0,1), (1,1), (-1,0), (0,-1), ...
    """
    n = 1
    while True:
        ring = [(a, b) for a in range(-n, n + 1) for b in range(-n, n + 1)
                if max(abs(a), abs(b)) == n]
        for pair in sorted(ring, key=_ring_order):
            yield ShearMap.space(*pair)
        n += 1

