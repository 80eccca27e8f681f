# -*- coding: utf-8 -*-
"""
Real algebraic numbers: isolation of the real roots of univariate
polynomials over the rationals, exact sign evaluation and comparison.
Isolation is Descartes' rule of signs over dyadic bisection; the
Möbius transformation is sympy's ``Poly.transform``.
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property, cmp_to_key

from sympy import Poly, Rational

from curvetop import intervals
from curvetop.errors import NotSquarefree, ZeroPolynomial
from curvetop.polynomial import GENS, MultiPoly, variable_index

Logger = logging.getLogger(__name__)

# Isolation gives up below this width, only reachable for non-squarefree input
MIN_WIDTH = Rational(1, 2 ** 400)


def _sign(value) -> int:
    return int(value > 0) - int(value < 0)


def sign_variations(coeffs) -> int:
    """Number of sign changes of a coefficient sequence, zeros skipped."""
    signs = [_sign(c) for c in coeffs if c]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def descartes_count(upoly: Poly, lo: Rational, hi: Rational) -> int:
    """
    Descartes bound on the number of roots of ``upoly`` in the open
    interval (lo, hi); exact when it is 0 or 1.
    """
    gen = upoly.gen
    moved = upoly.transform(Poly(hi * gen + lo, gen), Poly(gen + 1, gen))
    return sign_variations(moved.all_coeffs())


def root_bound(upoly: Poly) -> Rational:
    """A power of two strictly above the absolute value of every root."""
    coeffs = upoly.all_coeffs()
    lead = abs(coeffs[0])
    bound = 1 + max((abs(c) / lead for c in coeffs[1:]), default=0)
    power = Rational(1)
    while power <= bound:
        power *= 2
    return power


@dataclass(frozen=True)
class RealAlgebraicNumber:
    """
    A real root of the squarefree ``defining`` polynomial, univariate in
    ``variable``. Either lo == hi is the root itself, or the root is the
    only root of ``defining`` in the open interval (lo, hi) and
    ``defining`` has opposite nonzero signs at lo and hi.
    ``derivative_sign`` is the sign of defining at hi, which is also the
    sign of its derivative at the root; 0 for a point interval.
    """
    defining: MultiPoly
    lo: Rational
    hi: Rational
    variable: str = 'x'
    derivative_sign: int = 0

    @classmethod
    def rational(cls, value, variable: str = 'x') -> 'RealAlgebraicNumber':
        value = Rational(value)
        var = MultiPoly.variable(variable)
        defining = (var * int(value.q) - int(value.p)).normalized()
        return cls(defining, value, value, variable)

    @cached_property
    def upoly(self) -> Poly:
        return self.defining.univariate(self.variable)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Rational:
        return (self.lo + self.hi) / 2

    def bisect(self) -> 'RealAlgebraicNumber':
        """One bisection step; collapses to a point on an exact rational root."""
        if self.is_point:
            return self
        mid = self.midpoint
        value = self.upoly.eval(mid)
        if value == 0:
            return replace(self, lo=mid, hi=mid, derivative_sign=0)
        if _sign(value) == self.derivative_sign:
            return replace(self, hi=mid)
        return replace(self, lo=mid)

    def enclosure(self):
        return intervals.rational_interval(self.lo, self.hi)

    def to_dict(self) -> dict:
        return {'variable': self.variable, 'defining': self.defining.to_dict(),
                'interval': [str(self.lo), str(self.hi)]}

    def __str__(self):
        if self.is_point:
            return str(self.lo)
        return f'root of {self.defining} in ({self.lo}, {self.hi})'


@dataclass(frozen=True)
class IsolationResult:
    roots: tuple[RealAlgebraicNumber, ...]
    multiplicities: tuple[int, ...]

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(zip(self.roots, self.multiplicities))


def _make_root(factor: Poly, lo: Rational, hi: Rational, v: str) -> RealAlgebraicNumber:
    defining = MultiPoly.from_univariate(factor, v).normalized()
    upoly = defining.univariate(v)
    if lo == hi:
        return RealAlgebraicNumber(defining, lo, hi, v)
    return RealAlgebraicNumber(defining, lo, hi, v, _sign(upoly.eval(hi)))


def _isolate_squarefree(factor: Poly, v: str) -> list[RealAlgebraicNumber]:
    if factor.degree() <= 0:
        return []
    if factor.degree() == 1:
        a, b = factor.all_coeffs()
        root = -b / a
        return [_make_root(factor, root, root, v)]
    bound = root_bound(factor)
    found = []
    stack = [(factor, -bound, bound)]
    while stack:
        poly, lo, hi = stack.pop()
        count = descartes_count(poly, lo, hi)
        if count == 0:
            continue
        if count == 1:
            found.append(_make_root(poly, lo, hi, v))
            continue
        if hi - lo < MIN_WIDTH:
            raise NotSquarefree(f"{factor.as_expr()} has a multiple root")
        mid = (lo + hi) / 2
        if poly.eval(mid) == 0:
            found.append(_make_root(Poly(GENS[variable_index(v)] - mid, poly.gen), mid, mid, v))
            poly = poly.quo(Poly(poly.gen - mid, poly.gen))
        stack.append((poly, mid, hi))
        stack.append((poly, lo, mid))
    return found


def isolate_real_roots(p: MultiPoly) -> IsolationResult:
    """
    Isolate every real root of a univariate polynomial.
    :param p: Nonzero polynomial in at most one variable
    :return: Roots in increasing order with their multiplicities in p
    """
    if p.is_zero:
        raise ZeroPolynomial('the zero polynomial has every number as a root')
    occurring = p.occurring()
    if not occurring:
        return IsolationResult((), ())
    if len(occurring) > 1:
        raise ValueError(f'{p} is not univariate')
    v = occurring[0]
    _, factors = p.univariate(v).sqf_list()
    roots, multiplicities = [], []
    for factor, multiplicity in factors:
        for root in _isolate_squarefree(factor, v):
            roots.append(root)
            multiplicities.append(multiplicity)
    order = sorted(range(len(roots)), key=cmp_to_key(lambda i, j: compare(roots[i], roots[j])))
    Logger.debug('real_roots: Isolated(%d roots of degree %d)', len(roots), p.degree(v))
    return IsolationResult(tuple(roots[i] for i in order), tuple(multiplicities[i] for i in order))


def refine(a: RealAlgebraicNumber, width: Rational) -> RealAlgebraicNumber:
    """
    Bisect until the isolating interval is at most ``width`` wide.
    :param a: The number
    :param width: Target width, positive
    :return: The same number with a narrower interval
    """
    width = Rational(width)
    if width <= 0:
        raise ValueError('refinement width must be positive')
    while a.width > width:
        a = a.bisect()
    return a


def sign_at(q: MultiPoly, a: RealAlgebraicNumber) -> int:
    """
    Exact sign of q at a real algebraic number.
    :param q: Polynomial in at most the variable of ``a``
    :param a: The number
    :return: -1, 0 or 1
    """
    if q.is_zero:
        return 0
    if q.is_constant:
        return _sign(q.constant_value())
    uq = q.univariate(a.variable)
    if a.is_point:
        return _sign(uq.eval(a.lo))
    common = uq.gcd(a.upoly)
    if common.degree() > 0 and _sign(common.eval(a.lo)) != _sign(common.eval(a.hi)):
        return 0
    while True:
        if descartes_count(uq, a.lo, a.hi) == 0:
            return _sign(uq.eval(a.midpoint))
        a = a.bisect()
        if a.is_point:
            return _sign(uq.eval(a.lo))


def compare(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> int:
    """
    Exact comparison of two real algebraic numbers.
    :return: -1, 0 or 1 as a < b, a = b or a > b
    """
    tested = False
    while True:
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        if a.is_point and b.is_point:
            return _sign(a.lo - b.lo)
        if not tested:
            tested = True
            if _same_root(a, b):
                return 0
        a, b = a.bisect(), b.bisect()


def _same_root(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> bool:
    # The intervals overlap; gcd(defining_a, defining_b) has at most one
    # root in each isolating interval and that root is simple.
    common = a.upoly.gcd(b.upoly)
    if common.degree() <= 0:
        return False
    if a.is_point:
        return common.eval(a.lo) == 0
    if b.is_point:
        return common.eval(b.lo) == 0
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo == hi:
        return False
    return _sign(common.eval(lo)) != _sign(common.eval(hi))


def approximate(a: RealAlgebraicNumber, width: Rational = Rational(1, 2 ** 30)):
    """
    Approximation within ``width`` of the number.
    :return: A 64-bit mpmath number
    """
    return intervals.to_mpf(refine(a, Rational(width) / 2).midpoint)

