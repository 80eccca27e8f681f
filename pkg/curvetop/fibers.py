# -*- coding: utf-8 -*-
"""
Real roots of fiber polynomials F(α, v), where α is a real algebraic
x-coordinate and v is y or z. Every sign is decided exactly: a
coefficient c(α) by ``sign_at`` and a polynomial value G(α, r) at a
fiber root r through the subresultant chain of F and G specialized at
α. Interval arithmetic is only used for bounds and enclosures.
"""

import logging
from dataclasses import dataclass, field, replace

from sympy import Poly, Rational, symbols

from curvetop import intervals
from curvetop.errors import NotSquarefree, ParamDenominatorVanishes, TopologyInconsistent
from curvetop.polynomial import MultiPoly, VARIABLES, variable_index
from curvetop.real_roots import (MIN_WIDTH, RealAlgebraicNumber, isolate_real_roots, sign_at,
                                 sign_variations)
from curvetop.subresultant import subres_chain

Logger = logging.getLogger(__name__)

_T = symbols('t')


def at(p: MultiPoly, v: str, value) -> MultiPoly:
    """Specialize ``v`` when the polynomial involves it, leave it alone otherwise."""
    if VARIABLES[variable_index(v)] not in p.variables:
        return p
    return p.specialize(v, value)


def clear(p: MultiPoly, v: str, param: tuple[MultiPoly, MultiPoly],
          exponent: int | None = None) -> MultiPoly:
    """den^e · p(v = num/den), or p itself when it does not involve v."""
    if p.degree(v) <= 0 and exponent is None:
        return MultiPoly(at(p, v, 0).poly)
    return p.substitute_fraction(v, param[0], param[1], exponent)


def reduce_modulo(p: MultiPoly, v: str, modulus: MultiPoly) -> MultiPoly:
    """
    Reduce every coefficient of p in ``v`` modulo a univariate polynomial
    in x; the values at the roots of the modulus are unchanged.
    """
    if modulus.is_constant:
        return p
    var = MultiPoly.variable(v)
    result = MultiPoly(0)
    for power, coeff in enumerate(p.coefficients(v)):
        result = result + coeff.rem(modulus) * var ** power
    return MultiPoly(result.poly, p.variables)


@dataclass(frozen=True)
class FiberRoot:
    """
    A root of F(α, v) in the fiber above ``base``. ``defining`` F lies in
    Q[x, v] with F(α, v) squarefree; either lo == hi is the root, or it is
    the only root of F(α, v) in (lo, hi) and the signs at lo and hi are
    opposite. ``param`` = (num, den) when v = num(α)/den(α) is known.
    """
    base: RealAlgebraicNumber
    variable: str
    defining: MultiPoly
    lo: Rational
    hi: Rational
    param: tuple[MultiPoly, MultiPoly] | None = None
    # Sign of F(α, lo), kept across bisections
    lo_sign: int | None = field(default=None, compare=False, repr=False)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Rational:
        return (self.lo + self.hi) / 2

    def value_sign(self, r: Rational) -> int:
        """Sign of F(α, r) for a rational r."""
        return sign_at(at(self.defining, self.variable, r), self.base)

    def bisect(self) -> 'FiberRoot':
        if self.is_point:
            return self
        mid = self.midpoint
        s_mid = self.value_sign(mid)
        if s_mid == 0:
            return replace(self, lo=mid, hi=mid, lo_sign=0)
        s_lo = self.lo_sign if self.lo_sign is not None else self.value_sign(self.lo)
        if s_mid == s_lo:
            return replace(self, lo=mid, lo_sign=s_mid)
        return replace(self, hi=mid, lo_sign=s_lo)

    def refine(self, width: Rational) -> 'FiberRoot':
        root = self
        while root.hi - root.lo > width:
            root = root.bisect()
        return root

    def enclosure(self):
        return intervals.rational_interval(self.lo, self.hi)

    def with_base(self, base: RealAlgebraicNumber) -> 'FiberRoot':
        return replace(self, base=base)

    def to_dict(self) -> dict:
        data = {'variable': self.variable, 'defining': self.defining.to_dict(),
                'interval': [str(self.lo), str(self.hi)]}
        if self.param is not None:
            data['parametrization'] = {'numerator': self.param[0].to_dict(),
                                       'denominator': self.param[1].to_dict()}
        return data

    def __str__(self):
        if self.is_point:
            return str(self.lo)
        return f'root of {self.defining} in ({self.lo}, {self.hi})'


def rational_fiber_root(base: RealAlgebraicNumber, root: RealAlgebraicNumber) -> FiberRoot:
    """Wrap a root of a univariate fiber polynomial over a rational base."""
    return FiberRoot(base, root.variable, root.defining, root.lo, root.hi)


def _as_number(r: FiberRoot) -> RealAlgebraicNumber:
    # Only valid over a rational base
    univariate = at(r.defining, 'x', r.base.lo)
    if r.is_point:
        return RealAlgebraicNumber(univariate, r.lo, r.hi, r.variable)
    upoly = univariate.univariate(r.variable)
    sign = 1 if upoly.eval(r.hi) > 0 else -1
    return RealAlgebraicNumber(univariate, r.lo, r.hi, r.variable, sign)


def trimmed(G: MultiPoly, v: str, alpha: RealAlgebraicNumber) -> MultiPoly:
    """G without the leading terms in v whose coefficient vanishes at α."""
    coeffs = G.coefficients(v)
    while coeffs and sign_at(coeffs[-1], alpha) == 0:
        coeffs.pop()
    var = MultiPoly.variable(v)
    result = MultiPoly(0)
    for power, coeff in enumerate(coeffs):
        result = result + coeff * var ** power
    return MultiPoly(result.poly, G.variables)


def fiber_gcd(F: MultiPoly, G: MultiPoly, v: str,
              alpha: RealAlgebraicNumber) -> tuple[int, MultiPoly] | None:
    """
    gcd of F(α, v) and G(α, v) through the subresultant chain: the first
    k with sr_k(α) != 0 and Sr_k(x, v), whose specialization at α is an
    associate of the gcd. None when G(α, v) vanishes identically. Leading
    coefficients vanishing at α are trimmed first so the chain specializes.
    :param F: Polynomial in x and v
    :param G: Polynomial in x and v
    :param v: The fiber variable
    :param alpha: The base x-coordinate
    :return: (k, Sr_k) or None
    """
    F, G = trimmed(F, v, alpha), trimmed(G, v, alpha)
    if G.is_zero:
        return None
    if F.is_zero:
        return G.degree(v), G
    if G.degree(v) <= 0 or F.degree(v) <= 0:
        return 0, MultiPoly(1)
    chain = subres_chain(F, G, v, allow_swap=True)
    for k in range(len(chain)):
        if sign_at(chain.principal(k), alpha) != 0:
            return k, chain.subresultant(k)
    raise TopologyInconsistent('every principal subresultant coefficient vanishes at the base')


def fiber_vanishes(G: MultiPoly, r: FiberRoot) -> bool:
    """
    Exact test G(α, r) = 0 for G in Q[x, v].
    :param G: Polynomial in x and the fiber variable
    :param r: The fiber root
    :return: True when G vanishes at the point
    """
    v = r.variable
    if G.degree(v) <= 0:
        return sign_at(MultiPoly(at(G, v, 0).poly), r.base) == 0
    if r.is_point:
        return sign_at(at(G, v, r.lo), r.base) == 0
    if r.param is not None:
        return sign_at(clear(G, v, r.param), r.base) == 0
    if r.base.is_point:
        return sign_at(at(G, 'x', r.base.lo), _as_number(r)) == 0
    found = fiber_gcd(r.defining, G, v, r.base)
    if found is None:
        return True
    common = found[1]
    if common.degree(v) <= 0:
        return False
    s_lo = sign_at(at(common, v, r.lo), r.base)
    s_hi = sign_at(at(common, v, r.hi), r.base)
    return s_lo * s_hi < 0


def fiber_sign(G: MultiPoly, r: FiberRoot, budget: int = 200) -> int:
    """
    Exact sign of G(α, r): zero by ``fiber_vanishes``, otherwise by
    refining α and r until an interval enclosure excludes zero.
    """
    if fiber_vanishes(G, r):
        return 0
    base = r.base
    for _ in range(budget):
        box = {'x': base.enclosure(), r.variable: r.enclosure()}
        sign = intervals.sign_of(intervals.evaluate(G, box))
        if sign:
            return sign
        base = base.bisect()
        r = r.bisect()
    raise TopologyInconsistent(f'could not separate {G} from zero')


def _moebius_basis(lo: Rational, hi: Rational, degree: int) -> list[list[Rational]]:
    # (lo + hi t)^l (1 + t)^(n-l) as coefficient lists, lowest power first
    basis = []
    for power in range(degree + 1):
        poly = Poly((lo + hi * _T) ** power * (1 + _T) ** (degree - power), _T)
        basis.append(list(reversed(poly.all_coeffs())))
    return basis


def fiber_descartes(coeffs: list[MultiPoly], alpha: RealAlgebraicNumber,
                    lo: Rational, hi: Rational) -> int:
    """
    Descartes bound on the roots of sum c_l(α) v^l in (lo, hi), every
    transformed coefficient sign decided by ``sign_at``.
    """
    degree = len(coeffs) - 1
    basis = _moebius_basis(lo, hi, degree)
    signs = []
    for j in range(degree + 1):
        moved = MultiPoly(0)
        for power, coeff in enumerate(coeffs):
            if j < len(basis[power]) and basis[power][j]:
                moved = moved + coeff.scale(basis[power][j])
        signs.append(sign_at(moved, alpha))
    return sign_variations(signs)


def _fiber_bound(coeffs: list[MultiPoly], alpha: RealAlgebraicNumber) -> Rational:
    lead = coeffs[-1]
    while True:
        box = {'x': alpha.enclosure()}
        bottom = intervals.bounds(abs(intervals.evaluate(lead, box)))
        if bottom is not None and bottom[0] > 0:
            break
        alpha = alpha.bisect()
    top = Rational(0)
    for coeff in coeffs[:-1]:
        ends = intervals.bounds(abs(intervals.evaluate(coeff, box)))
        top = max(top, ends[1])
    bound = 1 + top / bottom[0]
    power = Rational(1)
    while power <= bound:
        power *= 2
    return power


def _split_point(F: MultiPoly, v: str, alpha: RealAlgebraicNumber,
                 lo: Rational, hi: Rational) -> Rational:
    # Dyadic points inside (lo, hi), the midpoint first, skipping roots
    candidate, step = (lo + hi) / 2, 3
    while sign_at(at(F, v, candidate), alpha) == 0:
        candidate = lo + (hi - lo) * (Rational(1, 2) - Rational(1, 2 ** step))
        step += 1
    return candidate


def isolate_fiber_roots(F: MultiPoly, v: str, alpha: RealAlgebraicNumber) -> list[FiberRoot]:
    """
    Isolate the real roots of F(α, v), which must be squarefree.
    :param F: Polynomial in x and v
    :param v: The fiber variable, y or z
    :param alpha: The base x-coordinate
    :return: Fiber roots in increasing order
    """
    v = VARIABLES[variable_index(v)]
    F = trimmed(F, v, alpha)
    if F.degree(v) <= 0:
        return []
    if alpha.is_point:
        univariate = at(F, 'x', alpha.lo)
        roots = isolate_real_roots(univariate)
        if any(m > 1 for m in roots.multiplicities):
            raise NotSquarefree(f'{univariate} has a multiple root')
        return [rational_fiber_root(alpha, root) for root in roots.roots]
    coeffs = F.coefficients(v)
    bound = _fiber_bound(coeffs, alpha)
    found, stack = [], [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        count = fiber_descartes(coeffs, alpha, lo, hi)
        if count == 0:
            continue
        if count == 1:
            found.append(FiberRoot(alpha, v, F, lo, hi))
            continue
        if hi - lo < MIN_WIDTH:
            raise NotSquarefree(f'{F} is not squarefree above {alpha}')
        mid = _split_point(F, v, alpha, lo, hi)
        stack.append((mid, hi))
        stack.append((lo, mid))
    found.sort(key=lambda r: r.lo)
    Logger.debug('fibers: Isolated(%d roots above %s)', len(found), alpha)
    return found


def locate_param(roots: list[FiberRoot], param: tuple[MultiPoly, MultiPoly]) -> int:
    """
    Index of the fiber root equal to num(α)/den(α), decided by the exact
    signs of (num - l·den)·den at the interval endpoints l.
    """
    if not roots:
        raise TopologyInconsistent('no fiber root to attach the parametrization to')
    alpha = roots[0].base
    num, den = param
    den_sign = sign_at(den, alpha)
    if den_sign == 0:
        raise ParamDenominatorVanishes(f'{den} vanishes at {alpha}')

    def side(level: Rational) -> int:
        return sign_at(num - den.scale(level), alpha) * den_sign

    for index, root in enumerate(roots):
        if root.is_point:
            if side(root.lo) == 0:
                return index
        elif side(root.lo) > 0 and side(root.hi) < 0:
            return index
    raise TopologyInconsistent(f'{num} / ({den}) is not a root of the fiber above {alpha}')
