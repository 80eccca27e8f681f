# -*- coding: utf-8 -*-
"""
Certified interval evaluation on top of mpmath's interval context.
Used for the advisory approximations and for separating candidate
values, never to decide a sign that an exact test can decide.
"""

from mpmath import iv, mpf, nstr, workprec
from mpmath.libmp import finf, fnan, fninf, to_rational
from sympy import Rational

from curvetop.polynomial import MultiPoly, VARIABLES

# Working precision of every interval operation, in bits
PRECISION: int = 128
# Bits and significant digits of the decimal approximations
APPROX_BITS: int = 64
APPROX_DIGITS: int = 20

iv.prec = PRECISION


def rational_interval(lo: Rational, hi: Rational | None = None):
    """
    Smallest interval of the mpmath interval context containing [lo, hi].
    :param lo: Lower rational endpoint
    :param hi: Upper rational endpoint, defaults to ``lo``
    :return: An ``iv.mpf``
    """
    lo = Rational(lo)
    hi = lo if hi is None else Rational(hi)
    low = iv.mpf(int(lo.p)) / int(lo.q)
    if hi == lo:
        return low
    high = iv.mpf(int(hi.p)) / int(hi.q)
    return iv.mpf([low.a, high.b])


def bounds(value) -> tuple[Rational, Rational] | None:
    """Exact rational endpoints of an interval, None when unbounded."""
    a, b = value._mpi_
    if any(raw in (finf, fninf, fnan) for raw in (a, b)):
        return None
    return Rational(*to_rational(a)), Rational(*to_rational(b))


def excludes_zero(value) -> bool:
    ends = bounds(value)
    return ends is not None and (ends[0] > 0 or ends[1] < 0)


def sign_of(value) -> int:
    """Sign of every point of the interval, 0 when it is not constant."""
    ends = bounds(value)
    if ends is None:
        return 0
    if ends[0] > 0:
        return 1
    if ends[1] < 0:
        return -1
    return 0


def width(value) -> Rational | None:
    ends = bounds(value)
    return None if ends is None else ends[1] - ends[0]


def disjoint(value, lo: Rational, hi: Rational) -> bool:
    """True when the interval misses the closed rational interval [lo, hi]."""
    ends = bounds(value)
    if ends is None:
        return False
    return ends[1] < lo or ends[0] > hi


def evaluate(p: MultiPoly, box: dict):
    """
    Interval enclosure of p over a box.
    :param p: The polynomial
    :param box: Map from variable name to ``iv.mpf``
    :return: An ``iv.mpf`` containing every value of p on the box
    """
    total = iv.mpf(0)
    for monom, coeff in p.poly.terms():
        if not coeff:
            continue
        term = rational_interval(coeff)
        for name, e in zip(VARIABLES, monom):
            if e:
                term = term * box[name] ** e
        total = total + term
    return total


def midpoint(lo: Rational, hi: Rational) -> Rational:
    return (Rational(lo) + Rational(hi)) / 2


def to_mpf(value: Rational):
    """The rational rounded to an mpmath number of the approximation precision."""
    value = Rational(value)
    with workprec(APPROX_BITS):
        return mpf(int(value.p)) / int(value.q)


def decimal(value) -> str:
    """Decimal text of a rational or mpmath number."""
    if not hasattr(value, '_mpf_'):
        value = to_mpf(value)
    with workprec(APPROX_BITS):
        return nstr(value, APPROX_DIGITS)


def parse_decimal(value: str):
    """Parse an approximation back into an mpmath number."""
    with workprec(APPROX_BITS):
        return mpf(value)
