# -*- coding: utf-8 -*-
"""
Subresultant chains of two polynomials with respect to a distinguished
variable.

For deg_v P = p >= q = deg_v Q the matrix M_k(P, Q) has the q-k shifted
coefficient rows of P followed by the p-k shifted rows of Q, with the
coefficient of v^c in column c. sr_{k,j} is the determinant of the
columns (j, k+1, ..., p+q-k-1) and Sr_k = sum_j sr_{k,j} v^j. Sr_0 is
the resultant.

Two backends compute the chain:

``elimination``
    folds the columns 0..k of M_k into a single column of polynomials
    in v (the determinant is linear in that column) and runs one
    fraction-free Bareiss elimination per k; every division is exact.

``minors``
    evaluates each minor separately with sympy's Berkowitz determinant.
    It is slow and only meant as a reference for small degrees.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

from sympy import Matrix

from curvetop.errors import DegreeOrderViolated, ZeroPolynomial
from curvetop.polynomial import MultiPoly, Number, VARIABLES, variable_index

Logger = logging.getLogger(__name__)

BACKENDS: tuple[str, ...] = ('elimination', 'minors')


@dataclass(frozen=True)
class SubresultantChain:
    """
    The chain (Sr_k) for k = 0..q together with every coefficient
    sr_{k,j}, j = 0..k. ``swapped`` records that the arguments were
    exchanged to get p >= q.
    """
    variable: str
    p_degree: int
    q_degree: int
    subresultants: tuple[MultiPoly, ...]
    coefficients: tuple[tuple[MultiPoly, ...], ...]
    swapped: bool = False
    backend: str = 'elimination'

    def __len__(self):
        return len(self.subresultants)

    def subresultant(self, k: int) -> MultiPoly:
        return self.subresultants[k]

    def sr(self, k: int, j: int | None = None) -> MultiPoly:
        """
        Coefficient sr_{k,j}; ``j`` defaults to k (principal coefficient).
        Indices outside 0..k give the zero polynomial.
        """
        j = k if j is None else j
        if not 0 <= j <= k:
            return MultiPoly(0)
        return self.coefficients[k][j]

    def principal(self, k: int) -> MultiPoly:
        return self.coefficients[k][k]

    @property
    def resultant(self) -> MultiPoly:
        return self.subresultants[0]

    def specialize(self, v: str, value: Number) -> 'SubresultantChain':
        """Chain whose every entry is specialized at v = value."""
        def specialized(p: MultiPoly) -> MultiPoly:
            return p.specialize(v, value) if VARIABLES[variable_index(v)] in p.variables else p

        return SubresultantChain(
            self.variable, self.p_degree, self.q_degree,
            tuple(specialized(s) for s in self.subresultants),
            tuple(tuple(specialized(c) for c in row) for row in self.coefficients),
            self.swapped, self.backend)

    def first_nonzero(self) -> int:
        """Smallest k with sr_k != 0."""
        for k in range(len(self)):
            if not self.principal(k).is_zero:
                return k
        raise ZeroPolynomial('every principal subresultant coefficient vanishes')


def _padded(p: MultiPoly, v: str, degree: int) -> list[MultiPoly]:
    coeffs = p.coefficients(v)
    return coeffs + [MultiPoly(0)] * (degree + 1 - len(coeffs))


def sylvester_rows(P: MultiPoly, Q: MultiPoly, v: str, k: int) -> list[list[MultiPoly]]:
    """
    Rows of M_k(P, Q).
    :param P: Polynomial of degree p in v
    :param Q: Polynomial of degree q <= p in v
    :param v: Distinguished variable
    :param k: Index, 0 <= k <= q
    :return: p+q-2k rows of p+q-k entries
    """
    p, q = P.degree(v), Q.degree(v)
    a, b = _padded(P, v, p), _padded(Q, v, q)
    width = p + q - k
    rows = []
    for coeffs, degree, count in ((a, p, q - k), (b, q, p - k)):
        for shift in range(count):
            row = [MultiPoly(0)] * width
            for i in range(degree + 1):
                row[shift + i] = coeffs[i]
            rows.append(row)
    return rows


def bareiss_determinant(matrix: list[list[MultiPoly]]) -> MultiPoly:
    """
    Fraction-free determinant of a square matrix of polynomials.
    :param matrix: Rows of MultiPoly entries
    :return: The determinant
    """
    n = len(matrix)
    if n == 0:
        return MultiPoly(1)
    m = [list(row) for row in matrix]
    sign, previous = 1, MultiPoly(1)
    for k in range(n - 1):
        if m[k][k].is_zero:
            pivot = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
            if pivot is None:
                return MultiPoly(0)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exquo(previous)
        previous = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def _elimination_subresultant(rows: list[list[MultiPoly]], v: str, k: int) -> MultiPoly:
    power = MultiPoly.variable(v)
    folded = []
    for row in rows:
        entry = MultiPoly(0)
        for c in range(k, -1, -1):
            entry = entry * power + row[c]
        folded.append(entry)
    # The folded column goes last so v only enters the final column.
    square = [row[k + 1:] + [folded[r]] for r, row in enumerate(rows)]
    det = bareiss_determinant(square)
    return det if (len(square) - 1) % 2 == 0 else -det


def minor(P: MultiPoly, Q: MultiPoly, v: str, k: int, j: int) -> MultiPoly:
    """
    sr_{k,j} straight from the determinantal definition.
    :return: det of the columns (j, k+1, ..., p+q-k-1) of M_k(P, Q)
    """
    rows = sylvester_rows(P, Q, v, k)
    if not rows:
        return _padded(Q, v, k)[j]
    names = P.variables + Q.variables
    columns = [j] + list(range(k + 1, len(rows[0])))
    square = Matrix([[row[c].poly.as_expr() for c in columns] for row in rows])
    return MultiPoly(square.det(method='berkowitz'), [n for n in names if n != v])


def _check_degrees(P: MultiPoly, Q: MultiPoly, v: str, allow_swap: bool):
    if P.is_zero or Q.is_zero:
        raise ZeroPolynomial('subresultants of the zero polynomial')
    if P.degree(v) < Q.degree(v):
        if not allow_swap:
            raise DegreeOrderViolated(
                f'deg_{v} P = {P.degree(v)} < deg_{v} Q = {Q.degree(v)}')
        return Q, P, True
    return P, Q, False


@lru_cache(maxsize=256)
def subres_chain(P: MultiPoly, Q: MultiPoly, v: str, backend: str = 'elimination',
                 allow_swap: bool = False) -> SubresultantChain:
    """
    Full subresultant chain of P and Q with respect to ``v``.
    :param P: First polynomial, deg_v P >= deg_v Q unless ``allow_swap``
    :param Q: Second polynomial
    :param v: Distinguished variable
    :param backend: ``elimination`` (default) or ``minors``
    :param allow_swap: Exchange P and Q when deg_v P < deg_v Q
    :return: The chain
    """
    if backend not in BACKENDS:
        raise ValueError(f'unknown backend {backend!r}')
    v = VARIABLES[variable_index(v)]
    P, Q, swapped = _check_degrees(P, Q, v, allow_swap)
    p, q = P.degree(v), Q.degree(v)
    subresultants, coefficients = [], []
    for k in range(q + 1):
        rows = sylvester_rows(P, Q, v, k)
        if not rows:
            # p = q = k: no rows are left and the chain ends with Q itself
            sr_k = Q
        elif backend == 'elimination':
            sr_k = _elimination_subresultant(rows, v, k)
        else:
            var = MultiPoly.variable(v)
            sr_k = MultiPoly(0)
            for j in range(k, -1, -1):
                sr_k = sr_k * var + minor(P, Q, v, k, j)
        names = tuple(n for n in P.variables + Q.variables)
        sr_k = MultiPoly(sr_k.poly, names)
        subresultants.append(sr_k)
        coefficients.append(tuple(_padded(sr_k, v, k)[:k + 1]))
    Logger.debug('subresultant: Chain computed(p=%d, q=%d, %s)', p, q, backend)
    return SubresultantChain(v, p, q, tuple(subresultants), tuple(coefficients),
                             swapped, backend)


def gcd_via_chain(P: MultiPoly, Q: MultiPoly, v: str,
                  backend: str = 'elimination') -> MultiPoly:
    """
    The first Sr_k with sr_k != 0, an associate of gcd(P, Q) for
    polynomials univariate in ``v``.
    """
    chain = subres_chain(P, Q, v, backend, allow_swap=True)
    return chain.subresultant(chain.first_nonzero())
