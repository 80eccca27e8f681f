# -*- coding: utf-8 -*-
"""
Topology of a plane curve f(x, y) = 0. The critical x-values are split
by the multiplicity of the gcd of f and f_y (the Φ/Γ sequence of the
subresultant chain of f and f_y in y), generic position is certified
with one divisibility test per subresultant coefficient, every critical
fiber gets its multiple point from a rational parametrization, and a
left-to-right sweep connects the fibers into a graph.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cmp_to_key
from itertools import chain, islice

from sympy import Rational

from curvetop import intervals
from curvetop.errors import (LeadingCoefficientVanishes, NotCertifiedGeneric, NotSquarefree,
                             ShearBudgetExhausted, TopologyInconsistent, UnknownVariable,
                             ZeroPolynomial)
from curvetop.fibers import (FiberRoot, at, clear, isolate_fiber_roots, locate_param,
                             rational_fiber_root, reduce_modulo)
from curvetop.graph import PLSGraph, PLSVertex
from curvetop.polynomial import MultiPoly, ShearMap, plane_shears
from curvetop.real_roots import RealAlgebraicNumber, compare, isolate_real_roots, refine, sign_at
from curvetop.subresultant import SubresultantChain, subres_chain

Logger = logging.getLogger(__name__)

PLANE_VARIABLES: tuple[str, ...] = ('x', 'y')


@dataclass(frozen=True)
class ShearRetryPolicy:
    """
    :param budget: Shears tried after the identity before giving up, each sweep
        shear of a space projection counted as one
    :param refine_width: Width of the isolating intervals behind every approximation
    :param processes: Worker processes for lifting, 0 or 1 lifts in-process
    :param limit_refinements: Interval refinements allowed to separate a limit
    """
    budget: int = 32
    refine_width: Rational = Rational(1, 2 ** 30)
    processes: int = 0
    limit_refinements: int = 60


@dataclass(frozen=True)
class GammaDecomposition:
    d: int
    phi: tuple[MultiPoly, ...]
    gamma: tuple[MultiPoly, ...]
    chain: SubresultantChain | None = None

    def Gamma(self, k: int) -> MultiPoly:
        """Γ_k for k = 1..d-1."""
        return self.gamma[k - 1]

    def params(self, k: int) -> tuple[MultiPoly, MultiPoly]:
        """(num, den) of the multiple root y = -sr_{k,k-1}(x) / (k·sr_{k,k}(x)) above Γ_k."""
        return -self.chain.sr(k, k - 1), self.chain.principal(k).scale(k)


@dataclass(frozen=True)
class GenericityReport:
    status: str
    witness: dict | None = None
    shear_applied: ShearMap | None = None
    certificate: str = 'plane_generic'
    # X := X + νY applied after a space shear, keeping the projection along z
    sweep_shear: ShearMap | None = None

    def __post_init__(self):
        if self.status not in ('generic', 'non_generic', 'degenerate_lcoef'):
            raise ValueError(f'unknown status {self.status!r}')
        if self.status == 'generic' and self.witness is not None:
            raise ValueError('a generic report carries no witness')

    @property
    def passed(self) -> bool:
        return self.status == 'generic'

    def as_dict(self) -> dict:
        data = {'certificate': self.certificate, 'status': self.status}
        if self.shear_applied is not None:
            data['shear'] = self.shear_applied.as_dict()
        if self.sweep_shear is not None:
            data['sweep_shear'] = self.sweep_shear.as_dict()
        if self.witness is not None:
            data['witness'] = dict(self.witness)
        return data

    def __str__(self):
        text = f'{self.certificate}: {self.status}'
        if self.shear_applied is not None and not self.shear_applied.is_identity:
            text += f' after {self.shear_applied}'
        if self.sweep_shear is not None:
            text += f' then {self.sweep_shear}'
        if self.witness:
            text += ' (' + ', '.join(f'{k}={v}' for k, v in self.witness.items()) + ')'
        return text


@dataclass(frozen=True)
class PlaneFiber:
    """
    Points of the curve above one x-value, increasing in y. A critical
    fiber has exactly one multiple point at ``critical_index``, found
    above a root of Γ_k with k = ``multiple_point_k``.
    """
    x: RealAlgebraicNumber
    points: tuple[FiberRoot, ...]
    kinds: tuple[str, ...]
    critical_index: int | None = None
    multiple_point_k: int | None = None

    @property
    def is_critical(self) -> bool:
        return self.critical_index is not None


@dataclass(frozen=True)
class SweepEdge:
    """
    Edge between point ``regular`` = (fiber, index) of a regular fiber and
    point ``critical`` of the adjacent critical fiber. ``side`` tells where
    the regular fiber lies; ``rank`` numbers, bottom first, the branches
    that converge to the multiple point.
    """
    regular: tuple[int, int]
    critical: tuple[int, int]
    side: str
    rank: int | None = None


@dataclass(frozen=True)
class PlaneTopology:
    f: MultiPoly
    shear: ShearMap
    decomposition: GammaDecomposition
    fibers: tuple[PlaneFiber, ...]
    sweep: tuple[SweepEdge, ...]
    vertex_ids: dict = field(default_factory=dict)
    graph: PLSGraph | None = None
    trail: tuple[GenericityReport, ...] = ()
    notes: tuple[str, ...] = ()


def as_plane(f: MultiPoly) -> MultiPoly:
    if 'z' in f.occurring():
        raise UnknownVariable(f'a plane curve cannot involve z: {f}')
    return MultiPoly(f.poly, PLANE_VARIABLES)


def gamma_decomposition(f: MultiPoly) -> GammaDecomposition:
    """
    Φ/Γ decomposition of the critical x-values of f.
    :param f: Squarefree polynomial in x, y with lcoef_y(f) a nonzero constant
    :return: The decomposition
    """
    f = as_plane(f)
    if f.is_zero:
        raise ZeroPolynomial('the zero polynomial defines no curve')
    lead = f.leading_coefficient('y')
    if not lead.is_constant:
        raise LeadingCoefficientVanishes(f'lcoef_y = {lead} is not a constant')
    d = f.degree('y')
    if d <= 0:
        return GammaDecomposition(0, (), ())
    chain_ = subres_chain(f, f.derivative('y'), 'y')
    resultant = chain_.sr(0, 0)
    if resultant.is_zero:
        raise NotSquarefree(f'{f} has a repeated factor')
    phi = [resultant.squarefree_part()]
    for i in range(1, d):
        phi.append(phi[-1].gcd(chain_.principal(i)))
    gamma = tuple(phi[i - 1].exquo(phi[i]).normalized() for i in range(1, d))
    Logger.debug('plane: Gamma degrees(%s)', [g.degree('x') for g in gamma])
    return GammaDecomposition(d, tuple(phi), gamma, chain_)


def certificate_residue(chain_: SubresultantChain, k: int, i: int) -> MultiPoly:
    """k(k-i)·sr_{k,i}·sr_{k,k} - (i+1)·sr_{k,k-1}·sr_{k,i+1}."""
    return chain_.sr(k, i) * chain_.principal(k) * (k * (k - i)) \
        - chain_.sr(k, k - 1) * chain_.sr(k, i + 1) * (i + 1)


def certify_plane_generic(f: MultiPoly, decomposition: GammaDecomposition | None = None) \
        -> GenericityReport:
    """
    Certify generic position: for every k and i < k the residue of
    ``certificate_residue`` vanishes modulo Γ_k.
    :param f: Squarefree polynomial with lcoef_y(f) a nonzero constant
    :param decomposition: Precomputed decomposition of f
    :return: The report, with the first failing (k, i) as witness
    """
    decomposition = decomposition or gamma_decomposition(f)
    for k in range(1, decomposition.d):
        modulus = decomposition.Gamma(k)
        if modulus.is_constant:
            continue
        for i in range(k):
            residue = certificate_residue(decomposition.chain, k, i).rem(modulus)
            if not residue.is_zero:
                Logger.info('plane: Certificate failed(k=%d, i=%d)', k, i)
                return GenericityReport('non_generic', {'k': k, 'i': i, 'residue': str(residue)})
    return GenericityReport('generic')


def classify_critical_point(f: MultiPoly, alpha: RealAlgebraicNumber,
                            param: tuple[MultiPoly, MultiPoly]) -> str:
    """``real_singular`` when f_x also vanishes at (α, β(α)), else ``x_critical``."""
    fx = as_plane(f).derivative('x')
    return 'real_singular' if sign_at(clear(fx, 'y', param), alpha) == 0 else 'x_critical'


def _critical_fiber(f: MultiPoly, fiber_poly: MultiPoly, subresultant: MultiPoly, k: int,
                    alpha: RealAlgebraicNumber, param: tuple[MultiPoly, MultiPoly]) -> PlaneFiber:
    points = isolate_fiber_roots(reduce_modulo(fiber_poly, 'y', alpha.defining), 'y', alpha)
    index = locate_param(points, param)
    if sign_at(clear(subresultant, 'y', param), alpha) != 0:
        raise TopologyInconsistent(f'the multiple point above {alpha} is not a root of Sr_{k}')
    points[index] = replace(points[index], param=param)
    kinds = ['regular'] * len(points)
    kinds[index] = classify_critical_point(f, alpha, param)
    return PlaneFiber(alpha, tuple(points), tuple(kinds), index, k)


def critical_fibers(f: MultiPoly, g: GammaDecomposition,
                    report: GenericityReport | None = None) -> list[PlaneFiber]:
    """
    One fiber per real root α of each Γ_k, in increasing x.
    :param f: The certified polynomial
    :param g: Its decomposition
    :param report: The certificate, computed when not given
    :return: The critical fibers
    """
    f = as_plane(f)
    report = report or certify_plane_generic(f, g)
    if not report.passed:
        raise NotCertifiedGeneric(str(report))
    fibers = []
    for k in range(1, g.d):
        modulus = g.Gamma(k)
        if modulus.is_constant:
            continue
        subresultant = g.chain.subresultant(k)
        fiber_poly = f.pseudo_quotient(subresultant, 'y')
        for alpha in isolate_real_roots(modulus).roots:
            fibers.append(_critical_fiber(f, fiber_poly, subresultant, k, alpha, g.params(k)))
    fibers.sort(key=cmp_to_key(lambda a, b: compare(a.x, b.x)))
    Logger.debug('plane: Critical fibers(%d)', len(fibers))
    return fibers


def regular_fiber(f: MultiPoly, x0: Rational) -> PlaneFiber:
    alpha = RealAlgebraicNumber.rational(x0)
    roots = isolate_real_roots(at(as_plane(f), 'x', x0))
    points = tuple(rational_fiber_root(alpha, root) for root in roots.roots)
    return PlaneFiber(alpha, points, ('sweep_regular',) * len(points))


def regular_abscissas(critical: list[PlaneFiber]) -> tuple[list[PlaneFiber], list[Rational]]:
    """
    Rational abscissas of the regular fibers: one before the first critical
    x-value, one midpoint between consecutive ones after refining their
    intervals apart, one after the last (0 when there is none).
    """
    if not critical:
        return [], [Rational(0)]
    xs = [fiber.x for fiber in critical]
    for i in range(len(xs) - 1):
        while xs[i].hi >= xs[i + 1].lo:
            xs[i], xs[i + 1] = xs[i].bisect(), xs[i + 1].bisect()
    abscissas = [xs[0].lo - 1]
    abscissas += [(a.hi + b.lo) / 2 for a, b in zip(xs, xs[1:])]
    abscissas.append(xs[-1].hi + 1)
    return [replace(fiber, x=x) for fiber, x in zip(critical, xs)], abscissas


def connect(fibers: list[PlaneFiber]) -> list[SweepEdge]:
    """
    Sweep connection. Fibers alternate regular, critical, ..., regular.
    Branches below the multiple point keep their rank, the L branches
    counted from the adjacent regular fiber converge to it, branches above
    shift down by L - 1.
    """
    edges = []
    for c in range(1, len(fibers), 2):
        critical = fibers[c]
        m = critical.critical_index
        for side, r in (('left', c - 1), ('right', c + 1)):
            count = len(fibers[r].points)
            converging = count - (len(critical.points) - 1)
            if converging < 0:
                raise TopologyInconsistent(
                    f'{count} branches beside a critical fiber of {len(critical.points)} points')
            for i in range(count):
                if i < m:
                    edges.append(SweepEdge((r, i), (c, i), side))
                elif i < m + converging:
                    edges.append(SweepEdge((r, i), (c, m), side, i - m))
                else:
                    edges.append(SweepEdge((r, i), (c, i - converging + 1), side))
    return edges


def _approximate_fiber(fiber: PlaneFiber, width: Rational) -> list[tuple[str, str]]:
    # α is refined once per fiber; the y bisections then decide signs on the narrow interval
    x = refine(fiber.x, width)
    ax = intervals.decimal(x.midpoint)
    return [(ax, intervals.decimal(y.with_base(x).refine(width).midpoint)) for y in fiber.points]


def build_plane_topology(f: MultiPoly, decomposition: GammaDecomposition,
                         report: GenericityReport, refine_width: Rational = Rational(1, 2 ** 30),
                         shear: ShearMap | None = None, trail: tuple = (),
                         notes: tuple = ()) -> PlaneTopology:
    """
    Fibers, sweep and graph of a certified curve, with no shear search.
    :param f: Polynomial whose generic position ``report`` certifies
    :param decomposition: Its Γ decomposition
    :param report: The passed certificate
    :param refine_width: Error bound of the approximations
    :return: The plane topology
    """
    f = as_plane(f)
    shear = shear or ShearMap.plane(0)
    critical, abscissas = regular_abscissas(critical_fibers(f, decomposition, report))
    fibers = [regular_fiber(f, abscissas[0])]
    for fiber, x0 in zip(critical, abscissas[1:]):
        fibers += [fiber, regular_fiber(f, x0)]
    sweep = connect(fibers)

    vertex_ids, vertices = {}, []
    for i, fiber in enumerate(fibers):
        approximations = _approximate_fiber(fiber, refine_width)
        for j, point in enumerate(fiber.points):
            vertex_ids[(i, j)] = len(vertices)
            vertices.append(PLSVertex(len(vertices), (fiber.x, point), approximations[j],
                                      fiber.kinds[j]))
    edges = [(vertex_ids[e.regular], vertex_ids[e.critical]) for e in sweep]
    trail = tuple(trail) or (report,)
    certificates = {'plane_generic': 'passed',
                    'shears': [r.as_dict() for r in trail]}
    graph = PLSGraph(2, tuple(vertices), tuple(edges), certificates,
                     () if shear.is_identity else (shear,), trail)
    Logger.info('plane: Topology computed(%d vertices, %d edges)', len(vertices), len(edges))
    return PlaneTopology(f, shear, decomposition, tuple(fibers), tuple(sweep), vertex_ids,
                         graph, trail, tuple(notes))


def compute_plane_topology(f: MultiPoly, policy: ShearRetryPolicy = ShearRetryPolicy()) \
        -> PlaneTopology:
    """
    Squarefree part, shear search and topology of a plane curve.
    :param f: Nonzero polynomial in x, y
    :param policy: Shear budget and precision
    :return: The plane topology, its graph included
    """
    f = as_plane(f)
    if f.is_zero:
        raise ZeroPolynomial('the zero polynomial defines no curve')
    if f.is_constant:
        empty = GammaDecomposition(0, (), ())
        report = GenericityReport('generic')
        graph = PLSGraph(2, (), (), {'plane_generic': 'passed', 'shears': []}, (), (report,))
        return PlaneTopology(f, ShearMap.plane(0), empty, (), (), {}, graph, (report,))
    notes = []
    squarefree = as_plane(f.squarefree_part())
    if squarefree != f.normalized():
        notes.append('input replaced by its squarefree part')
        Logger.info('plane: Input replaced by its squarefree part(%s)', squarefree)
    trail = []
    for shear in islice(chain([ShearMap.plane(0)], plane_shears()), policy.budget + 1):
        g = as_plane(shear.apply(squarefree))
        lead = g.leading_coefficient('y')
        if not lead.is_constant:
            trail.append(GenericityReport('degenerate_lcoef', {'asymptote': f'lcoef_y = {lead}'},
                                          shear))
            continue
        decomposition = gamma_decomposition(g)
        report = replace(certify_plane_generic(g, decomposition), shear_applied=shear)
        trail.append(report)
        if report.passed:
            Logger.info('plane: Certificate passed(%s)', shear)
            return build_plane_topology(g, decomposition, report, policy.refine_width, shear,
                                        tuple(trail), tuple(notes))
    raise ShearBudgetExhausted(f'no plane shear among {policy.budget + 1} candidates was certified')


def plane_topology(f: MultiPoly, policy: ShearRetryPolicy = ShearRetryPolicy()) -> PLSGraph:
    """
    Certified graph isotopic to the curve f = 0.
    :param f: Nonzero polynomial in x, y
    :param policy: Shear budget and precision
    :return: The 2D graph
    """
    return compute_plane_topology(f, policy).graph


def critical_point_count(f: MultiPoly, forms: tuple[int, ...] = (1, 2, 3, 5)) -> tuple[int, int]:
    """
    Distinct complex x-critical points and distinct critical x-values of a
    squarefree f, counted through resultants. The point count uses the
    separating form x + λy with the largest count among ``forms``.
    :return: (points, values); f is in generic position when they agree
    """
    f = as_plane(f)
    fy = f.derivative('y')
    values = subres_chain(f, fy, 'y', allow_swap=True).resultant
    value_count = values.squarefree_part().degree('x') if not values.is_zero else -1
    point_count = 0
    for lam in forms:
        shear = ShearMap.plane(-lam)
        moved, moved_y = as_plane(shear.apply(f)), as_plane(shear.apply(fy))
        if not moved.leading_coefficient('y').is_constant or moved_y.is_zero:
            continue
        resultant = subres_chain(moved, moved_y, 'y', allow_swap=True).resultant
        if not resultant.is_zero:
            point_count = max(point_count, resultant.squarefree_part().degree('x'))
    return point_count, max(value_count, 0)


def genericity_oracle(f: MultiPoly) -> bool:
    """True when f has as many distinct critical points as critical values."""
    points, values = critical_point_count(f)
    return points == values
