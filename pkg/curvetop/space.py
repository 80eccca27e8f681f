# -*- coding: utf-8 -*-
"""
Topology of a real space curve P1 = P2 = 0 through a single projection.

The curve is projected along z onto the squarefree part h of
Res_z(P1, P2). The subresultant chain of P1 and P2 in z splits h into the
factors Δ_i whose points have a fiber gcd of degree i, and it gives every
lifted z-value as a rational function -sr_{i,i-1}/(i·sr_{i,i}) of x and y.
Three certificates (pseudo-generic, plane generic, space generic) guard
the construction; the plane topology of h is then lifted fiber by fiber,
and the nodes of h with two real preimages are split into two vertices.
"""

import logging
import multiprocessing
from dataclasses import dataclass, field, replace
from itertools import chain, islice

from mpmath import iv
from sympy import Rational
from tblib import pickling_support

from curvetop import intervals
from curvetop.errors import (CommonComponent, InternalDivisionNotExact, LeadingCoefficientVanishes,
                             LimitUndetermined, NotANode, NotCertified, ParamDenominatorVanishes,
                             ShearBudgetExhausted, TopologyInconsistent, ZeroPolynomial)
from curvetop.fibers import (FiberRoot, clear, fiber_gcd, fiber_vanishes, isolate_fiber_roots,
                             locate_param, reduce_modulo)
from curvetop.graph import ExactCoordinate, PLSGraph, PLSVertex
from curvetop.plane import (GammaDecomposition, GenericityReport, PlaneFiber, PlaneTopology,
                            ShearRetryPolicy, as_plane, build_plane_topology, certificate_residue,
                            certify_plane_generic, gamma_decomposition)
from curvetop.polynomial import MultiPoly, ShearMap, plane_shears, space_shears
from curvetop.real_roots import RealAlgebraicNumber, refine, sign_at
from curvetop.subresultant import SubresultantChain, subres_chain

Logger = logging.getLogger(__name__)

SPACE_VARIABLES: tuple[str, ...] = ('x', 'y', 'z')
# Shears tried when looking for constant leading coefficients in z
NORMALIZATION_SEARCH: int = 64
# Bisections allowed while enclosing a lifted z-value
ENCLOSURE_STEPS: int = 400


def as_space(p: MultiPoly) -> MultiPoly:
    return MultiPoly(p.poly, SPACE_VARIABLES)


def _xy(p: MultiPoly) -> MultiPoly:
    return MultiPoly(p.poly, ('x', 'y'))


def is_normalized(P1: MultiPoly, P2: MultiPoly) -> bool:
    """True when both leading coefficients in z are nonzero constants."""
    return all(p.leading_coefficient('z').is_constant for p in (P1, P2))


@dataclass(frozen=True)
class SpaceCurveInput:
    """
    The two surfaces in the certified frame. ``chain`` is their
    subresultant chain in z, of length m + 1.
    """
    P1: MultiPoly
    P2: MultiPoly
    m: int
    chain: SubresultantChain
    shear_applied: ShearMap | None = None
    sweep_shear: ShearMap | None = None

    @property
    def frame(self) -> tuple[ShearMap, ...]:
        """The shears applied to the input, in order, identities left out."""
        return tuple(s for s in (self.shear_applied, self.sweep_shear)
                     if s is not None and not s.is_identity)


@dataclass(frozen=True)
class DeltaDecomposition:
    h: MultiPoly
    theta: tuple[MultiPoly, ...]
    delta: tuple[MultiPoly, ...]

    def Delta(self, i: int) -> MultiPoly:
        """Δ_i for i = 1..m."""
        return self.delta[i - 1]

    def components(self) -> list[int]:
        """Indices i whose Δ_i is not constant."""
        return [i for i in range(1, len(self.delta) + 1) if not self.Delta(i).is_constant]


@dataclass(frozen=True)
class SingularityClassification:
    """
    For each Γ_j of the projection and each k: the abscissas Γ_{j,k} of
    points with a single preimage whose fiber gcd has degree k, and the
    abscissas χ_{j,k} of points with several preimages. ``u``, ``v`` and
    ``w`` keep the gcd cascade that produced them.
    """
    m: int
    n: int
    params: dict = field(default_factory=dict)
    real: dict = field(default_factory=dict)
    apparent: dict = field(default_factory=dict)
    u: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    w: dict = field(default_factory=dict)

    def Gamma(self, j: int, k: int) -> MultiPoly:
        return self.real.get((j, k), MultiPoly(1))

    def chi(self, j: int, k: int) -> MultiPoly:
        return self.apparent.get((j, k), MultiPoly(1))

    def classify(self, j: int, alpha: RealAlgebraicNumber) -> tuple[str, int]:
        """
        Which cascade a root of Γ_j belongs to.
        :param j: Index of the Γ factor of the projection
        :param alpha: A real root of Γ_j
        :return: ('real', k) or ('apparent', k)
        """
        for k in range(1, self.m + 1):
            if sign_at(self.Gamma(j, k), alpha) == 0:
                return 'real', k
            if sign_at(self.chi(j, k), alpha) == 0:
                return 'apparent', k
        raise TopologyInconsistent(f'{alpha} is in no cascade of Γ_{j}')


@dataclass(frozen=True)
class Certification:
    """Outcome of the three certificates for one shear, stopped at the first failure."""
    inp: SpaceCurveInput
    h: MultiPoly
    delta: DeltaDecomposition
    plane: GammaDecomposition | None = None
    classification: SingularityClassification | None = None
    reports: tuple[GenericityReport, ...] = ()

    @property
    def passed(self) -> bool:
        return len(self.reports) == 3 and all(r.passed for r in self.reports)

    @property
    def plane_failed(self) -> bool:
        """Stopped at the plane certificate, which a sweep shear can repair."""
        return self.reports[-1].certificate == 'plane_generic' and not self.reports[-1].passed


@dataclass(frozen=True)
class LiftedPoint:
    """
    One 3D point above point ``index`` of a plane fiber. The z coordinate
    is an ExactCoordinate given by a parametrization in x and y, or a
    FiberRoot in x and z above an apparent node. ``branches`` lists the
    (side, rank) sweep branches attached to an apparent lift.
    """
    index: int
    y: FiberRoot
    z: ExactCoordinate | FiberRoot
    approx: tuple[str, str, str]
    kind: str
    provenance: str
    branches: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class LiftedFiber:
    base: PlaneFiber
    points: tuple[LiftedPoint, ...]
    slopes: tuple[str, ...] = ()

    def position(self, index: int, side: str | None = None, rank: int | None = None) -> int:
        """Position in ``points`` of the lift of plane point ``index`` seen from a sweep branch."""
        candidates = [pos for pos, point in enumerate(self.points) if point.index == index]
        if len(candidates) == 1:
            return candidates[0]
        for pos in candidates:
            if (side, rank) in self.points[pos].branches:
                return pos
        raise TopologyInconsistent(f'no lift of point {index} for branch ({side}, {rank})')


@dataclass(frozen=True)
class ApparentLift:
    """
    The real preimages of an apparent node. ``ordered`` holds the indices
    into ``roots`` of the lifts of the branch with the lower slope and
    the one with the higher slope; an acnode has no roots at all.
    """
    roots: tuple[FiberRoot, ...]
    ordered: tuple[int, ...]
    components: tuple[int, ...]
    slopes: tuple[str, ...] = ()

    @property
    def branches(self) -> dict:
        """Sweep branch (side, rank) to root index; bottom branches cross over."""
        if not self.roots:
            return {}
        lo, hi = self.ordered
        return {('left', 0): hi, ('left', 1): lo, ('right', 0): lo, ('right', 1): hi}


@dataclass(frozen=True)
class LiftContext:
    inp: SpaceCurveInput
    delta: DeltaDecomposition
    classification: SingularityClassification
    fibers: tuple[PlaneFiber, ...]
    policy: ShearRetryPolicy


@dataclass(frozen=True)
class SpaceTopology:
    certification: Certification
    plane: PlaneTopology
    lifted: tuple[LiftedFiber, ...]
    graph: PLSGraph
    trail: tuple[GenericityReport, ...] = ()


def _check_input(P1: MultiPoly, P2: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    P1, P2 = as_space(P1), as_space(P2)
    if P1.is_zero or P2.is_zero:
        raise ZeroPolynomial('the zero polynomial defines no surface')
    common = P1.gcd(P2)
    if not common.is_constant:
        raise CommonComponent(f'input surfaces share a component: {common}')
    return P1, P2


def projected_curve(P1: MultiPoly, P2: MultiPoly, shear: ShearMap | None = None,
                    sweep: ShearMap | None = None) -> tuple[SpaceCurveInput, MultiPoly]:
    """
    Normalize and project the curve along z.
    :param P1: First surface, polynomial in x, y, z
    :param P2: Second surface, coprime with P1
    :param shear: The shear to apply; the first normalizing shear when omitted
    :param sweep: A plane shear X := X + νY applied next; it moves the sweep
        direction of the projection and leaves the projection along z
    :return: The normalized input and h, squarefree part of Res_z(P1, P2)
    """
    P1, P2 = _check_input(P1, P2)
    if shear is None:
        candidates = islice(chain([ShearMap.space(0, 0)], space_shears()), NORMALIZATION_SEARCH)
        shear = next((s for s in candidates if is_normalized(s.apply(P1), s.apply(P2))), None)
        if shear is None:
            raise LeadingCoefficientVanishes('no shear makes the leading coefficients in z constant')
    Q1, Q2 = as_space(shear.apply(P1)), as_space(shear.apply(P2))
    if not is_normalized(Q1, Q2):
        raise LeadingCoefficientVanishes(
            f'lcoef_z = {Q1.leading_coefficient("z")}, {Q2.leading_coefficient("z")} after {shear}')
    if sweep is not None:
        Q1, Q2 = as_space(sweep.apply(Q1)), as_space(sweep.apply(Q2))
    chain_ = subres_chain(Q1, Q2, 'z', allow_swap=True)
    resultant = chain_.resultant
    if resultant.is_zero:
        raise CommonComponent(
            'input surfaces share a component: the resultant in z vanishes identically')
    h = as_plane(resultant.squarefree_part())
    Logger.debug('space: Projection computed(m=%d, deg h=%d)', chain_.q_degree, h.total_degree())
    return SpaceCurveInput(Q1, Q2, chain_.q_degree, chain_, shear, sweep), h


def delta_decomposition(inp: SpaceCurveInput) -> DeltaDecomposition:
    """
    Split the projection by the degree of the fiber gcd:
    Θ_0 = h, Θ_i = gcd(Θ_{i-1}, sr_i), Δ_i = Θ_{i-1} / Θ_i.
    :param inp: The normalized input
    :return: The decomposition, checked against h = ∏ Δ_i
    """
    h = as_plane(inp.chain.resultant.squarefree_part())
    theta = [h]
    for i in range(1, inp.m + 1):
        theta.append(as_plane(theta[-1].gcd(_xy(inp.chain.principal(i)))))
    try:
        delta = tuple(as_plane(theta[i - 1].exquo(theta[i]).normalized())
                      for i in range(1, inp.m + 1))
    except ArithmeticError as error:
        raise InternalDivisionNotExact(f'Θ sequence is not a divisor chain: {error}') from None
    if not theta[-1].is_constant:
        raise InternalDivisionNotExact(f'Θ_m = {theta[-1]} is not constant')
    product = MultiPoly(1)
    for factor in delta:
        product = product * factor
    if product.normalized() != h.normalized():
        raise InternalDivisionNotExact('h differs from the product of the Δ_i')
    return DeltaDecomposition(h, tuple(theta), delta)


def certify_pseudo_generic(inp: SpaceCurveInput, d: DeltaDecomposition) -> GenericityReport:
    """
    Certify that every point of Δ_i has a single preimage: for i = 1..m
    and j < i the residue of ``certificate_residue`` on the space chain
    vanishes modulo Δ_i.
    :return: The report, with the first failing (i, j) as witness
    """
    for i in range(1, inp.m + 1):
        modulus = d.Delta(i)
        if modulus.is_constant:
            continue
        for j in range(i):
            residue = _xy(certificate_residue(inp.chain, i, j))
            if not modulus.divides(residue):
                Logger.info('space: Pseudo-generic certificate failed(i=%d, j=%d)', i, j)
                return GenericityReport('non_generic',
                                        {'i': i, 'j': j, 'residue': str(residue.rem(modulus))},
                                        inp.shear_applied, 'pseudo_generic', inp.sweep_shear)
    return GenericityReport('generic', None, inp.shear_applied, 'pseudo_generic', inp.sweep_shear)


def _on_branch(p: MultiPoly, param: tuple[MultiPoly, MultiPoly], modulus: MultiPoly) -> MultiPoly:
    # p(x, β(x)) with the denominator cleared, reduced modulo Γ_j
    return clear(_xy(p), 'y', param).rem(modulus)


def classify_singularities(inp: SpaceCurveInput, plane: GammaDecomposition,
                           reports: tuple[GenericityReport, ...] = ()) -> SingularityClassification:
    """
    Split the roots of every Γ_j of the projection into real singularities
    and apparent ones through the gcd cascade u_k, v_k, w_{k,i}.
    :param inp: The normalized input
    :param plane: Γ decomposition of the projection
    :param reports: The pseudo-generic and plane-generic reports, both passed
    :return: The classification
    """
    passed = {r.certificate for r in reports if r.passed}
    if not {'pseudo_generic', 'plane_generic'} <= passed:
        raise NotCertified('classification needs the pseudo-generic and plane-generic certificates')
    result = SingularityClassification(inp.m, plane.d - 1)
    chain_ = inp.chain
    for j in range(1, plane.d):
        modulus = plane.Gamma(j)
        if modulus.is_constant:
            continue
        param = plane.params(j)
        result.params[j] = param
        u = modulus.gcd(_on_branch(chain_.principal(1), param, modulus))
        result.u[(j, 1)] = u
        result.real[(j, 1)] = modulus.exquo(u).normalized()
        for k in range(2, inp.m + 1):
            u_k = u.gcd(_on_branch(chain_.principal(k), param, modulus))
            v_k = u.exquo(u_k).normalized()
            w = v_k
            result.w[(j, k, 0)] = w
            for i in range(k):
                w = w.gcd(_on_branch(certificate_residue(chain_, k, i), param, modulus))
                result.w[(j, k, i + 1)] = w
            result.u[(j, k)], result.v[(j, k)] = u_k, v_k
            result.real[(j, k)] = w
            result.apparent[(j, k)] = v_k.exquo(w).normalized()
            u = u_k
        if not u.is_constant:
            raise InternalDivisionNotExact(f'u_m = {u} is not constant')
    Logger.debug('space: Singularities classified(%s)',
                 {key: str(value) for key, value in result.apparent.items() if not value.is_constant})
    return result


def _tangent_cone(h: MultiPoly, param: tuple[MultiPoly, MultiPoly]) -> tuple[MultiPoly, ...]:
    # Second derivatives of h at (x, β(x)), cleared with one common power
    h = _xy(h)
    e = h.degree('y')
    hxx, hxy, hyy = (clear(h.derivative(a).derivative(b), 'y', param, e)
                     for a, b in (('x', 'x'), ('x', 'y'), ('y', 'y')))
    return hxx, hxy, hyy


def certify_space_generic(classes: SingularityClassification, h: MultiPoly | None = None,
                          shear: ShearMap | None = None) -> GenericityReport:
    """
    Certify that the only apparent singularities are nodes: χ_{j,k} = 1 for
    j, k >= 2, and with ``h`` given every root of χ_{1,k} is a point where
    the tangent cone h_xy² - h_xx·h_yy of h does not vanish.
    :param classes: The singularity classification
    :param h: The projection, for the node check
    :param shear: Recorded in the report
    :return: The report, with the offending χ or node as witness
    """
    for j in range(2, classes.n + 1):
        for k in range(2, classes.m + 1):
            chi = classes.chi(j, k)
            if not chi.is_constant:
                Logger.info('space: Apparent singularity beyond a node(j=%d, k=%d)', j, k)
                return GenericityReport('non_generic', {'j': j, 'k': k, 'chi': str(chi)},
                                        shear, 'space_generic')
    if h is not None and 1 in classes.params:
        hxx, hxy, hyy = _tangent_cone(h, classes.params[1])
        discriminant = hxy * hxy - hxx * hyy
        for k in range(2, classes.m + 1):
            chi = classes.chi(1, k)
            if chi.is_constant:
                continue
            residue = discriminant.rem(chi)
            common = chi if residue.is_zero else chi.gcd(residue)
            if not common.is_constant:
                Logger.info('space: Apparent singularity is not a node(k=%d)', k)
                return GenericityReport('non_generic', {'j': 1, 'k': k, 'node': str(common)},
                                        shear, 'space_generic')
    return GenericityReport('generic', None, shear, 'space_generic')


def certify_space_curve(P1: MultiPoly, P2: MultiPoly, shear: ShearMap,
                        sweep: ShearMap | None = None) -> Certification | None:
    """
    Run the three certificates on the curve after ``shear`` and ``sweep``.
    :return: The certification, None when the shear does not normalize the input
    """
    try:
        inp, h = projected_curve(P1, P2, shear, sweep)
    except LeadingCoefficientVanishes:
        return None
    d = delta_decomposition(inp)
    pseudo = certify_pseudo_generic(inp, d)
    if not pseudo.passed:
        return Certification(inp, h, d, reports=(pseudo,))
    lead = h.leading_coefficient('y')
    if not lead.is_constant:
        report = GenericityReport('degenerate_lcoef', {'asymptote': f'lcoef_y = {lead}'},
                                  shear, 'plane_generic', sweep)
        return Certification(inp, h, d, reports=(pseudo, report))
    plane = gamma_decomposition(h)
    plane_report = replace(certify_plane_generic(h, plane), shear_applied=shear, sweep_shear=sweep)
    if not plane_report.passed:
        return Certification(inp, h, d, plane, reports=(pseudo, plane_report))
    classes = classify_singularities(inp, plane, (pseudo, plane_report))
    space_report = replace(certify_space_generic(classes, h, shear), sweep_shear=sweep)
    return Certification(inp, h, d, plane, classes, (pseudo, plane_report, space_report))


def lift_parameters(chain_: SubresultantChain, i: int) -> tuple[MultiPoly, MultiPoly]:
    """(A, B) = (-sr_{i,i-1}, i·sr_{i,i}), so that z = A / B on Δ_i."""
    return _xy(-chain_.sr(i, i - 1)), _xy(chain_.principal(i).scale(i))


def _enclose_ratio(A: MultiPoly, B: MultiPoly, y: FiberRoot,
                   width: Rational) -> tuple[Rational, Rational]:
    x = y.base
    for _ in range(ENCLOSURE_STEPS):
        box = {'x': x.enclosure(), 'y': y.enclosure()}
        denominator = intervals.evaluate(B, box)
        if intervals.excludes_zero(denominator):
            ends = intervals.bounds(intervals.evaluate(A, box) / denominator)
            if ends is not None and ends[1] - ends[0] <= width:
                return ends
        x = x.bisect()
        y = y.with_base(x).bisect()
    raise TopologyInconsistent(f'could not enclose ({A}) / ({B}) within {width}')


def _lift_by_param(chain_: SubresultantChain, i: int, y: FiberRoot,
                   width: Rational) -> ExactCoordinate:
    A, B = lift_parameters(chain_, i)
    if fiber_vanishes(B, y):
        raise ParamDenominatorVanishes(f'sr_{i},{i} vanishes at the point above {y.base}')
    subresultant = as_space(chain_.subresultant(i))
    if not fiber_vanishes(clear(subresultant, 'z', (A, B)), y):
        raise TopologyInconsistent(f'the lifted value is not a root of Sr_{i}')
    lo, hi = _enclose_ratio(A, B, y, width)
    return ExactCoordinate('z', subresultant, lo, hi, (A, B))


def lift_regular_point(d: DeltaDecomposition, chain_: SubresultantChain, y: FiberRoot,
                       width: Rational = Rational(1, 2 ** 30)) -> ExactCoordinate:
    """
    Lift a point of the projection lying on a single Δ_i with
    sr_{i,i} != 0 there: z = -sr_{i,i-1} / (i·sr_{i,i}).
    :param d: The Δ decomposition
    :param chain_: The space chain
    :param y: The point, a fiber root above its x-coordinate
    :param width: Width of the z enclosure
    :return: The z coordinate, verified to be a root of Sr_i
    """
    components = d.components()
    if len(components) > 1:
        components = [i for i in components if fiber_vanishes(d.Delta(i), y)]
    if len(components) != 1:
        raise TopologyInconsistent(f'the point above {y.base} lies on {len(components)} Δ factors')
    return _lift_by_param(chain_, components[0], y, width)


def lift_real_singular(chain_: SubresultantChain, k: int, y: FiberRoot,
                       width: Rational = Rational(1, 2 ** 30)) -> ExactCoordinate:
    """Lift a point with a single preimage and fiber gcd of degree k."""
    return _lift_by_param(chain_, k, y, width)


def point_regularity(inp: SpaceCurveInput, y: FiberRoot,
                     z: ExactCoordinate | FiberRoot) -> bool:
    """
    True when the Jacobian of (P1, P2) has rank 2 at the lifted point,
    decided exactly on its three 2×2 minors.
    """
    gradients = [[p.derivative(v) for v in SPACE_VARIABLES] for p in (inp.P1, inp.P2)]
    for a, b in ((0, 1), (0, 2), (1, 2)):
        minor = gradients[0][a] * gradients[1][b] - gradients[0][b] * gradients[1][a]
        if not vertex_vanishes(as_space(minor), y, z):
            return True
    return False


def vertex_vanishes(G: MultiPoly, y: FiberRoot, z: ExactCoordinate | FiberRoot) -> bool:
    """Exact test G(α, y, z) = 0 at a lifted point."""
    G = as_space(G)
    if isinstance(z, FiberRoot):
        return fiber_vanishes(clear(G, 'y', y.param), z)
    return fiber_vanishes(clear(G, 'z', z.param), y)


def _first_order(A: MultiPoly, B: MultiPoly, param: tuple[MultiPoly, MultiPoly]) \
        -> tuple[MultiPoly, ...]:
    derivatives = [A.derivative('x'), A.derivative('y'), B.derivative('x'), B.derivative('y')]
    e = max(max(g.degree('y') for g in derivatives), 0)
    return tuple(clear(_xy(g), 'y', param, e) for g in derivatives)


def _approx_ratio(num: MultiPoly, den: MultiPoly, alpha: RealAlgebraicNumber) -> str:
    for _ in range(ENCLOSURE_STEPS):
        box = {'x': alpha.enclosure()}
        denominator = intervals.evaluate(den, box)
        if intervals.excludes_zero(denominator):
            ends = intervals.bounds(intervals.evaluate(num, box) / denominator)
            if ends is not None:
                return intervals.decimal((ends[0] + ends[1]) / 2)
        alpha = alpha.bisect()
    return 'nan'


def _crossing(inp: SpaceCurveInput, d: DeltaDecomposition, components: list[int],
              alpha: RealAlgebraicNumber, param: tuple[MultiPoly, MultiPoly],
              roots: list[FiberRoot]) -> tuple[tuple[int, int], tuple[str, str]]:
    # Branches on two different components: slopes and limits lie in Q(α)
    branches = []
    for i in components:
        delta = d.Delta(i)
        e = delta.degree('y')
        dx = clear(delta.derivative('x'), 'y', param, e)
        dy = clear(delta.derivative('y'), 'y', param, e)
        if sign_at(dy, alpha) == 0:
            raise LimitUndetermined(f'Δ_{i} has a vertical tangent above {alpha}')
        p, q = -dx, dy
        A, B = lift_parameters(inp.chain, i)
        e = max(A.degree('y'), B.degree('y'), 0)
        a, b = clear(A, 'y', param, e), clear(B, 'y', param, e)
        if sign_at(b, alpha) == 0:
            if sign_at(a, alpha) != 0:
                raise TopologyInconsistent(f'Δ_{i} has no finite lift above {alpha}')
            ax, ay, bx, by = _first_order(A, B, param)
            a, b = ax * q + ay * p, bx * q + by * p
            if sign_at(b, alpha) == 0:
                raise LimitUndetermined(f'first-order limit along Δ_{i} is undetermined')
        branches.append((p, q, locate_param(roots, (a, b))))
    (p1, q1, r1), (p2, q2, r2) = branches
    order = sign_at(p1 * q2 - p2 * q1, alpha) * sign_at(q1 * q2, alpha)
    if order == 0:
        raise NotANode(f'the branches above {alpha} share their tangent')
    if r1 == r2:
        raise TopologyInconsistent(f'both branches above {alpha} lift to the same point')
    slopes = (_approx_ratio(p1, q1, alpha), _approx_ratio(p2, q2, alpha))
    if order < 0:
        return (r1, r2), slopes
    return (r2, r1), (slopes[1], slopes[0])


def _self_crossing(inp: SpaceCurveInput, d: DeltaDecomposition, i: int,
                   alpha: RealAlgebraicNumber, param: tuple[MultiPoly, MultiPoly],
                   roots: list[FiberRoot], refinements: int) \
        -> tuple[tuple[int, int], tuple[str, str]]:
    # Both branches on Δ_i: slopes (-hxy ± √disc) / hyy lie in Q(α, √disc)
    hxx, hxy, hyy = _tangent_cone(d.Delta(i), param)
    disc = hxy * hxy - hxx * hyy
    s_disc = sign_at(disc, alpha)
    if s_disc == 0:
        raise NotANode(f'the tangent cone of Δ_{i} above {alpha} is a double line')
    if s_disc < 0:
        raise TopologyInconsistent(f'real lifts above the isolated point at {alpha}')
    s_hyy = sign_at(hyy, alpha)
    if s_hyy == 0:
        raise LimitUndetermined(f'Δ_{i} has a vertical tangent above {alpha}')
    A, B = lift_parameters(inp.chain, i)
    e = max(A.degree('y'), B.degree('y'), 0)
    if sign_at(clear(B, 'y', param, e), alpha) != 0:
        raise TopologyInconsistent(f'both branches of Δ_{i} above {alpha} have the same lift')
    ax, ay, bx, by = _first_order(A, B, param)
    pa, qa = hyy * ax - hxy * ay, ay
    pb, qb = hyy * bx - hxy * by, by
    # pb + s·qb·√disc vanishes iff pb² = qb²·disc with pb of sign -s·sign(qb)
    if sign_at(pb * pb - qb * qb * disc, alpha) == 0:
        for s in (-1, 1):
            if sign_at(pb, alpha) == -s * sign_at(qb, alpha):
                raise LimitUndetermined(f'first-order limit along Δ_{i} is undetermined')

    polys = (pa, qa, pb, qb, disc, hxy, hyy)
    for _ in range(refinements):
        box = {'x': alpha.enclosure()}
        values = [intervals.evaluate(p, box) for p in polys]
        if intervals.sign_of(values[4]) > 0 and intervals.excludes_zero(values[6]):
            root = iv.sqrt(values[4])
            hits = {}
            for s in (-1, 1):
                ratio = (values[0] + s * values[1] * root) / (values[2] + s * values[3] * root)
                hits[s] = [n for n, r in enumerate(roots) if not intervals.disjoint(ratio, r.lo, r.hi)]
            if len(hits[-1]) == 1 and len(hits[1]) == 1:
                if hits[-1] == hits[1]:
                    raise TopologyInconsistent(f'both branches above {alpha} lift to the same point')
                slopes = {s: intervals.decimal(
                    sum(intervals.bounds((-values[5] + s * root) / values[6])) / 2) for s in (-1, 1)}
                low, high = (-1, 1) if s_hyy > 0 else (1, -1)
                return (hits[low][0], hits[high][0]), (slopes[low], slopes[high])
        alpha = alpha.bisect()
        roots = [r.with_base(alpha).bisect() for r in roots]
    raise LimitUndetermined(f'limits above {alpha} not separated after {refinements} refinements')


def lift_apparent(inp: SpaceCurveInput, d: DeltaDecomposition, k: int, y: FiberRoot,
                  policy: ShearRetryPolicy = ShearRetryPolicy()) -> ApparentLift:
    """
    Lift an apparent node: the real roots of Sr_k(α, β, z), and which of
    them each branch through the node tends to, decided by the limits of
    z = A / B along the branch tangents.
    :param inp: The normalized input
    :param d: The Δ decomposition
    :param k: Degree of the fiber gcd at the node
    :param y: The node, a fiber root carrying its parametrization
    :param policy: Bounds the interval refinements
    :return: The lift; no roots for an acnode
    """
    alpha, param = y.base, y.param
    fiber = reduce_modulo(clear(as_space(inp.chain.subresultant(k)), 'y', param),
                          'z', alpha.defining)
    found = fiber_gcd(fiber, fiber.derivative('z'), 'z', alpha)
    if found is not None and found[0] > 0:
        fiber = reduce_modulo(fiber.pseudo_quotient(found[1], 'z'), 'z', alpha.defining)
    roots = isolate_fiber_roots(fiber, 'z', alpha)
    components = [i for i in d.components()
                  if sign_at(clear(d.Delta(i), 'y', param), alpha) == 0]
    if not roots:
        Logger.info('space: Acnode dropped(%s)', alpha)
        return ApparentLift((), (), tuple(components))
    if len(roots) != 2:
        raise TopologyInconsistent(f'{len(roots)} real lifts above the node at {alpha}')
    if len(components) == 2:
        expected = sum(components)
    elif len(components) == 1:
        expected = 2 * components[0]
    else:
        raise TopologyInconsistent(f'the node at {alpha} lies on {len(components)} Δ factors')
    if expected != k:
        raise TopologyInconsistent(f'fiber gcd of degree {k} at a crossing of degree {expected}')
    if len(components) == 2:
        ordered, slopes = _crossing(inp, d, components, alpha, param, roots)
    else:
        ordered, slopes = _self_crossing(inp, d, components[0], alpha, param, roots,
                                         policy.limit_refinements)
    for root in roots:
        if not (vertex_vanishes(inp.P1, y, root) and vertex_vanishes(inp.P2, y, root)):
            raise TopologyInconsistent(f'a lift above {alpha} is not on the curve')
    return ApparentLift(tuple(roots), ordered, tuple(components), slopes)


def _approximations(x: RealAlgebraicNumber, y: FiberRoot, z: ExactCoordinate | FiberRoot,
                    width: Rational) -> tuple[str, str, str]:
    if isinstance(z, FiberRoot):
        z_mid = z.refine(width).midpoint
    else:
        z_mid = (z.lo + z.hi) / 2
    return (intervals.decimal(refine(x, width).midpoint),
            intervals.decimal(y.refine(width).midpoint),
            intervals.decimal(z_mid))


def lift_fiber(context: LiftContext, position: int) -> LiftedFiber:
    """
    Lift every point of one plane fiber. Runs in worker processes.
    :param context: The certified input and the plane fibers
    :param position: Index of the fiber to lift
    :return: The lifted fiber
    """
    fiber = context.fibers[position]
    width = context.policy.refine_width
    x = refine(fiber.x, width)
    chain_ = context.inp.chain
    points, slopes = [], ()
    try:
        for index, y in enumerate(fiber.points):
            if index != fiber.critical_index:
                z = lift_regular_point(context.delta, chain_, y, width)
                points.append(LiftedPoint(index, y, z, _approximations(x, y, z, width),
                                          fiber.kinds[index], 'regular_param'))
                continue
            status, k = context.classification.classify(fiber.multiple_point_k, fiber.x)
            if status == 'real':
                z = lift_real_singular(chain_, k, y, width)
                kind = 'x_critical' if point_regularity(context.inp, y, z) else 'real_singular'
                points.append(LiftedPoint(index, y, z, _approximations(x, y, z, width),
                                          kind, f'real_singular_param({k})'))
                continue
            lift = lift_apparent(context.inp, context.delta, k, y, context.policy)
            branches = lift.branches
            slopes = lift.slopes
            for n, root in enumerate(lift.roots):
                points.append(LiftedPoint(index, y, root, _approximations(x, y, root, width),
                                          'apparent_lift', 'apparent_pair',
                                          tuple(sorted(b for b, r in branches.items() if r == n))))
    except Exception:
        Logger.exception('space: Error while lifting fiber(%s)', fiber.x)
        raise
    return LiftedFiber(fiber, tuple(points), tuple(slopes))


def lift_fibers(context: LiftContext, processes: int = 0) -> list[LiftedFiber]:
    """Lift every fiber, in a process pool when ``processes`` > 1."""
    tasks = [(context, position) for position in range(len(context.fibers))]
    if processes > 1 and len(tasks) > 1:
        pickling_support.install()
        with multiprocessing.Pool(processes=min(processes, len(tasks))) as pool:
            return pool.starmap(lift_fiber, tasks)
    return [lift_fiber(*task) for task in tasks]


def _assemble(plane: PlaneTopology, lifted: list[LiftedFiber], certificates: dict,
              frame: tuple[ShearMap, ...], trail: tuple) -> PLSGraph:
    ids, vertices = {}, []
    for f, fiber in enumerate(lifted):
        for pos, point in enumerate(fiber.points):
            ids[(f, pos)] = len(vertices)
            vertices.append(PLSVertex(len(vertices), (fiber.base.x, point.y, point.z),
                                      point.approx, point.kind))
    edges = []
    for edge in plane.sweep:
        r_fiber, r_index = edge.regular
        c_fiber, c_index = edge.critical
        start = ids[(r_fiber, lifted[r_fiber].position(r_index))]
        end = ids[(c_fiber, lifted[c_fiber].position(c_index, edge.side, edge.rank))]
        edges.append((start, end))
    return PLSGraph(3, tuple(vertices), tuple(edges), certificates, frame, trail)


def _lift_topology(cert: Certification, policy: ShearRetryPolicy,
                   trail: tuple[GenericityReport, ...]) -> SpaceTopology:
    plane = build_plane_topology(cert.h, cert.plane, cert.reports[1], policy.refine_width,
                                 trail=trail)
    context = LiftContext(cert.inp, cert.delta, cert.classification, plane.fibers, policy)
    lifted = lift_fibers(context, policy.processes)
    certificates = {r.certificate: 'passed' for r in cert.reports}
    certificates['shears'] = [r.as_dict() for r in trail]
    graph = _assemble(plane, lifted, certificates, cert.inp.frame, trail)
    Logger.info('space: Topology computed(%d vertices, %d edges)',
                len(graph.vertices), len(graph.edges))
    return SpaceTopology(cert, plane, tuple(lifted), graph, trail)


def compute_space_topology(P1: MultiPoly, P2: MultiPoly,
                           policy: ShearRetryPolicy = ShearRetryPolicy()) -> SpaceTopology:
    """
    Shear search, certificates, plane topology of the projection and lifting.
    A projection whose only fault is the plane certificate is kept and its
    sweep direction changed with X := X + νY before the next space shear.
    :param P1: First surface
    :param P2: Second surface, coprime with P1
    :param policy: Shear budget and precision; the budget counts every
        certification after the first
    :return: The space topology, its graph included
    """
    P1, P2 = _check_input(P1, P2)
    trail, tried = [], 0
    for shear in chain([ShearMap.space(0, 0)], space_shears()):
        for sweep in chain([None], plane_shears()):
            if tried > policy.budget:
                raise ShearBudgetExhausted(
                    f'no shear among {policy.budget + 1} candidates was certified')
            tried += 1
            cert = certify_space_curve(P1, P2, shear, sweep)
            if cert is None:
                trail.append(GenericityReport('degenerate_lcoef', {'lcoef_z': 'not constant'},
                                              shear, 'pseudo_generic'))
                break
            trail.extend(cert.reports)
            if cert.passed:
                Logger.info('space: Certificates passed(%s)', ', '.join(map(str, cert.inp.frame)))
                try:
                    return _lift_topology(cert, policy, tuple(trail))
                except (LimitUndetermined, NotANode) as error:
                    Logger.info('space: Lifting failed, next shear(%s)', error)
                    trail.append(GenericityReport('non_generic', {'lift': str(error)}, shear,
                                                  'space_generic', sweep))
                break
            if not cert.plane_failed:
                break


def space_topology(P1: MultiPoly, P2: MultiPoly,
                   policy: ShearRetryPolicy = ShearRetryPolicy()) -> PLSGraph:
    """
    Certified graph isotopic to the space curve P1 = P2 = 0.
    :param P1: First surface
    :param P2: Second surface, coprime with P1
    :param policy: Shear budget and precision
    :return: The 3D graph
    """
    return compute_space_topology(P1, P2, policy).graph
