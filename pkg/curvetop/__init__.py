"""
curvetop: certified topology of real plane curves f(x, y) = 0 and of
space curves P1 = P2 = 0, computed with subresultant sequences over a
single projection.
"""

__version__ = '0.1'

from curvetop.errors import *
from curvetop.polynomial import MultiPoly, ShearMap, plane_shears, space_shears
from curvetop.grammar import parse_polynomial
from curvetop.subresultant import SubresultantChain, subres_chain, gcd_via_chain
from curvetop.real_roots import (RealAlgebraicNumber, IsolationResult, isolate_real_roots, refine,
                                 sign_at, compare, approximate)
from curvetop.graph import PLSGraph, PLSVertex, component_stats, export, load_json, canonical_json
from curvetop.plane import (ShearRetryPolicy, GammaDecomposition, GenericityReport, PlaneFiber,
                            gamma_decomposition, certify_plane_generic, critical_fibers,
                            plane_topology)
from curvetop.space import (SpaceCurveInput, DeltaDecomposition, SingularityClassification,
                            LiftedFiber, projected_curve, delta_decomposition,
                            certify_pseudo_generic, lift_regular_point, classify_singularities,
                            certify_space_generic, lift_apparent, space_topology)
