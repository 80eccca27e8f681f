# -*- coding: utf-8 -*-
"""
The piecewise-linear graph produced by the plane and space pipelines,
its structural statistics, and the JSON and OBJ exporters.
"""

import datetime
import json
from dataclasses import dataclass, field

import numpy as np
from sympy import Rational

from curvetop import __version__, intervals
from curvetop.errors import TopologyInconsistent
from curvetop.polynomial import MultiPoly, ShearMap

GENERATOR = 'curvetop'
KINDS: tuple[str, ...] = ('regular', 'x_critical', 'real_singular', 'apparent_lift', 'sweep_regular')
CERTIFICATES: tuple[str, ...] = ('pseudo_generic', 'plane_generic', 'space_generic')


@dataclass(frozen=True)
class ExactCoordinate:
    """
    A coordinate as exported: a root of ``defining`` (a polynomial in this
    and the previous coordinates) isolated in [lo, hi], optionally given by
    the parametrization numerator / denominator of the previous ones.
    """
    variable: str
    defining: MultiPoly
    lo: Rational
    hi: Rational
    param: tuple[MultiPoly, MultiPoly] | None = None

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    def to_dict(self) -> dict:
        data = {'variable': self.variable, 'defining': self.defining.to_dict(),
                'interval': [str(self.lo), str(self.hi)]}
        if self.param is not None:
            data['parametrization'] = {'numerator': self.param[0].to_dict(),
                                       'denominator': self.param[1].to_dict()}
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'ExactCoordinate':
        param = data.get('parametrization')
        if param is not None:
            param = (MultiPoly.from_dict(param['numerator']),
                     MultiPoly.from_dict(param['denominator']))
        lo, hi = (Rational(end) for end in data['interval'])
        return cls(data['variable'], MultiPoly.from_dict(data['defining']), lo, hi, param)


@dataclass(frozen=True)
class PLSVertex:
    id: int
    coords: tuple
    approx: tuple[str, ...]
    kind: str

    def to_dict(self) -> dict:
        return {'id': self.id, 'kind': self.kind,
                'exact': [c.to_dict() for c in self.coords],
                'approx': list(self.approx)}


@dataclass(frozen=True)
class ComponentStats:
    components: int
    cycle_rank: int
    degree_histogram: dict[int, int]


@dataclass(frozen=True)
class PLSGraph:
    """
    Vertices carry exact coordinates and approximations in the certified
    frame; ``frame`` lists the shears that map it back to the input frame,
    in the order they were applied to the input. Edges are unordered and
    stored as sorted pairs.
    """
    dimension: int
    vertices: tuple[PLSVertex, ...]
    edges: tuple[tuple[int, int], ...]
    certificates: dict = field(default_factory=dict)
    frame: tuple[ShearMap, ...] = ()
    trail: tuple = ()

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise TopologyInconsistent(f'dimension {self.dimension} is neither 2 nor 3')
        for index, vertex in enumerate(self.vertices):
            if vertex.id != index:
                raise TopologyInconsistent(f'vertex {vertex.id} stored at position {index}')
            if vertex.kind not in KINDS:
                raise TopologyInconsistent(f'unknown vertex kind {vertex.kind!r}')
            if len(vertex.coords) != self.dimension or len(vertex.approx) != self.dimension:
                raise TopologyInconsistent(f'vertex {vertex.id} has the wrong number of coordinates')
        edges = tuple(sorted({tuple(sorted(edge)) for edge in self.edges}))
        if len(edges) != len(self.edges):
            raise TopologyInconsistent('duplicate edge')
        for a, b in edges:
            if a == b:
                raise TopologyInconsistent(f'self-loop at vertex {a}')
            if not (0 <= a < len(self.vertices) and 0 <= b < len(self.vertices)):
                raise TopologyInconsistent(f'edge ({a}, {b}) refers to a missing vertex')
        object.__setattr__(self, 'edges', edges)

    def degrees(self) -> np.ndarray:
        ends = np.array(self.edges, dtype=np.int64).reshape(-1)
        return np.bincount(ends, minlength=len(self.vertices))

    def approx_in_input_frame(self, vertex: PLSVertex) -> tuple:
        point = tuple(intervals.parse_decimal(a) for a in vertex.approx)
        for shear in reversed(self.frame):
            point = shear.unapply_point(point, intervals.to_mpf)
        return point


class _DisjointSet:

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, item: int) -> int:
        while self.parent[item] != item:
            self.parent[item] = self.parent[self.parent[item]]
            item = self.parent[item]
        return item

    def union(self, a: int, b: int):
        self.parent[self.find(a)] = self.find(b)


def component_stats(g: PLSGraph) -> ComponentStats:
    """
    Connected components, cycle rank E - V + C and the degree histogram.
    :param g: The graph
    :return: The statistics
    """
    sets = _DisjointSet(len(g.vertices))
    for a, b in g.edges:
        sets.union(a, b)
    components = len({sets.find(v) for v in range(len(g.vertices))})
    histogram = np.bincount(g.degrees()) if g.vertices else np.zeros(0, dtype=np.int64)
    return ComponentStats(components, len(g.edges) - len(g.vertices) + components,
                          {degree: int(count) for degree, count in enumerate(histogram) if count})


def _document(g: PLSGraph, timestamp: str | None) -> dict:
    certificates = {name: g.certificates.get(name) for name in CERTIFICATES}
    certificates['shears'] = list(g.certificates.get('shears', []))
    metadata = {'generator': GENERATOR, 'version': str(__version__)}
    if timestamp is not None:
        metadata['timestamp'] = timestamp
    metadata['frame'] = [shear.as_dict() for shear in g.frame]
    return {'dimension': g.dimension,
            'vertices': [vertex.to_dict() for vertex in g.vertices],
            'edges': [list(edge) for edge in g.edges],
            'certificates': certificates,
            'metadata': metadata}


def to_json(g: PLSGraph, timestamp: str | None = None) -> bytes:
    """
    JSON export. The timestamp defaults to the current UTC time in ISO 8601.
    """
    if timestamp is None:
        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec='seconds')
    return json.dumps(_document(g, timestamp), indent=2, ensure_ascii=False).encode('utf-8')


def canonical_json(g: PLSGraph) -> bytes:
    """JSON export without the timestamp; equal graphs give equal bytes."""
    return json.dumps(_document(g, None), indent=2, ensure_ascii=False).encode('utf-8')


def to_obj(g: PLSGraph) -> bytes:
    """
    OBJ export: one ``v x y z`` record per vertex from the approximations
    mapped back to the input frame (z = 0 in 2D) and one ``l i j`` record
    per edge, 1-based.
    """
    lines = [f'# {GENERATOR} {g.dimension}D graph: {len(g.vertices)} vertices, {len(g.edges)} edges']
    for vertex in g.vertices:
        point = [intervals.decimal(c) for c in g.approx_in_input_frame(vertex)]
        if g.dimension == 2:
            point.append('0')
        lines.append('v ' + ' '.join(point))
    for a, b in g.edges:
        lines.append(f'l {a + 1} {b + 1}')
    return ('\n'.join(lines) + '\n').encode('ascii')


def export(g: PLSGraph, fmt: str = 'json') -> bytes:
    """
    Serialize a graph.
    :param g: The graph
    :param fmt: ``json`` or ``obj``
    :return: The byte stream
    """
    if fmt == 'json':
        return to_json(g)
    if fmt == 'obj':
        return to_obj(g)
    raise ValueError(f'unknown export format {fmt!r}')


def load_json(data: bytes | str) -> PLSGraph:
    """
    Import a JSON export. Coordinates come back as ExactCoordinate records.
    :param data: The JSON document
    :return: The graph
    """
    document = json.loads(data)
    try:
        vertices = tuple(
            PLSVertex(int(item['id']),
                      tuple(ExactCoordinate.from_dict(c) for c in item['exact']),
                      tuple(str(a) for a in item['approx']),
                      item['kind'])
            for item in document['vertices'])
        frame = tuple(ShearMap(s['kind'], Rational(s['lambda']),
                               Rational(s['mu']) if 'mu' in s else None)
                      for s in document.get('metadata', {}).get('frame', []))
        return PLSGraph(int(document['dimension']), vertices,
                        tuple((int(a), int(b)) for a, b in document['edges']),
                        dict(document.get('certificates', {})), frame)
    except (KeyError, TypeError) as error:
        raise ValueError(f'malformed graph document: {error}') from None
