"""One-inclusion hypergraph prediction with an exactly optimal orientation.

Vertices are the fully defined label vectors a class realizes on a point
set; a hyperedge collects the vertices that agree everywhere except one
coordinate.  Orienting a hyperedge means picking its head; a vertex's
out-degree counts the hyperedges through it whose head is elsewhere.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import networkx as nx

from .core import ConceptClass, LabeledSample, is_realizable, project
from .dimensions import natarajan_dim
from .errors import InputError, ProtocolError

Vector = tuple[int, ...]


@dataclass
class OneInclusionGraph:
    points: tuple[int, ...]
    vertices: tuple[Vector, ...]
    edges: list[tuple[int, tuple[int, ...]]]  # (free coordinate, member vertex indices)
    heads: Optional[list[int]] = None  # chosen vertex index per edge, once oriented
    _vindex: dict = field(default=None, repr=False)

    def __post_init__(self):
        self._vindex = {v: i for i, v in enumerate(self.vertices)}

    def vertex_id(self, v: Vector) -> Optional[int]:
        return self._vindex.get(v)

    def degrees(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for _, members in self.edges:
            for v in members:
                deg[v] += 1
        return deg

    def out_degrees(self, heads: Optional[Sequence[int]] = None) -> list[int]:
        heads = self.heads if heads is None else heads
        if heads is None:
            raise InputError("graph is not oriented")
        out = [0] * len(self.vertices)
        for (_, members), h in zip(self.edges, heads):
            for v in members:
                if v != h:
                    out[v] += 1
        return out

    def edge_at(self, v: int, coord: int) -> Optional[int]:
        """Index of the hyperedge through vertex ``v`` with free coordinate ``coord``."""
        return self._edge_lookup.get((v, coord))

    @property
    def _edge_lookup(self) -> dict:
        lookup = self.__dict__.get("_lookup")
        if lookup is None:
            lookup = {}
            for e, (c, members) in enumerate(self.edges):
                for v in members:
                    lookup[(v, c)] = e
            self.__dict__["_lookup"] = lookup
        return lookup


@dataclass(frozen=True)
class OrientationReport:
    max_out_degree: int
    natarajan: int
    bound: float  # Ndim * max(1, log2(k+1))
    within_bound: bool


def graph_from_vectors(points: Sequence[int], vectors: Iterable[Vector]) -> OneInclusionGraph:
    vertices = tuple(sorted(set(vectors)))
    edges = []
    for c in range(len(points)):
        groups = defaultdict(list)
        for i, v in enumerate(vertices):
            groups[v[:c] + v[c + 1:]].append(i)
        for key in sorted(groups):
            if len(groups[key]) >= 2:
                edges.append((c, tuple(groups[key])))
    return OneInclusionGraph(tuple(points), vertices, edges)


def build_graph(cls: ConceptClass, points: Sequence[int]) -> OneInclusionGraph:
    """One-inclusion graph of the class projected on ``points`` (defined vectors only)."""
    return graph_from_vectors(points, project(cls, points))


def _feasible(graph: OneInclusionGraph, deg: list[int], d: int) -> Optional[list[int]]:
    """Heads giving every vertex out-degree <= d, or None."""
    demand = [max(0, g - d) for g in deg]
    total = sum(demand)
    heads = [members[0] for _, members in graph.edges]
    if total == 0:
        return heads
    if total > len(graph.edges):
        return None
    net = nx.DiGraph()
    for e, (_, members) in enumerate(graph.edges):
        net.add_edge("s", ("e", e), capacity=1)
        for v in members:
            if demand[v]:
                net.add_edge(("e", e), ("v", v), capacity=1)
    for v, dem in enumerate(demand):
        if dem:
            net.add_edge(("v", v), "t", capacity=dem)
    value, flow = nx.maximum_flow(net, "s", "t")
    if value < total:
        return None
    for e in range(len(graph.edges)):
        for node, f in flow.get(("e", e), {}).items():
            if f > 0:
                heads[e] = node[1]
    return heads


def min_max_orientation(graph: OneInclusionGraph) -> tuple[int, list[int]]:
    deg = graph.degrees()
    lo, hi = 0, max(deg, default=0)
    best = _feasible(graph, deg, hi)
    while lo < hi:
        mid = (lo + hi) // 2
        heads = _feasible(graph, deg, mid)
        if heads is None:
            lo = mid + 1
        else:
            hi, best = mid, heads
    if best is None or hi != lo:
        best = _feasible(graph, deg, lo)
    return lo, best


def loo_bound(ndim: int, k: int) -> float:
    return ndim * max(1.0, math.log2(k + 1))


def orient(graph: OneInclusionGraph, k: int = 1) -> tuple[OrientationReport, OneInclusionGraph]:
    """Exact min-max out-degree orientation (binary search over d, max-flow feasibility)."""
    d, heads = min_max_orientation(graph)
    graph.heads = heads
    proj = ConceptClass(k, max(1, len(graph.points)), graph.vertices) if graph.vertices and graph.points else None
    ndim = natarajan_dim(proj) if proj is not None else (0 if graph.vertices else -1)
    bound = loo_bound(max(ndim, 0), k)
    return OrientationReport(d, ndim, bound, d <= bound), graph


def partial_completion_class(cls: ConceptClass, points: Sequence[int]) -> ConceptClass:
    """Total labelings of ``points`` realized by some hypothesis defined on all of them.

    The result lives on the domain ``0..len(points)-1`` (position i is points[i]);
    it is empty when no hypothesis covers every point.
    """
    if not cls.partial:
        raise InputError("partial_completion_class expects a partial class")
    return ConceptClass(cls.k, len(points), tuple(project(cls, points)))


class OneInclusionPredictor:
    """Transductive predictor; orientations are cached per point set."""

    def __init__(self, cls: ConceptClass):
        self.cls = cls
        self._graphs: dict[tuple[int, ...], OneInclusionGraph] = {}

    def graph(self, points: tuple[int, ...]) -> OneInclusionGraph:
        g = self._graphs.get(points)
        if g is None:
            g = build_graph(self.cls, points)
            orient(g, self.cls.k)
            self._graphs[points] = g
        return g

    def predict(self, labeled: LabeledSample | Iterable[tuple[int, int]], test: int) -> int:
        cls = self.cls
        cls.check_point(test)
        known: dict[int, int] = {}
        for x, y in labeled:
            cls.check_point(x)
            cls.check_label(y)
            if known.setdefault(x, y) != y:
                raise ProtocolError(f"point {x} is labeled both {known[x]} and {y}")
        if not is_realizable(cls, known.items()):
            raise ProtocolError("labeled sample is not realizable by the class")
        if test in known:
            return known[test]
        points = tuple(sorted(set(known) | {test}))
        g = self.graph(points)
        if not g.vertices:
            return 0  # no hypothesis is defined on every point
        tpos = points.index(test)
        fixed = [(i, known[x]) for i, x in enumerate(points) if i != tpos]
        consistent = [i for i, v in enumerate(g.vertices) if all(v[c] == y for c, y in fixed)]
        if not consistent:
            return 0
        if len(consistent) == 1:
            return g.vertices[consistent[0]][tpos]
        # the consistent vertices are exactly the hyperedge through test's coordinate
        e = g.edge_at(consistent[0], tpos)
        return g.vertices[g.heads[e]][tpos]


def predict(cls: ConceptClass, labeled: LabeledSample | Iterable[tuple[int, int]], test: int) -> int:
    return OneInclusionPredictor(cls).predict(labeled, test)


@dataclass(frozen=True)
class LOOReport:
    points: tuple[int, ...]
    labelings: int
    worst_mistakes: int
    error: float  # worst fraction of leave-one-out mistakes
    bound: float  # Ndim * max(1, log2(k+1)) / (n+1)
    strict_ok: bool
    slack_ok: bool  # within a factor 2 of the bound


def loo_report(cls: ConceptClass, points: Sequence[int]) -> LOOReport:
    """Exact cyclic leave-one-out over every realizable labeling of ``points``."""
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise InputError("points must be distinct")
    pred = OneInclusionPredictor(cls)
    vectors = sorted(project(cls, pts))
    proj = ConceptClass(cls.k, len(pts), tuple(vectors)) if vectors else None
    ndim = natarajan_dim(proj) if proj else -1
    worst = 0
    for v in vectors:
        mistakes = 0
        for i, x in enumerate(pts):
            rest = [(pts[j], v[j]) for j in range(len(pts)) if j != i]
            if pred.predict(rest, x) != v[i]:
                mistakes += 1
        worst = max(worst, mistakes)
    m = len(pts)
    bound = loo_bound(max(ndim, 0), cls.k) / m
    err = worst / m
    return LOOReport(pts, len(vectors), worst, err, bound, err <= bound + 1e-12, err <= 2 * bound + 1e-12)
