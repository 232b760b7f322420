"""
Reeb digraph data model and fundamental queries.

A Reeb digraph is a finite directed multigraph whose edges point towards
increasing function value. Heights, when present, are exact rationals.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import MultiDiGraphMatcher

from .errors import PreconditionError, StructuralError, ValidityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    """A directed edge record; parallel edges differ only by id."""

    id: str
    src: str
    dst: str


@dataclass(frozen=True, eq=True)
class ReebDigraph:
    """
    Directed multigraph with optional rational heights.

    Construction checks only structure (unique ids, resolvable endpoints,
    heights covering every vertex). Goodness is a verdict of
    ``validate_good_digraph``, not a constructor invariant, so that invalid
    candidates can be reported on cleanly.
    """

    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    heights: Optional[Dict[str, Fraction]] = field(default=None, hash=False)

    def __post_init__(self):
        seen: Set[str] = set()
        for v in self.vertices:
            if v in seen:
                raise StructuralError(f"Duplicate vertex id: {v!r}", element_id=v)
            seen.add(v)
        edge_ids: Set[str] = set()
        for e in self.edges:
            if e.id in edge_ids:
                raise StructuralError(f"Duplicate edge id: {e.id!r}", element_id=e.id)
            edge_ids.add(e.id)
            for end in (e.src, e.dst):
                if end not in seen:
                    raise StructuralError(
                        f"Edge {e.id!r} references unknown vertex {end!r}",
                        element_id=end,
                    )
        if self.heights is not None:
            missing = [v for v in self.vertices if v not in self.heights]
            extra = [v for v in self.heights if v not in seen]
            if missing:
                raise StructuralError(
                    f"Heights missing for vertex {missing[0]!r}", element_id=missing[0]
                )
            if extra:
                raise StructuralError(
                    f"Height given for unknown vertex {extra[0]!r}", element_id=extra[0]
                )
            object.__setattr__(
                self, "heights", {v: Fraction(h) for v, h in self.heights.items()}
            )

    @classmethod
    def build(
        cls,
        vertices: Iterable[str],
        edges: Iterable[Tuple[str, str, str]],
        heights: Optional[Dict[str, Union[Fraction, int, str]]] = None,
    ) -> "ReebDigraph":
        """
        Convenience constructor from plain tuples.

        Args:
            vertices: Vertex ids
            edges: ``(edge_id, src, dst)`` triples
            heights: Optional map vertex id -> rational (Fraction, int or "p/q")

        Returns:
            ReebDigraph
        """
        h = None
        if heights is not None:
            h = {v: Fraction(x) for v, x in heights.items()}
        return cls(
            vertices=tuple(vertices),
            edges=tuple(Edge(i, s, d) for i, s, d in edges),
            heights=h,
        )

    @cached_property
    def _edge_index(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _in_edges(self) -> Dict[str, List[str]]:
        table: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            table[e.dst].append(e.id)
        return table

    @cached_property
    def _out_edges(self) -> Dict[str, List[str]]:
        table: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            table[e.src].append(e.id)
        return table

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise StructuralError(f"Unknown edge id: {edge_id!r}", element_id=edge_id)

    def has_vertex(self, v: str) -> bool:
        return v in self._in_edges

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edge_index

    def in_edges(self, v: str) -> List[str]:
        return self._in_edges[v]

    def out_edges(self, v: str) -> List[str]:
        return self._out_edges[v]

    def in_degree(self, v: str) -> int:
        return len(self._in_edges[v])

    def out_degree(self, v: str) -> int:
        return len(self._out_edges[v])

    def degree(self, v: str) -> int:
        """Number of incident edge-ends; a self-loop counts twice."""
        return self.in_degree(v) + self.out_degree(v)

    def height(self, v: str) -> Fraction:
        if self.heights is None:
            raise PreconditionError("Digraph carries no heights")
        return self.heights[v]

    def ids(self) -> Set[str]:
        """All vertex and edge ids."""
        return set(self.vertices) | set(self._edge_index)

    def to_networkx(self) -> nx.MultiDiGraph:
        """Return the digraph as a networkx MultiDiGraph keyed by edge id."""
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(e.src, e.dst, key=e.id)
        return graph

    def with_heights(self, heights: Optional[Dict[str, Fraction]]) -> "ReebDigraph":
        return ReebDigraph(
            self.vertices, self.edges, dict(heights) if heights is not None else None
        )

    def relabel(self, suffix: str) -> "ReebDigraph":
        """Append ``suffix`` to every vertex and edge id."""
        return ReebDigraph(
            vertices=tuple(v + suffix for v in self.vertices),
            edges=tuple(Edge(e.id + suffix, e.src + suffix, e.dst + suffix) for e in self.edges),
            heights=(
                {v + suffix: h for v, h in self.heights.items()}
                if self.heights is not None
                else None
            ),
        )


@dataclass(frozen=True)
class VertexPoint:
    """A vertex of a digraph, written ``v:<id>``."""

    vertex: str

    def __str__(self) -> str:
        return f"v:{self.vertex}"


@dataclass(frozen=True)
class EdgeInteriorPoint:
    """Point of edge ``edge`` at parameter ``t`` in (0, 1), written ``e:<id>@<t>``."""

    edge: str
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 < self.t < 1:
            raise PreconditionError(
                f"Edge parameter must lie strictly between 0 and 1, got {self.t}"
            )

    def __str__(self) -> str:
        return f"e:{self.edge}@{self.t}"


PointSpec = Union[VertexPoint, EdgeInteriorPoint]


def parse_point(text: str) -> PointSpec:
    """
    Parse the point syntax ``v:<vertexId>`` or ``e:<edgeId>@<rational t>``.

    Raises:
        StructuralError: For anything else
    """
    text = text.strip()
    if text.startswith("v:") and len(text) > 2:
        return VertexPoint(text[2:])
    if text.startswith("e:") and "@" in text:
        edge_id, _, t = text[2:].rpartition("@")
        if edge_id:
            try:
                value = Fraction(t)
            except (ValueError, ZeroDivisionError):
                raise StructuralError(f"Bad edge parameter in point {text!r}")
            return EdgeInteriorPoint(edge_id, value)
    raise StructuralError(
        f"Cannot parse point {text!r}\n"
        f"Expected one of:\n"
        f"  v:<vertexId>          e.g. v:b\n"
        f"  e:<edgeId>@<p/q>      e.g. e:e1@1/2"
    )


def check_point(g: ReebDigraph, point: PointSpec) -> None:
    """Raise StructuralError when ``point`` does not name an element of ``g``."""
    if isinstance(point, VertexPoint):
        if not g.has_vertex(point.vertex):
            raise StructuralError(
                f"Point names unknown vertex {point.vertex!r}", element_id=point.vertex
            )
    elif not g.has_edge(point.edge):
        raise StructuralError(f"Point names unknown edge {point.edge!r}", element_id=point.edge)


# Validity ------------------------------------------------------------------


@dataclass(frozen=True)
class SelfLoop:
    edge: str
    tag = "SelfLoop"


@dataclass(frozen=True)
class DirectedCycle:
    vertices: Tuple[str, ...]
    tag = "DirectedCycle"


@dataclass(frozen=True)
class InteriorExtremum:
    vertex: str
    tag = "InteriorExtremum"


@dataclass(frozen=True)
class Disconnected:
    components: int
    tag = "Disconnected"


@dataclass(frozen=True)
class NonMonotoneHeight:
    edge: str
    tag = "NonMonotoneHeight"


Violation = Union[SelfLoop, DirectedCycle, InteriorExtremum, Disconnected, NonMonotoneHeight]


@dataclass(frozen=True)
class ValidityReport:
    """Verdict of ``validate_good_digraph``; certificate present iff good."""

    is_good: bool
    violations: Tuple[Violation, ...] = ()
    certificate: Optional[Dict[str, int]] = field(default=None, hash=False)


def _rotate_cycle(cycle: List[str]) -> Tuple[str, ...]:
    start = cycle.index(min(cycle))
    return tuple(cycle[start:] + cycle[:start])


def _longest_path_layers(g: ReebDigraph) -> Dict[str, int]:
    simple = nx.DiGraph()
    simple.add_nodes_from(g.vertices)
    simple.add_edges_from((e.src, e.dst) for e in g.edges)
    layers: Dict[str, int] = {}
    for v in nx.lexicographical_topological_sort(simple):
        preds = [layers[u] for u in simple.predecessors(v)]
        layers[v] = max(preds) + 1 if preds else 0
    return layers


def validate_good_digraph(g: ReebDigraph) -> ValidityReport:
    """
    Decide whether ``g`` is a good Reeb digraph.

    Good means connected, no self-loop, acyclic, and every vertex of degree
    at least 2 has both an incoming and an outgoing edge. When heights are
    present they must also increase strictly along every edge.

    Args:
        g: Structurally well-formed candidate

    Returns:
        ValidityReport whose certificate is a longest-path layering when good
    """
    violations: List[Violation] = []

    if not g.vertices:
        violations.append(Disconnected(components=0))
    else:
        components = nx.number_weakly_connected_components(g.to_networkx())
        if components > 1:
            violations.append(Disconnected(components=components))

    loops = [e for e in g.edges if e.src == e.dst]
    violations.extend(SelfLoop(e.id) for e in loops)

    simple = nx.DiGraph()
    simple.add_nodes_from(g.vertices)
    simple.add_edges_from((e.src, e.dst) for e in g.edges if e.src != e.dst)
    for component in sorted(nx.strongly_connected_components(simple), key=min):
        if len(component) < 2:
            continue
        cycle_edges = nx.find_cycle(simple.subgraph(component), source=min(component))
        violations.append(DirectedCycle(_rotate_cycle([u for u, _ in cycle_edges])))

    for v in g.vertices:
        if g.degree(v) >= 2 and (g.in_degree(v) == 0 or g.out_degree(v) == 0):
            violations.append(InteriorExtremum(v))

    if g.heights is not None:
        for e in g.edges:
            if e.src != e.dst and not g.heights[e.src] < g.heights[e.dst]:
                violations.append(NonMonotoneHeight(e.id))

    if violations:
        logger.debug("digraph rejected: %s", violations)
        return ValidityReport(is_good=False, violations=tuple(violations))
    return ValidityReport(is_good=True, certificate=_longest_path_layers(g))


def require_good(g: ReebDigraph, what: str = "digraph") -> ValidityReport:
    """Return the report for a good digraph, raise ValidityError otherwise."""
    report = validate_good_digraph(g)
    if not report.is_good:
        tags = ", ".join(v.tag for v in report.violations)
        raise ValidityError(f"The {what} is not a good Reeb digraph ({tags})", report=report)
    return report


def height_assignment(g: ReebDigraph) -> Dict[str, Fraction]:
    """
    Heights from the longest-path layering.

    Args:
        g: Good digraph

    Returns:
        Map vertex id -> layer index as a Fraction

    Raises:
        ValidityError: If g is not good
    """
    report = require_good(g)
    return {v: Fraction(layer) for v, layer in report.certificate.items()}


def degree_sets(g: ReebDigraph, j: int) -> Set[str]:
    """Vertices whose degree is at least ``j``."""
    return {v for v in g.vertices if g.degree(v) >= j}


def first_betti(g: ReebDigraph) -> int:
    """
    First Betti number |E| - |V| + 1 of a connected digraph.

    Raises:
        PreconditionError: If g is empty or disconnected
    """
    if not g.vertices or not nx.is_weakly_connected(g.to_networkx()):
        raise PreconditionError("first_betti requires a connected digraph")
    return len(g.edges) - len(g.vertices) + 1


@dataclass(frozen=True)
class Isomorphism:
    """Direction-preserving bijection of vertices and edges."""

    vertex_map: Dict[str, str] = field(hash=False)
    edge_map: Dict[str, str] = field(hash=False)


def digraph_isomorphic(g1: ReebDigraph, g2: ReebDigraph) -> Optional[Isomorphism]:
    """
    Find a direction-preserving multigraph isomorphism from g1 to g2.

    Heights are ignored. Parallel edges are matched in id order.

    Returns:
        Isomorphism, or None if the digraphs are not isomorphic
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    signature1 = sorted((g1.in_degree(v), g1.out_degree(v)) for v in g1.vertices)
    signature2 = sorted((g2.in_degree(v), g2.out_degree(v)) for v in g2.vertices)
    if signature1 != signature2:
        return None

    matcher = MultiDiGraphMatcher(g1.to_networkx(), g2.to_networkx())
    vertex_map = next(matcher.isomorphisms_iter(), None)
    if vertex_map is None:
        return None

    buckets: Dict[Tuple[str, str], List[str]] = {}
    for e in g2.edges:
        buckets.setdefault((e.src, e.dst), []).append(e.id)
    for ids in buckets.values():
        ids.sort(reverse=True)
    edge_map: Dict[str, str] = {}
    for e in sorted(g1.edges, key=lambda e: e.id):
        edge_map[e.id] = buckets[(vertex_map[e.src], vertex_map[e.dst])].pop()
    return Isomorphism(vertex_map=dict(vertex_map), edge_map=edge_map)


def fresh_id(taken: Iterable[str], base: str) -> str:
    """Return ``base`` or the first ``base_<n>`` not in ``taken``."""
    taken = set(taken)
    if base not in taken:
        return base
    n = 1
    while f"{base}_{n}" in taken:
        n += 1
    return f"{base}_{n}"


def subdivide_edge(
    g: ReebDigraph,
    point: EdgeInteriorPoint,
    new_vertex: Optional[str] = None,
    reserved: Iterable[str] = (),
) -> Tuple[ReebDigraph, str]:
    """
    Replace edge u->v by u->w->v with a fresh vertex w at parameter t.

    Args:
        g: Digraph
        point: Edge-interior point naming the edge and parameter
        new_vertex: Preferred id for w (made fresh if taken)
        reserved: Further ids the new vertex and edges must avoid

    Returns:
        (subdivided digraph, id of w)
    """
    old = g.edge(point.edge)
    taken = g.ids() | set(reserved)
    w = fresh_id(taken, new_vertex or f"{old.id}_mid")
    taken.add(w)
    lower_id = fresh_id(taken, f"{old.id}a")
    taken.add(lower_id)
    upper_id = fresh_id(taken, f"{old.id}b")

    edges: List[Edge] = []
    for e in g.edges:
        if e.id == old.id:
            edges.append(Edge(lower_id, old.src, w))
            edges.append(Edge(upper_id, w, old.dst))
        else:
            edges.append(e)

    heights = None
    if g.heights is not None:
        heights = dict(g.heights)
        heights[w] = g.heights[old.src] + point.t * (g.heights[old.dst] - g.heights[old.src])

    return ReebDigraph(g.vertices + (w,), tuple(edges), heights), w


def smooth_degree_two(g: ReebDigraph, vertices: Sequence[str]) -> ReebDigraph:
    """
    Remove the given in-1/out-1 vertices, merging their two edges.

    The merged edge keeps the id of the incoming edge.

    Raises:
        PreconditionError: If a listed vertex is not in-1/out-1
    """
    result = g
    for v in vertices:
        if not result.has_vertex(v) or result.in_degree(v) != 1 or result.out_degree(v) != 1:
            raise PreconditionError(f"Vertex {v!r} is not a degree-2 pass-through vertex")
        incoming = result.edge(result.in_edges(v)[0])
        outgoing = result.edge(result.out_edges(v)[0])
        edges = []
        for e in result.edges:
            if e.id == incoming.id:
                edges.append(Edge(incoming.id, incoming.src, outgoing.dst))
            elif e.id != outgoing.id:
                edges.append(e)
        heights = None
        if result.heights is not None:
            heights = {u: h for u, h in result.heights.items() if u != v}
        result = ReebDigraph(
            tuple(u for u in result.vertices if u != v), tuple(edges), heights
        )
    return result


def point_height(g: ReebDigraph, point: PointSpec) -> Fraction:
    """Height of a point; edge points interpolate affinely."""
    if isinstance(point, VertexPoint):
        return g.height(point.vertex)
    e = g.edge(point.edge)
    return g.height(e.src) + point.t * (g.height(e.dst) - g.height(e.src))
