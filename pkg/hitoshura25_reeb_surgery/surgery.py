"""
Graph-level surgeries on Reeb digraphs.

Covers the wedge connected sum, critical-point annotations for G-simple
functions, embeddings into a host digraph, and the augmentation of a tree
host by new degree-2 vertices.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from .errors import (
    AnnotationError,
    DisjointnessError,
    EmbeddingError,
    ExtremumPointError,
    PreconditionError,
    StructuralError,
)
from .reeb_core import (
    Edge,
    EdgeInteriorPoint,
    PointSpec,
    ReebDigraph,
    VertexPoint,
    check_point,
    first_betti,
    fresh_id,
    height_assignment,
    point_height,
    require_good,
    subdivide_edge,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


# Wedge connected sum -------------------------------------------------------


@dataclass(frozen=True)
class WedgeParts:
    """Wedge result together with the id bookkeeping of both summands."""

    graph: ReebDigraph
    vertex: str
    rename1: Dict[str, str] = field(hash=False)
    rename2: Dict[str, str] = field(hash=False)
    point1: PointSpec = None
    point2: PointSpec = None


def _point_contribution(g: ReebDigraph, point: PointSpec) -> Tuple[int, int]:
    """(in, out) contribution of a point to the identified vertex."""
    if isinstance(point, EdgeInteriorPoint):
        return 1, 1
    return g.in_degree(point.vertex), g.out_degree(point.vertex)


def check_wedge_point(g: ReebDigraph, point: PointSpec, label: str) -> None:
    """Reject unknown points and points sitting on a local extremum."""
    check_point(g, point)
    if isinstance(point, VertexPoint):
        v = point.vertex
        if g.in_degree(v) == 0 or g.out_degree(v) == 0:
            raise ExtremumPointError(
                f"Point {point} of the {label} digraph is a local extremum "
                f"(in-degree {g.in_degree(v)}, out-degree {g.out_degree(v)})\n"
                f"Solutions:\n"
                f"  1. Choose an edge-interior point, e.g. e:<edgeId>@1/2\n"
                f"  2. Choose a vertex with both incoming and outgoing edges"
            )


def half_rescaler(heights: Iterable[Fraction], pivot: Fraction) -> Callable[[Fraction], Fraction]:
    """
    Piecewise-affine map of the range of ``heights`` onto [0, 1] sending
    ``pivot`` to 1/2. The pivot must lie strictly inside the range.
    """
    heights = list(heights)
    low, high = min(heights), max(heights)

    def scale(h: Fraction) -> Fraction:
        if h <= pivot:
            return (h - low) / (pivot - low) * HALF
        return HALF + (h - pivot) / (high - pivot) * HALF

    return scale


def _rescale(g: ReebDigraph, point: PointSpec) -> Dict[str, Fraction]:
    scale = half_rescaler(g.heights.values(), point_height(g, point))
    return {v: scale(h) for v, h in g.heights.items()}


def _rename_point(point: PointSpec, suffix: str) -> PointSpec:
    if isinstance(point, VertexPoint):
        return VertexPoint(point.vertex + suffix)
    return EdgeInteriorPoint(point.edge + suffix, point.t)


def wedge_parts(
    w1: ReebDigraph, p1: PointSpec, w2: ReebDigraph, p2: PointSpec
) -> WedgeParts:
    """
    Wedge two good digraphs at non-extremal points, keeping id bookkeeping.

    See ``wedge_connected_sum`` for the contract. ``rename1``/``rename2`` map
    every original vertex id of each summand to its id in the result.
    """
    require_good(w1, "first digraph")
    require_good(w2, "second digraph")
    check_wedge_point(w1, p1, "first")
    check_wedge_point(w2, p2, "second")

    suffix1 = suffix2 = ""
    if w1.ids() & w2.ids():
        suffix1, suffix2 = "_1", "_2"
    a = w1.relabel(suffix1) if suffix1 else w1
    b = w2.relabel(suffix2) if suffix2 else w2
    q1 = _rename_point(p1, suffix1)
    q2 = _rename_point(p2, suffix2)

    if a.heights is not None or b.heights is not None:
        a = a.with_heights(_rescale(a.with_heights(a.heights or height_assignment(a)), q1))
        b = b.with_heights(_rescale(b.with_heights(b.heights or height_assignment(b)), q2))

    taken = a.ids() | b.ids()
    w = fresh_id(taken, "w")
    taken.add(w)

    def pinned(g: ReebDigraph, q: PointSpec) -> Tuple[ReebDigraph, str]:
        if isinstance(q, VertexPoint):
            return g, q.vertex
        sub, mid = subdivide_edge(g, q, new_vertex=f"{q.edge}_mid", reserved=taken)
        taken.update(sub.ids())
        return sub, mid

    a, x1 = pinned(a, q1)
    b, x2 = pinned(b, q2)

    def swap(v: str, x: str) -> str:
        return w if v == x else v

    vertices = tuple(v for v in a.vertices if v != x1) + tuple(
        v for v in b.vertices if v != x2
    ) + (w,)
    edges = tuple(Edge(e.id, swap(e.src, x1), swap(e.dst, x1)) for e in a.edges) + tuple(
        Edge(e.id, swap(e.src, x2), swap(e.dst, x2)) for e in b.edges
    )
    heights = None
    if a.heights is not None:
        heights = {v: h for v, h in a.heights.items() if v != x1}
        heights.update({v: h for v, h in b.heights.items() if v != x2})
        heights[w] = HALF
    result = ReebDigraph(vertices, edges, heights)

    rename1 = {v: swap(v + suffix1, x1) for v in w1.vertices}
    rename2 = {v: swap(v + suffix2, x2) for v in w2.vertices}
    logger.debug(
        "wedge at %s and %s: new vertex %s of degree %d", p1, p2, w, result.degree(w)
    )
    return WedgeParts(result, w, rename1, rename2, p1, p2)


def wedge_connected_sum(
    w1: ReebDigraph, p1: PointSpec, w2: ReebDigraph, p2: PointSpec
) -> Tuple[ReebDigraph, str]:
    """
    Identify a point of w1 with a point of w2 into one fresh vertex.

    Edge-interior points are subdivided first. When either input has
    heights, both are rescaled piecewise-affinely to [0, 1] with the chosen
    points at 1/2; an input without heights gets the longest-path layering
    first.

    Args:
        w1: First good digraph
        p1: Non-extremal point of w1
        w2: Second good digraph
        p2: Non-extremal point of w2

    Returns:
        (wedge digraph, id of the identified vertex)

    Raises:
        ValidityError: If an input is not good
        ExtremumPointError: If a point is a vertex with in- or out-degree 0
    """
    parts = wedge_parts(w1, p1, w2, p2)
    return parts.graph, parts.vertex


def wedge_expectations(
    w1: ReebDigraph, p1: PointSpec, w2: ReebDigraph, p2: PointSpec
) -> Dict[str, int]:
    """Vertex/edge/degree/Betti numbers a wedge result must have."""
    in1, out1 = _point_contribution(w1, p1)
    in2, out2 = _point_contribution(w2, p2)
    on_vertex = sum(isinstance(p, VertexPoint) for p in (p1, p2))
    interior = 2 - on_vertex
    return {
        "vertices": len(w1.vertices) + len(w2.vertices) + 1 - on_vertex,
        "edges": len(w1.edges) + len(w2.edges) + interior,
        "in_degree": in1 + in2,
        "out_degree": out1 + out2,
        "betti": first_betti(w1) + first_betti(w2),
    }


# G-simple annotations ------------------------------------------------------


@dataclass(frozen=True)
class GsAnnotation:
    """Number of critical points the quotient map sends to each vertex."""

    counts: Dict[str, int] = field(hash=False)


@dataclass(frozen=True)
class GsCheckReport:
    """Verdict of ``gs_check`` with expected and actual count per vertex."""

    passed: bool
    expected: Dict[str, int] = field(hash=False)
    actual: Dict[str, int] = field(hash=False)

    @property
    def failures(self) -> List[str]:
        return sorted(v for v in self.expected if self.expected[v] != self.actual[v])


def expected_gs_count(degree: int) -> Optional[int]:
    """Critical points a G-simple function carries at a vertex of this degree."""
    if degree >= 3:
        return degree - 2
    if degree == 2:
        return 1
    return None


def gs_check(g: ReebDigraph, ann: GsAnnotation) -> GsCheckReport:
    """
    Check the G-simple counts of an annotation.

    Every vertex of degree >= 3 must carry deg - 2 critical points and every
    vertex of degree 2 exactly one; degree-1 vertices are unconstrained.
    Missing counts read as 0.

    Raises:
        StructuralError: Annotation names unknown vertices or negative counts
    """
    require_good(g)
    for v, count in ann.counts.items():
        if not g.has_vertex(v):
            raise StructuralError(f"Annotation names unknown vertex {v!r}", element_id=v)
        if count < 0:
            raise StructuralError(f"Negative critical-point count at {v!r}", element_id=v)
    expected: Dict[str, int] = {}
    actual: Dict[str, int] = {}
    for v in g.vertices:
        want = expected_gs_count(g.degree(v))
        if want is None:
            continue
        expected[v] = want
        actual[v] = ann.counts.get(v, 0)
    return GsCheckReport(expected == actual, expected, actual)


def g_simple_annotation(g: ReebDigraph) -> GsAnnotation:
    """The annotation of a G-simple function; degree-1 vertices carry 1."""
    return GsAnnotation(
        {v: expected_gs_count(g.degree(v)) or 1 for v in g.vertices}
    )


def glue_gs_counts(
    w1: ReebDigraph,
    ann1: GsAnnotation,
    w2: ReebDigraph,
    ann2: GsAnnotation,
    p1: PointSpec,
    p2: PointSpec,
) -> GsAnnotation:
    """
    Carry critical-point counts through a wedge connected sum.

    Untouched vertices keep their counts; the identified vertex receives
    deg - 2. A vertex chosen as a wedge point loses its old count.

    Raises:
        AnnotationError: If either input fails ``gs_check``
    """
    for label, g, ann in (("first", w1, ann1), ("second", w2, ann2)):
        report = gs_check(g, ann)
        if not report.passed:
            raise AnnotationError(
                f"The {label} annotation is not G-simple at {', '.join(report.failures)}",
                failures=report.failures,
            )
    parts = wedge_parts(w1, p1, w2, p2)
    counts: Dict[str, int] = {}
    for rename, ann in ((parts.rename1, ann1), (parts.rename2, ann2)):
        for old, new in rename.items():
            if new != parts.vertex and old in ann.counts:
                counts[new] = ann.counts[old]
    counts[parts.vertex] = parts.graph.degree(parts.vertex) - 2
    return GsAnnotation(counts)


# Embeddings ----------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingMap:
    """Vertices of W to points of G, edges of W to forward paths of G-edges."""

    vertex_image: Dict[str, PointSpec] = field(hash=False)
    edge_image: Dict[str, List[str]] = field(hash=False)


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    violations: List[str] = field(default_factory=list, hash=False)
    v_gw2: Set[str] = field(default_factory=set, hash=False)


@dataclass(frozen=True)
class ImageFootprint:
    """Points of G covered by an embedding, compared exactly."""

    vertices: Set[str] = field(hash=False)
    # closed parameter intervals per G-edge
    segments: Dict[str, List[Tuple[Fraction, Fraction]]] = field(hash=False)
    points: Set[Tuple[str, Fraction]] = field(hash=False)


def _segment(
    g: ReebDigraph, path: List[str], start: PointSpec, end: PointSpec
) -> List[Tuple[str, Fraction, Fraction]]:
    pieces = []
    for i, eid in enumerate(path):
        lo, hi = Fraction(0), Fraction(1)
        if i == 0 and isinstance(start, EdgeInteriorPoint):
            lo = start.t
        if i == len(path) - 1 and isinstance(end, EdgeInteriorPoint):
            hi = end.t
        pieces.append((eid, lo, hi))
    return pieces


def _check_path_structure(
    w: ReebDigraph, g: ReebDigraph, phi: EmbeddingMap, eid: str
) -> None:
    e = w.edge(eid)
    path = phi.edge_image[eid]
    if not path:
        raise StructuralError(f"Edge {eid!r} has an empty image path", element_id=eid)
    for gid in path:
        if not g.has_edge(gid):
            raise StructuralError(
                f"Image path of {eid!r} uses unknown host edge {gid!r}", element_id=gid
            )
    for a, b in zip(path, path[1:]):
        if g.edge(a).dst != g.edge(b).src:
            raise StructuralError(
                f"Image path of {eid!r} is not contiguous between {a!r} and {b!r}",
                element_id=eid,
            )
    start, end = phi.vertex_image[e.src], phi.vertex_image[e.dst]
    first, last = g.edge(path[0]), g.edge(path[-1])
    starts = (
        start.vertex == first.src
        if isinstance(start, VertexPoint)
        else start.edge == first.id
    )
    ends = end.vertex == last.dst if isinstance(end, VertexPoint) else end.edge == last.id
    if not (starts and ends):
        raise StructuralError(
            f"Image path of {eid!r} does not run from the image of {e.src!r} "
            f"to the image of {e.dst!r}",
            element_id=eid,
        )


def embedding_footprint(
    w: ReebDigraph, g: ReebDigraph, phi: EmbeddingMap
) -> ImageFootprint:
    """Collect the G-vertices, G-edge intervals and interior points hit by phi."""
    points: Set[Tuple[str, Fraction]] = set()
    segments: Dict[str, List[Tuple[Fraction, Fraction]]] = {}
    for point in phi.vertex_image.values():
        if isinstance(point, EdgeInteriorPoint):
            points.add((point.edge, point.t))
    for e in w.edges:
        for eid, lo, hi in _segment(
            g, phi.edge_image[e.id], phi.vertex_image[e.src], phi.vertex_image[e.dst]
        ):
            segments.setdefault(eid, []).append((lo, hi))
    vertices = {x for x in g.vertices if _vertex_touched(w, g, phi, x)}
    return ImageFootprint(vertices, segments, points)


def _vertex_touched(w: ReebDigraph, g: ReebDigraph, phi: EmbeddingMap, x: str) -> bool:
    """True if G-vertex x is a vertex image or lies on some image path."""
    for point in phi.vertex_image.values():
        if isinstance(point, VertexPoint) and point.vertex == x:
            return True
    for e in w.edges:
        path = phi.edge_image[e.id]
        start, end = phi.vertex_image[e.src], phi.vertex_image[e.dst]
        for i, gid in enumerate(path):
            edge = g.edge(gid)
            if edge.src == x and not (i == 0 and isinstance(start, EdgeInteriorPoint)):
                return True
            if edge.dst == x and not (
                i == len(path) - 1 and isinstance(end, EdgeInteriorPoint)
            ):
                return True
    return False


def check_embedding(
    w: ReebDigraph, g: ReebDigraph, phi: EmbeddingMap, remark5: bool = False
) -> EmbeddingReport:
    """
    Check that phi embeds w into g topologically with matching orientation.

    Degree-1 vertices must land on degree-1 vertices of g, degree-2 vertices
    on edge interiors (or, with ``remark5``, also on vertices of g, which are
    then reported in ``v_gw2``), and degree-d vertices for d >= 3 on
    vertices of g of degree at least d. Image paths must be internally
    disjoint from each other and from vertex images.

    Args:
        w: Good digraph to embed
        g: Good host digraph
        phi: Candidate embedding
        remark5: Allow degree-2 vertices to land on vertices of g

    Returns:
        EmbeddingReport

    Raises:
        StructuralError: Missing images, unknown ids, or paths whose ends do
            not match the vertex images
    """
    require_good(w, "embedded digraph")
    require_good(g, "host digraph")
    for v in w.vertices:
        if v not in phi.vertex_image:
            raise StructuralError(f"Vertex {v!r} has no image", element_id=v)
        check_point(g, phi.vertex_image[v])
    for e in w.edges:
        if e.id not in phi.edge_image:
            raise StructuralError(f"Edge {e.id!r} has no image path", element_id=e.id)
        _check_path_structure(w, g, phi, e.id)
    unknown = set(phi.vertex_image) - set(w.vertices) or set(phi.edge_image) - {
        e.id for e in w.edges
    }
    if unknown:
        name = sorted(unknown)[0]
        raise StructuralError(f"Embedding names unknown element {name!r}", element_id=name)

    violations: List[str] = []
    v_gw2: Set[str] = set()

    images = {}
    for v in w.vertices:
        point = phi.vertex_image[v]
        if point in images:
            violations.append(f"vertices {images[point]} and {v} share the image {point}")
        images[point] = v

    for v in w.vertices:
        point, deg = phi.vertex_image[v], w.degree(v)
        on_vertex = isinstance(point, VertexPoint)
        host_deg = g.degree(point.vertex) if on_vertex else 2
        if deg == 1 and not (on_vertex and host_deg == 1):
            violations.append(f"degree-1 vertex {v} must map to a degree-1 vertex of the host")
        elif deg == 2 and on_vertex:
            if remark5 and host_deg >= 2:
                v_gw2.add(v)
            else:
                violations.append(f"degree-2 vertex {v} must map into an edge interior")
        elif deg >= 3 and not (on_vertex and host_deg >= deg):
            violations.append(
                f"degree-{deg} vertex {v} must map to a host vertex of degree >= {deg}"
            )

    # orientation inside a single host edge
    pieces: List[Tuple[str, str, Fraction, Fraction]] = []
    through: Dict[str, List[str]] = {}
    for e in w.edges:
        path = phi.edge_image[e.id]
        if len(set(path)) != len(path):
            violations.append(f"image path of {e.id} repeats a host edge")
        for gid, lo, hi in _segment(
            g, path, phi.vertex_image[e.src], phi.vertex_image[e.dst]
        ):
            if not lo < hi:
                violations.append(f"image path of {e.id} runs backwards along {gid}")
            pieces.append((e.id, gid, lo, hi))
        for gid in path[:-1]:
            through.setdefault(g.edge(gid).dst, []).append(e.id)

    for i, (e1, g1, lo1, hi1) in enumerate(pieces):
        for e2, g2, lo2, hi2 in pieces[i + 1:]:
            if g1 == g2 and lo1 < hi2 and lo2 < hi1:
                violations.append(f"image paths of {e1} and {e2} overlap on {g1}")
    for x, users in sorted(through.items()):
        if len(users) > 1:
            violations.append(f"image paths of {', '.join(sorted(users))} cross at {x}")
        if VertexPoint(x) in images:
            violations.append(f"image path of {users[0]} passes through the image of {images[VertexPoint(x)]}")
    for point, v in images.items():
        if isinstance(point, EdgeInteriorPoint):
            for eid, gid, lo, hi in pieces:
                if gid == point.edge and lo < point.t < hi:
                    violations.append(f"image path of {eid} passes through the image of {v}")

    return EmbeddingReport(not violations, violations, v_gw2 if remark5 else set())


def footprints_disjoint(a: ImageFootprint, b: ImageFootprint) -> bool:
    """True iff two embedding images share no point of the host."""
    if a.vertices & b.vertices:
        return False
    for gid, intervals in a.segments.items():
        for lo1, hi1 in intervals:
            for lo2, hi2 in b.segments.get(gid, []):
                if lo1 <= hi2 and lo2 <= hi1:
                    return False
            for edge, t in b.points:
                if edge == gid and lo1 <= t <= hi1:
                    return False
    for gid, intervals in b.segments.items():
        for edge, t in a.points:
            if edge == gid and any(lo <= t <= hi for lo, hi in intervals):
                return False
    return not (a.points & b.points)


# Counting formulas ---------------------------------------------------------


def theorem3_count(w: ReebDigraph) -> int:
    """Sum of deg - 2 over vertices of degree >= 3, plus the degree-2 vertices."""
    require_good(w)
    total = 0
    for v in w.vertices:
        d = w.degree(v)
        if d >= 3:
            total += d - 2
        elif d == 2:
            total += 1
    return total


def remark5_count(w: ReebDigraph, v_gw2: Set[str]) -> int:
    """
    ``theorem3_count`` minus the degree-2 vertices mapped onto host vertices.

    Raises:
        PreconditionError: If v_gw2 contains a vertex not of degree 2
    """
    for v in v_gw2:
        if not w.has_vertex(v):
            raise StructuralError(f"Unknown vertex {v!r}", element_id=v)
        if w.degree(v) != 2:
            raise PreconditionError(
                f"Vertex {v!r} has degree {w.degree(v)}; only degree-2 vertices "
                f"may be mapped onto host vertices"
            )
    return theorem3_count(w) - len(v_gw2)


@dataclass(frozen=True)
class CriticalSplit:
    """Critical points just below and just above a vertex level."""

    below: int
    above: int


def critical_split(in_deg: int, out_deg: int) -> CriticalSplit:
    """
    Split deg - 2 critical points between the two levels around a vertex.

    ``below = out_deg - 1`` and ``above = in_deg - 1``.

    Raises:
        PreconditionError: If either degree is below 1
    """
    if in_deg < 1 or out_deg < 1:
        raise PreconditionError(
            f"critical_split needs in- and out-degree >= 1, got ({in_deg}, {out_deg})"
        )
    return CriticalSplit(below=out_deg - 1, above=in_deg - 1)


# Augmentation --------------------------------------------------------------


def host_hypotheses(g: ReebDigraph) -> List[str]:
    """Ways in which g fails to be a tree host without degree-2 vertices."""
    problems = []
    twos = sorted(v for v in g.vertices if g.degree(v) == 2)
    if twos:
        problems.append(f"host has degree-2 vertices: {', '.join(twos)}")
    betti = first_betti(g)
    if betti != 0:
        problems.append(f"host has first Betti number {betti}, expected 0")
    return problems


def _require_host(g: ReebDigraph) -> None:
    require_good(g, "host digraph")
    problems = host_hypotheses(g)
    if problems:
        raise PreconditionError(
            "Host digraph violates the augmentation hypotheses:\n"
            + "\n".join(f"  - {p}" for p in problems)
        )


@dataclass
class _EdgePlan:
    near_src: int = 0
    near_dst: int = 0
    interior: List[Fraction] = field(default_factory=list)


def _plan_insertions(
    w: ReebDigraph, g: ReebDigraph, phi: EmbeddingMap, plans: Dict[str, _EdgePlan]
) -> None:
    for v in w.vertices:
        point, d = phi.vertex_image[v], w.degree(v)
        if d >= 3:
            split = critical_split(w.in_degree(v), w.out_degree(v))
            x = point.vertex
            if split.below:
                below_edge = min(g.in_edges(x))
                plans.setdefault(below_edge, _EdgePlan()).near_dst += split.below
            if split.above:
                above_edge = min(g.out_edges(x))
                plans.setdefault(above_edge, _EdgePlan()).near_src += split.above
        elif d == 2 and isinstance(point, EdgeInteriorPoint):
            plans.setdefault(point.edge, _EdgePlan()).interior.append(point.t)


def _apply_plans(g: ReebDigraph, plans: Dict[str, _EdgePlan]) -> Tuple[ReebDigraph, List[str]]:
    taken = g.ids()
    counter = 0
    new_vertices: List[str] = []
    edges: List[Edge] = []
    heights = dict(g.heights) if g.heights is not None else None
    extra_vertices: List[str] = []

    for e in g.edges:
        plan = plans.get(e.id)
        if plan is None:
            edges.append(e)
            continue
        interior = sorted(plan.interior)
        first = interior[0] if interior else HALF
        last = interior[-1] if interior else HALF
        params = [first * i / (plan.near_src + 1) for i in range(1, plan.near_src + 1)]
        params += interior
        params += [
            last + (1 - last) * i / (plan.near_dst + 1) for i in range(1, plan.near_dst + 1)
        ]
        chain = [e.src]
        for t in params:
            counter += 1
            vid = fresh_id(taken, f"n{counter}")
            taken.add(vid)
            chain.append(vid)
            new_vertices.append(vid)
            extra_vertices.append(vid)
            if heights is not None:
                heights[vid] = heights[e.src] + t * (heights[e.dst] - heights[e.src])
        chain.append(e.dst)
        for i, (a, b) in enumerate(zip(chain, chain[1:])):
            eid = e.id if i == 0 else fresh_id(taken, f"{e.id}_{i}")
            taken.add(eid)
            edges.append(Edge(eid, a, b))

    return ReebDigraph(g.vertices + tuple(extra_vertices), tuple(edges), heights), new_vertices


def theorem3_augment(
    g: ReebDigraph, w: ReebDigraph, phi: EmbeddingMap, remark5: bool = False
) -> Tuple[ReebDigraph, List[str]]:
    """
    Insert the new degree-2 vertices created by a function embedded into g.

    A vertex of w of degree >= 3 with in-degree p and out-degree q contributes q - 1
    vertices just below its image on the smallest-id incoming host edge and
    p - 1 just above it on the smallest-id outgoing host edge. Each degree-2
    vertex of w mapped into an edge interior contributes one vertex at its
    image point.

    Args:
        g: Tree host without degree-2 vertices
        w: Embedded good digraph
        phi: Embedding of w into g
        remark5: Allow degree-2 vertices of w on host vertices

    Returns:
        (augmented host, new vertex ids in insertion order)

    Raises:
        PreconditionError: Host violates the hypotheses
        EmbeddingError: phi is not a valid embedding
    """
    _require_host(g)
    report = check_embedding(w, g, phi, remark5)
    if not report.ok:
        raise EmbeddingError(
            "Invalid embedding:\n" + "\n".join(f"  - {v}" for v in report.violations),
            violations=report.violations,
        )
    plans: Dict[str, _EdgePlan] = {}
    _plan_insertions(w, g, phi, plans)
    result, new_vertices = _apply_plans(g, plans)
    logger.debug("augmented host with %d new vertices", len(new_vertices))
    return result, new_vertices


def theorem3_connected_sum(
    g: ReebDigraph,
    w1: ReebDigraph,
    phi1: EmbeddingMap,
    w2: ReebDigraph,
    phi2: EmbeddingMap,
    remark5: bool = False,
) -> Tuple[ReebDigraph, List[str]]:
    """
    Augment g for the connected sum of two functions embedded disjointly.

    The result carries N(w1) + N(w2) new degree-2 vertices, each placed as
    ``theorem3_augment`` places it for its own embedding.

    Raises:
        PreconditionError: Host violates the hypotheses
        EmbeddingError: Either embedding is invalid
        DisjointnessError: The two images share a point of g
    """
    _require_host(g)
    for label, w, phi in (("first", w1, phi1), ("second", w2, phi2)):
        report = check_embedding(w, g, phi, remark5)
        if not report.ok:
            raise EmbeddingError(
                f"Invalid {label} embedding:\n"
                + "\n".join(f"  - {v}" for v in report.violations),
                violations=report.violations,
            )
    if not footprints_disjoint(
        embedding_footprint(w1, g, phi1), embedding_footprint(w2, g, phi2)
    ):
        raise DisjointnessError(
            "The two embeddings overlap in the host digraph\n"
            "Both images must be disjoint, including edge-interior points."
        )
    plans: Dict[str, _EdgePlan] = {}
    _plan_insertions(w1, g, phi1, plans)
    _plan_insertions(w2, g, phi2, plans)
    return _apply_plans(g, plans)
