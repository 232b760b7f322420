"""
Seeded generators and the acceptance-suite driver behind ``verify-suite``.

Every random choice flows from one ``random.Random`` seeded by the caller,
so identical seeds give identical cases and identical reports.
"""

import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import ReebSurgeryError
from .pl_engine import (
    connected_sum_surfaces,
    dense_sampling_reeb,
    euler_characteristic,
    find_regular_strip,
    flat_torus,
    octahedron,
    pl_reeb,
    projective_plane,
    realize,
    standing_torus,
)
from .pl_engine.mesh import PLHeights, TriSurface
from .reeb_core import (
    Edge,
    EdgeInteriorPoint,
    PointSpec,
    ReebDigraph,
    VertexPoint,
    digraph_isomorphic,
    first_betti,
    fresh_id,
    point_height,
    smooth_degree_two,
    validate_good_digraph,
)
from .surgery import (
    EmbeddingMap,
    check_embedding,
    critical_split,
    g_simple_annotation,
    glue_gs_counts,
    gs_check,
    remark5_count,
    theorem3_augment,
    theorem3_count,
    wedge_connected_sum,
    wedge_expectations,
)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0
EXHAUSTIVE_MAX_VERTICES = 5
MAX_REALIZED_TRIANGLES = 5000
MAX_ORACLE_TRIANGLES = 1000


# Generators ----------------------------------------------------------------


def _with_edge(g: ReebDigraph, src: str, dst: str) -> ReebDigraph:
    eid = fresh_id(g.ids(), f"e{len(g.edges)}")
    return ReebDigraph(g.vertices, g.edges + (Edge(eid, src, dst),))


def _grow(rng: random.Random, g: ReebDigraph, cycles: bool) -> ReebDigraph:
    ops = ["subdivide", "leaf", "leaf"] + (["chord"] if cycles else [])
    op = rng.choice(ops)
    if op == "chord":
        u, v = rng.sample(g.vertices, 2)
        layers = validate_good_digraph(g).certificate
        if layers[u] > layers[v]:
            u, v = v, u
        return _with_edge(g, u, v)

    w = fresh_id(g.ids(), f"v{len(g.vertices)}")
    grown = ReebDigraph(g.vertices + (w,), g.edges)
    if op == "leaf":
        x = rng.choice(g.vertices)
        return _with_edge(grown, x, w) if rng.random() < 0.5 else _with_edge(grown, w, x)

    # subdivide: the old edge keeps its id on the lower half
    old = rng.choice(g.edges)
    edges = tuple(Edge(e.id, e.src, w) if e.id == old.id else e for e in g.edges)
    return _with_edge(ReebDigraph(grown.vertices, edges), w, old.dst)


def random_good_digraph(
    rng: random.Random,
    max_vertices: int = 10,
    max_degree: Optional[int] = None,
    cycles: bool = True,
) -> ReebDigraph:
    """
    Random good digraph grown from a single edge.

    Each step subdivides an edge, hangs a leaf on a vertex or (with
    ``cycles``) adds a chord along the current layering. Steps leaving the
    class of good digraphs, or exceeding ``max_degree``, are discarded.
    """
    target = rng.randint(2, max(2, max_vertices))
    g = ReebDigraph.build(["v0", "v1"], [("e0", "v0", "v1")])
    for _ in range(50 * target):
        if len(g.vertices) >= target:
            break
        candidate = _grow(rng, g, cycles)
        if max_degree is not None and any(
            candidate.degree(v) > max_degree for v in candidate.vertices
        ):
            continue
        if validate_good_digraph(candidate).is_good:
            g = candidate
    return g


def random_point(rng: random.Random, g: ReebDigraph) -> PointSpec:
    """A random non-extremal vertex or a random edge-interior point."""
    vertices = [v for v in sorted(g.vertices) if g.in_degree(v) and g.out_degree(v)]
    edges = sorted(e.id for e in g.edges)
    k = rng.randrange(len(vertices) + len(edges))
    if k < len(vertices):
        return VertexPoint(vertices[k])
    return EdgeInteriorPoint(edges[k - len(vertices)], Fraction(rng.randint(1, 7), 8))


@dataclass(frozen=True)
class TreeInstance:
    """A tree host, a digraph embedded in it, and the embedding."""

    host: ReebDigraph
    embedded: ReebDigraph
    embedding: EmbeddingMap
    on_host_vertices: frozenset = field(default_factory=frozenset)


def _hang_leaf(rng: random.Random, g: ReebDigraph, x: str) -> ReebDigraph:
    leaf = fresh_id(g.ids(), "leaf")
    grown = ReebDigraph(g.vertices + (leaf,), g.edges)
    eid = fresh_id(grown.ids(), "leaf_e")
    edge = Edge(eid, x, leaf) if rng.random() < 0.5 else Edge(eid, leaf, x)
    return ReebDigraph(grown.vertices, grown.edges + (edge,))


def random_tree_instance(
    rng: random.Random, max_vertices: int = 10, remark5: bool = False
) -> TreeInstance:
    """
    Random embedded tree for the augmentation counts.

    The embedded digraph W is a random good tree; the host G is W with its
    degree-2 vertices smoothed away, plus random leaves at vertices of
    degree >= 3. With ``remark5`` one degree-2 vertex of W is kept as a host
    vertex and receives a leaf, so it maps onto a host vertex.
    """
    w = random_good_digraph(rng, max_vertices, cycles=False)
    twos = sorted(v for v in w.vertices if w.degree(v) == 2)
    keep = None
    if remark5:
        if not twos:
            old = w.edges[0]
            mid = fresh_id(w.ids(), f"v{len(w.vertices)}")
            lower = Edge(old.id, old.src, mid)
            upper = Edge(fresh_id(w.ids() | {mid}, f"e{len(w.edges)}"), mid, old.dst)
            w = ReebDigraph(w.vertices + (mid,), (lower, upper) + w.edges[1:])
            twos = [mid]
        keep = rng.choice(twos)
    smoothed = [v for v in twos if v != keep]
    host = smooth_degree_two(w, smoothed)

    vertex_image: Dict[str, PointSpec] = {}
    edge_image: Dict[str, List[str]] = {}
    gone = set(smoothed)
    for gedge in host.edges:
        # a merged host edge keeps the id of the first edge of its chain
        chain_edges = [gedge.id]
        chain: List[str] = []
        x = w.edge(gedge.id).dst
        while x in gone:
            chain.append(x)
            nxt = w.out_edges(x)[0]
            chain_edges.append(nxt)
            x = w.edge(nxt).dst
        for k, v in enumerate(chain, 1):
            vertex_image[v] = EdgeInteriorPoint(gedge.id, Fraction(k, len(chain) + 1))
        for eid in chain_edges:
            edge_image[eid] = [gedge.id]
    for v in w.vertices:
        if v not in gone:
            vertex_image[v] = VertexPoint(v)

    if keep is not None:
        host = _hang_leaf(rng, host, keep)
    for x in sorted(v for v in w.vertices if w.degree(v) >= 3):
        if rng.random() < 0.3:
            host = _hang_leaf(rng, host, x)
    return TreeInstance(
        host,
        w,
        EmbeddingMap(vertex_image, edge_image),
        frozenset([keep]) if keep is not None else frozenset(),
    )


def exhaustive_digraphs(max_vertices: int, max_edges: int) -> Iterator[ReebDigraph]:
    """
    Connected directed multigraphs (loops allowed) up to relabeling.

    Edge lists are enumerated as sorted multisets of vertex pairs whose
    labels first appear in increasing order; every isomorphism class
    appears at least once.
    """
    pairs = [(a, b) for a in range(max_vertices) for b in range(max_vertices)]

    def extend(edges: List[Tuple[int, int]], start: int, used: int):
        yield edges, used
        if len(edges) == max_edges:
            return
        for k in range(start, len(pairs)):
            a, b = pairs[k]
            n = used
            if a > n:
                break
            if a == n:
                n += 1
            if b > n:
                continue
            if b == n:
                n += 1
            yield from extend(edges + [(a, b)], k, n)

    for edges, used in extend([], 0, 0):
        n = max(used, 1)
        if not _connected(n, edges):
            continue
        yield ReebDigraph.build(
            [f"x{i}" for i in range(n)],
            [(f"f{k}", f"x{a}", f"x{b}") for k, (a, b) in enumerate(edges)],
        )


def _connected(n: int, edges: Sequence[Tuple[int, int]]) -> bool:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    return nx.is_connected(graph)


def labeling_oracle(g: ReebDigraph) -> bool:
    """
    Goodness by brute force: some ordering of the vertices makes every
    edge climb, and no vertex of degree >= 2 is a local extremum under it.
    """
    for v in g.vertices:
        if g.degree(v) >= 2 and (g.in_degree(v) == 0 or g.out_degree(v) == 0):
            return False
    if any(e.src == e.dst for e in g.edges):
        return False
    for order in itertools.permutations(g.vertices):
        rank = {v: k for k, v in enumerate(order)}
        if all(rank[e.src] < rank[e.dst] for e in g.edges):
            return True
    return False


def corpus_meshes(rng: random.Random, count: int) -> List[Tuple[str, TriSurface, PLHeights]]:
    """Fixture meshes plus realized random digraphs small enough for the oracle."""
    corpus = [
        ("octahedron", *octahedron()),
        ("standing_torus", *standing_torus()),
        ("flat_torus_3x5", *flat_torus(3, 5)),
        ("projective_plane", *projective_plane()),
    ]
    attempts = 0
    while len(corpus) < 4 + count and attempts < 20 * (count + 1):
        attempts += 1
        w = random_good_digraph(rng, 5, max_degree=4)
        r = realize(w)
        if len(r.surface.triangles) <= MAX_ORACLE_TRIANGLES:
            corpus.append((f"realized_{attempts}", r.surface, r.heights))
    return corpus


# Criteria ------------------------------------------------------------------

Runner = Callable[[random.Random, int], Tuple[int, List[str]]]


@dataclass(frozen=True)
class Criterion:
    """
    One acceptance criterion.

    ``cases`` and ``quick_cases`` are random case counts, except for the
    exhaustive criterion where they bound the number of edges. A criterion
    with ``stream`` set draws from that criterion's generator, so it sees
    the same cases.
    """

    number: int
    title: str
    runner: Runner
    cases: int
    quick_cases: int
    stream: Optional[int] = None


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    cases: int
    failures: Tuple[str, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return not self.failures


def _validator_matches_oracle(rng: random.Random, max_edges: int) -> Tuple[int, List[str]]:
    cases, failures = 0, []
    for g in exhaustive_digraphs(EXHAUSTIVE_MAX_VERTICES, max_edges):
        cases += 1
        verdict = validate_good_digraph(g).is_good
        if verdict != labeling_oracle(g):
            edges = [(e.src, e.dst) for e in g.edges]
            failures.append(f"validator says {verdict} for {edges}")
    return cases, failures


def _graph_wedge(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    failures = []
    for k in range(cases):
        w1, w2 = random_good_digraph(rng), random_good_digraph(rng)
        p1, p2 = random_point(rng, w1), random_point(rng, w2)
        result, v = wedge_connected_sum(w1, p1, w2, p2)
        want = wedge_expectations(w1, p1, w2, p2)
        got = {
            "vertices": len(result.vertices),
            "edges": len(result.edges),
            "in_degree": result.in_degree(v),
            "out_degree": result.out_degree(v),
            "betti": first_betti(result),
        }
        if not validate_good_digraph(result).is_good:
            failures.append(f"case {k}: wedge at {p1}, {p2} is not good")
        elif got != want:
            failures.append(f"case {k}: wedge at {p1}, {p2} has {got}, expected {want}")
    return cases, failures


def _graph_gs(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    failures = []
    for k in range(cases):
        w1, w2 = random_good_digraph(rng), random_good_digraph(rng)
        p1, p2 = random_point(rng, w1), random_point(rng, w2)
        ann = glue_gs_counts(
            w1, g_simple_annotation(w1), w2, g_simple_annotation(w2), p1, p2
        )
        result, _ = wedge_connected_sum(w1, p1, w2, p2)
        report = gs_check(result, ann)
        if not report.passed:
            failures.append(f"case {k}: glued counts fail at {report.failures}")
    return cases, failures


def _realization(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    failures = []
    for k in range(cases):
        w = random_good_digraph(rng, 8, max_degree=5)
        r = realize(w)
        if len(r.surface.triangles) > MAX_REALIZED_TRIANGLES:
            failures.append(f"case {k}: {len(r.surface.triangles)} triangles")
            continue
        reeb, _ = pl_reeb(r.surface, r.heights)
        if digraph_isomorphic(w, reeb) is None:
            failures.append(f"case {k}: Reeb digraph of the realization differs")
    return cases, failures


def _surface_point(rng: random.Random, reeb: ReebDigraph, f: PLHeights) -> PointSpec:
    """Random Reeb point whose height is not a mesh height."""
    values = set(f.values.values())
    options: List[PointSpec] = [
        VertexPoint(v) for v in sorted(reeb.vertices) if reeb.in_degree(v) and reeb.out_degree(v)
    ]
    for e in sorted(reeb.edges, key=lambda e: e.id):
        for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 7)):
            point = EdgeInteriorPoint(e.id, t)
            if point_height(reeb, point) not in values:
                options.append(point)
                break
    return rng.choice(options)


@dataclass(frozen=True)
class SurfaceWedgeCase:
    expected: ReebDigraph
    wedge_vertex: str
    reeb: ReebDigraph
    members: Dict[str, Tuple[str, ...]]
    chi: Tuple[int, int, int]
    points: Tuple[PointSpec, PointSpec]
    point_degrees: Tuple[int, int]


def surface_wedge_case(rng: random.Random, max_vertices: int = 4) -> SurfaceWedgeCase:
    """Realize two random digraphs, sum the surfaces at random Reeb points."""
    pieces = []
    for _ in range(2):
        w = random_good_digraph(rng, max_vertices, max_degree=4)
        r = realize(w)
        reeb, _ = pl_reeb(r.surface, r.heights)
        point = _surface_point(rng, reeb, r.heights)
        strip = find_regular_strip(r.surface, r.heights, point)
        degree = reeb.degree(point.vertex) if isinstance(point, VertexPoint) else 0
        pieces.append((r.surface, r.heights, reeb, point, strip, degree))
    (s1, f1, reeb1, p1, strip1, d1), (s2, f2, reeb2, p2, strip2, d2) = pieces
    s, f = connected_sum_surfaces(s1, f1, strip1, s2, f2, strip2, reverse=rng.random() < 0.5)
    reeb, quotient = pl_reeb(s, f)
    expected, v = wedge_connected_sum(reeb1, p1, reeb2, p2)
    return SurfaceWedgeCase(
        expected,
        v,
        reeb,
        quotient.vertex_members,
        (euler_characteristic(s1), euler_characteristic(s2), euler_characteristic(s)),
        (p1, p2),
        (d1, d2),
    )


def _surface_wedge(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    failures = []
    for k in range(cases):
        case = surface_wedge_case(rng)
        chi1, chi2, chi = case.chi
        if digraph_isomorphic(case.expected, case.reeb) is None:
            failures.append(f"case {k}: sum at {case.points} has the wrong Reeb digraph")
        elif chi != chi1 + chi2 - 2:
            failures.append(f"case {k}: chi {chi} != {chi1} + {chi2} - 2")
    return cases, failures


def _surface_cluster(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    # a degree-2 vertex point already carries its cross-cap saddle, which is
    # not G-simple once wedged, so such cases are skipped
    failures = []
    checked = 0
    for k in range(cases):
        case = surface_wedge_case(rng)
        if 2 in case.point_degrees:
            continue
        checked += 1
        iso = digraph_isomorphic(case.expected, case.reeb)
        if iso is None:
            failures.append(f"case {k}: wrong Reeb digraph")
            continue
        cluster = case.members[iso.vertex_map[case.wedge_vertex]]
        want = case.expected.degree(case.wedge_vertex) - 2
        if len(cluster) != want:
            failures.append(f"case {k}: cluster {cluster} should hold {want} saddles")
    logger.debug("cluster check skipped %d degree-2 points", cases - checked)
    return checked, failures


def _augmentation(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    failures = []
    for k in range(cases):
        remark5 = k % 2 == 1
        inst = random_tree_instance(rng, remark5=remark5)
        report = check_embedding(inst.embedded, inst.host, inst.embedding, remark5)
        if not report.ok:
            failures.append(f"case {k}: generated embedding rejected: {report.violations}")
            continue
        augmented, new = theorem3_augment(inst.host, inst.embedded, inst.embedding, remark5)
        want = (
            remark5_count(inst.embedded, set(report.v_gw2))
            if remark5
            else theorem3_count(inst.embedded)
        )
        if len(new) != want:
            failures.append(f"case {k}: {len(new)} new vertices, expected {want}")
        elif any(augmented.degree(v) != 2 for v in new):
            failures.append(f"case {k}: a new vertex is not of degree 2")
        elif digraph_isomorphic(smooth_degree_two(augmented, new), inst.host) is None:
            failures.append(f"case {k}: smoothing does not recover the host")
        elif report.v_gw2 != set(inst.on_host_vertices):
            failures.append(f"case {k}: host-vertex images {sorted(report.v_gw2)}")
    return cases, failures


def _fixtures(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    failures = []
    expected = {
        "octahedron": ReebDigraph.build(["a", "b"], [("x", "a", "b")]),
        "standing_torus": ReebDigraph.build(
            ["m", "s", "t", "M"],
            [("x", "m", "s"), ("y", "s", "t"), ("z", "s", "t"), ("w", "t", "M")],
        ),
        "projective_plane": ReebDigraph.build(
            ["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c")]
        ),
    }
    corpus = corpus_meshes(rng, cases)
    for name, s, f in corpus:
        reeb, _ = pl_reeb(s, f)
        if name in expected and digraph_isomorphic(reeb, expected[name]) is None:
            failures.append(f"{name}: unexpected Reeb digraph")
        if digraph_isomorphic(reeb, dense_sampling_reeb(s, f)) is None:
            failures.append(f"{name}: sweep and dense sampling disagree")
    return len(corpus), failures


def _split(rng: random.Random, cases: int) -> Tuple[int, List[str]]:
    failures = []
    count = 0
    for p in range(1, cases + 1):
        for q in range(1, cases + 1):
            count += 1
            split = critical_split(p, q)
            if split.below + split.above != p + q - 2:
                failures.append(f"({p}, {q}) splits as {split}")
    return count, failures


CRITERIA: Tuple[Criterion, ...] = (
    Criterion(1, "validator agrees with labeling oracle", _validator_matches_oracle, 7, 5),
    Criterion(2, "graph wedge counts", _graph_wedge, 500, 50),
    Criterion(3, "glued G-simple counts", _graph_gs, 200, 30),
    Criterion(4, "realization round-trip", _realization, 100, 10),
    Criterion(5, "surface connected sum", _surface_wedge, 50, 5),
    Criterion(6, "wedge saddle cluster", _surface_cluster, 50, 5, stream=5),
    Criterion(7, "augmentation counts", _augmentation, 200, 30),
    Criterion(8, "fixtures and sampling oracle", _fixtures, 6, 2),
    Criterion(9, "critical split totals", _split, 6, 6),
)


def run_criterion(criterion: Criterion, seed: int = DEFAULT_SEED, quick: bool = False) -> CriterionResult:
    """Run one criterion with its own generator seeded by ``seed`` and its number."""
    rng = random.Random(seed * 1000 + (criterion.stream or criterion.number))
    start = time.perf_counter()
    try:
        cases, failures = criterion.runner(rng, criterion.quick_cases if quick else criterion.cases)
    except ReebSurgeryError as e:
        cases, failures = 0, [f"{type(e).__name__}: {e}"]
    seconds = time.perf_counter() - start
    logger.info(
        "criterion %d: %d cases, %d failures, %.2fs",
        criterion.number,
        cases,
        len(failures),
        seconds,
    )
    return CriterionResult(criterion.number, criterion.title, cases, tuple(failures), seconds)


def run_suite(
    seed: int = DEFAULT_SEED, quick: bool = False, only: Optional[Sequence[int]] = None
) -> List[CriterionResult]:
    return [
        run_criterion(c, seed, quick)
        for c in CRITERIA
        if only is None or c.number in only
    ]


def format_table(results: Sequence[CriterionResult]) -> str:
    """Plain-text pass/fail table, one row per criterion."""
    lines = [f"{'#':>2}  {'criterion':<40} {'cases':>7} {'fail':>5} {'secs':>8}  result"]
    for r in results:
        lines.append(
            f"{r.number:>2}  {r.title:<40} {r.cases:>7} {len(r.failures):>5} "
            f"{r.seconds:>8.2f}  {'PASS' if r.passed else 'FAIL'}"
        )
        for failure in r.failures[:5]:
            lines.append(f"      - {failure}")
    return "\n".join(lines) + "\n"
