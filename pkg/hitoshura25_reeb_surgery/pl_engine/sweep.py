"""
Reeb digraph of a piecewise-linear function on a closed surface.

The sweep cuts the surface at one regular value between each pair of
consecutive critical values. Every slab between two cuts either carries
critical vertices, which makes it a Reeb vertex, or is a union of
annuli, each of which continues a Reeb edge.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Hashable, List, Optional, Tuple

import networkx as nx
from networkx.utils import UnionFind

from ..errors import PreconditionError
from ..reeb_core import Edge, ReebDigraph
from .mesh import MeshEdge, PLHeights, TriSurface, check_heights, classify_vertex, critical_points

logger = logging.getLogger(__name__)


def crosses(f: PLHeights, edge: MeshEdge, level: Fraction) -> bool:
    """True when ``level`` lies strictly between the edge's end heights."""
    a, b = f[edge[0]], f[edge[1]]
    return min(a, b) < level < max(a, b)


def level_components(s: TriSurface, f: PLHeights, level: Fraction) -> List[FrozenSet[tuple]]:
    """
    Connected components of the level set ``f = level``.

    Elements are ``("e", edge)`` for edges crossed strictly and
    ``("v", vertex)`` for vertices lying exactly on the level.
    """
    uf = UnionFind()
    for tri in s.triangles:
        members = [("v", v) for v in tri if f[v] == level]
        for x, y in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            e = (x, y) if x <= y else (y, x)
            if crosses(f, e, level):
                members.append(("e", e))
        if members:
            uf.union(*members)
    return sorted((frozenset(g) for g in uf.to_sets()), key=min)


def slab_components(
    s: TriSurface,
    f: PLHeights,
    lo: Optional[Fraction],
    hi: Optional[Fraction],
) -> UnionFind:
    """
    Union-find over the pieces of ``lo <= f <= hi`` cut out by each triangle.

    Elements are ``("v", x)`` for vertices inside the slab and
    ``("lo", e)`` / ``("hi", e)`` for edges crossing either bound. A bound
    of None means unbounded.
    """
    uf = UnionFind()

    def inside(v: str) -> bool:
        return (lo is None or f[v] >= lo) and (hi is None or f[v] <= hi)

    for tri in s.triangles:
        members = [("v", v) for v in tri if inside(v)]
        for x, y in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            e = (x, y) if x <= y else (y, x)
            if lo is not None and crosses(f, e, lo):
                members.append(("lo", e))
            if hi is not None and crosses(f, e, hi):
                members.append(("hi", e))
        if members:
            uf.union(*members)
    return uf


@dataclass(frozen=True)
class LevelCircle:
    """One component of a regular level set, as its crossed edges."""

    level: Fraction
    edges: FrozenSet[MeshEdge]


@dataclass
class ReebQuotient:
    """
    How mesh features map onto the Reeb digraph built by ``pl_reeb``.

    Attributes:
        critical_values: Distinct heights of critical vertices, ascending
        regular_values: One regular value between each consecutive pair
        vertex_members: Reeb vertex -> critical mesh vertices it contracts
        edge_circles: Reeb edge -> level circles along it, bottom-up
    """

    critical_values: Tuple[Fraction, ...]
    regular_values: Tuple[Fraction, ...]
    vertex_members: Dict[str, Tuple[str, ...]]
    edge_circles: Dict[str, Tuple[LevelCircle, ...]]

    def edge_of_circle(self, level: Fraction, edge: MeshEdge) -> Optional[str]:
        """The Reeb edge whose circle at a regular cut ``level`` crosses ``edge``."""
        for rid, circles in self.edge_circles.items():
            for c in circles:
                if c.level == level and edge in c.edges:
                    return rid
        return None


def _regular_values(values: List[Fraction], critical: List[Fraction]) -> List[Fraction]:
    # midway between each critical value and the next mesh height above it
    cuts = []
    for c in critical[:-1]:
        above = next(v for v in values if v > c)
        cuts.append((c + above) / 2)
    return cuts


def pl_reeb(s: TriSurface, f: PLHeights) -> Tuple[ReebDigraph, ReebQuotient]:
    """
    Compute the Reeb digraph of ``f`` on ``s``.

    Reeb vertex heights are the critical values. Vertex ids ``r0, r1, ...``
    and edge ids ``a0, a1, ...`` follow height, then the smallest mesh id
    involved, so the output is deterministic.

    Raises:
        GenericityError: adjacent vertices outside one cluster share a height
    """
    check_heights(s, f)
    crit = critical_points(s, f)
    critical = sorted({f[v] for v in crit})
    values = sorted(set(f.values[v] for v in s.vertices))
    cuts = _regular_values(values, critical)
    logger.debug("sweep over %d critical values, %d cuts", len(critical), len(cuts))

    circles: List[List[LevelCircle]] = []
    circle_of: List[Dict[MeshEdge, int]] = []
    for r in cuts:
        comps = level_components(s, f, r)
        row = [LevelCircle(r, frozenset(e for _, e in comp)) for comp in comps]
        circles.append(row)
        circle_of.append({e: k for k, c in enumerate(row) for e in c.edges})

    # slab i spans (cuts[i-1], cuts[i]) and contains critical value i
    Component = Tuple[int, Hashable]
    members: Dict[Component, List[str]] = {}
    lower: Dict[Component, List[int]] = {}
    upper: Dict[Component, List[int]] = {}
    comp_above: Dict[Tuple[int, int], Component] = {}
    for i in range(len(critical)):
        lo = cuts[i - 1] if i > 0 else None
        hi = cuts[i] if i < len(cuts) else None
        uf = slab_components(s, f, lo, hi)
        for element in list(uf):
            comp = (i, uf[element])
            members.setdefault(comp, [])
            lower.setdefault(comp, [])
            upper.setdefault(comp, [])
            tag, item = element
            if tag == "v" and item in crit:
                members[comp].append(item)
            elif tag == "lo":
                k = circle_of[i - 1][item]
                if k not in lower[comp]:
                    lower[comp].append(k)
                    comp_above[(i - 1, k)] = comp
            elif tag == "hi":
                k = circle_of[i][item]
                if k not in upper[comp]:
                    upper[comp].append(k)

    nodes = [
        comp
        for comp in members
        if members[comp] or (len(lower[comp]), len(upper[comp])) != (1, 1)
    ]
    nodes.sort(key=lambda c: (critical[c[0]], sorted(members[c]) or [str(c[1])]))
    node_id = {comp: f"r{k}" for k, comp in enumerate(nodes)}

    traced = []
    for comp in nodes:
        i = comp[0]
        for k in sorted(upper[comp]):
            start = (i, k)
            path = [circles[i][k]]
            nxt = comp_above[start]
            while nxt not in node_id:
                (k2,) = upper[nxt]
                path.append(circles[nxt[0]][k2])
                nxt = comp_above[(nxt[0], k2)]
            traced.append((node_id[comp], node_id[nxt], min(path[0].edges), tuple(path)))

    order = {rid: k for k, rid in enumerate(node_id[c] for c in nodes)}
    traced.sort(key=lambda t: (order[t[0]], order[t[1]], t[2]))
    edges = []
    edge_circles: Dict[str, Tuple[LevelCircle, ...]] = {}
    for k, (src, dst, _, path) in enumerate(traced):
        edges.append(Edge(f"a{k}", src, dst))
        edge_circles[f"a{k}"] = path

    heights = {node_id[c]: critical[c[0]] for c in nodes}
    graph = ReebDigraph(tuple(node_id[c] for c in nodes), tuple(edges), heights)
    quotient = ReebQuotient(
        critical_values=tuple(critical),
        regular_values=tuple(cuts),
        vertex_members={node_id[c]: tuple(sorted(members[c])) for c in nodes},
        edge_circles=edge_circles,
    )
    logger.debug("Reeb digraph: %d vertices, %d edges", len(graph.vertices), len(graph.edges))
    return graph, quotient


def locate_vertex(
    s: TriSurface, f: PLHeights, quotient: ReebQuotient, x: str
) -> Tuple[str, str]:
    """
    The Reeb element containing mesh vertex ``x``.

    Returns:
        ("vertex", id) or ("edge", id)
    """
    level = f[x]
    for comp in level_components(s, f, level):
        if ("v", x) not in comp:
            continue
        for tag, item in comp:
            if tag == "v":
                for rid, crit in quotient.vertex_members.items():
                    if item in crit:
                        return "vertex", rid
    return "edge", locate_level_piece(s, f, quotient, level, ("v", x))


def locate_level_piece(
    s: TriSurface,
    f: PLHeights,
    quotient: ReebQuotient,
    level: Fraction,
    element: tuple,
) -> str:
    """
    The Reeb edge carrying a regular level piece.

    ``element`` is a level-set element at ``level`` (see
    ``level_components``) that lies on no critical component.

    Raises:
        PreconditionError: the level is outside the swept range
    """
    critical = quotient.critical_values
    if not critical[0] < level < critical[-1]:
        raise PreconditionError(f"Level {level} is outside the open range of the function")
    i = max(k for k, c in enumerate(critical) if c <= level)
    cut = quotient.regular_values[i]
    tag, item = element
    if level == cut:
        rid = quotient.edge_of_circle(cut, item) if tag == "e" else None
    else:
        lo, hi = min(level, cut), max(level, cut)
        near = "lo" if level == lo else "hi"
        far = "hi" if near == "lo" else "lo"
        uf = slab_components(s, f, lo, hi)
        root = uf[(near, item) if tag == "e" else ("v", item)]
        rid = None
        for side, e in list(uf):
            if side == far and uf[(side, e)] == root:
                rid = quotient.edge_of_circle(cut, e)
                break
    if rid is None:
        raise PreconditionError(f"No Reeb edge carries level piece {element} at {level}")
    return rid


def dense_sampling_reeb(s: TriSurface, f: PLHeights) -> ReebDigraph:
    """
    Reeb digraph by brute-force level sampling, used as an oracle.

    Samples every mesh height plus three levels between consecutive
    heights (4 * distinct heights + 1 levels in all), joins level
    components of neighbouring samples through the slab between them and
    contracts the regular runs.
    """
    check_heights(s, f)
    values = sorted(set(f.values[v] for v in s.vertices))
    levels = [values[0] - 1]
    for k, v in enumerate(values):
        nxt = values[k + 1] if k + 1 < len(values) else v + 4
        levels.append(v)
        levels.extend(v + (nxt - v) * j / 4 for j in (1, 2, 3))

    critical = {
        v for v in s.vertices if classify_vertex(s, f, v).is_critical
    }
    samples = [level_components(s, f, level) for level in levels]
    sample_graph = nx.DiGraph()
    keep = set()
    for k, comps in enumerate(samples):
        for idx, comp in enumerate(comps):
            sample_graph.add_node((k, idx))
            if any(tag == "v" and item in critical for tag, item in comp):
                keep.add((k, idx))

    for k in range(len(levels) - 1):
        uf = slab_components(s, f, levels[k], levels[k + 1])
        below: Dict[Hashable, List[int]] = {}
        for idx, comp in enumerate(samples[k]):
            tag, item = min(comp)
            element = ("lo", item) if tag == "e" else ("v", item)
            below.setdefault(uf[element], []).append(idx)
        for idx, comp in enumerate(samples[k + 1]):
            tag, item = min(comp)
            element = ("hi", item) if tag == "e" else ("v", item)
            for low in below.get(uf[element], []):
                sample_graph.add_edge((k, low), (k + 1, idx))

    for node in sample_graph:
        if sample_graph.in_degree(node) != 1 or sample_graph.out_degree(node) != 1:
            keep.add(node)

    kept = sorted(keep, key=lambda n: (levels[n[0]], min(samples[n[0]][n[1]])))
    names = {n: f"d{k}" for k, n in enumerate(kept)}
    traced = []
    for n in kept:
        for succ in sorted(sample_graph.successors(n)):
            while succ not in names:
                (succ,) = sample_graph.successors(succ)
            traced.append((names[n], names[succ]))
    edges = [Edge(f"b{k}", src, dst) for k, (src, dst) in enumerate(traced)]
    heights = {names[n]: levels[n[0]] for n in kept}
    return ReebDigraph(tuple(names[n] for n in kept), tuple(edges), heights)
