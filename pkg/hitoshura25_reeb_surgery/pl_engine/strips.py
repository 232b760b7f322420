"""
Regular strips and the connected sum of two surfaces along them.

A regular strip is a ladder of triangles whose two sides climb
monotonically, so that every level in its window meets it in one arc and
no critical vertex touches it. The connected sum opens a short slit in
one triangle of each strip, at the level of the chosen Reeb point, and
glues the upper lip of each slit to the lower lip of the other. Both
slit ends become saddles at that level, which is exactly the single new
vertex of the wedge of the two Reeb digraphs.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from ..errors import PreconditionError, StripNotFoundError
from ..reeb_core import (
    EdgeInteriorPoint,
    PointSpec,
    VertexPoint,
    fresh_id,
    point_height,
)
from ..surgery import HALF, check_wedge_point, half_rescaler
from .mesh import (
    PLHeights,
    TriSurface,
    Triangle,
    critical_points,
    euler_characteristic,
    subdivide_midpoints,
)
from .sweep import ReebQuotient, crosses, level_components, locate_level_piece, pl_reeb

logger = logging.getLogger(__name__)

MAX_REFINEMENT_ROUNDS = 3


@dataclass(frozen=True)
class RegularStrip:
    """
    A monotone band of triangles around a Reeb point.

    Attributes:
        surface: Mesh the band lives on (refined when ``rounds`` > 0)
        heights: Heights on that mesh
        point: The Reeb point, on the Reeb digraph of the unrefined input
        level: Height of the Reeb point
        window: (l, u) with l < level < u; every level in it meets the band in one arc
        triangles: The band, bottom to top
        anchor: Band triangle crossed by ``level`` where surgery cuts
        members: Critical vertices of the Reeb vertex beside the band (vertex points only)
        rounds: Subdivision rounds that were needed
    """

    surface: TriSurface
    heights: PLHeights
    point: PointSpec
    level: Fraction
    window: Tuple[Fraction, Fraction]
    triangles: Tuple[Triangle, ...]
    anchor: Triangle
    members: Tuple[str, ...] = ()
    rounds: int = 0


def _opposite(s: TriSurface, tri: Triangle, x: str, y: str) -> str:
    (other,) = [t for t in s.edge_triangles(x, y) if set(t) != set(tri)]
    (w,) = [v for v in other if v not in (x, y)]
    return w


def _grow(
    s: TriSurface,
    f: PLHeights,
    rung: Tuple[str, str],
    tri: Triangle,
    upward: bool,
    bound: Fraction,
    blocked: Set[str],
    used: Set[str],
) -> Optional[List[Triangle]]:
    """Extend a ladder from ``rung`` through ``tri`` until it clears ``bound``."""
    out: List[Triangle] = []
    for _ in range(len(s.triangles)):
        (z,) = [v for v in tri if v not in rung]
        if z in blocked or z in used:
            return None
        lo, hi = sorted(rung, key=f.key)
        if upward:
            if f[z] <= f[lo]:
                return None
            rung = (z, hi)
        else:
            if f[z] >= f[hi]:
                return None
            rung = (lo, z)
        used.add(z)
        out.append(tri)
        ends = (f[rung[0]], f[rung[1]])
        if (upward and min(ends) >= bound) or (not upward and max(ends) <= bound):
            return out
        (tri,) = [t for t in s.edge_triangles(*rung) if set(t) != set(tri)]
    return None


def _ladder(
    s: TriSurface,
    f: PLHeights,
    anchor: Triangle,
    a: str,
    b: str,
    window: Tuple[Fraction, Fraction],
    blocked: Set[str],
) -> Optional[List[Triangle]]:
    (other,) = [t for t in s.edge_triangles(a, b) if set(t) != set(anchor)]
    up_tri, down_tri = (anchor, other) if f[a] < f[b] else (other, anchor)
    used = {a, b}
    down = _grow(s, f, (a, b), down_tri, False, window[0], blocked, used)
    if down is None:
        return None
    up = _grow(s, f, (a, b), up_tri, True, window[1], blocked, used)
    if up is None:
        return None
    return list(reversed(down)) + up


def _band_reeb_edge(
    s: TriSurface,
    f: PLHeights,
    q: ReebQuotient,
    band: List[Triangle],
    level: Fraction,
) -> Optional[str]:
    """Reeb edge carrying the band's arc at ``level``, if that arc is regular."""
    vertices = sorted({v for tri in band for v in tri})
    element = next((("v", v) for v in vertices if f[v] == level), None)
    if element is None:
        edges = sorted(
            {tuple(sorted((x, y))) for tri in band for x in tri for y in tri if x != y}
        )
        element = next((("e", e) for e in edges if crosses(f, e, level)), None)
    if element is None:
        return None
    try:
        return locate_level_piece(s, f, q, level, element)
    except PreconditionError:
        return None


def _edge_translation(
    original: ReebQuotient,
    s: TriSurface,
    f: PLHeights,
    q: ReebQuotient,
    support: Dict[str, FrozenSet[str]],
) -> Dict[str, str]:
    """Match Reeb edge ids of the input mesh to those of a refinement."""
    table = {}
    for rid, circles in original.edge_circles.items():
        circle = circles[0]
        allowed = set(min(circle.edges))
        element = next(
            (("v", x) for x in s.vertices if f[x] == circle.level and support[x] <= allowed),
            None,
        )
        if element is None:
            element = next(
                ("e", e)
                for e in s.edges
                if support[e[0]] | support[e[1]] <= allowed and crosses(f, e, circle.level)
            )
        table[rid] = locate_level_piece(s, f, q, circle.level, element)
    return table


def _target_component(
    s: TriSurface,
    f: PLHeights,
    q: ReebQuotient,
    level: Fraction,
    edge: Optional[str],
    members: Tuple[str, ...],
    critical: Set[str],
) -> FrozenSet[tuple]:
    for comp in level_components(s, f, level):
        if members:
            if ("v", members[0]) in comp:
                return comp
            continue
        if any(tag == "v" and x in critical for tag, x in comp):
            continue
        if locate_level_piece(s, f, q, level, min(comp)) == edge:
            return comp
    raise PreconditionError(f"No level component at {level} belongs to the chosen Reeb element")


def _search(
    s: TriSurface,
    f: PLHeights,
    q: ReebQuotient,
    level: Fraction,
    window: Tuple[Fraction, Fraction],
    edge: Optional[str],
    members: Tuple[str, ...],
    ends: Tuple[Optional[str], Optional[str]],
) -> Optional[Tuple[List[Triangle], Triangle]]:
    critical = set(critical_points(s, f))
    blocked = critical | {v for c in f.clusters for v in c}
    comp = _target_component(s, f, q, level, edge, members, critical)
    candidates = sorted(
        {
            tri
            for tag, e in comp
            if tag == "e"
            for tri in s.edge_triangles(*e)
            if all(f[v] != level for v in tri)
        }
    )
    for tri in candidates:
        if any(v in blocked for v in tri):
            continue
        below = [v for v in tri if f[v] < level]
        a = below[0] if len(below) == 1 else next(v for v in tri if f[v] > level)
        b, z = [v for v in tri if v != a]
        if f[_opposite(s, tri, a, b)] == level or f[_opposite(s, tri, a, z)] == level:
            continue
        band = _ladder(s, f, tri, a, b, window, blocked)
        if band is None:
            continue
        low, high = ends
        if low is not None and _band_reeb_edge(s, f, q, band, window[0]) != low:
            continue
        if high is not None and _band_reeb_edge(s, f, q, band, window[1]) != high:
            continue
        return band, tri
    return None


def find_regular_strip(
    s: TriSurface,
    f: PLHeights,
    point: PointSpec,
    window: Optional[Tuple[Fraction, Fraction]] = None,
    through: Optional[Tuple[str, str]] = None,
    max_rounds: int = MAX_REFINEMENT_ROUNDS,
) -> RegularStrip:
    """
    Find a regular strip around a point of the Reeb digraph of ``f``.

    Args:
        s: Closed surface
        f: Generic heights on ``s``
        point: Point of ``pl_reeb(s, f)``; an edge-interior point or a
            vertex with incoming and outgoing edges
        window: (l, u) around the point's height; defaults to half the gap
            to the nearest other mesh height on each side
        through: For a vertex point, the (incoming, outgoing) edge pair the
            strip must follow below and above the vertex
        max_rounds: Cap on global subdivision rounds

    Returns:
        RegularStrip

    Raises:
        ExtremumPointError: the point is a local extremum
        PreconditionError: the window does not contain the point's height,
            or ``through`` does not fit the point
        StripNotFoundError: nothing found within ``max_rounds`` refinements
    """
    graph, quotient = pl_reeb(s, f)
    check_wedge_point(graph, point, "Reeb")
    level = point_height(graph, point)
    members: Tuple[str, ...] = ()
    if isinstance(point, VertexPoint):
        members = quotient.vertex_members[point.vertex]
        if through is not None:
            e_in, e_out = through
            if e_in not in graph.in_edges(point.vertex) or e_out not in graph.out_edges(
                point.vertex
            ):
                raise PreconditionError(
                    f"Edges {through} do not enter and leave vertex {point.vertex!r}"
                )
    elif through is not None:
        raise PreconditionError("A through pair only applies to vertex points")

    if window is None:
        values = {f[v] for v in s.vertices} - {level}
        gap = min(abs(v - level) for v in values)
        window = (level - gap / 2, level + gap / 2)
    window = (Fraction(window[0]), Fraction(window[1]))
    if not window[0] < level < window[1]:
        raise PreconditionError(f"Window {window[0]}..{window[1]} must contain height {level}")

    surface, heights = s, f
    support = {v: frozenset([v]) for v in s.vertices}
    q = quotient
    table = {e.id: e.id for e in graph.edges}
    for rounds in range(max_rounds + 1):
        if rounds:
            surface, heights, support = subdivide_midpoints(surface, heights, support)
            _, q = pl_reeb(surface, heights)
            table = _edge_translation(quotient, surface, heights, q, support)
        if isinstance(point, EdgeInteriorPoint):
            edge = table[point.edge]
            ends = (edge, edge)
        else:
            edge = None
            ends = (table[through[0]], table[through[1]]) if through else (None, None)
        found = _search(surface, heights, q, level, window, edge, members, ends)
        if found is not None:
            band, anchor = found
            logger.debug(
                "strip of %d triangles around %s after %d refinement(s)", len(band), point, rounds
            )
            return RegularStrip(
                surface, heights, point, level, window, tuple(band), anchor, members, rounds
            )
        logger.debug("no strip around %s at refinement round %d", point, rounds)

    raise StripNotFoundError(
        f"No regular strip around {point} within {max_rounds} subdivision rounds",
        diagnostic={
            "point": str(point),
            "window": [str(window[0]), str(window[1])],
            "rounds": max_rounds,
            "triangles": len(surface.triangles),
        },
    )


def _open_slit(
    triangles: List[Triangle],
    values: Dict[str, Fraction],
    anchor: Triangle,
    names: Tuple[str, str, str, str],
) -> List[Triangle]:
    """
    Cut ``anchor`` along the path P - M - Q at height 1/2.

    P and Q sit on the two anchor edges crossing 1/2, M inside the anchor.
    M is split into an upper copy and a lower copy: the upper copy takes
    the fan triangles on the side holding vertices above M.
    """
    p, q, m_up, m_down = names
    below = [v for v in anchor if values[v] < HALF]
    a = below[0] if len(below) == 1 else next(v for v in anchor if values[v] > HALF)
    b, z = [v for v in anchor if v != a]
    values[p] = values[q] = HALF
    corner = m_down if values[a] < HALF else m_up
    rest = m_up if corner == m_down else m_down

    out: List[Triangle] = []
    for tri in triangles:
        pairs = list(zip(tri, tri[1:] + tri[:1]))
        if set(tri) == set(anchor):
            cycle: List[str] = []
            for x, y in pairs:
                cycle.append(x)
                if {x, y} == {a, b}:
                    cycle.append(p)
                elif {x, y} == {a, z}:
                    cycle.append(q)
            for x, y in zip(cycle, cycle[1:] + cycle[:1]):
                out.append((x, y, corner if a in (x, y) else rest))
            continue
        split = None
        for x, y in pairs:
            if {x, y} == {a, b}:
                split = (x, y, p)
            elif {x, y} == {a, z}:
                split = (x, y, q)
        if split is None:
            out.append(tri)
            continue
        x, y, mid = split
        (w,) = [v for v in tri if v not in (x, y)]
        out.extend([(x, mid, w), (mid, y, w)])
    return out


def _strip_mesh(s: TriSurface, f: PLHeights, strip: RegularStrip, label: str):
    if strip.rounds == 0 and (strip.surface != s or strip.heights.values != f.values):
        raise PreconditionError(f"The {label} strip was found on a different surface")
    return strip.surface, strip.heights


def connected_sum_surfaces(
    s1: TriSurface,
    f1: PLHeights,
    strip1: RegularStrip,
    s2: TriSurface,
    f2: PLHeights,
    strip2: RegularStrip,
    reverse: bool = False,
) -> Tuple[TriSurface, PLHeights]:
    """
    Connected sum of two surfaces whose Reeb digraph is the wedge of theirs.

    Both height functions are rescaled piecewise-affinely onto [0, 1] with
    the strip levels sent to 1/2; heights are then kept everywhere except
    inside the two anchor triangles. ``reverse`` glues with the opposite
    orientation.

    Returns:
        (surface, heights); the cluster of the new wedge vertex holds the
        two slit ends and any critical vertices the strips passed beside

    Raises:
        PreconditionError: a strip does not belong to its surface or its
            window no longer straddles 1/2 after rescaling
    """
    mesh1, heights1 = _strip_mesh(s1, f1, strip1, "first")
    mesh2, heights2 = _strip_mesh(s2, f2, strip2, "second")
    scale1 = half_rescaler(heights1.values.values(), strip1.level)
    scale2 = half_rescaler(heights2.values.values(), strip2.level)
    values1 = {v: scale1(h) for v, h in heights1.values.items()}
    values2 = {v: scale2(h) for v, h in heights2.values.items()}
    for strip, scale in ((strip1, scale1), (strip2, scale2)):
        if not scale(strip.window[0]) < HALF < scale(strip.window[1]):
            raise PreconditionError("Strip windows do not straddle 1/2 after rescaling")

    if set(mesh1.vertices) & set(mesh2.vertices):
        rename1 = {v: f"{v}_1" for v in mesh1.vertices}
        rename2 = {v: f"{v}_2" for v in mesh2.vertices}
    else:
        rename1 = {v: v for v in mesh1.vertices}
        rename2 = {v: v for v in mesh2.vertices}

    def moved(tris, rename):
        return [tuple(rename[v] for v in t) for t in tris]

    values: Dict[str, Fraction] = {rename1[v]: h for v, h in values1.items()}
    values.update({rename2[v]: h for v, h in values2.items()})
    anchor1 = tuple(rename1[v] for v in strip1.anchor)
    anchor2 = tuple(rename2[v] for v in strip2.anchor)
    lift = min(abs(values[v] - HALF) for v in anchor1 + anchor2) / 2

    taken = set(values)
    names = []
    for base in ("slit_p", "slit_q", "slit_m_up", "slit_m_down"):
        name = fresh_id(taken, base)
        taken.add(name)
        names.append(name)
    p, q, m_up, m_down = names
    values[m_up] = values[m_down] = HALF + lift

    triangles = _open_slit(moved(mesh1.triangles, rename1), values, anchor1, (p, q, m_up, m_down))
    ends = (q, p) if reverse else (p, q)
    triangles += _open_slit(
        moved(mesh2.triangles, rename2), values, anchor2, (ends[0], ends[1], m_down, m_up)
    )

    wedge = {p, q}
    wedge |= {rename1[v] for v in strip1.members} | {rename2[v] for v in strip2.members}
    clusters = [frozenset(rename1[v] for v in c) for c in heights1.clusters]
    clusters += [frozenset(rename2[v] for v in c) for c in heights2.clusters]
    clusters = [c for c in clusters if not c & wedge] + [frozenset(wedge)]

    surface = TriSurface(tuple(sorted(values)), tuple(triangles))
    result = PLHeights(values, tuple(clusters))
    logger.debug(
        "connected sum: chi %d + %d - 2 = %d",
        euler_characteristic(mesh1),
        euler_characteristic(mesh2),
        euler_characteristic(surface),
    )
    return surface, result
