"""
Realization of a good Reeb digraph as a PL function on a closed surface.

Every digraph edge becomes a tube of polygonal rings, every vertex a
small piece joining the rings of its incident edges:

- degree 1: a cone (minimum or maximum) over one ring
- one edge in, one edge out: a cross-cap with a single saddle
- one side of degree 1, the other of degree k >= 2: a lens cut by k - 1 saddles
- p >= 2 in and q >= 2 out: a ring of holes carrying p + q - 2 saddles

All saddles of a vertex sit at the vertex height in one level component
and are declared as one cluster.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Sequence, Tuple

from ..errors import PreconditionError
from ..reeb_core import ReebDigraph, height_assignment, require_good
from .mesh import PLHeights, TriSurface, Triangle

logger = logging.getLogger(__name__)

CIRCLE_SEGMENTS = 8
TUBE_RINGS = 5


@dataclass(frozen=True)
class Placement:
    """Where the elements of the digraph ended up on the mesh."""

    vertex_features: Dict[str, Tuple[str, ...]]
    edge_rings: Dict[str, Tuple[Tuple[str, ...], ...]]


class Realization(NamedTuple):
    surface: TriSurface
    heights: PLHeights
    placement: Placement


def zipper(ring: Sequence[str], loop: Sequence[str]) -> List[Triangle]:
    """
    Triangulate the annulus between two closed vertex cycles.

    The cycles are walked in step; a loop may repeat a vertex as long as
    its occurrences are far enough apart.
    """
    n, m = len(ring), len(loop)
    i = j = 0
    triangles: List[Triangle] = []
    while i < n or j < m:
        if j == m or (i < n and (i + 1) * m <= (j + 1) * n):
            triangles.append((ring[i], ring[(i + 1) % n], loop[j % m]))
            i += 1
        else:
            triangles.append((ring[i % n], loop[(j + 1) % m], loop[j]))
            j += 1
    return triangles


class _Builder:
    def __init__(self, w: ReebDigraph, heights: Dict[str, Fraction], segments: int):
        self.w = w
        self.h = heights
        self.n = segments
        self.values: Dict[str, Fraction] = {}
        self.triangles: List[Triangle] = []
        self.clusters: List[frozenset] = []
        self.features: Dict[str, Tuple[str, ...]] = {}
        self.rings: Dict[str, Tuple[Tuple[str, ...], ...]] = {}

    def span(self, e: str) -> Fraction:
        edge = self.w.edge(e)
        return self.h[edge.dst] - self.h[edge.src]

    def tube(self, e: str) -> None:
        edge = self.w.edge(e)
        span = self.span(e)
        rings = []
        for k in range(TUBE_RINGS):
            level = self.h[edge.src] + span * (k + 2) / 8
            ring = tuple(f"{e}@{k}.{j}" for j in range(self.n))
            for j, v in enumerate(ring):
                self.values[v] = level + span * (j + 1) / (32 * self.n)
            rings.append(ring)
        for lower, upper in zip(rings, rings[1:]):
            self.triangles.extend(zipper(lower, upper))
        self.rings[e] = tuple(rings)

    def node(self, v: str) -> None:
        below = [self.rings[e][-1] for e in sorted(self.w.in_edges(v))]
        above = [self.rings[e][0] for e in sorted(self.w.out_edges(v))]
        incident = self.w.in_edges(v) + self.w.out_edges(v)
        self.delta = min(self.span(e) for e in incident) / 8
        self.base = self.h[v]
        self.prefix = f"{v}#"
        p, q = len(below), len(above)
        if p + q == 1:
            saddles = self._cap(below + above)
        elif p == 1 and q == 1:
            saddles = self._cross_cap(below[0], above[0])
        elif q == 1:
            saddles = self._lens(above[0], below)
        elif p == 1:
            saddles = self._lens(below[0], above)
        else:
            saddles = self._ring_of_holes(below, above)
        self.features[v] = tuple(saddles)
        if len(saddles) > 1:
            self.clusters.append(frozenset(saddles))

    def _point(self, tag: str, offset: Fraction = Fraction(0)) -> str:
        name = self.prefix + tag
        self.values[name] = self.base + offset
        return name

    def _mids(self, count: int) -> List[str]:
        return [
            self._point(f"m{k}", self.delta * k / (count + 1)) for k in range(1, count + 1)
        ]

    def _cap(self, rings: List[Tuple[str, ...]]) -> List[str]:
        (ring,) = rings
        apex = self._point("apex")
        for j in range(self.n):
            self.triangles.append((apex, ring[j], ring[(j + 1) % self.n]))
        return [apex]

    def _cross_cap(self, lower: Tuple[str, ...], upper: Tuple[str, ...]) -> List[str]:
        s = self._point("s1")
        a1, b1, a2, b2 = self._mids(4)
        self.triangles.extend(zipper(lower, [s, a1, b1, s, a2, b2]))
        self.triangles.extend(zipper(upper, [s, a1, b1, s, b2, a2]))
        return [s]

    def _lens(self, whole: Tuple[str, ...], parts: List[Tuple[str, ...]]) -> List[str]:
        k = len(parts)
        top, bottom = self.n // 4, 3 * self.n // 4
        saddles = [self._point(f"s{i}") for i in range(1, k)]
        west = [whole[j] for j in range(top, bottom + 1)]
        east = [whole[j % self.n] for j in range(bottom, self.n + top + 1)]
        loops = [west + [saddles[0]]]
        for i in range(1, k - 1):
            loops.append([whole[top], saddles[i - 1], whole[bottom], saddles[i]])
        loops.append(east + [saddles[-1]])
        for ring, loop in zip(parts, loops):
            self.triangles.extend(zipper(ring, loop))
        return saddles

    def _ring_of_holes(
        self, below: List[Tuple[str, ...]], above: List[Tuple[str, ...]]
    ) -> List[str]:
        p, q = len(below), len(above)
        s = [self._point(f"s{i}") for i in range(1, p)]
        t = [self._point(f"t{k}") for k in range(1, q)]
        mids = iter(self._mids(2 * p + 2 * (q - 2)))
        inner = [next(mids) for _ in range(p)]
        outer = [next(mids) for _ in range(p)]
        side1 = [next(mids) for _ in range(q - 2)]
        sidep = [next(mids) for _ in range(q - 2)]

        first = [s[0], outer[0], t[-1]]
        for k in range(q - 3, -1, -1):
            first += [side1[k], t[k]]
        first.append(inner[0])
        last = [s[-1], inner[-1], t[0]]
        for k in range(q - 2):
            last += [sidep[k], t[k + 1]]
        last.append(outer[-1])
        lower_loops = [first]
        for i in range(1, p - 1):
            lower_loops.append([s[i - 1], outer[i], s[i], inner[i]])
        lower_loops.append(last)

        inside = [t[0], inner[0]]
        outside = [t[-1], outer[0]]
        for i in range(1, p):
            inside += [s[i - 1], inner[i]]
            outside += [s[i - 1], outer[i]]
        upper_loops = [inside, outside]
        for k in range(q - 2):
            upper_loops.append([t[k], side1[k], t[k + 1], sidep[k]])

        for ring, loop in zip(below, lower_loops):
            self.triangles.extend(zipper(ring, loop))
        for ring, loop in zip(above, upper_loops):
            self.triangles.extend(zipper(ring, loop))
        return s + t


def realize(w: ReebDigraph, segments: int = CIRCLE_SEGMENTS) -> Realization:
    """
    Build a closed triangulated surface whose PL height function has
    Reeb digraph isomorphic to ``w``.

    Heights come from ``w`` when it carries them, otherwise from its
    longest-path layering.

    Args:
        w: A good Reeb digraph
        segments: Vertices per ring; a multiple of 4, at least 8

    Returns:
        Realization(surface, heights, placement)

    Raises:
        ValidityError: ``w`` is not good
        PreconditionError: unusable ``segments``
    """
    require_good(w, "realized digraph")
    if segments < 8 or segments % 4:
        raise PreconditionError(f"Ring size must be a multiple of 4, at least 8; got {segments}")
    heights = dict(w.heights) if w.heights is not None else height_assignment(w)
    builder = _Builder(w, heights, segments)
    for e in sorted(x.id for x in w.edges):
        builder.tube(e)
    for v in sorted(w.vertices):
        builder.node(v)

    surface = TriSurface(tuple(sorted(builder.values)), tuple(builder.triangles))
    pl = PLHeights(builder.values, tuple(builder.clusters))
    logger.debug(
        "realized %d vertices, %d edges as %d triangles",
        len(w.vertices),
        len(w.edges),
        len(surface.triangles),
    )
    return Realization(
        surface, pl, Placement(dict(builder.features), dict(builder.rings))
    )
