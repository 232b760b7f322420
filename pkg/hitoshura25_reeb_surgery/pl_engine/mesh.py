"""
Closed triangulated surfaces and piecewise-linear height functions.

Vertices are string ids, triangles are ordered vertex triples. A height
function assigns an exact rational to every vertex and may declare
clusters: sets of vertices that share one value and are treated as a
single degenerate critical point.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from ..errors import GenericityError, SurfaceError

logger = logging.getLogger(__name__)

Triangle = Tuple[str, str, str]
MeshEdge = Tuple[str, str]


def mesh_edge(a: str, b: str) -> MeshEdge:
    """Canonical (sorted) key of an undirected mesh edge."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class TriSurface:
    """
    Triangulation of a closed connected surface.

    Every edge lies on exactly two triangles and the link of every vertex
    is a single cycle. Both conditions are checked on construction.
    """

    vertices: Tuple[str, ...]
    triangles: Tuple[Triangle, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "triangles", tuple(tuple(t) for t in self.triangles))
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise SurfaceError("Duplicate vertex ids in triangulation")
        seen = set()
        for tri in self.triangles:
            if len(tri) != 3 or len(set(tri)) != 3:
                raise SurfaceError(f"Degenerate triangle {tri}")
            for v in tri:
                if v not in known:
                    raise SurfaceError(f"Triangle {tri} references unknown vertex '{v}'")
            key = frozenset(tri)
            if key in seen:
                raise SurfaceError(f"Triangle {tri} appears twice")
            seen.add(key)
        for e, tris in self._edge_triangles.items():
            if len(tris) != 2:
                raise SurfaceError(
                    f"Edge {e} lies on {len(tris)} triangles; a closed surface needs exactly 2"
                )
        for v in self.vertices:
            link = self._links.get(v)
            if link is None:
                raise SurfaceError(f"Vertex '{v}' is not used by any triangle")
            if not (nx.is_connected(link) and all(d == 2 for _, d in link.degree())):
                raise SurfaceError(f"Link of vertex '{v}' is not a single cycle")
        if not nx.is_connected(self.one_skeleton()):
            raise SurfaceError("Triangulation is not connected")

    @cached_property
    def _edge_triangles(self) -> Dict[MeshEdge, List[int]]:
        index: Dict[MeshEdge, List[int]] = {}
        for i, (a, b, c) in enumerate(self.triangles):
            for x, y in ((a, b), (b, c), (c, a)):
                index.setdefault(mesh_edge(x, y), []).append(i)
        return index

    @cached_property
    def _links(self) -> Dict[str, nx.Graph]:
        links: Dict[str, nx.Graph] = {}
        for a, b, c in self.triangles:
            for v, x, y in ((a, b, c), (b, c, a), (c, a, b)):
                links.setdefault(v, nx.Graph()).add_edge(x, y)
        return links

    @cached_property
    def edges(self) -> Tuple[MeshEdge, ...]:
        return tuple(sorted(self._edge_triangles))

    def link(self, v: str) -> nx.Graph:
        """The link cycle of ``v`` as an undirected graph on its neighbours."""
        return self._links[v]

    def neighbors(self, v: str) -> List[str]:
        return sorted(self._links[v].nodes)

    def edge_triangles(self, a: str, b: str) -> List[Triangle]:
        return [self.triangles[i] for i in self._edge_triangles[mesh_edge(a, b)]]

    def has_edge(self, a: str, b: str) -> bool:
        return mesh_edge(a, b) in self._edge_triangles

    def one_skeleton(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self._edge_triangles)
        return g


def euler_characteristic(s: TriSurface) -> int:
    """V - E + F."""
    return len(s.vertices) - len(s.edges) + len(s.triangles)


def is_orientable(s: TriSurface) -> bool:
    """Try to orient all triangles coherently by flooding across shared edges."""
    flip: Dict[int, bool] = {}
    tri_edges = s._edge_triangles

    def directed(i: int, reverse: bool) -> List[MeshEdge]:
        a, b, c = s.triangles[i]
        pairs = [(a, b), (b, c), (c, a)]
        return [(y, x) for x, y in pairs] if reverse else pairs

    for start in range(len(s.triangles)):
        if start in flip:
            continue
        flip[start] = False
        stack = [start]
        while stack:
            i = stack.pop()
            for x, y in directed(i, flip[i]):
                (j,) = [k for k in tri_edges[mesh_edge(x, y)] if k != i]
                # the neighbour must traverse the shared edge as (y, x)
                wanted = (y, x) not in directed(j, False)
                if j in flip:
                    if flip[j] != wanted:
                        return False
                else:
                    flip[j] = wanted
                    stack.append(j)
    return True


@dataclass(frozen=True)
class PLHeights:
    """Vertex heights plus declared equal-height critical clusters."""

    values: Dict[str, Fraction]
    clusters: Tuple[FrozenSet[str], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(
            self, "values", {v: Fraction(h) for v, h in self.values.items()}
        )
        object.__setattr__(
            self, "clusters", tuple(frozenset(c) for c in self.clusters if c)
        )
        for cluster in self.clusters:
            missing = [v for v in cluster if v not in self.values]
            if missing:
                raise GenericityError(f"Cluster member '{missing[0]}' has no height")
            if len({self.values[v] for v in cluster}) != 1:
                raise GenericityError(
                    f"Cluster {sorted(cluster)} mixes heights", pair=tuple(sorted(cluster))[:2]
                )

    def __getitem__(self, v: str) -> Fraction:
        return self.values[v]

    def key(self, v: str) -> Tuple[Fraction, str]:
        """Total order used to break ties between equal heights."""
        return (self.values[v], v)

    def cluster_of(self, v: str) -> Optional[FrozenSet[str]]:
        for cluster in self.clusters:
            if v in cluster:
                return cluster
        return None


def check_heights(s: TriSurface, f: PLHeights) -> None:
    """
    Verify that ``f`` covers ``s`` and is generic.

    Raises:
        GenericityError: a vertex lacks a height, or two adjacent vertices
            outside one common cluster share a height
    """
    for v in s.vertices:
        if v not in f.values:
            raise GenericityError(f"Vertex '{v}' has no height")
    for cluster in f.clusters:
        for v in cluster:
            if v not in s.vertices:
                raise GenericityError(f"Cluster member '{v}' is not a mesh vertex")
    for a, b in s.edges:
        if f[a] == f[b]:
            ca = f.cluster_of(a)
            if ca is None or b not in ca:
                raise GenericityError(
                    f"Adjacent vertices '{a}' and '{b}' share height {f[a]} "
                    f"outside a declared cluster",
                    pair=(a, b),
                )


@dataclass(frozen=True)
class VertexClass:
    """Lower-link classification of a mesh vertex or cluster."""

    kind: str
    multiplicity: int = 0

    def __str__(self) -> str:
        if self.kind == "saddle":
            return f"saddle({self.multiplicity})"
        return self.kind

    @property
    def is_critical(self) -> bool:
        return self.kind != "regular"


REGULAR = VertexClass("regular")
MINIMUM = VertexClass("minimum")
MAXIMUM = VertexClass("maximum")


def saddle(multiplicity: int) -> VertexClass:
    return VertexClass("saddle", multiplicity)


def _link_components(link: nx.Graph, members: Iterable[str]) -> int:
    return nx.number_connected_components(link.subgraph(members))


def classify_vertex(s: TriSurface, f: PLHeights, v: str) -> VertexClass:
    """
    Classify ``v`` by the components of its lower link.

    Equal heights are ordered by vertex id, so members of a cluster are
    classified individually; use ``classify_cluster`` for the aggregate.
    """
    link = s.link(v)
    mine = f.key(v)
    lower = [x for x in link if f.key(x) < mine]
    if not lower:
        return MINIMUM
    if len(lower) == len(link):
        return MAXIMUM
    n = _link_components(link, lower)
    return REGULAR if n == 1 else saddle(n - 1)


def classify_cluster(s: TriSurface, f: PLHeights, cluster: Iterable[str]) -> VertexClass:
    """
    Aggregate classification of a cluster of equal-height vertices.

    Saddle multiplicities add up. A cluster mixing extrema with other
    critical vertices has no single class.
    """
    classes = [classify_vertex(s, f, v) for v in sorted(cluster)]
    critical = [c for c in classes if c.is_critical]
    if not critical:
        return REGULAR
    if all(c.kind == "saddle" for c in critical):
        return saddle(sum(c.multiplicity for c in critical))
    if len(critical) == 1:
        return critical[0]
    raise GenericityError(
        f"Cluster {sorted(cluster)} mixes extrema with other critical vertices"
    )


def critical_points(s: TriSurface, f: PLHeights) -> Dict[str, VertexClass]:
    """Every non-regular vertex with its class."""
    found = {}
    for v in s.vertices:
        c = classify_vertex(s, f, v)
        if c.is_critical:
            found[v] = c
    logger.debug("%d critical vertices out of %d", len(found), len(s.vertices))
    return found


def subdivide_midpoints(
    s: TriSurface,
    f: PLHeights,
    support: Optional[Dict[str, FrozenSet[str]]] = None,
) -> Tuple[TriSurface, PLHeights, Dict[str, FrozenSet[str]]]:
    """
    Split every triangle into four through its edge midpoints.

    Midpoint heights are averages, so the function is unchanged as a
    piecewise-linear map. ``support`` records, for every vertex, the
    original vertices whose hull contains it; it is threaded through
    repeated rounds.

    Returns:
        (refined surface, refined heights, support map)
    """
    support = dict(support or {v: frozenset([v]) for v in s.vertices})
    mid: Dict[MeshEdge, str] = {}
    values = dict(f.values)
    clusters = [set(c) for c in f.clusters]
    taken = set(s.vertices)
    for a, b in s.edges:
        name = f"{a}|{b}"
        while name in taken:
            name += "'"
        taken.add(name)
        mid[(a, b)] = name
        values[name] = (f[a] + f[b]) / 2
        support[name] = support[a] | support[b]
        for c in clusters:
            if a in c and b in c:
                c.add(name)

    triangles: List[Triangle] = []
    for a, b, c in s.triangles:
        ab, bc, ca = mid[mesh_edge(a, b)], mid[mesh_edge(b, c)], mid[mesh_edge(c, a)]
        triangles.extend([(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)])

    vertices = tuple(s.vertices) + tuple(mid[e] for e in s.edges)
    return (
        TriSurface(vertices, tuple(triangles)),
        PLHeights(values, tuple(frozenset(c) for c in clusters)),
        support,
    )
