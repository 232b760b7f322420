"""
PL verification engine: surfaces, PL Morse classification, Reeb sweep,
realization of digraphs and connected sums along regular strips.
"""

from .fixtures import flat_torus, octahedron, projective_plane, standing_torus
from .mesh import (
    MAXIMUM,
    MINIMUM,
    REGULAR,
    PLHeights,
    TriSurface,
    VertexClass,
    check_heights,
    classify_cluster,
    classify_vertex,
    critical_points,
    euler_characteristic,
    is_orientable,
    saddle,
    subdivide_midpoints,
)
from .realize import CIRCLE_SEGMENTS, Placement, Realization, realize
from .strips import (
    MAX_REFINEMENT_ROUNDS,
    RegularStrip,
    connected_sum_surfaces,
    find_regular_strip,
)
from .sweep import ReebQuotient, dense_sampling_reeb, locate_vertex, pl_reeb

__all__ = [
    "CIRCLE_SEGMENTS",
    "MAXIMUM",
    "MAX_REFINEMENT_ROUNDS",
    "MINIMUM",
    "PLHeights",
    "Placement",
    "REGULAR",
    "Realization",
    "ReebQuotient",
    "RegularStrip",
    "TriSurface",
    "VertexClass",
    "check_heights",
    "classify_cluster",
    "classify_vertex",
    "connected_sum_surfaces",
    "critical_points",
    "dense_sampling_reeb",
    "euler_characteristic",
    "find_regular_strip",
    "flat_torus",
    "is_orientable",
    "locate_vertex",
    "octahedron",
    "pl_reeb",
    "projective_plane",
    "realize",
    "saddle",
    "standing_torus",
    "subdivide_midpoints",
]
