"""
Reeb Surgery

Connected sums of Reeb digraphs, G-simple critical-point bookkeeping,
augmentation of tree hosts, and a PL engine that checks the constructions
on triangulated surfaces.
"""

__version__ = "0.1.0"
__author__ = "Vinayak Menon"
__license__ = "Apache-2.0"

from .errors import ReebSurgeryError
from .formats_io import export_dot, parse_graph, serialize_graph
from .reeb_core import (
    EdgeInteriorPoint,
    ReebDigraph,
    VertexPoint,
    digraph_isomorphic,
    parse_point,
    validate_good_digraph,
)
from .surgery import (
    critical_split,
    glue_gs_counts,
    gs_check,
    theorem3_augment,
    theorem3_count,
    wedge_connected_sum,
)

__all__ = [
    "EdgeInteriorPoint",
    "ReebDigraph",
    "ReebSurgeryError",
    "critical_split",
    "digraph_isomorphic",
    "export_dot",
    "glue_gs_counts",
    "gs_check",
    "parse_graph",
    "parse_point",
    "serialize_graph",
    "theorem3_augment",
    "theorem3_count",
    "VertexPoint",
    "validate_good_digraph",
    "wedge_connected_sum",
]
