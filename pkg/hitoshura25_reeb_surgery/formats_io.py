"""
Serialization of graphs, embeddings, annotations, meshes and reports.

Every document is a JSON object carrying ``"kind"`` and ``"version"``.
Parsing is strict by default: unknown fields are rejected with their JSON
path. Serialization is canonical (ids sorted, rationals in lowest terms),
so reserializing a canonical file reproduces it byte for byte.
"""

import json
import math
import os
from dataclasses import fields, is_dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Tuple

from jinja2 import Environment, FileSystemLoader

from .errors import ParseError, StructuralError
from .pl_engine.mesh import PLHeights, TriSurface
from .reeb_core import (
    Edge,
    EdgeInteriorPoint,
    ReebDigraph,
    VertexPoint,
    parse_point,
)
from .surgery import EmbeddingMap, GsAnnotation

FORMAT_VERSION = 1
KINDS = ("graph", "embedding", "annotation", "mesh", "report")
TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")


# Reading helpers -----------------------------------------------------------


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e.msg}", line=e.lineno, column=e.colno)


def _object(
    value: Any,
    path: str,
    required: Iterable[str],
    optional: Iterable[str] = (),
    strict: bool = True,
) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise StructuralError(f"Expected an object at {path}", element_id=path)
    required = tuple(required)
    for key in required:
        if key not in value:
            raise StructuralError(f"Missing field {path}.{key}", element_id=f"{path}.{key}")
    if strict:
        allowed = set(required) | set(optional)
        for key in value:
            if key not in allowed:
                raise StructuralError(
                    f"Unknown field {path}.{key}\n"
                    f"Solutions:\n"
                    f"  - Remove the field\n"
                    f"  - Parse in lax mode (--lax) to ignore unknown fields",
                    element_id=f"{path}.{key}",
                )
    return value


def _mapping(value: Any, path: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise StructuralError(f"Expected an object at {path}", element_id=path)
    return value


def _array(value: Any, path: str) -> List[Any]:
    if not isinstance(value, list):
        raise StructuralError(f"Expected an array at {path}", element_id=path)
    return value


def _string(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise StructuralError(f"Expected a non-empty string at {path}", element_id=path)
    return value


def _rational(value: Any, path: str) -> Fraction:
    # floats are rejected; heights must be exact
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise StructuralError(
            f"Expected a rational \"p/q\" at {path}, got {value!r}", element_id=path
        )
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise StructuralError(f"Bad rational {value!r} at {path}", element_id=path)


def _document(
    text: str,
    kind: str,
    strict: bool,
    required: Iterable[str],
    optional: Iterable[str] = (),
    free_form: bool = False,
) -> Dict[str, Any]:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise StructuralError("Expected a JSON object at $", element_id="$")
    found = doc.get("kind")
    if found is None:
        if strict:
            raise StructuralError(f"Missing field $.kind (expected {kind!r})", element_id="$.kind")
    elif found != kind:
        raise StructuralError(f"Expected a {kind} document, got kind {found!r}", element_id="$.kind")
    version = doc.get("version")
    if version is None:
        if strict:
            raise StructuralError("Missing field $.version", element_id="$.version")
    elif version != FORMAT_VERSION:
        raise StructuralError(
            f"Unsupported {kind} document version {version!r}; this build reads "
            f"version {FORMAT_VERSION}",
            element_id="$.version",
        )
    if free_form:
        return doc
    return _object(doc, "$", required, ("kind", "version", *optional), strict)


def _dump(kind: str, payload: Mapping[str, Any]) -> str:
    document = {"kind": kind, "version": FORMAT_VERSION}
    document.update(payload)
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


# Graphs --------------------------------------------------------------------


def _graph_payload(g: ReebDigraph) -> Dict[str, Any]:
    vertices = []
    for v in sorted(g.vertices):
        entry: Dict[str, Any] = {"id": v}
        if g.heights is not None:
            entry["height"] = str(g.heights[v])
        vertices.append(entry)
    edges = [
        {"id": e.id, "src": e.src, "dst": e.dst}
        for e in sorted(g.edges, key=lambda e: e.id)
    ]
    return {"vertices": vertices, "edges": edges}


def serialize_graph(g: ReebDigraph) -> str:
    """Canonical graph document for ``g``."""
    return _dump("graph", _graph_payload(g))


def _read_graph(doc: Mapping[str, Any], strict: bool) -> ReebDigraph:
    vertices: List[str] = []
    heights: Dict[str, Fraction] = {}
    for i, item in enumerate(_array(doc["vertices"], "$.vertices")):
        path = f"$.vertices[{i}]"
        _object(item, path, ("id",), ("height",), strict)
        vid = _string(item["id"], f"{path}.id")
        vertices.append(vid)
        if "height" in item:
            heights[vid] = _rational(item["height"], f"{path}.height")
    if heights and len(heights) != len(vertices):
        missing = next(v for v in vertices if v not in heights)
        raise StructuralError(
            f"Vertex {missing!r} has no height; give every vertex a height or none",
            element_id=missing,
        )

    edges: List[Edge] = []
    for i, item in enumerate(_array(doc["edges"], "$.edges")):
        path = f"$.edges[{i}]"
        _object(item, path, ("id", "src", "dst"), (), strict)
        edges.append(
            Edge(
                _string(item["id"], f"{path}.id"),
                _string(item["src"], f"{path}.src"),
                _string(item["dst"], f"{path}.dst"),
            )
        )
    return ReebDigraph(
        tuple(sorted(vertices)),
        tuple(sorted(edges, key=lambda e: e.id)),
        heights or None,
    )


def parse_graph(text: str, strict: bool = True) -> ReebDigraph:
    """
    Parse a graph document.

    Args:
        text: JSON text
        strict: Reject unknown fields and a missing envelope

    Returns:
        ReebDigraph in canonical order

    Raises:
        ParseError: Malformed JSON, with line and column
        StructuralError: Unknown fields, dangling or duplicate ids
    """
    doc = _document(text, "graph", strict, ("vertices", "edges"))
    return _read_graph(doc, strict)


# Embeddings and annotations ------------------------------------------------


def serialize_embedding(phi: EmbeddingMap) -> str:
    return _dump(
        "embedding",
        {
            "vertex_image": {v: str(p) for v, p in sorted(phi.vertex_image.items())},
            "edge_image": {e: list(path) for e, path in sorted(phi.edge_image.items())},
        },
    )


def parse_embedding(text: str, strict: bool = True) -> EmbeddingMap:
    doc = _document(text, "embedding", strict, ("vertex_image", "edge_image"))
    vertex_image = {}
    for v, spec in sorted(_mapping(doc["vertex_image"], "$.vertex_image").items()):
        path = f"$.vertex_image.{v}"
        try:
            vertex_image[v] = parse_point(_string(spec, path))
        except StructuralError as e:
            raise StructuralError(f"{path}: {e}", element_id=v) from e
    edge_image = {}
    for e, edge_path in sorted(_mapping(doc["edge_image"], "$.edge_image").items()):
        path = f"$.edge_image.{e}"
        edge_image[e] = [
            _string(x, f"{path}[{i}]") for i, x in enumerate(_array(edge_path, path))
        ]
    return EmbeddingMap(vertex_image, edge_image)


def serialize_annotation(ann: GsAnnotation) -> str:
    return _dump("annotation", {"counts": dict(sorted(ann.counts.items()))})


def parse_annotation(text: str, strict: bool = True) -> GsAnnotation:
    doc = _document(text, "annotation", strict, ("counts",))
    result = {}
    for v, count in sorted(_mapping(doc["counts"], "$.counts").items()):
        if isinstance(count, bool) or not isinstance(count, int):
            raise StructuralError(f"Expected an integer at $.counts.{v}", element_id=v)
        result[v] = count
    return GsAnnotation(result)


# Meshes --------------------------------------------------------------------


def serialize_mesh(s: TriSurface, f: PLHeights) -> str:
    """Mesh document; triangles keep their vertex order and are listed sorted."""
    return _dump(
        "mesh",
        {
            "vertices": [{"id": v, "height": str(f[v])} for v in sorted(s.vertices)],
            "triangles": [list(t) for t in sorted(s.triangles)],
            "clusters": sorted(sorted(c) for c in f.clusters),
        },
    )


def parse_mesh(text: str, strict: bool = True) -> Tuple[TriSurface, PLHeights]:
    """
    Parse a mesh document.

    Raises:
        ParseError: Malformed JSON
        StructuralError: Unknown fields or bad values
        SurfaceError: The triangles do not form a closed surface
    """
    doc = _document(text, "mesh", strict, ("vertices", "triangles"), ("clusters",))
    values: Dict[str, Fraction] = {}
    for i, item in enumerate(_array(doc["vertices"], "$.vertices")):
        path = f"$.vertices[{i}]"
        _object(item, path, ("id", "height"), (), strict)
        vid = _string(item["id"], f"{path}.id")
        if vid in values:
            raise StructuralError(f"Duplicate vertex id: {vid!r}", element_id=vid)
        values[vid] = _rational(item["height"], f"{path}.height")
    triangles = []
    for i, tri in enumerate(_array(doc["triangles"], "$.triangles")):
        path = f"$.triangles[{i}]"
        corners = tuple(_string(v, f"{path}[{k}]") for k, v in enumerate(_array(tri, path)))
        if len(corners) != 3:
            raise StructuralError(f"Expected three vertex ids at {path}", element_id=path)
        triangles.append(corners)
    clusters = []
    for i, cluster in enumerate(_array(doc.get("clusters", []), "$.clusters")):
        path = f"$.clusters[{i}]"
        clusters.append(
            frozenset(_string(v, f"{path}[{k}]") for k, v in enumerate(_array(cluster, path)))
        )
    clusters.sort(key=sorted)
    surface = TriSurface(tuple(sorted(values)), tuple(sorted(triangles)))
    return surface, PLHeights(values, tuple(clusters))


# Reports -------------------------------------------------------------------


def to_plain(value: Any) -> Any:
    """Convert results into JSON-ready values; dataclasses become objects."""
    if isinstance(value, (VertexPoint, EdgeInteriorPoint, Fraction)):
        return str(value)
    if isinstance(value, ReebDigraph):
        return _graph_payload(value)
    if is_dataclass(value) and not isinstance(value, type):
        plain = {f.name: to_plain(getattr(value, f.name)) for f in fields(value)}
        tag = getattr(value, "tag", None)
        return {"tag": tag, **plain} if tag else plain
    if isinstance(value, Mapping):
        return {str(k): to_plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (set, frozenset)):
        return sorted(to_plain(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    return value


def serialize_report(payload: Mapping[str, Any]) -> str:
    """Report document; top-level keys keep their order."""
    return _dump("report", {k: to_plain(v) for k, v in payload.items()})


def parse_report(text: str, strict: bool = True) -> Dict[str, Any]:
    """Report payload; only the envelope is checked, the fields are free-form."""
    doc = _document(text, "report", strict, (), free_form=True)
    return {k: v for k, v in doc.items() if k not in ("kind", "version")}


_READERS = {
    "graph": parse_graph,
    "embedding": parse_embedding,
    "annotation": parse_annotation,
    "mesh": parse_mesh,
    "report": parse_report,
}


def parse_document(text: str, strict: bool = True) -> Tuple[str, Any]:
    """
    Parse any document, dispatching on its ``kind``.

    Returns:
        (kind, parsed object)
    """
    doc = _load(text)
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind not in _READERS:
        raise StructuralError(
            f"Unknown document kind {kind!r}; expected one of {', '.join(KINDS)}",
            element_id="$.kind",
        )
    return kind, _READERS[kind](text, strict)


# Exports -------------------------------------------------------------------


def _dot_id(value: Any) -> str:
    text = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def _environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(TEMPLATE_DIR),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["dot_id"] = _dot_id
    return env


def export_dot(g: ReebDigraph) -> str:
    """
    Directed DOT text for ``g``.

    With heights, vertices of equal height share a rank and labels show the
    height; without heights no rank constraints are emitted.
    """
    vertices = []
    for v in sorted(g.vertices):
        label = v if g.heights is None else f"{v} ({g.heights[v]})"
        vertices.append({"id": v, "label": label})
    ranks: List[List[str]] = []
    if g.heights is not None:
        levels: Dict[Fraction, List[str]] = {}
        for v in sorted(g.vertices):
            levels.setdefault(g.heights[v], []).append(v)
        ranks = [levels[h] for h in sorted(levels)]
    edges = sorted(g.edges, key=lambda e: e.id)
    return _environment().get_template("graph.dot.j2").render(
        vertices=vertices, ranks=ranks, edges=edges
    )


def export_obj(s: TriSurface, f: PLHeights) -> str:
    """
    OBJ text: vertices spread on a unit circle in id order, height as z.

    Only the z coordinate is meaningful; faces keep triangle orientation.
    """
    order = sorted(s.vertices)
    index = {v: i + 1 for i, v in enumerate(order)}
    n = len(order)
    vertices = [
        {
            "id": v,
            "x": math.cos(2 * math.pi * k / n),
            "y": math.sin(2 * math.pi * k / n),
            "z": float(f[v]),
        }
        for k, v in enumerate(order)
    ]
    faces = [[index[v] for v in tri] for tri in sorted(s.triangles)]
    return _environment().get_template("mesh.obj.j2").render(vertices=vertices, faces=faces)
