"""Small reference surfaces with known Reeb digraphs."""

from fractions import Fraction
from typing import List, Tuple

from ..errors import PreconditionError
from .mesh import PLHeights, TriSurface, Triangle


def octahedron() -> Tuple[TriSurface, PLHeights]:
    """Sphere with one minimum and one maximum; the equator is tilted."""
    ring = [f"e{k}" for k in range(4)]
    triangles: List[Triangle] = []
    for k in range(4):
        a, b = ring[k], ring[(k + 1) % 4]
        triangles.append(("top", a, b))
        triangles.append(("bottom", b, a))
    heights = {"top": Fraction(1), "bottom": Fraction(-1)}
    for k, v in enumerate(ring):
        heights[v] = Fraction(2 * k - 3, 8)
    return TriSurface(("bottom", *ring, "top"), tuple(triangles)), PLHeights(heights)


def _tent(i: int, n: int) -> int:
    # unimodal around the cycle: minimum at 0, single maximum
    return min(2 * i, 2 * (n - i) - 1)


def flat_torus(n: int = 4, m: int = 4) -> Tuple[TriSurface, PLHeights]:
    """
    Torus from an n x m grid with periodic boundary.

    The height is ``m * tent(i) + tent(j)``, injective on the grid; on the
    4 x 4 grid it has one minimum, two simple saddles and one maximum.
    """
    if n < 3 or m < 3:
        raise PreconditionError("flat torus needs at least a 3 x 3 grid")

    def vid(i: int, j: int) -> str:
        return f"t{i % n}_{j % m}"

    vertices = tuple(vid(i, j) for i in range(n) for j in range(m))
    triangles: List[Triangle] = []
    for i in range(n):
        for j in range(m):
            triangles.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            triangles.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    heights = {
        vid(i, j): Fraction(m * _tent(i, n) + _tent(j, m))
        for i in range(n)
        for j in range(m)
    }
    return TriSurface(vertices, tuple(triangles)), PLHeights(heights)


def standing_torus() -> Tuple[TriSurface, PLHeights]:
    """The 4 x 4 torus; its Reeb digraph is a single cycle between two saddles."""
    return flat_torus(4, 4)


PROJECTIVE_PLANE_TRIANGLES = (
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
    (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4),
)


def projective_plane() -> Tuple[TriSurface, PLHeights]:
    """Six-vertex projective plane; height of p_k is k - 1."""
    vertices = tuple(f"p{k}" for k in range(1, 7))
    triangles = tuple(tuple(f"p{k}" for k in tri) for tri in PROJECTIVE_PLANE_TRIANGLES)
    heights = {f"p{k}": Fraction(k - 1) for k in range(1, 7)}
    return TriSurface(vertices, triangles), PLHeights(heights)
