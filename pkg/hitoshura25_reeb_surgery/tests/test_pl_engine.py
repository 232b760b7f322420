"""
Tests for PL surfaces, the Reeb sweep, realization and surface surgery.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitoshura25_reeb_surgery.errors import (
    ExtremumPointError,
    GenericityError,
    PreconditionError,
    StripNotFoundError,
    SurfaceError,
)
from hitoshura25_reeb_surgery.pl_engine import (
    MAXIMUM,
    MINIMUM,
    REGULAR,
    PLHeights,
    TriSurface,
    check_heights,
    classify_cluster,
    classify_vertex,
    connected_sum_surfaces,
    critical_points,
    dense_sampling_reeb,
    euler_characteristic,
    find_regular_strip,
    flat_torus,
    is_orientable,
    locate_vertex,
    octahedron,
    pl_reeb,
    projective_plane,
    realize,
    saddle,
    standing_torus,
    subdivide_midpoints,
)
from hitoshura25_reeb_surgery.reeb_core import (
    EdgeInteriorPoint,
    ReebDigraph,
    VertexPoint,
    digraph_isomorphic,
    first_betti,
)
from hitoshura25_reeb_surgery.suite import random_good_digraph

MID = Fraction(1, 2)


def single_edge() -> ReebDigraph:
    return ReebDigraph.build(["a", "b"], [("e1", "a", "b")])


def x_graph() -> ReebDigraph:
    return ReebDigraph.build(
        ["a", "b", "w", "c", "d"],
        [("e1", "a", "w"), ("e2", "b", "w"), ("e3", "w", "c"), ("e4", "w", "d")],
    )


def path3() -> ReebDigraph:
    return ReebDigraph.build(["a", "m", "c"], [("f1", "a", "m"), ("f2", "m", "c")])


def cycle_graph() -> ReebDigraph:
    return ReebDigraph.build(
        ["lo", "s", "t", "hi"],
        [("e1", "lo", "s"), ("e2", "s", "t"), ("e3", "s", "t"), ("e4", "t", "hi")],
    )


def morse_sum(s: TriSurface, f: PLHeights) -> int:
    """Minima plus maxima minus saddle multiplicities."""
    total = 0
    for c in critical_points(s, f).values():
        total += -c.multiplicity if c.kind == "saddle" else 1
    return total


class TestSurfaces:
    def test_fixture_topology(self):
        """Test Euler characteristic and orientability of the fixtures."""
        sphere, _ = octahedron()
        torus, _ = flat_torus()
        plane, _ = projective_plane()
        assert [euler_characteristic(s) for s in (sphere, torus, plane)] == [2, 0, 1]
        assert is_orientable(sphere) and is_orientable(torus)
        assert not is_orientable(plane)

    def test_open_surface_rejected(self):
        """Test that a lone triangle is not a closed surface."""
        with pytest.raises(SurfaceError, match="exactly 2"):
            TriSurface(("a", "b", "c"), (("a", "b", "c"),))

    def test_unknown_vertex_rejected(self):
        """Test that triangles may only use declared vertices."""
        with pytest.raises(SurfaceError, match="unknown vertex"):
            TriSurface(("a", "b"), (("a", "b", "c"),))

    def test_flat_torus_too_small(self):
        """Test that the grid needs three rows and columns."""
        with pytest.raises(PreconditionError, match="3 x 3 grid"):
            flat_torus(2, 4)

    def test_adjacent_equal_heights(self):
        """Test that neighbours sharing a height need a cluster."""
        s, f = octahedron()
        values = dict(f.values)
        values["e1"] = values["e0"]
        with pytest.raises(GenericityError) as exc:
            check_heights(s, PLHeights(values))
        assert set(exc.value.pair) == {"e0", "e1"}
        check_heights(s, PLHeights(values, (frozenset({"e0", "e1"}),)))

    def test_cluster_must_share_height(self):
        """Test that a cluster with two heights is refused."""
        with pytest.raises(GenericityError, match="mixes heights"):
            PLHeights({"a": 0, "b": 1}, (frozenset({"a", "b"}),))

    def test_subdivision_keeps_topology(self):
        """Test that midpoint subdivision keeps chi and averages heights."""
        s, f = octahedron()
        fine, heights, support = subdivide_midpoints(s, f)
        assert len(fine.triangles) == 4 * len(s.triangles)
        assert euler_characteristic(fine) == 2
        assert heights["bottom|e0"] == (f["bottom"] + f["e0"]) / 2
        assert support["bottom|e0"] == frozenset({"bottom", "e0"})


class TestClassification:
    def test_octahedron(self):
        """Test the poles and a regular equator vertex."""
        s, f = octahedron()
        assert classify_vertex(s, f, "top") == MAXIMUM
        assert classify_vertex(s, f, "bottom") == MINIMUM
        assert classify_vertex(s, f, "e1") == REGULAR
        assert set(critical_points(s, f)) == {"top", "bottom"}

    def test_flat_torus(self):
        """Test one minimum, two simple saddles and one maximum."""
        s, f = flat_torus()
        classes = sorted(str(c) for c in critical_points(s, f).values())
        assert classes == ["maximum", "minimum", "saddle(1)", "saddle(1)"]

    def test_cluster_of_regular_vertices(self):
        """Test that a cluster without critical members is regular."""
        s, f = octahedron()
        assert classify_cluster(s, f, ["e1", "e2"]) == REGULAR

    def test_cluster_adds_saddles(self):
        """Test that saddle multiplicities add up inside a cluster."""
        s, f = flat_torus()
        saddles = [v for v, c in critical_points(s, f).items() if c.kind == "saddle"]
        assert classify_cluster(s, f, saddles) == saddle(2)

    def test_saddle_label(self):
        """Test the printed form of a saddle class."""
        assert str(saddle(3)) == "saddle(3)"
        assert saddle(1).is_critical and not REGULAR.is_critical


class TestSweep:
    def test_octahedron_is_one_edge(self):
        """Test that the sphere gives the single-edge digraph."""
        s, f = octahedron()
        graph, quotient = pl_reeb(s, f)
        assert digraph_isomorphic(graph, single_edge()) is not None
        assert quotient.vertex_members == {"r0": ("bottom",), "r1": ("top",)}
        assert graph.heights == {"r0": Fraction(-1), "r1": Fraction(1)}

    def test_standing_torus_is_a_cycle(self):
        """Test the torus digraph: one loop between two saddles."""
        s, f = standing_torus()
        graph, _ = pl_reeb(s, f)
        assert digraph_isomorphic(graph, cycle_graph()) is not None

    def test_projective_plane_is_a_path(self):
        """Test that the projective plane gives a path through one saddle."""
        s, f = projective_plane()
        graph, _ = pl_reeb(s, f)
        assert digraph_isomorphic(graph, path3()) is not None

    @pytest.mark.parametrize("fixture", [octahedron, standing_torus, projective_plane])
    def test_sweep_matches_dense_sampling(self, fixture):
        """Test the sweep against the sampling oracle on the fixtures."""
        s, f = fixture()
        graph, _ = pl_reeb(s, f)
        assert digraph_isomorphic(graph, dense_sampling_reeb(s, f)) is not None

    def test_ids_are_deterministic(self):
        """Test that vertex and edge ids follow height order."""
        s, f = standing_torus()
        graph, _ = pl_reeb(s, f)
        assert graph.vertices == ("r0", "r1", "r2", "r3")
        assert [e.id for e in graph.edges] == ["a0", "a1", "a2", "a3"]

    def test_locate_vertex(self):
        """Test that poles land on vertices and the equator on the edge."""
        s, f = octahedron()
        _, quotient = pl_reeb(s, f)
        assert locate_vertex(s, f, quotient, "top") == ("vertex", "r1")
        assert locate_vertex(s, f, quotient, "e2") == ("edge", "a0")


class TestRealize:
    @pytest.mark.parametrize("build", [single_edge, path3, x_graph, cycle_graph])
    def test_round_trip(self, build):
        """Test that realized surfaces sweep back to the digraph."""
        w = build()
        realization = realize(w)
        graph, _ = pl_reeb(realization.surface, realization.heights)
        assert digraph_isomorphic(graph, w) is not None

    def test_single_edge_is_a_sphere(self):
        """Test that one edge is realized as a sphere."""
        realization = realize(single_edge())
        assert euler_characteristic(realization.surface) == 2

    def test_placement_covers_digraph(self):
        """Test that every vertex and edge of the digraph is placed."""
        placement = realize(x_graph()).placement
        assert set(placement.vertex_features) == set(x_graph().vertices)
        assert set(placement.edge_rings) == {"e1", "e2", "e3", "e4"}

    def test_ring_size(self):
        """Test that ring sizes must be multiples of 4."""
        with pytest.raises(PreconditionError, match="multiple of 4"):
            realize(single_edge(), segments=10)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_random_round_trip(self, seed):
        """Test realization of small random digraphs."""
        w = random_good_digraph(random.Random(seed), 5)
        realization = realize(w)
        graph, _ = pl_reeb(realization.surface, realization.heights)
        assert digraph_isomorphic(graph, w) is not None


class TestStrips:
    def test_octahedron_needs_one_refinement(self):
        """Test that the coarse sphere is refined once before a band fits."""
        s, f = octahedron()
        strip = find_regular_strip(s, f, EdgeInteriorPoint("a0", MID))
        assert strip.rounds == 1
        assert len(strip.triangles) == 2
        assert strip.level == 0
        assert strip.window[0] < 0 < strip.window[1]

    def test_refinement_cap(self):
        """Test that the search gives up when refinement is forbidden."""
        s, f = octahedron()
        with pytest.raises(StripNotFoundError) as exc:
            find_regular_strip(s, f, EdgeInteriorPoint("a0", MID), max_rounds=0)
        assert exc.value.diagnostic["rounds"] == 0

    def test_extremum_rejected(self):
        """Test that a strip cannot sit at a pole."""
        s, f = octahedron()
        with pytest.raises(ExtremumPointError):
            find_regular_strip(s, f, VertexPoint("r0"))

    def test_window_must_contain_level(self):
        """Test that the window has to straddle the point."""
        s, f = octahedron()
        with pytest.raises(PreconditionError, match="Window"):
            find_regular_strip(s, f, EdgeInteriorPoint("a0", MID), window=(Fraction(1, 2), Fraction(3, 4)))

    def test_realized_edge_needs_no_refinement(self):
        """Test that a realized tube already carries a band."""
        realization = realize(single_edge())
        strip = find_regular_strip(
            realization.surface, realization.heights, EdgeInteriorPoint("a0", MID)
        )
        assert strip.rounds == 0
        assert len(strip.triangles) == 2


class TestConnectedSum:
    @pytest.mark.parametrize("reverse", [False, True])
    def test_two_spheres(self, reverse):
        """Test that two spheres summed at midpoints give the X-graph."""
        pieces = []
        for _ in range(2):
            realization = realize(single_edge())
            s, f = realization.surface, realization.heights
            pieces.append((s, f, find_regular_strip(s, f, EdgeInteriorPoint("a0", MID))))
        (s1, f1, strip1), (s2, f2, strip2) = pieces
        surface, heights = connected_sum_surfaces(s1, f1, strip1, s2, f2, strip2, reverse=reverse)
        assert euler_characteristic(surface) == 2
        graph, _ = pl_reeb(surface, heights)
        assert digraph_isomorphic(graph, x_graph()) is not None
        center = next(v for v in graph.vertices if graph.degree(v) == 4)
        assert graph.height(center) == MID

    def test_foreign_strip_rejected(self):
        """Test that a strip found on another surface is refused."""
        s1, f1 = realize(single_edge())[:2]
        s2, f2 = octahedron()
        strip1 = find_regular_strip(s1, f1, EdgeInteriorPoint("a0", MID))
        with pytest.raises(PreconditionError, match="different surface"):
            connected_sum_surfaces(s2, f2, strip1, s1, f1, strip1)


class TestMorseCounts:
    """Critical-point counts against the topology of the surface."""

    @pytest.mark.parametrize("fixture", [octahedron, flat_torus, standing_torus, projective_plane])
    def test_euler_matches_critical_points(self, fixture):
        """Test that chi equals minima plus maxima minus saddle multiplicities."""
        s, f = fixture()
        assert euler_characteristic(s) == morse_sum(s, f)

    @pytest.mark.parametrize("fixture", [octahedron, flat_torus, standing_torus])
    def test_betti_bounded_by_genus(self, fixture):
        """Test that loops of the Reeb digraph never exceed the genus."""
        s, f = fixture()
        graph, _ = pl_reeb(s, f)
        assert is_orientable(s)
        assert first_betti(graph) <= (2 - euler_characteristic(s)) // 2

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_realizations(self, seed):
        """Test both counts on realized random digraphs."""
        w = random_good_digraph(random.Random(seed), 5)
        realization = realize(w)
        s, f = realization.surface, realization.heights
        chi = euler_characteristic(s)
        assert chi == morse_sum(s, f)
        if is_orientable(s):
            graph, _ = pl_reeb(s, f)
            assert first_betti(graph) <= (2 - chi) // 2
