"""
Tests for wedge sums, G-simple counts, embeddings and augmentation.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitoshura25_reeb_surgery.errors import (
    AnnotationError,
    DisjointnessError,
    EmbeddingError,
    ExtremumPointError,
    PreconditionError,
    StructuralError,
    ValidityError,
)
from hitoshura25_reeb_surgery.reeb_core import (
    EdgeInteriorPoint,
    ReebDigraph,
    VertexPoint,
    digraph_isomorphic,
    first_betti,
    smooth_degree_two,
    validate_good_digraph,
)
from hitoshura25_reeb_surgery.suite import random_good_digraph, random_point, random_tree_instance
from hitoshura25_reeb_surgery.surgery import (
    HALF,
    EmbeddingMap,
    GsAnnotation,
    check_embedding,
    critical_split,
    expected_gs_count,
    footprints_disjoint,
    embedding_footprint,
    g_simple_annotation,
    glue_gs_counts,
    gs_check,
    half_rescaler,
    host_hypotheses,
    remark5_count,
    theorem3_augment,
    theorem3_connected_sum,
    theorem3_count,
    wedge_connected_sum,
    wedge_expectations,
    wedge_parts,
)

MID = Fraction(1, 2)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def single_edge(heights=True) -> ReebDigraph:
    return ReebDigraph.build(
        ["a", "b"], [("e1", "a", "b")], {"a": 0, "b": 1} if heights else None
    )


def x_graph() -> ReebDigraph:
    return ReebDigraph.build(
        ["a", "b", "w", "c", "d"],
        [("e1", "a", "w"), ("e2", "b", "w"), ("e3", "w", "c"), ("e4", "w", "d")],
    )


def path3() -> ReebDigraph:
    return ReebDigraph.build(["a", "m", "c"], [("f1", "a", "m"), ("f2", "m", "c")])


def double_x() -> ReebDigraph:
    """Tree host with two degree-4 vertices u and v joined by g4."""
    return ReebDigraph.build(
        ["a", "b", "c", "d", "e", "f", "u", "v"],
        [
            ("g1", "a", "u"),
            ("g2", "b", "u"),
            ("g3", "u", "c"),
            ("g4", "u", "v"),
            ("g5", "d", "v"),
            ("g6", "v", "e"),
            ("g7", "v", "f"),
        ],
    )


def star() -> ReebDigraph:
    """Tree host with one degree-4 center c."""
    return ReebDigraph.build(
        ["a", "b", "c", "d", "e"],
        [("g1", "a", "c"), ("g2", "b", "c"), ("g3", "c", "d"), ("g4", "c", "e")],
    )


def twin_stars() -> ReebDigraph:
    """Tree host with two degree-5 centers u and v joined by j."""
    return ReebDigraph.build(
        ["a", "b", "c", "d", "e", "f", "g", "h", "u", "v"],
        [
            ("g1", "a", "u"),
            ("g2", "b", "u"),
            ("g3", "u", "c"),
            ("g4", "u", "d"),
            ("j", "u", "v"),
            ("g5", "e", "v"),
            ("g6", "f", "v"),
            ("g7", "v", "g"),
            ("g8", "v", "h"),
        ],
    )


def x_onto(images, host_edges) -> EmbeddingMap:
    """Embed the X-graph with vertex images in a, b, w, c, d order."""
    return EmbeddingMap(
        {v: VertexPoint(x) for v, x in zip(["a", "b", "w", "c", "d"], images)},
        {e: [gid] for e, gid in zip(["e1", "e2", "e3", "e4"], host_edges)},
    )


def path_through(host_edges, middle_edge) -> EmbeddingMap:
    """Embed path3 along host edges, with m inside the first one."""
    return EmbeddingMap(
        {
            "a": VertexPoint(_src(host_edges[0])),
            "m": EdgeInteriorPoint(middle_edge, MID),
            "c": VertexPoint(_dst(host_edges[-1])),
        },
        {"f1": [host_edges[0]], "f2": list(host_edges)},
    )


_HOST = {e.id: e for e in double_x().edges} | {e.id: e for e in x_graph().edges}


def _src(eid: str) -> str:
    return _HOST[eid].src


def _dst(eid: str) -> str:
    return _HOST[eid].dst


class TestWedge:
    """Wedge connected sum of two digraphs."""

    def test_two_spheres_make_x_graph(self):
        """Test that two single edges wedged at midpoints give the X-graph."""
        result, w = wedge_connected_sum(
            single_edge(), EdgeInteriorPoint("e1", MID), single_edge(), EdgeInteriorPoint("e1", MID)
        )
        assert digraph_isomorphic(result, x_graph()) is not None
        assert (result.in_degree(w), result.out_degree(w)) == (2, 2)
        assert result.height(w) == HALF

    def test_heights_rescaled(self):
        """Test that both summands are rescaled onto [0, 1]."""
        result, _ = wedge_connected_sum(
            single_edge(), EdgeInteriorPoint("e1", Fraction(1, 4)),
            single_edge(), EdgeInteriorPoint("e1", MID),
        )
        assert min(result.heights.values()) == 0
        assert max(result.heights.values()) == 1
        assert validate_good_digraph(result).is_good

    def test_colliding_ids_are_suffixed(self):
        """Test that summands sharing ids are told apart."""
        parts = wedge_parts(
            single_edge(), EdgeInteriorPoint("e1", MID), single_edge(), EdgeInteriorPoint("e1", MID)
        )
        assert parts.rename1 == {"a": "a_1", "b": "b_1"}
        assert parts.rename2 == {"a": "a_2", "b": "b_2"}

    def test_vertex_point(self):
        """Test a wedge at the center of the X-graph."""
        g1, p1 = x_graph(), VertexPoint("w")
        g2, p2 = single_edge(heights=False).relabel("_s"), EdgeInteriorPoint("e1_s", MID)
        result, w = wedge_connected_sum(g1, p1, g2, p2)
        assert result.degree(w) == 6
        assert len(result.vertices) == 7
        assert wedge_expectations(g1, p1, g2, p2)["vertices"] == 7

    def test_extremum_point_rejected(self):
        """Test that a wedge point at a source is refused."""
        with pytest.raises(ExtremumPointError, match="local extremum"):
            wedge_connected_sum(single_edge(), VertexPoint("a"), single_edge(), VertexPoint("b"))

    def test_unknown_point(self):
        """Test that a point naming a missing edge is refused."""
        with pytest.raises(StructuralError):
            wedge_connected_sum(
                single_edge(), EdgeInteriorPoint("zz", MID), single_edge(), EdgeInteriorPoint("e1", MID)
            )

    def test_bad_input_rejected(self):
        """Test that a digraph with a self-loop cannot be wedged."""
        loop = ReebDigraph.build(["a", "b"], [("e1", "a", "b"), ("e2", "b", "b")])
        with pytest.raises(ValidityError):
            wedge_connected_sum(loop, EdgeInteriorPoint("e1", MID), single_edge(), EdgeInteriorPoint("e1", MID))

    @settings(max_examples=60, deadline=None)
    @given(seeds)
    def test_counts_match_formulas(self, seed):
        """Test the vertex, edge, degree and Betti formulas on random pairs."""
        rng = random.Random(seed)
        w1, w2 = random_good_digraph(rng, 7), random_good_digraph(rng, 7)
        p1, p2 = random_point(rng, w1), random_point(rng, w2)
        result, w = wedge_connected_sum(w1, p1, w2, p2)
        want = wedge_expectations(w1, p1, w2, p2)
        assert validate_good_digraph(result).is_good
        assert len(result.vertices) == want["vertices"]
        assert len(result.edges) == want["edges"]
        assert result.in_degree(w) == want["in_degree"]
        assert result.out_degree(w) == want["out_degree"]
        assert first_betti(result) == first_betti(w1) + first_betti(w2)

    @settings(max_examples=60, deadline=None)
    @given(seeds)
    def test_wedge_is_symmetric(self, seed):
        """Test that swapping the summands gives an isomorphic digraph."""
        rng = random.Random(seed)
        w1, w2 = random_good_digraph(rng, 7), random_good_digraph(rng, 7)
        p1, p2 = random_point(rng, w1), random_point(rng, w2)
        forward, v = wedge_connected_sum(w1, p1, w2, p2)
        backward, u = wedge_connected_sum(w2, p2, w1, p1)
        assert digraph_isomorphic(forward, backward) is not None
        assert (forward.in_degree(v), forward.out_degree(v)) == (
            backward.in_degree(u),
            backward.out_degree(u),
        )

    def test_half_rescaler(self):
        """Test that the rescaler pins the range and the pivot."""
        scale = half_rescaler([Fraction(-2), Fraction(6)], Fraction(0))
        assert (scale(Fraction(-2)), scale(Fraction(0)), scale(Fraction(6))) == (0, HALF, 1)
        assert scale(Fraction(3)) == Fraction(3, 4)


class TestGSimple:
    def test_expected_counts(self):
        """Test deg - 2 for branch vertices and 1 for degree 2."""
        assert [expected_gs_count(d) for d in (1, 2, 3, 4, 7)] == [None, 1, 1, 2, 5]

    def test_x_graph_passes(self):
        """Test that the center of the X-graph needs two critical points."""
        assert gs_check(x_graph(), GsAnnotation({"w": 2})).passed
        report = gs_check(x_graph(), GsAnnotation({"w": 1}))
        assert not report.passed
        assert report.failures == ["w"]

    def test_degree_one_unconstrained(self):
        """Test that leaf counts are ignored."""
        assert gs_check(path3(), GsAnnotation({"m": 1, "a": 5})).passed

    def test_unknown_vertex(self):
        """Test that annotating a missing vertex is a structural error."""
        with pytest.raises(StructuralError, match="zz"):
            gs_check(path3(), GsAnnotation({"zz": 1}))

    def test_glued_counts(self):
        """Test that the wedge vertex of two spheres gets two critical points."""
        s1, s2 = single_edge(), single_edge()
        ann = glue_gs_counts(
            s1, g_simple_annotation(s1), s2, g_simple_annotation(s2),
            EdgeInteriorPoint("e1", MID), EdgeInteriorPoint("e1", MID),
        )
        assert ann.counts["w"] == 2
        result, _ = wedge_connected_sum(
            s1, EdgeInteriorPoint("e1", MID), s2, EdgeInteriorPoint("e1", MID)
        )
        assert gs_check(result, ann).passed

    def test_glue_rejects_bad_annotation(self):
        """Test that a non G-simple input annotation is refused."""
        with pytest.raises(AnnotationError) as exc:
            glue_gs_counts(
                x_graph(), GsAnnotation({"w": 1}), single_edge(), GsAnnotation({}),
                VertexPoint("w"), EdgeInteriorPoint("e1", MID),
            )
        assert exc.value.failures == ["w"]

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_glued_counts_are_g_simple(self, seed):
        """Test that gluing G-simple annotations stays G-simple."""
        rng = random.Random(seed)
        w1, w2 = random_good_digraph(rng, 7), random_good_digraph(rng, 7)
        p1, p2 = random_point(rng, w1), random_point(rng, w2)
        ann = glue_gs_counts(w1, g_simple_annotation(w1), w2, g_simple_annotation(w2), p1, p2)
        result, _ = wedge_connected_sum(w1, p1, w2, p2)
        assert gs_check(result, ann).passed


class TestCounts:
    def test_path_counts_one(self):
        """Test the count on a path with one degree-2 vertex."""
        assert theorem3_count(path3()) == 1

    def test_x_graph_counts_two(self):
        """Test the count on the X-graph."""
        assert theorem3_count(x_graph()) == 2

    def test_remark5(self):
        """Test that vertices mapped onto host vertices are subtracted."""
        assert remark5_count(path3(), {"m"}) == 0

    def test_remark5_rejects_branch_vertex(self):
        """Test that only degree-2 vertices can sit on host vertices."""
        with pytest.raises(PreconditionError):
            remark5_count(x_graph(), {"w"})

    def test_critical_split(self):
        """Test the split for in-degree 2 and out-degree 3."""
        split = critical_split(2, 3)
        assert (split.below, split.above) == (2, 1)

    def test_critical_split_needs_both_sides(self):
        """Test that a zero degree is refused."""
        with pytest.raises(PreconditionError):
            critical_split(0, 3)

    @given(st.integers(1, 6), st.integers(1, 6))
    def test_critical_split_total(self, p, q):
        """Test that the split always totals deg - 2."""
        split = critical_split(p, q)
        assert split.below + split.above == p + q - 2

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_remark5_never_exceeds_plain_count(self, seed):
        """Test that host-vertex images only lower the count."""
        inst = random_tree_instance(random.Random(seed), 8, remark5=True)
        report = check_embedding(inst.embedded, inst.host, inst.embedding, remark5=True)
        plain = theorem3_count(inst.embedded)
        reduced = remark5_count(inst.embedded, report.v_gw2)
        assert reduced <= plain
        assert (reduced == plain) == (not report.v_gw2)


class TestEmbedding:
    def test_path_through_center(self):
        """Test a path embedded through the X-graph center."""
        phi = path_through(["e1", "e3"], "e1")
        report = check_embedding(path3(), x_graph(), phi)
        assert report.ok, report.violations
        assert report.v_gw2 == set()

    def test_leaf_must_hit_leaf(self):
        """Test that a degree-1 vertex inside an edge is a violation."""
        phi = EmbeddingMap(
            {"a": EdgeInteriorPoint("e1", Fraction(1, 4)), "m": EdgeInteriorPoint("e1", MID), "c": VertexPoint("c")},
            {"f1": ["e1"], "f2": ["e1", "e3"]},
        )
        report = check_embedding(path3(), x_graph(), phi)
        assert not report.ok
        assert any("degree-1 vertex a" in v for v in report.violations)

    def test_missing_image(self):
        """Test that an unmapped vertex is a structural error."""
        phi = EmbeddingMap({"a": VertexPoint("a")}, {})
        with pytest.raises(StructuralError, match="no image"):
            check_embedding(path3(), x_graph(), phi)

    def test_remark5_vertex_on_host_vertex(self):
        """Test that remark5 admits a degree-2 vertex on a host vertex."""
        phi = EmbeddingMap(
            {"a": VertexPoint("a"), "m": VertexPoint("w"), "c": VertexPoint("c")},
            {"f1": ["e1"], "f2": ["e3"]},
        )
        assert not check_embedding(path3(), x_graph(), phi).ok
        report = check_embedding(path3(), x_graph(), phi, remark5=True)
        assert report.ok
        assert report.v_gw2 == {"m"}

    def test_footprints(self):
        """Test that paths through different centers are disjoint."""
        host = double_x()
        left = embedding_footprint(path3(), host, path_through(["g1", "g3"], "g1"))
        right = embedding_footprint(path3(), host, path_through(["g5", "g6"], "g5"))
        crossing = embedding_footprint(path3(), host, path_through(["g2", "g4", "g6"], "g2"))
        assert footprints_disjoint(left, right)
        assert not footprints_disjoint(left, crossing)


class TestAugmentation:
    def test_host_hypotheses(self):
        """Test that degree-2 vertices in the host are reported."""
        assert host_hypotheses(x_graph()) == []
        assert host_hypotheses(path3()) == ["host has degree-2 vertices: m"]

    def test_path_adds_one_vertex(self):
        """Test that a path adds its degree-2 vertex at its image."""
        result, new = theorem3_augment(x_graph(), path3(), path_through(["e1", "e3"], "e1"))
        assert len(new) == 1
        assert result.degree(new[0]) == 2
        assert digraph_isomorphic(smooth_degree_two(result, new), x_graph()) is not None

    def test_identity_embedding(self):
        """Test that the X-graph in itself adds deg - 2 vertices."""
        phi = EmbeddingMap(
            {v: VertexPoint(v) for v in x_graph().vertices},
            {e.id: [e.id] for e in x_graph().edges},
        )
        result, new = theorem3_augment(x_graph(), x_graph(), phi)
        assert len(new) == theorem3_count(x_graph()) == 2
        assert all(result.degree(v) == 2 for v in new)

    def test_remark5_adds_nothing_for_vertex_image(self):
        """Test that a degree-2 vertex on a host vertex adds no vertex."""
        phi = EmbeddingMap(
            {"a": VertexPoint("a"), "m": VertexPoint("w"), "c": VertexPoint("c")},
            {"f1": ["e1"], "f2": ["e3"]},
        )
        _, new = theorem3_augment(x_graph(), path3(), phi, remark5=True)
        assert new == []
        with pytest.raises(EmbeddingError, match="edge interior"):
            theorem3_augment(x_graph(), path3(), phi)

    def test_host_with_degree_two(self):
        """Test that a host with a degree-2 vertex is refused."""
        phi = EmbeddingMap(
            {"a": VertexPoint("a"), "m": VertexPoint("m"), "c": VertexPoint("c")},
            {"f1": ["f1"], "f2": ["f2"]},
        )
        with pytest.raises(PreconditionError, match="degree-2"):
            theorem3_augment(path3(), path3(), phi, remark5=True)

    def test_connected_sum_of_disjoint_paths(self):
        """Test that disjoint embeddings add their counts."""
        host = double_x()
        result, new = theorem3_connected_sum(
            host,
            path3(), path_through(["g1", "g3"], "g1"),
            path3(), path_through(["g5", "g6"], "g5"),
        )
        assert len(new) == 2
        assert len(result.vertices) == len(host.vertices) + 2

    def test_connected_sum_overlap(self):
        """Test that overlapping embeddings are refused."""
        with pytest.raises(DisjointnessError):
            theorem3_connected_sum(
                double_x(),
                path3(), path_through(["g1", "g3"], "g1"),
                path3(), path_through(["g2", "g4", "g6"], "g2"),
            )

    def test_x_graph_on_star(self):
        """Test that the X-graph on a star adds one vertex below and one above the center."""
        phi = x_onto(["a", "b", "c", "d", "e"], ["g1", "g2", "g3", "g4"])
        result, new = theorem3_augment(star(), x_graph(), phi)
        assert new == ["n1", "n2"]
        arcs = {(e.src, e.dst) for e in result.edges}
        assert {("a", "n1"), ("n1", "c"), ("c", "n2"), ("n2", "d")} <= arcs
        assert digraph_isomorphic(smooth_degree_two(result, new), star()) is not None

    def test_connected_sum_of_two_stars(self):
        """Test that X-graphs on both centers add 2 + 2 vertices."""
        host = twin_stars()
        phi1 = x_onto(["a", "b", "u", "c", "d"], ["g1", "g2", "g3", "g4"])
        phi2 = x_onto(["e", "f", "v", "g", "h"], ["g5", "g6", "g7", "g8"])
        result, new = theorem3_connected_sum(host, x_graph(), phi1, x_graph(), phi2)
        assert len(new) == theorem3_count(x_graph()) * 2 == 4
        assert all(result.in_degree(v) == 1 and result.out_degree(v) == 1 for v in new)
        assert validate_good_digraph(result).is_good
        assert digraph_isomorphic(smooth_degree_two(result, new), host) is not None
