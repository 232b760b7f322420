"""
Tests for the seeded generators and the acceptance-suite driver.
"""

import dataclasses
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from hitoshura25_reeb_surgery.errors import PreconditionError
from hitoshura25_reeb_surgery.reeb_core import first_betti, validate_good_digraph
from hitoshura25_reeb_surgery.suite import (
    CRITERIA,
    Criterion,
    exhaustive_digraphs,
    format_table,
    labeling_oracle,
    random_good_digraph,
    random_tree_instance,
    run_criterion,
    run_suite,
)
from hitoshura25_reeb_surgery.surgery import (
    check_embedding,
    host_hypotheses,
    remark5_count,
    theorem3_augment,
    theorem3_count,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def criterion(number: int) -> Criterion:
    return next(c for c in CRITERIA if c.number == number)


class TestGenerators:
    def test_same_seed_same_digraph(self):
        """Test that the generator is a function of its seed."""
        assert random_good_digraph(random.Random(7)) == random_good_digraph(random.Random(7))

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_degree_cap(self, seed):
        """Test that max_degree bounds every vertex."""
        g = random_good_digraph(random.Random(seed), 10, max_degree=3)
        assert all(g.degree(v) <= 3 for v in g.vertices)
        assert len(g.vertices) <= 10

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_trees(self, seed):
        """Test that cycles=False yields trees."""
        g = random_good_digraph(random.Random(seed), 8, cycles=False)
        assert first_betti(g) == 0

    def test_exhaustive_smallest(self):
        """Test the digraphs with at most one edge on two vertices."""
        graphs = list(exhaustive_digraphs(2, 1))
        assert [len(g.edges) for g in graphs] == [0, 1, 1]
        verdicts = [validate_good_digraph(g).is_good for g in graphs]
        assert verdicts == [labeling_oracle(g) for g in graphs]
        assert verdicts[1] is False

    def test_oracle_agrees_on_small_digraphs(self):
        """Test the validator against the labeling oracle on three vertices."""
        for g in exhaustive_digraphs(3, 3):
            assert validate_good_digraph(g).is_good == labeling_oracle(g), g.edges

    @settings(max_examples=25, deadline=None)
    @given(seeds, st.booleans())
    def test_tree_instances(self, seed, remark5):
        """Test that tree instances are valid and count as predicted."""
        inst = random_tree_instance(random.Random(seed), 8, remark5=remark5)
        assert host_hypotheses(inst.host) == []
        report = check_embedding(inst.embedded, inst.host, inst.embedding, remark5)
        assert report.ok, report.violations
        assert report.v_gw2 == set(inst.on_host_vertices)
        _, new = theorem3_augment(inst.host, inst.embedded, inst.embedding, remark5)
        if remark5:
            assert len(new) == remark5_count(inst.embedded, report.v_gw2)
        else:
            assert len(new) == theorem3_count(inst.embedded)


class TestDriver:
    def test_exhaustive_criterion_small(self):
        """Test the exhaustive criterion with a small edge bound."""
        result = run_criterion(dataclasses.replace(criterion(1), quick_cases=3), quick=True)
        assert result.passed, result.failures
        assert result.cases > 0

    def test_quick_graph_criteria(self):
        """Test the quick graph-level criteria."""
        results = run_suite(quick=True, only=[2, 3, 7, 9])
        assert [r.number for r in results] == [2, 3, 7, 9]
        assert all(r.passed for r in results), [r.failures for r in results]

    def test_reruns_are_identical(self):
        """Test that one seed gives the same cases and failures."""
        first = run_criterion(criterion(2), seed=5, quick=True)
        second = run_criterion(criterion(2), seed=5, quick=True)
        assert (first.cases, first.failures) == (second.cases, second.failures)

    def test_errors_become_failures(self):
        """Test that a runner raising a package error fails its criterion."""

        def broken(rng, cases):
            raise PreconditionError("no cases today")

        result = run_criterion(Criterion(99, "broken", broken, 1, 1))
        assert not result.passed
        assert result.failures == ("PreconditionError: no cases today",)

    def test_table(self):
        """Test the pass/fail table."""
        table = format_table(run_suite(quick=True, only=[9]))
        header, row = table.splitlines()
        assert "criterion" in header
        assert row.strip().startswith("9")
        assert row.endswith("PASS")

    def test_stream_shares_cases(self):
        """Test that a criterion with a stream draws its partner's cases."""
        drawn = []

        def draw(rng, cases):
            drawn.append([rng.random() for _ in range(cases)])
            return cases, []

        run_criterion(Criterion(5, "first", draw, 3, 3), seed=11)
        run_criterion(Criterion(6, "second", draw, 3, 3, stream=5), seed=11)
        run_criterion(Criterion(6, "own", draw, 3, 3), seed=11)
        assert drawn[0] == drawn[1]
        assert drawn[2] != drawn[0]

    def test_cluster_criterion_follows_surface_sums(self):
        """Test that the cluster criterion reuses the connected-sum cases."""
        assert criterion(6).stream == 5
        assert criterion(6).cases == criterion(5).cases
