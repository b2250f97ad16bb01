from fractions import Fraction

import pytest

from conftest import make_star, random_consistent_tree
from stablered.errors import BoundsTooLarge, ExceptionalInput, MalformedGraph
from stablered.tree import (Edge, NEW, PRIMITIVE, ReductionTree, WILD,
                            classify_structure, enumerate_admissible_trees,
                            global_vcf, nu_profile, tree_from_document,
                            tree_to_document, validate_tree)

F = Fraction


class TestValidate:
    def test_worked_star(self):
        t = make_star([(PRIMITIVE, 6, 1), (PRIMITIVE, 6, 1), (PRIMITIVE, 3, 2)])
        assert validate_tree(t).passed

    def test_bad_vertex_sum(self):
        t = make_star([(PRIMITIVE, 2, 1), (PRIMITIVE, 2, 1), (PRIMITIVE, 4, 1)])
        v = validate_tree(t)
        assert not v.passed
        assert any("v0" in msg for msg in v.violations)

    def test_bad_antisymmetry_named(self):
        t = ReductionTree(
            "v0", {"v0": 0},
            {"t1": PRIMITIVE, "t2": PRIMITIVE, "t3": WILD},
            [Edge("v0", "t1", 2, 1, reverse_m=2, reverse_h=1),
             Edge("v0", "t2", 2, 1), Edge("v0", "t3", 1, 0)])
        v = validate_tree(t)
        assert not v.passed
        assert any("t1" in msg and "sigma + reverse" in msg
                   for msg in v.violations)

    def test_malformed_graph(self):
        t = ReductionTree("v0", {"v0": 0}, {"t1": PRIMITIVE},
                          [Edge("v0", "nowhere", 2, 1)])
        with pytest.raises(MalformedGraph):
            validate_tree(t)

    def test_leaf_ranges(self):
        t = make_star([(PRIMITIVE, 2, 1), (PRIMITIVE, 2, 1), (WILD, 1, 1)])
        v = validate_tree(t)
        assert any("wild" in msg for msg in v.violations)


class TestGlobalVcf:
    def test_star_166_23(self):
        t = make_star([(PRIMITIVE, 6, 1), (PRIMITIVE, 6, 1), (PRIMITIVE, 3, 2)])
        rep = global_vcf(t)
        assert rep.passed and rep.lhs == rep.rhs == 1

    def test_star_with_wild(self):
        t = make_star([(PRIMITIVE, 2, 1), (PRIMITIVE, 2, 1), (WILD, 1, 0)])
        rep = global_vcf(t)
        assert rep.passed and rep.lhs == 1

    def test_two_interior_chain_sums(self):
        t = ReductionTree(
            "v0", {"v0": 0, "v1": 0},
            {"a": PRIMITIVE, "b": PRIMITIVE, "c": PRIMITIVE},
            [Edge("v0", "v1", 2, 1), Edge("v1", "a", 2, 1),
             Edge("v0", "b", 3, 1), Edge("v0", "c", 6, 1)])
        rep = global_vcf(t)
        assert rep.passed
        assert [cut for _, cut, _ in rep.chain] == [F(-2), F(-2)]


class TestNuProfile:
    def test_star_values(self):
        t = make_star([(PRIMITIVE, 6, 1), (PRIMITIVE, 6, 1), (PRIMITIVE, 3, 2)])
        prof = nu_profile(t)
        assert prof.passed
        down = [prof.nu[("v0", f"t{i}")] for i in (1, 2, 3)]
        up = [prof.nu[(f"t{i}", "v0")] for i in (1, 2, 3)]
        assert down == [0, 0, 0] and up == [-1, -1, -1]

    def test_new_tail_values(self):
        t = make_star([(WILD, 1, 0), (WILD, 1, 0), (WILD, 1, 0),
                       (NEW, 2, 3), (NEW, 2, 3)])
        prof = nu_profile(t)
        assert prof.passed
        new_edges = [k for k, v in prof.nu.items()
                     if k[0] == "v0" and v == 1]
        assert len(new_edges) == 2
        for s, tt in new_edges:
            assert prof.nu[(tt, s)] == -2

    def test_exceptional_input(self):
        t = make_star([(PRIMITIVE, 1, 1), (WILD, 1, 0), (WILD, 1, 0)])
        with pytest.raises(ExceptionalInput):
            nu_profile(t)

    def test_bound_violation_reported(self):
        # force nu = 2 through an explicit reverse override
        t = ReductionTree(
            "v0", {"v0": 0},
            {"t1": PRIMITIVE, "t2": PRIMITIVE, "t3": PRIMITIVE},
            [Edge("v0", "t1", 6, 1), Edge("v0", "t2", 6, 1),
             Edge("v0", "t3", 3, 2, reverse_m=3, reverse_h=6)])
        prof = nu_profile(t)
        assert not prof.passed
        assert any("outside [-2, 1]" in msg for msg in prof.violations)


class TestClassify:
    def test_star(self):
        t = make_star([(PRIMITIVE, 6, 1), (PRIMITIVE, 6, 1), (PRIMITIVE, 3, 2)])
        assert classify_structure(t).kind == "Star"

    def test_exceptional_shapes(self):
        e1 = make_star([(PRIMITIVE, 1, 1), (WILD, 1, 0), (WILD, 1, 0)])
        assert classify_structure(e1).kind == "Exceptional1"
        e2 = make_star([(NEW, 1, 2), (WILD, 1, 0), (WILD, 1, 0), (WILD, 1, 0)])
        assert classify_structure(e2).kind == "Exceptional2"

    def test_chain_rejected_with_certificate(self):
        chain = ReductionTree(
            "v0", {"v0": 0, "v1": 0},
            {"w1": WILD, "w2": WILD, "w3": WILD, "n1": NEW},
            [Edge("v0", "w1", 1, 0), Edge("v0", "w2", 1, 0),
             Edge("v0", "v1", 1, 1), Edge("v1", "w3", 1, 0),
             Edge("v1", "n1", 1, 2)])
        assert validate_tree(chain).passed        # locally consistent
        verdict = classify_structure(chain)
        assert verdict.kind == "Inconsistent"
        assert verdict.certificate is not None
        s, t, m, h = verdict.certificate
        assert F(h, m) < 0

    def test_all_identities_chain_still_rejected(self):
        # every numeric identity holds here; only the structure theorem
        # rules it out
        chain = ReductionTree(
            "v0", {"v0": 0, "v1": 0},
            {"a": PRIMITIVE, "b": PRIMITIVE, "c": PRIMITIVE},
            [Edge("v0", "v1", 2, 1), Edge("v1", "a", 2, 1),
             Edge("v0", "b", 3, 1), Edge("v0", "c", 6, 1)])
        assert validate_tree(chain).passed
        assert global_vcf(chain).passed
        assert nu_profile(chain).passed
        assert classify_structure(chain).kind == "Inconsistent"


class TestEnumerate:
    def test_bounds_guard(self):
        with pytest.raises(BoundsTooLarge):
            enumerate_admissible_trees(6, 7, 6)
        with pytest.raises(BoundsTooLarge):
            enumerate_admissible_trees(6, 4, 13)

    def test_p7_includes_worked_star(self):
        trees = enumerate_admissible_trees(6, 4, 6)
        sigs = [tuple(sorted(t.leaf_sigma(l) for l in t.leaves))
                for t in trees]
        assert tuple(sorted([F(1, 6), F(1, 6), F(2, 3)])) in sigs

    def test_p3_includes_half_half_wild(self):
        trees = enumerate_admissible_trees(2, 2, 2)
        sigs = [tuple(sorted(t.leaf_sigma(l) for l in t.leaves))
                for t in trees]
        assert (F(0), F(1, 2), F(1, 2)) in sigs

    def test_only_recognized_shapes(self):
        for t in enumerate_admissible_trees(6, 5, 6):
            assert classify_structure(t).kind in \
                ("Star", "Exceptional1", "Exceptional2")

    def test_no_interior_beyond_root(self):
        for t in enumerate_admissible_trees(6, 5, 6):
            assert list(t.genus) == ["v0"]

    def test_deterministic(self):
        a = enumerate_admissible_trees(6, 4, 6)
        b = enumerate_admissible_trees(6, 4, 6)
        assert [t.canonical() for t in a] == [t.canonical() for t in b]


class TestRandomizedSuite:
    def test_consistent_trees_pass(self, rng):
        for _ in range(300):
            t = random_consistent_tree(rng)
            assert validate_tree(t).passed
            assert global_vcf(t).passed

    def test_mutations_fail(self, rng):
        for _ in range(150):
            t = random_consistent_tree(rng)
            idx = rng.randrange(len(t.edges))
            e = t.edges[idx]
            delta = rng.choice([1, -1, 2])
            mutated = list(t.edges)
            mutated[idx] = Edge(e.source, e.target, e.m, e.h + delta)
            bad = ReductionTree(t.root, dict(t.genus), dict(t.leaves), mutated)
            assert not validate_tree(bad).passed
            assert not global_vcf(bad).passed


class TestDocuments:
    def test_roundtrip(self):
        t = make_star([(PRIMITIVE, 6, 1), (PRIMITIVE, 6, 1), (PRIMITIVE, 3, 2)])
        doc = tree_to_document(t)
        back = tree_from_document(doc)
        assert back.canonical() == t.canonical()

    def test_bad_document(self):
        with pytest.raises(MalformedGraph):
            tree_from_document({"root": "v0"})
