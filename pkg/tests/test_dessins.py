import math
from fractions import Fraction

import pytest

from stablered.dessins import (CycleType, PermGroupHandle, analyze_dessin,
                               cover_genus, enumerate_nielsen,
                               monodromy_group_id, n_prime_bounds,
                               reduction_signature, _centralizer_elements,
                               _class_elements, _compose, _cycle_type)
from stablered.errors import (DegreeTooLarge, GenusNotZero, ParseError,
                              PSylowNotCyclicOrderP, SignatureViolation)

F = Fraction


class TestCycleType:
    def test_parse(self):
        assert CycleType.parse("2-3", 7).parts == (3, 2, 1, 1)
        assert CycleType.parse("2-2", 7).parts == (2, 2, 1, 1, 1)
        assert CycleType.parse("7", 7).parts == (7,)
        assert CycleType.parse("6", 7).cycle_count == 2

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            CycleType.parse("2-x", 7)
        with pytest.raises(ParseError):
            CycleType.parse("4-4", 7)

    def test_class_sizes(self):
        # |class| = n! / (prod L^(k_L) k_L!)
        assert len(list(_class_elements(CycleType.parse("6", 7)))) == 840
        assert len(list(_class_elements(CycleType.parse("2-3", 7)))) == 420
        assert len(list(_class_elements(CycleType.parse("2-2", 7)))) == 105
        assert len(list(_class_elements(CycleType.parse("7", 7)))) == 720

    def test_class_elements_have_the_type(self):
        ct = CycleType.parse("2-3", 7)
        for perm in _class_elements(ct):
            assert _cycle_type(perm) == ct.parts

    def test_centralizer_order(self):
        g = CycleType.parse("2-3", 7).canonical_representative()
        cent = set(_centralizer_elements(g))
        assert len(cent) == 12
        assert all(_compose(c, g) == _compose(g, c) for c in cent)


class TestEnumerate:
    def test_count_4(self):
        classes = enumerate_nielsen(7, ("6", "6", "2-2"),
                                    require_group_order=5040)
        assert len(classes) == 4

    def test_count_9(self):
        classes = enumerate_nielsen(7, ("2-3", "2-3", "7"),
                                    require_group_order=5040)
        assert len(classes) == 9

    def test_p3(self):
        assert len(enumerate_nielsen(3, ("3", "3", "3"))) == 1

    def test_triples_multiply_to_identity(self):
        for d in enumerate_nielsen(7, ("2-3", "2-3", "7"),
                                   require_group_order=5040):
            prod = _compose(_compose(d.g0, d.g1), d.g_inf)
            assert prod == tuple(range(7))
            assert d.transitive

    def test_cyclic_invariance_of_counts(self):
        types = ("6", "6", "2-2")
        base = len(enumerate_nielsen(7, types, require_group_order=5040))
        for rot in (1, 2):
            rotated = types[rot:] + types[:rot]
            assert len(enumerate_nielsen(7, rotated,
                                         require_group_order=5040)) == base

    def test_degree_guard(self):
        with pytest.raises(DegreeTooLarge):
            enumerate_nielsen(13, ("13", "13", "13"))

    def test_deterministic(self):
        a = enumerate_nielsen(7, ("2-3", "2-3", "7"), require_group_order=5040)
        b = enumerate_nielsen(7, ("2-3", "2-3", "7"), require_group_order=5040)
        assert [(d.g0, d.g1) for d in a] == [(d.g0, d.g1) for d in b]


class TestGroupId:
    def test_symmetric_flag(self):
        for d in enumerate_nielsen(7, ("2-3", "2-3", "7"),
                                   require_group_order=5040):
            gid = monodromy_group_id(d)
            assert gid.order == 5040 and gid.is_full_symmetric
            assert not gid.is_alternating and not gid.is_order_168

    def test_cyclic_case(self):
        d = enumerate_nielsen(3, ("3", "3", "3"))[0]
        gid = monodromy_group_id(d)
        assert gid.order == 3 and not gid.is_full_symmetric

    def test_order_168_flagged_consistently(self):
        # scan (7,7,2-2): any class of order 168 must carry the flag
        classes = enumerate_nielsen(7, ("7", "7", "2-2"))
        seen = {monodromy_group_id(d).order for d in classes}
        for d in classes:
            gid = monodromy_group_id(d)
            assert gid.is_order_168 == (gid.order == 168)
        assert seen, "type (7,7,2-2) yielded no classes at all"


class TestGenusAndSignature:
    def test_genus_values(self):
        assert cover_genus(7, ("6", "6", "2-2")) == 0
        assert cover_genus(7, ("2-3", "2-3", "7")) == 0
        assert cover_genus(7, ("7", "7", "7")) == 3

    def test_signatures(self):
        assert reduction_signature(7, ("6", "6", "2-2")).entries == \
            (F(1, 6), F(1, 6), F(2, 3))
        sig = reduction_signature(7, ("2-3", "2-3", "7"))
        assert sig.entries == (F(1, 2), F(1, 2), F(0))
        assert sig.wild == (2,)

    def test_signature_sum_is_one(self):
        sig = reduction_signature(7, ("6", "6", "2-2"))
        assert sum(sig.entries) == 1

    def test_genus_not_zero(self):
        with pytest.raises(GenusNotZero):
            reduction_signature(7, ("7", "7", "7"))

    def test_identity_type_violates(self):
        # cycles(type) = p means sigma = 1, the forbidden boundary
        with pytest.raises((SignatureViolation, GenusNotZero)):
            reduction_signature(7, ("7", "1", "7"))

    def test_genus_symmetric(self):
        import itertools
        for perm in itertools.permutations(("6", "6", "2-2")):
            assert cover_genus(7, perm) == 0


class TestNPrimeBounds:
    def test_s7(self):
        s7 = PermGroupHandle.symmetric(7)
        assert s7.order == math.factorial(7)
        assert n_prime_bounds(7, s7, [6, 6, 3], True) == (3, 6)
        assert n_prime_bounds(7, s7, [2, 2], True) == (2, 6)

    def test_lower_divides_upper(self):
        s7 = PermGroupHandle.symmetric(7)
        for ms in ([6, 6, 3], [2, 2], [6, 3], [2, 6]):
            lo, up = n_prime_bounds(7, s7, ms, True)
            assert up % lo == 0

    def test_sylow_guard(self):
        s7 = PermGroupHandle.symmetric(7)
        with pytest.raises(PSylowNotCyclicOrderP):
            n_prime_bounds(3, s7, [2], True)    # 9 divides 5040

    def test_chi_not_injective_lower_one(self):
        s7 = PermGroupHandle.symmetric(7)
        assert n_prime_bounds(7, s7, [6, 6], False)[0] == 1


class TestAnalyze:
    def test_worked_example_half(self):
        r = analyze_dessin(7, ("2-3", "2-3", "7"), n_prime=2,
                           require_group_order=5040)
        assert r.class_count == 9
        assert r.signature.entries == (F(1, 2), F(1, 2), F(0))
        assert r.lifting.stable_degree == 6
        assert r.predicted_ramification == [3]
        assert r.datum_witness["classification"] == "Logarithmic"

    def test_worked_example_sixth(self):
        degrees = set()
        for aut3 in (1, 2):
            r = analyze_dessin(7, ("6", "6", "2-2"), aut_orders=[1, 1, aut3],
                               n_prime=3, require_group_order=5040)
            assert r.class_count == 4
            assert r.lifting.stable_degree == 12
            degrees.update(c.moduli_degree
                           for c in r.lifting.moduli_candidates)
        assert degrees == {2, 4}

    def test_failure_carried(self):
        r = analyze_dessin(3, ("3", "3", "3"))
        assert r.failure is not None and "GenusNotZero" in r.failure
        assert r.classes == []
