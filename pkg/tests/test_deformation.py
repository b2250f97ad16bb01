from fractions import Fraction

import pytest

from stablered.deformation import (DeformationDatum,
                                   build_normalized_special, check_local_vcf,
                                   critical_invariants, descend_by_kernel,
                                   enumerate_signatures, is_special)
from stablered.errors import NotDivisible, PreconditionViolated
from stablered.fields import RationalFunction
from stablered.superelliptic import (Classification, CurveDifferential,
                                     INFINITY, build_curve, eigencharacter)

F = Fraction


class TestCriticalInvariants:
    def test_sixth_root_signature(self):
        d = build_normalized_special(7, (F(1, 6), F(1, 6), F(2, 3)))
        pts = critical_invariants(d)
        assert [(c.m_tau, c.h_tau, c.sigma) for c in pts] == \
            [(6, 1, F(1, 6)), (6, 1, F(1, 6)), (3, 2, F(2, 3))]
        assert all(c.kind == "primitive-range" for c in pts)

    def test_half_half_wild(self):
        d = build_normalized_special(7, (F(1, 2), F(1, 2), F(0)))
        pts = critical_invariants(d)
        assert [c.sigma for c in pts] == [F(1, 2), F(1, 2), F(0)]
        assert pts[2].kind == "wild" and pts[2].tau == INFINITY
        assert (pts[2].m_tau, pts[2].h_tau) == (1, 0)

    def test_line_with_dlog(self):
        # m = 1: the line itself; omega = dx/x has wild points at 0, inf
        c = build_curve(7, 1, 1, [(0, 1)], extra_marked=())
        x = RationalFunction.x(c.base)
        om = CurveDifferential(c, {0: 1 / x})
        d = DeformationDatum(c, om)
        pts = critical_invariants(d)
        assert [(p.m_tau, p.h_tau, p.sigma) for p in pts] == \
            [(1, 0, F(0)), (1, 0, F(0))]
        assert check_local_vcf(d).passed


class TestLocalVcf:
    def test_pass_cases(self):
        for sig in [(F(1, 6), F(1, 6), F(2, 3)), (F(1, 2), F(1, 2), F(0))]:
            d = build_normalized_special(7, sig)
            rep = check_local_vcf(d)
            assert rep.passed and rep.lhs == -2 and rep.residual == 0

    def test_fail_reports_residual(self):
        # no actual datum can carry (1/2,1/2,1/2), which is exactly why
        # the residual helper must flag it
        from stablered.deformation import vcf_residual
        rep = vcf_residual([F(1, 2), F(1, 2), F(1, 2)], 0)
        assert not rep.passed and rep.residual == F(1, 2)
        good = vcf_residual([F(1, 6), F(1, 6), F(2, 3)], 0)
        assert good.passed and good.lhs == -2


class TestIsSpecial:
    def test_special_partitions(self):
        d = build_normalized_special(7, (F(1, 6), F(1, 6), F(2, 3)))
        v = is_special(d)
        assert v.special and v.fractional_sum == 1
        assert len(v.signature.prim) == 3 and not v.signature.new

        d2 = build_normalized_special(7, (F(1, 2), F(1, 2), F(0)))
        v2 = is_special(d2)
        assert v2.special
        assert v2.signature.wild == (2,)

    def test_sigma_one_rejected_at_build(self):
        with pytest.raises(PreconditionViolated):
            build_normalized_special(7, (F(1), F(0), F(0)))

    def test_sigma_one_datum_not_special(self):
        # omega = dx on z^2 = x(x-1) is exact with sigma = 1 at 0 and 1
        c = build_curve(7, 1, 2, [(0, 1), (1, 1)])
        om = CurveDifferential(c, {0: RationalFunction.constant(c.base, 1)})
        d = DeformationDatum(c, om)
        assert d.classification is Classification.EXACT
        pts = critical_invariants(d)
        assert [p.sigma for p in pts] == [F(1), F(1), F(-1)]
        assert check_local_vcf(d).passed
        verdict = is_special(d)
        assert not verdict.special and "sigma=1" in verdict.reason


class TestBuildNormalizedSpecial:
    def test_classification_and_eigen(self):
        for sig in [(F(1, 6), F(1, 6), F(2, 3)), (F(1, 2), F(1, 2), F(0))]:
            d = build_normalized_special(7, sig)
            assert d.classification is Classification.LOGARITHMIC
            assert eigencharacter(d.omega, d.curve) is not None

    def test_lambda_witness_for_sixth_roots(self):
        d = build_normalized_special(7, (F(1, 6), F(1, 6), F(2, 3)))
        assert d.curve_leading == 5          # lambda = Cartier eigenvalue
        assert d.curve.m == 6

    def test_sum_not_one_rejected(self):
        with pytest.raises(PreconditionViolated):
            build_normalized_special(7, (F(1, 3), F(1, 3), F(1, 2)))

    def test_all_integral_rejected(self):
        with pytest.raises(PreconditionViolated):
            build_normalized_special(7, (F(0), F(0), F(1)))

    def test_extension_fallback(self):
        # (1/3,1/3,1/3): eigenvalue 6 is not in (F_7^x)^2, the scalar
        # twist lives in the quadratic extension
        d = build_normalized_special(7, (F(1, 3), F(1, 3), F(1, 3)))
        assert d.classification is Classification.LOGARITHMIC
        assert d.scalar_twist is not None and d.curve.s == 2

    def test_roundtrip_all_enumerated(self):
        for sig in enumerate_signatures(7, 0, True):
            d = build_normalized_special(7, sig.entries)
            pts = critical_invariants(d)
            assert tuple(c.sigma for c in pts) == sig.entries
            assert check_local_vcf(d).passed
            assert is_special(d).special
            assert d.classification is Classification.LOGARITHMIC


class TestDescend:
    def test_componentwise(self):
        assert descend_by_kernel([(12, 8)], 4) == [(3, 2)]
        assert descend_by_kernel([(12, 8), (6, 3)], 1) == [(12, 8), (6, 3)]

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            descend_by_kernel([(6, 4)], 4)

    def test_sigma_preserved(self):
        pairs = [(12, 8), (8, 4), (20, 16)]
        down = descend_by_kernel(pairs, 4)
        for (m, h), (mm, hh) in zip(pairs, down):
            assert F(h, m) == F(hh, mm)


class TestEnumerateSignatures:
    def test_p7_contains_worked_examples(self):
        entries = [s.entries for s in enumerate_signatures(7, 0, True)]
        assert (F(1, 6), F(1, 6), F(2, 3)) in entries
        assert (F(1, 2), F(1, 2), F(0)) in entries

    def test_p3(self):
        assert [s.entries for s in enumerate_signatures(3, 0, True)] == \
            [(F(1, 2), F(1, 2), F(0))]

    def test_no_unit_entries(self):
        for s in enumerate_signatures(5, 2, True):
            assert 1 not in s.entries

    def test_fractional_sums(self):
        for s in enumerate_signatures(7, 2, True):
            assert s.fractional_sum() == 1

    def test_deterministic_order(self):
        a = enumerate_signatures(7, 1, True)
        b = enumerate_signatures(7, 1, True)
        assert [s.entries for s in a] == [s.entries for s in b]
        entries = [s.entries for s in a]
        assert entries == sorted(entries)

    def test_flag_off_is_superset(self):
        strict = {s.entries for s in enumerate_signatures(7, 0, True)}
        loose = {s.entries for s in enumerate_signatures(7, 0, False)}
        assert strict <= loose
        assert any(s not in strict for s in loose)
