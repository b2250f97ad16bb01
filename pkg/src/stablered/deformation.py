"""Deformation data on the projective line and their invariants.

A datum is a tame cyclic cover together with a differential that is an
eigenvector for the cover's automorphism group and is either logarithmic
or exact.  This module computes the critical-point invariants (m, h,
sigma), checks the local vanishing-cycle identity, classifies specialness,
builds normalized special data from a signature triple, and enumerates
admissible signatures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (InternalInconsistency, NoLogarithmicTwist, NotDivisible,
                     PreconditionViolated, ZeroDifferential)
from .fields import RationalFunction
from .superelliptic import (Classification, CurveDifferential, INFINITY,
                            SuperellipticCurve, build_curve, cartier,
                            classify_differential, differential_order,
                            eigencharacter)


def _kind(sigma: Fraction) -> str:
    if sigma == 0:
        return "wild"
    if 0 < sigma < 1:
        return "primitive-range"
    if sigma == 1:
        return "unit"
    if 1 < sigma < 2:
        return "new-range"
    return "other"


@dataclass(frozen=True)
class CriticalPoint:
    tau: object            # FieldElement or INFINITY
    m_tau: int
    h_tau: int
    sigma: Fraction
    kind: str


@dataclass(frozen=True)
class Signature:
    """Entries with index partition into primitive, new and wild parts."""
    entries: tuple
    prim: tuple
    new: tuple
    wild: tuple

    @classmethod
    def from_entries(cls, entries) -> "Signature":
        entries = tuple(Fraction(e) for e in entries)
        prim = tuple(i for i, e in enumerate(entries) if 0 < e < 1)
        new = tuple(i for i, e in enumerate(entries) if 1 < e < 2)
        wild = tuple(i for i, e in enumerate(entries) if e == 0)
        if len(prim) + len(new) + len(wild) != len(entries):
            raise PreconditionViolated(
                f"signature entries outside {{0}} u (0,1) u (1,2): {entries}")
        return cls(entries, prim, new, wild)

    def fractional_sum(self) -> Fraction:
        return (sum((self.entries[i] for i in self.prim), Fraction(0)) +
                sum((self.entries[i] - 1 for i in self.new), Fraction(0)))


class DeformationDatum:
    """Curve plus eigen-differential with logarithmic or exact type."""

    def __init__(self, curve: SuperellipticCurve, omega: CurveDifferential,
                 h_order: Optional[int] = None,
                 chi_kernel_order: Optional[int] = None, base_genus: int = 0):
        if omega.is_zero():
            raise ZeroDifferential("a deformation datum needs omega != 0")
        if math.gcd(curve.m, curve.p) != 1:
            raise PreconditionViolated("|H| must be prime to p")
        kind = classify_differential(omega, curve)
        if kind is Classification.NEITHER:
            raise PreconditionViolated(
                "omega is neither logarithmic nor exact")
        js = sorted(omega.components)
        if len(js) != 1:
            raise PreconditionViolated("omega must be a single eigencomponent")
        self.curve = curve
        self.omega = omega
        self.classification = kind
        self.h_order = h_order if h_order is not None else curve.m
        if chi_kernel_order is None:
            chi_kernel_order = math.gcd(js[0], curve.m) if curve.m > 1 else 1
        self.chi_kernel_order = chi_kernel_order
        self.base_genus = base_genus
        # witness data filled in by build_normalized_special
        self.curve_leading = curve.leading
        self.epsilon = None
        self.scalar_twist = None

    def is_multiplicative(self) -> bool:
        return self.classification is Classification.LOGARITHMIC


def _support_points(datum: DeformationDatum):
    """Marked points plus the rational support of the components."""
    curve = datum.curve
    pts = list(curve.marked_x_points)
    for r in datum.omega.components.values():
        for poly in (r.num, r.den):
            if poly.degree <= 0:
                continue
            pairs, leftover = poly.rational_roots()
            if leftover:
                raise InternalInconsistency(
                    "differential support is not rational over the base; "
                    "mark those points at construction")
            for root, _ in pairs:
                if not root.in_prime_field():
                    raise InternalInconsistency(
                        "differential support must be prime-field rational")
                if all(q == INFINITY or not q == root for q in pts):
                    pts.append(root)
    return pts


def critical_invariants(datum: DeformationDatum) -> list[CriticalPoint]:
    """One record per critical point, ordered by position (infinity last)."""
    curve = datum.curve
    out = []
    for tau in _support_points(datum):
        prof = curve.place(tau)
        m_tau = prof.ramification_index
        h_tau = differential_order(datum.omega, prof) + 1
        if (m_tau, h_tau) == (1, 1):
            continue
        sigma = Fraction(h_tau, m_tau)
        out.append(CriticalPoint(tau=prof.x0, m_tau=m_tau, h_tau=h_tau,
                                 sigma=sigma, kind=_kind(sigma)))
    out.sort(key=lambda c: (1, 0) if c.tau == INFINITY else (0, c.tau.encoding()))
    return out


@dataclass(frozen=True)
class VcfCheck:
    passed: bool
    lhs: Fraction
    rhs: Fraction
    residual: Fraction


def vcf_residual(sigmas, base_genus: int) -> VcfCheck:
    """Exact-rational check of sum(sigma_j - 1) against 2 g - 2."""
    lhs = sum((Fraction(s) - 1 for s in sigmas), Fraction(0))
    rhs = Fraction(2 * base_genus - 2)
    return VcfCheck(passed=(lhs == rhs), lhs=lhs, rhs=rhs, residual=lhs - rhs)


def check_local_vcf(datum: DeformationDatum) -> VcfCheck:
    """sum over critical points of (sigma - 1) must equal 2 g_X - 2."""
    points = critical_invariants(datum)
    return vcf_residual([c.sigma for c in points], datum.base_genus)


@dataclass(frozen=True)
class SpecialVerdict:
    special: bool
    signature: Optional[Signature]
    fractional_sum: Optional[Fraction]
    reason: Optional[str] = None


def is_special(datum: DeformationDatum) -> SpecialVerdict:
    """Special: all sigma < 2 and != 1, with exactly three entries below 1."""
    points = critical_invariants(datum)
    sigmas = [c.sigma for c in points]
    for s in sigmas:
        if s == 1:
            return SpecialVerdict(False, None, None, "sigma=1 forbidden")
        if s >= 2:
            return SpecialVerdict(False, None, None, f"sigma={s} >= 2")
        if s < 0:
            return SpecialVerdict(False, None, None, f"sigma={s} < 0")
    below = sum(1 for s in sigmas if s < 1)
    if below != 3:
        return SpecialVerdict(
            False, None, None,
            f"{below} entries below 1; a special datum needs exactly 3")
    sig = Signature.from_entries(sigmas)
    frac = sig.fractional_sum()
    if frac != 1:
        return SpecialVerdict(False, sig, frac,
                              f"fractional parts sum to {frac}, not 1")
    return SpecialVerdict(True, sig, frac)


def descend_by_kernel(invariants, kernel_order: int):
    """Divide every (m_j, h_j) by |Ker(chi)|; sigma is preserved."""
    if kernel_order < 1:
        raise NotDivisible("kernel order must be positive")
    out = []
    for m, h in invariants:
        if m % kernel_order or h % kernel_order:
            raise NotDivisible(
                f"kernel order {kernel_order} does not divide ({m}, {h})")
        out.append((m // kernel_order, h // kernel_order))
    return out


def _sigma_pair(sigma: Fraction):
    return sigma.numerator, sigma.denominator


def build_normalized_special(p: int, sigma_triple,
                             epsilon: int = 1) -> DeformationDatum:
    """Construct the multiplicative special datum with the given signature.

    The curve is z^m = lam * x^(a1) * (x-1)^(a2) with m the lcm of the
    sigma denominators and a_j = sigma_j * m, carrying the differential
    eps * z dx / (x(x-1)).  Scalars in F_p^x leave the Cartier eigenvalue
    alone, so the logarithmic twist is found by searching the curve's
    leading coefficient lam; when no prime-field lam works the coefficient
    field is extended and the differential rescaled instead.  Raises
    NoLogarithmicTwist when neither route produces a Cartier-fixed form.
    """
    sigmas = [Fraction(s) for s in sigma_triple]
    if len(sigmas) != 3:
        raise PreconditionViolated("a signature triple has three entries")
    for s in sigmas:
        if not (s == 0 or 0 < s < 1):
            raise PreconditionViolated(f"sigma={s} outside {{0}} u (0,1)")
    total = sum(sigmas)
    if total != 1:
        raise PreconditionViolated(f"sigma sum {total} != 1")
    m = 1
    for s in sigmas:
        m = m * s.denominator // math.gcd(m, s.denominator)
    if m == 1:
        raise PreconditionViolated("all denominators are 1; no cover")
    a1 = int(sigmas[0] * m)
    a2 = int(sigmas[1] * m)
    pairs = [(0, a1), (1, a2)]
    eps = epsilon % p
    if eps == 0:
        raise PreconditionViolated("epsilon must be a unit")

    def make(lam, s_base=1, scalar=None):
        curve = build_curve(p, s_base, m, pairs, leading_coeff=lam,
                            extra_marked=(0, 1))
        x = RationalFunction.x(curve.base)
        r = RationalFunction.constant(curve.base, eps) / (x * (x - 1))
        if scalar is not None:
            r = r * scalar
        return curve, CurveDifferential(curve, {1: r})

    witness = None
    for lam in range(1, p):
        curve, omega = make(lam)
        if classify_differential(omega, curve) is Classification.LOGARITHMIC:
            witness = (curve, omega, lam, None)
            break

    if witness is None:
        # extension route: on the lam=1 model C acts on the omega-line by a
        # constant mu; a scalar c with c^(p-1) = mu makes c*omega fixed.
        curve, omega = make(1)
        image = cartier(omega, curve)
        if set(image.components) != set(omega.components):
            raise NoLogarithmicTwist(
                f"Cartier does not stabilize the omega-line for {sigmas}")
        ratio = image.components[1] / omega.components[1]
        if ratio.num.degree != 0 or ratio.den.degree != 0:
            raise NoLogarithmicTwist(
                f"Cartier image is not proportional to omega for {sigmas}")
        mu = ratio.num.leading()
        if not mu.in_prime_field():
            raise NoLogarithmicTwist(
                f"Cartier eigenvalue lies outside the prime field for {sigmas}")
        order = mu.multiplicative_order()
        s_ext = order * curve.s
        curve2, _ = make(1, s_base=s_ext)
        mu2 = curve2.base.element(mu.lift())
        t = curve2.base.discrete_log(mu2)
        if t % (p - 1) != 0:
            raise NoLogarithmicTwist(
                f"no (p-1)-st root of the Cartier eigenvalue for {sigmas}")
        c = curve2.base.generator() ** (t // (p - 1))
        curve2, omega2 = make(1, s_base=s_ext, scalar=c)
        if classify_differential(omega2, curve2) is not Classification.LOGARITHMIC:
            raise NoLogarithmicTwist(
                f"extension twist failed to produce a logarithmic form "
                f"for {sigmas}")
        witness = (curve2, omega2, 1, c)

    curve, omega, lam, scalar = witness
    datum = DeformationDatum(curve, omega)
    datum.epsilon = eps
    datum.scalar_twist = scalar

    # a posteriori checks: the construction is verified, never trusted
    points = critical_invariants(datum)
    got = [c.sigma for c in points]
    if got != sigmas:
        raise InternalInconsistency(
            f"constructed datum has signature {got}, wanted {sigmas}")
    if not check_local_vcf(datum).passed:
        raise InternalInconsistency("local vanishing-cycle check failed")
    verdict = is_special(datum)
    if not verdict.special:
        raise InternalInconsistency(f"datum is not special: {verdict.reason}")
    if eigencharacter(omega, curve) is None:
        raise InternalInconsistency("datum lost its eigencharacter")
    return datum


def enumerate_signatures(p: int, max_new_tails: int,
                         denominators_divide_p_minus_1: bool) -> list[Signature]:
    """All admissible signatures, deterministically ordered.

    Exactly three entries in {0} u (0,1), up to max_new_tails entries in
    (1,2), fractional parts summing to 1.  With the flag set, denominators
    must divide p - 1 (injective-character case); otherwise any reduced
    denominator up to p - 1 is admitted.
    """
    if max_new_tails < 0:
        raise PreconditionViolated("max_new_tails must be >= 0")

    def denoms():
        for mm in range(2, p):
            if denominators_divide_p_minus_1 and (p - 1) % mm != 0:
                continue
            yield mm

    prim = sorted({Fraction(h, mm) for mm in denoms()
                   for h in range(1, mm) if math.gcd(h, mm) == 1})
    new = sorted({Fraction(h, mm) for mm in denoms()
                  for h in range(mm + 1, 2 * mm) if math.gcd(h, mm) == 1})
    base_candidates = [Fraction(0)] + prim

    results = []

    def pick_new(count_left, start, acc_frac, news):
        fill_base(1 - acc_frac, list(news))
        if count_left == 0:
            return
        for i in range(start, len(new)):
            extra = new[i] - 1
            if acc_frac + extra > 1:
                break
            news.append(new[i])
            pick_new(count_left - 1, i, acc_frac + extra, news)
            news.pop()

    def fill_base(target, news):
        # choose a nondecreasing triple from base_candidates summing to target
        n = len(base_candidates)

        def rec(k, start, remaining, chosen):
            if k == 0:
                if remaining == 0:
                    entries = tuple(sorted(c for c in chosen if c != 0)) + \
                        tuple(sorted(news)) + \
                        tuple(Fraction(0) for c in chosen if c == 0)
                    results.append(entries)
                return
            for i in range(start, n):
                c = base_candidates[i]
                if c > remaining:
                    break
                rec(k - 1, i, remaining - c, chosen + [c])

        if 0 <= target <= 3:
            rec(3, 0, target, [])

    pick_new(max_new_tails, 0, Fraction(0), [])

    unique = sorted(set(results))
    return [Signature.from_entries(entries) for entries in unique]
