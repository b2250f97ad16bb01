"""Counting and degree formulas attached to a special datum.

Everything here is integer arithmetic on the tail invariants: the degree
N  = (p-1) * lcm(h_j) of the minimal tame extension carrying the stable
model, the patching count (p-1) * prod(h_j) and its orbit structure, the
lift count and field-of-moduli degree N' with the tail automorphism
orders divided out, and the coarse mildness classifier by p-valuation of
the group order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .errors import (InternalInconsistency, NotCoprime, NotDivisible,
                     PreconditionViolated)


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _validate_h(p, h_values):
    for h in h_values:
        if h < 1:
            raise PreconditionViolated(f"conductor {h} < 1")
        if math.gcd(h, p) != 1:
            raise NotCoprime(f"conductor {h} is divisible by p = {p}")


@dataclass(frozen=True)
class StableFieldDegree:
    degree: int
    empty_tail_list: bool        # flagged: the formulas never instantiate this


def stable_field_degree(p: int, h_values) -> StableFieldDegree:
    """N = (p-1) * lcm of the conductors over the non-wild tails."""
    h_values = list(h_values)
    _validate_h(p, h_values)
    return StableFieldDegree(degree=(p - 1) * _lcm(h_values),
                             empty_tail_list=not h_values)


@dataclass(frozen=True)
class PatchingCount:
    count: int
    orbit_length: int
    orbit_count: int


def patching_count(p: int, h_values) -> PatchingCount:
    """(p-1) * prod h_j patching data in orbits of length N."""
    h_values = list(h_values)
    _validate_h(p, h_values)
    count = p - 1
    for h in h_values:
        count *= h
    orbit = stable_field_degree(p, h_values).degree
    if count % orbit != 0:
        raise InternalInconsistency(
            f"orbit length {orbit} does not divide the count {count}")
    return PatchingCount(count=count, orbit_length=orbit,
                         orbit_count=count // orbit)


@dataclass
class SpecialGDatumSummary:
    """Numeric summary of a special datum with group-side inputs.

    aut_inner_orders are the inner automorphism orders of the tail
    covers; they default to 1 and must divide the matching conductor.
    n_prime is the order of the image of the datum's automorphisms in
    G/C_G when known; otherwise bounds (lower, upper) generate labeled
    candidates.
    """
    p: int
    h_values: list
    m_values: list
    aut_inner_orders: Optional[list] = None
    n_prime: Optional[int] = None
    n_prime_bounds: Optional[tuple] = None
    chi_injective: bool = True

    def __post_init__(self):
        if self.aut_inner_orders is None:
            self.aut_inner_orders = [1] * len(self.h_values)
        if len(self.h_values) != len(self.m_values):
            raise PreconditionViolated("h and m sequences differ in length")
        if len(self.aut_inner_orders) != len(self.h_values):
            raise PreconditionViolated("aut order sequence has wrong length")
        _validate_h(self.p, self.h_values)
        for m, h in zip(self.m_values, self.h_values):
            if ((self.p - 1) * h) % m != 0:
                raise PreconditionViolated(
                    f"tail type ({m}, {h}) violates m | (p-1)h")
        if self.n_prime is not None and self.n_prime_bounds is not None:
            lo, up = self.n_prime_bounds
            if self.n_prime % lo != 0 or up % self.n_prime != 0:
                raise PreconditionViolated(
                    f"n' = {self.n_prime} outside bounds {self.n_prime_bounds}")


@dataclass(frozen=True)
class ModuliCandidate:
    n_prime: int
    lift_count: int
    moduli_degree: int


def moduli_degree(summary: SpecialGDatumSummary):
    """Lift count and field-of-moduli degree, or labeled candidates.

    With n' fixed returns a single ModuliCandidate; otherwise one per
    admissible n' (a divisor of the upper bound, a multiple of the lower
    bound when the character is injective, inside the bounds).
    """
    p = summary.p
    reduced = []
    for h, aut in zip(summary.h_values, summary.aut_inner_orders):
        if aut < 1 or h % aut != 0:
            raise NotDivisible(
                f"aut order {aut} does not divide conductor {h}")
        reduced.append(h // aut)

    def build(n_prime: int) -> ModuliCandidate:
        if n_prime < 1 or (p - 1) % n_prime != 0:
            raise PreconditionViolated(
                f"n' = {n_prime} must divide p - 1 = {p - 1}")
        factor = (p - 1) // n_prime
        cnt = factor
        for r in reduced:
            cnt *= r
        return ModuliCandidate(n_prime=n_prime, lift_count=cnt,
                               moduli_degree=factor * _lcm(reduced))

    if summary.n_prime is not None:
        return build(summary.n_prime)
    if summary.n_prime_bounds is None:
        raise PreconditionViolated("need n_prime or n_prime_bounds")
    lo, up = summary.n_prime_bounds
    candidates = []
    for d in range(1, up + 1):
        if up % d != 0 or not lo <= d <= up:
            continue
        if summary.chi_injective and d % lo != 0:
            continue
        candidates.append(build(d))
    return candidates


def exceptional_field_degree(p: int, h: int) -> int:
    """Stable-reduction field degree h(p-1) for the one-tail exceptional
    shapes; kept separate from the generic formula on purpose."""
    _validate_h(p, [h])
    return h * (p - 1)


MILD_GOOD = "GoodReductionForced"
MILD_STRICT = "StrictlyDividesMildIfBad"
MILD_UNKNOWN = "PSquareUnknown"


def reduction_mildness(group_order: int, p: int) -> str:
    """Classify by the p-valuation of the group order: 0, 1, or more."""
    if group_order < 1:
        raise PreconditionViolated("group order must be positive")
    v = 0
    n = group_order
    while n % p == 0:
        n //= p
        v += 1
    if v == 0:
        return MILD_GOOD
    if v == 1:
        return MILD_STRICT
    return MILD_UNKNOWN


@dataclass
class LiftingReport:
    """Assembled arithmetic prediction for one cover family."""
    p: int
    signature: list                  # Fractions over all tails, wild included
    h_values: list                   # non-wild tails only
    m_values: list
    stable_degree: int
    empty_tail_list: bool
    patching: PatchingCount
    n_prime_bounds: Optional[tuple]
    moduli_candidates: list          # ModuliCandidate records
    disk_thresholds: list            # Fractions p*m/((p-1)*h) per tail
    mildness: Optional[str] = None
    exceptional_degree: Optional[int] = None  # h(p-1) when the tree is exceptional
    notes: list = dc_field(default_factory=list)

    @property
    def orbit_length(self) -> int:
        return self.patching.orbit_length


def assemble_report(p, signature, aut_orders=None, n_prime=None,
                    n_prime_bounds=None, chi_injective=True,
                    group_order=None) -> LiftingReport:
    """Build the LiftingReport for a signature's non-wild tail data."""
    sig = [Fraction(s) for s in signature]
    nonwild = [s for s in sig if s != 0]
    h_values = [s.numerator for s in nonwild]
    m_values = [s.denominator for s in nonwild]
    sfd = stable_field_degree(p, h_values)
    patch = patching_count(p, h_values)
    summary = SpecialGDatumSummary(
        p=p, h_values=h_values, m_values=m_values,
        aut_inner_orders=list(aut_orders) if aut_orders else None,
        n_prime=n_prime, n_prime_bounds=n_prime_bounds,
        chi_injective=chi_injective)
    cands = moduli_degree(summary)
    if not isinstance(cands, list):
        cands = [cands]
    thresholds = [Fraction(p * m, (p - 1) * h)
                  for m, h in zip(m_values, h_values)]
    report = LiftingReport(
        p=p, signature=sig, h_values=h_values, m_values=m_values,
        stable_degree=sfd.degree, empty_tail_list=sfd.empty_tail_list,
        patching=patch, n_prime_bounds=n_prime_bounds,
        moduli_candidates=cands, disk_thresholds=thresholds)
    if group_order is not None:
        report.mildness = reduction_mildness(group_order, p)
    if sfd.empty_tail_list:
        report.notes.append("all tails wild: lcm/product conventions used")
    return report
