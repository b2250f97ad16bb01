"""Permutation engine for genus-zero covers of prime degree.

Branch data is a triple of conjugacy classes of S_p written in hyphen
notation ("2-3" is a 2-cycle times a 3-cycle, fixed points implicit).
Classes of covers are triples (g0, g1, ginf) multiplying to the identity
with transitive image, counted up to simultaneous conjugation; with the
first element pinned to a canonical representative those classes are
exactly the centralizer orbits on the second element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .deformation import Signature, build_normalized_special
from .errors import (DegreeTooLarge, GenusNotZero, InternalInconsistency,
                     NoLogarithmicTwist, NonIntegralGenus, ParseError,
                     PSylowNotCyclicOrderP, SignatureViolation)
from .lifting import LiftingReport, assemble_report

MAX_DEGREE = 11
_CLOSURE_CAP = 1_000_000


def _compose(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def _inverse(a):
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def _identity(n):
    return tuple(range(n))


def _cycle_type(perm):
    n = len(perm)
    seen = [False] * n
    parts = []
    for i in range(n):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            parts.append(length)
    return tuple(sorted(parts, reverse=True))


@dataclass(frozen=True)
class CycleType:
    """A partition of the degree, fixed points stored explicitly."""
    degree: int
    parts: tuple

    @classmethod
    def from_parts(cls, degree, nontrivial_parts):
        parts = sorted((int(x) for x in nontrivial_parts if int(x) > 1),
                       reverse=True)
        if any(int(x) < 1 for x in nontrivial_parts):
            raise ParseError("cycle lengths must be positive")
        total = sum(parts)
        if total > degree:
            raise ParseError(f"cycle lengths sum to {total} > degree {degree}")
        full = tuple(parts) + (1,) * (degree - total)
        return cls(degree=degree, parts=full)

    @classmethod
    def parse(cls, text: str, degree: int) -> "CycleType":
        """Hyphen notation: '2-3', '2-2', '7', '6'."""
        try:
            parts = [int(tok) for tok in text.strip().split("-")]
        except ValueError as exc:
            raise ParseError(f"bad cycle type {text!r}") from exc
        return cls.from_parts(degree, parts)

    @property
    def cycle_count(self) -> int:
        return len(self.parts)

    def canonical_representative(self):
        perm = list(range(self.degree))
        pos = 0
        for length in self.parts:
            for k in range(length):
                perm[pos + k] = pos + (k + 1) % length
            pos += length
        return tuple(perm)

    def __str__(self):
        nontrivial = [str(x) for x in self.parts if x > 1]
        return "-".join(nontrivial) if nontrivial else "1"


def _class_elements(ct: CycleType):
    """All permutations of the given cycle type, generated directly.

    The smallest unassigned point leads the next cycle; it chooses one of
    the remaining distinct cycle lengths and a body.  Every permutation
    has a unique such construction, so nothing repeats.
    """
    import itertools
    n = ct.degree

    def build(remaining, parts_left, mapping):
        if not parts_left:
            perm = list(range(n))
            for src, dst in mapping:
                perm[src] = dst
            yield tuple(perm)
            return
        leader = min(remaining)
        rest = sorted(remaining - {leader})
        for length in sorted(set(parts_left)):
            shorter = list(parts_left)
            shorter.remove(length)
            for body in itertools.permutations(rest, length - 1):
                cycle = (leader,) + body
                extra = [(cycle[i], cycle[(i + 1) % length])
                         for i in range(length)]
                yield from build(remaining - set(cycle), shorter,
                                 mapping + extra)

    yield from build(frozenset(range(n)), list(ct.parts), [])


def _centralizer_elements(perm):
    """The centralizer of perm in S_n.

    An element commuting with perm permutes the cycles of each length
    among themselves with a rotation on each; the centralizer is the
    product of those block factors, of order prod L^(k_L) * k_L!.
    """
    import itertools
    n = len(perm)
    seen = [False] * n
    by_length = {}
    for i in range(n):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = perm[j]
            by_length.setdefault(len(cyc), []).append(tuple(cyc))

    factors = []
    for length, cycs in sorted(by_length.items()):
        choices = []
        for assignment in itertools.permutations(cycs):
            for rotations in itertools.product(range(length),
                                               repeat=len(cycs)):
                mapping = {}
                for cyc, target, rot in zip(cycs, assignment, rotations):
                    for idx in range(length):
                        mapping[cyc[idx]] = target[(idx + rot) % length]
                choices.append(mapping)
        factors.append(choices)

    for combo in itertools.product(*factors):
        mapping = {}
        for part in combo:
            mapping.update(part)
        out = [0] * n
        for src, dst in mapping.items():
            out[src] = dst
        yield tuple(out)


def _closure(generators, cap=_CLOSURE_CAP):
    """BFS closure; returns (order, elements or None if capped)."""
    n = len(generators[0])
    ident = _identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = _compose(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        return len(seen), None
        frontier = nxt
    return len(seen), seen


def _transitive(generators, n) -> bool:
    reach = {0}
    frontier = [0]
    while frontier:
        nf = []
        for x in frontier:
            for g in generators:
                if g[x] not in reach:
                    reach.add(g[x])
                    nf.append(g[x])
        frontier = nf
    return len(reach) == n


@dataclass(frozen=True)
class DessinClass:
    g0: tuple
    g1: tuple
    g_inf: tuple
    group_order: int
    transitive: bool

    def canonical(self):
        return (self.g0, self.g1)


def enumerate_nielsen(p: int, types, require_group_order: Optional[int] = None
                      ) -> list:
    """Classes of triples with the given cycle types, product identity,
    transitive image, up to simultaneous conjugation.

    The first element is pinned to the canonical representative of its
    class; the remaining freedom is conjugation by its centralizer, so
    classes are centralizer orbits on the valid second elements.  Output
    is sorted by the orbit-minimal second element.
    """
    if p > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {p} beyond desk-scale brute force")
    t0, t1, t2 = (t if isinstance(t, CycleType) else CycleType.parse(t, p)
                  for t in types)
    g0 = t0.canonical_representative()
    want2 = t2.parts
    valid = []
    for g1 in _class_elements(t1):
        prod = _compose(g0, g1)
        if _cycle_type(prod) != want2:
            continue
        if not _transitive([g0, g1], p):
            continue
        order, _ = _closure([g0, g1])
        if require_group_order is not None and order != require_group_order:
            continue
        valid.append((g1, order))

    orders = dict(valid)
    remaining = set(orders)
    cent = list(_centralizer_elements(g0))
    classes = []
    while remaining:
        rep = min(remaining)
        orbit = set()
        for c in cent:
            conj = _compose(_compose(c, rep), _inverse(c))
            orbit.add(conj)
        if not orbit <= remaining:
            raise InternalInconsistency("centralizer orbit left the valid set")
        remaining -= orbit
        g1 = min(orbit)
        classes.append(DessinClass(
            g0=g0, g1=g1, g_inf=_inverse(_compose(g0, g1)),
            group_order=orders[rep], transitive=True))
    classes.sort(key=lambda d: d.g1)
    return classes


@dataclass(frozen=True)
class GroupId:
    order: int
    is_full_symmetric: bool
    is_alternating: bool
    is_order_168: bool


def monodromy_group_id(d: DessinClass) -> GroupId:
    n = len(d.g0)
    full = math.factorial(n)
    return GroupId(order=d.group_order,
                   is_full_symmetric=(d.group_order == full),
                   is_alternating=(d.group_order == full // 2),
                   is_order_168=(d.group_order == 168))


def cover_genus(p: int, types) -> int:
    """2g - 2 = -2p + sum (p - cycle count) over the three types."""
    parsed = [t if isinstance(t, CycleType) else CycleType.parse(t, p)
              for t in types]
    value = -2 * p + sum(p - t.cycle_count for t in parsed)
    if value % 2 != 0 or value < -2:
        raise NonIntegralGenus(f"2g - 2 = {value} is not attainable")
    return (value + 2) // 2


def reduction_signature(p: int, types) -> Signature:
    """sigma_j = (cycle count - 1)/(p - 1) per branch point, genus 0 only."""
    parsed = [t if isinstance(t, CycleType) else CycleType.parse(t, p)
              for t in types]
    g = cover_genus(p, parsed)
    if g != 0:
        raise GenusNotZero(f"cover genus {g} != 0")
    entries = [Fraction(t.cycle_count - 1, p - 1) for t in parsed]
    for e in entries:
        if e == 1 or e > 1:
            raise SignatureViolation(f"sigma = {e} outside {{0}} u (0,1)")
    if sum(entries) != 1:
        raise SignatureViolation(f"sigma sum {sum(entries)} != 1")
    return Signature.from_entries(entries)


class PermGroupHandle:
    """A permutation group given by generators, with its element table."""

    def __init__(self, generators):
        gens = [tuple(g) for g in generators]
        if not gens:
            raise InternalInconsistency("need at least one generator")
        n = len(gens[0])
        if math.factorial(n) > math.factorial(10):
            raise DegreeTooLarge("element tables are kept up to degree 10")
        order, elements = _closure(gens, cap=math.factorial(10))
        if elements is None:
            raise InternalInconsistency("group too large to tabulate")
        self.degree = n
        self.generators = gens
        self.elements = elements
        self.order = order

    @classmethod
    def symmetric(cls, n: int) -> "PermGroupHandle":
        if n == 1:
            return cls([(0,)])
        transposition = tuple([1, 0] + list(range(2, n)))
        cycle = tuple(list(range(1, n)) + [0])
        return cls([transposition, cycle])


def n_prime_bounds(p: int, group: PermGroupHandle, m_values,
                   chi_injective: bool) -> tuple:
    """(lower, upper) bracket for n'.

    upper is the index of the centralizer of a p-Sylow inside its
    normalizer; lower is gcd(m_j) in the injective-character case and 1
    otherwise.
    """
    v = 0
    n = group.order
    while n % p == 0:
        n //= p
        v += 1
    if v != 1:
        raise PSylowNotCyclicOrderP(
            f"p = {p} divides the group order with exponent {v}, need 1")
    gen = next((g for g in sorted(group.elements)
                if _cycle_type(g)[0] == p and set(_cycle_type(g)[1:]) <= {1}
                and _order_of(g) == p), None)
    if gen is None:
        gen = next(g for g in sorted(group.elements) if _order_of(g) == p)
    sylow = set()
    x = _identity(group.degree)
    for _ in range(p):
        sylow.add(x)
        x = _compose(gen, x)
    normalizer = 0
    centralizer = 0
    for el in group.elements:
        el_inv = _inverse(el)
        conj = _compose(_compose(el, gen), el_inv)
        if conj in sylow:
            normalizer += 1
            if conj == gen:
                centralizer += 1
    if normalizer % centralizer != 0:
        raise InternalInconsistency("centralizer size does not divide "
                                    "normalizer size")
    upper = normalizer // centralizer
    lower = math.gcd(*m_values) if (chi_injective and m_values) else 1
    return lower, upper


def _order_of(perm):
    order = 1
    for L in _cycle_type(perm):
        order = order * L // math.gcd(order, L)
    return order


@dataclass
class DessinAnalysis:
    p: int
    types: list
    genus: Optional[int] = None
    signature: Optional[Signature] = None
    classes: list = dc_field(default_factory=list)
    class_count: int = 0
    group_ids: list = dc_field(default_factory=list)
    datum_witness: Optional[dict] = None
    lifting: Optional[LiftingReport] = None
    n_prime_bounds: Optional[tuple] = None
    predicted_ramification: list = dc_field(default_factory=list)
    failure: Optional[str] = None
    notes: list = dc_field(default_factory=list)


def analyze_dessin(p: int, types, aut_orders=None, n_prime=None,
                   require_group_order: Optional[int] = None
                   ) -> DessinAnalysis:
    """End-to-end pipeline from branch data to the arithmetic prediction.

    Mathematical failures (nonzero genus, boundary signature) are carried
    on the result rather than raised, so a report can still be emitted.
    """
    parsed = [t if isinstance(t, CycleType) else CycleType.parse(t, p)
              for t in types]
    result = DessinAnalysis(p=p, types=parsed)
    try:
        result.genus = cover_genus(p, parsed)
        result.signature = reduction_signature(p, parsed)
    except (NonIntegralGenus, GenusNotZero, SignatureViolation) as exc:
        result.failure = f"{type(exc).__name__}: {exc}"
        return result

    result.classes = enumerate_nielsen(p, parsed, require_group_order)
    result.class_count = len(result.classes)
    result.group_ids = [monodromy_group_id(d) for d in result.classes]

    try:
        datum = build_normalized_special(p, result.signature.entries)
        result.datum_witness = {
            "curve_leading": datum.curve_leading,
            "epsilon": datum.epsilon,
            "scalar_twist": (None if datum.scalar_twist is None
                             else datum.scalar_twist.coeffs),
            "field_degree": datum.curve.s,
            "classification": datum.classification.value,
        }
    except NoLogarithmicTwist as exc:
        result.notes.append(f"no logarithmic twist found: {exc}")

    sp = PermGroupHandle.symmetric(p)
    m_values = [s.denominator for s in result.signature.entries if s != 0]
    bounds = n_prime_bounds(p, sp, m_values, chi_injective=True)
    result.n_prime_bounds = bounds
    result.lifting = assemble_report(
        p, result.signature.entries, aut_orders=aut_orders, n_prime=n_prime,
        n_prime_bounds=None if n_prime is not None else bounds,
        chi_injective=True, group_order=math.factorial(p))
    result.predicted_ramification = sorted(
        {c.moduli_degree for c in result.lifting.moduli_candidates})
    result.notes.append(
        "Galois-orbit decompositions come from external number-field "
        "tables; only the ramification exponents are predicted here")
    return result
