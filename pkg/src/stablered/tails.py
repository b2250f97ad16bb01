"""Tail covers z^m = x, y^p - y = z^a (b0 x + b1 + b2/x + ...).

The right-hand side is a truncated series in descending z-degrees
h, h-m, h-2m, ... with h = a + m.  Normalization brings any special tail
to the model y^p - y = z^h through a homothety (fixes b0 = 1), for new
tails an affine shift of x (kills b1), and a change y -> y + g solving a
triangular system (kills the remaining visible coefficients).  The chain
of substitutions is returned so the equivalence can be replayed on the
original equation term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (HasseArfViolation, InsufficientPrecision,
                     InternalInconsistency, NotCoprime, PreconditionViolated)
from .fields import FiniteField

DEFAULT_PRECISION_SLACK = 2


class TailCover:
    """One wildly ramified tail with its local equation data.

    Coefficients live in F_{p^s}; construction from plain integers keeps
    them in the prime field, which is where all tails of interest start.
    The distinguished point is z = infinity and the tame subgroup acts
    with order m there.
    """

    def __init__(self, p: int, m: int, a: int, coefficients, field=None,
                 precision: Optional[int] = None):
        h = a + m
        if math.gcd(m, p) != 1:
            raise NotCoprime(f"gcd(m, p) = gcd({m}, {p}) != 1")
        if h < 1:
            raise PreconditionViolated(f"conductor h = m + a = {h} < 1")
        if math.gcd(h, p) != 1:
            raise NotCoprime(f"conductor h = {h} is divisible by p = {p}")
        if ((p - 1) * h) % m != 0:
            raise HasseArfViolation(f"m = {m} does not divide (p-1)h = {(p-1)*h}")
        self.p = p
        self.m = m
        self.a = a
        self.field = field if field is not None else FiniteField(p, 1)
        if precision is None:
            precision = max(len(coefficients), 2 * h + DEFAULT_PRECISION_SLACK)
        coeffs = [self.field.element(c) for c in coefficients]
        coeffs += [self.field.zero] * (precision - len(coeffs))
        coeffs = coeffs[:precision]
        if not coeffs or coeffs[0].is_zero():
            raise PreconditionViolated("leading coefficient b0 must be nonzero")
        self.coefficients = tuple(coeffs)
        self.precision = precision

    @property
    def h(self) -> int:
        return self.a + self.m

    @property
    def sigma(self) -> Fraction:
        return Fraction(self.h, self.m)

    def is_new_range(self) -> bool:
        return self.a > 0

    def is_canonical(self) -> bool:
        return (self.coefficients[0] == self.field.one and
                all(c.is_zero() for c in self.coefficients[1:]))

    def __repr__(self):
        return (f"TailCover(p={self.p}, m={self.m}, h={self.h}, "
                f"b={[c for c in self.coefficients[:4]]}...)")


def build_tail(p: int, m: int, h: int, precision: Optional[int] = None
               ) -> TailCover:
    """The canonical tail y^p - y = z^h with tame order m."""
    coeffs = [1]
    tail = TailCover(p, m, h - m, coeffs, precision=precision)
    return tail


# ---------------------------------------------------------------------------
# truncated series helpers; a series is a list [c0, c1, ...] standing for
# sum c_i u^i with u = 1/x, truncated after `K` terms


def _series_mul(aa, bb, K, field):
    out = [field.zero] * K
    for i, x in enumerate(aa[:K]):
        if x.is_zero():
            continue
        for j, y in enumerate(bb[:K - i]):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _series_inverse(aa, K, field):
    if aa[0].is_zero():
        raise InternalInconsistency("series with zero constant term")
    inv0 = aa[0].inverse()
    out = [field.zero] * K
    out[0] = inv0
    for n in range(1, K):
        acc = field.zero
        for i in range(1, min(n, len(aa) - 1) + 1):
            acc = acc + aa[i] * out[n - i]
        out[n] = -inv0 * acc
    return out

def _series_mth_root(aa, mth, K, field):
    """S with S^mth = aa, S(0) = 1; needs aa(0) = 1 and gcd(mth, p) = 1."""
    if aa[0] != field.one:
        raise InternalInconsistency("m-th root needs constant term 1")
    minv = field.element(mth).inverse()
    out = [field.zero] * K
    out[0] = field.one
    for n in range(1, K):
        # coefficient of u^n in out^mth using the known prefix
        power = [field.one] + [field.zero] * (K - 1)
        for _ in range(mth):
            power = _series_mul(power, out, K, field)
        target = aa[n] if n < len(aa) else field.zero
        diff = target - power[n]
        out[n] = diff * minv
    return out


def _series_pow(aa, n, K, field):
    if n < 0:
        return _series_pow(_series_inverse(aa, K, field), -n, K, field)
    out = [field.one] + [field.zero] * (K - 1)
    base = list(aa) + [field.zero] * (K - len(aa))
    while n:
        if n & 1:
            out = _series_mul(out, base, K, field)
        base = _series_mul(base, base, K, field)
        n >>= 1
    return out


def _series_compose(pp, gg, K, field):
    """pp(gg(u)) truncated; gg must have zero constant term."""
    if not gg[0].is_zero():
        raise InternalInconsistency("composition needs g(0) = 0")
    out = [field.zero] * K
    power = [field.one] + [field.zero] * (K - 1)
    for i, c in enumerate(pp[:K]):
        if not c.is_zero():
            for j in range(K):
                out[j] = out[j] + c * power[j]
        power = _series_mul(power, gg, K, field)
    return out


# ---------------------------------------------------------------------------
# the substitution chain and its forward application


@dataclass(frozen=True)
class Substitution:
    kind: str          # "scale" | "shift" | "yshift"
    data: object       # gamma | d | tuple of (k, e_k)


def _match_fields(tail: TailCover, sub: Substitution):
    """Lift the tail into the substitution's field when they differ."""
    from .fields import FieldElement
    elts = ([sub.data] if sub.kind in ("scale", "shift")
            else [e for _, e in sub.data])
    target = tail.field
    for e in elts:
        if isinstance(e, FieldElement) and e.field.s > target.s:
            target = e.field
    if target is tail.field:
        return tail
    lifted = [c.lift() for c in tail.coefficients]
    return TailCover(tail.p, tail.m, tail.a, lifted, field=target,
                     precision=tail.precision)


def apply_substitution(tail: TailCover, sub: Substitution) -> TailCover:
    """Forward application of one substitution to the tail equation."""
    tail = _match_fields(tail, sub)
    field = tail.field
    K = tail.precision
    b = list(tail.coefficients)
    if sub.kind == "scale":
        gamma = field.element(sub.data)
        if gamma.is_zero():
            raise PreconditionViolated("homothety by zero")
        new = [b[i] * gamma ** (tail.h - i * tail.m) for i in range(K)]
        return TailCover(tail.p, tail.m, tail.a, new, field=field, precision=K)
    if sub.kind == "shift":
        d = field.element(sub.data)
        one_plus = [field.one, d] + [field.zero] * (K - 2)
        s_root = _series_mth_root(one_plus, tail.m, K, field)
        s_a = _series_pow(s_root, tail.a, K, field)
        g_inner = _series_mul([field.zero, field.one] + [field.zero] * (K - 2),
                              _series_inverse(one_plus, K, field), K, field)
        composed = _series_compose(b, g_inner, K, field)
        out = _series_mul(_series_mul(s_a, one_plus, K, field), composed,
                          K, field)
        return TailCover(tail.p, tail.m, tail.a, out, field=field, precision=K)
    if sub.kind == "yshift":
        # subtract g^p - g where g = sum e_k z^(a - k m)
        degree_index = {tail.h - i * tail.m: i for i in range(K)}
        vals = {tail.h - i * tail.m: b[i] for i in range(K)}
        for k, e in sub.data:
            e = field.element(e)
            d_g = tail.a - k * tail.m
            if d_g in vals:
                vals[d_g] = vals[d_g] + e            # the -(-g) term
            elif d_g > tail.h - K * tail.m:
                raise InternalInconsistency("yshift off the degree grid")
            d_gp = tail.p * d_g
            if d_gp in vals:
                vals[d_gp] = vals[d_gp] - e ** tail.p   # the -(g^p) term
            elif d_gp > min(degree_index):
                raise InternalInconsistency("p-power term off the degree grid")
        new = [vals[tail.h - i * tail.m] for i in range(K)]
        return TailCover(tail.p, tail.m, tail.a, new, field=field, precision=K)
    raise InternalInconsistency(f"unknown substitution kind {sub.kind!r}")


def apply_chain(tail: TailCover, chain) -> TailCover:
    for sub in chain:
        tail = apply_substitution(tail, sub)
    return tail


# ---------------------------------------------------------------------------
# normalization


_FIELD_SIZE_CAP = 100_000_000


def _solve_root(field: FiniteField, value, n: int):
    """gamma with gamma^n = value, extending the field when necessary.

    Solvability in F_{p^(s k)} is decided by integer arithmetic first
    (value^((q-1)/gcd(n, q-1)) = 1, i.e. ord(value) | (q-1)/gcd(n, q-1)),
    so only the one field that works is ever constructed.  Extension
    requires a prime-field value; fields beyond desk scale are refused.
    """
    p = field.p
    order = value.multiplicative_order()
    for k in range(1, n * (p - 1) + 1):
        s_try = field.s * k
        q1 = p ** s_try - 1
        d = math.gcd(n, q1)
        if (q1 // d) % order != 0:
            continue
        if k == 1:
            big, val = field, value
        else:
            if p ** s_try > _FIELD_SIZE_CAP:
                raise InternalInconsistency(
                    f"{n}-th root of {value!r} needs F_{p}^{s_try}, beyond "
                    "desk scale")
            if not value.in_prime_field():
                raise InternalInconsistency(
                    "root search beyond the base field needs prime-field data")
            big = FiniteField(p, s_try)
            val = big.element(value.lift())
        t = big.discrete_log(val)
        step = q1 // d
        kk = (t // d) * pow(n // d, -1, step) % step if step > 1 else 0
        return big.generator() ** kk, big
    raise InternalInconsistency(f"no {n}-th root of {value!r} found")


def normalize_tail(tail: TailCover):
    """Bring a special tail to the form y^p - y = z^h.

    Returns (canonical_tail, chain).  New-range tails use the full affine
    change; tails with sigma < 1 only scale x, the shift being forbidden
    because it would move the extra tame branch point.  Raises
    InsufficientPrecision when fewer than two coefficients are stored and
    there is something left to normalize.
    """
    if tail.a == 0:
        raise PreconditionViolated("sigma = 1 tails are not special")
    if tail.is_canonical():
        return tail, ()
    if tail.precision < 2:
        raise InsufficientPrecision(
            "need at least two stored coefficients to normalize")

    chain = []
    current = tail

    # 1. homothety: gamma^h = b0^(-1)
    b0 = current.coefficients[0]
    if b0 != current.field.one:
        gamma, big = _solve_root(current.field, b0.inverse(), current.h)
        if big is not current.field:
            lifted = [c.lift() for c in current.coefficients]
            current = TailCover(current.p, current.m, current.a, lifted,
                                field=big, precision=current.precision)
        step = Substitution("scale", gamma)
        chain.append(step)
        current = apply_substitution(current, step)
        if current.coefficients[0] != current.field.one:
            raise InternalInconsistency("homothety failed to set b0 = 1")

    # 2. affine shift (new tails only): kills b1 linearly with slope h/m
    if current.is_new_range():
        b1 = current.coefficients[1]
        if not b1.is_zero():
            field = current.field
            slope = field.element(current.h) / field.element(current.m)
            d = -b1 / slope
            step = Substitution("shift", d)
            chain.append(step)
            current = apply_substitution(current, step)
            if not current.coefficients[1].is_zero():
                raise InternalInconsistency("shift failed to kill b1")

    # 3. y -> y + g, solved triangularly from the top visible degree
    k0 = 1 if current.is_new_range() else 0
    field = current.field
    b = list(current.coefficients)
    solved = []
    vals = {current.h - i * current.m: b[i] for i in range(current.precision)}
    bottom = current.h - (current.precision - 1) * current.m
    k = k0
    while True:
        d_g = current.a - k * current.m
        if d_g < bottom:
            break
        v = vals.get(d_g, field.zero)
        if not v.is_zero():
            e = -v
            solved.append((k, e))
            vals[d_g] = field.zero
            d_gp = current.p * d_g
            if d_gp >= bottom:
                if d_gp not in vals:
                    raise InternalInconsistency("p-power feedback off the grid")
                vals[d_gp] = vals[d_gp] - e ** current.p
        k += 1
    if solved:
        step = Substitution("yshift", tuple(solved))
        chain.append(step)
        current = apply_substitution(current, step)

    if not current.is_canonical():
        raise InternalInconsistency(
            f"normalization left residue {current.coefficients}")
    return current, tuple(chain)


# ---------------------------------------------------------------------------
# metrics, classification, germ reduction


@dataclass(frozen=True)
class TailMetrics:
    sigma: Fraction
    genus: int
    aut0_order: int
    inner_aut_order: int


def tail_metrics(tail: TailCover) -> TailMetrics:
    """Invariants of the canonical tail.

    The curve y^p - y = z^h over the z-line has genus (p-1)(h-1)/2; the
    pointed automorphisms form a cyclic group of order (p-1)h whose
    inner part has order h.
    """
    if not tail.is_canonical():
        raise PreconditionViolated("metrics are defined on the canonical form")
    p, h = tail.p, tail.h
    genus = (p - 1) * (h - 1) // 2
    return TailMetrics(sigma=tail.sigma, genus=genus,
                       aut0_order=(p - 1) * h, inner_aut_order=h)


@dataclass(frozen=True)
class TailClass:
    kind: str                    # "Primitive" | "New" | "NotSpecial"
    reason: str = ""
    etale_genus_doubled: int = 0  # 2g - 2 of the would-be everywhere-etale cover


def classify_tail(tail: TailCover) -> TailClass:
    """Primitive for sigma < 1, New for 1 < sigma < 2, else NotSpecial.

    The dichotomy is checked against the count the Riemann-Hurwitz
    formula forces: without an extra tame branch point the doubled genus
    would be (p-1)h - pm - 1, which is negative exactly when sigma < 1.
    """
    if not tail.is_canonical():
        raise PreconditionViolated("classify the canonical form")
    p, m, h = tail.p, tail.m, tail.h
    sigma = tail.sigma
    if sigma == 1:
        return TailClass("NotSpecial", reason="sigma = 1")
    if sigma >= 2:
        return TailClass("NotSpecial", reason=f"sigma = {sigma} >= 2")
    etale_2g2 = (p - 1) * h - p * m - 1
    if sigma < 1:
        if etale_2g2 >= -2:
            raise InternalInconsistency(
                "sigma < 1 but an everywhere-etale cover would exist")
        return TailClass("Primitive", etale_genus_doubled=etale_2g2)
    reason = ""
    if etale_2g2 < -2 or etale_2g2 % 2 != 0:
        # the order-pm inertia model is not etale-realizable on its own;
        # the tail then needs a strictly larger Galois group
        reason = "etale model requires a larger Galois group"
    return TailClass("New", reason=reason, etale_genus_doubled=etale_2g2)


@dataclass(frozen=True)
class GermVerdict:
    outcome: str                         # "GoodReduction" | "BadReduction"
    threshold: Fraction
    valuation_ratio: Fraction
    conductor: Optional[int] = None      # good case
    reduced_rhs: Optional[tuple] = None  # (("wbar", a), (1, h)) exponent data
    differential: Optional[dict] = None  # bad case zero counts


def germ_reduction(p: int, m: int, h: int, valuation_ratio) -> GermVerdict:
    """Good/bad reduction of the boundary germ at a new tail.

    The cut is at p*m / ((p-1)*h), inclusive on the good side.  On good
    reduction the germ degenerates to the conductor-h equation
    y'^p - y' = wbar z'^a + z'^h; otherwise the obstruction is the exact
    form d(wbar z'^a + z'^h), with a zero of order a-1 at the origin and
    m simple zeros elsewhere.
    """
    a = h - m
    if not (0 < a < m):
        raise PreconditionViolated(f"h = m + a needs 0 < a < m; got a = {a}")
    if (a * (p - 1)) % m != 0:
        raise PreconditionViolated(f"m = {m} must divide a(p-1) = {a*(p-1)}")
    if math.gcd(h, p) != 1 or math.gcd(m, p) != 1 or math.gcd(a, p) != 1:
        raise PreconditionViolated("m, h and a must be prime to p")
    ratio = Fraction(valuation_ratio)
    threshold = Fraction(p * m, (p - 1) * h)
    if ratio >= threshold:
        return GermVerdict(outcome="GoodReduction", threshold=threshold,
                           valuation_ratio=ratio, conductor=h,
                           reduced_rhs=(("wbar", a), (1, h)))
    return GermVerdict(outcome="BadReduction", threshold=threshold,
                       valuation_ratio=ratio,
                       differential={
                           "form": "d(wbar z^a + z^h)",
                           "zero_order_at_origin": a - 1,
                           "simple_zero_count": m,
                       })
