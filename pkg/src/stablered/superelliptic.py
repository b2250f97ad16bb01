"""Cyclic covers z^m = f(x) of the projective line, gcd(m, p) = 1.

The curve carries precomputed place data over every marked x-point (roots
of f, infinity, and any extra points the caller supplies).  Differentials
are stored in the canonical form sum_j r_j(x) z^j dx with 0 <= j < m, and
the Cartier operator is lifted from the rational subfield one eigen
component at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (EmptyRHS, InternalInconsistency, NotCoprime,
                     ZeroDifferential)
from .fields import (FieldElement, FiniteField, Polynomial, RationalFunction,
                     RationalDifferential, cartier_rational)

INFINITY = "inf"


@dataclass(frozen=True)
class PlaceProfile:
    """Places of the curve over one x-point of the line.

    After the automatic base-field extension every place over a marked
    point is rational, so residual_degree is 1 and place_count equals
    gcd(m, d) where d is the order of f at the point.
    """
    x0: object                 # FieldElement or INFINITY
    f_order: int               # order of f at x0 (negative degree at infinity)
    ramification_index: int    # e
    place_count: int
    residual_degree: int
    z_order: int               # order of z at each place
    residues: tuple            # the g0 values of z^e at the places

    def check(self, m):
        if self.ramification_index * self.place_count * self.residual_degree != m:
            raise InternalInconsistency("place profile does not partition m")


class SuperellipticCurve:
    """z^m = leading * prod (x - root_i)^(e_i) over F_{p^s}.

    The extension degree is raised automatically until the field contains
    a primitive m-th root of unity and every marked point's places are
    rational, which emulates an algebraically closed base at desk scale.
    Roots and the leading coefficient must be prime-field values.
    """

    def __init__(self, p, s, m, root_exponent_pairs, leading_coeff=1,
                 extra_marked=()):
        if m < 1:
            raise NotCoprime("cover degree m must be positive")
        if math.gcd(m, p) != 1:
            raise NotCoprime(f"gcd(m, p) = gcd({m}, {p}) != 1")
        pairs = []
        seen = {}
        for root, exp in root_exponent_pairs:
            if exp < 0:
                raise EmptyRHS("negative exponent in the right-hand side")
            r = int(root) % p
            if r in seen:
                seen[r] += exp
            else:
                seen[r] = exp
                pairs.append(r)
        pairs = [(r, seen[r]) for r in pairs if seen[r] > 0]
        lead = int(leading_coeff) % p
        if lead == 0 or not pairs:
            raise EmptyRHS("right-hand side must be nonzero and nonconstant")

        self.p = p
        self.m = m
        self.root_exponents = tuple(pairs)
        self.leading = lead
        self.rhs_degree = sum(e for _, e in pairs)
        extra = tuple(int(x0) % p for x0 in extra_marked if x0 != INFINITY)
        self.s = self._required_extension(max(1, s), extra)
        self.base = FiniteField(p, self.s)
        self.f = Polynomial.from_roots(
            self.base, [self.base.element(r) for r, e in pairs for _ in range(e)],
            leading=lead)
        self.marked_x_points = self._marked(extra)
        self.places = {}     # filled lazily by place()

    # -- construction helpers ------------------------------------------------

    def _f_value_mod_p(self, x0: int, skip_root=None) -> int:
        """Value at x0 of f with the (x - skip_root) factors removed."""
        v = self.leading
        for r, e in self.root_exponents:
            if r != skip_root:
                v = v * pow((x0 - r) % self.p, e, self.p) % self.p
        return v

    def _point_data(self, x0) -> tuple:
        """(d, u0 mod p) for a prime-field point: order of f and leading unit."""
        if x0 == INFINITY:
            return -self.rhs_degree, self.leading
        exps = dict(self.root_exponents)
        if x0 in exps:
            return exps[x0], self._f_value_mod_p(x0, skip_root=x0)
        return 0, self._f_value_mod_p(x0)

    def _required_extension(self, s: int, extra) -> int:
        p, m = self.p, self.m
        demands = [m]   # primitive m-th root of unity
        points = [r for r, _ in self.root_exponents] + [INFINITY] + list(extra)
        for x0 in points:
            d, u0 = self._point_data(x0)
            g0 = math.gcd(m, abs(d)) if d != 0 else m
            # Z^g0 - u0 splits over F_{p^s} iff g0 * ord(u0) divides p^s - 1
            ord_u = 1
            acc = u0
            while acc != 1:
                acc = acc * u0 % p
                ord_u += 1
            demands.append(g0 * ord_u)
        while s <= 120:
            q1 = p ** s - 1
            if all(q1 % dem == 0 for dem in demands):
                return s
            s += 1
        raise InternalInconsistency("required field extension is too large")

    def _marked(self, extra):
        pts = [self.base.element(r) for r, _ in self.root_exponents]
        pts.append(INFINITY)
        for x0 in extra:
            e = self.base.element(x0)
            if all(not (isinstance(q, FieldElement) and q == e) for q in pts):
                pts.append(e)
        return tuple(pts)

    def _place_profile(self, x0) -> PlaceProfile:
        m = self.m
        key = INFINITY if x0 == INFINITY else x0.lift()
        d, u0 = self._point_data(key)
        u0 = self.base.element(u0)
        g0 = math.gcd(m, abs(d)) if d != 0 else m
        e = m // g0
        # residues: roots of Z^g0 = u0, rational by the extension choice
        t = self.base.discrete_log(u0)
        q1 = self.base.order - 1
        if t % g0 != 0 or q1 % g0 != 0:
            raise InternalInconsistency(
                f"place residues over {x0!r} are not rational; mark the point "
                "at construction time")
        eta0 = self.base.generator() ** (t // g0)
        zeta = self.base.generator() ** (q1 // g0) if g0 > 1 else self.base.one
        residues = []
        acc = eta0
        for _ in range(g0):
            residues.append(acc)
            acc = acc * zeta
        prof = PlaceProfile(x0=x0, f_order=d, ramification_index=e,
                            place_count=g0, residual_degree=1,
                            z_order=d // g0, residues=tuple(residues))
        prof.check(m)
        return prof

    # -- public operations ----------------------------------------------------

    def place(self, x0) -> PlaceProfile:
        if x0 != INFINITY:
            x0 = self.base.element(x0)
            if not x0.in_prime_field():
                raise InternalInconsistency(
                    "marked points must be prime-field rational")
        if x0 in self.places:
            return self.places[x0]
        prof = self._place_profile(x0)
        self.places[x0] = prof
        if x0 != INFINITY and not any(
                q == x0 for q in self.marked_x_points if q != INFINITY):
            self.marked_x_points = self.marked_x_points + (x0,)
        return prof

    def genus(self) -> int:
        total = -2 * self.m
        for x0 in [r for r, _ in self.root_exponents] + [INFINITY]:
            prof = self.place(x0)
            total += (prof.ramification_index - 1) * prof.place_count
        if total % 2 != 0 or total < -2:
            raise InternalInconsistency(
                f"Riemann-Hurwitz sum 2g-2 = {total} is not attainable")
        return (total + 2) // 2

    def rhs(self) -> RationalFunction:
        return RationalFunction(self.f)

    def __repr__(self):
        rhs = " * ".join(f"(x - {r})^{e}" for r, e in self.root_exponents)
        return f"z^{self.m} = {self.leading} * {rhs} over {self.base!r}"


def build_curve(p, s, m, root_exponent_pairs, leading_coeff=1,
                extra_marked=()) -> SuperellipticCurve:
    return SuperellipticCurve(p, s, m, root_exponent_pairs, leading_coeff,
                              extra_marked)


# ---------------------------------------------------------------------------
# differentials on the curve


class CurveDifferential:
    """sum_j r_j(x) z^j dx with 0 <= j < m; zero components dropped."""

    __slots__ = ("curve", "components")

    def __init__(self, curve: SuperellipticCurve, components: dict):
        comps = {}
        for j, r in components.items():
            if r.is_zero():
                continue
            if not 0 <= j < curve.m:
                raise InternalInconsistency(
                    "z-exponents must already be reduced mod m")
            comps[j] = r
        self.curve = curve
        self.components = comps

    @classmethod
    def from_z_monomial(cls, curve, j, r: RationalFunction):
        """r * z^j dx with arbitrary integer j, reduced via z^m = f."""
        t = j // curve.m
        jr = j - t * curve.m
        return cls(curve, {jr: r * (curve.rhs() ** t)})

    def is_zero(self):
        return not self.components

    def __add__(self, other):
        if other.curve is not self.curve:
            raise InternalInconsistency("differentials on different curves")
        comps = dict(self.components)
        for j, r in other.components.items():
            comps[j] = comps[j] + r if j in comps else r
        return CurveDifferential(self.curve, comps)

    def scale(self, c):
        c = self.curve.base.element(c)
        return CurveDifferential(self.curve,
                                 {j: r * c for j, r in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, CurveDifferential):
            return NotImplemented
        return self.curve is other.curve and self.components == other.components

    def __hash__(self):
        return hash((id(self.curve), tuple(sorted(self.components.items(),
                                                  key=lambda kv: kv[0]))))

    def __repr__(self):
        if self.is_zero():
            return "0 dz"
        return " + ".join(f"({r!r}) z^{j} dx"
                          for j, r in sorted(self.components.items()))


def differential_order(omega: CurveDifferential, place: PlaceProfile) -> int:
    """Exact order of vanishing of omega at (any place of) the profile.

    Single-term orders combine e * ord(r_j), j * ord(z) and ord(dx), which
    is e - 1 at finite points and -e - 1 at infinity.  When two distinct
    z-components share the minimal order the leading terms could cancel;
    the artifact only ever needs eigencomponent differentials, so that
    case is rejected instead of resolved.
    """
    if omega.is_zero():
        raise ZeroDifferential("order of the zero differential")
    e = place.ramification_index
    orders = {}
    for j, r in omega.components.items():
        if place.x0 == INFINITY:
            ord_r = e * r.order_at_infinity()
            ord_dx = -e - 1
        else:
            ord_r = e * r.order_at(place.x0)
            ord_dx = e - 1
        orders[j] = ord_r + j * place.z_order + ord_dx
    best = min(orders.values())
    if sum(1 for v in orders.values() if v == best) > 1:
        raise InternalInconsistency(
            "order tie between distinct z-components; supply a single "
            "eigencomponent differential")
    return best


def cartier(omega: CurveDifferential, curve: SuperellipticCurve = None
            ) -> CurveDifferential:
    """Cartier operator on the curve, one z-eigencomponent at a time.

    For the component r z^j dx pick the unique s in {0..p-1} with
    j + s*m = 0 (mod p); then z^(j+s*m) is the p-th power of z^K with
    K = (j+s*m)/p < m, and semilinearity gives
        C(r z^j dx) = z^K * C_rational(r * f^(-s) dx).
    """
    curve = curve or omega.curve
    p, m = curve.p, curve.m
    f = curve.rhs()
    out = {}
    for j, r in omega.components.items():
        s = (-j * pow(m, -1, p)) % p
        K = (j + s * m) // p
        inner = RationalDifferential(r * (f ** (-s)) if s else r)
        res = cartier_rational(inner)
        if res.is_zero():
            continue
        term = CurveDifferential.from_z_monomial(curve, K, res.coefficient)
        for jj, rr in term.components.items():
            out[jj] = out[jj] + rr if jj in out else rr
    return CurveDifferential(curve, out)


class Classification(Enum):
    LOGARITHMIC = "Logarithmic"
    EXACT = "Exact"
    NEITHER = "Neither"


def classify_differential(omega: CurveDifferential,
                          curve: SuperellipticCurve = None) -> Classification:
    """Logarithmic iff Cartier-fixed, Exact iff Cartier kills it."""
    curve = curve or omega.curve
    image = cartier(omega, curve)
    if image.is_zero():
        return Classification.EXACT
    if image == omega:
        return Classification.LOGARITHMIC
    return Classification.NEITHER


NOT_EIGEN = None


def eigencharacter(omega: CurveDifferential, curve: SuperellipticCurve = None):
    """Eigenvalue of the canonical generator z -> zeta_m * z on omega.

    Returns the value as an integer in F_p^x when the eigenvalue lies in
    the prime field, and NOT_EIGEN (None) otherwise.  A differential is an
    eigenvector exactly when it has a single z-component.
    """
    curve = curve or omega.curve
    if omega.is_zero():
        return NOT_EIGEN
    js = sorted(omega.components)
    if len(js) != 1:
        return NOT_EIGEN
    zeta = curve.base.root_of_unity(curve.m)
    value = zeta ** js[0]
    if not value.in_prime_field():
        return NOT_EIGEN
    return value.lift()
