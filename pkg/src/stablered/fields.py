"""Exact arithmetic over F_{p^s} and the Cartier operator on P^1.

Everything here is immutable and pure.  Field elements are coefficient
tuples modulo a deterministic irreducible polynomial, polynomials are
dense coefficient lists, rational functions are kept in canonical reduced
form (monic denominator, gcd one).  No floating point anywhere.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DivisionByZero, InternalInconsistency, NoRootOfUnity


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# raw polynomial arithmetic over Z/p (used for the modulus search and for the
# internal representation of extension-field elements)


def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % p
    return _ptrim(r)


def _pmod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        a = _ptrim(a)
        if len(a) - 1 < dm:
            break
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a = _ptrim(a)
    return a


def _ppowmod(a, n, m, p):
    r = [1]
    a = _pmod(a, m, p)
    while n:
        if n & 1:
            r = _pmod(_pmul(r, a, p), m, p)
        a = _pmod(_pmul(a, a, p), m, p)
        n >>= 1
    return r


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f, p):
    # Rabin's test: x^(p^s) = x mod f, and x^(p^(s/q)) - x coprime to f
    # for every prime q dividing s.
    s = len(f) - 1
    x = [0, 1]
    if _ppowmod(x, p ** s, f, p) != _pmod(x, f, p):
        return False
    for q in _prime_factors(s):
        g = _ppowmod(x, p ** (s // q), f, p)
        g = _ptrim([(gi - xi) % p for gi, xi in
                    zip(g + [0] * 2, x + [0] * max(0, len(g) - 2))])
        if len(_pgcd(f, g, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def _modulus(p: int, s: int) -> tuple:
    """Monic irreducible of degree s over F_p with the smallest integer
    encoding sum(c_i p^i); deterministic across runs."""
    if s == 1:
        return (0, 1)
    for code in range(p ** s):
        coeffs = []
        c = code
        for _ in range(s):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise InternalInconsistency(f"no irreducible of degree {s} over F_{p}")


class FiniteField:
    """The field F_{p^s}, p an odd prime, with a deterministic modulus."""

    _cache: dict = {}

    def __new__(cls, p: int, s: int = 1):
        key = (p, s)
        if key in cls._cache:
            return cls._cache[key]
        if not is_prime(p) or p == 2:
            raise InternalInconsistency(f"p = {p} is not an odd prime")
        if s < 1:
            raise InternalInconsistency(f"extension degree {s} < 1")
        self = super().__new__(cls)
        self.p = p
        self.s = s
        self.order = p ** s
        self.modulus = _modulus(p, s)
        self._gen = None
        self._log_table = None
        cls._cache[key] = self
        return self

    def __repr__(self):
        return f"F_{self.p}^{self.s}" if self.s > 1 else f"F_{self.p}"

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if value.field.p == self.p and value.field.s == 1:
                return FieldElement(self, (value.coeffs[0],) + (0,) * (self.s - 1))
            raise InternalInconsistency("no embedding between these fields")
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.s - 1))
        coeffs = tuple(int(v) % self.p for v in value)
        if len(coeffs) > self.s:
            raise InternalInconsistency("coefficient sequence too long")
        return FieldElement(self, coeffs + (0,) * (self.s - len(coeffs)))

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    def elements(self):
        """All field elements in integer-encoding order."""
        for code in range(self.order):
            coeffs = []
            c = code
            for _ in range(self.s):
                coeffs.append(c % self.p)
                c //= self.p
            yield FieldElement(self, tuple(coeffs))

    def generator(self) -> "FieldElement":
        """Smallest element (by encoding) generating the unit group."""
        if self._gen is not None:
            return self._gen
        n = self.order - 1
        primes = _prime_factors(n)
        for a in self.elements():
            if a.is_zero():
                continue
            if all((a ** (n // q)) != self.one for q in primes):
                self._gen = a
                return a
        raise InternalInconsistency("no generator found")

    def root_of_unity(self, n: int) -> "FieldElement":
        """Canonical primitive n-th root of unity, generator^((q-1)/n)."""
        if (self.order - 1) % n != 0:
            raise NoRootOfUnity(f"no primitive {n}-th root of unity in {self}")
        return self.generator() ** ((self.order - 1) // n)

    def pth_root(self, a: "FieldElement") -> "FieldElement":
        """Inverse of Frobenius: the unique b with b^p = a."""
        return a ** (self.p ** (self.s - 1))

    _LOG_TABLE_CAP = 1 << 18

    def discrete_log(self, a: "FieldElement") -> int:
        """k with generator^k = a.

        Small fields use a cached lookup table; larger ones fall back to
        Pohlig-Hellman with baby-step giant-step per prime factor.
        """
        if a.is_zero():
            raise DivisionByZero("discrete log of zero")
        if self.order <= self._LOG_TABLE_CAP:
            if self._log_table is None:
                table = {}
                g = self.generator()
                x = self.one
                for k in range(self.order - 1):
                    table[x.coeffs] = k
                    x = x * g
                self._log_table = table
            try:
                return self._log_table[a.coeffs]
            except KeyError:
                raise InternalInconsistency(
                    "discrete log lookup failed") from None
        return self._pohlig_hellman(a)

    def _bsgs(self, base: "FieldElement", target: "FieldElement",
              order: int) -> int:
        m = math.isqrt(order) + 1
        table = {}
        cur = self.one
        for j in range(m):
            table.setdefault(cur.coeffs, j)
            cur = cur * base
        jump = base.inverse() ** m
        gamma = target
        for i in range(m):
            if gamma.coeffs in table:
                return (i * m + table[gamma.coeffs]) % order
            gamma = gamma * jump
        raise InternalInconsistency("baby-step giant-step failed")

    def _pohlig_hellman(self, a: "FieldElement") -> int:
        q1 = self.order - 1
        g = self.generator()
        residues, moduli = [], []
        for prime in _prime_factors(q1):
            pe = prime
            while q1 % (pe * prime) == 0:
                pe *= prime
            e = 0
            t = pe
            while t > 1:
                t //= prime
                e += 1
            g_sub = g ** (q1 // pe)
            a_sub = a ** (q1 // pe)
            g_prime = g ** (q1 // prime)     # fixed element of order `prime`
            x = 0
            for k in range(e):
                shifted = (a_sub * g_sub.inverse() ** x) ** (pe // prime ** (k + 1))
                digit = self._bsgs(g_prime, shifted, prime)
                x += digit * prime ** k
            residues.append(x)
            moduli.append(pe)
        # combine by CRT
        result, modulus = 0, 1
        for r, md in zip(residues, moduli):
            inv = pow(modulus % md, -1, md)
            result = result + modulus * ((r - result) * inv % md)
            modulus *= md
        return result % q1


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def in_prime_field(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def lift(self) -> int:
        """Integer representative, valid only for prime-field elements."""
        if not self.in_prime_field():
            raise InternalInconsistency("element not in the prime field")
        return self.coeffs[0]

    def encoding(self) -> int:
        code = 0
        for c in reversed(self.coeffs):
            code = code * self.field.p + c
        return code

    def __add__(self, other):
        other = self.field.element(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in
                                              zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self.field.element(other))

    def __rsub__(self, other):
        return self.field.element(other) - self

    def __mul__(self, other):
        other = self.field.element(other)
        f = self.field
        if f.s == 1:
            return FieldElement(f, ((self.coeffs[0] * other.coeffs[0]) % f.p,))
        prod = _pmul(list(self.coeffs), list(other.coeffs), f.p)
        red = _pmod(prod, list(f.modulus), f.p)
        return FieldElement(f, tuple(red) + (0,) * (f.s - len(red)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        f = self.field
        if f.s == 1:
            return FieldElement(f, (pow(self.coeffs[0], f.p - 2, f.p),))
        return self ** (f.order - 2)

    def __truediv__(self, other):
        return self * self.field.element(other).inverse()

    def __rtruediv__(self, other):
        return self.field.element(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise DivisionByZero("order of zero")
        n = self.field.order - 1
        order = n
        for q in _prime_factors(n):
            while order % q == 0 and (self ** (order // q)) == self.field.one:
                order //= q
        return order

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        if self.field.s == 1:
            return f"{self.coeffs[0]}"
        return f"{list(self.coeffs)}@{self.field!r}"


# ---------------------------------------------------------------------------
# dense univariate polynomials


class Polynomial:
    """Dense univariate polynomial over a FiniteField.  Immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs):
        cs = [field.element(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def from_roots(cls, field, roots, leading=1):
        poly = cls.constant(field, leading)
        for r in roots:
            poly = poly * cls(field, [-field.element(r), field.one])
        return poly

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1          # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> FieldElement:
        if self.is_zero():
            raise DivisionByZero("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def coefficient(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.field,
                          [self.coefficient(i) + other.coefficient(i)
                           for i in range(n)])

    def __neg__(self):
        return Polynomial(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial(self.field, [])
        f = self.field
        if f.s == 1:
            a = [c.coeffs[0] for c in self.coeffs]
            b = [c.coeffs[0] for c in other.coeffs]
            r = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        r[i + j] = (r[i + j] + x * y) % f.p
            return Polynomial(f, r)
        r = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x.is_zero():
                for j, y in enumerate(other.coeffs):
                    r[i + j] = r[i + j] + x * y
        return Polynomial(f, r)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.field, other)

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q = []
        rem = list(self.coeffs)
        inv = other.leading().inverse()
        d = other.degree
        for k in range(len(rem) - 1 - d, -1, -1):
            c = rem[k + d] * inv
            q.append(c)
            if not c.is_zero():
                for i, oc in enumerate(other.coeffs):
                    rem[k + i] = rem[k + i] - c * oc
        q.reverse()
        return Polynomial(self.field, q), Polynomial(self.field, rem[:d])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        if n < 0:
            raise DivisionByZero("negative polynomial power")
        result = Polynomial.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def gcd(self, other):
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a * a.leading().inverse()

    def monic(self):
        if self.is_zero():
            return self
        return self * self.leading().inverse()

    def derivative(self):
        return Polynomial(self.field,
                          [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def shift(self, k: int):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Polynomial(self.field, [self.field.zero] * k + list(self.coeffs))

    def __call__(self, x):
        x = self.field.element(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def order_at(self, x0) -> int:
        """Multiplicity of the root x0 (0 when not a root)."""
        if self.is_zero():
            raise DivisionByZero("order of the zero polynomial")
        x0 = self.field.element(x0)
        lin = Polynomial(self.field, [-x0, self.field.one])
        n, rest = 0, self
        while True:
            q, r = divmod(rest, lin)
            if not r.is_zero():
                return n
            n, rest = n + 1, q

    def rational_roots(self):
        """(root, multiplicity) pairs over the field, by scanning.

        Returns (pairs, nonsplit_remainder_degree).  Scanning is fine at
        desk scale; callers should treat a nonzero remainder degree as a
        signal that support lies outside the rational points they track.
        """
        pairs = []
        rest = self
        for a in self.field.elements():
            if rest.degree <= 0:
                break
            if rest(a).is_zero():
                mult = rest.order_at(a)
                pairs.append((a, mult))
                lin = Polynomial(self.field, [-a, self.field.one]) ** mult
                rest = rest // lin
        return pairs, max(rest.degree, 0)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                terms.append(f"{c!r}")
            elif i == 1:
                terms.append(f"{c!r}*x")
            else:
                terms.append(f"{c!r}*x^{i}")
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# rational functions and differentials on P^1


class RationalFunction:
    """num/den in canonical form: den monic, gcd(num, den) = 1."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = None):
        if den is None:
            den = Polynomial.constant(num.field, 1)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            num = Polynomial(num.field, [])
            den = Polynomial.constant(num.field, 1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading()
            if lead != den.field.one:
                inv = lead.inverse()
                num, den = num * inv, den * inv
        self.field = num.field
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, field, c):
        return cls(Polynomial.constant(field, c))

    @classmethod
    def x(cls, field):
        return cls(Polynomial.x(field))

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (RationalFunction.constant(self.field, 1) / self) ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction.constant(self.field, other)

    def derivative(self):
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den)

    def order_at(self, x0) -> int:
        if self.is_zero():
            raise DivisionByZero("order of the zero function")
        return self.num.order_at(x0) - self.den.order_at(x0)

    def order_at_infinity(self) -> int:
        if self.is_zero():
            raise DivisionByZero("order of the zero function")
        return self.den.degree - self.num.degree

    def leading_at(self, x0) -> FieldElement:
        """Value of (x - x0)^(-ord) * self at x0."""
        x0 = self.field.element(x0)
        lin = Polynomial(self.field, [-x0, self.field.one])
        n = self.num // (lin ** self.num.order_at(x0))
        d = self.den // (lin ** self.den.order_at(x0))
        return n(x0) / d(x0)

    def leading_at_infinity(self) -> FieldElement:
        return self.num.leading() / self.den.leading()

    def __eq__(self, other):
        other = self._coerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


class RationalDifferential:
    """coefficient * dx on the projective line."""

    __slots__ = ("coefficient",)

    def __init__(self, coefficient: RationalFunction):
        self.coefficient = coefficient

    @property
    def field(self):
        return self.coefficient.field

    def is_zero(self):
        return self.coefficient.is_zero()

    def __add__(self, other):
        return RationalDifferential(self.coefficient + other.coefficient)

    def __sub__(self, other):
        return RationalDifferential(self.coefficient - other.coefficient)

    def scale(self, c):
        return RationalDifferential(self.coefficient * c)

    def __eq__(self, other):
        if not isinstance(other, RationalDifferential):
            return NotImplemented
        return self.coefficient == other.coefficient

    def __hash__(self):
        return hash(self.coefficient)

    def __repr__(self):
        return f"({self.coefficient!r}) dx"


def dlog(u: RationalFunction) -> RationalDifferential:
    """du/u as a differential; u must be nonzero."""
    if u.is_zero():
        raise DivisionByZero("dlog of zero")
    return RationalDifferential(u.derivative() / u)


def exact(v: RationalFunction) -> RationalDifferential:
    """dv as a differential."""
    return RationalDifferential(v.derivative())


def cartier_rational(omega: RationalDifferential) -> RationalDifferential:
    """Cartier operator on differentials of F_q(x).

    Write omega = (c(x)/b(x)^p) dx with b the denominator of the
    coefficient and c = num * b^(p-1).  Then
        C(omega) = (sum over i = p-1 (mod p) of c_i^(1/p) x^((i-(p-1))/p)) / b dx.
    The operator kills exact forms and fixes dlog forms.
    """
    field = omega.field
    p = field.p
    if omega.is_zero():
        return omega
    b = omega.coefficient.den
    c = omega.coefficient.num * (b ** (p - 1))
    picked = {}
    for i in range(p - 1, c.degree + 1, p):
        ci = c.coefficient(i)
        if not ci.is_zero():
            picked[(i - (p - 1)) // p] = field.pth_root(ci)
    if not picked:
        return RationalDifferential(RationalFunction.constant(field, 0))
    top = max(picked)
    coeffs = [picked.get(k, field.zero) for k in range(top + 1)]
    return RationalDifferential(RationalFunction(Polynomial(field, coeffs), b))


def rational_function_arithmetic(a: RationalFunction, b, op: str):
    """Dispatch layer used by the service; op in {add, mul, div, pow}."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    raise InternalInconsistency(f"unknown operation {op!r}")
