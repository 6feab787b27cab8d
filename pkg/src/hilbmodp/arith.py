"""Exact arithmetic in a real quadratic field Q(sqrt(d)) with p inert.

Elements are stored as ``(x + y*sqrt(d)) / den`` with integers in lowest terms, so
half-integral coordinates for d = 1 mod 4 cost nothing.  All sign decisions about the
two real embeddings are made with integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt

from .errors import ContractViolation
from .ffield import FFElem, FiniteField, GF


def _sign_of_sum(x: int, y: int, d: int) -> int:
    """Sign of x + y*sqrt(d), computed exactly."""
    if y == 0:
        return (x > 0) - (x < 0)
    if x == 0:
        return (y > 0) - (y < 0)
    if (x > 0) == (y > 0):
        return 1 if x > 0 else -1
    # opposite signs: compare x^2 with d*y^2
    diff = x * x - d * y * y
    if diff == 0:
        return 0  # impossible for squarefree d > 1, kept for totality
    return (1 if x > 0 else -1) if diff > 0 else (1 if y > 0 else -1)


class QuadElem:
    """An element (x + y*sqrt(d))/den of Q(sqrt(d))."""

    __slots__ = ("d", "x", "y", "den", "_hash")

    def __init__(self, d: int, x: int, y: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            x, y, den = -x, -y, -den
        g = gcd(gcd(x, y), den)
        if g > 1:
            x, y, den = x // g, y // g, den // g
        self.d = d
        self.x = x
        self.y = y
        self.den = den
        self._hash = hash((d, x, y, den))

    @classmethod
    def from_ab(cls, d: int, a, b=0) -> QuadElem:
        a, b = Fraction(a), Fraction(b)
        den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        return cls(d, int(a * den), int(b * den), den)

    # -- coordinates ----------------------------------------------------------

    @property
    def a(self) -> Fraction:
        return Fraction(self.x, self.den)

    @property
    def b(self) -> Fraction:
        return Fraction(self.y, self.den)

    def _coerce(self, other) -> QuadElem:
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise ContractViolation("elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem.from_ab(self.d, other)
        return NotImplemented

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.d, self.x * o.den + o.x * self.den, self.y * o.den + o.y * self.den,
                        self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.d, -self.x, -self.y, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.d, self.x * o.x + self.d * self.y * o.y, self.x * o.y + self.y * o.x,
                        self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> QuadElem:
        n_num = self.x * self.x - self.d * self.y * self.y  # norm * den^2
        if n_num == 0:
            raise ZeroDivisionError("inverse of zero")
        # 1/m = den * conj(x + y sqrt d) / n_num
        return QuadElem(self.d, self.x * self.den, -self.y * self.den, n_num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int) -> QuadElem:
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadElem(self.d, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> QuadElem:
        return QuadElem(self.d, self.x, -self.y, self.den)

    def norm(self) -> Fraction:
        return Fraction(self.x * self.x - self.d * self.y * self.y, self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(2 * self.x, self.den)

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        if self.den == 1:
            return True
        if self.den == 2 and self.d % 4 == 1:
            return (self.x - self.y) % 2 == 0
        return False

    def is_rational(self) -> bool:
        return self.y == 0

    def is_totally_positive(self) -> bool:
        return _sign_of_sum(self.x, self.y, self.d) > 0 and _sign_of_sum(self.x, -self.y, self.d) > 0

    def embedding_sign(self, i: int) -> int:
        """Sign of the real embedding i (0 sends sqrt(d) to the positive root)."""
        return _sign_of_sum(self.x, self.y if i == 0 else -self.y, self.d)

    def divides(self, other: QuadElem) -> bool:
        """True when other / self lies in O_F."""
        if self.is_zero():
            return other.is_zero()
        return (self._coerce(other) / self).is_integral()

    def sort_key(self) -> tuple:
        return (self.norm(), self.trace(), self.b)

    # -- comparison and display ---------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadElem):
            return (self.d, self.x, self.y, self.den) == (other.d, other.x, other.y, other.den)
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and Fraction(self.x, self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        a, b = self.a, self.b
        sign = "-" if b < 0 else "+"
        return f"{a}{sign}{abs(b)}*sqrt({self.d})"

    def __repr__(self) -> str:
        return f"QuadElem({self})"


_ELEM_RE = re.compile(
    r"^\s*([+-]?\d+(?:/\d+)?)\s*(?:([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(\d+)\s*\))?\s*$"
)


def parse_quad(text: str, d: int) -> QuadElem:
    """Parse ``"a+b*sqrt(d)"`` (or a bare rational) into a QuadElem."""
    m = _ELEM_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse quadratic element {text!r}")
    a = Fraction(m.group(1))
    b = Fraction(0)
    if m.group(2):
        if int(m.group(4)) != d:
            raise ValueError(f"element {text!r} does not live in Q(sqrt({d}))")
        b = Fraction(m.group(3))
        if m.group(2) == "-":
            b = -b
    return QuadElem.from_ab(d, a, b)


# ---------------------------------------------------------------------------
# units, class numbers, splitting


def _is_squarefree(n: int) -> bool:
    q = 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        q += 1
    return True


def _legendre(a: int, q: int) -> int:
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def _half(d: int) -> int:
    # elements of O_F are (A + B sqrt d)/g with A = B mod 2 when g = 2
    return 2 if d % 4 == 1 else 1


@lru_cache(maxsize=None)
def fundamental_unit(d: int) -> QuadElem:
    """The fundamental unit > 1 of O_F (either norm)."""
    g = _half(d)
    b = 1
    while True:
        for s in (-1, 1):
            t = d * b * b + s * g * g
            if t > 0:
                a = isqrt(t)
                if a * a == t:
                    return QuadElem(d, a, b, g)
        b += 1


@lru_cache(maxsize=None)
def _tp_unit(d: int) -> QuadElem:
    eta = fundamental_unit(d)
    return eta if eta.norm() == 1 else eta * eta


def _upper_int(e: QuadElem) -> int:
    """An integer >= the larger real embedding of e (e with positive coefficients)."""
    return (abs(e.x) + abs(e.y) * (isqrt(e.d) + 1)) // e.den + 1


def _is_rep(m: QuadElem, eps_conj: QuadElem) -> bool:
    return m.y >= 0 and (m * eps_conj).y < 0


@lru_cache(maxsize=200_000)
def _orbit_rep(m: QuadElem) -> tuple[QuadElem, int]:
    eps = _tp_unit(m.d)
    eps_c = eps.conj()
    e = 0
    while m.y < 0:
        m = m * eps
        e -= 1
    while (m * eps_c).y >= 0:
        m = m * eps_c
        e += 1
    return m, e


@lru_cache(maxsize=None)
def _reps_of_norm(d: int, n: int) -> tuple[QuadElem, ...]:
    """Canonical orbit representatives of totally positive integers of norm exactly n."""
    if n <= 0:
        return ()
    g = _half(d)
    eps = _tp_unit(d)
    eps_c = eps.conj()
    amax = g * _upper_int(eps) * (isqrt(n) + 1)
    out = []
    for a in range(1, amax + 1):
        t = a * a - g * g * n
        if t < 0 or t % d:
            continue
        b = isqrt(t // d)
        if b * b * d != t:
            continue
        if g == 2 and (a - b) % 2:
            continue
        m = QuadElem(d, a, b, g)
        if _is_rep(m, eps_c):
            out.append(m)
    out.sort(key=QuadElem.sort_key)
    return tuple(out)


@lru_cache(maxsize=None)
def _enumerate_reps(d: int, bound: int) -> tuple[QuadElem, ...]:
    if bound < 1:
        return ()
    g = _half(d)
    eps = _tp_unit(d)
    eps_c = eps.conj()
    # the fundamental domain forces tau_1 <= tau_0 < eps*sqrt(B)
    amax = g * _upper_int(eps) * (isqrt(bound) + 1)
    gg = g * g
    out = []
    for a in range(1, amax + 1):
        lo_t = a * a - gg * bound
        b_lo = 0
        if lo_t > 0:
            b_lo = isqrt(lo_t // d)
            while d * b_lo * b_lo < lo_t:
                b_lo += 1
        b = b_lo
        while d * b * b < a * a:
            if g == 1 or (a - b) % 2 == 0:
                m = QuadElem(d, a, b, g)
                if _is_rep(m, eps_c):
                    out.append(m)
            b += 1
    out.sort(key=QuadElem.sort_key)
    return tuple(out)


def narrow_class_number_is_one(d: int) -> bool:
    """h^+(Q(sqrt d)) = 1 iff the fundamental unit has norm -1 and every prime
    ideal of norm below the Minkowski bound has a totally positive generator."""
    if fundamental_unit(d).norm() != -1:
        return False
    disc = discriminant(d)
    q = 2
    while 4 * q * q <= disc:
        if _factor_int(q) == {q: 1}:
            if _splitting(d, q) != "inert" and not _reps_of_norm(d, q):
                return False
        q += 1
    return True


def _splitting(d: int, q: int) -> str:
    if discriminant(d) % q == 0:
        return "ramified"
    if q == 2:
        return "split" if d % 8 == 1 else "inert"
    return "split" if _legendre(d, q) == 1 else "inert"


def _factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Prime:
    """A prime ideal v of O_F given by its totally positive canonical generator."""

    gen: QuadElem
    norm: int
    q: int

    def __str__(self) -> str:
        return str(self.gen)


@dataclass(frozen=True)
class PrimeInfo:
    q: int
    kind: str
    primes: tuple[Prime, ...]


@dataclass(frozen=True)
class FieldConfig:
    """Q(sqrt(d)) with p inert and h^+ = 1, plus the coefficient field F_{p^k}."""

    d: int
    p: int
    k: int = 2

    def __post_init__(self):
        d, p, k = self.d, self.p, self.k
        if d <= 1 or not _is_squarefree(d):
            raise ContractViolation(f"d = {d} must be a squarefree integer > 1")
        if p < 2 or _factor_int(p) != {p: 1}:
            raise ContractViolation(f"p = {p} is not prime")
        if _splitting(d, p) != "inert":
            raise ContractViolation(f"p = {p} is not inert in Q(sqrt({d}))")
        if k < 2 or k % 2:
            raise ContractViolation(f"k = {k} must be even so that F_(p^2) embeds")
        if not narrow_class_number_is_one(d):
            raise ContractViolation(f"Q(sqrt({d})) does not have narrow class number 1")

    def with_k(self, k: int) -> FieldConfig:
        return FieldConfig(self.d, self.p, k)

    # -- derived data ---------------------------------------------------------

    @property
    def field(self) -> FiniteField:
        return GF(self.p, self.k)

    @cached_property
    def eps(self) -> QuadElem:
        return _tp_unit(self.d)

    @cached_property
    def discriminant(self) -> int:
        return discriminant(self.d)

    def elem(self, a, b=0) -> QuadElem:
        return QuadElem.from_ab(self.d, a, b)

    def parse(self, text: str) -> QuadElem:
        return parse_quad(text, self.d)

    @cached_property
    def omega_image(self) -> FFElem:
        """tau_0 of the integral basis generator omega (sqrt(d), or (1+sqrt(d))/2)."""
        E = self.field
        if self.p == 2:
            roots = E.quadratic_roots(E.one, E.one)
        else:
            roots = E.quadratic_roots(E.zero, -E(self.d))
        if len(roots) != 2:
            raise AssertionError("residue field of p is not quadratic")  # pragma: no cover
        s = roots[0]
        if self.p == 2 or self.d % 4 != 1:
            return s
        return (E.one + s) / E(2)

    @cached_property
    def sqrt_d_image(self) -> FFElem:
        E = self.field
        return self.omega_image * E(2) - E.one if self.d % 4 == 1 else self.omega_image

    def _omega_coords(self, m: QuadElem) -> tuple[Fraction, Fraction]:
        if self.d % 4 == 1:
            # sqrt(d) = 2*omega - 1
            return Fraction(m.x - m.y, m.den), Fraction(2 * m.y, m.den)
        return Fraction(m.x, m.den), Fraction(m.y, m.den)

    def _reduce_rational(self, r: Fraction) -> FFElem:
        E = self.field
        if r.denominator % self.p == 0:
            raise ContractViolation(f"{r} is not integral at p = {self.p}")
        return E(r.numerator) / E(r.denominator)

    def embed(self, m: QuadElem, i: int = 0) -> FFElem:
        """The residue embedding tau_i-bar of a p-integral element m."""
        return _embed(self, m, i)

    def power_l(self, m: QuadElem, l) -> FFElem:
        """prod_i tau_i-bar(m)^(l_i)."""
        l0, l1 = l
        t0 = self.embed(m, 0)
        if t0.is_zero():
            if l0 < 0 or l1 < 0:
                raise ZeroDivisionError(f"{m} vanishes mod p and l = {tuple(l)} has a negative entry")
            return self.field.one if (l0, l1) == (0, 0) else self.field.zero
        q = self.field.q
        # tau_1 = tau_0^p, so the product is tau_0^(l0 + p*l1)
        return t0 ** ((l0 + self.p * l1) % (q - 1))


@lru_cache(maxsize=200_000)
def _embed(cfg: FieldConfig, m: QuadElem, i: int) -> FFElem:
    if m.d != cfg.d:
        raise ContractViolation("element from a different quadratic field")
    u, v = cfg._omega_coords(m)
    val = cfg._reduce_rational(u) + cfg._reduce_rational(v) * cfg.omega_image
    if i == 0:
        return val
    if i == 1:
        return val.frob()
    raise ContractViolation(f"embedding index {i} must be 0 or 1")


def fundamental_tp_unit(cfg: FieldConfig) -> QuadElem:
    """Generator of the totally positive units that is > 1 in the first embedding."""
    return cfg.eps


def orbit_rep(cfg: FieldConfig, m: QuadElem) -> tuple[QuadElem, int]:
    """Return (m*, e) with m = eps^e * m* and 1 <= tau_0(m*)/tau_1(m*) < tau_0(eps)^2."""
    if m.is_zero():
        raise ContractViolation("zero has no unit orbit representative")
    if not m.is_totally_positive():
        raise ContractViolation(f"{m} is not totally positive")
    return _orbit_rep(m)


def enumerate_tp_reps(cfg: FieldConfig, bound: int) -> tuple[QuadElem, ...]:
    """One canonical representative per unit orbit of totally positive integers of norm <= bound."""
    return _enumerate_reps(cfg.d, bound)


def reps_of_norm(cfg: FieldConfig, n: int) -> tuple[QuadElem, ...]:
    return _reps_of_norm(cfg.d, n)


@lru_cache(maxsize=None)
def _prime_over(d: int, q: int) -> PrimeInfo:
    kind = _splitting(d, q)
    if kind == "inert":
        primes = (Prime(QuadElem(d, q), q * q, q),)
    else:
        gens = _reps_of_norm(d, q)
        expected = 2 if kind == "split" else 1
        if len(gens) != expected:
            raise ContractViolation(f"no totally positive generator for the primes over {q}")
        primes = tuple(Prime(g, q, q) for g in gens)
    return PrimeInfo(q, kind, primes)


def prime_over(cfg: FieldConfig, q: int) -> PrimeInfo:
    if q < 2 or _factor_int(q) != {q: 1}:
        raise ContractViolation(f"{q} is not a rational prime")
    return _prime_over(cfg.d, q)


def prime_of(cfg: FieldConfig, gen: QuadElem) -> Prime:
    """The Prime record for a totally positive generator of a prime ideal."""
    n = gen.norm()
    if n.denominator != 1 or n < 2:
        raise ContractViolation(f"{gen} does not generate a prime ideal")
    n = int(n)
    fac = _factor_int(n)
    q = next(iter(fac))
    for v in prime_over(cfg, q).primes:
        if v.gen.divides(gen) and gen.divides(v.gen):
            return v
    raise ContractViolation(f"{gen} does not generate a prime ideal")


def primes_up_to(cfg: FieldConfig, bound: int) -> list[Prime]:
    """All prime ideals of norm <= bound, sorted by (norm, trace)."""
    out = []
    for q in range(2, bound + 1):
        if _factor_int(q) == {q: 1}:
            out.extend(v for v in prime_over(cfg, q).primes if v.norm <= bound)
    out.sort(key=lambda v: v.gen.sort_key())
    return out


@lru_cache(maxsize=100_000)
def _factor_elem(d: int, m: QuadElem) -> tuple[tuple[Prime, int], ...]:
    n = m.norm()
    n = abs(int(n))
    out = []
    for q in sorted(_factor_int(n)):
        for v in _prime_over(d, q).primes:
            e = 0
            while v.gen.divides(m):
                m = m / v.gen
                e += 1
            if e:
                out.append((v, e))
    return tuple(out)


def factor(cfg: FieldConfig, m: QuadElem) -> tuple[tuple[Prime, int], ...]:
    """Prime factorisation of the principal ideal (m) for a nonzero integer m."""
    if m.is_zero() or not m.is_integral():
        raise ContractViolation(f"{m} is not a nonzero integer of O_F")
    return _factor_elem(cfg.d, m)


def canonical_generator(cfg: FieldConfig, m: QuadElem) -> QuadElem:
    """Canonical totally positive generator of the ideal (m); m must have a tp associate."""
    if m.is_zero():
        raise ContractViolation("the zero ideal has no generator")
    if not m.is_totally_positive():
        m = -m if (-m).is_totally_positive() else m * fundamental_unit(cfg.d)
        if not m.is_totally_positive():
            m = -m
    return orbit_rep(cfg, m)[0]
