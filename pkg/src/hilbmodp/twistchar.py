"""Characters of (O_F/m)^x with a weight, Gauss sums, and twisting of q-expansions."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from .arith import FieldConfig, QuadElem, canonical_generator, factor
from .errors import ContractViolation
from .ffield import FFElem
from .qexp import QExpansion
from .weightlat import Weight, add_vec

Residue = tuple[int, int]

MAX_MODULUS_NORM = 10_000


class FieldTooSmall(ContractViolation):
    """The coefficient field lacks the roots of unity a construction needs."""

    def __init__(self, message: str, min_k: int):
        super().__init__(f"{message}; the least sufficient even degree is k = {min_k}")
        self.min_k = min_k


def _prime_to(n: int, p: int) -> int:
    while n % p == 0:
        n //= p
    return n


def least_degree(p: int, n: int) -> int:
    """Least even k with n | p^k - 1 (n prime to p)."""
    if n % p == 0:
        raise ContractViolation(f"{n} is divisible by p = {p}")
    k, pk = 1, p % n if n > 1 else 0
    if n == 1:
        return 2
    while pk != 1:
        pk = (pk * p) % n
        k += 1
    return k if k % 2 == 0 else 2 * k


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class UnitGroupModM:
    """(O_F/m)^x for m = (mu), with mu totally positive and prime to p.

    Residues are pairs (x, y) standing for x + y*omega with 0 <= x < a and 0 <= y < c,
    where {(a, 0), (b, c)} is the Hermite basis of mu*O_F in the (1, omega) coordinates.
    """

    def __init__(self, cfg: FieldConfig, modulus: QuadElem):
        if not modulus.is_integral() or modulus.is_zero():
            raise ContractViolation(f"modulus {modulus} is not a nonzero integer")
        mu = canonical_generator(cfg, modulus)
        if cfg.elem(cfg.p).divides(mu):
            raise ContractViolation(f"modulus {mu} is not prime to p")
        self.cfg = cfg
        self.modulus = mu
        self.norm = int(mu.norm())
        if self.norm > MAX_MODULUS_NORM:
            raise ContractViolation(f"modulus norm {self.norm} exceeds {MAX_MODULUS_NORM}")
        self._odd = cfg.d % 4 == 1
        self._w2 = (1, (cfg.d - 1) // 4) if self._odd else (0, cfg.d)
        (x1, y1), (x2, y2) = self.coords(mu), self.coords(mu * self.omega)
        g, s, t = _xgcd(y1, y2)
        if g == 0:
            raise AssertionError("degenerate modulus lattice")  # pragma: no cover
        b, c = s * x1 + t * x2, s * y1 + t * y2
        a = abs((y2 // g) * x1 - (y1 // g) * x2)
        if c < 0:
            b, c = -b, -c
        self.a, self.b, self.c = a, b % a, c
        if a * c != self.norm:
            raise AssertionError("Hermite basis does not have the right covolume")  # pragma: no cover
        self.primes = factor(cfg, mu) if self.norm > 1 else ()
        self.elements = [(x, y) for y in range(c) for x in range(a)]
        self.units = [r for r in self.elements if self._is_unit(r)]
        self._build_structure()

    # -- residues -------------------------------------------------------------

    @cached_property
    def omega(self) -> QuadElem:
        return QuadElem(self.cfg.d, 1, 1, 2) if self._odd else QuadElem(self.cfg.d, 0, 1)

    @property
    def N(self) -> int:
        """Positive generator of m intersected with Z."""
        return self.a

    def coords(self, m: QuadElem) -> tuple[int, int]:
        if not m.is_integral():
            raise ContractViolation(f"{m} is not integral")
        if self._odd:
            u, v = Fraction(m.x - m.y, m.den), Fraction(2 * m.y, m.den)
        else:
            u, v = Fraction(m.x, m.den), Fraction(m.y, m.den)
        return int(u), int(v)

    def _reduce_coords(self, x: int, y: int) -> Residue:
        k, y = divmod(y, self.c)
        return ((x - k * self.b) % self.a, y)

    def reduce(self, m: QuadElem) -> Residue:
        return self._reduce_coords(*self.coords(m))

    def lift(self, r: Residue) -> QuadElem:
        return self.omega * r[1] + r[0]

    def mul(self, r: Residue, s: Residue) -> Residue:
        x1, y1 = r
        x2, y2 = s
        yy = y1 * y2
        return self._reduce_coords(x1 * x2 + yy * self._w2[1], x1 * y2 + x2 * y1 + yy * self._w2[0])

    def _is_unit(self, r: Residue) -> bool:
        if self.norm == 1:
            return True
        m = self.lift(r)
        if m.is_zero():
            return False
        return not any(v.gen.divides(m) for v, _ in self.primes)

    def is_unit(self, m: QuadElem) -> bool:
        return self._is_unit(self.reduce(m))

    def expected_order(self) -> int:
        out = 1
        for v, e in self.primes:
            out *= v.norm ** (e - 1) * (v.norm - 1)
        return out

    # -- group structure ------------------------------------------------------

    @property
    def one(self) -> Residue:
        return self._reduce_coords(1, 0)

    def _order_mod(self, r: Residue, H: set) -> int:
        n, cur = 1, r
        while cur not in H:
            cur = self.mul(cur, r)
            n += 1
        return n

    def _build_structure(self) -> None:
        # Greedy basis: an element of maximal order in G/H, lifted to an element of the same
        # order in G, spans a cyclic direct summand.
        one = self.one
        H = {one}
        gens: list[Residue] = []
        orders: list[int] = []
        total = len(self.units)
        while len(H) < total:
            best, best_n = None, 0
            for u in self.units:
                if u in H:
                    continue
                n = self._order_mod(u, H)
                if n > best_n:
                    best, best_n = u, n
            lift = None
            for h in sorted(H):
                g = self.mul(best, h)
                if self._order_mod(g, {one}) == best_n:
                    lift = g
                    break
            if lift is None:
                raise AssertionError("no lift of maximal order")  # pragma: no cover
            gens.append(lift)
            orders.append(best_n)
            newH = set()
            cur = one
            for _ in range(best_n):
                newH.update(self.mul(h, cur) for h in H)
                cur = self.mul(cur, lift)
            H = newH
        self.gens = tuple(gens)
        self.orders = tuple(orders)
        dlog: dict[Residue, tuple[int, ...]] = {one: ()}
        for g, n in zip(gens, orders):
            nxt = {}
            for r, vec in dlog.items():
                cur = r
                for j in range(n):
                    nxt[cur] = vec + (j,)
                    cur = self.mul(cur, g)
            dlog = nxt
        self.dlog = dlog

    @property
    def order(self) -> int:
        return len(self.units)

    @property
    def exponent(self) -> int:
        out = 1
        for n in self.orders:
            out = _lcm(out, n)
        return out

    def log(self, m) -> tuple[int, ...] | None:
        r = m if isinstance(m, tuple) else self.reduce(m)
        return self.dlog.get(r)

    def __repr__(self) -> str:
        return f"UnitGroupModM({self.modulus}, orders={self.orders})"


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@lru_cache(maxsize=512)
def unit_group(cfg: FieldConfig, modulus: QuadElem) -> UnitGroupModM:
    return UnitGroupModM(cfg, modulus)


def required_degree(cfg: FieldConfig, modulus: QuadElem, with_gauss: bool = False) -> int:
    """Least even k such that F_{p^k} carries all characters mod m (and zeta_N if asked)."""
    G = unit_group(cfg, modulus)
    n = _prime_to(G.exponent, cfg.p)
    if with_gauss:
        n = _lcm(n, G.N)
    return least_degree(cfg.p, n)


class TwistChar:
    """A character of (O_F/m)^x with values in F_{p^k}, of weight lprime."""

    def __init__(self, cfg: FieldConfig, modulus: QuadElem, values, lprime=(0, 0)):
        G = unit_group(cfg, modulus)
        E = cfg.field
        values = tuple(E(v) for v in values)
        if len(values) != len(G.gens):
            raise ContractViolation(f"expected {len(G.gens)} generator values, got {len(values)}")
        for v, n in zip(values, G.orders):
            if v.is_zero() or v**n != E.one:
                raise ContractViolation(f"value {v} does not have order dividing {n}")
        self.cfg = cfg
        self.group = G
        self.values = values
        self.lprime = (int(lprime[0]), int(lprime[1]))
        self._tables: list[list[FFElem]] | None = None
        self._inverse: TwistChar | None = None
        if self(cfg.eps) != cfg.power_l(cfg.eps, self.lprime):
            raise ContractViolation(f"character is not of weight {self.lprime}")

    @property
    def modulus(self) -> QuadElem:
        return self.group.modulus

    def __call__(self, m) -> FFElem:
        """chi(m mod m); zero when m is not a unit modulo the modulus."""
        if isinstance(m, int):
            m = self.cfg.elem(m)
        vec = self.group.log(m)
        E = self.cfg.field
        if vec is None:
            return E.zero
        out = E.one
        for table, e in zip(self._power_tables(), vec):
            if e:
                out = out * table[e]
        return out

    def _power_tables(self) -> list[list[FFElem]]:
        if self._tables is None:
            tables = []
            for v, n in zip(self.values, self.group.orders):
                row = [self.cfg.field.one]
                for _ in range(n - 1):
                    row.append(row[-1] * v)
                tables.append(row)
            self._tables = tables
        return self._tables

    def inverse(self) -> TwistChar:
        if self._inverse is None:
            self._inverse = TwistChar(self.cfg, self.modulus, [v.inverse() for v in self.values],
                                      (-self.lprime[0], -self.lprime[1]))
            self._inverse._inverse = self
        return self._inverse

    def __mul__(self, other: TwistChar) -> TwistChar:
        if self.modulus != other.modulus:
            raise ContractViolation("characters with different moduli")
        return TwistChar(self.cfg, self.modulus, [a * b for a, b in zip(self.values, other.values)],
                         add_vec(self.lprime, other.lprime))

    def __eq__(self, other) -> bool:
        return (isinstance(other, TwistChar) and self.cfg == other.cfg
                and self.modulus == other.modulus and self.values == other.values
                and self.lprime == other.lprime)

    def __hash__(self):
        return hash((self.cfg, self.modulus, self.values, self.lprime))

    def is_trivial(self) -> bool:
        return all(v == self.cfg.field.one for v in self.values)

    def order(self) -> int:
        out = 1
        for v, n in zip(self.values, self.group.orders):
            out = _lcm(out, v.order(n))
        return out

    def is_primitive(self) -> bool:
        """True when chi does not factor through (O_F/m')^x for any proper divisor m' of m."""
        G = self.group
        E = self.cfg.field
        for v, _ in G.primes:
            smaller = G.modulus / v.gen
            kernel = (G.lift(u) for u in G.units if smaller.divides(G.lift(u) - 1))
            if all(self(u) == E.one for u in kernel):
                return False
        return True

    def __repr__(self) -> str:
        return f"TwistChar(modulus={self.modulus}, values={list(self.values)}, lprime={self.lprime})"


def characters_of_weight(cfg: FieldConfig, modulus: QuadElem, lprime) -> list[TwistChar]:
    """All F_{p^k}-valued characters mod m of weight lprime."""
    G = unit_group(cfg, modulus)
    E = cfg.field
    need = _prime_to(G.exponent, cfg.p)
    if (E.q - 1) % need:
        raise FieldTooSmall(f"F_{E.q} lacks the values of characters mod {G.modulus}",
                            least_degree(cfg.p, need))
    ranges = []
    roots = []
    for n in G.orders:
        M = gcd(n, E.q - 1)
        ranges.append(range(M))
        roots.append(E.root_of_unity(M))
    target = cfg.power_l(cfg.eps, lprime)
    eps_log = G.log(cfg.eps)
    out = []
    for expo in itertools.product(*ranges):
        values = [z**a for z, a in zip(roots, expo)]
        val = E.one
        for v, e in zip(values, eps_log):
            val = val * v**e
        if val == target:
            out.append(TwistChar(cfg, G.modulus, values, lprime))
    return out


# ---------------------------------------------------------------------------
# Gauss sums


@lru_cache(maxsize=None)
def inverse_different_generator(d: int) -> QuadElem:
    """A totally positive generator gamma of the inverse different."""
    root = QuadElem(d, 0, 1)
    diff = root if d % 4 == 1 else root * 2
    return _tp_associate(diff).inverse()


def _tp_associate(m: QuadElem) -> QuadElem:
    from .arith import fundamental_unit

    for cand in (m, -m, m * fundamental_unit(m.d), -(m * fundamental_unit(m.d))):
        if cand.is_totally_positive():
            return cand
    raise ContractViolation(f"{m} has no totally positive associate")


def additive_character_exponent(cfg: FieldConfig, N: int, x: QuadElem) -> int:
    """The exponent e with zeta(x) = zeta_N^e, i.e. N*Tr(x*gamma) mod N."""
    t = (x * inverse_different_generator(cfg.d)).trace() * N
    if t.denominator != 1:
        raise ContractViolation(f"{x} is not in the inverse of the modulus")
    return t.numerator % N


def gauss_sum(chi: TwistChar, m: QuadElem, zeta: FFElem | None = None) -> FFElem:
    """sum over b in (O_F/m)^x of chi(b)^-1 * zeta(-b*m), for m in the inverse modulus."""
    G = chi.group
    cfg = chi.cfg
    E = cfg.field
    if G.norm == 1:
        raise ContractViolation("Gauss sums of conductor one are not defined")
    if not (m * G.modulus).is_integral():
        raise ContractViolation(f"{m} is not in the inverse of the modulus {G.modulus}")
    N = G.N
    if zeta is None:
        if (E.q - 1) % N:
            raise FieldTooSmall(f"F_{E.q} has no primitive {N}-th root of unity", least_degree(cfg.p, N))
        zeta = E.root_of_unity(N)
    elif zeta.is_zero() or zeta**N != E.one or zeta.order(N) != N:
        raise ContractViolation(f"zeta is not a primitive {N}-th root of unity")
    zpow = [E.one]
    for _ in range(N - 1):
        zpow.append(zpow[-1] * zeta)
    inv_chi = chi.inverse()
    # group terms by character value, summing roots of unity first
    buckets: dict[FFElem, FFElem] = {}
    for r in G.units:
        b = G.lift(r)
        e = additive_character_exponent(cfg, N, -(b * m))
        v = inv_chi(b)
        buckets[v] = buckets.get(v, E.zero) + zpow[e]
    total = E.zero
    for v, s in buckets.items():
        total = total + v * s
    return total


def inverse_modulus_elements(G: UnitGroupModM) -> list[tuple[QuadElem, bool]]:
    """Representatives r/mu of m^-1/O_F, flagged True when they generate it."""
    return [(G.lift(r) / G.modulus, G._is_unit(r)) for r in G.elements]


# ---------------------------------------------------------------------------
# twisting


def twist(f: QExpansion, chi: TwistChar) -> QExpansion:
    """r_m(f_chi) = chi(m)^-1 r_m(f) on m prime to the modulus, zero elsewhere."""
    if chi.cfg != f.cfg:
        raise ContractViolation("character and expansion live over different fields")
    coeffs = {}
    for m, c in f.coeffs.items():
        val = chi(m)
        if val:
            coeffs[m] = c / val
    trivial_modulus = chi.group.norm == 1
    w = Weight(f.weight.k, add_vec(f.weight.l, chi.lprime))
    level = f.level * chi.modulus * chi.modulus
    return QExpansion(f.cfg, w, f.bound, coeffs, f.r0 if trivial_modulus else None, level)
