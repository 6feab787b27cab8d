"""Truncated q-expansions at infinity and the operators acting on them.

A :class:`QExpansion` stores one coefficient per unit orbit of totally positive
integers m with Nm(m) <= bound; the coefficient at eps^e * m is recovered from
``r_{nu m} = nu^(-l) r_m``.
"""

from __future__ import annotations

import os
import random
from math import isqrt
from typing import Callable, Iterable, Mapping

from .arith import (FieldConfig, Prime, QuadElem, canonical_generator, enumerate_tp_reps,
                    orbit_rep)
from .errors import ContractViolation
from .ffield import FFElem
from .weightlat import (Weight, add_vec, hasse_weight, phi_weight, phi_weight_preimage,
                        theta_weight)

DEFAULT_MAX_BOUND = 10_000


def max_bound() -> int:
    """Storage cap on truncation bounds, from HMF_MAX_BOUND."""
    raw = os.environ.get("HMF_MAX_BOUND")
    if raw is None:
        return DEFAULT_MAX_BOUND
    try:
        value = int(raw)
    except ValueError as exc:
        raise ContractViolation(f"HMF_MAX_BOUND={raw!r} is not an integer") from exc
    if value < 1:
        raise ContractViolation("HMF_MAX_BOUND must be positive")
    return value


def _norm_int(m: QuadElem) -> int:
    n = m.norm()
    return n.numerator // n.denominator


class QExpansion:
    """Immutable truncated q-expansion r_0 + sum r_m q^m."""

    __slots__ = ("cfg", "weight", "level", "bound", "coeffs", "r0", "_unit")

    def __init__(self, cfg: FieldConfig, weight: Weight, bound: int,
                 coeffs: Mapping[QuadElem, FFElem] | None = None, r0: FFElem | None = None,
                 level: QuadElem | None = None):
        E = cfg.field
        if bound < 0:
            raise ContractViolation("bound must be non-negative")
        if bound > max_bound():
            raise ContractViolation(f"bound {bound} exceeds HMF_MAX_BOUND = {max_bound()}")
        if level is None:
            level = cfg.elem(1)
        if not level.is_integral():
            raise ContractViolation(f"level {level} is not integral")
        level = canonical_generator(cfg, level)
        if cfg.elem(cfg.p).divides(level):
            raise ContractViolation(f"level {level} is not prime to p")
        self.cfg = cfg
        self.weight = weight
        self.level = level
        self.bound = bound
        self._unit = cfg.power_l(cfg.eps, (-weight.l[0], -weight.l[1]))
        store: dict[QuadElem, FFElem] = {}
        for m, c in (coeffs or {}).items():
            c = E(c)
            if c.is_zero():
                continue
            if not m.is_integral() or not m.is_totally_positive():
                raise ContractViolation(f"index {m} is not a totally positive integer")
            if _norm_int(m) > bound:
                raise ContractViolation(f"index {m} has norm above the bound {bound}")
            rep, e = orbit_rep(cfg, m)
            if e:
                # normalise to the representative: r_rep = r_m * (unit factor)^(-e)
                c = c * self._unit ** (-e)
            if rep in store and store[rep] != c:
                raise ContractViolation(f"conflicting coefficients for the orbit of {rep}")
            store[rep] = c
        self.coeffs = store
        self.r0 = E(0) if r0 is None else E(r0)
        if not self.r0.is_zero() and self._unit != E.one:
            raise ContractViolation("non-zero constant term in a weight whose unit character is non-trivial")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_function(cls, cfg: FieldConfig, weight: Weight, bound: int,
                      fn: Callable[[QuadElem], FFElem], r0=None, level=None) -> QExpansion:
        coeffs = {m: fn(m) for m in enumerate_tp_reps(cfg, bound)}
        return cls(cfg, weight, bound, coeffs, r0, level)

    def _new(self, weight=None, bound=None, coeffs=None, r0=None, level=None) -> QExpansion:
        return QExpansion(self.cfg, self.weight if weight is None else weight,
                          self.bound if bound is None else bound,
                          self.coeffs if coeffs is None else coeffs,
                          self.r0 if r0 is None else r0,
                          self.level if level is None else level)

    # -- access ---------------------------------------------------------------

    @property
    def field(self):
        return self.cfg.field

    def reps(self) -> tuple[QuadElem, ...]:
        return enumerate_tp_reps(self.cfg, self.bound)

    def coeff(self, m) -> FFElem:
        """r_m for m totally positive or zero; zero if m is not integral."""
        if isinstance(m, int):
            m = self.cfg.elem(m)
        if m.is_zero():
            return self.r0
        if not m.is_totally_positive():
            raise ContractViolation(f"{m} is not totally positive")
        n = m.norm()
        if n > self.bound:
            raise ContractViolation(f"coefficient at {m} (norm {n}) is beyond the bound {self.bound}")
        if not m.is_integral():
            return self.field.zero
        rep, e = orbit_rep(self.cfg, m)
        c = self.coeffs.get(rep)
        if c is None:
            return self.field.zero
        return c * self._unit ** e if e else c

    def items(self) -> Iterable[tuple[QuadElem, FFElem]]:
        """Non-zero stored coefficients in (norm, trace) order."""
        for m in sorted(self.coeffs, key=QuadElem.sort_key):
            yield m, self.coeffs[m]

    def is_zero(self) -> bool:
        return self.r0.is_zero() and not self.coeffs

    def truncate(self, bound: int) -> QExpansion:
        if bound > self.bound:
            raise ContractViolation("cannot extend a truncation bound")
        coeffs = {m: c for m, c in self.coeffs.items() if _norm_int(m) <= bound}
        return self._new(bound=bound, coeffs=coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (self.cfg == other.cfg and self.weight == other.weight and self.level == other.level
                and self.bound == other.bound and self.r0 == other.r0 and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.cfg, self.weight, self.level, self.bound, self.r0,
                     frozenset(self.coeffs.items())))

    def same_coefficients(self, other: QExpansion, bound: int | None = None) -> bool:
        """Coefficientwise equality up to a common bound (weights are not compared)."""
        b = min(self.bound, other.bound) if bound is None else bound
        if self.r0 != other.r0:
            return False
        for m in enumerate_tp_reps(self.cfg, b):
            if self.coeff(m) != other.coeff(m):
                return False
        return True

    def __repr__(self) -> str:
        return (f"QExpansion(weight={self.weight}, level={self.level}, bound={self.bound}, "
                f"nonzero={len(self.coeffs)})")

    # -- linear structure -----------------------------------------------------

    def _check_compatible(self, other: QExpansion, same_weight: bool = True) -> None:
        if self.cfg != other.cfg:
            raise ContractViolation("expansions over different fields")
        if self.level != other.level:
            raise ContractViolation(f"level mismatch: {self.level} vs {other.level}")
        if same_weight and self.weight != other.weight:
            raise ContractViolation(f"weight mismatch: {self.weight} vs {other.weight}")

    def __add__(self, other: QExpansion) -> QExpansion:
        return add(self, other)

    def __sub__(self, other: QExpansion) -> QExpansion:
        return add(self, scale(self.field(-1), other))

    def __neg__(self) -> QExpansion:
        return scale(self.field(-1), self)

    def __rmul__(self, c) -> QExpansion:
        return scale(self.field(c), self)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return mul(self, other)
        return scale(self.field(other), self)


def add(f: QExpansion, g: QExpansion) -> QExpansion:
    f._check_compatible(g)
    b = min(f.bound, g.bound)
    coeffs = {}
    for m in enumerate_tp_reps(f.cfg, b):
        c = f.coeffs.get(m, f.field.zero) + g.coeffs.get(m, f.field.zero)
        if c:
            coeffs[m] = c
    return f._new(bound=b, coeffs=coeffs, r0=f.r0 + g.r0)


def scale(c: FFElem, f: QExpansion) -> QExpansion:
    c = f.field(c)
    return f._new(coeffs={m: c * v for m, v in f.coeffs.items()}, r0=c * f.r0)


def _tp_splittings(m: QuadElem):
    """All totally positive integers m' with m - m' totally positive."""
    d = m.d
    g = 2 if d % 4 == 1 else 1
    A = m.x * (g // m.den) if m.den != g else m.x
    B = m.y * (g // m.den) if m.den != g else m.y
    for a in range(1, A):
        lim1 = isqrt((a * a - 1) // d)
        lim2 = isqrt(((A - a) ** 2 - 1) // d)
        lo = max(-lim1, B - lim2)
        hi = min(lim1, B + lim2)
        for b in range(lo, hi + 1):
            if g == 2 and (a - b) % 2:
                continue
            yield QuadElem(d, a, b, g)


def mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Product of q-expansions by exhaustive convolution over totally positive splittings."""
    f._check_compatible(g, same_weight=False)
    b = min(f.bound, g.bound)
    E = f.field
    w = Weight(add_vec(f.weight.k, g.weight.k), add_vec(f.weight.l, g.weight.l))
    coeffs = {}
    for m in enumerate_tp_reps(f.cfg, b):
        acc = f.r0 * g.coeff(m) + f.coeff(m) * g.r0
        for m1 in _tp_splittings(m):
            c1 = f.coeff(m1)
            if c1:
                acc = acc + c1 * g.coeff(m - m1)
        if acc:
            coeffs[m] = acc
    return QExpansion(f.cfg, w, b, coeffs, f.r0 * g.r0, f.level)


def one(cfg: FieldConfig, bound: int, level=None) -> QExpansion:
    """The constant expansion 1 of weight ((0,0),(0,0))."""
    return QExpansion(cfg, Weight((0, 0), (0, 0)), bound, {}, cfg.field.one, level)


def power(f: QExpansion, n: int) -> QExpansion:
    result = one(f.cfg, f.bound, f.level)
    for _ in range(n):
        result = mul(result, f)
    return result


# ---------------------------------------------------------------------------
# Hecke operators


def _divides_level(f: QExpansion, v: Prime) -> bool:
    return v.gen.divides(f.level)


def hecke_Tv(f: QExpansion, v: Prime, dv: FFElem | None = None) -> QExpansion:
    """T_v on q-expansions in the three regimes v | p, v | level, and v prime to both."""
    cfg = f.cfg
    E = f.field
    out_bound = f.bound // v.norm
    if out_bound < 1:
        raise ContractViolation(f"T_v with Nm(v) = {v.norm} leaves no coefficients below bound {f.bound}")
    beta = v.gen
    reps = enumerate_tp_reps(cfg, out_bound)
    coeffs = {}
    if v.q == cfg.p:
        if f.weight.l != (0, 0) or min(f.weight.k) < 2:
            raise ContractViolation("T_p on q-expansions needs l = (0,0) and k >= 2")
        for m in reps:
            c = f.coeff(beta * m)
            if c:
                coeffs[m] = c
        return f._new(bound=out_bound, coeffs=coeffs)
    l = f.weight.l
    fac1 = cfg.power_l(beta, l)
    if _divides_level(f, v):
        for m in reps:
            c = fac1 * f.coeff(beta * m)
            if c:
                coeffs[m] = c
        return f._new(bound=out_bound, coeffs=coeffs, r0=fac1 * f.r0)
    if dv is None:
        raise ContractViolation(f"T_v at {v} needs the S_v scalar d_v")
    dv = E(dv)
    fac2 = E(v.norm) * cfg.power_l(beta, (-l[0], -l[1])) * dv
    for m in reps:
        c = fac1 * f.coeff(beta * m)
        if beta.divides(m):
            c = c + fac2 * f.coeff(m / beta)
        if c:
            coeffs[m] = c
    return f._new(bound=out_bound, coeffs=coeffs, r0=(fac1 + fac2) * f.r0)


# ---------------------------------------------------------------------------
# theta, Frobenius, Hasse


def theta(f: QExpansion, i: int) -> QExpansion:
    """Partial theta operator: r_m -> tau_i(m) r_m, constant term killed."""
    cfg = f.cfg
    coeffs = {}
    for m, c in f.coeffs.items():
        t = cfg.embed(m, i) * c
        if t:
            coeffs[m] = t
    return QExpansion(cfg, theta_weight(f.weight, i, cfg.p), f.bound, coeffs, None, f.level)


def phi_v(f: QExpansion) -> QExpansion:
    """Partial Frobenius at (p): r_m -> r_{m/p}, zero off p-divisible support."""
    if f.weight.l != (0, 0):
        raise ContractViolation("phi_v is defined here for l = (0,0) only")
    p = f.cfg.p
    bound = min(f.bound * p * p, max_bound())
    coeffs = {}
    for m, c in f.coeffs.items():
        pm = m * p  # p is rational, so p*m stays a canonical representative
        if _norm_int(pm) <= bound:
            coeffs[pm] = c
    return QExpansion(f.cfg, Weight(phi_weight(f.weight.k, p), (0, 0)), bound, coeffs, f.r0, f.level)


def frob(f: QExpansion) -> QExpansion:
    """Coefficientwise p-th power; the two embeddings trade places in the weight."""
    k, l = f.weight.k, f.weight.l
    w = Weight((k[1], k[0]), (l[1], l[0]))
    return QExpansion(f.cfg, w, f.bound, {m: c.frob() for m, c in f.coeffs.items()},
                      f.r0.frob(), f.level)


def mul_hasse(f: QExpansion, i: int) -> QExpansion:
    """Multiply by Ha_{tau_i}, whose q-expansion is 1."""
    w = f.weight.with_k(add_vec(f.weight.k, hasse_weight(i, f.cfg.p)))
    return f._new(weight=w)


def ker_theta_test(f: QExpansion) -> bool:
    """True when theta kills f, i.e. every coefficient off p-divisible support vanishes."""
    pe = f.cfg.elem(f.cfg.p)
    return all(pe.divides(m) for m in f.coeffs)


def im_phi_test(f: QExpansion) -> bool:
    return (ker_theta_test(f) and f.weight.l == (0, 0)
            and phi_weight_preimage(f.weight.k, f.cfg.p) is not None)


def phi_preimage(f: QExpansion) -> QExpansion:
    """The expansion g with phi_v(g) = f, read off by reindexing."""
    if not im_phi_test(f):
        raise ContractViolation("expansion is not in the image of phi_v")
    p = f.cfg.p
    k = phi_weight_preimage(f.weight.k, p)
    coeffs = {m / p: c for m, c in f.coeffs.items()}
    return QExpansion(f.cfg, Weight(k, (0, 0)), f.bound // (p * p),
                      {m: c for m, c in coeffs.items() if _norm_int(m) <= f.bound // (p * p)},
                      f.r0, f.level)


# ---------------------------------------------------------------------------


def random_expansion(cfg: FieldConfig, weight: Weight, bound: int, rng: random.Random,
                     density: float = 1.0, level=None, subfield_degree: int | None = None,
                     constant: bool = True) -> QExpansion:
    """A pseudorandom expansion; coefficients are drawn from F_{p^subfield_degree} if given."""
    E = cfg.field
    pool = _subfield_elements(cfg, subfield_degree)
    coeffs = {}
    for m in enumerate_tp_reps(cfg, bound):
        if rng.random() < density:
            coeffs[m] = rng.choice(pool)
    r0 = None
    if constant and cfg.power_l(cfg.eps, weight.l) == E.one:
        r0 = rng.choice(pool)
    return QExpansion(cfg, weight, bound, coeffs, r0, level)


def _subfield_elements(cfg: FieldConfig, degree: int | None) -> list[FFElem]:
    E = cfg.field
    if degree is None or degree == E.k:
        return list(E.elements())
    if E.k % degree:
        raise ContractViolation(f"F_(p^{degree}) is not a subfield of F_(p^{E.k})")
    size = cfg.p**degree
    return [x for x in E.elements() if x ** size == x]
