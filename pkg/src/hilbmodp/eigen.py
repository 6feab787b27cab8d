"""Hecke eigensystems and the normalised eigenforms they determine."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .arith import (FieldConfig, Prime, QuadElem, canonical_generator, enumerate_tp_reps, factor,
                    orbit_rep, prime_of, primes_up_to)
from .errors import ContractViolation
from .ffield import FFElem
from .qexp import QExpansion
from .serre_oracle import GENERIC, Reducible
from .twistchar import TwistChar, unit_group
from .weightlat import Weight, add_vec


class InconsistentEigenSystem(ContractViolation):
    """Two recursion paths disagree; ``witness`` is the index where they do."""

    def __init__(self, message: str, witness: QuadElem):
        super().__init__(message)
        self.witness = witness


def nebentypus_exponent(w: Weight) -> tuple[int, int]:
    return (w.k[0] + 2 * w.l[0] - 2, w.k[1] + 2 * w.l[1] - 2)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (a_v, d_v) of T_v and S_v, keyed by the canonical generator of v.

    ``stabilised`` lists primes whose a_v is the eigenvalue of the level-v operator and
    whose d_v has been retired; such primes divide the level.
    """

    cfg: FieldConfig
    weight: Weight
    table: Mapping[QuadElem, tuple[FFElem, FFElem | None]]
    level: QuadElem | None = None
    ap: FFElem | None = None
    stabilised: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        cfg = self.cfg
        E = cfg.field
        level = cfg.elem(1) if self.level is None else canonical_generator(cfg, self.level)
        object.__setattr__(self, "level", level)
        if cfg.elem(cfg.p).divides(level):
            raise ContractViolation("level must be prime to p")
        table = {}
        for gen, (a, d) in self.table.items():
            v = prime_of(cfg, gen)
            if v.q == cfg.p:
                raise ContractViolation("the prime over p is given through ap")
            table[v.gen] = (E(a), None if d is None else E(d))
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "stabilised", frozenset(canonical_generator(cfg, g)
                                                          for g in self.stabilised))
        if self.ap is not None:
            object.__setattr__(self, "ap", E(self.ap))
        for g in self.stabilised:
            if not g.divides(level):
                raise ContractViolation(f"stabilised prime {g} does not divide the level")
        for g, (a, d) in table.items():
            if not g.divides(level) and (d is None or d.is_zero()):
                raise ContractViolation(f"d_v must be present and nonzero at {g}")

    # -- queries ----------------------------------------------------------------

    def prime(self, gen: QuadElem) -> Prime:
        return prime_of(self.cfg, gen)

    def a(self, v: Prime) -> FFElem:
        try:
            return self.table[v.gen][0]
        except KeyError:
            raise ContractViolation(f"no eigenvalue for the prime {v.gen}") from None

    def d(self, v: Prime) -> FFElem | None:
        return self.table[v.gen][1]

    def divides_level(self, v: Prime) -> bool:
        return v.gen.divides(self.level)

    def uses_ap(self) -> bool:
        w = self.weight
        return self.ap is not None and w.l == (0, 0) and min(w.k) >= 2

    def covered_bound(self) -> int:
        """Largest B such that every prime of norm <= B away from p has an entry."""
        have = {g.norm() for g in self.table}
        B = 1
        for v in primes_up_to(self.cfg, max((int(n) for n in have), default=1)):
            if v.q == self.cfg.p:
                continue
            if v.gen not in self.table:
                return v.norm - 1
            B = v.norm
        return B

    def nebentypus_violations(self) -> list[QuadElem]:
        """Primes v away from the level with a generator = 1 mod n where d_v differs from the
        weight-determined value."""
        cfg = self.cfg
        expo = nebentypus_exponent(self.weight)
        G = unit_group(cfg, self.level)
        one = G.one
        eps_order = 1
        cur = G.reduce(cfg.eps)
        while cur != one:
            cur = G.mul(cur, G.reduce(cfg.eps))
            eps_order += 1
        bad = []
        for g, (a, d) in self.table.items():
            if g.divides(self.level):
                continue
            gen = g
            for _ in range(eps_order):
                if G.reduce(gen) == one:
                    if d != cfg.power_l(gen, expo):
                        bad.append(g)
                    break
                gen = gen * cfg.eps
        return bad


# ---------------------------------------------------------------------------
# reconstruction


def _lookup(cfg: FieldConfig, store: dict, unit: FFElem, m: QuadElem) -> FFElem:
    rep, e = orbit_rep(cfg, m)
    c = store.get(rep)
    if c is None:
        return cfg.field.zero
    return c * unit**e if e else c


def _coefficient_via(es: EigenSystem, store: dict, unit: FFElem, m: QuadElem, v: Prime, e: int) -> FFElem:
    """r_m from r_{m/beta} (and r_{m/beta^2}) for the prime v = (beta) with v^e || m."""
    cfg = es.cfg
    E = cfg.field
    beta = v.gen
    l = es.weight.l
    if v.q == cfg.p:
        if not es.uses_ap():
            return E.zero
        return es.ap * _lookup(cfg, store, unit, m / beta)
    binv = cfg.power_l(beta, (-l[0], -l[1]))
    out = binv * es.a(v) * _lookup(cfg, store, unit, m / beta)
    if e >= 2 and not es.divides_level(v):
        d = es.d(v)
        out = out - binv * binv * d * E(v.norm) * _lookup(cfg, store, unit, m / (beta * beta))
    return out


def _ensure_covered(es: EigenSystem, bound: int) -> None:
    for v in primes_up_to(es.cfg, bound):
        if v.q != es.cfg.p and v.gen not in es.table:
            raise ContractViolation(f"missing eigenvalue for the prime {v.gen} (norm {v.norm})")


def reconstruct(es: EigenSystem, bound: int, order: Sequence[QuadElem] | None = None,
                check: bool = True) -> QExpansion:
    """The normalised eigenform (r_0 = 0, r_1 = 1) with the given eigenvalues, up to ``bound``.

    For each m the recursion runs through the first prime divisor of m in ``order``
    (default: increasing norm). With ``check`` every other prime divisor is used as well
    and any disagreement raises :class:`InconsistentEigenSystem`.
    """
    cfg = es.cfg
    E = cfg.field
    _ensure_covered(es, bound)
    rank = None
    if order is not None:
        rank = {canonical_generator(cfg, g): i for i, g in enumerate(order)}
    l = es.weight.l
    unit = cfg.power_l(cfg.eps, (-l[0], -l[1]))
    store: dict[QuadElem, FFElem] = {}
    for m in enumerate_tp_reps(cfg, bound):
        if m.norm() == 1:
            store[m] = E.one
            continue
        fac = list(factor(cfg, m))
        if rank is not None:
            fac.sort(key=lambda ve: rank.get(ve[0].gen, len(rank)))
        v, e = fac[0]
        c = _coefficient_via(es, store, unit, m, v, e)
        if check:
            for w, ew in fac[1:]:
                other = _coefficient_via(es, store, unit, m, w, ew)
                if other != c:
                    raise InconsistentEigenSystem(
                        f"r_m at m = {m} differs between the primes {v.gen} and {w.gen}", m)
        if c:
            store[m] = c
    return QExpansion(cfg, es.weight, bound, store, E.zero, es.level)


# ---------------------------------------------------------------------------
# stabilisation


def stabilisation_roots(es: EigenSystem, v: Prime) -> list[FFElem]:
    """Roots of X^2 - a_v X + Nm(v) d_v, or of X^2 - a_v X once v divides the level."""
    E = es.cfg.field
    a = es.a(v)
    c = E.zero if es.divides_level(v) else E(v.norm) * es.d(v)
    return E.quadratic_roots(-a, c)


def shift(f: QExpansion, v: Prime) -> QExpansion:
    """The expansion with r_m = power_l(beta, -l) * r_{m/beta}, beta generating v."""
    cfg = f.cfg
    l = f.weight.l
    c = cfg.power_l(v.gen, (-l[0], -l[1]))
    coeffs = {}
    for m, val in f.coeffs.items():
        bm = v.gen * m
        if bm.norm() <= f.bound:
            coeffs[bm] = c * val
    return QExpansion(cfg, f.weight, f.bound, coeffs, None, f.level)


def stabilise(es: EigenSystem, v: Prime, alpha: FFElem, f: QExpansion | None = None,
              bound: int | None = None) -> tuple[QExpansion, EigenSystem]:
    """f' = f - alpha * shift(f); returns f' and the eigensystem with a_v replaced by a_v - alpha."""
    cfg = es.cfg
    E = cfg.field
    if v.q == cfg.p:
        raise ContractViolation("cannot stabilise at the prime over p")
    alpha = E(alpha)
    a = es.a(v)
    const = E.zero if es.divides_level(v) else E(v.norm) * es.d(v)
    if alpha * alpha - a * alpha + const != E.zero:
        raise ContractViolation(f"{alpha} is not a root of the Hecke polynomial at {v.gen}")
    if f is None:
        if bound is None:
            raise ContractViolation("stabilise needs an expansion or a bound")
        f = reconstruct(es, bound)
    new_level = es.level if es.divides_level(v) else es.level * v.gen
    fs = f - alpha * shift(f, v)
    fs = QExpansion(cfg, f.weight, f.bound, fs.coeffs, fs.r0, new_level)
    table = dict(es.table)
    table[v.gen] = (a - alpha, None)
    new = EigenSystem(cfg, es.weight, table, new_level, es.ap, es.stabilised | {v.gen})
    return fs, new


def unstabilise(f_alpha: QExpansion, f_beta: QExpansion, alpha: FFElem, beta: FFElem,
                level: QuadElem) -> QExpansion:
    """Recover f from its two stabilisations: (alpha f_beta - beta f_alpha) / (alpha - beta)."""
    if alpha == beta:
        raise ContractViolation("inverse stabilisation needs distinct roots")
    cfg = f_alpha.cfg
    lvl = f_alpha.level
    g = f_beta if f_beta.level == lvl else QExpansion(cfg, f_beta.weight, f_beta.bound,
                                                       f_beta.coeffs, f_beta.r0, lvl)
    comb = alpha * g - beta * f_alpha
    comb = comb * (alpha - beta).inverse()
    return QExpansion(cfg, comb.weight, comb.bound, comb.coeffs, comb.r0, level)


def is_stabilised_at(f: QExpansion, gens) -> bool:
    return all(not any(g.divides(m) for g in gens) for m in f.coeffs)


def is_strongly_stabilised(f: QExpansion) -> bool:
    """r_0 = 0 and every coefficient at an index divisible by p vanishes."""
    pe = f.cfg.elem(f.cfg.p)
    return f.r0.is_zero() and not any(pe.divides(m) for m in f.coeffs)


@dataclass(frozen=True)
class UniquenessReport:
    agree: bool
    strongly_stabilised: bool
    witness: QuadElem | None
    orders: tuple[tuple[QuadElem, ...], tuple[QuadElem, ...]]


def unique_strong_check(es: EigenSystem, bound: int, seed: int = 0) -> UniquenessReport:
    """Reconstruct along two independently shuffled prime orders and compare."""
    rng = random.Random(seed)
    gens = [v.gen for v in primes_up_to(es.cfg, bound)]
    first, second = gens[:], gens[:]
    rng.shuffle(first)
    rng.shuffle(second)
    second.reverse()
    f1 = reconstruct(es, bound, first, check=False)
    f2 = reconstruct(es, bound, second, check=False)
    witness = None
    for m in enumerate_tp_reps(es.cfg, bound):
        if f1.coeff(m) != f2.coeff(m):
            witness = m
            break
    return UniquenessReport(witness is None, is_strongly_stabilised(f1), witness,
                            (tuple(first), tuple(second)))


# ---------------------------------------------------------------------------
# local shape at p


@dataclass(frozen=True)
class LocalShapeReport:
    conclusive: bool
    frob_chi1: FFElem | None = None
    chi2_exponent: int | None = None
    inertial_type: Reducible | None = None

    def __str__(self) -> str:
        if not self.conclusive:
            return "no ordinarity conclusion"
        return (f"upper triangular: chi_1 unramified with chi_1(Frob) = {self.frob_chi1}, "
                f"chi_2 = eps_tau0^{self.chi2_exponent} on inertia")


def ordinarity_report(es: EigenSystem) -> LocalShapeReport:
    if es.ap is None:
        raise ContractViolation("ordinarity needs the eigenvalue a_p")
    if es.ap.is_zero():
        return LocalShapeReport(False)
    p = es.cfg.p
    k, l = es.weight.k, es.weight.l
    expo = ((1 - k[0] - l[0]) + (1 - k[1] - l[1]) * p) % (p * p - 1)
    return LocalShapeReport(True, es.ap, expo, Reducible(0, expo, GENERIC, p))


# ---------------------------------------------------------------------------
# generation and twisting


def random_eigensystem(cfg: FieldConfig, weight: Weight, bound: int, rng: random.Random,
                       with_ap: bool = True, subfield_degree: int = 2) -> EigenSystem:
    """Random a_v (in F_{p^subfield_degree}) with the level-one nebentypus d_v."""
    E = cfg.field
    expo = nebentypus_exponent(weight)
    if cfg.power_l(cfg.eps, expo) != E.one:
        raise ContractViolation(f"weight {weight} admits no level-one eigensystem: "
                                "the unit eps does not satisfy the nebentypus constraint")
    size = cfg.p**subfield_degree
    pool = [x for x in E.elements() if x**size == x] if E.q <= 10_000 else [E(i) for i in range(cfg.p)]
    table = {}
    for v in primes_up_to(cfg, bound):
        if v.q == cfg.p:
            continue
        table[v.gen] = (rng.choice(pool), cfg.power_l(v.gen, expo))
    ap = rng.choice(pool) if with_ap else None
    return EigenSystem(cfg, weight, table, None, ap)


def twist_eigensystem(es: EigenSystem, chi: TwistChar) -> EigenSystem:
    """Eigenvalues of the twist: a_v -> chi(v)^-1 v^l' a_v away from the modulus, 0 on it."""
    cfg = es.cfg
    E = cfg.field
    mu = chi.modulus
    table = {}
    stab = set(es.stabilised)
    for g, (a, d) in es.table.items():
        if chi.group.is_unit(g):
            s = cfg.power_l(g, chi.lprime) / chi(g)
            table[g] = (s * a, None if d is None else s * s * d)
        else:
            table[g] = (E.zero, None)
            stab.add(g)
    w = Weight(es.weight.k, add_vec(es.weight.l, chi.lprime))
    ap = None
    if es.ap is not None:
        pe = cfg.elem(cfg.p)
        if w.l == (0, 0) and es.weight.l == (0, 0):
            ap = es.ap / chi(pe)
        elif not es.ap.is_zero() and es.uses_ap():
            raise ContractViolation("the twisted weight leaves the range where a_p acts on q-expansions")
    return EigenSystem(cfg, w, table, es.level * mu * mu, ap, frozenset(stab))
