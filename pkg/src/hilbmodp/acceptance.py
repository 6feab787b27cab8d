"""The acceptance suite, shared by ``hilbmodp verify`` and the test-suite.

Each check returns a :class:`Outcome`; nothing here raises on a failed identity, so a
single run reports every criterion.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .arith import FieldConfig, enumerate_tp_reps, prime_over, primes_up_to
from .eigen import (nebentypus_exponent, random_eigensystem, reconstruct, stabilisation_roots,
                    stabilise, twist_eigensystem, unique_strong_check, unstabilise)
from .qexp import (QExpansion, frob, hecke_Tv, im_phi_test, ker_theta_test, mul_hasse, phi_preimage,
                   phi_v, power, random_expansion, theta)
from .serre_oracle import FAMILY_A, FAMILY_A2, FAMILY_B, family_weight, sweep
from .twistchar import (characters_of_weight, gauss_sum, inverse_modulus_elements, required_degree,
                        twist, unit_group)
from .weightlat import (Weight, hasse_coords, in_min_cone, leq_hasse, nearly_parallel_decompose,
                        theta_min_weight, theta_weight, weights_equivalent)


@dataclass(frozen=True)
class Outcome:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.2f} s)"


BASE = FieldConfig(5, 3, 2)


def _corpus(seed: int, count: int, bound: int, l_zero: bool = False) -> list[QExpansion]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = (rng.randint(1, 6), rng.randint(1, 6))
        l = (0, 0) if l_zero else (rng.randint(-2, 2), rng.randint(-2, 2))
        out.append(random_expansion(BASE, Weight(k, l), bound, rng, density=rng.choice((0.3, 1.0))))
    return out


def theta_commutation(seed: int = 0) -> tuple[bool, str]:
    bad = 0
    for f in _corpus(seed, 200, 200):
        if theta(theta(f, 0), 1) != theta(theta(f, 1), 0):
            bad += 1
    return bad == 0, f"{200 - bad}/200 expansions agree exactly"


def theta_p_relation(seed: int = 0) -> tuple[bool, str]:
    p = BASE.p
    bad = 0
    for f in _corpus(seed, 200, 200):
        lhs = f
        for _ in range(p):
            lhs = theta(lhs, 1)
        rhs = theta(f, 0)
        for _ in range(p):
            rhs = mul_hasse(rhs, 1)
        rhs = mul_hasse(rhs, 0)
        if not (lhs.same_coefficients(rhs) and weights_equivalent(lhs.weight, rhs.weight, p)):
            bad += 1
    return bad == 0, f"{200 - bad}/200 agree coefficientwise and in weight"


def ker_theta_im_phi(seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    p = BASE.p
    pe = BASE.elem(p)
    bad = 0
    for i in range(100):
        k = (rng.randint(1, 5), rng.randint(1, 5))
        g = random_expansion(BASE, Weight(k), 40, rng)
        img = phi_v(g)
        if not (ker_theta_test(img) and theta(img, 0).is_zero() and theta(img, 1).is_zero()):
            bad += 1
        # a kernel element, built directly on p-divisible support
        kk = (p * rng.randint(1, 4), p * rng.randint(1, 4))
        bound = 400
        coeffs = {m: rng.choice(list(BASE.field.elements())) for m in enumerate_tp_reps(BASE, bound)
                  if pe.divides(m) and rng.random() < 0.7}
        h = QExpansion(BASE, Weight(kk), bound, coeffs, BASE.field(rng.randrange(p)))
        if not (theta(h, 0).is_zero() and theta(h, 1).is_zero() and im_phi_test(h)):
            bad += 1
            continue
        pre = phi_preimage(h)
        back = phi_v(pre)
        if not (back.weight == h.weight and back.same_coefficients(h, back.bound) and back.r0 == h.r0):
            bad += 1
    return bad == 0, f"{200 - bad}/200 image and kernel checks exact"


def frobenius_power(seed: int = 0) -> tuple[bool, str]:
    p = BASE.p
    bad = 0
    for f in _corpus(seed, 50, 100, l_zero=True):
        lhs = frob(phi_v(f))
        rhs = power(f, p)
        if not (lhs.same_coefficients(rhs, 100) and lhs.weight == rhs.weight and lhs.r0 == rhs.r0):
            bad += 1
    return bad == 0, f"{50 - bad}/50 equal to the p-th power"


def _eigen_weights(cfg: FieldConfig) -> list[Weight]:
    out = []
    for k0 in range(2, 7):
        for k1 in range(2, 7):
            w = Weight((k0, k1))
            if cfg.power_l(cfg.eps, nebentypus_exponent(w)) == cfg.field.one:
                out.append(w)
    return out


def eigen_reconstruction(seed: int = 0) -> tuple[bool, str]:
    bound = 400
    weights = _eigen_weights(BASE)
    rng = random.Random(seed)
    primes = [v for v in primes_up_to(BASE, 20)]
    bad = checks = 0
    for i in range(100):
        es = random_eigensystem(BASE, weights[i % len(weights)], bound, rng)
        f = reconstruct(es, bound)
        for v in primes:
            checks += 1
            dv = None if v.q == BASE.p else es.d(v)
            a = es.ap if v.q == BASE.p else es.a(v)
            g = hecke_Tv(f, v, dv)
            if not g.same_coefficients(a * f.truncate(g.bound)):
                bad += 1
        checks += 1
        if not unique_strong_check(es, bound, seed=i).agree:
            bad += 1
    return bad == 0, f"{checks - bad}/{checks} Hecke and order-independence checks exact"


def stabilisation(seed: int = 0) -> tuple[bool, str]:
    # roots of the Hecke polynomial over F_9 lie in F_81
    cfg = BASE.with_k(4)
    bound = 400
    weights = _eigen_weights(cfg)
    rng = random.Random(seed)
    targets = [v for q in (2, 11, 19) for v in prime_over(cfg, q).primes]
    bad = checks = recovered = 0
    for i in range(100):
        es = random_eigensystem(cfg, weights[i % len(weights)], bound, rng, subfield_degree=2)
        f = reconstruct(es, bound)
        for v in targets:
            roots = stabilisation_roots(es, v)
            stabs = []
            for alpha in dict.fromkeys(roots):
                fs, _ = stabilise(es, v, alpha, f)
                g = hecke_Tv(fs, v)
                checks += 1
                if not g.same_coefficients((es.a(v) - alpha) * fs.truncate(g.bound)):
                    bad += 1
                stabs.append(fs)
            if len(roots) == 2 and roots[0] != roots[1]:
                checks += 1
                recovered += 1
                if unstabilise(stabs[0], stabs[1], roots[0], roots[1], f.level) != f:
                    bad += 1
    return bad == 0, (f"{checks - bad}/{checks} exact over F_81 "
                      f"({recovered} inverse stabilisations with distinct roots)")


def gauss_sums(seed: int = 0) -> tuple[bool, str]:
    base = BASE.with_k(4)
    bad = count = moduli = 0
    for mu in enumerate_tp_reps(base, 50):
        if base.elem(base.p).divides(mu) or mu.norm() == 1:
            continue
        moduli += 1
        cfg = base.with_k(max(4, required_degree(base, mu, with_gauss=True)))
        G = unit_group(cfg, mu)
        E = cfg.field
        for l0 in range(cfg.p**2 - 1):
            for chi in characters_of_weight(cfg, mu, (l0, 0)):
                if not chi.is_primitive():
                    continue
                count += 1
                for m, is_gen in inverse_modulus_elements(G):
                    g = gauss_sum(chi, m)
                    if is_gen:
                        if g * gauss_sum(chi.inverse(), -m) != E(G.norm):
                            bad += 1
                    elif not g.is_zero():
                        bad += 1
    return bad == 0, f"{count} primitive characters over {moduli} moduli, {bad} failures"


def twist_transport(seed: int = 0) -> tuple[bool, str]:
    cfg = BASE
    bound = 200
    rng = random.Random(seed)
    mu = prime_over(cfg, 5).primes[0].gen
    chars = [chi for l0 in range(cfg.p**2 - 1) for chi in characters_of_weight(cfg, mu, (l0, 0))
             if chi.is_primitive()]
    weights = [Weight((2, 2)), Weight((3, 3)), Weight((2, 4), (0, -1)), Weight((3, 1), (0, -1))]
    hecke = [v for v in primes_up_to(cfg, 20) if v.q != cfg.p]
    bad = checks = 0
    for w in weights:
        es = random_eigensystem(cfg, w, bound, rng, with_ap=False)
        f = reconstruct(es, bound)
        for chi in chars:
            es2 = twist_eigensystem(es, chi)
            g = twist(f, chi)
            checks += 2
            if reconstruct(es2, bound) != g:
                bad += 1
            if es2.nebentypus_violations():
                bad += 1
            for v in hecke:
                checks += 1
                if chi.group.is_unit(v.gen):
                    want = cfg.power_l(v.gen, chi.lprime) / chi(v.gen) * es.a(v)
                else:
                    want = cfg.field.zero
                h = hecke_Tv(g, v, es2.d(v))
                if es2.a(v) != want or not h.same_coefficients(want * g.truncate(h.bound)):
                    bad += 1
    return bad == 0, f"{len(chars)} characters x {len(weights)} eigenforms, {checks - bad}/{checks} exact"


def weight_calculus(seed: int = 0) -> tuple[bool, str]:
    facts = {
        "hasse_coords((-1,3)) = (1,0) at p=3": hasse_coords((-1, 3), 3) == (1, 0),
        "(3,1) <=Ha (2,4) at p=3": leq_hasse((3, 1), (2, 4), 3),
        "(2,2) <=Ha (4,1) at p=2": leq_hasse((2, 2), (4, 1), 2),
        "theta_0 ((2,1),(1,0)) = ((3,3),(0,0)) at p=2":
            theta_weight(Weight((2, 1), (1, 0)), 0, 2) == Weight((3, 3), (0, 0)),
        "divided theta_0 weight ((4,1),(0,0)) at p=2":
            theta_min_weight(Weight((2, 1), (1, 0)), 0, 2) == Weight((4, 1), (0, 0)),
        "first family (2,4) at p=3, k0=3": family_weight(FAMILY_A, 3, 3) == Weight((2, 4)),
        "second family ((4,4),(-1,0)) at p=3, k0=3": family_weight(FAMILY_B, 3, 3) == Weight((4, 4), (-1, 0)),
        "(p+1,p) = (4,3) at p=3, k0=2": family_weight(FAMILY_A2, 2, 3) == Weight((4, 3)),
    }
    failed = [k for k, ok in facts.items() if not ok]
    return not failed, ("all %d equalities hold" % len(facts)) if not failed else "failed: " + "; ".join(failed)


SWEEP_PAIRS = ((2, 2), (3, 2), (3, 3), (5, 2), (5, 3), (5, 4), (5, 5))


def oracle_sweep(seed: int = 0) -> tuple[bool, str]:
    ok = True
    parts = []
    for p, k0 in SWEEP_PAIRS:
        rep = sweep(p, k0)
        decisive = bool(rep.condition3_changes)
        if rep.discrepancies or decisive != (p == k0 == 2):
            ok = False
        parts.append(f"({p},{k0}): {len(rep.discrepancies)} discrepancies, "
                     f"{len(rep.condition3_changes)} condition-3 changes")
    return ok, "; ".join(parts)


def nearly_parallel(seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(1000):
        p = rng.choice((2, 3, 5))
        k = (rng.randint(-20, 20), rng.randint(-20, 20))
        dec = nearly_parallel_decompose(k, p)
        swapped = nearly_parallel_decompose((k[1], k[0]), p)
        good = (leq_hasse(k, dec.k_prime, p)
                and all(0 <= c <= p - 1 for c in dec.kappa)
                and dec.k_prime == (dec.m + 2 - dec.kappa[0], dec.m + 2 - dec.kappa[1])
                and in_min_cone(dec.k_prime, p)
                and dec.m >= max(k) + p - 3
                and swapped.m == dec.m
                and swapped.kappa == dec.kappa[::-1]
                and swapped.k_prime == dec.k_prime[::-1])
        if not good:
            bad += 1
    return bad == 0, f"{1000 - bad}/1000 decompositions satisfy every constraint"


def example_chain(seed: int = 0) -> tuple[bool, str]:
    from .examples import example_q5_lines

    first = "\n".join(example_q5_lines(seed))
    second = "\n".join(example_q5_lines(seed))
    lines = first.splitlines()
    anchored = all(line.startswith("[") and "] " in line for line in lines)
    ends = lines[-1].endswith("g_ξ ∈ M_{(3,1),(0,1)}")
    ok = first == second and anchored and ends
    return ok, f"{len(lines)} lines, identical = {first == second}, anchored = {anchored}, final line ok = {ends}"


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    run: Callable[[int], tuple[bool, str]]
    time_limit: float | None = None


CRITERIA = (
    Criterion(1, "theta operators commute", theta_commutation, 10.0),
    Criterion(2, "p-fold theta against Hasse invariants", theta_p_relation),
    Criterion(3, "kernel of theta equals image of partial Frobenius", ker_theta_im_phi),
    Criterion(4, "partial Frobenius then Frobenius is the p-th power", frobenius_power),
    Criterion(5, "eigenform reconstruction", eigen_reconstruction, 60.0),
    Criterion(6, "stabilisation at 2, 11, 19", stabilisation),
    Criterion(7, "Gauss sum identities", gauss_sums),
    Criterion(8, "twist transports eigenvalues", twist_transport),
    Criterion(9, "weight calculus", weight_calculus),
    Criterion(10, "local oracle equivalence sweep", oracle_sweep, 60.0),
    Criterion(11, "nearly parallel decomposition", nearly_parallel),
    Criterion(12, "worked example chain", example_chain),
)


def run_criterion(c: Criterion, seed: int = 0) -> Outcome:
    start = time.perf_counter()
    passed, detail = c.run(seed)
    elapsed = time.perf_counter() - start
    if c.time_limit is not None and elapsed >= c.time_limit:
        passed = False
        detail += f"; over the {c.time_limit:.0f} s limit"
    return Outcome(c.number, c.title, passed, detail, elapsed)


def run_all(seed: int = 0, only=None) -> list[Outcome]:
    chosen = [c for c in CRITERIA if only is None or c.number in only]
    return [run_criterion(c, seed) for c in chosen]
