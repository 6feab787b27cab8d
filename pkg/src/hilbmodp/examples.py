"""The weight bookkeeping for an irreducible mod-3 representation over Q(sqrt(5)).

Each line is "[anchor] statement", where the anchor names the step of the chain.  All
values are computed, none are hard-coded; a seeded level-one eigensystem stands in for
the actual eigenform so that the twisting step runs on real q-expansions.
"""

from __future__ import annotations

import random

from .arith import FieldConfig, prime_over
from .eigen import random_eigensystem, reconstruct, twist_eigensystem
from .serre_oracle import IN_V, Reducible, has_lift_pw1
from .shifter import HA0, WeightSet, kmin_bound, propagate
from .twistchar import characters_of_weight, twist
from .weightlat import Weight, add_vec, hasse_coords, l_class, leq_hasse, sub_vec

D, P = 5, 3
K0 = 3
F_WEIGHT = Weight((2, 4), (0, -1))
G_WEIGHT = Weight((3, 1), (0, -1))
XI_WEIGHT = (0, 2)
DEMO_BOUND = 100


def _fmt(w: Weight) -> str:
    return f"(({w.k[0]},{w.k[1]}),({w.l[0]},{w.l[1]}))"


def example_q5_lines(seed: int = 0) -> list[str]:
    cfg = FieldConfig(D, P, 2)
    p = cfg.p
    m = p * p - 1
    out = [f"[setup] F = Q(sqrt({D})), p = {p} inert, coefficients in F_{p * p}, "
           f"tau_0(omega) = {cfg.omega_image.hex()} (ff-hex)"]

    # chi_i restricted to inertia is eps_{tau_i}, and eps_{tau_1} = eps_{tau_0}^p
    e1, e0 = p % m, 1
    ratio = (e1 - e0) % m
    out.append(f"[local shape] chi_1 = eps_tau0^{e1}, chi_0 = eps_tau0^{e0} on inertia, "
               f"so chi_1/chi_0 = eps_tau0^{ratio}, extension class in the line V")

    # a lift of weight ((k0,1),l) is a lift of ((k0,1),(0,0)) for the twist by eps^(l0 + p l1)
    shift = l_class(G_WEIGHT.l, p)
    sigma = Reducible(e1 + shift, e0 + shift, IN_V, p)
    lift = has_lift_pw1(sigma, K0, p)
    out.append(f"[crystalline lift] twisting by eps_tau0^{shift} gives {sigma}; "
               f"lift of weight {_fmt(G_WEIGHT)}: {lift}")

    out.append(f"[eigenform f] f has weight {_fmt(F_WEIGHT)}, paritious = {F_WEIGHT.is_paritious()}")

    delta = sub_vec(F_WEIGHT.k, G_WEIGHT.k)
    n = hasse_coords(delta, p)
    out.append(f"[Hasse comparison] {F_WEIGHT.k} - {G_WEIGHT.k} = {delta}, Hasse coordinates n = {n}, "
               f"so {G_WEIGHT.k} <=_Ha {F_WEIGHT.k}: {leq_hasse(G_WEIGHT.k, F_WEIGHT.k, p)}")

    closure = propagate(WeightSet(p, [G_WEIGHT], cfg), [HA0], 1)
    found = ", ".join(f"{_fmt(w)} [{closure.tag(w)}]" for w in closure)
    out.append(f"[weight shifting] closure of {{{_fmt(G_WEIGHT)}}} under Ha_0: {found}")

    kb = kmin_bound(WeightSet(p, [F_WEIGHT, G_WEIGHT], cfg), G_WEIGHT.l)
    out.append(f"[minimal weight] least weight at l = {G_WEIGHT.l} among the declared pair: {kb.bound}; "
               f"g has weight {_fmt(G_WEIGHT)}")

    mu = prime_over(cfg, D).primes[0].gen
    chars = [chi for chi in characters_of_weight(cfg, mu, XI_WEIGHT) if chi.is_primitive()]
    orders = [chi.order() for chi in chars]
    quotient = (chars[0] * chars[1].inverse()) if len(chars) == 2 else None
    qdesc = "n/a" if quotient is None else f"order {quotient.order()}, weight {quotient.lprime}"
    out.append(f"[twist characters] conductor ({mu}) and weight {XI_WEIGHT}: {len(chars)} characters "
               f"of orders {orders}; their quotient has {qdesc}")

    tw = Weight(G_WEIGHT.k, add_vec(G_WEIGHT.l, XI_WEIGHT))
    out.append(f"[twisted weight] l + l' = {G_WEIGHT.l} + {XI_WEIGHT} = {tw.l}; "
               f"{_fmt(tw)} paritious = {tw.is_paritious()}")

    rng = random.Random(seed)
    es = random_eigensystem(cfg, G_WEIGHT, DEMO_BOUND, rng, with_ap=False)
    g = reconstruct(es, DEMO_BOUND)
    g_xi = twist(g, chars[0])
    es_xi = twist_eigensystem(es, chars[0])
    ok = reconstruct(es_xi, DEMO_BOUND) == g_xi
    out.append(f"[twisted form] seeded level-one stand-in at bound {DEMO_BOUND}: twist has weight "
               f"{_fmt(g_xi.weight)} and level ({g_xi.level}), eigenvalues re-verified = {ok}")

    final = "g_ξ ∈ M_{(%d,%d),(%d,%d)}" % (g_xi.weight.k + g_xi.weight.l)
    out.append(f"[conclusion] {final}")
    return out
