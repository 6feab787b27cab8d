import random

import pytest
from hypothesis import given, strategies as st

from hilbmodp.arith import FieldConfig, enumerate_tp_reps, prime_over
from hilbmodp.errors import ContractViolation
from hilbmodp.qexp import random_expansion
from hilbmodp.twistchar import (FieldTooSmall, TwistChar, additive_character_exponent,
                                characters_of_weight, gauss_sum, inverse_different_generator,
                                inverse_modulus_elements, least_degree, required_degree, twist,
                                unit_group)
from hilbmodp.weightlat import Weight

CFG = FieldConfig(5, 3, 2)
CFG81 = FieldConfig(5, 3, 4)
MU5 = prime_over(CFG, 5).primes[0].gen


def _brute_unit_count(G):
    one = G.one
    return sum(1 for r in G.elements if any(G.mul(r, s) == one for s in G.elements))


def test_group_orders_match_brute_force():
    for mu in enumerate_tp_reps(CFG, 50):
        if CFG.elem(3).divides(mu):
            continue
        G = unit_group(CFG, mu)
        assert G.order == _brute_unit_count(G) == G.expected_order(), mu


def test_discrete_log_is_a_homomorphism():
    G = unit_group(CFG, CFG.parse("7/2+1/2*sqrt(5)") * 2)
    rng = random.Random(0)
    for _ in range(50):
        a, b = rng.choice(G.units), rng.choice(G.units)
        la, lb, lab = G.log(a), G.log(b), G.log(G.mul(a, b))
        assert all((x + y - z) % n == 0 for x, y, z, n in zip(la, lb, lab, G.orders))


def test_characters_over_five():
    quartic = characters_of_weight(CFG, MU5, (0, 2))
    assert [c.order() for c in quartic] == [4, 4]
    assert all(c.is_primitive() for c in quartic)
    ratio = quartic[0] * quartic[1].inverse()
    assert ratio.order() == 2 and ratio.lprime == (0, 0)
    trivial_weight = characters_of_weight(CFG, MU5, (0, 0))
    assert sorted(c.order() for c in trivial_weight) == [1, 2]
    assert [c.is_primitive() for c in trivial_weight if c.is_trivial()] == [False]


@given(st.integers(0, 7), st.data())
def test_characters_are_multiplicative(l0, data):
    mu = CFG81.parse("4+1*sqrt(5)")
    G = unit_group(CFG81, mu)
    chars = characters_of_weight(CFG81, mu, (l0, 0))
    for chi in chars:
        assert chi(CFG81.eps) == CFG81.power_l(CFG81.eps, (l0, 0))
        a = G.lift(data.draw(st.sampled_from(G.units)))
        b = G.lift(data.draw(st.sampled_from(G.units)))
        assert chi(a * b) == chi(a) * chi(b)
        assert chi(a) * chi.inverse()(a) == CFG81.field.one


def test_character_rejects_bad_data():
    G = unit_group(CFG, MU5)
    with pytest.raises(ContractViolation):
        TwistChar(CFG, MU5, [CFG.field(2)] * (len(G.gens) + 1))
    with pytest.raises(ContractViolation):
        TwistChar(CFG, MU5, [CFG.field(2)], (0, 2))


def test_inverse_different():
    g = inverse_different_generator(5)
    assert g == CFG.parse("1/2-1/10*sqrt(5)")
    assert g.is_totally_positive()
    assert (g * CFG.parse("0+1*sqrt(5)")).norm() in (1, -1)
    for x in enumerate_tp_reps(CFG, 30):
        assert (g * x).trace().denominator == 1


def test_degrees():
    assert least_degree(3, 5) == 4
    for n in (5, 11, 19, 29, 31, 41, 49):
        assert least_degree(3, n) == next(k for k in range(2, 400, 2) if (3**k - 1) % n == 0)
    assert required_degree(CFG, MU5, with_gauss=True) == 4
    assert required_degree(CFG, CFG.elem(2), with_gauss=True) == 2


def _direct_gauss(chi, m):
    G = chi.group
    E = chi.cfg.field
    zeta = E.root_of_unity(G.N)
    total = E.zero
    for r in G.elements:
        b = G.lift(r)
        c = chi(b)
        if c.is_zero():
            continue
        total = total + c.inverse() * zeta ** additive_character_exponent(chi.cfg, G.N, -(b * m))
    return total


@pytest.mark.parametrize("modulus,k", [("5/2+1/2*sqrt(5)", 4), ("7/2+1/2*sqrt(5)", 20), ("4+0*sqrt(5)", 2)])
def test_gauss_sum_identities(modulus, k):
    cfg = CFG.with_k(k)
    mu = cfg.parse(modulus)
    G = unit_group(cfg, mu)
    E = cfg.field
    prims = [c for l0 in range(8) for c in characters_of_weight(cfg, mu, (l0, 0)) if c.is_primitive()]
    assert prims
    for chi in prims:
        for m, is_gen in inverse_modulus_elements(G):
            g = gauss_sum(chi, m)
            assert g == _direct_gauss(chi, m)
            if is_gen:
                assert g * gauss_sum(chi.inverse(), -m) == E(G.norm)
            else:
                assert g.is_zero()


def test_gauss_sum_needs_roots_of_unity():
    chi = characters_of_weight(CFG, MU5, (0, 2))[0]
    with pytest.raises(FieldTooSmall) as info:
        gauss_sum(chi, MU5.inverse())
    assert info.value.min_k == 4


def test_gauss_sum_rejects_bad_input():
    chi = characters_of_weight(CFG81, MU5, (0, 2))[0]
    with pytest.raises(ContractViolation):
        gauss_sum(chi, CFG81.parse("1/7+0*sqrt(5)"))
    with pytest.raises(ContractViolation):
        gauss_sum(chi, MU5.inverse(), zeta=CFG81.field.one)


def test_twist_weight_level_and_coefficients():
    f = random_expansion(CFG, Weight((2, 2)), 80, random.Random(0))
    chi = characters_of_weight(CFG, MU5, (0, 2))[0]
    g = twist(f, chi)
    assert g.weight == Weight((2, 2), (0, 2))
    assert g.level == MU5 * MU5 or g.level == CFG.elem(5)
    assert g.r0.is_zero()
    for m in enumerate_tp_reps(CFG, 80):
        if MU5.divides(m):
            assert g.coeff(m).is_zero()
        else:
            assert g.coeff(m) * chi(m) == f.coeff(m)


def test_twist_by_trivial_character_of_unit_modulus():
    f = random_expansion(CFG, Weight((2, 2)), 40, random.Random(1))
    triv = characters_of_weight(CFG, CFG.elem(1), (0, 0))
    assert len(triv) == 1
    assert twist(f, triv[0]) == f
