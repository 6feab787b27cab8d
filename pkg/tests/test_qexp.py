import math
import random

import pytest
from hypothesis import given, strategies as st

from hilbmodp.arith import FieldConfig, QuadElem, enumerate_tp_reps, prime_over, primes_up_to
from hilbmodp.errors import ContractViolation
from hilbmodp.qexp import (QExpansion, frob, hecke_Tv, im_phi_test, ker_theta_test, mul, mul_hasse,
                           phi_preimage, phi_v, power, random_expansion, theta)
from hilbmodp.weightlat import Weight

CFG = FieldConfig(5, 3, 2)
R5 = math.sqrt(5)


def _tp_below(m):
    """Totally positive integers a with m - a totally positive, by a box search."""
    m1 = float(m.a + m.b * R5)
    m2 = float(m.a - m.b * R5)
    out = []
    for x in range(1, int(m1 + m2) + 2):
        for y in range(-int(2 * max(m1, m2)) - 2, int(2 * max(m1, m2)) + 3):
            if (x - y) % 2:
                continue
            a1, a2 = (x + y * R5) / 2, (x - y * R5) / 2
            if 1e-9 < a1 < m1 - 1e-9 and 1e-9 < a2 < m2 - 1e-9:
                out.append(QuadElem(5, x, y, 2))
    return out


def test_mul_matches_brute_convolution():
    rng = random.Random(3)
    f = random_expansion(CFG, Weight((2, 2)), 60, rng)
    g = random_expansion(CFG, Weight((1, 3)), 60, rng)
    h = mul(f, g)
    assert h.weight == Weight((3, 5))
    for m in enumerate_tp_reps(CFG, 60):
        want = f.r0 * g.coeff(m) + f.coeff(m) * g.r0
        for a in _tp_below(m):
            want = want + f.coeff(a) * g.coeff(m - a)
        assert h.coeff(m) == want, m
    assert h.r0 == f.r0 * g.r0


def test_coefficients_transform_under_units():
    rng = random.Random(5)
    f = random_expansion(CFG, Weight((2, 3), (1, -1)), 80, rng)
    e = CFG.eps
    for m in enumerate_tp_reps(CFG, 80):
        for i in (0, 1):
            t = theta(f, i)
            assert t.coeff(e * m) == CFG.embed(e * m, i) * f.coeff(e * m)


def test_bound_and_index_errors(monkeypatch):
    f = QExpansion(CFG, Weight((2, 2)), 20)
    with pytest.raises(ContractViolation):
        f.coeff(CFG.elem(5))
    assert f.coeff(CFG.parse("1/2+0*sqrt(5)")) == CFG.field.zero
    with pytest.raises(ContractViolation):
        QExpansion(CFG, Weight((2, 2)), 20, {CFG.parse("1/2+1/2*sqrt(5)"): CFG.field.one})
    with pytest.raises(ContractViolation):
        QExpansion(CFG, Weight((2, 2)), 20, {CFG.elem(5): CFG.field.one})
    with pytest.raises(ContractViolation):
        QExpansion(CFG, Weight((2, 2), (1, 0)), 20, r0=CFG.field.one)
    monkeypatch.setenv("HMF_MAX_BOUND", "50")
    with pytest.raises(ContractViolation):
        QExpansion(CFG, Weight((2, 2)), 100)


def test_unit_orbit_conflict_rejected():
    m = CFG.parse("7/2+1/2*sqrt(5)")
    with pytest.raises(ContractViolation):
        QExpansion(CFG, Weight((2, 2)), 20, {m: CFG.field.one, m * CFG.eps: CFG.field(2)})


seeds = st.integers(0, 10_000)
ks = st.tuples(st.integers(1, 6), st.integers(1, 6))
ls = st.tuples(st.integers(-2, 2), st.integers(-2, 2))


@given(seeds, ks, ls)
def test_theta_commute_property(seed, k, l):
    f = random_expansion(CFG, Weight(k, l), 60, random.Random(seed))
    assert theta(theta(f, 0), 1) == theta(theta(f, 1), 0)


@given(seeds, ks)
def test_phi_image_in_theta_kernel(seed, k):
    f = random_expansion(CFG, Weight(k), 10, random.Random(seed))
    g = phi_v(f)
    assert ker_theta_test(g) and im_phi_test(g)
    assert theta(g, 0).is_zero() and theta(g, 1).is_zero()
    assert phi_preimage(g) == f.truncate(g.bound // 9)


@given(seeds, ks)
def test_frob_phi_is_cube(seed, k):
    f = random_expansion(CFG, Weight(k), 30, random.Random(seed), density=0.5)
    assert frob(phi_v(f)).same_coefficients(power(f, 3), 30)


def test_theta_p_hasse():
    f = random_expansion(CFG, Weight((2, 3), (1, 0)), 100, random.Random(1))
    x = theta(theta(theta(f, 1), 1), 1)
    y = mul_hasse(mul_hasse(mul_hasse(mul_hasse(theta(f, 0), 1), 1), 1), 0)
    assert x.same_coefficients(y)
    assert x.weight.k == y.weight.k


def test_hecke_operators_commute():
    rng = random.Random(9)
    f = random_expansion(CFG, Weight((2, 2)), 400, rng)
    v2 = prime_over(CFG, 2).primes[0]
    v11a, v11b = prime_over(CFG, 11).primes
    d = CFG.field.one
    for v, w in [(v2, v11a), (v11a, v11b)]:
        a = hecke_Tv(hecke_Tv(f, v, d), w, d)
        b = hecke_Tv(hecke_Tv(f, w, d), v, d)
        assert a.same_coefficients(b)


def test_hecke_needs_dv_and_tp_needs_l_zero():
    f = random_expansion(CFG, Weight((2, 2), (0, -1)), 100, random.Random(0))
    with pytest.raises(ContractViolation):
        hecke_Tv(f, prime_over(CFG, 11).primes[0])
    with pytest.raises(ContractViolation):
        hecke_Tv(f, prime_over(CFG, 3).primes[0])


def test_hecke_at_p_reads_p_multiples():
    f = random_expansion(CFG, Weight((2, 2)), 90, random.Random(2))
    g = hecke_Tv(f, prime_over(CFG, 3).primes[0])
    for m in enumerate_tp_reps(CFG, 10):
        assert g.coeff(m) == f.coeff(m * 3)


def test_arithmetic_operators():
    rng = random.Random(4)
    f = random_expansion(CFG, Weight((2, 2)), 40, rng)
    g = random_expansion(CFG, Weight((2, 2)), 40, rng)
    assert (f + g) - g == f
    assert -(-f) == f
    assert (CFG.field(2) * f) + f == CFG.field(0) * f
    with pytest.raises(ContractViolation):
        f + random_expansion(CFG, Weight((1, 2)), 40, rng)
