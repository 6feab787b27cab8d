from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hilbmodp.arith import (FieldConfig, QuadElem, canonical_generator, enumerate_tp_reps, factor,
                            fundamental_unit, orbit_rep, parse_quad, prime_of, prime_over,
                            primes_up_to, reps_of_norm)
from hilbmodp.errors import ContractViolation


def _chi5(n):
    return {0: 0, 1: 1, 4: 1, 2: -1, 3: -1}[n % 5]


def _chi8(n):
    return 0 if n % 2 == 0 else (1 if n % 8 in (1, 7) else -1)


def _ideal_count(n, chi):
    return sum(chi(e) for e in range(1, n + 1) if n % e == 0)


@pytest.mark.parametrize("d,chi", [(5, _chi5), (2, _chi8)])
def test_reps_of_norm_count_ideals(d, chi):
    cfg = FieldConfig(d, 3, 2)
    for n in range(1, 120):
        assert len(reps_of_norm(cfg, n)) == _ideal_count(n, chi), n


def test_enumerate_is_union_of_norms(cfg):
    reps = enumerate_tp_reps(cfg, 60)
    assert len(reps) == sum(len(reps_of_norm(cfg, n)) for n in range(1, 61))
    assert len(set(reps)) == len(reps)
    assert all(m.is_totally_positive() and m.is_integral() for m in reps)


def test_units(cfg):
    assert fundamental_unit(5) == parse_quad("1/2+1/2*sqrt(5)", 5)
    assert cfg.eps == parse_quad("3/2+1/2*sqrt(5)", 5)
    assert fundamental_unit(2) == parse_quad("1+1*sqrt(2)", 2)


def test_splitting_types(cfg):
    kinds = {q: prime_over(cfg, q).kind for q in (2, 3, 5, 7, 11, 19, 29)}
    assert kinds == {2: "inert", 3: "inert", 5: "ramified", 7: "inert", 11: "split",
                     19: "split", 29: "split"}
    norms = [v.norm for v in primes_up_to(cfg, 20)]
    assert norms == [4, 5, 9, 11, 11, 19, 19]


def test_bad_configs():
    for args in [(4, 3, 2), (5, 11, 2), (5, 3, 3), (5, 4, 2), (1, 3, 2)]:
        with pytest.raises(ContractViolation):
            FieldConfig(*args)


def test_orbit_rep_is_unit_invariant(cfg):
    m = cfg.parse("7/2+1/2*sqrt(5)")
    rep, _ = orbit_rep(cfg, m)
    for e in range(-3, 4):
        r2, e2 = orbit_rep(cfg, m * cfg.eps**e)
        assert r2 == rep
        assert m * cfg.eps**e == rep * cfg.eps**e2
    with pytest.raises(ContractViolation):
        orbit_rep(cfg, cfg.parse("-1+0*sqrt(5)"))


def test_factor_reconstructs(cfg):
    for m in enumerate_tp_reps(cfg, 300):
        prod = cfg.elem(1)
        for v, e in factor(cfg, m):
            prod = prod * v.gen**e
        assert canonical_generator(cfg, prod) == canonical_generator(cfg, m)


def test_prime_of_rejects_composites(cfg):
    assert prime_of(cfg, cfg.elem(2)).norm == 4
    with pytest.raises(ContractViolation):
        prime_of(cfg, cfg.elem(6))


small = st.integers(min_value=-30, max_value=30)
dens = st.sampled_from([1, 2])


@st.composite
def quad(draw):
    return QuadElem.from_ab(5, Fraction(draw(small), draw(dens)), Fraction(draw(small), draw(dens)))


@given(quad(), quad(), quad())
def test_quad_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()
    if not x.is_zero():
        assert x * x.inverse() == QuadElem.from_ab(5, 1)


@given(quad())
def test_quad_string_round_trip(x):
    assert parse_quad(str(x), 5) == x


@st.composite
def integral(draw):
    a, b = draw(small), draw(small)
    return QuadElem(5, a, b, 2) if (a - b) % 2 == 0 else QuadElem(5, a, b, 1)


@given(integral(), integral())
def test_residue_embedding_is_a_ring_map(x, y):
    cfg = FieldConfig(5, 3, 2)
    for i in (0, 1):
        assert cfg.embed(x * y, i) == cfg.embed(x, i) * cfg.embed(y, i)
        assert cfg.embed(x + y, i) == cfg.embed(x, i) + cfg.embed(y, i)
    assert cfg.embed(x, 1) == cfg.embed(x, 0).frob()


@given(integral(), st.integers(-4, 4), st.integers(-4, 4))
def test_power_l(x, a, b):
    cfg = FieldConfig(5, 3, 2)
    if cfg.embed(x, 0).is_zero():
        return
    assert cfg.power_l(x, (a, b)) == cfg.embed(x, 0) ** a * cfg.embed(x, 1) ** b


def test_residue_of_sqrt5(cfg):
    s = cfg.sqrt_d_image
    assert s * s == cfg.field(5)
    assert cfg.omega_image == (cfg.field.one + s) / cfg.field(2)
