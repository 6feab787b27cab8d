import pytest
from hypothesis import given, strategies as st

from hilbmodp.errors import ContractViolation
from hilbmodp.serre_oracle import (FAMILY_A, FAMILY_A2, FAMILY_B, GENERIC, IN_V, SPLIT, Irreducible,
                                   Reducible, condition3_fails, enumerate_types,
                                   frobenius_conjugate, family_shapes, has_lift_family, has_lift_pw1,
                                   pwt1shift_check, restrict_to_Kprime, sweep, unramified_iff_k1)


def test_exponent_arithmetic():
    assert restrict_to_Kprime(6, 3) == 60
    for c in range(80):
        assert frobenius_conjugate(frobenius_conjugate(c, 3), 3) == c
    for e in range(8):
        r = restrict_to_Kprime(e, 3)
        assert frobenius_conjugate(r, 3) == r


def _brute_type_count(p):
    m, mod = p * p - 1, p**4 - 1
    generic_pairs = {frozenset((c, c * p * p % mod)) for c in range(mod) if c * p * p % mod != c}
    return 3 * m * m + len(generic_pairs)


@pytest.mark.parametrize("p,total", [(2, 33), (3, 228), (5, 2028)])
def test_type_counts(p, total):
    types = list(enumerate_types(p))
    assert len(types) == total == _brute_type_count(p)
    assert len(set(types)) == total


def test_pw1_examples():
    assert has_lift_pw1(Reducible(0, 6, IN_V, 3), 3, 3)
    assert has_lift_pw1(Irreducible(78, 3), 3, 3)
    assert not has_lift_pw1(Reducible(1, 6, IN_V, 3), 3, 3)
    assert not has_lift_pw1(Reducible(0, 6, GENERIC, 3), 3, 3)


def test_split_convention_flag():
    s = Reducible(6, 0, SPLIT, 3)
    assert has_lift_pw1(s, 3, 3)
    assert not has_lift_pw1(s, 3, 3, split_in_v=False)


def test_family_examples():
    assert has_lift_family(Reducible(0, 6, IN_V, 3), FAMILY_A, 3, 3)
    assert has_lift_family(Reducible(1, 5, GENERIC, 3), FAMILY_B, 3, 3)
    _, irr = family_shapes(FAMILY_A, 3, 3)
    assert 70 in irr


def test_degenerate_irreducible_rejected():
    # 70 is fixed by c -> 9c mod 80, so its induction is reducible
    with pytest.raises(ContractViolation):
        Irreducible(70, 3)
    with pytest.raises(ContractViolation):
        Reducible(0, 0, "bogus", 3)


def test_family_preconditions():
    with pytest.raises(ContractViolation):
        family_shapes(FAMILY_A, 2, 3)
    with pytest.raises(ContractViolation):
        family_shapes(FAMILY_A2, 3, 3)
    with pytest.raises(ContractViolation):
        has_lift_pw1(Reducible(0, 0, SPLIT, 3), 4, 3)
    with pytest.raises(ContractViolation):
        has_lift_pw1(Reducible(0, 0, SPLIT, 5), 3, 3)


def test_condition3_clause():
    for e2 in range(8):
        for ext in (IN_V, GENERIC):
            sigma = Reducible(1, e2, ext, 3)
            res = pwt1shift_check(sigma, 3, 3)
            assert condition3_fails(sigma)
            assert not res.rhs and not res.lhs


def test_unramified():
    assert unramified_iff_k1(Reducible(0, 0, SPLIT, 3))
    assert not unramified_iff_k1(Reducible(0, 6, IN_V, 3))
    assert not unramified_iff_k1(Irreducible(1, 3))


@pytest.mark.parametrize("p,k0", [(2, 2), (3, 2), (3, 3), (5, 2), (5, 3), (5, 4), (5, 5)])
def test_exhaustive_sweep(p, k0):
    rep = sweep(p, k0)
    assert rep.ok, rep.discrepancies[:3]
    assert bool(rep.condition3_changes) == (p == k0 == 2)


def test_split_excluded_convention_breaks_equivalence():
    rep = sweep(3, 3, split_in_v=False)
    assert len(rep.discrepancies) == 2


@pytest.mark.parametrize("p", [3, 5])
def test_distinct_k0_give_disjoint_reducible_classes(p):
    seen = {}
    for k0 in range(2, p + 1):
        hits = {(t.e1, t.e2) for t in enumerate_types(p)
                if isinstance(t, Reducible) and t.ext == IN_V and has_lift_pw1(t, k0, p)}
        for other, prev in seen.items():
            assert not (hits & prev), (k0, other)
        seen[k0] = hits


@given(st.integers(0, 623), st.sampled_from([2, 3, 4, 5]))
def test_conjugation_invariance(c, k0):
    p = 5
    if frobenius_conjugate(c, p) == c:
        return
    a, b = Irreducible(c, p), Irreducible(c, p).conjugate()
    assert a == b and hash(a) == hash(b)
    assert has_lift_pw1(a, k0, p) == has_lift_pw1(b, k0, p)
    fam = FAMILY_A2 if k0 == 2 else FAMILY_A
    for f in (fam, FAMILY_B):
        assert has_lift_family(a, f, k0, p) == has_lift_family(b, f, k0, p)
