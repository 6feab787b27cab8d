from itertools import product

import pytest
from hypothesis import given, strategies as st

from hilbmodp.errors import ContractViolation
from hilbmodp.ffield import GF, least_irreducible


def _poly_mulmod(a, b, mod, p):
    """Schoolbook product of little-endian coefficient lists modulo a monic polynomial."""
    k = len(mod) - 1
    prod = [0] * (2 * k)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    for i in range(2 * k - 1, k - 1, -1):
        c = prod[i] % p
        for j in range(k):
            prod[i - k + j] -= c * mod[j]
    return [c % p for c in prod[:k]]


def _has_factor_brute(f, p, max_deg):
    """Trial division by every monic polynomial of degree <= max_deg."""
    def rem(num, den):
        num = num[:]
        while len(num) >= len(den):
            c = num[-1] % p
            shift = len(num) - len(den)
            for i, dc in enumerate(den):
                num[shift + i] -= c * dc
            num = num[:-1]
        return [c % p for c in num]
    for deg in range(1, max_deg + 1):
        for low in product(range(p), repeat=deg):
            if not any(rem(list(f), list(low) + [1])):
                return True
    return False


@pytest.mark.parametrize("p,k,expected", [
    (3, 2, (1, 0, 1)),
    (3, 4, (1, 0, 1, 1, 1)),
    (2, 2, (1, 1, 1)),
    (5, 2, (1, 1, 1)),
])
def test_least_irreducible_frozen(p, k, expected):
    assert tuple(least_irreducible(p, k)) == expected


@pytest.mark.parametrize("p,k", [(3, 2), (3, 4), (2, 2), (2, 4), (5, 2), (2, 6)])
def test_least_irreducible_has_no_factor_and_is_least(p, k):
    f = tuple(least_irreducible(p, k))
    assert not _has_factor_brute(f, p, k // 2)
    for c0 in range(1, p):
        for rest in product(range(p), repeat=k - 1):
            cand = (c0, *rest, 1)
            if cand == f:
                return
            assert _has_factor_brute(cand, p, k // 2)


@pytest.mark.parametrize("p,k", [(3, 2), (2, 3), (5, 2), (3, 20), (7, 12), (3, 84)])
def test_multiplication_matches_schoolbook(p, k):
    import random
    E = GF(p, k)
    rng = random.Random(p * 1000 + k)
    for _ in range(30):
        a = [rng.randrange(p) for _ in range(k)]
        b = [rng.randrange(p) for _ in range(k)]
        x = E.from_code(E.from_digits(a))
        y = E.from_code(E.from_digits(b))
        assert E.digits((x * y).v) == _poly_mulmod(a, b, list(E.modulus), p)


@pytest.mark.parametrize("p,k", [(3, 2), (2, 4), (5, 2)])
def test_small_field_is_a_field(p, k):
    E = GF(p, k)
    nonzero = [x for x in E.elements() if not x.is_zero()]
    assert len(nonzero) == p**k - 1
    for x in nonzero:
        assert x * x.inverse() == E.one
        assert x ** (E.q - 1) == E.one
    assert sum(1 for x in nonzero if x.order() == E.q - 1) > 0


elem9 = st.integers(min_value=0, max_value=8)


@given(elem9, elem9, elem9)
def test_f9_ring_axioms(a, b, c):
    E = GF(3, 2)
    x, y, z = E.from_code(a), E.from_code(b), E.from_code(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == E.zero
    assert (x + y).frob() == x.frob() + y.frob()
    assert (x * y).frob() == x.frob() * y.frob()


def test_hex_round_trip_and_errors():
    E = GF(3, 4)
    for x in list(E.elements())[:81]:
        assert E.from_hex(x.hex()) == x
    with pytest.raises(ValueError):
        E.from_hex("0")
    with pytest.raises(ValueError):
        E.from_hex("3000")


def test_root_of_unity():
    E = GF(3, 4)
    z = E.root_of_unity(5)
    assert z.order() == 5
    with pytest.raises(ContractViolation):
        E.root_of_unity(7)


def test_order_with_known_multiple():
    E = GF(3, 84)
    z = E.root_of_unity(29)
    assert z.order(29) == 29
    with pytest.raises(ContractViolation):
        z.order(7)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_quadratic_roots_brute(p):
    E = GF(p, 2)
    elems = list(E.elements())
    for b in elems[:: max(1, len(elems) // 7)]:
        for c in elems[:: max(1, len(elems) // 5)]:
            want = sorted((x for x in elems if x * x + b * x + c == E.zero), key=lambda t: t.v)
            got = E.quadratic_roots(b, c)
            assert sorted(got, key=lambda t: t.v) == want
