import itertools

import pytest
from hypothesis import given, strategies as st

from hilbmodp.errors import ContractViolation
from hilbmodp.serre_oracle import IN_V, Reducible
from hilbmodp.shifter import (HA0, HA1, THETA0, THETA1, VIA_HA, VIA_THETA_DIVIDED, WeightSet,
                              kmin_bound, parse_move, propagate, pwt1_transfer, twist_move)
from hilbmodp.weightlat import Weight, in_min_cone, leq_hasse


def test_propagate_examples():
    ws = propagate(WeightSet(3, [Weight((3, 1), (0, -1))]), [HA0], 1)
    assert Weight((2, 4), (0, -1)) in ws and ws.tag(Weight((2, 4), (0, -1))) == VIA_HA
    ws = propagate(WeightSet(3, [Weight((2, 1))]), [HA0, HA1], 2)
    assert Weight((4, 3)) in ws
    start = WeightSet(3, [Weight((2, 1))])
    assert propagate(start, [HA0, THETA1], 0) == start


def test_theta_division_tag():
    ws = propagate(WeightSet(3, [Weight((3, 1))]), [THETA0], 1)
    assert ws.tag(Weight((5, 1), (-1, 0))) == VIA_THETA_DIVIDED


def test_twist_move():
    ws = propagate(WeightSet(3, [Weight((3, 1), (0, -1))]), [twist_move((0, 2))], 1)
    assert Weight((3, 1), (0, 1)) in ws


def test_parse_move():
    assert parse_move("Ha0") == HA0 and parse_move("theta1") == THETA1
    assert parse_move("twist:0,2") == twist_move((0, 2))
    for bad in ("Ha2", "twist:1", "spin"):
        with pytest.raises(ContractViolation):
            parse_move(bad)


def test_kmin_examples():
    pair = WeightSet(3, [Weight((3, 1), (0, -1)), Weight((2, 4), (0, -1))])
    assert kmin_bound(pair, (0, -1)).bound == (3, 1)
    assert kmin_bound(WeightSet(3, [Weight((2, 2))]), (0, 0)).bound == (2, 2)
    anti = kmin_bound(WeightSet(3, [Weight((3, 1)), Weight((1, 3))]), (0, 0))
    assert anti.status == "no bound" and set(anti.minimal) == {(3, 1), (1, 3)}
    assert kmin_bound(pair, (5, 5)).status == "no bound"


def test_transfer_examples():
    sigma = Reducible(0, 6, IN_V, 3)
    good = pwt1_transfer(WeightSet(3, [Weight((3, 1))]), sigma, 3, 3)
    assert good.consistent and good.closure_has == {"pw1": True, "A": True, "B": True}
    missing = pwt1_transfer(WeightSet(3, [Weight((2, 4))]), sigma, 3, 3)
    assert not missing.consistent and not missing.closure_has["B"]
    assert pwt1_transfer(WeightSet(3, []), sigma, 3, 3).vacuous
    no_lift = pwt1_transfer(WeightSet(3, [Weight((3, 1))]), Reducible(1, 6, IN_V, 3), 3, 3)
    assert not no_lift.consistent
    with pytest.raises(ContractViolation):
        pwt1_transfer(WeightSet(3, []), sigma, 4, 3)


def test_forward_closure_contains_families():
    ws = propagate(WeightSet(3, [Weight((3, 1))]), [HA0, HA1, THETA0, THETA1], 2)
    assert Weight((2, 4)) in ws and Weight((4, 4), (-1, 0)) in ws


moves = [HA0, HA1, THETA0, THETA1, twist_move((1, 0))]
weights = st.builds(Weight, st.tuples(st.integers(1, 6), st.integers(1, 6)),
                    st.tuples(st.integers(-1, 1), st.integers(-1, 1)))


@given(st.lists(weights, min_size=1, max_size=3), st.permutations(moves), st.integers(0, 3))
def test_closure_independent_of_move_order(seeds, order, depth):
    a = propagate(WeightSet(3, seeds), order, depth)
    b = propagate(WeightSet(3, seeds), moves, depth)
    assert a == b
    assert all(w in a for w in seeds)


@given(st.lists(weights, min_size=1, max_size=3), st.integers(0, 3))
def test_closure_is_monotone_in_depth(seeds, depth):
    small = propagate(WeightSet(3, seeds), moves, depth)
    big = propagate(WeightSet(3, seeds), moves, depth + 1)
    assert set(small) <= set(big)


def test_hasse_moves_stay_above_seed():
    for k in itertools.product(range(1, 6), repeat=2):
        if not in_min_cone(k, 3, strict_positive=True):
            continue
        ws = propagate(WeightSet(3, [Weight(k)]), [HA0, HA1], 3)
        assert all(leq_hasse(k, w.k, 3) for w in ws)


@given(st.lists(st.tuples(st.integers(-4, 8), st.integers(-4, 8)), min_size=1, max_size=6))
def test_kmin_below_everything(ks):
    ws = WeightSet(3, [Weight(k) for k in ks])
    kb = kmin_bound(ws, (0, 0))
    if kb.bound is not None:
        assert all(leq_hasse(kb.bound, k, 3) for k in ks)
    for m in kb.minimal:
        assert not any(o != m and leq_hasse(o, m, 3) for o in ks)
