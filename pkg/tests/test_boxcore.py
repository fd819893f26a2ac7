from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from boxlab.boolfn import BooleanFunction
from boxlab.boxcore import (
    Box,
    PartyAssignment,
    bit,
    bits_of,
    is_non_signaling,
    l1_distance,
    mix,
    success_probability,
    validate_box,
    word_from_bits,
)
from boxlab.boxlib import correlated_noise_box, full_correlation_box, n_pr_box

F = Fraction


def test_bit_convention():
    # bit 0 of the word is port 1
    assert bit(0b01, 1) == 1 and bit(0b01, 2) == 0
    assert word_from_bits([1, 0, 1]) == 0b101
    assert bits_of(0b110, 3) == (0, 1, 1)


def test_pr_box_is_valid():
    assert validate_box(n_pr_box(2)) is None


def test_row_sum_violation_reported():
    table = [list(r) for r in n_pr_box(2).table]
    table[0b01] = [F(1, 4), F(1, 4), F(1, 4), F(0)]
    v = validate_box(Box(2, tuple(tuple(r) for r in table)))
    assert v.kind == "row_sum" and v.x == 0b01 and v.value == F(3, 4)


def test_negative_entry_reported():
    table = [list(r) for r in n_pr_box(2).table]
    table[0] = [F(3, 4), F(-1, 4), F(0), F(1, 2)]
    v = validate_box(Box(2, tuple(tuple(r) for r in table)))
    assert v.kind == "negative" and (v.x, v.a) == (0, 1) and v.value == F(-1, 4)


def test_shape_and_limit_checked():
    with pytest.raises(ValueError):
        Box(2, ((F(1),),))
    with pytest.raises(ValueError):
        Box.deterministic(9, lambda x: 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_n_pr_non_signaling(n):
    assert is_non_signaling(n_pr_box(n))


def test_signaling_witness():
    b = Box.deterministic(2, lambda x: bit(x, 2))  # a1 := x2
    rep = is_non_signaling(b)
    assert not rep
    assert rep.witness.ports == (1,)
    assert rep.witness.marginal1 != rep.witness.marginal2


def test_marginal_key_order():
    b = Box.deterministic(2, lambda x: 0b01)
    assert b.marginal([2, 1], 0) == {0b10: F(1)}


def test_l1_examples():
    pr = n_pr_box(2)
    pc = correlated_noise_box(2)
    assert l1_distance(pr, pr) == 0
    assert l1_distance(pr, pc) == 2
    eps = F(3, 7)
    assert l1_distance(mix(pr, pc, eps), pc) == eps * 2
    with pytest.raises(ValueError):
        l1_distance(pr, n_pr_box(3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_success_probability_examples(n):
    f = BooleanFunction.conjunction(n)
    assert success_probability(n_pr_box(n), f) == 1
    floor = F((1 << n) - 1, 1 << n)
    assert success_probability(correlated_noise_box(n), f) == floor
    eps = F(2, 5)
    noisy = mix(n_pr_box(n), correlated_noise_box(n), eps)
    assert success_probability(noisy, f) == eps + (1 - eps) * floor


def test_mix_examples():
    pr, pc = n_pr_box(2), correlated_noise_box(2)
    assert mix(pr, pc, 1) == pr
    assert mix(pr, pc, 0) == pc
    assert mix(pr, pc, F(1, 2))(0b00, 0b11) == F(1, 4)
    with pytest.raises(ValueError):
        mix(pr, pc, F(3, 2))


def test_party_assignment():
    pa = PartyAssignment.from_mapping({1: 1, 2: 2, 3: 2})
    assert pa.party_count == 2 and pa.ports_of(2) == (2, 3) and pa.owner(1) == 1
    with pytest.raises(ValueError):
        PartyAssignment((1, 3), 2)


tables = st.integers(0, 255).map(lambda i: full_correlation_box(BooleanFunction.from_index(3, i)))
weights = st.fractions(min_value=0, max_value=1, max_denominator=20)


@settings(max_examples=40, deadline=None)
@given(tables, tables, tables)
def test_l1_is_a_metric(p, q, r):
    assert l1_distance(p, q) == l1_distance(q, p)
    assert (l1_distance(p, q) == 0) == (p == q)
    assert l1_distance(p, r) <= l1_distance(p, q) + l1_distance(q, r)


@settings(max_examples=40, deadline=None)
@given(tables, tables, weights, st.integers(0, 255))
def test_success_probability_is_linear(p, q, eps, idx):
    f = BooleanFunction.from_index(3, idx)
    lhs = success_probability(mix(p, q, eps), f)
    assert lhs == eps * success_probability(p, f) + (1 - eps) * success_probability(q, f)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1))))
def test_fc_single_port_marginals_uniform(case):
    # with one port the box is deterministic, so n starts at 2
    n, idx = case
    b = full_correlation_box(BooleanFunction.from_index(n, idx))
    for x in range(b.size):
        for q in range(1, n + 1):
            assert b.marginal([q], x) == {0: F(1, 2), 1: F(1, 2)}
