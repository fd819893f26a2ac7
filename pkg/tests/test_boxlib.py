from fractions import Fraction
from itertools import product

import pytest

from boxlab.boolfn import AnfForm, BooleanFunction, from_anf
from boxlab.boxcore import is_non_signaling, l1_distance, parity, validate_box
from boxlab.boxlib import (
    closest_local_fc_box,
    correlated_noise_box,
    full_correlation_box,
    n_pr_box,
    nk_pr_box,
    noisy_box,
)
from boxlab.boxcore import mix
from boxlab.wiring import xor_combine

F = Fraction
FOUR_PARTY = from_anf(AnfForm.from_terms(4, [(1, 2, 3, 4), (1, 2, 3), (3, 4)]))


def test_pr_box_entries():
    pr = full_correlation_box(BooleanFunction.conjunction(2))
    assert pr(0b00, 0b00) == F(1, 2)
    assert pr(0b01, 0b11) == F(1, 2) and pr(0b00, 0b11) == 0


def test_zero_function_is_noise_box():
    for n in (1, 2, 3):
        assert full_correlation_box(BooleanFunction.constant(n)) == correlated_noise_box(n)


def test_named_families():
    assert n_pr_box(2) == nk_pr_box(2, 2)
    b = nk_pr_box(3, 2)
    for x, a in product(range(8), repeat=2):
        want = F(1, 4) if parity(a) == (x & 1) & (x >> 1 & 1) else 0
        assert b(a, x) == want
    pc = correlated_noise_box(2)
    for x in range(4):
        assert {a for a, _ in pc.support(x)} == {0b00, 0b11}


@pytest.mark.parametrize("n,k", [(0, 0), (3, 0), (2, 3)])
def test_nk_range(n, k):
    with pytest.raises(ValueError):
        nk_pr_box(n, k)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_fc_box_is_valid_and_non_signaling(n):
    for idx in range(1 << (1 << n)):
        b = full_correlation_box(BooleanFunction.from_index(n, idx))
        assert validate_box(b) is None
        assert is_non_signaling(b)


def test_noisy_box_matches_mix():
    f = BooleanFunction.conjunction(3)
    eps = F(3, 10)
    assert noisy_box(f, eps) == mix(full_correlation_box(f), correlated_noise_box(3), eps)


def test_closest_local_examples():
    aff = from_anf(AnfForm.from_terms(2, [(1,), ()]))
    b, d = closest_local_fc_box(aff)
    assert b == full_correlation_box(aff) and d == 0
    b, d = closest_local_fc_box(BooleanFunction.conjunction(2))
    assert b == correlated_noise_box(2) and d == 2
    b, d = closest_local_fc_box(FOUR_PARTY)
    assert d == l1_distance(b, full_correlation_box(FOUR_PARTY)) == 6


@pytest.mark.parametrize("n", [1, 2, 3])
def test_xor_combine_matches_xor_of_functions(n):
    fs = [BooleanFunction.from_index(n, i) for i in range(0, 1 << (1 << n), 1 if n < 3 else 37)]
    for f in fs:
        for g in fs[:6]:
            assert xor_combine(full_correlation_box(f), full_correlation_box(g)) == full_correlation_box(f ^ g)
