from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from boxlab.boolfn import (
    AnfForm,
    BooleanFunction,
    anf_decompose,
    best_affine_approx,
    dependent_variable_count,
    empty_overlap_partition,
    format_anf,
    from_anf,
    monomial_mask,
    nonlocal_term_set,
    walsh_spectrum,
    walsh_spectrum_naive,
)

from oracles import anf_by_evaluation, min_affine_distance

FOUR_PARTY = AnfForm.from_terms(4, [(1, 2, 3, 4), (1, 2, 3), (3, 4)])


def fn(n, idx):
    return BooleanFunction.from_index(n, idx)


def masks(*terms):
    return {monomial_mask(t) for t in terms}


def test_anf_examples():
    assert anf_decompose(BooleanFunction.constant(3)).monomials == frozenset()
    for n in (1, 2, 3, 4):
        assert anf_decompose(BooleanFunction.conjunction(n)).monomials == masks(range(1, n + 1))
    f = BooleanFunction.from_callable(4, lambda x: ((x & 15) == 15) ^ ((x & 7) == 7) ^ ((x & 12) == 12))
    assert anf_decompose(f) == FOUR_PARTY


@pytest.mark.parametrize("n", [1, 2, 3])
def test_anf_round_trip_exhaustive(n):
    for idx in range(1 << (1 << n)):
        f = fn(n, idx)
        a = anf_decompose(f)
        assert set(a.monomials) == anf_by_evaluation(f)
        assert from_anf(a) == f


@settings(max_examples=200)
@given(st.integers(0, (1 << 16) - 1))
def test_anf_round_trip_n4(idx):
    f = fn(4, idx)
    assert from_anf(anf_decompose(f)) == f
    assert set(anf_decompose(f).monomials) == anf_by_evaluation(f)


@settings(max_examples=100)
@given(st.frozensets(st.integers(0, 15)))
def test_anf_is_an_involution(mons):
    a = AnfForm(4, mons)
    assert anf_decompose(from_anf(a)) == a


def test_nonlocal_terms():
    assert nonlocal_term_set(AnfForm.from_terms(2, [(1,), ()])) == frozenset()
    assert nonlocal_term_set(FOUR_PARTY) == masks((1, 2, 3, 4), (1, 2, 3), (3, 4))
    assert nonlocal_term_set(AnfForm.from_terms(2, [(1, 2), (2,)])) == masks((1, 2))


def test_empty_overlap_partition():
    assert empty_overlap_partition(masks((1, 2), (3, 4))).block_count == 2
    assert empty_overlap_partition(nonlocal_term_set(FOUR_PARTY)).block_count == 1
    assert empty_overlap_partition([]).block_count == 0


def test_partition_chain_through_shared_variable():
    # {1,2} and {3,4} only meet through {2,3}
    part = empty_overlap_partition(masks((1, 2), (3, 4), (2, 3)))
    assert part.block_count == 1
    assert part.block_variables(0) == 0b1111


@settings(max_examples=60)
@given(st.frozensets(st.integers(0, 15).filter(lambda m: bin(m).count("1") >= 2), max_size=5), st.permutations([1, 2, 3, 4]))
def test_block_count_is_relabelling_invariant(terms, perm):
    def relabel(m):
        return sum(1 << (perm[i] - 1) for i in range(4) if m >> i & 1)

    before = empty_overlap_partition(terms).block_count
    after = empty_overlap_partition({relabel(t) for t in terms}).block_count
    assert before == after
    if len(terms) == 1:
        assert before == 1


def test_dependent_variable_count():
    assert dependent_variable_count(BooleanFunction.constant(3, 1)) == 0
    assert dependent_variable_count(from_anf(FOUR_PARTY)) == 4
    assert dependent_variable_count(BooleanFunction.conjunction(3, [1, 2])) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_walsh_fast_matches_naive(n):
    step = 1 if n <= 3 else 97
    for idx in range(0, 1 << (1 << n), step):
        f = fn(n, idx)
        assert walsh_spectrum(f) == walsh_spectrum_naive(f)


def test_best_affine_examples():
    aff = from_anf(AnfForm.from_terms(3, [(1,), (3,), ()]))
    r = best_affine_approx(aff)
    assert r.function == aff and r.distance == 0
    and2 = BooleanFunction.conjunction(2)
    assert walsh_spectrum(and2) == [2, 2, 2, -2]
    r = best_affine_approx(and2)
    assert r.function == BooleanFunction.constant(2) and r.distance == 1
    r = best_affine_approx(from_anf(FOUR_PARTY))
    assert r.distance == min_affine_distance(from_anf(FOUR_PARTY)) == 3
    assert format_anf(anf_decompose(r.function)) == "x3"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_best_affine_matches_exhaustive(n):
    for idx in range(1 << (1 << n)):
        f = fn(n, idx)
        r = best_affine_approx(f)
        assert r.distance == min_affine_distance(f)
        assert sum(f(x) != r.function(x) for x in range(1 << n)) == r.distance


@settings(max_examples=60, deadline=None)
@given(st.integers(0, (1 << 16) - 1))
def test_best_affine_matches_exhaustive_n4(idx):
    assert best_affine_approx(fn(4, idx)).distance == min_affine_distance(fn(4, idx))


def test_tie_break_smallest_mask_then_zero_constant():
    # AND2 is at distance 1 from 0, x1, x2 and 1+x1+x2; mask 0 with constant 0 wins
    r = best_affine_approx(BooleanFunction.conjunction(2))
    assert (r.mask, r.constant) == (0, 0)


def test_format_anf():
    assert format_anf(FOUR_PARTY) == "x1*x2*x3*x4 + x1*x2*x3 + x3*x4"
    assert format_anf(AnfForm(2, frozenset())) == "0"
    assert format_anf(AnfForm(2, frozenset({0}))) == "1"


def test_from_terms_cancels_repeats():
    assert AnfForm.from_terms(2, [(1,), (1,)]).monomials == frozenset()


def test_arity_limit():
    with pytest.raises(ValueError):
        BooleanFunction.constant(17)
