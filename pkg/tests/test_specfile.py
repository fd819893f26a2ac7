import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from boxlab.boolfn import AnfForm, BooleanFunction, anf_decompose, from_anf
from boxlab.distill import PlanError, make_plan
from boxlab.serialize import decimal, dump_plan, exact, load_plan, plan_to_dict
from boxlab.specfile import BoxSpec, SpecError, format_spec, parse_spec

FOUR_PARTY = AnfForm.from_terms(4, [(1, 2, 3, 4), (1, 2, 3), (3, 4)])


def test_parse_example():
    spec = parse_spec("parties: 4\nf: x1*x2*x3*x4 + x1*x2*x3 + x3*x4")
    assert spec.parties == 4 and spec.anf == FOUR_PARTY and spec.epsilon == 1


def test_gf2_cancellation():
    assert parse_spec("parties: 2\nf: x1 + x1").anf.monomials == frozenset()
    assert parse_spec("parties: 2\nf: x1*0 + x2*1").anf == AnfForm.from_terms(2, [(2,)])
    assert parse_spec("parties: 2\nf: x1*x1").anf == AnfForm.from_terms(2, [(1,)])


def test_whitespace_and_comments():
    spec = parse_spec("  # header\nparties:3\n\nf:x1*x2+   x3 # tail\nepsilon: 2/6\n")
    assert spec.anf == AnfForm.from_terms(3, [(1, 2), (3,)])
    assert spec.epsilon == Fraction(1, 3)


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("parties: 2\nf: x5", 2, 4),
        ("parties: 2\nf: x1 +", 2, 8),
        ("parties: 2\nf: x1 x2", 2, 7),
        ("parties: 2\nf: x1 ^ x2", 2, 7),
        ("parties: 2\nf: 2", 2, 4),
        ("parties: 2\nf: x1\nepsilon: 1/0", 3, 9),
        ("parties: 2\nf: x1\nepsilon: -1/2", 3, 9),
        ("parties: 0\nf: 1", 1, 9),
        ("parties: two\nf: 1", 1, 9),
        ("f x1", 1, 1),
    ],
)
def test_errors_carry_position(text, line, column):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_missing_key():
    with pytest.raises(SpecError, match="missing"):
        parse_spec("f: x1")


masks4 = st.frozensets(st.integers(0, 15))


@settings(max_examples=100)
@given(masks4, st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_format_parse_round_trip(mons, eps):
    spec = BoxSpec(4, AnfForm(4, mons), eps)
    assert parse_spec(format_spec(spec)) == spec
    assert format_spec(parse_spec(format_spec(spec))) == format_spec(spec)


def test_plan_json_round_trip():
    for anf in [FOUR_PARTY, AnfForm.from_terms(3, [(1, 2), (2, 3), (1,), ()])]:
        plan = make_plan(from_anf(anf))
        text = dump_plan(plan)
        again = load_plan(text)
        assert again.function == plan.function
        assert plan_to_dict(again) == plan_to_dict(plan)
        assert dump_plan(again) == text


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda d: d.update(version="x"), "version"),
        (lambda d: d.pop("root"), "malformed"),
        (lambda d: d["root"].update(type="Teleport"), "unknown step"),
        (lambda d: d["root"]["children"].pop(), "cover"),
    ],
)
def test_plan_json_errors(mutate, message):
    d = plan_to_dict(make_plan(from_anf(FOUR_PARTY)))
    mutate(d)
    with pytest.raises(PlanError, match=message):
        load_plan(json.dumps(d))


def test_number_rendering():
    assert exact(Fraction(29, 200)) == "29/200"
    assert exact(Fraction(3)) == "3/1"
    assert decimal(Fraction(29, 200)) == "0.145"
    assert decimal(Fraction(1, 3)) == "0.333333333333"
    assert decimal(Fraction(2, 3)) == "0.666666666667"
    assert decimal(Fraction(1, 10 ** 20)) == "1e-20"
    assert exact(None) == decimal(None) == ""
