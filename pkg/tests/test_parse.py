import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blc import jsonio
from blc.parse import ParseError, SortError, parse, parse_formula, show, show_type
from blc.syntax import And, Base, Gets, Imp, Neg, Or, alpha_eq

from strategies import blc_objects, dc_objects, seeds

types = st.recursive(
    st.sampled_from([Base("o"), Base("p")]),
    lambda inner: st.one_of(
        st.builds(Imp, inner, inner),
        st.builds(Gets, inner, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Neg, inner),
    ),
    max_leaves=8,
)


@settings(max_examples=150, deadline=None)
@given(types)
def test_type_round_trip(t):
    assert parse_formula(show_type(t)) == t


@pytest.mark.parametrize(
    "text, expected",
    [
        ("o -> p -> o", Imp(Base("o"), Imp(Base("p"), Base("o")))),
        ("~o -> p", Imp(Neg(Base("o")), Base("p"))),
        ("(o <- p) /\\ p", And(Gets(Base("o"), Base("p")), Base("p"))),
    ],
)
def test_type_precedence(text, expected):
    assert parse_formula(text) == expected


def test_mixed_connectives_need_parentheses():
    with pytest.raises(ParseError):
        parse_formula("o /\\ p \\/ o")


@settings(max_examples=120, deadline=None)
@given(blc_objects())
def test_blc_round_trip(d):
    assert alpha_eq(parse(show(d), "blc", d.sort), d)


@settings(max_examples=120, deadline=None)
@given(dc_objects(dialect="arrow"))
def test_dc_arrow_round_trip(o):
    assert alpha_eq(parse(show(o), "dc-arrow", o.sort), o)


@settings(max_examples=120, deadline=None)
@given(dc_objects(dialect="full"))
def test_dc_full_round_trip(o):
    assert alpha_eq(parse(show(o), "dc-full", o.sort), o)


@settings(max_examples=80, deadline=None)
@given(st.one_of(blc_objects(), dc_objects()))
def test_json_round_trip(d):
    doc = jsonio.to_json(d)
    assert alpha_eq(jsonio.from_json(doc), d)


def test_examples_print_canonically():
    assert show(parse("\\x:o. x")) == "\\x:o. x"
    assert show(parse("< #c:o | @o >", sort="cmd")) == "< #c:o | @o >"


def test_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse("\\x:o. ")
    assert str(exc.value).startswith("1:7")


def test_wrong_sort_is_rejected():
    with pytest.raises(ParseError):
        parse("@o", sort="expr")
    assert issubclass(SortError, ParseError)


def test_arrow_dialect_has_no_negation():
    with pytest.raises(ParseError):
        parse("not[blt$o]", "dc-arrow", "term")
    parse("not[blt$o]", "dc-full", "term")


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_garbage_raises_parse_error_only(seed):
    import random

    r = random.Random(seed)
    text = "".join(r.choice("\\x:o.()<|>@#'mu fst") for _ in range(r.randint(0, 20)))
    try:
        parse(text)
    except ParseError:
        pass
