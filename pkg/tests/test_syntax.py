import pytest
from hypothesis import given, settings

from blc.parse import parse
from blc.syntax import (
    EVar,
    ELam,
    SortMismatch,
    alpha_eq,
    free_vars,
    occurs_free,
    size,
    subst,
)

from strategies import blc_objects


def e(text, sort="expr"):
    return parse(text, sort=sort)


def test_alpha_renaming_of_binders():
    assert alpha_eq(e("\\x:o. x"), e("\\y:o. y"))
    assert alpha_eq(e("mu 'a:o. < #c:o | 'a >"), e("mu 'b:o. < #c:o | 'b >"))


def test_alpha_respects_types_and_free_names():
    assert not alpha_eq(e("\\x:o. x"), e("\\x:p. x"))
    assert not alpha_eq(e("\\x:o. y"), e("\\x:o. z"))


def test_namespaces_are_separate():
    d = e("mu 'x:o. < x | 'x >")
    assert occurs_free(d, "e", "x")
    assert not occurs_free(d, "c", "'x")


def test_substitution_avoids_capture():
    target = e("\\y:o. x")
    out = subst(target, "x", e("y"))
    assert isinstance(out, ELam)
    assert out.var != "y"
    assert isinstance(out.body, EVar) and out.body.name == "y"


def test_substitution_rejects_wrong_sort():
    with pytest.raises(SortMismatch):
        subst(e("x"), "x", e("@o", sort="cont"))


def test_substitution_of_continuation_variable():
    out = subst(e("mu 'b:o. < #c:o | 'a >"), "'a", e("@o", sort="cont"))
    assert alpha_eq(out, e("mu 'b:o. < #c:o | @o >"))


@settings(max_examples=60, deadline=None)
@given(blc_objects())
def test_alpha_eq_is_reflexive(d):
    assert alpha_eq(d, d)
    assert size(d) >= 1


@settings(max_examples=60, deadline=None)
@given(blc_objects())
def test_generated_objects_are_closed(d):
    assert free_vars(d) == (set(), set())
