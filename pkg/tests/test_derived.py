import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blc.derived import (
    cont_to_fn,
    expand_sugar,
    expand_type,
    fn_to_cont,
    mk_case,
    mk_inl,
    mk_inr,
)
from blc.engine import eq_dcv, eq_v
from blc.gen import BlcGen, DcGen
from blc.harness import SUGAR_LAWS, _sugar_instance
from blc.parse import parse, parse_formula
from blc.syntax import Base, CApp, Cut, EApp, Gets, Imp, Or, subst
from blc.translate import dc_env
from blc.typecheck import EMPTY_ENV, TypeCheckError, blc_synth, dc_synth

from strategies import seeds

O, P = Base("o"), Base("p")


def value_of(g, t):
    v = g.value(t)
    if v is None:
        v = g.value(O)
    return v


def test_injection_types():
    e = mk_inl(parse("#c:o"), Or(O, P))
    assert blc_synth(EMPTY_ENV, e).ty == Or(O, P)
    with pytest.raises(TypeCheckError):
        mk_inr(parse("#c:o"), Or(O, P))
    with pytest.raises(TypeCheckError):
        mk_inl(parse("#c:o"), O)


def test_case_on_constant():
    scrut = mk_inr(parse("#d:p"), Or(O, P))
    e = mk_case(scrut, "x", parse("#c:o"), "y", parse("#d:o"), O)
    assert eq_v(e, parse("#d:o")).verdict == "EQUAL"
    assert eq_v(e, parse("#c:o")).verdict == "DISTINCT"


def test_case_branch_type_mismatch():
    scrut = mk_inl(parse("#c:o"), Or(O, P))
    with pytest.raises(TypeCheckError):
        mk_case(scrut, "x", parse("#c:o"), "y", parse("#d:p"), O)


@settings(max_examples=60, deadline=None)
@given(seeds, st.booleans())
def test_case_law(seed, left):
    g = BlcGen(random.Random(seed))
    tv = g.ty(1)
    v = g.value(tv)
    if v is None:
        tv, v = O, g.value(O)
    other, res = g.ty(1), g.ty(1)
    sum_ty = Or(tv, other) if left else Or(other, tv)
    e0 = g.expr(res, {("e", "x0"): sum_ty.left})
    e1 = g.expr(res, {("e", "x1"): sum_ty.right})
    c = g.cont(res)
    inj = (mk_inl if left else mk_inr)(v, sum_ty)
    lhs = Cut(mk_case(inj, "x0", e0, "x1", e1, res), c)
    rhs = Cut(subst(e0 if left else e1, "x0" if left else "x1", v), c)
    assert eq_v(lhs, rhs).verdict == "EQUAL"


def test_encodings_have_mirrored_types():
    f = parse("\\x:o. #d:p")
    assert blc_synth(EMPTY_ENV, fn_to_cont(f)).ty == Gets(O, P)
    k = parse("\\'a:p. @o", sort="cont")
    assert blc_synth(EMPTY_ENV, cont_to_fn(k)).ty == Imp(O, P)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_mutual_laws(seed):
    g = BlcGen(random.Random(seed))
    a0, a1 = O, g.ty(1)
    v = value_of(g, a0)
    c0, c1 = g.cont(Gets(a0, a1)), g.cont(a1)
    e = g.expr(Imp(a0, a1))
    assert eq_v(Cut(EApp(cont_to_fn(c0), v), c1), Cut(v, CApp(c0, c1))).verdict == "EQUAL"
    assert eq_v(Cut(v, CApp(fn_to_cont(e), c1)), Cut(EApp(e, v), c1)).verdict == "EQUAL"
    assert eq_v(Cut(EApp(cont_to_fn(fn_to_cont(e)), v), c1), Cut(EApp(e, v), c1)).verdict == "EQUAL"
    assert eq_v(Cut(v, CApp(fn_to_cont(cont_to_fn(c0)), c1)), Cut(v, CApp(c0, c1))).verdict == "EQUAL"


def test_expand_type():
    assert expand_type(parse_formula("o -> p")) == parse_formula("~(o /\\ ~p)")
    assert expand_type(parse_formula("o <- p")) == parse_formula("o /\\ ~p")


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_expansion_preserves_typing(seed):
    h = DcGen(random.Random(seed), dialect="arrow")
    o = h.any(h.rng.choice(("term", "coterm", "stmt")))
    j = dc_synth(dc_env(o), o, "arrow")
    x = expand_sugar(o)
    j2 = dc_synth(dc_env(x), x, "full")
    assert j2.ty == (None if j.ty is None else expand_type(j.ty))


@pytest.mark.parametrize("law", SUGAR_LAWS)
@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_sugar_laws(law, seed):
    lhs, rhs = _sugar_instance(DcGen(random.Random(seed), dialect="arrow"), law)
    assert eq_dcv(expand_sugar(lhs), expand_sugar(rhs), dialect="full").verdict == "EQUAL"
