import random

import pytest
from hypothesis import given, settings

from blc.gen import BlcGen, DcGen
from blc.parse import parse, parse_formula
from blc.syntax import Base
from blc.translate import dc_env
from blc.typecheck import (
    EMPTY_ENV,
    SUBST_CASES,
    NameCollision,
    PremiseMismatch,
    SubstInstance,
    TypeCheckError,
    TypeEnv,
    UnboundVariable,
    blc_synth,
    check_substitution_lemma,
    check_weakening,
    dc_synth,
)

from strategies import blc_objects, dc_objects, seeds

O = Base("o")


@pytest.mark.parametrize(
    "text, sort, kind, ty",
    [
        ("\\x:o. x", "expr", "plus", "o -> o"),
        ("\\'a:o. @p", "cont", "minus", "p <- o"),
        ("(\\'a:o. @p) @o", "cont", "minus", "p"),
        ("mu 'k:o. < #c:o | 'k >", "expr", "plus", "o"),
        ("mu x:o. < x | @o >", "cont", "minus", "o"),
        ("(#c:o, #d:p)", "expr", "plus", "o /\\ p"),
        ("< #c:o | @o >", "cmd", "zero", None),
    ],
)
def test_judgments(text, sort, kind, ty):
    j = blc_synth(EMPTY_ENV, parse(text, sort=sort))
    assert j.kind == kind
    assert j.ty == (None if ty is None else parse_formula(ty))


def test_application_of_non_function():
    with pytest.raises(TypeCheckError):
        blc_synth(EMPTY_ENV, parse("#c:o #c:o"))


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        blc_synth(EMPTY_ENV, parse("x"))
    assert blc_synth(TypeEnv.of({"x": O}), parse("x")).ty == O


def test_cut_type_mismatch():
    with pytest.raises(TypeCheckError):
        blc_synth(EMPTY_ENV, parse("< #c:o | @p >", sort="cmd"))


def test_type_errors_are_type_errors():
    assert issubclass(TypeCheckError, TypeError)


@settings(max_examples=100, deadline=None)
@given(blc_objects())
def test_uniqueness(d):
    assert blc_synth(EMPTY_ENV, d) == blc_synth(EMPTY_ENV, d)


@settings(max_examples=100, deadline=None)
@given(blc_objects())
def test_weakening(d):
    j = blc_synth(EMPTY_ENV, d)
    j2 = check_weakening(j, ("e", "zfresh", O))
    assert (j2.kind, j2.ty) == (j.kind, j.ty)


def test_weakening_rejects_collisions():
    j = blc_synth(EMPTY_ENV, parse("\\x:o. x"))
    with pytest.raises(NameCollision):
        check_weakening(j, ("e", "x", O))


@settings(max_examples=100, deadline=None)
@given(dc_objects("arrow"))
def test_dc_arrow_objects_typecheck(o):
    dc_synth(dc_env(o), o, "arrow")


@settings(max_examples=100, deadline=None)
@given(dc_objects("full"))
def test_dc_full_objects_typecheck(o):
    dc_synth(dc_env(o), o, "full")


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_substitution_lemma_all_cases(seed):
    g = BlcGen(random.Random(seed))
    for case, (ns, tsort, psort) in SUBST_CASES.items():
        ty = g.ty(1)
        var = g.name(ns)
        env = {(ns, var): ty}
        target = {"expr": g.expr, "cont": g.cont}.get(tsort)
        target = g.cmd(env) if tsort == "cmd" else target(g.ty(1), env)
        payload = g.expr(ty) if psort == "expr" else g.cont(ty)
        assert check_substitution_lemma(case, SubstInstance(EMPTY_ENV, var, ty, target, payload))


def test_substitution_lemma_checks_premises():
    inst = SubstInstance(EMPTY_ENV, "x", O, parse("x"), parse("#c:p"))
    with pytest.raises(PremiseMismatch):
        check_substitution_lemma(1, inst)
    with pytest.raises(PremiseMismatch):
        check_substitution_lemma(7, inst)
