import random

import pytest
from hypothesis import given, settings

from blc.engine import (
    BLC_AXIOMS,
    DC_AXIOMS,
    FuelExhausted,
    axiom_components,
    classify,
    eq_dcv,
    eq_v,
    is_value,
    normalize,
    step,
    step_info,
)
from blc.gen import BlcGen
from blc.parse import parse, show
from blc.syntax import alpha_eq, supply_for
from blc.translate import sharp
from blc.typecheck import EMPTY_ENV, blc_synth

from strategies import blc_commands, seeds


def cmd(text):
    return parse(text, sort="cmd")


@pytest.mark.parametrize(
    "before, rule, after",
    [
        ("< (\\x:o. x) #c:o | @o >", "beta-lam", "< #c:o | @o >"),
        ("< snd (#c:o, #d:p) | @p >", "beta-snd", "< #d:p | @p >"),
        ("< fst (#c:o, #d:p) | @o >", "beta-fst", "< #c:o | @o >"),
        ("< mu 'k:o. < #c:o | 'k > | @o >", "betaL", "< #c:o | @o >"),
        ("< #c:o | mu x:o. < x | @o > >", "betaR", "< #c:o | @o >"),
        ("< #c:o | (\\'a:o. 'a) @o >", "beta-colam", "< #c:o | @o >"),
    ],
)
def test_single_steps(before, rule, after):
    r = step_info(cmd(before))
    assert r.rule == rule
    assert alpha_eq(r.next, cmd(after))


def test_zeta_lifts_non_value_argument():
    r = step_info(cmd("< (\\x:o. x) (mu 'k:o. < #c:o | 'k >) | @o >"))
    assert r.rule == "zeta"
    assert alpha_eq(r.next, cmd("< mu 'k:o. < #c:o | 'k > | mu y:o. < (\\x:o. x) y | @o > >"))


def test_final_states_are_classified():
    final, n = normalize(cmd("< (\\x:o. x) ((\\y:o. y) #c:o) | @o >"))
    assert n == 2 and show(final) == "< #c:o | @o >"
    assert step(final) is None
    assert classify(final) == "terminal"


def test_values():
    assert is_value(parse("\\x:o. x")).rule == "lam"
    assert is_value(parse("(\\x:o. x) #c:o")) is None


def test_fuel_is_enforced():
    with pytest.raises(FuelExhausted):
        normalize(cmd("< (\\x:o. x) ((\\y:o. y) #c:o) | @o >"), fuel=1)
    with pytest.raises(ValueError):
        normalize(cmd("< #c:o | @o >"), fuel=0)


@settings(max_examples=80, deadline=None)
@given(blc_commands())
def test_subject_reduction(c):
    trace = []
    final, _ = normalize(c, trace=trace)
    for s in trace:
        assert set(axiom_components(s.rule)) <= BLC_AXIOMS
    assert blc_synth(EMPTY_ENV, final).kind == "zero"


@settings(max_examples=80, deadline=None)
@given(blc_commands())
def test_runs_are_reproducible(c):
    runs = []
    for _ in range(2):
        trace = []
        final, _ = normalize(c, supply=supply_for(c), trace=trace)
        runs.append(([s.line() for s in trace], show(final)))
    assert runs[0] == runs[1]


def test_equality_verdicts():
    assert eq_v(parse("\\x:o. x"), parse("\\y:o. (\\z:o. z) y")).verdict == "EQUAL"
    assert eq_v(parse("mu 'k:o. < #c:o | 'k >"), parse("#c:o")).verdict == "EQUAL"
    assert eq_v(parse("#c:o"), parse("#d:o")).verdict == "DISTINCT"


def test_dc_equality_verdicts():
    a = sharp(parse("(\\x:o. x) #c:o"))
    b = sharp(parse("#c:o"))
    assert eq_dcv(a, b).verdict == "EQUAL"
    assert eq_dcv(sharp(parse("#c:o")), sharp(parse("#d:o"))).verdict == "DISTINCT"


def test_eta_rules_identify_expansions():
    pairs = [
        ("\\x:o -> o. x", "\\x:o -> o. \\y:o. x y"),
        ("\\x:o /\\ p. x", "\\x:o /\\ p. (fst x, snd x)"),
    ]
    for a, b in pairs:
        assert eq_v(parse(a), parse(b)).verdict == "EQUAL"


def test_derived_rules_are_compositions_of_axioms():
    assert axiom_components("betaL+zeta") == ["betaL", "zeta"]
    assert "betaL^-1" in BLC_AXIOMS and "betaL^-1" in DC_AXIOMS


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_equality_is_reflexive(seed):
    g = BlcGen(random.Random(seed))
    e = g.expr(g.ty(2))
    assert eq_v(e, e).verdict == "EQUAL"
