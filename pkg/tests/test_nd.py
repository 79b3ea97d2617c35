import copy
import dataclasses
import json
import random

import pytest
from hypothesis import given, settings

from blc import nd
from blc.gen import BlcGen
from blc.parse import parse
from blc.syntax import Base, Imp

from strategies import seeds

FIXTURES = nd.fixtures()
MAIN = [fx for fx in FIXTURES if not fx.variant]

MODUS_PONENS = {
    "rule": "+->E",
    "conclusion": "+ p",
    "premises": [{"hyp": "f", "formula": "+ o -> p"}, {"hyp": "x", "formula": "+ o"}],
}


def test_fixture_counts():
    assert len(MAIN) == 14
    assert len(FIXTURES) == 16


@pytest.mark.parametrize("fx", FIXTURES, ids=lambda f: f.name)
def test_fixture_accepted(fx):
    s = nd.check_claim(fx)
    assert s.root == fx.conclusion


@pytest.mark.parametrize("fx", MAIN, ids=lambda f: f.name)
def test_flipped_root_rejected(fx):
    bad = dataclasses.replace(fx, derivation=nd.flip_root(fx.derivation))
    with pytest.raises(nd.RuleViolation):
        nd.check_claim(bad)


@pytest.mark.parametrize("fx", MAIN, ids=lambda f: f.name)
def test_json_round_trip(fx):
    doc = nd.derivation_to_json(fx.derivation)
    assert nd.derivation_to_json(nd.derivation_from_json(json.loads(json.dumps(doc)))) == doc


def test_modus_ponens():
    s = nd.check_derivation(nd.derivation_from_json(MODUS_PONENS))
    assert s.root == nd.parse_signed("+ p")
    assert sorted(h for h, _ in s.open_hyps) == ["f", "x"]


def test_wrong_conclusion_rejected():
    doc = copy.deepcopy(MODUS_PONENS)
    doc["conclusion"] = "+ o"
    with pytest.raises(nd.RuleViolation):
        nd.check_derivation(nd.derivation_from_json(doc))


def test_unknown_rule_rejected():
    doc = copy.deepcopy(MODUS_PONENS)
    doc["rule"] = "+->X"
    with pytest.raises(nd.RuleViolation):
        nd.check_derivation(nd.derivation_from_json(doc))


def test_undischarged_hypothesis_breaks_claim():
    fx = next(f for f in MAIN if f.name.startswith("05-"))
    doc = nd.derivation_to_json(fx.derivation)
    doc["discharge"] = []
    bad = dataclasses.replace(fx, derivation=nd.derivation_from_json(doc))
    with pytest.raises(nd.RuleViolation):
        nd.check_claim(bad)


def test_unicode_rule_names():
    assert nd.canonical_rule("+→I") == "+->I"
    assert nd.canonical_rule("−∧I0") == "-/\\I0"


def test_signed_formulas():
    s = nd.parse_signed("+ o -> p")
    assert s.polarity == "+" and s.formula == Imp(Base("o"), Base("p"))
    assert s.conjugate() == nd.parse_signed("- o -> p")


def test_dual_type():
    t = parse("\\x:o. #d:p")
    pt, pol = nd.erase(t)
    rep = nd.check_dual_typing(pt, pol)
    assert rep.original.ty == Imp(Base("o"), Base("p"))
    assert rep.polarity_flipped and rep.involutive
    assert rep.holds_dual


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_conjugate_flips_polarity_at_dual_type(seed):
    g = BlcGen(random.Random(seed))
    d = g.any(g.rng.choice(("expr", "cont", "cmd")))
    t, p = nd.erase(d)
    try:
        rep = nd.check_dual_typing(t, p)
    except nd.DualFailure:
        return
    assert rep.involutive
    assert rep.equivalence_invariant
    assert rep.holds_dual
