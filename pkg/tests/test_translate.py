import random

import pytest
from hypothesis import given, settings

from blc.engine import eq_dcv, eq_v, is_value
from blc.gen import BlcGen, DcGen
from blc.parse import parse, show
from blc.syntax import alpha_eq
from blc.translate import const_map, dc_env, flat, sharp, strip_env
from blc.typecheck import EMPTY_ENV, blc_type, dc_type

from strategies import blc_objects, dc_objects, seeds


@pytest.mark.parametrize(
    "blc, dc",
    [
        ("\\x:o. x", "\\x:o. x"),
        ("(#c:o, #d:p)", "(cst$c_o, cst$d_p)"),
        ("(\\x:o. x) #c:o", "comp 'k:o. (\\x:o. x) * cst$c_o @ 'k"),
    ],
)
def test_sharp_examples(blc, dc):
    assert alpha_eq(sharp(parse(blc)), parse(dc, "dc-arrow", "term"))


def test_constants_map_to_reserved_names():
    assert show(sharp(parse("@p", sort="cont"))) == "blt$p"
    assert show(flat(parse("cst$c_o", "dc-arrow", "term"))) == "#c:o"


@settings(max_examples=100, deadline=None)
@given(blc_objects())
def test_sharp_preserves_typing(d):
    t = blc_type(EMPTY_ENV, d)
    assert dc_type(const_map(d).dc_env(EMPTY_ENV), sharp(d), "arrow") == t


@settings(max_examples=100, deadline=None)
@given(dc_objects("arrow"))
def test_flat_preserves_typing(o):
    env = dc_env(o)
    assert blc_type(strip_env(env), flat(o)) == dc_type(env, o, "arrow")


@settings(max_examples=60, deadline=None)
@given(blc_objects())
def test_flat_sharp_round_trip(d):
    assert eq_v(flat(sharp(d)), d).verdict == "EQUAL"


@settings(max_examples=60, deadline=None)
@given(dc_objects("arrow"))
def test_sharp_flat_round_trip(o):
    assert eq_dcv(sharp(flat(o)), o).verdict == "EQUAL"


def test_sharp_flat_is_identity_on_simple_values():
    for text in ("\\x:o. x", "(#c:o, #d:p)"):
        d = parse(text)
        assert alpha_eq(flat(sharp(d)), d)


def test_flat_of_coapplication_is_not_a_value():
    # a value on the DC side whose image is a mu-abstraction
    o = parse("cst$c_o $ blt$p", "dc-arrow", "term")
    assert is_value(o) is not None
    assert is_value(flat(o)) is None


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_translations_are_deterministic(seed):
    d = BlcGen(random.Random(seed)).any("cmd")
    assert show(sharp(d)) == show(sharp(d))
    o = DcGen(random.Random(seed), dialect="arrow").any("stmt")
    assert show(flat(o)) == show(flat(o))
