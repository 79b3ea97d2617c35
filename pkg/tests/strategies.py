"""Hypothesis strategies built on the package's type-directed generators."""

import random

from hypothesis import strategies as st

from blc.gen import BlcGen, DcGen

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def blc_objects(draw, sorts=("expr", "cont", "cmd")):
    g = BlcGen(random.Random(draw(seeds)))
    return g.any(draw(st.sampled_from(sorts)))


@st.composite
def dc_objects(draw, dialect="arrow", sorts=("term", "coterm", "stmt")):
    g = DcGen(random.Random(draw(seeds)), dialect=dialect)
    return g.any(draw(st.sampled_from(sorts)))


@st.composite
def blc_commands(draw):
    return BlcGen(random.Random(draw(seeds))).cmd()
