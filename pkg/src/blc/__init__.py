"""Bilateral lambda calculus and the dual calculus: syntax, typing,
call-by-value evaluation, translations and a bilateral natural deduction
checker."""

from .engine import Distinct, Equal, Unknown, eq_dcv, eq_v, normalize, step
from .parse import parse, show
from .translate import flat, sharp
from .typecheck import EMPTY_ENV, TypeCheckError, TypeEnv, blc_synth, dc_synth

__all__ = [
    "EMPTY_ENV",
    "Distinct",
    "Equal",
    "TypeCheckError",
    "TypeEnv",
    "Unknown",
    "blc_synth",
    "dc_synth",
    "eq_dcv",
    "eq_v",
    "flat",
    "normalize",
    "parse",
    "sharp",
    "show",
    "step",
]

__version__ = "0.1.0"
