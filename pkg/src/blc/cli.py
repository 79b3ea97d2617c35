"""Command-line front end: ``blc parse|check|eval|eq|translate|nd check|selftest``.

Exit codes: 0 success, EQUAL or accepted; 1 DISTINCT or rejected; 2 UNKNOWN;
3 parse error; 4 type error; 5 fuel exhausted; 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import jsonio, nd
from .engine import DEFAULT_FUEL, FuelExhausted, Normalizer, eq_dcv, eq_v, normalize
from .parse import CALCULI, SORTS, ParseError, parse, show, show_type
from .syntax import BlcError, Ty, supply_for
from .translate import blc_env, dc_env, flat, sharp
from .typecheck import EMPTY_ENV, TypeCheckError, TypeEnv, blc_synth, dc_synth

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_PARSE, EXIT_TYPE, EXIT_FUEL, EXIT_USAGE = 0, 1, 2, 3, 4, 5, 64

_GUESS_ORDER = {
    "blc": ("expr", "cont", "cmd", "type"),
    "dc-full": ("term", "coterm", "stmt", "type"),
    "dc-arrow": ("term", "coterm", "stmt", "type"),
}


@dataclass
class CliConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    calculus: Optional[str] = None
    sort: Optional[str] = None
    env: Optional[str] = None
    fuel: int = DEFAULT_FUEL
    seed: int = 0xB1CA
    count: Optional[int] = None
    json: bool = False


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _dialect(calculus: str) -> str:
    return "full" if calculus == "dc-full" else "arrow"


def load_object(text: str, calculus: str, sort: Optional[str]):
    """Parse concrete syntax or a ``blc-ast/1`` document; the sort is guessed when absent."""
    if text.lstrip().startswith("{"):
        try:
            return jsonio.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if sort is not None:
        return parse(text, calculus, sort)
    best = None
    for s in _GUESS_ORDER[calculus]:
        try:
            return parse(text, calculus, s)
        except ParseError as exc:
            pos = exc.span.start if exc.span else -1
            if best is None or pos > best[0]:
                best = (pos, exc)
    raise best[1]


def parse_env(text: Optional[str], calculus: str) -> TypeEnv:
    """``"x:o, 'a:o -> p"`` as a typing environment."""
    if not text:
        return EMPTY_ENV
    pos, neg = {}, {}
    for item in text.split(","):
        if not item.strip():
            continue
        name, sep, ty = item.partition(":")
        if not sep:
            raise UsageError(f"environment entries look like name:type, got {item.strip()!r}")
        name = name.strip()
        t = parse(ty, calculus, "type")
        (neg if name.startswith("'") or name.startswith("blt$") else pos)[name] = t
    return TypeEnv.of(pos, neg)


def _obj_of(cfg: CliConfig, path: str, calculus: Optional[str] = None):
    calc = calculus or cfg.calculus or "blc"
    return load_object(_read(path), calc, cfg.sort), calc


def _emit(cfg: CliConfig, text: str, payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True) if cfg.json else text)


def _synth(obj, calc, env):
    if obj.calculus == "blc":
        return blc_synth(blc_env(obj, env), obj)
    return dc_synth(dc_env(obj, env), obj, _dialect(calc))


def cmd_parse(cfg: CliConfig) -> int:
    obj, _ = _obj_of(cfg, cfg.inputs[0])
    if isinstance(obj, Ty):
        print(jsonio.dumps(obj) if cfg.json else show_type(obj))
        return EXIT_OK
    print(jsonio.dumps(obj) if cfg.json else show(obj))
    return EXIT_OK


def cmd_check(cfg: CliConfig) -> int:
    obj, calc = _obj_of(cfg, cfg.inputs[0])
    if isinstance(obj, Ty):
        raise UsageError("check needs an object, not a type")
    j = _synth(obj, calc, parse_env(cfg.env, calc))
    ty = None if j.ty is None else show_type(j.ty)
    _emit(cfg, f"{obj.sort} : {ty}" if ty else f"{obj.sort} : ok", {"sort": obj.sort, "kind": j.kind, "type": ty})
    return EXIT_OK


def cmd_eval(cfg: CliConfig, trace: bool) -> int:
    obj, calc = _obj_of(cfg, cfg.inputs[0])
    env = parse_env(cfg.env, calc)
    _synth(obj, calc, env)
    if obj.sort in ("cmd", "stmt"):
        steps = []
        final, n = normalize(obj, cfg.fuel, supply_for(obj), steps)
    else:
        env = blc_env(obj, env) if obj.calculus == "blc" else dc_env(obj, env)
        norm = Normalizer(cfg.fuel, supply_for(obj), _dialect(calc))
        nf = {"expr": norm.nf_expr, "cont": norm.nf_cont, "term": norm.nf_term, "coterm": norm.nf_coterm}[obj.sort]
        final = nf(obj, env)
        steps, n = norm.trace, len(norm.trace)
    lines = [s.line() for s in steps]
    if cfg.json:
        print(json.dumps({"result": show(final), "steps": n, "trace": lines if trace else None}, sort_keys=True))
    else:
        if trace:
            for line in lines:
                print(line)
        print(show(final))
    return EXIT_OK


def cmd_eq(cfg: CliConfig) -> int:
    if len(cfg.inputs) != 2:
        raise UsageError("eq takes two input files")
    calc = cfg.calculus or "blc"
    a = load_object(_read(cfg.inputs[0]), calc, cfg.sort)
    b = load_object(_read(cfg.inputs[1]), calc, cfg.sort or getattr(a, "sort", None))
    env = parse_env(cfg.env, calc)
    if a.calculus == "blc":
        v = eq_v(a, b, cfg.fuel, env)
    else:
        v = eq_dcv(a, b, cfg.fuel, _dialect(calc), env)
    payload = {"verdict": v.verdict}
    if v.verdict == "EQUAL":
        payload["normal_form"] = show(v.normal_form)
    else:
        payload["normal_forms"] = [show(n) for n in v.normal_forms]
    if v.verdict == "UNKNOWN":
        payload["reason"] = v.reason
    text = v.verdict if v.verdict != "UNKNOWN" else f"UNKNOWN ({v.reason})"
    _emit(cfg, text, payload)
    return {"EQUAL": EXIT_OK, "DISTINCT": EXIT_NO}.get(v.verdict, EXIT_UNKNOWN)


def cmd_translate(cfg: CliConfig, to: str) -> int:
    src = "blc" if to == "dc" else "dc-arrow"
    if cfg.calculus and cfg.calculus != src:
        raise UsageError(f"--to {to} reads {src} input")
    obj, calc = _obj_of(cfg, cfg.inputs[0], src)
    env = parse_env(cfg.env, calc)
    out = sharp(obj, env) if to == "dc" else flat(obj, env)
    print(jsonio.dumps(out) if cfg.json else show(out))
    return EXIT_OK


def cmd_nd_check(cfg: CliConfig) -> int:
    try:
        doc = json.loads(_read(cfg.inputs[0]))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        if "v" in doc:
            fx = nd.load_document(doc)
            s = nd.check_claim(fx) if "claim" in doc else nd.check_derivation(fx.derivation)
        else:
            s = nd.check_derivation(nd.derivation_from_json(doc))
    except nd.RuleViolation as exc:
        _emit(cfg, f"REJECTED {exc}", {"accepted": False, "rule": exc.rule, "path": list(exc.path), "reason": exc.reason})
        return EXIT_NO
    prem = ", ".join(s.premises())
    _emit(
        cfg,
        f"ACCEPTED {prem} |- {s.root}" if prem else f"ACCEPTED |- {s.root}",
        {"accepted": True, "conclusion": str(s.root), "premises": s.premises(), "gaps": [str(g.formula) for g in s.gaps]},
    )
    return EXIT_OK


def cmd_selftest(cfg: CliConfig, report_dir: Optional[str], only) -> int:
    from .harness import run_all
    from .report import write_report

    results = run_all(cfg.seed, cfg.count, cfg.fuel, only)
    if not results:
        raise UsageError("no suite matches the selection")
    if cfg.json:
        print(json.dumps([_result_json(r) for r in results], sort_keys=True))
    else:
        for r in results:
            print(r.line())
            for d in r.details[:3]:
                print(f"    {d[:240]}")
    if report_dir:
        write_report(results, report_dir)
    return EXIT_OK if all(r.ok for r in results) else EXIT_NO


def _result_json(r) -> dict:
    return {
        "suite": r.name,
        "criterion": r.criterion,
        "pass": r.passed,
        "fail": r.failed,
        "unknown": r.unknown,
        "ok": r.ok,
        "threshold": r.threshold,
        "seconds": round(r.elapsed, 3),
        "details": r.details,
    }


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--calculus", choices=CALCULI)
    common.add_argument("--sort", choices=sorted({s for v in SORTS.values() for s in v}))
    common.add_argument("--env", help="typing environment, e.g. \"x:o, 'a:o -> p\"")
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="blc", description="Bilateral lambda calculus and dual calculus toolkit.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name, help_ in (("parse", "parse and pretty-print"), ("check", "synthesize the type")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("input")
    sp = sub.add_parser("eval", parents=[common], help="run the call-by-value machine")
    sp.add_argument("input")
    sp.add_argument("--trace", action="store_true", help="print one audit line per step")
    sp = sub.add_parser("eq", parents=[common], help="bounded equivalence check")
    sp.add_argument("inputs", nargs=2)
    sp = sub.add_parser("translate", parents=[common], help="translate between the calculi")
    sp.add_argument("--to", choices=("dc", "blc"), required=True)
    sp.add_argument("input")
    sp = sub.add_parser("nd", help="natural deduction")
    ndsub = sp.add_subparsers(dest="nd_command", required=True, parser_class=_Parser)
    sp = ndsub.add_parser("check", parents=[common], help="check a bind-deriv/1 derivation")
    sp.add_argument("input")
    sp = sub.add_parser("selftest", parents=[common], help="run the property suites")
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=0xB1CA)
    sp.add_argument("--count", type=int, default=None, help="instances per group (default: each suite's own)")
    sp.add_argument("--report-dir", help="write results.tsv and counts.png here")
    sp.add_argument("--suite", action="append", help="run only this suite (name or criterion number)")
    return p


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    args = build_parser().parse_args(argv)
    inputs = getattr(args, "inputs", None) or ([args.input] if getattr(args, "input", None) else [])
    cfg = CliConfig(
        subcommand=args.subcommand,
        inputs=inputs,
        calculus=args.calculus,
        sort=args.sort,
        env=args.env,
        fuel=args.fuel,
        seed=getattr(args, "seed", 0xB1CA),
        count=getattr(args, "count", None),
        json=args.json,
    )
    try:
        if cfg.fuel <= 0:
            raise UsageError("--fuel must be positive")
        if cfg.count is not None and cfg.count <= 0:
            raise UsageError("--count must be positive")
        if cfg.subcommand == "parse":
            return cmd_parse(cfg)
        if cfg.subcommand == "check":
            return cmd_check(cfg)
        if cfg.subcommand == "eval":
            return cmd_eval(cfg, args.trace)
        if cfg.subcommand == "eq":
            return cmd_eq(cfg)
        if cfg.subcommand == "translate":
            return cmd_translate(cfg, args.to)
        if cfg.subcommand == "nd":
            return cmd_nd_check(cfg)
        return cmd_selftest(cfg, args.report_dir, args.suite)
    except UsageError as exc:
        print(f"blc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except jsonio.SchemaError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FuelExhausted as exc:
        print(f"fuel exhausted: {exc}", file=sys.stderr)
        return EXIT_FUEL
    except TypeCheckError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return EXIT_TYPE
    except BlcError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return EXIT_TYPE
    except RecursionError:
        print("blc: input is nested too deeply", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
