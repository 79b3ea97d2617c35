"""Property suites behind ``blc selftest`` and the acceptance tests.

Every suite draws from its own ``random.Random`` seeded by the run seed and
the suite name, so suites are independent of each other and of run order.
A suite reports pass/fail/unknown counts and whether its threshold was met.
"""

from __future__ import annotations

import dataclasses
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import nd
from .derived import (
    cont_to_fn,
    expand_sugar,
    fn_to_cont,
    law_beta_gets,
    law_beta_imp,
    law_eta_gets,
    law_eta_imp,
    law_zeta_gets,
    mk_case,
    mk_inl,
    mk_inr,
)
from .engine import (
    BLC_AXIOMS,
    DEFAULT_FUEL,
    FuelExhausted,
    axiom_components,
    eq_dcv,
    eq_v,
    normalize,
    step_info,
)
from .gen import BlcGen, DcGen
from .parse import parse, show
from .syntax import (
    CONT_NS,
    EXPR_NS,
    And,
    BlcError,
    CApp,
    CMu,
    Cut,
    CVar,
    DCut,
    EApp,
    EFst,
    ELam,
    EMu,
    EPair,
    ESnd,
    EVar,
    Gets,
    Imp,
    KComp,
    KLam,
    KVar,
    Or,
    TComp,
    TVar,
    alpha_eq,
    subst,
    supply_for,
)
from .translate import const_map, dc_env, flat, flat_ctx, sharp, sharp_ctx, strip_env
from .typecheck import (
    EMPTY_ENV,
    SUBST_CASES,
    SubstInstance,
    TypeCheckError,
    blc_synth,
    blc_type,
    check_substitution_lemma,
    check_weakening,
    dc_type,
)

DEFAULT_SEED = 0xB1CA
BUDGET_S = 60.0
PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass
class SuiteResult:
    name: str
    criterion: int
    title: str
    threshold: str
    passed: int = 0
    failed: int = 0
    unknown: int = 0
    equal_rate: Optional[float] = None
    ok: bool = False
    elapsed: float = 0.0
    details: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.unknown

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return (
            f"{tag} criterion {self.criterion:>2} {self.name:<22} pass={self.passed} fail={self.failed} "
            f"unknown={self.unknown} ({self.threshold}) {self.elapsed:.1f}s"
        )


class Tally:
    """Counts outcomes and keeps the first few failure details."""

    def __init__(self, keep: int = 8):
        self.counts = {PASS: 0, FAIL: 0, UNKNOWN: 0}
        self.details = []
        self.keep = keep
        self.notes = []

    def add(self, outcome: str, detail: str = "") -> None:
        self.counts[outcome] += 1
        if outcome != PASS and detail and len(self.details) < self.keep:
            self.details.append(f"{outcome}: {detail}")

    def check(self, label: str, fn: Callable[[], bool]) -> None:
        """Run ``fn``; True passes, False fails, an exception fails with its message."""
        try:
            ok = fn()
        except (BlcError, TypeError, ValueError, RecursionError) as exc:
            self.add(FAIL, f"{label}: {type(exc).__name__}: {exc}")
            return
        self.add(PASS if ok else FAIL, label)

    def verdict(self, label: str, fn: Callable[[], object]) -> None:
        """Run an equivalence check; EQUAL passes, DISTINCT fails, UNKNOWN is unknown."""
        try:
            v = fn()
        except (BlcError, TypeError, ValueError, RecursionError) as exc:
            self.add(FAIL, f"{label}: {type(exc).__name__}: {exc}")
            return
        if v.verdict == "EQUAL":
            self.add(PASS)
        elif v.verdict == "DISTINCT":
            self.add(FAIL, f"{label}: DISTINCT {[show(n) for n in v.normal_forms]}")
        else:
            self.add(UNKNOWN, f"{label}: UNKNOWN {v.reason} {v.detail}")


@dataclass(frozen=True)
class Suite:
    name: str
    criterion: int
    title: str
    count: int
    rule: str  # "all" or "rate95"
    run: Callable


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def _expr_ty(g, conns=("->", "/\\", "\\/")):
    return g.ty(2, conns)


def _value(g, t=None, tries=20):
    """A closed value and its type; types without closed values are redrawn."""
    for _ in range(tries):
        u = t if t is not None else g.ty(2)
        v = g.value(u)
        if v is not None:
            return v, u
        t = None
    b = g.ty(0)
    return g.value(b), b


# --------------------------------------------------------------------------
# 1. parser round trip


_SORTS = {
    "blc": ("type", "expr", "cont", "cmd"),
    "dc-full": ("type", "term", "coterm", "stmt"),
    "dc-arrow": ("type", "term", "coterm", "stmt"),
}


def suite_parse(rng, count, fuel, tally):
    for calc, sorts in _SORTS.items():
        g = BlcGen(rng) if calc == "blc" else DcGen(rng, dialect=calc[3:])
        for sort in sorts:
            for _ in range(count):
                d = g.any(sort)
                text = show(d)

                def rt(d=d, text=text, sort=sort, calc=calc):
                    back = parse(text, calc, sort)
                    return back == d if sort == "type" else alpha_eq(back, d)

                tally.check(f"{calc}/{sort}: {text}", rt)


# --------------------------------------------------------------------------
# 2. type uniqueness and weakening


def suite_uniqueness(rng, count, fuel, tally):
    g = BlcGen(rng)
    sorts = ("expr", "cont", "cmd")
    for i in range(count):
        d = g.any(sorts[i % 3])

        def prop(d=d):
            j0 = blc_synth(EMPTY_ENV, d)
            j1 = blc_synth(EMPTY_ENV, d)
            if j0 != j1:
                return False
            ns = EXPR_NS if rng.random() < 0.5 else CONT_NS
            extra = (ns, g.name(ns), g.ty(2))
            j2 = check_weakening(j0, extra)
            return j2.ty == j0.ty and j2.kind == j0.kind

        tally.check(show(d), prop)


# --------------------------------------------------------------------------
# 3. substitution lemma


def suite_substitution(rng, count, fuel, tally):
    g = BlcGen(rng)
    cases = sorted(SUBST_CASES)
    for i in range(count):
        case = cases[i % len(cases)]
        ns, tsort, psort = SUBST_CASES[case]
        var = g.name(ns)
        vt = g.ty(2)
        env = {(ns, var): vt}
        if tsort == "expr":
            target = g.expr(g.ty(2), env)
        elif tsort == "cont":
            target = g.cont(g.ty(2), env)
        else:
            target = g.cmd(env)
        payload = g.expr(vt) if psort == "expr" else g.cont(vt)
        inst = SubstInstance(EMPTY_ENV, var, vt, target, payload)
        tally.check(f"case {case}: {show(target)} with {var} := {show(payload)}", lambda c=case, s=inst: check_substitution_lemma(c, s))


# --------------------------------------------------------------------------
# 4. typability preservation


def suite_typability(rng, count, fuel, tally):
    g = BlcGen(rng)
    for i in range(count):
        d = g.any(("expr", "cont", "cmd")[i % 3])

        def fwd(d=d):
            t = blc_type(EMPTY_ENV, d)
            return dc_type(const_map(d).dc_env(EMPTY_ENV), sharp(d), "arrow") == t

        tally.check(f"sharp {show(d)}", fwd)
    h = DcGen(rng, dialect="arrow")
    for i in range(count):
        o = h.any(("term", "coterm", "stmt")[i % 3])

        def bwd(o=o):
            env = dc_env(o)
            t = dc_type(env, o, "arrow")
            return blc_type(strip_env(env), flat(o)) == t

        tally.check(f"flat {show(o)}", bwd)


# --------------------------------------------------------------------------
# 5. round trips


def suite_roundtrip(rng, count, fuel, tally):
    g = BlcGen(rng)
    for i in range(count):
        d = g.any(("expr", "cont", "cmd")[i % 3])
        tally.verdict(f"flat(sharp {show(d)})", lambda d=d: eq_v(flat(sharp(d)), d, fuel))
    h = DcGen(rng, dialect="arrow")
    for i in range(count):
        o = h.any(("term", "coterm", "stmt")[i % 3])
        tally.verdict(f"sharp(flat {show(o)})", lambda o=o: eq_dcv(sharp(flat(o)), o, fuel))


# --------------------------------------------------------------------------
# 6. equation preservation


def _machine_pair(n, rng, limit=12):
    """Two consecutive machine states, taken at a random point of the run."""
    supply = supply_for(n)
    cur, last = n, None
    for _ in range(rng.randint(1, limit)):
        r = step_info(cur, supply)
        if r is None:
            break
        last = (cur, r.next, r.rule)
        cur = r.next
    return last


def _blc_eta_pair(g, rng):
    kind = rng.choice(["lam", "pair", "mu", "comu"])
    if kind == "lam":
        t = Imp(g.ty(1), g.ty(1))
        v = g.value(t)
        x = g.name(EXPR_NS)
        return v, ELam(x, t.left, EApp(v, EVar(x, t.left))), "eta-lam"
    if kind == "pair":
        v, t = _value(g, And(g.ty(1, ("->", "/\\")), g.ty(1, ("->", "/\\"))))
        return v, EPair(EFst(v), ESnd(v)), "eta-pair"
    t = g.ty(2)
    if kind == "mu":
        e = g.expr(t)
        a = g.name(CONT_NS)
        return e, EMu(a, t, Cut(e, CVar(a, t))), "eta-mu"
    c = g.cont(t)
    x = g.name(EXPR_NS)
    return c, CMu(x, t, Cut(EVar(x, t), c)), "eta-comu"


def _dc_eta_pair(h, rng):
    kind = rng.choice(["imp", "gets", "comp", "cocomp"])
    if kind == "imp":
        t = Imp(h.dty(1), h.dty(1))
        return law_eta_imp(h.value(t), t, h.name(EXPR_NS), h.name(CONT_NS)) + ("eta->",)
    if kind == "gets":
        t = Gets(h.dty(1), h.dty(1))
        a = h.name(CONT_NS)
        k = KLam(a, t.right, h.coterm(t.left, {(CONT_NS, a): t.right}))
        return law_eta_gets(k, t, h.name(CONT_NS), h.name(EXPR_NS)) + ("eta<-",)
    t = h.dty(2)
    if kind == "comp":
        m = h.term(t)
        a = h.name(CONT_NS)
        return m, TComp(a, t, DCut(m, KVar(a))), "eta-R"
    k = h.coterm(t)
    x = h.name(EXPR_NS)
    return k, KComp(x, t, DCut(TVar(x), k)), "eta-L"


def suite_preservation(rng, count, fuel, tally):
    g = BlcGen(rng)
    for i in range(count):
        pair = _machine_pair(g.cmd(), rng) if i % 3 else None
        d0, d1, rule = pair if pair is not None else _blc_eta_pair(g, rng)
        tally.verdict(f"sharp [{rule}] {show(d0)} = {show(d1)}", lambda a=d0, b=d1: eq_dcv(sharp(a), sharp(b), fuel))
    h = DcGen(rng, dialect="arrow")
    for i in range(count):
        pair = _machine_pair(h.stmt(), rng) if i % 3 else None
        o0, o1, rule = pair if pair is not None else _dc_eta_pair(h, rng)
        tally.verdict(f"flat [{rule}] {show(o0)} = {show(o1)}", lambda a=o0, b=o1: eq_v(flat(a), flat(b), fuel))


# --------------------------------------------------------------------------
# 7. mutual transformations


def suite_mutual(rng, count, fuel, tally):
    g = BlcGen(rng)
    for law in (1, 2, 3, 4):
        for _ in range(count):
            v, a0 = _value(g)
            a1 = g.ty(2)
            if law in (1, 4):
                c0 = g.cont(Gets(a0, a1))
                c1 = g.cont(a1)
                rhs = Cut(v, CApp(c0, c1))
                if law == 1:
                    lhs = Cut(EApp(cont_to_fn(c0), v), c1)
                else:
                    lhs = Cut(v, CApp(fn_to_cont(cont_to_fn(c0)), c1))
            else:
                e = g.expr(Imp(a0, a1))
                c = g.cont(a1)
                rhs = Cut(EApp(e, v), c)
                if law == 2:
                    lhs = Cut(v, CApp(fn_to_cont(e), c))
                else:
                    lhs = Cut(EApp(cont_to_fn(fn_to_cont(e)), v), c)
            tally.verdict(f"law {law}: {show(lhs)} = {show(rhs)}", lambda a=lhs, b=rhs: eq_v(a, b, fuel))


# --------------------------------------------------------------------------
# 8. case law


def suite_case(rng, count, fuel, tally):
    g = BlcGen(rng)
    for left in (True, False):
        for _ in range(count):
            v, tv = _value(g)
            other = g.ty(2)
            sum_ty = Or(tv, other) if left else Or(other, tv)
            res = g.ty(2)
            x0, x1 = g.name(EXPR_NS), g.name(EXPR_NS)
            e0 = g.expr(res, {(EXPR_NS, x0): sum_ty.left})
            e1 = g.expr(res, {(EXPR_NS, x1): sum_ty.right})
            c = g.cont(res)
            inj = (mk_inl if left else mk_inr)(v, sum_ty)
            lhs = Cut(mk_case(inj, x0, e0, x1, e1, res), c)
            x, e = (x0, e0) if left else (x1, e1)
            rhs = Cut(subst(e, (EXPR_NS, x), v), c)
            tag = "inl" if left else "inr"
            tally.verdict(f"{tag}: {show(lhs)} = {show(rhs)}", lambda a=lhs, b=rhs: eq_v(a, b, fuel))


# --------------------------------------------------------------------------
# 9. arrow sugar laws


def _sugar_instance(h, law):
    d = h.dty
    if law == "beta->":
        a, b = d(1), d(1)
        x = h.name(EXPR_NS)
        return law_beta_imp(x, a, h.term(b, {(EXPR_NS, x): a}), h.value(a), h.coterm(b))
    if law == "eta->":
        t = Imp(d(1), d(1))
        return law_eta_imp(h.value(t), t, h.name(EXPR_NS), h.name(CONT_NS))
    if law == "beta<-":
        a0, a1 = d(1), d(1)
        al = h.name(CONT_NS)
        return law_beta_gets(h.value(a0), h.coterm(a1), al, a1, h.coterm(a0, {(CONT_NS, al): a1}))
    if law == "eta<-":
        t = Gets(d(1), d(1))
        a = h.name(CONT_NS)
        k = KLam(a, t.right, h.coterm(t.left, {(CONT_NS, a): t.right}))
        return law_eta_gets(k, t, h.name(CONT_NS), h.name(EXPR_NS))
    a0, a1 = d(1), d(1)
    return law_zeta_gets(h.term(a0), a0, h.coterm(a1), h.coterm(Gets(a0, a1)), h.name(EXPR_NS))


SUGAR_LAWS = ("beta->", "eta->", "beta<-", "eta<-", "zeta<-")


def suite_sugar(rng, count, fuel, tally):
    h = DcGen(rng, dialect="arrow")
    for law in SUGAR_LAWS:
        for _ in range(count):
            lhs, rhs = _sugar_instance(h, law)

            def chk(a=lhs, b=rhs):
                return eq_dcv(expand_sugar(a), expand_sugar(b), fuel, dialect="full")

            tally.verdict(f"{law}: {show(lhs)} = {show(rhs)}", chk)


# --------------------------------------------------------------------------
# 10. context identities


def suite_contexts(rng, count, fuel, tally):
    g = BlcGen(rng)
    for _ in range(count):
        hole = g.ty(2)
        ctx, t = g.eval_ctx(hole, None)
        e = g.expr(hole)
        k = sharp(g.cont(t))
        x = g.name(EXPR_NS)
        lhs = DCut(sharp(ctx.fill(e)), k)
        rhs = DCut(sharp(e), KComp(x, hole, DCut(TVar(x), sharp_ctx(ctx, k, hole))))
        tally.verdict(f"(*) {show(lhs)} = {show(rhs)}", lambda a=lhs, b=rhs: eq_dcv(a, b, fuel))
    h = DcGen(rng, dialect="arrow")
    b = BlcGen(rng)
    b.n = 1_000_000
    for _ in range(count):
        hole = h.dty(2)
        ctx, t = h.eval_ctx(hole)
        m = h.term(hole)

        def item1(ctx=ctx, m=m, hole=hole):
            return eq_v(flat(ctx.fill(m)), flat_ctx(ctx, hole).fill(flat(m)), fuel)

        tally.verdict(f"flat F{{M}}: {show(ctx.fill(m))}", item1)
    for _ in range(count):
        hole = h.dty(2)
        ctx, t = h.eval_ctx(hole)
        e = b.expr(hole)
        c = b.cont(t)
        x = b.name(EXPR_NS)

        def item2(ctx=ctx, e=e, c=c, x=x, hole=hole):
            fc = flat_ctx(ctx, hole)
            lhs = Cut(fc.fill(e), c)
            rhs = Cut(e, CMu(x, hole, Cut(fc.fill(EVar(x, hole)), c)))
            return eq_v(lhs, rhs, fuel)

        tally.verdict(f"lift: {show(ctx.fill(TVar('hole')))} with {show(e)}", item2)


# --------------------------------------------------------------------------
# 11. natural deduction fixtures


def suite_nd(rng, count, fuel, tally):
    for fx in nd.fixtures(include_variants=False):
        tally.check(f"accept {fx.name}", lambda fx=fx: nd.check_claim(fx) is not None)
    for fx in nd.fixtures(include_variants=False):
        mutant = dataclasses.replace(fx, derivation=nd.flip_root(fx.derivation))

        def rejected(m=mutant):
            try:
                nd.check_claim(m)
            except nd.RuleViolation:
                return True
            return False

        tally.check(f"reject mutant of {fx.name}", rejected)


# --------------------------------------------------------------------------
# 12. dual typing


def suite_dual(rng, count, fuel, tally):
    g = BlcGen(rng)
    dual_ok = 0
    for i in range(count):
        d = g.any(("expr", "cont", "cmd")[i % 3])
        t, p = nd.erase(d)
        try:
            rep = nd.check_dual_typing(t, p)
        except nd.DualFailure as exc:
            tally.add(FAIL, f"{nd.show_proof(t)}: {exc}")
            continue
        dual_ok += rep.holds_dual
        if rep.holds:
            tally.add(PASS)
        else:
            tally.add(FAIL, f"{nd.show_proof(t)}: {rep.original.ty} becomes {rep.conjugate.ty}")
    tally.notes.append(f"conjugate typed at the dual type in {dual_ok}/{count}")


# --------------------------------------------------------------------------
# 13. determinism


def _run_lines(n, fuel):
    trace = []
    final, _ = normalize(n, fuel, supply_for(n), trace)
    return [s.line() for s in trace], show(final), [s.rule for s in trace]


def suite_determinism(rng, count, fuel, tally):
    g = BlcGen(rng)
    for _ in range(count):
        n = g.cmd()
        try:
            l0, f0, rules = _run_lines(n, fuel)
            l1, f1, _ = _run_lines(n, fuel)
        except FuelExhausted as exc:
            tally.add(UNKNOWN, f"{show(n)}: {exc}")
            continue
        bad = [r for r in rules if not set(axiom_components(r)) <= BLC_AXIOMS]
        if l0 != l1 or f0 != f1:
            tally.add(FAIL, f"{show(n)}: traces differ")
        elif bad:
            tally.add(FAIL, f"{show(n)}: unknown rules {bad}")
        else:
            tally.add(PASS)


SUITES = (
    Suite("parse-roundtrip", 1, "parse(print(D)) is D", 1000, "all", suite_parse),
    Suite("type-uniqueness", 2, "type uniqueness and weakening", 500, "all", suite_uniqueness),
    Suite("substitution", 3, "substitution lemma, six cases", 200, "all", suite_substitution),
    Suite("typability", 4, "sharp and flat preserve typing", 500, "all", suite_typability),
    Suite("round-trip", 5, "flat.sharp and sharp.flat", 500, "rate95", suite_roundtrip),
    Suite("equation-preservation", 6, "one-step pairs map to equal images", 300, "rate95", suite_preservation),
    Suite("mutual-transformations", 7, "four encoding laws", 100, "all", suite_mutual),
    Suite("case-law", 8, "case of an injection", 100, "all", suite_case),
    Suite("dc-sugar-laws", 9, "arrow sugar laws after expansion", 100, "all", suite_sugar),
    Suite("context-identities", 10, "context translations", 100, "all", suite_contexts),
    Suite("nd-fixtures", 11, "derivations and mutants", 14, "all", suite_nd),
    Suite("dual-typing", 12, "conjugate at the same type", 100, "all", suite_dual),
    Suite("determinism", 13, "reproducible traces", 500, "all", suite_determinism),
)

SUITE_BY_NAME = {s.name: s for s in SUITES}


def run_suite(s: Suite, seed: int = DEFAULT_SEED, count: Optional[int] = None, fuel: int = DEFAULT_FUEL) -> SuiteResult:
    """Run one suite. ``count`` replaces the suite's per-group instance count."""
    tally = Tally()
    n = s.count if count is None else count
    t0 = time.perf_counter()
    s.run(_rng(seed, s.name), n, fuel, tally)
    elapsed = time.perf_counter() - t0
    c = tally.counts
    total = sum(c.values())
    rate = c[PASS] / total if total else 0.0
    if s.rule == "rate95":
        ok = total > 0 and rate >= 0.95 and c[FAIL] == 0
        threshold = ">=95% equal, 0 distinct"
    else:
        ok = total > 0 and c[PASS] == total
        threshold = "100%"
    details = list(tally.notes) + tally.details
    if elapsed > BUDGET_S:
        ok = False
        details.insert(0, f"over the {BUDGET_S:.0f}s budget")
    return SuiteResult(s.name, s.criterion, s.title, threshold, c[PASS], c[FAIL], c[UNKNOWN], rate, ok, elapsed, details)


def run_all(seed: int = DEFAULT_SEED, count: Optional[int] = None, fuel: int = DEFAULT_FUEL, only=None) -> list:
    out = []
    for s in SUITES:
        if only and s.name not in only and str(s.criterion) not in only:
            continue
        out.append(run_suite(s, seed, count, fuel))
    return sorted(out, key=lambda r: r.criterion)
