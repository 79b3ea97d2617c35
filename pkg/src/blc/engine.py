"""Call-by-value machines and equivalence checkers.

The machines read the beta-, mu- and zeta-equations left to right. Eta-style
equations never drive the machine; they are applied as contractions while
normal forms are read back (see :class:`Normalizer`). Every rewrite is
recorded as an :class:`AuditStep` naming the equation it instantiates.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Union

from .syntax import (
    CONT_NS,
    EXPR_NS,
    And,
    AppK,
    BlcError,
    Bullet,
    CApp,
    CFst,
    CLam,
    CMu,
    CoAppT,
    Const,
    CPair,
    CSnd,
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
    FstK,
    Inl,
    Inr,
    KComp,
    KLam,
    KPair,
    KVar,
    NameSupply,
    Node,
    NotL,
    NotR,
    Or,
    SndK,
    TComp,
    TLam,
    TPair,
    TVar,
    Ty,
    alpha_eq,
    all_names,
    free_var_types,
    free_vars,
    occurs_free,
    replace_at,
    reserved_types,
    subst,
    supply_for,
)
from .typecheck import EMPTY_ENV, TypeCheckError, TypeEnv, UnboundVariable, blc_type, dc_type

DEFAULT_FUEL = 10_000

BLC_AXIOMS = frozenset(
    {
        "beta-lam",
        "eta-lam",
        "beta-fst",
        "beta-snd",
        "eta-pair",
        "eta-mu",
        "beta-colam",
        "eta-colam",
        "beta-cofst",
        "beta-cosnd",
        "eta-copair",
        "eta-comu",
        "betaR",
        "betaL",
        "betaL^-1",
        "zeta",
    }
)

DC_AXIOMS = frozenset(
    {
        "beta-and0",
        "beta-and1",
        "beta-or0",
        "beta-or1",
        "beta-not",
        "betaR",
        "betaL",
        "etaR",
        "etaL",
        "eta-and",
        "eta-or",
        "eta-not",
        "zeta",
        "beta->",
        "eta->",
        "beta<-",
        "eta<-",
        "zeta<-",
        "betaL^-1",
    }
)


class FuelExhausted(BlcError):
    def __init__(self, state: Node, steps: int):
        self.state = state
        self.steps = steps
        super().__init__(f"fuel exhausted after {steps} steps")


# --------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class ValueWitness:
    """Derivation of membership in the value grammar."""

    obj: Node
    rule: str
    premises: tuple = ()

    def render(self, depth: int = 0) -> str:
        lines = ["  " * depth + f"{self.rule}: {self.obj}"]
        for p in self.premises:
            lines.append(p.render(depth + 1))
        return "\n".join(lines)


def blc_injection(e) -> Optional[tuple]:
    """``mu 'a. < V | fst 'a >`` -> ("inl", V); snd gives "inr"."""
    if not isinstance(e, EMu):
        return None
    c = e.body.cont
    if isinstance(c, (CFst, CSnd)) and isinstance(c.arg, CVar) and c.arg.name == e.covar:
        return ("inl" if isinstance(c, CFst) else "inr", e.body.expr)
    return None


def dc_injection(m) -> Optional[tuple]:
    """``comp 'a. W * fst['a]`` -> ("fst", W); snd likewise."""
    if not isinstance(m, TComp):
        return None
    k = m.body.coterm
    if isinstance(k, (FstK, SndK)) and isinstance(k.arg, KVar) and k.arg.name == m.covar:
        return ("fst" if isinstance(k, FstK) else "snd", m.body.term)
    return None


def is_value(d: Node) -> Optional[ValueWitness]:
    """Witness that ``d`` matches the value grammar literally, or None."""
    if d.calculus == "blc":
        return _blc_value(d)
    return _dc_value(d)


def _blc_value(e) -> Optional[ValueWitness]:
    if isinstance(e, Const):
        return ValueWitness(e, "cst")
    if isinstance(e, EVar):
        return ValueWitness(e, "var")
    if isinstance(e, ELam):
        return ValueWitness(e, "lam")
    if isinstance(e, EPair):
        a = _blc_value(e.left)
        b = a and _blc_value(e.right)
        return ValueWitness(e, "pair", (a, b)) if b else None
    if isinstance(e, (EFst, ESnd)):
        a = _blc_value(e.arg)
        return ValueWitness(e, "fst" if isinstance(e, EFst) else "snd", (a,)) if a else None
    inj = blc_injection(e)
    if inj:
        a = _blc_value(inj[1])
        return ValueWitness(e, inj[0], (a,)) if a else None
    return None


def _dc_value(m) -> Optional[ValueWitness]:
    if isinstance(m, TVar):
        return ValueWitness(m, "var")
    if isinstance(m, TPair):
        a = _dc_value(m.left)
        b = a and _dc_value(m.right)
        return ValueWitness(m, "pair", (a, b)) if b else None
    if isinstance(m, (Inl, Inr)):
        a = _dc_value(m.arg)
        return ValueWitness(m, m.tag, (a,)) if a else None
    if isinstance(m, NotR):
        return ValueWitness(m, "not")
    if isinstance(m, TLam):
        return ValueWitness(m, "lam")
    if isinstance(m, CoAppT):
        a = _dc_value(m.term)
        return ValueWitness(m, "but-not", (a,)) if a else None
    inj = dc_injection(m)
    if inj:
        a = _dc_value(inj[1])
        return ValueWitness(m, "comp-" + inj[0], (a,)) if a else None
    return None


# --------------------------------------------------------------------------
# Evaluation contexts

_FRAME_FIELD = {
    "app-fn": "fn",
    "app-arg": "arg",
    "pair-left": "left",
    "pair-right": "right",
    "fst": "arg",
    "snd": "arg",
    "inl": "arg",
    "inr": "arg",
    "coapp": "term",
}


@dataclass(frozen=True)
class EvalCtx:
    """One-hole evaluation context, frames listed outermost first.

    Frames are ``(kind, payload)``; the payload is the sibling object (or the
    annotation for DC injections).
    """

    calculus: str
    frames: tuple = ()

    @property
    def trivial(self) -> bool:
        return not self.frames

    def path(self) -> tuple:
        return tuple(_FRAME_FIELD[k] for k, _ in self.frames)

    def fill(self, e: Node) -> Node:
        for kind, p in reversed(self.frames):
            e = _plug(self.calculus, kind, p, e)
        return e

    def push(self, kind: str, payload) -> "EvalCtx":
        return EvalCtx(self.calculus, self.frames + ((kind, payload),))

    def __str__(self) -> str:
        hole = EVar("{-}") if self.calculus == "blc" else TVar("{-}")
        return str(self.fill(hole))


def _plug(calculus, kind, p, e):
    if calculus == "blc":
        if kind == "app-fn":
            return EApp(e, p)
        if kind == "app-arg":
            return EApp(p, e)
        if kind == "pair-left":
            return EPair(e, p)
        if kind == "pair-right":
            return EPair(p, e)
        if kind == "fst":
            return EFst(e)
        if kind == "snd":
            return ESnd(e)
    else:
        if kind == "pair-left":
            return TPair(e, p)
        if kind == "pair-right":
            return TPair(p, e)
        if kind == "inl":
            return Inl(p, e)
        if kind == "inr":
            return Inr(p, e)
        if kind == "coapp":
            return CoAppT(e, p)
    raise ValueError(f"bad frame {kind}")


WHOLE_IS_VALUE = "whole-is-value"


def decompose(e: Node) -> Union[tuple, str]:
    """Leftmost-outermost split of a non-value into ``(EvalCtx, focus)``.

    The value grammar is read literally here, so ``fst (V0, V1)`` counts as a
    value. Returns :data:`WHOLE_IS_VALUE` for values.
    """
    if is_value(e):
        return WHOLE_IS_VALUE
    return _decompose(e, EvalCtx(e.calculus))


def _decompose(e, ctx):
    val = is_value
    if isinstance(e, (EApp, EPair, TPair)):
        a, b = (e.fn, e.arg) if isinstance(e, EApp) else (e.left, e.right)
        ka, kb = ("app-fn", "app-arg") if isinstance(e, EApp) else ("pair-left", "pair-right")
        if not val(a):
            return _decompose(a, ctx.push(ka, b))
        if not val(b):
            return _decompose(b, ctx.push(kb, a))
        return ctx, e
    if isinstance(e, (EFst, ESnd)) and not val(e.arg):
        return _decompose(e.arg, ctx.push("fst" if isinstance(e, EFst) else "snd", None))
    if isinstance(e, (Inl, Inr)) and not val(e.arg):
        return _decompose(e.arg, ctx.push(e.tag, e.ty))
    if isinstance(e, CoAppT) and not val(e.term):
        return _decompose(e.term, ctx.push("coapp", e.coterm))
    return ctx, e


# --------------------------------------------------------------------------
# Single steps


@dataclass(frozen=True)
class StepResult:
    next: Node
    rule: str
    path: tuple
    before: Node
    after: Node


@dataclass(frozen=True)
class AuditStep:
    rule: str
    path: tuple
    before: Node
    after: Node

    def line(self) -> str:
        where = ".".join(self.path) if self.path else "top"
        return f"RULE {self.rule} AT {where} : {self.before} --> {self.after}"


def step(n: Node, supply: Optional[NameSupply] = None) -> Optional[Node]:
    """The unique successor of a command or statement, or None."""
    r = step_info(n, supply)
    return r.next if r else None


def step_info(n: Node, supply: Optional[NameSupply] = None) -> Optional[StepResult]:
    if supply is None:
        supply = supply_for(n)
    if isinstance(n, Cut):
        return _blc_step(n, supply)
    if isinstance(n, DCut):
        return _dc_step(n, supply)
    raise TypeError(f"step needs a command or statement, got {n.sort}")


def _whole(n, rule, new):
    return StepResult(new, rule, (), n, new)


def _blc_step(n: Cut, supply: NameSupply) -> Optional[StepResult]:
    e, c = n.expr, n.cont
    if isinstance(e, EMu):
        if isinstance(c, CMu) and _blc_value(e):
            return _whole(n, "betaR", subst(c.body, (EXPR_NS, c.var), e, supply))
        return _whole(n, "betaL", subst(e.body, (CONT_NS, e.covar), c, supply))
    r = _blc_redex(e, EvalCtx("blc"), supply)
    kind = r[0]
    if kind == "redex":
        _, path, rule, redex, contractum = r
        new = Cut(replace_at(e, path, contractum), c)
        return StepResult(new, rule, ("expr",) + path, redex, contractum)
    if kind == "mu":
        _, ctx, focus = r
        x = supply.fresh("expr", avoid=all_names(n))
        new = Cut(focus, CMu(x, focus.ty, Cut(ctx.fill(EVar(x, focus.ty)), c)))
        return _whole(n, "zeta", new)
    if kind == "blocked":
        return None
    # the expression is a value
    if isinstance(c, CMu):
        return _whole(n, "betaR", subst(c.body, (EXPR_NS, c.var), e, supply))
    r = _cont_redex(c, (), supply)
    if r is not None:
        path, rule, redex, contractum = r
        new = Cut(e, replace_at(c, path, contractum))
        return StepResult(new, rule, ("cont",) + path, redex, contractum)
    return _proj_of_mu(n, supply)


def _blc_redex(e, ctx: EvalCtx, supply):
    """Find the next redex in evaluation position, projections of pairs first."""
    if isinstance(e, EApp):
        r = _blc_redex(e.fn, ctx.push("app-fn", e.arg), supply)
        if r[0] != "value":
            return r
        r = _blc_redex(e.arg, ctx.push("app-arg", e.fn), supply)
        if r[0] != "value":
            return r
        if isinstance(e.fn, ELam):
            out = subst(e.fn.body, (EXPR_NS, e.fn.var), e.arg, supply)
            return ("redex", ctx.path(), "beta-lam", e, out)
        return ("blocked",)
    if isinstance(e, EPair):
        r = _blc_redex(e.left, ctx.push("pair-left", e.right), supply)
        if r[0] != "value":
            return r
        return _blc_redex(e.right, ctx.push("pair-right", e.left), supply)
    if isinstance(e, (EFst, ESnd)):
        first = isinstance(e, EFst)
        r = _blc_redex(e.arg, ctx.push("fst" if first else "snd", None), supply)
        if r[0] != "value":
            return r
        if isinstance(e.arg, EPair):
            out = e.arg.left if first else e.arg.right
            return ("redex", ctx.path(), "beta-fst" if first else "beta-snd", e, out)
        return ("value",)
    if isinstance(e, EMu):
        if _blc_value(e):
            return ("value",)
        return ("mu", ctx, e)
    return ("value",)


def _cont_redex(c, path, supply):
    if isinstance(c, CApp):
        if isinstance(c.fn, CLam):
            out = subst(c.fn.body, (CONT_NS, c.fn.covar), c.arg, supply)
            return path, "beta-colam", c, out
        return _cont_redex(c.fn, path + ("fn",), supply)
    if isinstance(c, (CFst, CSnd)):
        first = isinstance(c, CFst)
        if isinstance(c.arg, CPair):
            return path, "beta-cofst" if first else "beta-cosnd", c, (c.arg.left if first else c.arg.right)
        return _cont_redex(c.arg, path + ("arg",), supply)
    return None


def _proj_of_mu(n: Cut, supply):
    """< V | fst (snd (mu x. N)) >  to  < inl (inr V) | mu x. N >.

    Each projection is peeled by reading betaL backwards: for a value V,
    < V | fst C > is the betaL-contractum of < mu 'a. < V | fst 'a > | C >.
    """
    projs = []
    c = n.cont
    while isinstance(c, (CFst, CSnd)):
        projs.append(c)
        c = c.arg
    if not projs or not isinstance(c, CMu):
        return None
    tys = [c.ty]
    for p in reversed(projs[1:]):
        t = tys[-1]
        if not isinstance(t, Or):
            return None
        tys.append(t.left if isinstance(p, CFst) else t.right)
    if not isinstance(tys[-1], Or):
        return None
    tys.reverse()  # tys[i] is the type of projs[i].arg
    v = n.expr
    avoid = all_names(n)
    for p, t in zip(projs, tys):
        a = supply.fresh("cont", avoid=avoid)
        proj = CFst(CVar(a, t)) if isinstance(p, CFst) else CSnd(CVar(a, t))
        v = EMu(a, t, Cut(v, proj))
    new = Cut(v, c)
    rule = "+".join(["betaL^-1"] * len(projs))
    return _whole(n, rule, new)


def _dc_step(s: DCut, supply: NameSupply) -> Optional[StepResult]:
    m, k = s.term, s.coterm
    if isinstance(m, TComp):
        if isinstance(k, KComp) and _dc_value(m):
            return _whole(s, "betaR", subst(k.body, (EXPR_NS, k.var), m, supply))
        return _whole(s, "betaL", subst(m.body, (CONT_NS, m.covar), k, supply))
    r = _dc_redex(m, EvalCtx("dc"))
    if r is not None:
        ctx, focus = r
        x = supply.fresh("expr", avoid=all_names(s))
        new = DCut(focus, KComp(x, focus.ty, DCut(ctx.fill(TVar(x)), k)))
        rule = "zeta<-" if len(ctx.frames) == 1 and ctx.frames[0][0] == "coapp" else "zeta"
        return _whole(s, rule, new)
    # the term is a value
    if isinstance(k, KComp):
        return _whole(s, "betaR", subst(k.body, (EXPR_NS, k.var), m, supply))
    if isinstance(m, TPair) and isinstance(k, (FstK, SndK)):
        first = isinstance(k, FstK)
        return _whole(s, "beta-and0" if first else "beta-and1", DCut(m.left if first else m.right, k.arg))
    if isinstance(m, (Inl, Inr)) and isinstance(k, KPair):
        left = isinstance(m, Inl)
        return _whole(s, "beta-or0" if left else "beta-or1", DCut(m.arg, k.left if left else k.right))
    if isinstance(m, NotR) and isinstance(k, NotL):
        return _whole(s, "beta-not", DCut(k.arg, m.arg))
    if isinstance(m, TLam) and isinstance(k, AppK):
        lam = m
        if occurs_free(k.coterm, EXPR_NS, lam.var):
            nv = supply.fresh("expr", avoid=all_names(s))
            lam = TLam(nv, lam.ty, subst(lam.body, (EXPR_NS, lam.var), TVar(nv), supply))
        return _whole(s, "beta->", DCut(k.term, KComp(lam.var, lam.ty, DCut(lam.body, k.coterm))))
    if isinstance(m, CoAppT) and isinstance(k, KLam):
        lam = k
        if occurs_free(m.term, CONT_NS, lam.covar):
            na = supply.fresh("cont", avoid=all_names(s))
            lam = KLam(na, lam.ty, subst(lam.body, (CONT_NS, lam.covar), KVar(na), supply))
        return _whole(s, "beta<-", DCut(TComp(lam.covar, lam.ty, DCut(m.term, lam.body)), m.coterm))
    return _dc_proj_of_comp(s, supply)


def _dc_proj_of_comp(s: DCut, supply):
    """W * fst[snd[cocomp x. S]]  to  (comp 'b. (comp 'a. (W * fst['a]) * snd['b])) * cocomp x. S."""
    projs = []
    k = s.coterm
    while isinstance(k, (FstK, SndK)):
        projs.append(k)
        k = k.arg
    if not projs or not isinstance(k, KComp):
        return None
    w = s.term
    avoid = all_names(s)
    for p in projs:
        a = supply.fresh("cont", avoid=avoid)
        t = p.ty.left if isinstance(p, FstK) else p.ty.right
        w = TComp(a, t, DCut(w, type(p)(p.ty, KVar(a))))
    return _whole(s, "+".join(["betaL^-1"] * len(projs)), DCut(w, k))


def _dc_redex(m, ctx: EvalCtx):
    """The innermost non-value comp in evaluation position, with its context."""
    if isinstance(m, TPair):
        r = _dc_redex(m.left, ctx.push("pair-left", m.right))
        if r is not None:
            return r
        return _dc_redex(m.right, ctx.push("pair-right", m.left))
    if isinstance(m, (Inl, Inr)):
        return _dc_redex(m.arg, ctx.push(m.tag, m.ty))
    if isinstance(m, CoAppT):
        return _dc_redex(m.term, ctx.push("coapp", m.coterm))
    if isinstance(m, TComp):
        if _dc_value(m) or ctx.trivial:
            return None
        return ctx, m
    return None


# --------------------------------------------------------------------------
# Running to a final state


def classify(n: Node) -> str:
    """terminal, open-blocked or stuck (for a state with no successor)."""
    if isinstance(n, Cut):
        e, c = n.expr, n.cont
        if _blc_redex(e, EvalCtx("blc"), NameSupply())[0] == "value":
            if isinstance(c, (Bullet, CVar)):
                return "terminal"
            head = c
            while isinstance(head, (CApp, CFst, CSnd)):
                head = head.fn if isinstance(head, CApp) else head.arg
            return "open-blocked" if isinstance(head, CVar) else "stuck"
        ev, cv = free_vars(e)
        return "open-blocked" if ev or cv else "stuck"
    m, k = n.term, n.coterm
    if isinstance(k, KVar) and _dc_value(m):
        return "terminal"
    if isinstance(m, TVar) or isinstance(k, KVar):
        return "open-blocked"
    return "stuck"


def normalize(n: Node, fuel: int = DEFAULT_FUEL, supply: Optional[NameSupply] = None, trace: Optional[list] = None):
    """Iterate :func:`step`; returns ``(final, steps)`` or raises FuelExhausted."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if supply is None:
        supply = supply_for(n)
    steps = 0
    while True:
        r = step_info(n, supply)
        if r is None:
            return n, steps
        if steps >= fuel:
            raise FuelExhausted(n, steps)
        steps += 1
        if trace is not None:
            trace.append(AuditStep(r.rule, r.path, r.before, r.after))
        n = r.next


# --------------------------------------------------------------------------
# Deep normalization with the eta post-pass


class Normalizer:
    """Normal forms under binders, read back by cutting against fresh names.

    All machine runs share one fuel budget. ``trace`` collects every step and
    every eta contraction.
    """

    def __init__(self, fuel: int = DEFAULT_FUEL, supply: Optional[NameSupply] = None, dialect: str = "arrow"):
        self.fuel = fuel
        self.used = 0
        self.supply = supply or NameSupply()
        self.dialect = dialect
        self.trace: list = []

    # bookkeeping
    def _run(self, n, scope):
        while True:
            r = step_info(n, self.supply)
            if r is None:
                return n
            if self.used >= self.fuel:
                raise FuelExhausted(n, self.used)
            self.used += 1
            self.trace.append(AuditStep(r.rule, scope + r.path, r.before, r.after))
            n = r.next

    def _eta(self, rule, scope, before, after):
        self.trace.append(AuditStep(rule, scope, before, after))
        return after

    def _type(self, env, d):
        if d.calculus == "blc":
            return blc_type(env, d, allow_shadowing=True)
        return dc_type(env, d, self.dialect, allow_shadowing=True)

    def _fresh(self, kind, *objs):
        avoid = set()
        for o in objs:
            avoid |= all_names(o)
        return self.supply.fresh(kind, avoid=avoid)

    # commands / statements
    def nf_cmd(self, n, env: TypeEnv, scope: tuple = ()):
        n = self._run(n, scope)
        while True:
            n2 = self._parts(n, env, scope)
            if n2 is n or step_info(n2, self.supply) is None:
                return n2
            n = self._run(n2, scope)

    def _parts(self, n, env, scope):
        if isinstance(n, Cut):
            e = self._expr_parts(n.expr, env, scope + ("expr",))
            c = self._cont_parts(n.cont, env, scope + ("cont",))
            return n if (e is n.expr and c is n.cont) else Cut(e, c)
        m = self._term_parts(n.term, env, scope + ("term",))
        k = self._coterm_parts(n.coterm, env, scope + ("coterm",))
        return n if (m is n.term and k is n.coterm) else DCut(m, k)

    # BLC
    def nf_expr(self, e, env, scope=()):
        if isinstance(e, (Const, EVar)):
            return e
        inj = self._inj_expr(e, env, scope)
        if inj is not None:
            return inj
        t = self._type(env, e)
        k = self._fresh("cont", e)
        n = self.nf_cmd(Cut(e, CVar(k, t)), env.extend(CONT_NS, k, t), scope)
        return self._eta_mu(EMu(k, t, n), scope)

    def nf_cont(self, c, env, scope=()):
        if isinstance(c, (Bullet, CVar)):
            return c
        t = self._type(env, c)
        x = self._fresh("expr", c)
        n = self.nf_cmd(Cut(EVar(x, t), c), env.extend(EXPR_NS, x, t), scope)
        return self._eta_comu(CMu(x, t, n), scope)

    def _expr_parts(self, e, env, scope):
        if isinstance(e, (Const, EVar)):
            return e
        if isinstance(e, ELam):
            b = self.nf_expr(e.body, env.extend(EXPR_NS, e.var, e.ty), scope + ("body",))
            return self._eta_lam(e if b is e.body else ELam(e.var, e.ty, b), scope)
        if isinstance(e, EMu):
            inj = self._inj_expr(e, env, scope)
            if inj is not None:
                return inj
            b = self.nf_cmd(e.body, env.extend(CONT_NS, e.covar, e.ty), scope + ("body",))
            return self._eta_mu(e if b is e.body else EMu(e.covar, e.ty, b), scope)
        if isinstance(e, EApp):
            f = self.nf_expr(e.fn, env, scope + ("fn",))
            a = self.nf_expr(e.arg, env, scope + ("arg",))
            return e if (f is e.fn and a is e.arg) else EApp(f, a)
        if isinstance(e, EPair):
            a = self.nf_expr(e.left, env, scope + ("left",))
            b = self.nf_expr(e.right, env, scope + ("right",))
            out = e if (a is e.left and b is e.right) else EPair(a, b)
            return self._eta_pair(out, scope)
        if isinstance(e, (EFst, ESnd)):
            a = self.nf_expr(e.arg, env, scope + ("arg",))
            return e if a is e.arg else type(e)(a)
        raise TypeError(e)

    def _inj_expr(self, e, env, scope):
        # An injection value keeps its shape; running it would merge nested
        # injections into a non-value and let zeta undo the merge forever.
        inj = blc_injection(e)
        if inj is None or not _blc_value(inj[1]):
            return None
        v = self.nf_expr(inj[1], env, scope + ("body", "expr"))
        if not _blc_value(v):
            return None
        return e if v is inj[1] else EMu(e.covar, e.ty, Cut(v, e.body.cont))

    def _cont_parts(self, c, env, scope):
        if isinstance(c, (Bullet, CVar)):
            return c
        if isinstance(c, CLam):
            b = self.nf_cont(c.body, env.extend(CONT_NS, c.covar, c.ty), scope + ("body",))
            return self._eta_colam(c if b is c.body else CLam(c.covar, c.ty, b), scope)
        if isinstance(c, CMu):
            b = self.nf_cmd(c.body, env.extend(EXPR_NS, c.var, c.ty), scope + ("body",))
            return self._eta_comu(c if b is c.body else CMu(c.var, c.ty, b), scope)
        if isinstance(c, CApp):
            f = self.nf_cont(c.fn, env, scope + ("fn",))
            a = self.nf_cont(c.arg, env, scope + ("arg",))
            return c if (f is c.fn and a is c.arg) else CApp(f, a)
        if isinstance(c, CPair):
            a = self.nf_cont(c.left, env, scope + ("left",))
            b = self.nf_cont(c.right, env, scope + ("right",))
            out = c if (a is c.left and b is c.right) else CPair(a, b)
            return self._eta_copair(out, scope)
        if isinstance(c, (CFst, CSnd)):
            a = self.nf_cont(c.arg, env, scope + ("arg",))
            return c if a is c.arg else type(c)(a)
        raise TypeError(c)

    def _eta_lam(self, e, scope):
        b = e.body
        if isinstance(b, EApp) and isinstance(b.arg, EVar) and b.arg.name == e.var:
            v = b.fn
            if _blc_value(v) and not occurs_free(v, EXPR_NS, e.var):
                return self._eta("eta-lam", scope, e, v)
        return e

    def _eta_pair(self, e, scope):
        if isinstance(e, EPair) and isinstance(e.left, EFst) and isinstance(e.right, ESnd):
            v = e.left.arg
            if alpha_eq(v, e.right.arg) and _blc_value(v):
                return self._eta("eta-pair", scope, e, v)
        return e

    def _eta_mu(self, e, scope):
        if isinstance(e, EMu):
            n = e.body
            if isinstance(n.cont, CVar) and n.cont.name == e.covar and not occurs_free(n.expr, CONT_NS, e.covar):
                return self._eta("eta-mu", scope, e, n.expr)
            return self._split(e, scope)
        return e

    def _split(self, m, scope):
        """Canonical readback of ``mu 'k. < V | fst (snd 'k) >``: nested injections.

        The merged form is not a value; splitting it by betaL^-1 keeps the
        read-back value-shaped. The dual-calculus projection chain is the same.
        """
        blc = isinstance(m, EMu)
        body = m.body
        w, chain = (body.expr, body.cont) if blc else (body.term, body.coterm)
        wraps = (CFst, CSnd) if blc else (FstK, SndK)
        var = CVar if blc else KVar
        frames = []
        while isinstance(chain, wraps):
            frames.append(chain)
            chain = chain.arg
        if len(frames) < 2 or not (isinstance(chain, var) and chain.name == m.covar):
            return m
        if occurs_free(w, CONT_NS, m.covar) or isinstance(w, (EPair, TPair)):
            return m
        if not (_blc_value(w) if blc else _dc_value(w)):
            return m
        avoid = all_names(m)
        if blc:
            # tys[j]: type of the continuation frames[j]
            tys = [None] * len(frames)
            t = m.ty
            for j in reversed(range(len(frames))):
                t = t.left if isinstance(frames[j], CFst) else t.right
                tys[j] = t
        out = w
        for i, f in enumerate(frames):
            last = i == len(frames) - 1
            a = m.covar if last else self.supply.fresh("cont", avoid=avoid)
            avoid.add(a)
            if blc:
                t = m.ty if last else tys[i + 1]
                out = EMu(a, t, Cut(out, type(f)(CVar(a, t))))
            else:
                out = TComp(a, f.ty.left if isinstance(f, FstK) else f.ty.right, DCut(out, type(f)(f.ty, KVar(a))))
        return self._eta("betaL^-1", scope, m, out)

    def _eta_colam(self, c, scope):
        b = c.body
        if isinstance(b, CApp) and isinstance(b.arg, CVar) and b.arg.name == c.covar:
            if not occurs_free(b.fn, CONT_NS, c.covar):
                return self._eta("eta-colam", scope, c, b.fn)
        return c

    def _eta_copair(self, c, scope):
        if isinstance(c, CPair) and isinstance(c.left, CFst) and isinstance(c.right, CSnd):
            if alpha_eq(c.left.arg, c.right.arg):
                return self._eta("eta-copair", scope, c, c.left.arg)
        return c

    def _eta_comu(self, c, scope):
        if isinstance(c, CMu):
            n = c.body
            if isinstance(n.expr, EVar) and n.expr.name == c.var and not occurs_free(n.cont, EXPR_NS, c.var):
                return self._eta("eta-comu", scope, c, n.cont)
        return c

    # DC
    def nf_term(self, m, env, scope=()):
        if isinstance(m, TVar):
            return m
        proj = self._proj_term(m, env, scope)
        if proj is not None:
            return proj
        t = self._type(env, m)
        k = self._fresh("cont", m)
        s = self.nf_cmd(DCut(m, KVar(k)), env.extend(CONT_NS, k, t), scope)
        return self._eta_r(TComp(k, t, s), scope)

    def nf_coterm(self, k, env, scope=()):
        if isinstance(k, KVar):
            return k
        t = self._type(env, k)
        x = self._fresh("expr", k)
        s = self.nf_cmd(DCut(TVar(x), k), env.extend(EXPR_NS, x, t), scope)
        return self._eta_l(KComp(x, t, s), scope)

    def _term_parts(self, m, env, scope):
        if isinstance(m, TVar):
            return m
        if isinstance(m, TPair):
            a = self.nf_term(m.left, env, scope + ("left",))
            b = self.nf_term(m.right, env, scope + ("right",))
            out = m if (a is m.left and b is m.right) else TPair(a, b)
            return self._eta_and(out, scope)
        if isinstance(m, (Inl, Inr)):
            a = self.nf_term(m.arg, env, scope + ("arg",))
            return m if a is m.arg else type(m)(m.ty, a)
        if isinstance(m, NotR):
            k = self.nf_coterm(m.arg, env, scope + ("arg",))
            return self._eta_not(m if k is m.arg else NotR(k), scope)
        if isinstance(m, TComp):
            proj = self._proj_term(m, env, scope)
            if proj is not None:
                return proj
            b = self.nf_cmd(m.body, env.extend(CONT_NS, m.covar, m.ty), scope + ("body",))
            return self._eta_r(m if b is m.body else TComp(m.covar, m.ty, b), scope)
        if isinstance(m, TLam):
            b = self.nf_term(m.body, env.extend(EXPR_NS, m.var, m.ty), scope + ("body",))
            return self._eta_imp(m if b is m.body else TLam(m.var, m.ty, b), scope)
        if isinstance(m, CoAppT):
            a = self.nf_term(m.term, env, scope + ("term",))
            k = self.nf_coterm(m.coterm, env, scope + ("coterm",))
            return m if (a is m.term and k is m.coterm) else CoAppT(a, k)
        raise TypeError(m)

    def _proj_term(self, m, env, scope):
        # dual of _inj_expr: comp 'a. (W * fst['a]) stays a value
        proj = dc_injection(m)
        if proj is None or isinstance(proj[1], TPair) or not _dc_value(proj[1]):
            return None
        w = self.nf_term(proj[1], env, scope + ("body", "term"))
        if isinstance(w, TPair) or not _dc_value(w):
            return None
        return m if w is proj[1] else TComp(m.covar, m.ty, DCut(w, m.body.coterm))

    def _coterm_parts(self, k, env, scope):
        if isinstance(k, KVar):
            return k
        if isinstance(k, KPair):
            a = self.nf_coterm(k.left, env, scope + ("left",))
            b = self.nf_coterm(k.right, env, scope + ("right",))
            out = k if (a is k.left and b is k.right) else KPair(a, b)
            return self._eta_or(out, scope)
        if isinstance(k, (FstK, SndK)):
            a = self.nf_coterm(k.arg, env, scope + ("arg",))
            return k if a is k.arg else type(k)(k.ty, a)
        if isinstance(k, NotL):
            a = self.nf_term(k.arg, env, scope + ("arg",))
            return k if a is k.arg else NotL(a)
        if isinstance(k, KComp):
            b = self.nf_cmd(k.body, env.extend(EXPR_NS, k.var, k.ty), scope + ("body",))
            return self._eta_l(k if b is k.body else KComp(k.var, k.ty, b), scope)
        if isinstance(k, KLam):
            b = self.nf_coterm(k.body, env.extend(CONT_NS, k.covar, k.ty), scope + ("body",))
            return self._eta_gets(k if b is k.body else KLam(k.covar, k.ty, b), scope)
        if isinstance(k, AppK):
            a = self.nf_term(k.term, env, scope + ("term",))
            b = self.nf_coterm(k.coterm, env, scope + ("coterm",))
            return k if (a is k.term and b is k.coterm) else AppK(a, b)
        raise TypeError(k)

    def _eta_r(self, m, scope):
        if isinstance(m, TComp):
            s = m.body
            if isinstance(s.coterm, KVar) and s.coterm.name == m.covar and not occurs_free(s.term, CONT_NS, m.covar):
                return self._eta("etaR", scope, m, s.term)
            return self._split(m, scope)
        return m

    def _eta_l(self, k, scope):
        if isinstance(k, KComp):
            s = k.body
            if isinstance(s.term, TVar) and s.term.name == k.var and not occurs_free(s.coterm, EXPR_NS, k.var):
                return self._eta("etaL", scope, k, s.coterm)
        return k

    def _eta_and(self, m, scope):
        if not isinstance(m, TPair):
            return m
        a = dc_injection(m.left)
        b = dc_injection(m.right)
        if a and b and a[0] == "fst" and b[0] == "snd" and alpha_eq(a[1], b[1]) and _dc_value(a[1]):
            w = a[1]
            if not occurs_free(w, CONT_NS, m.left.covar) and not occurs_free(b[1], CONT_NS, m.right.covar):
                return self._eta("eta-and", scope, m, w)
        return m

    def _eta_or(self, k, scope):
        if not (isinstance(k, KPair) and isinstance(k.left, KComp) and isinstance(k.right, KComp)):
            return k
        sl, sr = k.left.body, k.right.body
        if (
            isinstance(sl.term, Inl)
            and isinstance(sl.term.arg, TVar)
            and sl.term.arg.name == k.left.var
            and isinstance(sr.term, Inr)
            and isinstance(sr.term.arg, TVar)
            and sr.term.arg.name == k.right.var
            and alpha_eq(sl.coterm, sr.coterm)
            and not occurs_free(sl.coterm, EXPR_NS, k.left.var)
            and not occurs_free(sr.coterm, EXPR_NS, k.right.var)
        ):
            return self._eta("eta-or", scope, k, sl.coterm)
        return k

    def _eta_not(self, m, scope):
        if isinstance(m, NotR) and isinstance(m.arg, KComp):
            kc = m.arg
            s = kc.body
            if (
                isinstance(s.coterm, NotL)
                and isinstance(s.coterm.arg, TVar)
                and s.coterm.arg.name == kc.var
                and _dc_value(s.term)
                and not occurs_free(s.term, EXPR_NS, kc.var)
            ):
                return self._eta("eta-not", scope, m, s.term)
        return m

    def _eta_imp(self, m, scope):
        if isinstance(m, TLam) and isinstance(m.body, TComp):
            c = m.body
            s = c.body
            k = s.coterm
            if (
                isinstance(k, AppK)
                and isinstance(k.term, TVar)
                and k.term.name == m.var
                and isinstance(k.coterm, KVar)
                and k.coterm.name == c.covar
                and _dc_value(s.term)
                and not occurs_free(s.term, EXPR_NS, m.var)
                and not occurs_free(s.term, CONT_NS, c.covar)
            ):
                return self._eta("eta->", scope, m, s.term)
        return m

    def _eta_gets(self, k, scope):
        if isinstance(k, KLam) and isinstance(k.body, KComp):
            c = k.body
            s = c.body
            t = s.term
            if (
                isinstance(t, CoAppT)
                and isinstance(t.term, TVar)
                and t.term.name == c.var
                and isinstance(t.coterm, KVar)
                and t.coterm.name == k.covar
                and not occurs_free(s.coterm, EXPR_NS, c.var)
                and not occurs_free(s.coterm, CONT_NS, k.covar)
            ):
                return self._eta("eta<-", scope, k, s.coterm)
        return k


# --------------------------------------------------------------------------
# Equivalence verdicts


@dataclass(frozen=True)
class Equal:
    normal_form: Node
    trace: tuple = ()

    verdict = "EQUAL"


@dataclass(frozen=True)
class Distinct:
    normal_forms: tuple
    trace: tuple = ()

    verdict = "DISTINCT"


@dataclass(frozen=True)
class Unknown:
    reason: str  # fuel | open-term | stuck
    detail: str = ""
    normal_forms: tuple = ()
    trace: tuple = ()

    verdict = "UNKNOWN"


EqVerdict = Union[Equal, Distinct, Unknown]

_DATA_NODES = (Const, EVar, EPair, EFst, ESnd, Bullet, CVar, Cut, TVar, TPair, Inl, Inr, KVar, DCut, FstK, SndK)


def observably_different(a: Node, b: Node) -> bool:
    """True when two normal forms differ outside every binder.

    Only first-order structure is compared: constants, free variables,
    pairs, projections and injections. Anything below a lambda or a
    non-injection mu is treated as unknown.
    """
    ia = blc_injection(a) or dc_injection(a)
    ib = blc_injection(b) or dc_injection(b)
    if ia and ib:
        bound_a = a.covar
        bound_b = b.covar
        if occurs_free(ia[1], CONT_NS, bound_a) or occurs_free(ib[1], CONT_NS, bound_b):
            return False
        return ia[0] != ib[0] or observably_different(ia[1], ib[1])
    if ia or ib:
        other = b if ia else a
        return isinstance(other, _DATA_NODES) and not isinstance(other, (Cut, DCut))
    if not (isinstance(a, _DATA_NODES) and isinstance(b, _DATA_NODES)):
        return False
    if type(a) is not type(b):
        return True
    if a.var_ns is not None:
        return a.name != b.name
    for f in a.data:
        if getattr(a, f) != getattr(b, f):
            return True
    return any(observably_different(getattr(a, k), getattr(b, k)) for k in a.kids)


def _initial_env(env, *objs):
    env = env or EMPTY_ENV
    pos, neg = dict(env.pos), dict(env.neg)
    for o in objs:
        if o.calculus == "blc":
            for (ns, name), t in free_var_types(o).items():
                (pos if ns == EXPR_NS else neg).setdefault(name, t)
        else:
            rp, rn = reserved_types(o)
            for n, t in rp.items():
                pos.setdefault(n, t)
            for n, t in rn.items():
                neg.setdefault(n, t)
    return TypeEnv.of(pos, neg)


def _check_types(norm, env, d0, d1):
    try:
        t0 = norm._type(env, d0)
        t1 = norm._type(env, d1)
    except UnboundVariable as exc:
        return Unknown("open-term", str(exc))
    if t0 != t1:
        raise TypeCheckError("equivalence", d1, expected=t0, found=t1, message="sides have different types")
    return t0


def eq_v(d0: Node, d1: Node, fuel: int = DEFAULT_FUEL, env: Optional[TypeEnv] = None) -> EqVerdict:
    """Bounded, sound check of BLC call-by-value equality."""
    if d0.calculus != "blc" or d1.calculus != "blc":
        raise TypeError("eq_v compares BLC objects")
    return _eq(d0, d1, fuel, env, "arrow")


def eq_dcv(o0: Node, o1: Node, fuel: int = DEFAULT_FUEL, dialect: str = "arrow", env: Optional[TypeEnv] = None) -> EqVerdict:
    """Bounded, sound check of call-by-value dual-calculus equality."""
    if o0.calculus != "dc" or o1.calculus != "dc":
        raise TypeError("eq_dcv compares dual-calculus objects")
    return _eq(o0, o1, fuel, env, dialect)


def _eq(d0, d1, fuel, env, dialect):
    if d0.sort != d1.sort:
        raise TypeError(f"cannot compare a {d0.sort} with a {d1.sort}")
    env = _initial_env(env, d0, d1)
    supply = supply_for(d0, d1)
    probe = Normalizer(fuel, supply, dialect)
    t = _check_types(probe, env, d0, d1)
    if isinstance(t, Unknown):
        return t
    blc = d0.calculus == "blc"
    sort = d0.sort
    if sort in ("expr", "term"):
        k = supply.fresh("cont")
        env2 = env.extend(CONT_NS, k, t)
        wrap = (lambda d: Cut(d, CVar(k, t))) if blc else (lambda d: DCut(d, KVar(k)))
    elif sort in ("cont", "coterm"):
        x = supply.fresh("expr")
        env2 = env.extend(EXPR_NS, x, t)
        wrap = (lambda d: Cut(EVar(x, t), d)) if blc else (lambda d: DCut(TVar(x), d))
    else:
        env2 = env
        wrap = lambda d: d  # noqa: E731
    finals, traces = [], []
    for d in (d0, d1):
        norm = Normalizer(fuel, supply, dialect)
        try:
            nf = norm.nf_cmd(wrap(d), env2)
        except FuelExhausted as exc:
            return Unknown("fuel", str(exc), trace=tuple(norm.trace))
        except UnboundVariable as exc:
            return Unknown("open-term", str(exc), trace=tuple(norm.trace))
        finals.append(nf)
        traces.append(tuple(norm.trace))
    trace = traces[0] + traces[1]
    if alpha_eq(finals[0], finals[1]):
        return Equal(finals[0], trace)
    kinds = [classify(f) for f in finals]
    if kinds == ["terminal", "terminal"] and observably_different(finals[0], finals[1]):
        return Distinct(tuple(finals), trace)
    reason = "stuck" if "stuck" in kinds else ("open-term" if "open-blocked" in kinds else "stuck")
    return Unknown(reason, f"normal forms differ ({kinds[0]} / {kinds[1]})", tuple(finals), trace)


def axiom_components(rule: str) -> list:
    return rule.split("+")
