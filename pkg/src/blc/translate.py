"""Translations between CbV-BLC and the arrow dialect of the dual calculus.

``sharp`` maps BLC into the dual calculus and ``flat`` maps back. Both are
type-directed: the generated projections, comps and mu-abstractions carry
annotations taken from type synthesis. BLC constants ``#c:o`` and ``@o``
become the reserved variables ``cst$c_o`` and ``blt$o``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import EvalCtx
from .syntax import (
    BLT_PREFIX,
    CONT_NS,
    CST_PREFIX,
    EXPR_NS,
    And,
    AppK,
    Base,
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
    Gets,
    Imp,
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
    all_names,
    free_var_types,
    get_at,
    reserved_types,
    split_cst,
    subst,
    supply_for,
    walk,
)
from .typecheck import EMPTY_ENV, DialectError, TypeCheckError, TypeEnv, UnboundVariable, blc_type, dc_type


def cst_name(c: str, o: str) -> str:
    return f"{CST_PREFIX}{c}_{o}"


def blt_name(o: str) -> str:
    return f"{BLT_PREFIX}{o}"


@dataclass(frozen=True)
class ConstMap:
    """Constants of a BLC object and their reserved dual-calculus names."""

    pos: dict = field(default_factory=dict)  # cst$c_o -> (c, o)
    neg: dict = field(default_factory=dict)  # blt$o -> o

    def dc_env(self, env: TypeEnv = EMPTY_ENV) -> TypeEnv:
        pos = dict(env.pos)
        neg = dict(env.neg)
        for n, (_, o) in self.pos.items():
            pos[n] = Base(o)
        for n, o in self.neg.items():
            neg[n] = Base(o)
        return TypeEnv.of(pos, neg)


def const_map(d: Node) -> ConstMap:
    """The ConstMap entries a BLC object actually uses."""
    pos, neg = {}, {}
    for n in walk(d):
        if isinstance(n, Const):
            pos[cst_name(n.name, n.ty.name)] = (n.name, n.ty.name)
        elif isinstance(n, Bullet):
            neg[blt_name(n.ty.name)] = n.ty.name
    return ConstMap(pos, neg)


def blc_env(d: Node, env: Optional[TypeEnv] = None) -> TypeEnv:
    """``env`` plus the occurrence annotations of free variables of ``d``."""
    env = env or EMPTY_ENV
    pos, neg = dict(env.pos), dict(env.neg)
    for (ns, name), t in free_var_types(d).items():
        (pos if ns == EXPR_NS else neg).setdefault(name, t)
    return TypeEnv.of(pos, neg)


def dc_env(o: Node, env: Optional[TypeEnv] = None) -> TypeEnv:
    """``env`` plus types for the reserved constant names free in ``o``."""
    env = env or EMPTY_ENV
    rp, rn = reserved_types(o)
    return TypeEnv.of({**rp, **env.pos}, {**rn, **env.neg})


def strip_env(env: TypeEnv) -> TypeEnv:
    """Drop reserved names from a dual-calculus environment."""
    keep = lambda m: {k: v for k, v in m.items() if not k.startswith((CST_PREFIX, BLT_PREFIX))}  # noqa: E731
    return TypeEnv.of(keep(env.pos), keep(env.neg))


class _Fresh:
    def __init__(self, supply, avoid):
        self.supply = supply
        self.avoid = set(avoid)

    def __call__(self, kind):
        n = self.supply.fresh(kind, avoid=self.avoid)
        self.avoid.add(n)
        return n


# --------------------------------------------------------------------------
# sharp


def sharp(d: Node, env: Optional[TypeEnv] = None, supply: Optional[NameSupply] = None) -> Node:
    """Translate a typed BLC object into the arrow dialect."""
    env = blc_env(d, env)
    fresh = _Fresh(supply or supply_for(d), all_names(d))
    return _Sharp(fresh).go(env, d)[0]


class _Sharp:
    def __init__(self, fresh):
        self.fresh = fresh

    def go(self, env, d):
        if isinstance(d, Const):
            return TVar(cst_name(d.name, d.ty.name)), d.ty
        if isinstance(d, EVar):
            t = env.lookup(EXPR_NS, d.name) or d.ty
            if t is None:
                raise UnboundVariable("Identity+", d, message=f"unbound variable {d.name}")
            return TVar(d.name), t
        if isinstance(d, ELam):
            b, tb = self.go(env.extend(EXPR_NS, d.var, d.ty), d.body)
            return TLam(d.var, d.ty, b), Imp(d.ty, tb)
        if isinstance(d, EApp):
            f, tf = self.go(env, d.fn)
            a, _ = self.go(env, d.arg)
            if not isinstance(tf, Imp):
                raise TypeCheckError("+->E", d, expected="A -> B", found=tf)
            al = self.fresh("cont")
            return TComp(al, tf.right, DCut(f, AppK(a, KVar(al)))), tf.right
        if isinstance(d, EPair):
            a, ta = self.go(env, d.left)
            b, tb = self.go(env, d.right)
            return TPair(a, b), And(ta, tb)
        if isinstance(d, (EFst, ESnd)):
            e, te = self.go(env, d.arg)
            if not isinstance(te, And):
                raise TypeCheckError("+/\\E", d, expected="A /\\ B", found=te)
            al = self.fresh("cont")
            first = isinstance(d, EFst)
            t = te.left if first else te.right
            proj = FstK(te, KVar(al)) if first else SndK(te, KVar(al))
            return TComp(al, t, DCut(e, proj)), t
        if isinstance(d, EMu):
            return TComp(d.covar, d.ty, self.go(env.extend(CONT_NS, d.covar, d.ty), d.body)[0]), d.ty
        if isinstance(d, Bullet):
            return KVar(blt_name(d.ty.name)), d.ty
        if isinstance(d, CVar):
            t = env.lookup(CONT_NS, d.name) or d.ty
            if t is None:
                raise UnboundVariable("Identity-", d, message=f"unbound covariable {d.name}")
            return KVar(d.name), t
        if isinstance(d, CLam):
            b, tb = self.go(env.extend(CONT_NS, d.covar, d.ty), d.body)
            return KLam(d.covar, d.ty, b), Gets(tb, d.ty)
        if isinstance(d, CApp):
            f, tf = self.go(env, d.fn)
            a, _ = self.go(env, d.arg)
            if not isinstance(tf, Gets):
                raise TypeCheckError("-<-E", d, expected="A <- B", found=tf)
            x = self.fresh("expr")
            return KComp(x, tf.left, DCut(CoAppT(TVar(x), a), f)), tf.left
        if isinstance(d, CPair):
            a, ta = self.go(env, d.left)
            b, tb = self.go(env, d.right)
            return KPair(a, b), Or(ta, tb)
        if isinstance(d, (CFst, CSnd)):
            c, tc = self.go(env, d.arg)
            if not isinstance(tc, Or):
                raise TypeCheckError("-\\/E", d, expected="A \\/ B", found=tc)
            x = self.fresh("expr")
            first = isinstance(d, CFst)
            t = tc.left if first else tc.right
            inj = Inl(tc, TVar(x)) if first else Inr(tc, TVar(x))
            return KComp(x, t, DCut(inj, c)), t
        if isinstance(d, CMu):
            return KComp(d.var, d.ty, self.go(env.extend(EXPR_NS, d.var, d.ty), d.body)[0]), d.ty
        if isinstance(d, Cut):
            e, te = self.go(env, d.expr)
            c, tc = self.go(env, d.cont)
            if te != tc:
                raise TypeCheckError("Non-contradiction", d, expected=te, found=tc)
            return DCut(e, c), None
        raise TypeError(f"not a BLC object: {d!r}")


def sharp_ctx(ctx: EvalCtx, k: Node, hole_ty, env: Optional[TypeEnv] = None, supply: Optional[NameSupply] = None) -> Node:
    """The coterm ``K'`` with ``sharp_K(ctx){M} = M * K'``.

    ``hole_ty`` is the type of the expressions that may fill the hole.
    """
    env = env or EMPTY_ENV
    fresh = _Fresh(supply or supply_for(k), all_names(k) | _ctx_names(ctx))
    h = fresh("expr")
    filled = ctx.fill(EVar(h, hole_ty))
    env = blc_env(filled, env).extend(EXPR_NS, h, hole_ty)
    path = ctx.path()
    tr = _Sharp(fresh)
    out = k
    for i, (kind, p) in enumerate(ctx.frames):
        t = blc_type(env, get_at(filled, path[: i + 1]), allow_shadowing=True)
        if kind == "app-fn":
            out = AppK(tr.go(env, p)[0], out)
        elif kind in ("fst", "snd"):
            out = FstK(t, out) if kind == "fst" else SndK(t, out)
        else:
            x = fresh("expr")
            if kind == "app-arg":
                body = DCut(tr.go(env, p)[0], AppK(TVar(x), out))
            elif kind == "pair-left":
                body = DCut(TPair(TVar(x), tr.go(env, p)[0]), out)
            else:
                body = DCut(TPair(tr.go(env, p)[0], TVar(x)), out)
            out = KComp(x, t, body)
    return out


def _ctx_names(ctx: EvalCtx) -> set:
    out = set()
    for _, p in ctx.frames:
        if isinstance(p, Node):
            out |= all_names(p)
    return out


# --------------------------------------------------------------------------
# flat


def flat(o: Node, env: Optional[TypeEnv] = None, supply: Optional[NameSupply] = None) -> Node:
    """Translate a typable arrow-dialect object into BLC."""
    env = dc_env(o, env)
    dc_type(env, o, "arrow", allow_shadowing=True)
    fresh = _Fresh(supply or supply_for(o), all_names(o))
    return _Flat(fresh).go(env, o)[0]


class _Flat:
    def __init__(self, fresh):
        self.fresh = fresh

    def go(self, env, o):
        if isinstance(o, TVar):
            if o.name.startswith(CST_PREFIX):
                c, b = split_cst(o.name)
                return Const(c, Base(b)), Base(b)
            t = env.lookup(EXPR_NS, o.name)
            return EVar(o.name, t), t
        if isinstance(o, KVar):
            if o.name.startswith(BLT_PREFIX):
                b = Base(o.name[len(BLT_PREFIX) :])
                return Bullet(b), b
            t = env.lookup(CONT_NS, o.name)
            return CVar(o.name, t), t
        if isinstance(o, TPair):
            a, ta = self.go(env, o.left)
            b, tb = self.go(env, o.right)
            return EPair(a, b), And(ta, tb)
        if isinstance(o, (Inl, Inr)):
            m, _ = self.go(env, o.arg)
            a = self.fresh("cont")
            proj = CFst(CVar(a, o.ty)) if isinstance(o, Inl) else CSnd(CVar(a, o.ty))
            return EMu(a, o.ty, Cut(m, proj)), o.ty
        if isinstance(o, TComp):
            return EMu(o.covar, o.ty, self.go(env.extend(CONT_NS, o.covar, o.ty), o.body)[0]), o.ty
        if isinstance(o, TLam):
            b, tb = self.go(env.extend(EXPR_NS, o.var, o.ty), o.body)
            return ELam(o.var, o.ty, b), Imp(o.ty, tb)
        if isinstance(o, CoAppT):
            m, tm = self.go(env, o.term)
            k, tk = self.go(env, o.coterm)
            t = Gets(tm, tk)
            a = self.fresh("cont")
            return EMu(a, t, Cut(m, CApp(CVar(a, t), k))), t
        if isinstance(o, KPair):
            a, ta = self.go(env, o.left)
            b, tb = self.go(env, o.right)
            return CPair(a, b), Or(ta, tb)
        if isinstance(o, (FstK, SndK)):
            k, _ = self.go(env, o.arg)
            x = self.fresh("expr")
            proj = EFst(EVar(x, o.ty)) if isinstance(o, FstK) else ESnd(EVar(x, o.ty))
            return CMu(x, o.ty, Cut(proj, k)), o.ty
        if isinstance(o, KComp):
            return CMu(o.var, o.ty, self.go(env.extend(EXPR_NS, o.var, o.ty), o.body)[0]), o.ty
        if isinstance(o, KLam):
            b, tb = self.go(env.extend(CONT_NS, o.covar, o.ty), o.body)
            return CLam(o.covar, o.ty, b), Gets(tb, o.ty)
        if isinstance(o, AppK):
            m, tm = self.go(env, o.term)
            k, tk = self.go(env, o.coterm)
            t = Imp(tm, tk)
            x = self.fresh("expr")
            return CMu(x, t, Cut(EApp(EVar(x, t), m), k)), t
        if isinstance(o, DCut):
            return Cut(self.go(env, o.term)[0], self.go(env, o.coterm)[0]), None
        if isinstance(o, (NotR, NotL)):
            raise DialectError("flat", o, message="negation is not part of the arrow dialect")
        raise TypeError(f"not a dual-calculus object: {o!r}")


@dataclass(frozen=True)
class FlatCtx:
    """A BLC expression with a distinguished hole variable."""

    template: Node
    hole: str

    def fill(self, e: Node, supply: Optional[NameSupply] = None) -> Node:
        return subst(self.template, (EXPR_NS, self.hole), e, supply or supply_for(self.template, e))


def flat_ctx(ctx: EvalCtx, hole_ty, env: Optional[TypeEnv] = None, supply: Optional[NameSupply] = None) -> FlatCtx:
    """The BLC context image of a dual-calculus evaluation context."""
    names = _ctx_names(ctx)
    fresh = _Fresh(supply or NameSupply(), names)
    h = fresh("expr")
    filled = ctx.fill(TVar(h))
    env = dc_env(filled, env).extend(EXPR_NS, h, hole_ty)
    path = ctx.path()
    tr = _Flat(fresh)
    cur = EVar(h, hole_ty)
    for i in reversed(range(len(ctx.frames))):
        kind, p = ctx.frames[i]
        if kind == "pair-left":
            cur = EPair(cur, tr.go(env, p)[0])
        elif kind == "pair-right":
            cur = EPair(tr.go(env, p)[0], cur)
        elif kind in ("inl", "inr"):
            a = fresh("cont")
            proj = CFst(CVar(a, p)) if kind == "inl" else CSnd(CVar(a, p))
            cur = EMu(a, p, Cut(cur, proj))
        elif kind == "coapp":
            t_hole = dc_type(env, get_at(filled, path[: i + 1]), "arrow", allow_shadowing=True)
            k, tk = tr.go(env, p)
            t = Gets(t_hole, tk)
            a = fresh("cont")
            cur = EMu(a, t, Cut(cur, CApp(CVar(a, t), k)))
        else:
            raise ValueError(f"not a dual-calculus frame: {kind}")
    return FlatCtx(cur, h)
