"""Derived syntax: injections and case in BLC, the function/continuation
encodings, and the arrow sugar of the dual calculus.

BLC sugar expands at construction time. The dual-calculus arrow dialect keeps
its own nodes; :func:`expand_sugar` rewrites them into negation-based terms
of the full dialect.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    CONT_NS,
    EXPR_NS,
    And,
    AppK,
    CApp,
    CFst,
    CLam,
    CMu,
    CoAppT,
    CPair,
    CSnd,
    Cut,
    CVar,
    DCut,
    EApp,
    EMu,
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
    Neg,
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
    ELam,
    all_names,
    reserved_types,
    supply_for,
)
from .typecheck import EMPTY_ENV, TypeCheckError, TypeEnv, blc_type, dc_type


@dataclass(frozen=True)
class SugarSpec:
    name: str
    params: tuple
    template: str


SUGAR = (
    SugarSpec("inl", ("expr",), "mu 'a. < E | fst 'a >"),
    SugarSpec("inr", ("expr",), "mu 'a. < E | snd 'a >"),
    SugarSpec("case", ("expr", "var", "expr", "var", "expr"), "mu 'a. < E | (mu x0. < E0 | 'a >, mu x1. < E1 | 'a >) >"),
    SugarSpec("cencode", ("expr",), "\\'a. mu x. < E x | 'a >"),
    SugarSpec("eencode", ("cont",), "\\x. mu 'a. < x | C 'a >"),
    SugarSpec("dc-lam", ("var", "term"), "not[cocomp x'. x' * fst[cocomp x. x' * snd[not(M)]]]"),
    SugarSpec("dc-at", ("term", "coterm"), "not((M, not[K]))"),
    SugarSpec("dc-but", ("term", "coterm"), "(M, not[K])"),
    SugarSpec("dc-colam", ("covar", "coterm"), "cocomp x. x * snd[not(comp 'a. x * fst[K])]"),
)


def _ty(env, d):
    return blc_type(env or EMPTY_ENV, d, allow_shadowing=True)


def _avoid(*objs):
    s = supply_for(*objs)
    names = set()
    for o in objs:
        names |= all_names(o)
    return s, names


# --------------------------------------------------------------------------
# BLC


def mk_inl(e: Node, sum_ty: Ty, env: Optional[TypeEnv] = None, supply: Optional[NameSupply] = None) -> Node:
    return _inj(e, sum_ty, True, env, supply)


def mk_inr(e: Node, sum_ty: Ty, env: Optional[TypeEnv] = None, supply: Optional[NameSupply] = None) -> Node:
    return _inj(e, sum_ty, False, env, supply)


def _inj(e, sum_ty, left, env, supply):
    rule = "inl" if left else "inr"
    if not isinstance(sum_ty, Or):
        raise TypeCheckError(rule, e, expected="A \\/ B", found=sum_ty, message="injections need a sum type")
    t = _ty(env, e)
    want = sum_ty.left if left else sum_ty.right
    if t != want:
        raise TypeCheckError(rule, e, expected=want, found=t)
    s, avoid = _avoid(e)
    a = (supply or s).fresh("cont", avoid=avoid)
    proj = CFst(CVar(a, sum_ty)) if left else CSnd(CVar(a, sum_ty))
    return EMu(a, sum_ty, Cut(e, proj))


def mk_case(scrut, x0, e0, x1, e1, result_ty: Ty, env=None, supply=None) -> Node:
    """``case(E, x0.E0, x1.E1)`` as a mu-abstraction over a pair of continuations."""
    env = env or EMPTY_ENV
    st = _ty(env, scrut)
    if not isinstance(st, Or):
        raise TypeCheckError("case", scrut, expected="A \\/ B", found=st, message="scrutinee is not a sum")
    for i, (x, e, t) in enumerate(((x0, e0, st.left), (x1, e1, st.right))):
        bt = _ty(env.extend(EXPR_NS, x, t), e)
        if bt != result_ty:
            raise TypeCheckError("case", e, expected=result_ty, found=bt, message=f"branch {i} has the wrong type")
    s, avoid = _avoid(scrut, e0, e1)
    avoid |= {x0, x1}
    a = (supply or s).fresh("cont", avoid=avoid)
    k = CVar(a, result_ty)
    branches = CPair(CMu(x0, st.left, Cut(e0, k)), CMu(x1, st.right, Cut(e1, k)))
    return EMu(a, result_ty, Cut(scrut, branches))


def fn_to_cont(e: Node, env=None, supply=None) -> Node:
    """The continuation ``\\'a. mu x. < E x | 'a >`` of type A0 <- A1."""
    t = _ty(env, e)
    if not isinstance(t, Imp):
        raise TypeCheckError("cencode", e, expected="A0 -> A1", found=t, message="not a function")
    s, avoid = _avoid(e)
    s = supply or s
    a = s.fresh("cont", avoid=avoid)
    x = s.fresh("expr", avoid=avoid)
    body = CMu(x, t.left, Cut(EApp(e, EVar(x, t.left)), CVar(a, t.right)))
    return CLam(a, t.right, body)


def cont_to_fn(c: Node, env=None, supply=None) -> Node:
    """The expression ``\\x. mu 'a. < x | C 'a >`` of type A0 -> A1."""
    t = _ty(env, c)
    if not isinstance(t, Gets):
        raise TypeCheckError("eencode", c, expected="A0 <- A1", found=t, message="not a continuation function")
    s, avoid = _avoid(c)
    s = supply or s
    x = s.fresh("expr", avoid=avoid)
    a = s.fresh("cont", avoid=avoid)
    body = EMu(a, t.right, Cut(EVar(x, t.left), CApp(c, CVar(a, t.right))))
    return ELam(x, t.left, body)


cencode = fn_to_cont
eencode = cont_to_fn


# --------------------------------------------------------------------------
# Dual calculus: arrow sugar


def expand_type(t: Ty) -> Ty:
    """A -> B becomes ~(A /\\ ~B); A <- B becomes A /\\ ~B."""
    if isinstance(t, Imp):
        return Neg(And(expand_type(t.left), Neg(expand_type(t.right))))
    if isinstance(t, Gets):
        return And(expand_type(t.left), Neg(expand_type(t.right)))
    if isinstance(t, (And, Or)):
        return type(t)(expand_type(t.left), expand_type(t.right))
    if isinstance(t, Neg):
        return Neg(expand_type(t.arg))
    return t


def expand_sugar(o: Node, env: Optional[TypeEnv] = None, supply: Optional[NameSupply] = None) -> Node:
    """Rewrite an arrow-dialect object into the full dialect.

    The environment gives the types of free variables; reserved constant
    names are typed automatically. The result typechecks in the full dialect
    at ``expand_type`` of the original type.
    """
    env = env or EMPTY_ENV
    rp, rn = reserved_types(o)
    env = TypeEnv.of({**rp, **env.pos}, {**rn, **env.neg})
    if supply is None:
        supply = supply_for(o)
    return _Expander(supply, all_names(o)).go(env, o)


class _Expander:
    def __init__(self, supply, avoid):
        self.supply = supply
        self.avoid = set(avoid)

    def fresh(self, kind):
        n = self.supply.fresh(kind, avoid=self.avoid)
        self.avoid.add(n)
        return n

    def ty_of(self, env, o):
        return dc_type(env, o, "arrow", allow_shadowing=True)

    def go(self, env, o):
        E = expand_type
        if isinstance(o, (TVar, KVar)):
            return o
        if isinstance(o, TPair):
            return TPair(self.go(env, o.left), self.go(env, o.right))
        if isinstance(o, KPair):
            return KPair(self.go(env, o.left), self.go(env, o.right))
        if isinstance(o, (Inl, Inr, FstK, SndK)):
            return type(o)(E(o.ty), self.go(env, o.arg))
        if isinstance(o, TComp):
            return TComp(o.covar, E(o.ty), self.go(env.extend(CONT_NS, o.covar, o.ty), o.body))
        if isinstance(o, KComp):
            return KComp(o.var, E(o.ty), self.go(env.extend(EXPR_NS, o.var, o.ty), o.body))
        if isinstance(o, DCut):
            return DCut(self.go(env, o.term), self.go(env, o.coterm))
        if isinstance(o, TLam):
            inner = env.extend(EXPR_NS, o.var, o.ty)
            b = self.ty_of(inner, o.body)
            return lam_sugar(o.var, E(o.ty), E(b), self.go(inner, o.body), self.fresh("expr"))
        if isinstance(o, AppK):
            return at_sugar(self.go(env, o.term), self.go(env, o.coterm))
        if isinstance(o, CoAppT):
            return but_sugar(self.go(env, o.term), self.go(env, o.coterm))
        if isinstance(o, KLam):
            inner = env.extend(CONT_NS, o.covar, o.ty)
            a0 = self.ty_of(inner, o.body)
            return colam_sugar(o.covar, E(o.ty), E(a0), self.go(inner, o.body), self.fresh("expr"))
        if isinstance(o, (NotR, NotL)):
            raise TypeCheckError("expand", o, message="input must be an arrow-dialect object")
        raise TypeError(o)


def lam_sugar(x: str, a: Ty, b: Ty, body: Node, xp: str) -> Node:
    """``\\x:A. M`` with ``M : B`` as a full-dialect term of type ``~(A /\\ ~B)``."""
    pt = And(a, Neg(b))
    inner = KComp(x, a, DCut(TVar(xp), SndK(pt, NotL(body))))
    return NotR(KComp(xp, pt, DCut(TVar(xp), FstK(pt, inner))))


def at_sugar(m: Node, k: Node) -> Node:
    return NotL(TPair(m, NotR(k)))


def but_sugar(m: Node, k: Node) -> Node:
    return TPair(m, NotR(k))


def colam_sugar(alpha: str, a1: Ty, a0: Ty, body: Node, x: str) -> Node:
    """``\\'a:A1. K`` with ``K : A0`` as a full-dialect coterm of type ``A0 /\\ ~A1``."""
    pt = And(a0, Neg(a1))
    inner = TComp(alpha, a1, DCut(TVar(x), FstK(pt, body)))
    return KComp(x, pt, DCut(TVar(x), SndK(pt, NotL(inner))))


# --------------------------------------------------------------------------
# Law instances for the arrow sugar (arrow dialect, both sides)


def law_beta_imp(x: str, a: Ty, m: Node, w: Node, k: Node):
    """(\\x.M) * (W @ K)  =  W * cocomp x.(M * K)."""
    return DCut(TLam(x, a, m), AppK(w, k)), DCut(w, KComp(x, a, DCut(m, k)))


def law_eta_imp(w: Node, fn_ty: Imp, x: str, alpha: str):
    """W  =  \\x. comp 'a. (W * (x @ 'a))."""
    rhs = TLam(x, fn_ty.left, TComp(alpha, fn_ty.right, DCut(w, AppK(TVar(x), KVar(alpha)))))
    return w, rhs


def law_beta_gets(w: Node, k: Node, alpha: str, a1: Ty, k2: Node):
    """(W $ K) * (\\'a.K')  =  (comp 'a.(W * K')) * K."""
    return DCut(CoAppT(w, k), KLam(alpha, a1, k2)), DCut(TComp(alpha, a1, DCut(w, k2)), k)


def law_eta_gets(k: Node, ty: Gets, alpha: str, x: str):
    """K  =  \\'a. cocomp x. ((x $ 'a) * K)."""
    rhs = KLam(alpha, ty.right, KComp(x, ty.left, DCut(CoAppT(TVar(x), KVar(alpha)), k)))
    return k, rhs


def law_zeta_gets(m: Node, a0: Ty, k0: Node, k1: Node, x: str):
    """(M $ K0) * K1  =  M * cocomp x. ((x $ K0) * K1)."""
    return DCut(CoAppT(m, k0), k1), DCut(m, KComp(x, a0, DCut(CoAppT(TVar(x), k0), k1)))
