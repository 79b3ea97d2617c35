"""Type-directed random generators for both calculi.

Every generator threads a ``random.Random`` and a binder counter so that
binder names are unique within one object (x0, 'a1, ...). Generated objects
are closed apart from the constants ``#c``, ``#d`` and ``@o`` (or their
reserved dual-calculus names) unless an environment is supplied.
"""

from __future__ import annotations

import random
from typing import Optional

from .engine import EvalCtx
from .syntax import (
    CONT_NS,
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
    Neg,
    NotL,
    NotR,
    Or,
    SndK,
    TComp,
    TLam,
    TPair,
    TVar,
    Ty,
)

BASES = ("o", "p")
CONSTS = ("c", "d")


class Gen:
    def __init__(self, rng: random.Random, depth: int = 3, bases=BASES):
        self.rng = rng
        self.depth = depth
        self.bases = bases
        self.n = 0

    def name(self, kind: str) -> str:
        self.n += 1
        return f"x{self.n}" if kind == EXPR_NS else f"'a{self.n}"

    def chance(self, p: float) -> bool:
        return self.rng.random() < p

    # types
    def ty(self, depth: int = 2, conns=("->", "<-", "/\\", "\\/")) -> Ty:
        if depth <= 0 or self.chance(0.35):
            return Base(self.rng.choice(self.bases))
        c = self.rng.choice(conns)
        if c == "~":
            return Neg(self.ty(depth - 1, conns))
        cls = {"->": Imp, "<-": Gets, "/\\": And, "\\/": Or}[c]
        return cls(self.ty(depth - 1, conns), self.ty(depth - 1, conns))

    def pick(self, env: dict, ns: str, t: Ty) -> Optional[str]:
        opts = [n for (s, n), u in env.items() if s == ns and u == t]
        return self.rng.choice(sorted(opts)) if opts else None


class BlcGen(Gen):
    """Well-typed BLC expressions, continuations and commands."""

    def const(self, t: Base):
        return Const(self.rng.choice(CONSTS), t)

    def filler(self, t: Ty, sort: str):
        """Closed object of any type: mu 'a:T. < #c:o | @o >."""
        b = Base(self.bases[0])
        body = Cut(Const(CONSTS[0], b), Bullet(b))
        if sort == "expr":
            return EMu(self.name(CONT_NS), t, body)
        return CMu(self.name(EXPR_NS), t, body)

    def expr(self, t: Ty, env: Optional[dict] = None, depth: Optional[int] = None):
        env = env or {}
        d = self.depth if depth is None else depth
        v = self.pick(env, EXPR_NS, t)
        if v is not None and (d <= 0 or self.chance(0.3)):
            return EVar(v, t)
        if d <= 0:
            if isinstance(t, Base):
                return self.const(t)
            if isinstance(t, Imp):
                x = self.name(EXPR_NS)
                return ELam(x, t.left, self.expr(t.right, {**env, (EXPR_NS, x): t.left}, 0))
            if isinstance(t, And):
                return EPair(self.expr(t.left, env, 0), self.expr(t.right, env, 0))
            return self.filler(t, "expr")
        choices = ["mu", "app", "proj"]
        if isinstance(t, Base):
            choices += ["const", "const"]
        if isinstance(t, Imp):
            choices += ["intro", "intro"]
        if isinstance(t, And):
            choices += ["intro", "intro"]
        if isinstance(t, Or):
            choices += ["inj", "inj"]
        c = self.rng.choice(choices)
        if c == "const":
            return self.const(t)
        if c == "intro" and isinstance(t, Imp):
            x = self.name(EXPR_NS)
            return ELam(x, t.left, self.expr(t.right, {**env, (EXPR_NS, x): t.left}, d - 1))
        if c == "intro":
            return EPair(self.expr(t.left, env, d - 1), self.expr(t.right, env, d - 1))
        if c == "inj":
            a = self.name(CONT_NS)
            left = self.chance(0.5)
            e = self.expr(t.left if left else t.right, env, d - 1)
            return EMu(a, t, Cut(e, CFst(CVar(a, t)) if left else CSnd(CVar(a, t))))
        if c == "app":
            a = self.ty(1)
            return EApp(self.expr(Imp(a, t), env, d - 1), self.expr(a, env, d - 1))
        if c == "proj":
            o = self.ty(1)
            if self.chance(0.5):
                return EFst(self.expr(And(t, o), env, d - 1))
            return ESnd(self.expr(And(o, t), env, d - 1))
        a = self.name(CONT_NS)
        return EMu(a, t, self.cmd({**env, (CONT_NS, a): t}, d - 1))

    def cont(self, t: Ty, env: Optional[dict] = None, depth: Optional[int] = None):
        env = env or {}
        d = self.depth if depth is None else depth
        v = self.pick(env, CONT_NS, t)
        if v is not None and (d <= 0 or self.chance(0.3)):
            return CVar(v, t)
        if d <= 0:
            if isinstance(t, Base):
                return Bullet(t)
            if isinstance(t, Gets):
                a = self.name(CONT_NS)
                return CLam(a, t.right, self.cont(t.left, {**env, (CONT_NS, a): t.right}, 0))
            if isinstance(t, Or):
                return CPair(self.cont(t.left, env, 0), self.cont(t.right, env, 0))
            return self.filler(t, "cont")
        choices = ["mu", "app", "proj"]
        if isinstance(t, Base):
            choices += ["bullet", "bullet"]
        if isinstance(t, (Gets, Or)):
            choices += ["intro", "intro"]
        if isinstance(t, And):
            choices += ["inj", "inj"]
        c = self.rng.choice(choices)
        if c == "bullet":
            return Bullet(t)
        if c == "intro" and isinstance(t, Gets):
            a = self.name(CONT_NS)
            return CLam(a, t.right, self.cont(t.left, {**env, (CONT_NS, a): t.right}, d - 1))
        if c == "intro":
            return CPair(self.cont(t.left, env, d - 1), self.cont(t.right, env, d - 1))
        if c == "inj":
            # a consumer of a product through one projection
            x = self.name(EXPR_NS)
            left = self.chance(0.5)
            k = self.cont(t.left if left else t.right, env, d - 1)
            return CMu(x, t, Cut(EFst(EVar(x, t)) if left else ESnd(EVar(x, t)), k))
        if c == "app":
            a = self.ty(1)
            return CApp(self.cont(Gets(t, a), env, d - 1), self.cont(a, env, d - 1))
        if c == "proj":
            o = self.ty(1)
            if self.chance(0.5):
                return CFst(self.cont(Or(t, o), env, d - 1))
            return CSnd(self.cont(Or(o, t), env, d - 1))
        x = self.name(EXPR_NS)
        return CMu(x, t, self.cmd({**env, (EXPR_NS, x): t}, d - 1))

    def cmd(self, env: Optional[dict] = None, depth: Optional[int] = None):
        d = self.depth if depth is None else depth
        t = self.ty(1)
        return Cut(self.expr(t, env, max(d - 1, 0)), self.cont(t, env, max(d - 1, 0)))

    def value(self, t: Ty, env: Optional[dict] = None, depth: Optional[int] = None):
        """A syntactic value of type ``t``."""
        env = env or {}
        d = self.depth if depth is None else depth
        v = self.pick(env, EXPR_NS, t)
        if v is not None and self.chance(0.4):
            return EVar(v, t)
        if isinstance(t, Base):
            return self.const(t)
        if isinstance(t, Imp):
            x = self.name(EXPR_NS)
            return ELam(x, t.left, self.expr(t.right, {**env, (EXPR_NS, x): t.left}, max(d - 1, 0)))
        if isinstance(t, And):
            l, r = self.value(t.left, env, d - 1), self.value(t.right, env, d - 1)
            return None if l is None or r is None else EPair(l, r)
        if isinstance(t, Or):
            a = self.name(CONT_NS)
            left = self.chance(0.5)
            w = self.value(t.left if left else t.right, env, d - 1)
            if w is None:
                left = not left
                w = self.value(t.left if left else t.right, env, d - 1)
            if w is None:
                return None
            return EMu(a, t, Cut(w, CFst(CVar(a, t)) if left else CSnd(CVar(a, t))))
        # A <- B has no closed value; a variable is the only option
        return None if v is None else EVar(v, t)

    def any(self, sort: str, env=None):
        if sort == "type":
            return self.ty(3)
        if sort == "cmd":
            return self.cmd(env)
        t = self.ty(2)
        return self.expr(t, env) if sort == "expr" else self.cont(t, env)

    def eval_ctx(self, hole: Ty, result: Ty, env=None, depth: int = 2):
        """A random evaluation context with hole type ``hole``; returns (ctx, type)."""
        env = env or {}
        frames = []
        t = hole
        for _ in range(self.rng.randint(0, depth)):
            kind = self.rng.choice(["app-fn", "app-arg", "pair-left", "pair-right", "fst", "snd"])
            if kind == "app-fn" and isinstance(t, Imp):
                frames.append(("app-fn", self.expr(t.left, env, 1)))
                t = t.right
            elif kind == "app-arg":
                r = self.ty(1)
                frames.append(("app-arg", self.value(Imp(t, r), env, 1)))
                t = r
            elif kind == "pair-left":
                o = self.ty(1)
                frames.append(("pair-left", self.expr(o, env, 1)))
                t = And(t, o)
            elif kind == "pair-right":
                o = self.ty(1)
                v = self.value(o, env, 1)
                if v is None:
                    continue
                frames.append(("pair-right", v))
                t = And(o, t)
            elif kind in ("fst", "snd") and isinstance(t, And):
                frames.append((kind, None))
                t = t.left if kind == "fst" else t.right
        frames.reverse()  # built innermost first
        return EvalCtx("blc", tuple(frames)), t


class DcGen(Gen):
    """Well-typed dual-calculus terms, coterms and statements."""

    def __init__(self, rng, depth: int = 3, dialect: str = "arrow", bases=BASES):
        super().__init__(rng, depth, bases)
        self.dialect = dialect

    def conns(self):
        return ("->", "<-", "/\\", "\\/") if self.dialect == "arrow" else ("~", "/\\", "\\/")

    def dty(self, depth=2):
        return self.ty(depth, self.conns())

    def cst(self, t: Base):
        return TVar(f"cst${self.rng.choice(CONSTS)}_{t.name}")

    def filler(self, t, sort):
        b = self.bases[0]
        body = DCut(TVar(f"cst${CONSTS[0]}_{b}"), KVar(f"blt${b}"))
        if sort == "term":
            return TComp(self.name(CONT_NS), t, body)
        return KComp(self.name(EXPR_NS), t, body)

    def term(self, t: Ty, env=None, depth=None):
        env = env or {}
        d = self.depth if depth is None else depth
        v = self.pick(env, EXPR_NS, t)
        if v is not None and (d <= 0 or self.chance(0.3)):
            return TVar(v)
        choices = ["comp"] if d > 0 else []
        if isinstance(t, Base):
            choices += ["const"] * 3
        elif isinstance(t, (And, Or, Imp, Gets, Neg)):
            choices += ["intro"] * 3
        if not choices:
            return self.filler(t, "term")
        c = self.rng.choice(choices)
        d1 = max(d - 1, 0)
        if c == "const":
            return self.cst(t)
        if c == "comp":
            a = self.name(CONT_NS)
            return TComp(a, t, self.stmt({**env, (CONT_NS, a): t}, d - 1))
        if isinstance(t, And):
            return TPair(self.term(t.left, env, d1), self.term(t.right, env, d1))
        if isinstance(t, Or):
            if self.chance(0.5):
                return Inl(t, self.term(t.left, env, d1))
            return Inr(t, self.term(t.right, env, d1))
        if isinstance(t, Imp):
            x = self.name(EXPR_NS)
            return TLam(x, t.left, self.term(t.right, {**env, (EXPR_NS, x): t.left}, d1))
        if isinstance(t, Gets):
            return CoAppT(self.term(t.left, env, d1), self.coterm(t.right, env, d1))
        return NotR(self.coterm(t.arg, env, d1))

    def coterm(self, t: Ty, env=None, depth=None):
        env = env or {}
        d = self.depth if depth is None else depth
        v = self.pick(env, CONT_NS, t)
        if v is not None and (d <= 0 or self.chance(0.3)):
            return KVar(v)
        choices = ["comp"] if d > 0 else []
        if isinstance(t, Base):
            choices += ["const"] * 3
        elif isinstance(t, (And, Or, Imp, Gets, Neg)):
            choices += ["intro"] * 3
        c = self.rng.choice(choices)
        d1 = max(d - 1, 0)
        if c == "const":
            return KVar(f"blt${t.name}")
        if c == "comp":
            x = self.name(EXPR_NS)
            return KComp(x, t, self.stmt({**env, (EXPR_NS, x): t}, d - 1))
        if isinstance(t, Or):
            return KPair(self.coterm(t.left, env, d1), self.coterm(t.right, env, d1))
        if isinstance(t, And):
            if self.chance(0.5):
                return FstK(t, self.coterm(t.left, env, d1))
            return SndK(t, self.coterm(t.right, env, d1))
        if isinstance(t, Gets):
            a = self.name(CONT_NS)
            return KLam(a, t.right, self.coterm(t.left, {**env, (CONT_NS, a): t.right}, d1))
        if isinstance(t, Imp):
            return AppK(self.term(t.left, env, d1), self.coterm(t.right, env, d1))
        return NotL(self.term(t.arg, env, d1))

    def stmt(self, env=None, depth=None):
        d = self.depth if depth is None else depth
        t = self.dty(1)
        return DCut(self.term(t, env, max(d - 1, 0)), self.coterm(t, env, max(d - 1, 0)))

    def value(self, t: Ty, env=None, depth=None):
        env = env or {}
        d = self.depth if depth is None else depth
        v = self.pick(env, EXPR_NS, t)
        if v is not None and self.chance(0.4):
            return TVar(v)
        d1 = max(d - 1, 0)
        if isinstance(t, Base):
            return self.cst(t)
        if isinstance(t, And):
            return TPair(self.value(t.left, env, d1), self.value(t.right, env, d1))
        if isinstance(t, Or):
            if self.chance(0.5):
                return Inl(t, self.value(t.left, env, d1))
            return Inr(t, self.value(t.right, env, d1))
        if isinstance(t, Imp):
            x = self.name(EXPR_NS)
            return TLam(x, t.left, self.term(t.right, {**env, (EXPR_NS, x): t.left}, d1))
        if isinstance(t, Gets):
            return CoAppT(self.value(t.left, env, d1), self.coterm(t.right, env, d1))
        return NotR(self.coterm(t.arg, env, d1))

    def any(self, sort: str, env=None):
        if sort == "type":
            return self.dty(3)
        if sort == "stmt":
            return self.stmt(env)
        t = self.dty(2)
        return self.term(t, env) if sort == "term" else self.coterm(t, env)

    def eval_ctx(self, hole: Ty, env=None, depth: int = 2):
        """A random DC evaluation context (arrow dialect frames included)."""
        env = env or {}
        frames = []
        t = hole
        for _ in range(self.rng.randint(0, depth)):
            kind = self.rng.choice(["pair-left", "pair-right", "inl", "inr", "coapp"])
            if kind == "pair-left":
                o = self.dty(1)
                frames.append(("pair-left", self.term(o, env, 1)))
                t = And(t, o)
            elif kind == "pair-right":
                o = self.dty(1)
                frames.append(("pair-right", self.value(o, env, 1)))
                t = And(o, t)
            elif kind == "inl":
                o = self.dty(1)
                t = Or(t, o)
                frames.append(("inl", t))
            elif kind == "inr":
                o = self.dty(1)
                t = Or(o, t)
                frames.append(("inr", t))
            elif self.dialect == "arrow":
                o = self.dty(1)
                frames.append(("coapp", self.coterm(o, env, 1)))
                t = Gets(t, o)
        frames.reverse()
        return EvalCtx("dc", tuple(frames)), t
