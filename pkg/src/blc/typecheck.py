"""Type synthesis for BLC judgments and dual-calculus sequents.

Every binder is annotated, so synthesis is syntax-directed and each
expression, continuation, term or coterm has exactly one type. Errors name
the rule that failed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

from .syntax import (
    CONT_NS,
    EXPR_NS,
    And,
    AppK,
    Base,
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
    Gets,
    Imp,
    Inl,
    Inr,
    KComp,
    KLam,
    KPair,
    KVar,
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
    bound_names,
    has_arrow,
    has_neg,
    subst,
    var_node,
)


class TypeCheckError(BlcError, TypeError):
    def __init__(self, rule: str, node=None, expected=None, found=None, message: str = ""):
        self.rule = rule
        self.node = node
        self.expected = expected
        self.found = found
        parts = [f"({rule})"]
        if message:
            parts.append(message)
        if expected is not None or found is not None:
            parts.append(f"expected {_fmt(expected)}, found {_fmt(found)}")
        if node is not None:
            parts.append(f"in {node}")
        super().__init__(" ".join(parts))


def _fmt(x):
    return "?" if x is None else str(x)


class UnboundVariable(TypeCheckError):
    pass


class NamespaceClash(TypeCheckError):
    pass


class DialectError(TypeCheckError):
    pass


class ShadowingError(TypeCheckError):
    pass


class NameCollision(TypeCheckError):
    pass


class PremiseMismatch(BlcError):
    pass


_EMPTY: Mapping = MappingProxyType({})


@dataclass(frozen=True)
class TypeEnv:
    """Split environment: ``pos`` holds expression/term variables (Pi or Gamma),
    ``neg`` holds continuation/coterm variables (Sigma or Delta)."""

    pos: Mapping = field(default=_EMPTY)
    neg: Mapping = field(default=_EMPTY)

    @staticmethod
    def of(pos=None, neg=None) -> "TypeEnv":
        return TypeEnv(MappingProxyType(dict(pos or {})), MappingProxyType(dict(neg or {})))

    def lookup(self, ns: str, name: str) -> Optional[Ty]:
        return (self.pos if ns == EXPR_NS else self.neg).get(name)

    def has(self, name: str) -> bool:
        return name in self.pos or name in self.neg

    def extend(self, ns: str, name: str, ty: Ty) -> "TypeEnv":
        if ns == EXPR_NS:
            return TypeEnv(MappingProxyType({**self.pos, name: ty}), self.neg)
        return TypeEnv(self.pos, MappingProxyType({**self.neg, name: ty}))

    def union(self, other: "TypeEnv") -> "TypeEnv":
        return TypeEnv.of({**self.pos, **other.pos}, {**self.neg, **other.neg})

    def __eq__(self, other):
        return isinstance(other, TypeEnv) and dict(self.pos) == dict(other.pos) and dict(self.neg) == dict(other.neg)

    def __hash__(self):
        return hash((frozenset(self.pos.items()), frozenset(self.neg.items())))

    def __repr__(self):
        p = ", ".join(f"{k}:{v}" for k, v in self.pos.items())
        n = ", ".join(f"{k}:{v}" for k, v in self.neg.items())
        return f"TypeEnv({p}; {n})"


EMPTY_ENV = TypeEnv()

KIND_OF_SORT = {
    "expr": "plus",
    "cont": "minus",
    "cmd": "zero",
    "term": "dc-right",
    "coterm": "dc-left",
    "stmt": "dc-stmt",
}


@dataclass(frozen=True)
class Judgment:
    kind: str
    env: TypeEnv
    subject: Node
    ty: Optional[Ty]

    def __str__(self) -> str:
        turn = {"plus": "|-+", "minus": "|--", "zero": "|-o"}.get(self.kind, "|-")
        t = "" if self.ty is None else f" : {self.ty}"
        return f"{self.env!r} {turn} {self.subject}{t}"


# --------------------------------------------------------------------------
# BLC


def blc_synth(env: TypeEnv, d: Node, allow_shadowing: bool = False) -> Judgment:
    """Synthesize the judgment for a BLC object under ``env``."""
    if d.calculus != "blc":
        raise NamespaceClash("sort", d, message="not a BLC object")
    ty = _BlcSynth(allow_shadowing).go(env, d)
    return Judgment(KIND_OF_SORT[d.sort], env, d, ty)


def blc_type(env: TypeEnv, d: Node, allow_shadowing: bool = False) -> Optional[Ty]:
    return _BlcSynth(allow_shadowing).go(env, d)


def _no_neg(rule, node, t):
    if has_neg(t):
        raise DialectError(rule, node, message="negation types do not exist in BLC")


class _BlcSynth:
    def __init__(self, allow_shadowing: bool):
        self.lenient = allow_shadowing

    def sorted(self, env, d, sort, rule, parent):
        if not isinstance(d, Node) or d.calculus != "blc" or d.sort != sort:
            got = getattr(d, "sort", type(d).__name__)
            raise NamespaceClash(rule, parent, expected=sort, found=got, message="wrong sort")
        return self.go(env, d)

    def bind(self, env, ns, name, ty, rule, node):
        _no_neg(rule, node, ty)
        if not self.lenient and env.has(name):
            raise ShadowingError(rule, node, message=f"binder {name} shadows an existing declaration")
        return env.extend(ns, name, ty)

    def var(self, env, d, ns, rule):
        t = env.lookup(ns, d.name)
        if t is None:
            if self.lenient and d.ty is not None:
                return d.ty
            raise UnboundVariable(rule, d, message=f"unbound variable {d.name}")
        if d.ty is not None and d.ty != t:
            raise TypeCheckError(rule, d, expected=t, found=d.ty, message="occurrence annotation disagrees")
        return t

    def go(self, env, d):
        if isinstance(d, Const):
            if not isinstance(d.ty, Base):
                raise TypeCheckError("Constant+", d, message="constants have base type")
            return d.ty
        if isinstance(d, EVar):
            return self.var(env, d, EXPR_NS, "Identity+")
        if isinstance(d, ELam):
            inner = self.bind(env, EXPR_NS, d.var, d.ty, "+->I", d)
            return Imp(d.ty, self.sorted(inner, d.body, "expr", "+->I", d))
        if isinstance(d, EApp):
            f = self.sorted(env, d.fn, "expr", "+->E", d)
            a = self.sorted(env, d.arg, "expr", "+->E", d)
            if not isinstance(f, Imp):
                raise TypeCheckError("+->E", d, expected="A -> B", found=f)
            if f.left != a:
                raise TypeCheckError("+->E", d, expected=f.left, found=a)
            return f.right
        if isinstance(d, EPair):
            return And(self.sorted(env, d.left, "expr", "+/\\I", d), self.sorted(env, d.right, "expr", "+/\\I", d))
        if isinstance(d, (EFst, ESnd)):
            rule = "+/\\E0" if isinstance(d, EFst) else "+/\\E1"
            t = self.sorted(env, d.arg, "expr", rule, d)
            if not isinstance(t, And):
                raise TypeCheckError(rule, d, expected="A /\\ B", found=t)
            return t.left if isinstance(d, EFst) else t.right
        if isinstance(d, EMu):
            inner = self.bind(env, CONT_NS, d.covar, d.ty, "Reductio+", d)
            self.sorted(inner, d.body, "cmd", "Reductio+", d)
            return d.ty
        if isinstance(d, Bullet):
            if not isinstance(d.ty, Base):
                raise TypeCheckError("Constant-", d, message="the bullet has base type")
            return d.ty
        if isinstance(d, CVar):
            return self.var(env, d, CONT_NS, "Identity-")
        if isinstance(d, CLam):
            inner = self.bind(env, CONT_NS, d.covar, d.ty, "-<-I", d)
            return Gets(self.sorted(inner, d.body, "cont", "-<-I", d), d.ty)
        if isinstance(d, CApp):
            f = self.sorted(env, d.fn, "cont", "-<-E", d)
            a = self.sorted(env, d.arg, "cont", "-<-E", d)
            if not isinstance(f, Gets):
                raise TypeCheckError("-<-E", d, expected="A <- B", found=f)
            if f.right != a:
                raise TypeCheckError("-<-E", d, expected=f.right, found=a)
            return f.left
        if isinstance(d, CPair):
            return Or(self.sorted(env, d.left, "cont", "-\\/I", d), self.sorted(env, d.right, "cont", "-\\/I", d))
        if isinstance(d, (CFst, CSnd)):
            rule = "-\\/E0" if isinstance(d, CFst) else "-\\/E1"
            t = self.sorted(env, d.arg, "cont", rule, d)
            if not isinstance(t, Or):
                raise TypeCheckError(rule, d, expected="A \\/ B", found=t)
            return t.left if isinstance(d, CFst) else t.right
        if isinstance(d, CMu):
            inner = self.bind(env, EXPR_NS, d.var, d.ty, "Reductio-", d)
            self.sorted(inner, d.body, "cmd", "Reductio-", d)
            return d.ty
        if isinstance(d, Cut):
            a = self.sorted(env, d.expr, "expr", "Non-contradiction", d)
            b = self.sorted(env, d.cont, "cont", "Non-contradiction", d)
            if a != b:
                raise TypeCheckError("Non-contradiction", d, expected=a, found=b)
            return None
        raise NamespaceClash("sort", d, message="not a BLC object")


# --------------------------------------------------------------------------
# Dual calculus


def dc_synth(env: TypeEnv, o: Node, dialect: str = "arrow", allow_shadowing: bool = False) -> Judgment:
    """Synthesize the sequent for a dual-calculus object in ``dialect``."""
    if dialect not in ("full", "arrow"):
        raise ValueError(f"unknown dialect {dialect!r}")
    if o.calculus != "dc":
        raise NamespaceClash("sort", o, message="not a dual-calculus object")
    ty = _DcSynth(dialect, allow_shadowing).go(env, o)
    return Judgment(KIND_OF_SORT[o.sort], env, o, ty)


def dc_type(env: TypeEnv, o: Node, dialect: str = "arrow", allow_shadowing: bool = False) -> Optional[Ty]:
    return _DcSynth(dialect, allow_shadowing).go(env, o)


class _DcSynth:
    def __init__(self, dialect, lenient):
        self.dialect = dialect
        self.lenient = lenient

    def ty_ok(self, rule, node, t):
        if self.dialect == "full" and has_arrow(t):
            raise DialectError(rule, node, message="arrow types are not part of the full dialect")
        if self.dialect == "arrow" and has_neg(t):
            raise DialectError(rule, node, message="negation types are not part of the arrow dialect")

    def sorted(self, env, d, sort, rule, parent):
        if not isinstance(d, Node) or d.calculus != "dc" or d.sort != sort:
            got = getattr(d, "sort", type(d).__name__)
            raise NamespaceClash(rule, parent, expected=sort, found=got, message="wrong sort")
        return self.go(env, d)

    def bind(self, env, ns, name, ty, rule, node):
        self.ty_ok(rule, node, ty)
        if not self.lenient and env.has(name):
            raise ShadowingError(rule, node, message=f"binder {name} shadows an existing declaration")
        return env.extend(ns, name, ty)

    def go(self, env, d):
        if d.dialect != "both" and d.dialect != self.dialect:
            raise DialectError("dialect", d, message=f"{d.tag} is not part of the {self.dialect} dialect")
        if isinstance(d, TVar):
            t = env.lookup(EXPR_NS, d.name)
            if t is None:
                raise UnboundVariable("Id-R", d, message=f"unbound variable {d.name}")
            return t
        if isinstance(d, KVar):
            t = env.lookup(CONT_NS, d.name)
            if t is None:
                raise UnboundVariable("Id-L", d, message=f"unbound covariable {d.name}")
            return t
        if isinstance(d, TPair):
            return And(self.sorted(env, d.left, "term", "/\\R", d), self.sorted(env, d.right, "term", "/\\R", d))
        if isinstance(d, (Inl, Inr)):
            rule = "\\/R0" if isinstance(d, Inl) else "\\/R1"
            self.ty_ok(rule, d, d.ty)
            if not isinstance(d.ty, Or):
                raise TypeCheckError(rule, d, expected="A \\/ B", found=d.ty, message="bad injection annotation")
            a = self.sorted(env, d.arg, "term", rule, d)
            want = d.ty.left if isinstance(d, Inl) else d.ty.right
            if a != want:
                raise TypeCheckError(rule, d, expected=want, found=a)
            return d.ty
        if isinstance(d, NotR):
            return Neg(self.sorted(env, d.arg, "coterm", "~R", d))
        if isinstance(d, TComp):
            inner = self.bind(env, CONT_NS, d.covar, d.ty, "comp", d)
            self.sorted(inner, d.body, "stmt", "comp", d)
            return d.ty
        if isinstance(d, TLam):
            inner = self.bind(env, EXPR_NS, d.var, d.ty, "->R", d)
            return Imp(d.ty, self.sorted(inner, d.body, "term", "->R", d))
        if isinstance(d, CoAppT):
            return Gets(self.sorted(env, d.term, "term", "<-R", d), self.sorted(env, d.coterm, "coterm", "<-R", d))
        if isinstance(d, KPair):
            return Or(self.sorted(env, d.left, "coterm", "\\/L", d), self.sorted(env, d.right, "coterm", "\\/L", d))
        if isinstance(d, (FstK, SndK)):
            rule = "/\\L0" if isinstance(d, FstK) else "/\\L1"
            self.ty_ok(rule, d, d.ty)
            if not isinstance(d.ty, And):
                raise TypeCheckError(rule, d, expected="A /\\ B", found=d.ty, message="bad projection annotation")
            a = self.sorted(env, d.arg, "coterm", rule, d)
            want = d.ty.left if isinstance(d, FstK) else d.ty.right
            if a != want:
                raise TypeCheckError(rule, d, expected=want, found=a)
            return d.ty
        if isinstance(d, NotL):
            return Neg(self.sorted(env, d.arg, "term", "~L", d))
        if isinstance(d, KComp):
            inner = self.bind(env, EXPR_NS, d.var, d.ty, "cocomp", d)
            self.sorted(inner, d.body, "stmt", "cocomp", d)
            return d.ty
        if isinstance(d, KLam):
            inner = self.bind(env, CONT_NS, d.covar, d.ty, "<-L", d)
            return Gets(self.sorted(inner, d.body, "coterm", "<-L", d), d.ty)
        if isinstance(d, AppK):
            return Imp(self.sorted(env, d.term, "term", "->L", d), self.sorted(env, d.coterm, "coterm", "->L", d))
        if isinstance(d, DCut):
            a = self.sorted(env, d.term, "term", "Cut", d)
            b = self.sorted(env, d.coterm, "coterm", "Cut", d)
            if a != b:
                raise TypeCheckError("Cut", d, expected=a, found=b)
            return None
        raise NamespaceClash("sort", d, message="not a dual-calculus object")


# --------------------------------------------------------------------------
# Meta-theory checks


def synth(env: TypeEnv, d: Node, dialect: str = "arrow") -> Judgment:
    if d.calculus == "blc":
        return blc_synth(env, d)
    return dc_synth(env, d, dialect)


def check_weakening(j: Judgment, extra: tuple, dialect: str = "arrow") -> Judgment:
    """Re-synthesize ``j`` under ``j.env`` extended with ``extra = (ns, name, ty)``."""
    ns, name, ty = extra
    if j.env.has(name) or name in bound_names(j.subject):
        raise NameCollision("weakening", j.subject, message=f"{name} is already in use")
    env = j.env.extend(ns, name, ty)
    j2 = synth(env, j.subject, dialect)
    if j2.ty != j.ty or j2.kind != j.kind:
        raise TypeCheckError("weakening", j.subject, expected=j.ty, found=j2.ty)
    return j2


@dataclass(frozen=True)
class SubstInstance:
    """Premises of one case of the substitution lemma.

    ``target`` is typed under ``env`` extended with ``var : var_ty``;
    ``payload`` is typed under ``env`` at ``var_ty``.
    """

    env: TypeEnv
    var: str
    var_ty: Ty
    target: Node
    payload: Node


# case -> (namespace of the variable, target sort, payload sort)
SUBST_CASES = {
    1: (EXPR_NS, "expr", "expr"),
    2: (EXPR_NS, "cont", "expr"),
    3: (EXPR_NS, "cmd", "expr"),
    4: (CONT_NS, "expr", "cont"),
    5: (CONT_NS, "cont", "cont"),
    6: (CONT_NS, "cmd", "cont"),
}


def check_substitution_lemma(case: int, inst: SubstInstance) -> bool:
    """Check that substituting preserves the judgment of the given lemma case."""
    if case not in SUBST_CASES:
        raise PremiseMismatch(f"no substitution case {case}")
    ns, tsort, psort = SUBST_CASES[case]
    if inst.target.sort != tsort or inst.payload.sort != psort:
        raise PremiseMismatch(f"case {case} needs a {tsort} target and a {psort} payload")
    try:
        jt = blc_synth(inst.env.extend(ns, inst.var, inst.var_ty), inst.target)
        jp = blc_synth(inst.env, inst.payload)
    except TypeCheckError as exc:
        raise PremiseMismatch(f"premise does not typecheck: {exc}") from exc
    if jp.ty != inst.var_ty:
        raise PremiseMismatch(f"payload has type {jp.ty}, variable has type {inst.var_ty}")
    out = subst(inst.target, var_node("blc", ns, inst.var, inst.var_ty), inst.payload)
    try:
        jc = blc_synth(inst.env, out, allow_shadowing=True)
    except TypeCheckError:
        return False
    return jc.kind == jt.kind and jc.ty == jt.ty
