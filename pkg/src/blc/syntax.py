"""Abstract syntax for the bilateral lambda calculus and the dual calculus.

Both calculi share one node protocol. Every node class declares its sort,
which of its fields hold sub-objects, and (for binders) which field names
the bound variable and in which namespace it lives. The generic traversals
below (free variables, alpha-equivalence, substitution) are written once
against that protocol.

Namespaces are ``"e"`` (expression variables / DC term variables) and
``"c"`` (continuation variables / DC coterm variables). Continuation
variable names carry a leading apostrophe, e.g. ``'a``.
"""

from __future__ import annotations

import dataclasses
import re
import sys
from dataclasses import dataclass
from typing import ClassVar, Iterator, Optional, Union

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

EXPR_NS = "e"
CONT_NS = "c"

CST_PREFIX = "cst$"
BLT_PREFIX = "blt$"


class BlcError(Exception):
    """Root of all errors raised by this package."""


class SortMismatch(BlcError):
    pass


# --------------------------------------------------------------------------
# Types


class Ty:
    __slots__ = ()

    def __str__(self) -> str:
        from .parse import show_type

        return show_type(self)


@dataclass(frozen=True)
class Base(Ty):
    name: str


@dataclass(frozen=True)
class Imp(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class Gets(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class And(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class Or(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class Neg(Ty):
    arg: Ty


def has_neg(t: Ty) -> bool:
    if isinstance(t, Neg):
        return True
    if isinstance(t, Base):
        return False
    return has_neg(t.left) or has_neg(t.right)


def has_arrow(t: Ty) -> bool:
    if isinstance(t, (Imp, Gets)):
        return True
    if isinstance(t, Base):
        return False
    if isinstance(t, Neg):
        return has_arrow(t.arg)
    return has_arrow(t.left) or has_arrow(t.right)


def type_size(t: Ty) -> int:
    if isinstance(t, Base):
        return 1
    if isinstance(t, Neg):
        return 1 + type_size(t.arg)
    return 1 + type_size(t.left) + type_size(t.right)


# --------------------------------------------------------------------------
# Node protocol


class Node:
    __slots__ = ()
    sort: ClassVar[str]
    tag: ClassVar[str]
    calculus: ClassVar[str]
    dialect: ClassVar[str] = "both"
    kids: ClassVar[tuple] = ()
    binder: ClassVar[Optional[tuple]] = None
    var_ns: ClassVar[Optional[str]] = None
    data: ClassVar[tuple] = ()

    def __str__(self) -> str:
        from .parse import show

        return show(self)


def _node(sort, tag, calculus, kids=(), binder=None, var_ns=None, dialect="both"):
    def wrap(cls):
        cls = dataclass(frozen=True)(cls)
        cls.sort = sort
        cls.tag = tag
        cls.calculus = calculus
        cls.dialect = dialect
        cls.kids = tuple(kids)
        cls.binder = binder
        cls.var_ns = var_ns
        skip = set(kids)
        if binder:
            skip.add(binder[0])
        if var_ns:
            skip.update({"name", "ty"})
        cls.data = tuple(f.name for f in dataclasses.fields(cls) if f.name not in skip)
        NODE_CLASSES[tag] = cls
        return cls

    return wrap


NODE_CLASSES: dict = {}

# BLC expressions


@_node("expr", "const", "blc")
class Const(Node):
    name: str
    ty: Ty


@_node("expr", "evar", "blc", var_ns=EXPR_NS)
class EVar(Node):
    name: str
    ty: Optional[Ty] = None


@_node("expr", "elam", "blc", kids=("body",), binder=("var", EXPR_NS))
class ELam(Node):
    var: str
    ty: Ty
    body: "Expr"


@_node("expr", "eapp", "blc", kids=("fn", "arg"))
class EApp(Node):
    fn: "Expr"
    arg: "Expr"


@_node("expr", "epair", "blc", kids=("left", "right"))
class EPair(Node):
    left: "Expr"
    right: "Expr"


@_node("expr", "efst", "blc", kids=("arg",))
class EFst(Node):
    arg: "Expr"


@_node("expr", "esnd", "blc", kids=("arg",))
class ESnd(Node):
    arg: "Expr"


@_node("expr", "emu", "blc", kids=("body",), binder=("covar", CONT_NS))
class EMu(Node):
    covar: str
    ty: Ty
    body: "Cut"


# BLC continuations


@_node("cont", "bullet", "blc")
class Bullet(Node):
    ty: Ty


@_node("cont", "cvar", "blc", var_ns=CONT_NS)
class CVar(Node):
    name: str
    ty: Optional[Ty] = None


@_node("cont", "clam", "blc", kids=("body",), binder=("covar", CONT_NS))
class CLam(Node):
    covar: str
    ty: Ty
    body: "Cont"


@_node("cont", "capp", "blc", kids=("fn", "arg"))
class CApp(Node):
    fn: "Cont"
    arg: "Cont"


@_node("cont", "cpair", "blc", kids=("left", "right"))
class CPair(Node):
    left: "Cont"
    right: "Cont"


@_node("cont", "cfst", "blc", kids=("arg",))
class CFst(Node):
    arg: "Cont"


@_node("cont", "csnd", "blc", kids=("arg",))
class CSnd(Node):
    arg: "Cont"


@_node("cont", "cmu", "blc", kids=("body",), binder=("var", EXPR_NS))
class CMu(Node):
    var: str
    ty: Ty
    body: "Cut"


@_node("cmd", "cut", "blc", kids=("expr", "cont"))
class Cut(Node):
    expr: "Expr"
    cont: "Cont"


# DC terms


@_node("term", "tvar", "dc", var_ns=EXPR_NS)
class TVar(Node):
    name: str


@_node("term", "tpair", "dc", kids=("left", "right"))
class TPair(Node):
    left: "Term"
    right: "Term"


@_node("term", "inl", "dc", kids=("arg",))
class Inl(Node):
    ty: Ty
    arg: "Term"


@_node("term", "inr", "dc", kids=("arg",))
class Inr(Node):
    ty: Ty
    arg: "Term"


@_node("term", "notr", "dc", kids=("arg",), dialect="full")
class NotR(Node):
    arg: "Coterm"


@_node("term", "tcomp", "dc", kids=("body",), binder=("covar", CONT_NS))
class TComp(Node):
    covar: str
    ty: Ty
    body: "DCut"


@_node("term", "tlam", "dc", kids=("body",), binder=("var", EXPR_NS), dialect="arrow")
class TLam(Node):
    var: str
    ty: Ty
    body: "Term"


@_node("term", "coapp", "dc", kids=("term", "coterm"), dialect="arrow")
class CoAppT(Node):
    term: "Term"
    coterm: "Coterm"


# DC coterms


@_node("coterm", "kvar", "dc", var_ns=CONT_NS)
class KVar(Node):
    name: str


@_node("coterm", "kpair", "dc", kids=("left", "right"))
class KPair(Node):
    left: "Coterm"
    right: "Coterm"


@_node("coterm", "fstk", "dc", kids=("arg",))
class FstK(Node):
    ty: Ty
    arg: "Coterm"


@_node("coterm", "sndk", "dc", kids=("arg",))
class SndK(Node):
    ty: Ty
    arg: "Coterm"


@_node("coterm", "notl", "dc", kids=("arg",), dialect="full")
class NotL(Node):
    arg: "Term"


@_node("coterm", "kcomp", "dc", kids=("body",), binder=("var", EXPR_NS))
class KComp(Node):
    var: str
    ty: Ty
    body: "DCut"


@_node("coterm", "klam", "dc", kids=("body",), binder=("covar", CONT_NS), dialect="arrow")
class KLam(Node):
    covar: str
    ty: Ty
    body: "Coterm"


@_node("coterm", "appk", "dc", kids=("term", "coterm"), dialect="arrow")
class AppK(Node):
    term: "Term"
    coterm: "Coterm"


@_node("stmt", "dcut", "dc", kids=("term", "coterm"))
class DCut(Node):
    term: "Term"
    coterm: "Coterm"


Expr = Union[Const, EVar, ELam, EApp, EPair, EFst, ESnd, EMu]
Cont = Union[Bullet, CVar, CLam, CApp, CPair, CFst, CSnd, CMu]
Term = Union[TVar, TPair, Inl, Inr, NotR, TComp, TLam, CoAppT]
Coterm = Union[KVar, KPair, FstK, SndK, NotL, KComp, KLam, AppK]

BLC_SORTS = ("expr", "cont", "cmd")
DC_SORTS = ("term", "coterm", "stmt")

SORT_NS = {"expr": EXPR_NS, "term": EXPR_NS, "cont": CONT_NS, "coterm": CONT_NS}


# --------------------------------------------------------------------------
# Names


class NameSupply:
    """Session-local source of fresh identifiers.

    Names have the shape ``x%N`` (expression side) and ``'k%N`` (continuation
    side). The ``%`` infix never appears in user input.
    """

    def __init__(self, start: int = 0, avoid=()):
        self.counter = start
        self.reserved: set = set(avoid)

    def reserve(self, names) -> None:
        self.reserved.update(names)

    def fresh(self, kind: str, avoid=()) -> str:
        while True:
            n = self.counter
            self.counter += 1
            name = f"x%{n}" if kind in ("expr", EXPR_NS, "term") else f"'k%{n}"
            if name not in self.reserved and name not in avoid:
                self.reserved.add(name)
                return name


def fresh(kind: str, supply: NameSupply) -> str:
    return supply.fresh(kind)


_PCT = re.compile(r"%(\d+)")


def supply_for(*objs) -> NameSupply:
    """A supply whose names cannot clash with anything occurring in ``objs``."""
    names: set = set()
    for o in objs:
        names |= all_names(o)
    top = -1
    for n in names:
        m = _PCT.search(n)
        if m:
            top = max(top, int(m.group(1)))
    return NameSupply(top + 1, names)


def var_node(calculus: str, ns: str, name: str, ty: Optional[Ty] = None) -> Node:
    if calculus == "blc":
        return EVar(name, ty) if ns == EXPR_NS else CVar(name, ty)
    return TVar(name) if ns == EXPR_NS else KVar(name)


def ns_of_name(name: str) -> str:
    return CONT_NS if name.startswith("'") or name.startswith(BLT_PREFIX) else EXPR_NS


def children(d: Node) -> Iterator[Node]:
    for k in d.kids:
        yield getattr(d, k)


def walk(d: Node) -> Iterator[Node]:
    stack = [d]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed([getattr(n, k) for k in n.kids]))


def all_names(d: Node) -> set:
    out = set()
    for n in walk(d):
        if n.var_ns:
            out.add(n.name)
        if n.binder:
            out.add(getattr(n, n.binder[0]))
    return out


def bound_names(d: Node) -> set:
    return {getattr(n, n.binder[0]) for n in walk(d) if n.binder}


def size(d: Node) -> int:
    return sum(1 for _ in walk(d))


# --------------------------------------------------------------------------
# Free variables


def free_vars(d: Node) -> tuple:
    """Return ``(expression variables, continuation variables)`` free in ``d``."""
    ev: set = set()
    cv: set = set()
    _fv(d, frozenset(), ev, cv)
    return ev, cv


def _fv(d, bound, ev, cv):
    ns = d.var_ns
    if ns is not None:
        if (ns, d.name) not in bound:
            (ev if ns == EXPR_NS else cv).add(d.name)
        return
    b = d.binder
    if b is not None:
        bound = bound | {(b[1], getattr(d, b[0]))}
    for k in d.kids:
        _fv(getattr(d, k), bound, ev, cv)


def occurs_free(d: Node, ns: str, name: str) -> bool:
    ev, cv = free_vars(d)
    return name in (ev if ns == EXPR_NS else cv)


def free_var_types(d: Node) -> dict:
    """Annotations found on free BLC variable occurrences, keyed by (ns, name)."""
    out: dict = {}

    def go(n, bound):
        if n.var_ns is not None:
            key = (n.var_ns, n.name)
            if key not in bound and getattr(n, "ty", None) is not None:
                out.setdefault(key, n.ty)
            return
        if n.binder is not None:
            bound = bound | {(n.binder[1], getattr(n, n.binder[0]))}
        for k in n.kids:
            go(getattr(n, k), bound)

    go(d, frozenset())
    return out


# --------------------------------------------------------------------------
# Alpha-equivalence


def alpha_eq(d0: Node, d1: Node) -> bool:
    """Equality up to consistent renaming of bound names.

    Occurrence annotations on BLC variables are ignored: they are determined
    by the binder (or the environment) and carry no information of their own.
    """
    return _aeq(d0, d1, {}, {}, 0)


def _aeq(a, b, m0, m1, depth):
    if type(a) is not type(b):
        return False
    ns = a.var_ns
    if ns is not None:
        i0 = m0.get((ns, a.name))
        i1 = m1.get((ns, b.name))
        if i0 is None and i1 is None:
            return a.name == b.name
        return i0 == i1
    for f in a.data:
        if getattr(a, f) != getattr(b, f):
            return False
    bd = a.binder
    if bd is not None:
        field, bns = bd
        m0 = {**m0, (bns, getattr(a, field)): depth}
        m1 = {**m1, (bns, getattr(b, field)): depth}
        depth += 1
    for k in a.kids:
        if not _aeq(getattr(a, k), getattr(b, k), m0, m1, depth):
            return False
    return True


# --------------------------------------------------------------------------
# Substitution


def subst(target: Node, binding, payload: Node, supply: Optional[NameSupply] = None) -> Node:
    """Capture-avoiding substitution of ``payload`` for a free variable.

    ``binding`` is a variable node, a ``(namespace, name)`` pair, or a bare
    name (namespace inferred from the leading apostrophe).
    """
    if isinstance(binding, Node):
        if binding.var_ns is None:
            raise SortMismatch(f"not a variable: {binding!r}")
        ns, name = binding.var_ns, binding.name
    elif isinstance(binding, tuple):
        ns, name = binding
    else:
        ns, name = ns_of_name(binding), binding
    pns = SORT_NS.get(payload.sort)
    if pns != ns:
        raise SortMismatch(f"cannot substitute a {payload.sort} for {name}")
    if target.calculus != payload.calculus:
        raise SortMismatch("payload and target belong to different calculi")
    if supply is None:
        supply = supply_for(target, payload)
    pev, pcv = free_vars(payload)
    return _subst(target, ns, name, payload, (pev, pcv), supply)


def _subst(d, ns, name, payload, pfv, supply):
    vns = d.var_ns
    if vns is not None:
        return payload if (vns == ns and d.name == name) else d
    if not d.kids:
        return d
    bd = d.binder
    if bd is not None:
        field, bns = bd
        v = getattr(d, field)
        if bns == ns and v == name:
            return d
        body = getattr(d, d.kids[0])
        if not occurs_free(body, ns, name):
            return d
        if v in (pfv[0] if bns == EXPR_NS else pfv[1]):
            nv = supply.fresh(bns, avoid=all_names(body) | all_names(payload))
            ren = var_node(d.calculus, bns, nv, getattr(d, "ty", None))
            body = _subst(body, bns, v, ren, ({nv}, set()) if bns == EXPR_NS else (set(), {nv}), supply)
            d = dataclasses.replace(d, **{field: nv, d.kids[0]: body})
        return dataclasses.replace(d, **{d.kids[0]: _subst(body, ns, name, payload, pfv, supply)})
    changes = {}
    for k in d.kids:
        c = getattr(d, k)
        c2 = _subst(c, ns, name, payload, pfv, supply)
        if c2 is not c:
            changes[k] = c2
    return dataclasses.replace(d, **changes) if changes else d


def rename_free(d: Node, ns: str, old: str, new: str, ty: Optional[Ty] = None) -> Node:
    return subst(d, (ns, old), var_node(d.calculus, ns, new, ty))


def replace_at(d: Node, path: tuple, new: Node) -> Node:
    """Replace the sub-object reached by following field names in ``path``."""
    if not path:
        return new
    head, rest = path[0], path[1:]
    return dataclasses.replace(d, **{head: replace_at(getattr(d, head), rest, new)})


def get_at(d: Node, path: tuple) -> Node:
    for p in path:
        d = getattr(d, p)
    return d


def split_cst(name: str) -> tuple:
    """``cst$c_o`` -> ("c", "o"). Constant names never contain an underscore."""
    body = name[len(CST_PREFIX):]
    c, _, o = body.partition("_")
    return c, o


def reserved_types(d: Node) -> tuple:
    """Types of reserved constant names free in a dual-calculus object."""
    ev, cv = free_vars(d)
    pos = {n: Base(split_cst(n)[1]) for n in ev if n.startswith(CST_PREFIX)}
    neg = {n: Base(n[len(BLT_PREFIX):]) for n in cv if n.startswith(BLT_PREFIX)}
    return pos, neg
