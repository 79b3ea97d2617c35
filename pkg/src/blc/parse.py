"""Concrete syntax: lexer, recursive-descent parsers and pretty printers.

Calculi are named ``blc``, ``dc-full`` and ``dc-arrow``. Entry sorts are
``type`` plus ``expr|cont|cmd`` (BLC) or ``term|coterm|stmt`` (DC).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    BLT_PREFIX,
    CST_PREFIX,
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
)

CALCULI = ("blc", "dc-full", "dc-arrow")
SORTS = {
    "blc": ("type", "expr", "cont", "cmd"),
    "dc-full": ("type", "term", "coterm", "stmt"),
    "dc-arrow": ("type", "term", "coterm", "stmt"),
}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int
    end: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(BlcError):
    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        self.span = span
        super().__init__(f"{span}: {message}" if span else message)


class SortError(ParseError):
    pass


# --------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<res>(?:cst|blt)\$[A-Za-z0-9_']+)
  | (?P<const>\#[a-z][A-Za-z0-9]*(?:%\d+)?'*)
  | (?P<covar>'[a-z][A-Za-z0-9_]*(?:%\d+)?'*)
  | (?P<id>[a-z][A-Za-z0-9_]*(?:%\d+)?'*)
  | (?P<sym>->|<-|/\\|\\/|[\\.:(),<>|\[\]*$@~])
    """,
    re.VERBOSE,
)

KEYWORDS = {"fst", "snd", "mu", "inl", "inr", "not", "comp", "cocomp"}


@dataclass(frozen=True)
class Tok:
    kind: str  # id covar const res kw sym eof
    text: str
    span: SourceSpan


def tokenize(text: str) -> list:
    toks = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(line, col, pos, pos + 1))
        kind = m.lastgroup
        s = m.group()
        span = SourceSpan(line, col, pos, m.end())
        if kind != "ws":
            if kind == "id" and s in KEYWORDS:
                kind = "kw"
            toks.append(Tok(kind, s, span))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(Tok("eof", "", SourceSpan(line, col, pos, pos)))
    return toks


# --------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str, calculus: str, internal: bool):
        if calculus not in CALCULI and calculus != "nd":
            raise ParseError(f"unknown calculus {calculus!r}")
        self.toks = tokenize(text)
        self.i = 0
        self.calculus = calculus
        self.internal = internal
        self.scope: dict = {}  # BLC binder annotations, for occurrence types

    # token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "kw") and t.text == text

    def advance(self) -> Tok:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, msg: str, sort_error: bool = False):
        t = self.tok
        got = t.text or "end of input"
        cls = SortError if sort_error else ParseError
        raise cls(f"{msg}, found {got!r}", t.span)

    def check_name(self, t: Tok, binder: bool):
        if "%" in t.text and not self.internal:
            raise ParseError(f"reserved name {t.text!r}", t.span)
        if binder and t.kind == "res" and not self.internal:
            raise ParseError(f"cannot bind reserved name {t.text!r}", t.span)

    def ident(self, kind: str, binder: bool = False) -> str:
        t = self.tok
        if t.kind != kind:
            want = "variable" if kind == "id" else "continuation variable"
            other = {"id": "covar", "covar": "id"}[kind]
            self.fail(f"expected {want}", sort_error=t.kind == other)
        self.check_name(t, binder)
        self.advance()
        return t.text

    # types
    def ty(self) -> Ty:
        first = self.ty_conn()
        if not (self.at("->") or self.at("<-")):
            return first
        op = self.tok.text
        self.check_arrow()
        parts = [first]
        while self.at("->") or self.at("<-"):
            if self.tok.text != op:
                self.fail("mixing '->' and '<-' requires parentheses")
            self.advance()
            parts.append(self.ty_conn())
        if op == "->":
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Imp(p, out)
            return out
        out = parts[0]
        for p in parts[1:]:
            out = Gets(out, p)
        return out

    def check_arrow(self):
        if self.calculus == "dc-full":
            self.fail("arrow types are not part of the full dual calculus")

    def ty_conn(self) -> Ty:
        out = self.ty_unary()
        op = None
        while self.at("/\\") or self.at("\\/"):
            if op is not None and self.tok.text != op:
                self.fail("mixing '/\\' and '\\/' requires parentheses")
            op = self.advance().text
            rhs = self.ty_unary()
            out = And(out, rhs) if op == "/\\" else Or(out, rhs)
        return out

    def ty_unary(self) -> Ty:
        if self.at("~"):
            if self.calculus not in ("dc-full", "nd"):
                self.fail("negation types only exist in the full dual calculus")
            self.advance()
            return Neg(self.ty_unary())
        if self.at("("):
            self.advance()
            t = self.ty()
            self.expect(")")
            return t
        if self.tok.kind == "id":
            return Base(self.advance().text)
        self.fail("expected a type")

    def base_ty(self) -> Ty:
        if self.tok.kind != "id":
            self.fail("expected a base type")
        return Base(self.advance().text)

    # BLC
    def bind(self, name, ty):
        old = self.scope.get(name, _MISSING)
        self.scope[name] = ty
        return old

    def unbind(self, name, old):
        if old is _MISSING:
            del self.scope[name]
        else:
            self.scope[name] = old

    def expr(self) -> Node:
        if self.at("\\"):
            self.advance()
            if self.tok.kind == "covar":
                self.fail("continuation abstraction in expression position", sort_error=True)
            x = self.ident("id", binder=True)
            self.expect(":")
            t = self.ty()
            self.expect(".")
            old = self.bind(x, t)
            body = self.expr()
            self.unbind(x, old)
            return ELam(x, t, body)
        if self.at("mu"):
            self.advance()
            if self.tok.kind == "id":
                self.fail("expression-variable abstraction in expression position", sort_error=True)
            a = self.ident("covar", binder=True)
            self.expect(":")
            t = self.ty()
            self.expect(".")
            old = self.bind(a, t)
            body = self.cmd()
            self.unbind(a, old)
            return EMu(a, t, body)
        out = self.expr_head()
        while self.starts_atom("expr"):
            out = EApp(out, self.expr_atom())
        return out

    def starts_atom(self, sort: str) -> bool:
        t = self.tok
        if t.kind in ("id", "covar", "const", "res"):
            return True
        return t.kind == "sym" and t.text in ("(", "@")

    def expr_head(self) -> Node:
        if self.at("fst") or self.at("snd"):
            k = self.advance().text
            a = self.expr_atom()
            return EFst(a) if k == "fst" else ESnd(a)
        return self.expr_atom()

    def expr_atom(self) -> Node:
        t = self.tok
        if t.kind == "const":
            self.check_name(t, False)
            self.advance()
            self.expect(":")
            return Const(t.text[1:], self.base_ty())
        if t.kind == "id":
            self.check_name(t, False)
            self.advance()
            return EVar(t.text, self.scope.get(t.text))
        if t.kind == "res":
            self.fail("reserved dual-calculus name in a BLC term")
        if t.kind == "covar" or self.at("@"):
            self.fail("continuation in expression position", sort_error=True)
        if self.at("("):
            self.advance()
            e = self.expr()
            if self.at(","):
                self.advance()
                e2 = self.expr()
                self.expect(")")
                return EPair(e, e2)
            self.expect(")")
            return e
        self.fail("expected an expression")

    def cont(self) -> Node:
        if self.at("\\"):
            self.advance()
            if self.tok.kind == "id":
                self.fail("expression abstraction in continuation position", sort_error=True)
            a = self.ident("covar", binder=True)
            self.expect(":")
            t = self.ty()
            self.expect(".")
            old = self.bind(a, t)
            body = self.cont()
            self.unbind(a, old)
            return CLam(a, t, body)
        if self.at("mu"):
            self.advance()
            if self.tok.kind == "covar":
                self.fail("continuation-variable abstraction in continuation position", sort_error=True)
            x = self.ident("id", binder=True)
            self.expect(":")
            t = self.ty()
            self.expect(".")
            old = self.bind(x, t)
            body = self.cmd()
            self.unbind(x, old)
            return CMu(x, t, body)
        out = self.cont_head()
        while self.starts_atom("cont"):
            out = CApp(out, self.cont_atom())
        return out

    def cont_head(self) -> Node:
        if self.at("fst") or self.at("snd"):
            k = self.advance().text
            a = self.cont_atom()
            return CFst(a) if k == "fst" else CSnd(a)
        return self.cont_atom()

    def cont_atom(self) -> Node:
        t = self.tok
        if self.at("@"):
            self.advance()
            return Bullet(self.base_ty())
        if t.kind == "covar":
            self.check_name(t, False)
            self.advance()
            return CVar(t.text, self.scope.get(t.text))
        if t.kind == "res":
            self.fail("reserved dual-calculus name in a BLC term")
        if t.kind in ("id", "const"):
            self.fail("expression in continuation position", sort_error=True)
        if self.at("("):
            self.advance()
            c = self.cont()
            if self.at(","):
                self.advance()
                c2 = self.cont()
                self.expect(")")
                return CPair(c, c2)
            self.expect(")")
            return c
        self.fail("expected a continuation")

    def cmd(self) -> Node:
        if self.at("("):
            self.advance()
            c = self.cmd()
            self.expect(")")
            return c
        if not self.at("<"):
            self.fail("expected a command '<'")
        self.advance()
        e = self.expr()
        self.expect("|")
        c = self.cont()
        self.expect(">")
        return Cut(e, c)

    # DC
    def need(self, dialect: str, what: str):
        if self.calculus != dialect:
            self.fail(f"{what} is not part of the {self.calculus} dialect")

    def term(self) -> Node:
        if self.at("\\"):
            self.need("dc-arrow", "lambda abstraction")
            self.advance()
            if self.tok.kind == "covar":
                self.fail("coterm abstraction in term position", sort_error=True)
            x = self.ident("id", binder=True)
            self.expect(":")
            t = self.ty()
            self.expect(".")
            return TLam(x, t, self.term())
        if self.at("comp"):
            self.advance()
            if self.tok.kind == "id":
                self.fail("term binder after 'comp'", sort_error=True)
            a = self.ident("covar", binder=True)
            self.expect(":")
            t = self.ty()
            self.expect(".")
            return TComp(a, t, self.stmt())
        head = self.term_atom()
        if self.at("$"):
            self.need("dc-arrow", "'$'")
            self.advance()
            return CoAppT(head, self.coterm())
        return head

    def term_atom(self) -> Node:
        t = self.tok
        if t.kind in ("id", "res"):
            if t.kind == "res" and not t.text.startswith(CST_PREFIX):
                self.fail("coterm constant in term position", sort_error=True)
            self.check_name(t, False)
            self.advance()
            return TVar(t.text)
        if t.kind == "covar":
            self.fail("coterm variable in term position", sort_error=True)
        if self.at("inl") or self.at("inr"):
            k = self.advance().text
            self.expect(":")
            ty = self.ty_annot()
            arg = self.term_atom()
            return Inl(ty, arg) if k == "inl" else Inr(ty, arg)
        if self.at("not"):
            self.need("dc-full", "'not'")
            self.advance()
            if self.at("("):
                self.fail("coterm negation in term position", sort_error=True)
            self.expect("[")
            k = self.coterm()
            self.expect("]")
            return NotR(k)
        if self.at("("):
            self.advance()
            m = self.term()
            if self.at(","):
                self.advance()
                m2 = self.term()
                self.expect(")")
                return TPair(m, m2)
            self.expect(")")
            return m
        if self.at("[") or self.at("fst") or self.at("snd") or self.at("cocomp"):
            self.fail("coterm in term position", sort_error=True)
        self.fail("expected a term")

    def ty_annot(self) -> Ty:
        # annotations after inl:/fst: are a single type atom or parenthesised
        if self.at("("):
            self.advance()
            t = self.ty()
            self.expect(")")
            return t
        return self.ty_unary()

    def coterm(self) -> Node:
        t = self.tok
        if self.at("\\") and self.peek().kind == "covar":
            self.need("dc-arrow", "coterm abstraction")
            self.advance()
            a = self.ident("covar", binder=True)
            self.expect(":")
            ty = self.ty()
            self.expect(".")
            return KLam(a, ty, self.coterm())
        if self.at("cocomp"):
            self.advance()
            if self.tok.kind == "covar":
                self.fail("coterm binder after 'cocomp'", sort_error=True)
            x = self.ident("id", binder=True)
            self.expect(":")
            ty = self.ty()
            self.expect(".")
            return KComp(x, ty, self.stmt())
        if t.kind == "covar" or (t.kind == "res" and t.text.startswith(BLT_PREFIX)):
            self.check_name(t, False)
            self.advance()
            return KVar(t.text)
        if self.at("["):
            self.advance()
            k = self.coterm()
            self.expect(",")
            k2 = self.coterm()
            self.expect("]")
            return KPair(k, k2)
        if self.at("fst") or self.at("snd"):
            w = self.advance().text
            self.expect(":")
            ty = self.ty_annot()
            self.expect("[")
            k = self.coterm()
            self.expect("]")
            return FstK(ty, k) if w == "fst" else SndK(ty, k)
        if self.at("not") and self.peek().text == "(":
            self.need("dc-full", "'not'")
            self.advance()
            self.expect("(")
            m = self.term()
            self.expect(")")
            return NotL(m)
        if self.at("("):
            save = self.i
            try:
                self.advance()
                k = self.coterm()
                self.expect(")")
                if not self.at("@"):
                    return k
            except ParseError:
                pass
            self.i = save
        # M @ K
        if t.kind == "kw" and t.text not in ("inl", "inr", "not", "comp"):
            self.fail("expected a coterm")
        head = self.term_head_for_at()
        if not self.at("@"):
            self.fail("term in coterm position", sort_error=True)
        self.need("dc-arrow", "'@'")
        self.advance()
        return AppK(head, self.coterm())

    def term_head_for_at(self) -> Node:
        if self.at("\\") or self.at("comp"):
            self.fail("abstraction on the left of '@' needs parentheses")
        return self.term_atom()

    def stmt(self) -> Node:
        if self.at("("):
            save = self.i
            try:
                self.advance()
                s = self.stmt()
                self.expect(")")
                return s
            except ParseError:
                self.i = save
        m = self.term()
        if not self.at("*"):
            self.fail("expected '*'")
        self.advance()
        return DCut(m, self.coterm())


_MISSING = object()

_ENTRY = {
    "type": _Parser.ty,
    "expr": _Parser.expr,
    "cont": _Parser.cont,
    "cmd": _Parser.cmd,
    "term": _Parser.term,
    "coterm": _Parser.coterm,
    "stmt": _Parser.stmt,
}


def parse(text: str, calculus: str = "blc", sort: str = "expr", internal: bool = False):
    """Parse ``text`` as an object of ``sort`` in ``calculus``.

    ``internal`` admits fresh names (``%`` infix) and binders of reserved
    names, which only occur in machine-generated output.
    """
    if calculus not in CALCULI:
        raise ParseError(f"unknown calculus {calculus!r}")
    if sort not in SORTS[calculus]:
        raise SortError(f"sort {sort!r} does not exist in {calculus}")
    p = _Parser(text, calculus, internal)
    out = _ENTRY[sort](p)
    if p.tok.kind != "eof":
        p.fail("trailing input")
    return out


def parse_formula(text: str) -> Ty:
    """Parse a logical formula; all connectives, including ``~``, are allowed."""
    p = _Parser(text, "nd", False)
    out = p.ty()
    if p.tok.kind != "eof":
        p.fail("trailing input")
    return out


# --------------------------------------------------------------------------
# Printer


def _simple(t: Ty) -> bool:
    return isinstance(t, (Base, Neg))


def show_type(t: Ty, compact: bool = False) -> str:
    sp = "" if compact else " "

    def par(s):
        return f"({s})"

    def go(t):
        if isinstance(t, Base):
            return t.name
        if isinstance(t, Neg):
            inner = go(t.arg)
            return "~" + (inner if _simple(t.arg) else par(inner))
        if isinstance(t, (And, Or)):
            op = "/\\" if isinstance(t, And) else "\\/"
            left = go(t.left)
            if not (_simple(t.left) or type(t.left) is type(t)):
                left = par(left)
            right = go(t.right)
            if not _simple(t.right):
                right = par(right)
            return f"{left}{sp}{op}{sp}{right}"
        if isinstance(t, Imp):
            left = go(t.left)
            if isinstance(t.left, (Imp, Gets)):
                left = par(left)
            right = go(t.right)
            if isinstance(t.right, Gets):
                right = par(right)
            return f"{left}{sp}->{sp}{right}"
        if isinstance(t, Gets):
            left = go(t.left)
            if isinstance(t.left, Imp):
                left = par(left)
            right = go(t.right)
            if isinstance(t.right, (Imp, Gets)):
                right = par(right)
            return f"{left}{sp}<-{sp}{right}"
        raise TypeError(f"not a type: {t!r}")

    return go(t)


def _annot(t: Ty, compact: bool) -> str:
    s = show_type(t, compact)
    return s if _simple(t) else f"({s})"


class _Printer:
    def __init__(self, compact: bool):
        self.compact = compact
        self.sp = "" if compact else " "

    def ty(self, t):
        return show_type(t, self.compact)

    # BLC: level 0 = open, 1 = application head, 2 = atom
    def expr(self, e, lvl=0):
        sp = self.sp
        if isinstance(e, Const):
            return f"#{e.name}:{e.ty.name}"
        if isinstance(e, EVar):
            return e.name
        if isinstance(e, EPair):
            return f"({self.expr(e.left)},{sp}{self.expr(e.right)})"
        if isinstance(e, ELam):
            s = f"\\{e.var}:{self.ty(e.ty)}.{sp}{self.expr(e.body)}"
            return f"({s})" if lvl else s
        if isinstance(e, EMu):
            s = f"mu {e.covar}:{self.ty(e.ty)}.{sp}{self.cmd(e.body)}"
            return f"({s})" if lvl else s
        if isinstance(e, EApp):
            s = f"{self.expr(e.fn, 1)} {self.expr(e.arg, 2)}"
            return f"({s})" if lvl == 2 else s
        if isinstance(e, (EFst, ESnd)):
            k = "fst" if isinstance(e, EFst) else "snd"
            s = f"{k} {self.expr(e.arg, 2)}"
            return f"({s})" if lvl == 2 else s
        raise TypeError(f"not an expression: {e!r}")

    def cont(self, c, lvl=0):
        sp = self.sp
        if isinstance(c, Bullet):
            return f"@{c.ty.name}"
        if isinstance(c, CVar):
            return c.name
        if isinstance(c, CPair):
            return f"({self.cont(c.left)},{sp}{self.cont(c.right)})"
        if isinstance(c, CLam):
            s = f"\\{c.covar}:{self.ty(c.ty)}.{sp}{self.cont(c.body)}"
            return f"({s})" if lvl else s
        if isinstance(c, CMu):
            s = f"mu {c.var}:{self.ty(c.ty)}.{sp}{self.cmd(c.body)}"
            return f"({s})" if lvl else s
        if isinstance(c, CApp):
            s = f"{self.cont(c.fn, 1)} {self.cont(c.arg, 2)}"
            return f"({s})" if lvl == 2 else s
        if isinstance(c, (CFst, CSnd)):
            k = "fst" if isinstance(c, CFst) else "snd"
            s = f"{k} {self.cont(c.arg, 2)}"
            return f"({s})" if lvl == 2 else s
        raise TypeError(f"not a continuation: {c!r}")

    def cmd(self, n):
        sp = self.sp
        return f"<{sp}{self.expr(n.expr)}{sp}|{sp}{self.cont(n.cont)}{sp}>"

    # DC: atom flag forces parentheses on open forms
    def term(self, m, atom=False):
        sp = self.sp
        if isinstance(m, TVar):
            return m.name
        if isinstance(m, TPair):
            return f"({self.term(m.left)},{sp}{self.term(m.right)})"
        if isinstance(m, (Inl, Inr)):
            k = "inl" if isinstance(m, Inl) else "inr"
            return f"{k}:{_annot(m.ty, self.compact)} {self.term(m.arg, True)}"
        if isinstance(m, NotR):
            return f"not[{self.coterm(m.arg)}]"
        if isinstance(m, TComp):
            s = f"comp {m.covar}:{self.ty(m.ty)}.{sp}{self.stmt(m.body)}"
        elif isinstance(m, TLam):
            s = f"\\{m.var}:{self.ty(m.ty)}.{sp}{self.term(m.body)}"
        elif isinstance(m, CoAppT):
            s = f"{self.term(m.term, True)}{sp}${sp}{self.coterm(m.coterm)}"
        else:
            raise TypeError(f"not a term: {m!r}")
        return f"({s})" if atom else s

    def coterm(self, k):
        sp = self.sp
        if isinstance(k, KVar):
            return k.name
        if isinstance(k, KPair):
            return f"[{self.coterm(k.left)},{sp}{self.coterm(k.right)}]"
        if isinstance(k, (FstK, SndK)):
            w = "fst" if isinstance(k, FstK) else "snd"
            return f"{w}:{_annot(k.ty, self.compact)}[{self.coterm(k.arg)}]"
        if isinstance(k, NotL):
            return f"not({self.term(k.arg)})"
        if isinstance(k, KComp):
            return f"cocomp {k.var}:{self.ty(k.ty)}.{sp}{self.stmt(k.body)}"
        if isinstance(k, KLam):
            return f"\\{k.covar}:{self.ty(k.ty)}.{sp}{self.coterm(k.body)}"
        if isinstance(k, AppK):
            return f"{self.term(k.term, True)}{sp}@{sp}{self.coterm(k.coterm)}"
        raise TypeError(f"not a coterm: {k!r}")

    def stmt(self, s):
        sp = self.sp
        return f"{self.term(s.term, True)}{sp}*{sp}{self.coterm(s.coterm)}"


def show(obj, style: str = "canonical") -> str:
    """Render a type or an object of either calculus as concrete syntax."""
    if style not in ("canonical", "compact"):
        raise ValueError(f"unknown style {style!r}")
    p = _Printer(style == "compact")
    if isinstance(obj, Ty):
        return p.ty(obj)
    sort = obj.sort
    if sort == "expr":
        return p.expr(obj)
    if sort == "cont":
        return p.cont(obj)
    if sort == "cmd":
        return p.cmd(obj)
    if sort == "term":
        return p.term(obj)
    if sort == "coterm":
        return p.coterm(obj)
    return p.stmt(obj)


def print_obj(obj, style: str = "canonical") -> str:
    return show(obj, style)
