"""Bilateral natural deduction and the proof-term polarization layer.

Derivations are explicit trees (JSON schema ``bind-deriv/1``). The checker
matches every node against its rule schema; it never searches.

Leaves are hypotheses ``{"hyp": label, "formula": "+ a"}`` or open
subderivations ``{"gap": name, "uses": [hyp, ...], "formula": ...}``. A gap
stands for an unspecified derivation of its formula that may use the listed
hypotheses; gaps are how derived rules with hypothetical premises are
written down.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Union

from .parse import ParseError, parse_formula, show_type
from .syntax import (
    CONT_NS,
    EXPR_NS,
    And,
    BlcError,
    Base,
    Bullet,
    CApp,
    CFst,
    CLam,
    CMu,
    Const,
    CPair,
    CSnd,
    Cut,
    CVar,
    EApp,
    EFst,
    ELam,
    EMu,
    EPair,
    ESnd,
    EVar,
    Gets,
    Imp,
    NameSupply,
    Neg,
    Node,
    Or,
    Ty,
)
from .typecheck import TypeCheckError, TypeEnv, blc_synth

SCHEMA = "bind-deriv/1"


# --------------------------------------------------------------------------
# Signed formulas


@dataclass(frozen=True)
class Signed:
    polarity: str  # "+" or "-"
    formula: Ty

    def conjugate(self) -> "Signed":
        return Signed("-" if self.polarity == "+" else "+", self.formula)

    def __str__(self) -> str:
        return f"{self.polarity} {show_type(self.formula)}"


@dataclass(frozen=True)
class Bottom:
    def conjugate(self):
        raise ValueError("bot has no conjugate")

    def __str__(self) -> str:
        return "bot"


BOT = Bottom()
SignedFormula = Union[Signed, Bottom]


def parse_signed(text: str) -> SignedFormula:
    s = text.strip()
    if s in ("bot", "⊥"):
        return BOT
    if not s or s[0] not in "+-":
        raise ParseError(f"signed formula must start with '+' or '-': {text!r}")
    return Signed(s[0], parse_formula(s[1:]))


# --------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True)
class Hyp:
    label: str
    formula: SignedFormula


@dataclass(frozen=True)
class Gap:
    name: str
    uses: tuple  # of Hyp
    formula: SignedFormula


@dataclass(frozen=True)
class RuleNode:
    rule: str
    conclusion: SignedFormula
    premises: tuple
    discharge: tuple = ()  # one label (or None for vacuous) per discharge slot


Derivation = Union[Hyp, Gap, RuleNode]


class RuleViolation(BlcError):
    def __init__(self, path: tuple, rule: str, reason: str):
        self.path = path
        self.rule = rule
        self.reason = reason
        where = "/".join(str(p) for p in path) or "root"
        super().__init__(f"{rule} at {where}: {reason}")


@dataclass(frozen=True)
class Summary:
    root: SignedFormula
    open_hyps: tuple  # of (label, formula)
    gaps: tuple  # of Gap

    def premises(self) -> list:
        return [str(f) for _, f in self.open_hyps]


def _plus(f):
    return Signed("+", f)


def _minus(f):
    return Signed("-", f)


class _Mismatch(Exception):
    pass


def _need(cond, msg):
    if not cond:
        raise _Mismatch(msg)


def _is(f, pol, cls=None):
    return isinstance(f, Signed) and f.polarity == pol and (cls is None or isinstance(f.formula, cls))


# Each schema takes (premise roots, conclusion) and returns the formulas that
# the discharge slots must match, as a list of (premise index, formula).


def _nc(ps, c):
    _need(len(ps) == 2, "needs two premises")
    _need(c == BOT, "concludes bot")
    _need(isinstance(ps[0], Signed) and ps[1] == ps[0].conjugate(), "premises must be conjugate")
    return []


def _reductio(ps, c):
    _need(len(ps) == 1 and ps[0] == BOT, "premise must be bot")
    _need(isinstance(c, Signed), "concludes a signed formula")
    return [(0, c.conjugate())]


def _neg_flip(pol_in, pol_out, intro):
    def rule(ps, c):
        _need(len(ps) == 1, "needs one premise")
        if intro:
            _need(_is(c, pol_out, Neg) and ps[0] == Signed(pol_in, c.formula.arg), "shape")
        else:
            _need(_is(ps[0], pol_in, Neg) and c == Signed(pol_out, ps[0].formula.arg), "shape")
        return []

    return rule


def _imp_i_plus(ps, c):
    _need(len(ps) == 1 and _is(c, "+", Imp), "shape")
    _need(ps[0] == _plus(c.formula.right), "premise must accept the consequent")
    return [(0, _plus(c.formula.left))]


def _imp_e_plus(ps, c):
    _need(len(ps) == 2 and _is(ps[0], "+", Imp), "shape")
    f = ps[0].formula
    _need(ps[1] == _plus(f.left) and c == _plus(f.right), "shape")
    return []


def _binary_intro(pol, cls, pol0, pol1):
    def rule(ps, c):
        _need(len(ps) == 2 and _is(c, pol, cls), "shape")
        _need(ps[0] == Signed(pol0, c.formula.left) and ps[1] == Signed(pol1, c.formula.right), "premises do not match")
        return []

    return rule


def _proj(pol, cls, side, out_pol):
    def rule(ps, c):
        _need(len(ps) == 1 and _is(ps[0], pol, cls), "shape")
        f = ps[0].formula
        _need(c == Signed(out_pol, f.left if side == 0 else f.right), "conclusion does not match")
        return []

    return rule


def _inj(pol, cls, side):
    def rule(ps, c):
        _need(len(ps) == 1 and _is(c, pol, cls), "shape")
        f = c.formula
        _need(ps[0] == Signed(pol, f.left if side == 0 else f.right), "premise does not match")
        return []

    return rule


def _cases(pol, cls):
    def rule(ps, c):
        _need(len(ps) == 3 and _is(ps[0], pol, cls), "shape")
        _need(ps[1] == c and ps[2] == c, "both cases must conclude the conclusion")
        f = ps[0].formula
        return [(1, Signed(pol, f.left)), (2, Signed(pol, f.right))]

    return rule


def _gets_i_minus(ps, c):
    _need(len(ps) == 1 and _is(c, "-", Gets), "shape")
    _need(ps[0] == _minus(c.formula.left), "premise must reject the left component")
    return [(0, _minus(c.formula.right))]


def _gets_e_minus(ps, c):
    _need(len(ps) == 2 and _is(ps[0], "-", Gets), "shape")
    f = ps[0].formula
    _need(ps[1] == _minus(f.right) and c == _minus(f.left), "shape")
    return []


RULES = {
    "Non-contradiction": _nc,
    "Reductio": _reductio,
    "+~I": _neg_flip("-", "+", True),
    "+~E": _neg_flip("+", "-", False),
    "-~I": _neg_flip("+", "-", True),
    "-~E": _neg_flip("-", "+", False),
    "+->I": _imp_i_plus,
    "+->E": _imp_e_plus,
    "+/\\I": _binary_intro("+", And, "+", "+"),
    "+/\\E0": _proj("+", And, 0, "+"),
    "+/\\E1": _proj("+", And, 1, "+"),
    "+\\/I0": _inj("+", Or, 0),
    "+\\/I1": _inj("+", Or, 1),
    "+\\/E": _cases("+", Or),
    "-->I": _binary_intro("-", Imp, "+", "-"),
    "-->E0": _proj("-", Imp, 0, "+"),
    "-->E1": _proj("-", Imp, 1, "-"),
    "-/\\I0": _inj("-", And, 0),
    "-/\\I1": _inj("-", And, 1),
    "-/\\E": _cases("-", And),
    "-\\/I": _binary_intro("-", Or, "-", "-"),
    "-\\/E0": _proj("-", Or, 0, "-"),
    "-\\/E1": _proj("-", Or, 1, "-"),
    "+<-I": _binary_intro("+", Gets, "+", "-"),
    "+<-E0": _proj("+", Gets, 0, "+"),
    "+<-E1": _proj("+", Gets, 1, "-"),
    "-<-I": _gets_i_minus,
    "-<-E": _gets_e_minus,
}

_ALIASES = {"→": "->", "←": "<-", "∧": "/\\", "∨": "\\/", "¬": "~", "−": "-"}


def canonical_rule(name: str) -> str:
    n = name.strip().strip("()")
    for k, v in _ALIASES.items():
        n = n.replace(k, v)
    if n.lower() == "non-contradiction":
        return "Non-contradiction"
    if n.lower() == "reductio":
        return "Reductio"
    return n


def root_of(d: Derivation) -> SignedFormula:
    return d.formula if isinstance(d, (Hyp, Gap)) else d.conclusion


def check_derivation(d: Derivation) -> Summary:
    """Match every node against its schema; return open hypotheses and root."""
    open_hyps, gaps = _check(d, ())
    return Summary(root_of(d), tuple(sorted(open_hyps.items(), key=lambda kv: kv[0])), tuple(gaps))


def _merge(acc, more, path, rule):
    for lbl, f in more.items():
        if lbl in acc and acc[lbl] != f:
            raise RuleViolation(path, rule, f"hypothesis {lbl} is used with two formulas")
        acc[lbl] = f


def _check(d, path):
    if isinstance(d, Hyp):
        if d.formula == BOT:
            raise RuleViolation(path, "hyp", "bot cannot be assumed")
        return {d.label: d.formula}, []
    if isinstance(d, Gap):
        acc = {}
        _merge(acc, {h.label: h.formula for h in d.uses}, path, "gap")
        return acc, [d]
    rule = canonical_rule(d.rule)
    schema = RULES.get(rule)
    if schema is None:
        raise RuleViolation(path, d.rule, "unknown rule")
    sub = [_check(p, path + (i,)) for i, p in enumerate(d.premises)]
    roots = [root_of(p) for p in d.premises]
    try:
        slots = schema(roots, d.conclusion)
    except _Mismatch as exc:
        raise RuleViolation(path, rule, str(exc)) from None
    except AttributeError:
        raise RuleViolation(path, rule, "formula shape does not fit the rule") from None
    if len(d.discharge) > len(slots):
        raise RuleViolation(path, rule, f"rule has {len(slots)} discharge slots, got {len(d.discharge)}")
    discharge = list(d.discharge) + [None] * (len(slots) - len(d.discharge))
    opens = [dict(s[0]) for s in sub]
    for (idx, want), lbl in zip(slots, discharge):
        if lbl is None:
            continue
        have = opens[idx].get(lbl)
        if have is None:
            raise RuleViolation(path, rule, f"label {lbl} is not an open hypothesis of premise {idx}")
        if have != want:
            raise RuleViolation(path, rule, f"label {lbl} assumes {have}, the rule discharges {want}")
        del opens[idx][lbl]
    acc, gaps = {}, []
    for o, (_, g) in zip(opens, sub):
        _merge(acc, o, path, rule)
        gaps.extend(g)
    return acc, gaps


# JSON


def derivation_from_json(doc) -> Derivation:
    if "hyp" in doc:
        return Hyp(doc["hyp"], parse_signed(doc["formula"]))
    if "gap" in doc:
        uses = tuple(Hyp(u["hyp"], parse_signed(u["formula"])) for u in doc.get("uses", []))
        return Gap(doc["gap"], uses, parse_signed(doc["formula"]))
    if "rule" not in doc:
        raise ParseError(f"derivation node needs 'rule', 'hyp' or 'gap': {sorted(doc)}")
    return RuleNode(
        doc["rule"],
        parse_signed(doc["conclusion"]),
        tuple(derivation_from_json(p) for p in doc.get("premises", [])),
        tuple(doc.get("discharge", [])),
    )


def derivation_to_json(d: Derivation) -> dict:
    if isinstance(d, Hyp):
        return {"hyp": d.label, "formula": str(d.formula)}
    if isinstance(d, Gap):
        return {"gap": d.name, "uses": [derivation_to_json(u) for u in d.uses], "formula": str(d.formula)}
    out = {"rule": d.rule, "conclusion": str(d.conclusion), "premises": [derivation_to_json(p) for p in d.premises]}
    if d.discharge:
        out["discharge"] = list(d.discharge)
    return out


@dataclass(frozen=True)
class Fixture:
    name: str
    premises: tuple  # signed formulas of the claim
    gaps: tuple  # (uses formulas, formula) per hypothetical premise
    conclusion: SignedFormula
    derivation: Derivation
    variant: bool = False


def load_document(doc) -> Fixture:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("v") != SCHEMA:
        raise ParseError(f"unsupported derivation schema {doc.get('v')!r}")
    claim = doc.get("claim", {})
    d = derivation_from_json(doc["derivation"])
    return Fixture(
        doc.get("name", "derivation"),
        tuple(parse_signed(p) for p in claim.get("premises", [])),
        tuple(
            (tuple(parse_signed(u) for u in g["uses"]), parse_signed(g["formula"])) for g in claim.get("gaps", [])
        ),
        parse_signed(claim["conclusion"]) if "conclusion" in claim else root_of(d),
        d,
        bool(doc.get("variant", False)),
    )


def check_claim(fx: Fixture) -> Summary:
    """Check the derivation and that it proves exactly what the fixture claims."""
    s = check_derivation(fx.derivation)
    if s.root != fx.conclusion:
        raise RuleViolation((), "claim", f"derivation concludes {s.root}, claim is {fx.conclusion}")
    if sorted(map(str, (f for _, f in s.open_hyps))) != sorted(set(map(str, fx.premises))):
        raise RuleViolation((), "claim", f"open hypotheses {s.premises()} differ from the claim")
    got = sorted((tuple(sorted(str(u.formula) for u in g.uses)), str(g.formula)) for g in s.gaps)
    want = sorted((tuple(sorted(str(u) for u in uses)), str(f)) for uses, f in fx.gaps)
    if got != want:
        raise RuleViolation((), "claim", "hypothetical premises differ from the claim")
    return s


def fixtures(include_variants: bool = True) -> list:
    base = resources.files("blc") / "fixtures"
    out = []
    for p in sorted(base.iterdir(), key=lambda p: p.name):
        if p.name.endswith(".json"):
            fx = load_document(p.read_text(encoding="utf-8"))
            if include_variants or not fx.variant:
                out.append(fx)
    return out


def flip_root(d: Derivation) -> Derivation:
    """Single-node mutation: replace the root conclusion by its conjugate."""
    if isinstance(d, RuleNode) and isinstance(d.conclusion, Signed):
        return RuleNode(d.rule, d.conclusion.conjugate(), d.premises, d.discharge)
    raise ValueError("root has no signed conclusion")


# --------------------------------------------------------------------------
# Proof terms and polarizations


@dataclass(frozen=True)
class PConst:
    name: str


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PLam:
    var: str
    body: "ProofTerm"


@dataclass(frozen=True)
class PApp:
    fn: "ProofTerm"
    arg: "ProofTerm"


@dataclass(frozen=True)
class PPair:
    left: "ProofTerm"
    right: "ProofTerm"


@dataclass(frozen=True)
class PFst:
    arg: "ProofTerm"


@dataclass(frozen=True)
class PSnd:
    arg: "ProofTerm"


@dataclass(frozen=True)
class PMu:
    var: str
    body: "PCut"


@dataclass(frozen=True)
class PCut:
    left: "ProofTerm"
    right: "ProofTerm"


ProofTerm = Union[PConst, PVar, PLam, PApp, PPair, PFst, PSnd, PMu]


def show_proof(t) -> str:
    if isinstance(t, (PConst, PVar)):
        return t.name
    if isinstance(t, PLam):
        return f"(\\{t.var}. {show_proof(t.body)})"
    if isinstance(t, PApp):
        return f"({show_proof(t.fn)} {show_proof(t.arg)})"
    if isinstance(t, PPair):
        return f"({show_proof(t.left)}, {show_proof(t.right)})"
    if isinstance(t, (PFst, PSnd)):
        return f"({'fst' if isinstance(t, PFst) else 'snd'} {show_proof(t.arg)})"
    if isinstance(t, PMu):
        return f"(mu {t.var}. {show_proof(t.body)})"
    if isinstance(t, PCut):
        return f"<{show_proof(t.left)} | {show_proof(t.right)}>"
    raise TypeError(t)


class SortClash(BlcError):
    def __init__(self, path: tuple, message: str):
        self.path = path
        super().__init__(f"sort clash at {'/'.join(path) or 'root'}: {message}")


class MissingAssignment(BlcError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"polarization does not assign {name}")


class DualFailure(BlcError):
    def __init__(self, message: str, original=None, conjugate=None):
        self.original = original
        self.conjugate = conjugate
        super().__init__(message)


@dataclass(frozen=True)
class Polarization:
    """``vars``: proof variable -> (namespace, name, type);
    ``consts``: proof constant -> Const or Bullet."""

    vars: dict = field(default_factory=dict)
    consts: dict = field(default_factory=dict)


def apply_polarization(t, p: Polarization) -> Node:
    """The BLC image of a proof term. Cuts are oriented expression-first."""
    return _apply(t, p, ())


def _apply(t, p, path):
    if isinstance(t, PConst):
        if t.name not in p.consts:
            raise MissingAssignment(t.name)
        return p.consts[t.name]
    if isinstance(t, PVar):
        if t.name not in p.vars:
            raise MissingAssignment(t.name)
        ns, name, ty = p.vars[t.name]
        return EVar(name, ty) if ns == EXPR_NS else CVar(name, ty)
    if isinstance(t, PLam):
        if t.var not in p.vars:
            raise MissingAssignment(t.var)
        ns, name, ty = p.vars[t.var]
        b = _apply(t.body, p, path + ("body",))
        want = "expr" if ns == EXPR_NS else "cont"
        if b.sort != want:
            raise SortClash(path, f"binder is a {want} variable but the body is a {b.sort}")
        return ELam(name, ty, b) if ns == EXPR_NS else CLam(name, ty, b)
    if isinstance(t, (PApp, PPair)):
        a_, b_ = (t.fn, t.arg) if isinstance(t, PApp) else (t.left, t.right)
        a = _apply(a_, p, path + ("0",))
        b = _apply(b_, p, path + ("1",))
        if a.sort != b.sort or a.sort == "cmd":
            raise SortClash(path, f"components are a {a.sort} and a {b.sort}")
        if isinstance(t, PApp):
            return EApp(a, b) if a.sort == "expr" else CApp(a, b)
        return EPair(a, b) if a.sort == "expr" else CPair(a, b)
    if isinstance(t, (PFst, PSnd)):
        a = _apply(t.arg, p, path + ("arg",))
        if a.sort == "cmd":
            raise SortClash(path, "cannot project a command")
        first = isinstance(t, PFst)
        if a.sort == "expr":
            return EFst(a) if first else ESnd(a)
        return CFst(a) if first else CSnd(a)
    if isinstance(t, PMu):
        if t.var not in p.vars:
            raise MissingAssignment(t.var)
        ns, name, ty = p.vars[t.var]
        body = _apply(t.body, p, path + ("body",))
        return EMu(name, ty, body) if ns == CONT_NS else CMu(name, ty, body)
    if isinstance(t, PCut):
        a = _apply(t.left, p, path + ("0",))
        b = _apply(t.right, p, path + ("1",))
        if {a.sort, b.sort} != {"expr", "cont"}:
            raise SortClash(path, f"a cut needs an expression and a continuation, got {a.sort} and {b.sort}")
        return Cut(a, b) if a.sort == "expr" else Cut(b, a)
    raise TypeError(t)


def dual_type(t: Ty) -> Ty:
    """Swap the producer and consumer readings of a type."""
    if isinstance(t, Imp):
        return Gets(dual_type(t.right), dual_type(t.left))
    if isinstance(t, Gets):
        return Imp(dual_type(t.right), dual_type(t.left))
    if isinstance(t, And):
        return Or(dual_type(t.left), dual_type(t.right))
    if isinstance(t, Or):
        return And(dual_type(t.left), dual_type(t.right))
    return t


def _flip_name(ns, name):
    if ns == EXPR_NS:
        return CONT_NS, "'" + name
    return EXPR_NS, name[1:] if name.startswith("'") else name


def conjugate_polarization(p: Polarization, supply: Optional[NameSupply] = None) -> Polarization:
    """Flip every namespace; variable types are dualized so the image stays typable.

    Constants swap ``#c:o`` and ``@o``; the expression constant reuses the
    proof constant's name.
    """
    vars_ = {}
    for v, (ns, name, ty) in p.vars.items():
        ns2, name2 = _flip_name(ns, name)
        vars_[v] = (ns2, name2, dual_type(ty))
    consts = {}
    for c, k in p.consts.items():
        # erase names constants c_<type>; the expression constant is c again
        consts[c] = Bullet(k.ty) if isinstance(k, Const) else Const(c.rsplit("_", 1)[0], k.ty)
    return Polarization(vars_, consts)


def equivalent(p: Polarization, q: Polarization) -> bool:
    """Same polarity per variable and the same identification pattern."""
    if set(p.vars) != set(q.vars):
        return False
    for v in p.vars:
        if p.vars[v][0] != q.vars[v][0]:
            return False
    keys = list(p.vars)
    for a in keys:
        for b in keys:
            same_p = p.vars[a][:2] == p.vars[b][:2]
            same_q = q.vars[a][:2] == q.vars[b][:2]
            if same_p != same_q:
                return False
    return True


def rename_polarization(p: Polarization, suffix: str = "r") -> Polarization:
    """An equivalent polarization with every variable name changed injectively."""
    return Polarization({v: (ns, name + suffix, ty) for v, (ns, name, ty) in p.vars.items()}, dict(p.consts))


def _env_of(img: Node) -> TypeEnv:
    from .syntax import free_var_types

    pos, neg = {}, {}
    for (ns, name), t in free_var_types(img).items():
        (pos if ns == EXPR_NS else neg)[name] = t
    return TypeEnv.of(pos, neg)


@dataclass(frozen=True)
class DualReport:
    original: object  # Judgment
    conjugate: object  # Judgment
    polarity_flipped: bool
    same_type: bool
    dual_type_matches: bool
    equivalence_invariant: bool
    involutive: bool

    @property
    def holds(self) -> bool:
        """The mirrored judgment at the same type."""
        return self.polarity_flipped and self.same_type

    @property
    def holds_dual(self) -> bool:
        return self.polarity_flipped and self.dual_type_matches


_FLIP = {"plus": "minus", "minus": "plus", "zero": "zero"}


def check_dual_typing(t, p: Polarization) -> DualReport:
    try:
        img = apply_polarization(t, p)
        j = blc_synth(_env_of(img), img, allow_shadowing=True)
    except (SortClash, MissingAssignment, TypeCheckError) as exc:
        raise DualFailure(f"original image is not typable: {exc}") from exc
    q = conjugate_polarization(p)
    try:
        img2 = apply_polarization(t, q)
        j2 = blc_synth(_env_of(img2), img2, allow_shadowing=True)
    except (SortClash, MissingAssignment, TypeCheckError) as exc:
        raise DualFailure(f"conjugate image is not typable: {exc}", j) from exc
    r = rename_polarization(p)
    try:
        img3 = apply_polarization(t, r)
        j3 = blc_synth(_env_of(img3), img3, allow_shadowing=True)
        inv = equivalent(p, r) and j3.kind == j.kind and j3.ty == j.ty
    except (SortClash, MissingAssignment, TypeCheckError):
        inv = False
    back = conjugate_polarization(q)
    return DualReport(
        original=j,
        conjugate=j2,
        polarity_flipped=j2.kind == _FLIP[j.kind],
        same_type=j2.ty == j.ty,
        dual_type_matches=j2.ty == (None if j.ty is None else dual_type(j.ty)),
        equivalence_invariant=inv,
        involutive=equivalent(back, p) and back == p,
    )


def erase(d: Node):
    """Forget namespaces: a BLC object as a proof term plus the polarization
    that recovers it."""
    vars_, consts = {}, {}

    def pv(ns, name, ty):
        v = name.lstrip("'")
        if ns == CONT_NS:
            v = "k" + v
        vars_.setdefault(v, (ns, name, ty))
        return v

    def go(n, env):
        if isinstance(n, Const):
            # #c:o and #c:p are different constants
            c = f"{n.name}_{n.ty.name}"
            consts.setdefault(c, n)
            return PConst(c)
        if isinstance(n, Bullet):
            c = "bot" + n.ty.name.replace("_", "")
            consts.setdefault(c, n)
            return PConst(c)
        if isinstance(n, EVar):
            return PVar(pv(EXPR_NS, n.name, env.get((EXPR_NS, n.name), n.ty)))
        if isinstance(n, CVar):
            return PVar(pv(CONT_NS, n.name, env.get((CONT_NS, n.name), n.ty)))
        if isinstance(n, ELam):
            return PLam(pv(EXPR_NS, n.var, n.ty), go(n.body, {**env, (EXPR_NS, n.var): n.ty}))
        if isinstance(n, CLam):
            return PLam(pv(CONT_NS, n.covar, n.ty), go(n.body, {**env, (CONT_NS, n.covar): n.ty}))
        if isinstance(n, (EApp, CApp)):
            return PApp(go(n.fn, env), go(n.arg, env))
        if isinstance(n, (EPair, CPair)):
            return PPair(go(n.left, env), go(n.right, env))
        if isinstance(n, (EFst, CFst)):
            return PFst(go(n.arg, env))
        if isinstance(n, (ESnd, CSnd)):
            return PSnd(go(n.arg, env))
        if isinstance(n, EMu):
            return PMu(pv(CONT_NS, n.covar, n.ty), go(n.body, {**env, (CONT_NS, n.covar): n.ty}))
        if isinstance(n, CMu):
            return PMu(pv(EXPR_NS, n.var, n.ty), go(n.body, {**env, (EXPR_NS, n.var): n.ty}))
        if isinstance(n, Cut):
            return PCut(go(n.expr, env), go(n.cont, env))
        raise TypeError(n)

    t = go(d, {})
    return t, Polarization(vars_, consts)
