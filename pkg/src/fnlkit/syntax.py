"""ASTs, concrete grammar, and structural utilities for both languages.

Two formula languages live here: the modal language (atoms, bot, /\\, \\/,
->, ~, <>) and the substructural language (additionally top, one, *, \\,
/, [v], and generated fresh atoms).  Plus structure trees, sequents, and
the closure machinery shared by search and the translations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import ParseError


def _node(cls):
    # frozen dataclass with a lazily cached hash; formula trees are hashed
    # constantly by memo tables, so recomputing the tuple hash per lookup
    # would dominate search time.
    cls = dataclass(frozen=True)(cls)
    base_hash = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash_")
        if h is None:
            h = base_hash(self)
            object.__setattr__(self, "_hash_", h)
        return h

    cls.__hash__ = __hash__
    return cls


# ---------------------------------------------------------------------------
# modal formulas


class ModalFormula:
    __slots__ = ()


@_node
class MAtom(ModalFormula):
    name: str


@_node
class MBot(ModalFormula):
    pass


@_node
class MAnd(ModalFormula):
    l: ModalFormula
    r: ModalFormula


@_node
class MOr(ModalFormula):
    l: ModalFormula
    r: ModalFormula


@_node
class MImp(ModalFormula):
    l: ModalFormula
    r: ModalFormula


@_node
class MNot(ModalFormula):
    a: ModalFormula


@_node
class MDia(ModalFormula):
    a: ModalFormula


def mbox(a: ModalFormula) -> ModalFormula:
    """Box is not a constructor; it abbreviates ~<>~."""
    return MNot(MDia(MNot(a)))


def msize(f: ModalFormula) -> int:
    if isinstance(f, (MAtom, MBot)):
        return 0
    if isinstance(f, (MNot, MDia)):
        return 1 + msize(f.a)
    return 1 + msize(f.l) + msize(f.r)


def matoms(f: ModalFormula) -> frozenset[str]:
    if isinstance(f, MAtom):
        return frozenset([f.name])
    if isinstance(f, MBot):
        return frozenset()
    if isinstance(f, (MNot, MDia)):
        return matoms(f.a)
    return matoms(f.l) | matoms(f.r)


# ---------------------------------------------------------------------------
# substructural formulas


class LFormula:
    __slots__ = ()


@_node
class LAtom(LFormula):
    name: str


@_node
class LFresh(LFormula):
    """Generated letter: mark "neg" carries the formula it stands against,
    marks "bot"/"top" are the two constant surrogates."""

    mark: str
    of: Optional[LFormula] = None


@_node
class LBot(LFormula):
    pass


@_node
class LTop(LFormula):
    pass


@_node
class LOne(LFormula):
    pass


@_node
class LAnd(LFormula):
    l: LFormula
    r: LFormula


@_node
class LOr(LFormula):
    l: LFormula
    r: LFormula


@_node
class LNot(LFormula):
    a: LFormula


@_node
class LProd(LFormula):
    l: LFormula
    r: LFormula


@_node
class LUnder(LFormula):
    """Left residual: LUnder(a, b) is a\\b."""

    l: LFormula
    r: LFormula


@_node
class LOver(LFormula):
    """Right residual: LOver(a, b) is a/b."""

    l: LFormula
    r: LFormula


@_node
class LDia(LFormula):
    a: LFormula


@_node
class LBoxDown(LFormula):
    a: LFormula


BOT = LBot()
TOP = LTop()
ONE = LOne()
P_BOT = LFresh("bot")
P_TOP = LFresh("top")

_BINARY = (LAnd, LOr, LProd, LUnder, LOver)
_UNARY = (LNot, LDia, LBoxDown)


def fresh_for(a: LFormula) -> LFresh:
    return LFresh("neg", a)


def lsize(f: LFormula) -> int:
    """Connective count.  Atoms, constants and fresh letters all weigh 0;
    a fresh letter is atomic, its payload is bookkeeping, not structure."""
    if isinstance(f, _UNARY):
        return 1 + lsize(f.a)
    if isinstance(f, _BINARY):
        return 1 + lsize(f.l) + lsize(f.r)
    return 0


def subformulas(f: LFormula) -> frozenset[LFormula]:
    out: set[LFormula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if isinstance(g, _UNARY):
            stack.append(g.a)
        elif isinstance(g, _BINARY):
            stack.append(g.l)
            stack.append(g.r)
    return frozenset(out)


def subformulas_many(fs: Iterable[LFormula]) -> frozenset[LFormula]:
    out: frozenset[LFormula] = frozenset()
    for f in fs:
        out |= subformulas(f)
    return out


def walk(f: LFormula) -> Iterator[LFormula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, _UNARY):
            stack.append(g.a)
        elif isinstance(g, _BINARY):
            stack.append(g.l)
            stack.append(g.r)


def neg_free(f: LFormula) -> bool:
    return not any(isinstance(g, LNot) for g in walk(f))


def atom_keys(f: LFormula) -> frozenset[str]:
    """Names of the atomic letters of f, fresh letters included under their
    rendered form (which is what valuations key on)."""
    out = set()
    for g in walk(f):
        if isinstance(g, LAtom):
            out.add(g.name)
        elif isinstance(g, LFresh):
            out.add(render_lambek(g))
    return frozenset(out)


# ---------------------------------------------------------------------------
# structure trees and sequents


class StructTree:
    __slots__ = ()


@_node
class SLeaf(StructTree):
    f: LFormula


@_node
class SNode(StructTree):
    l: StructTree
    r: StructTree


@_node
class SBracket(StructTree):
    a: StructTree


@_node
class Sequent:
    ant: Optional[StructTree]
    suc: LFormula


def simple(a: LFormula, b: LFormula) -> Sequent:
    return Sequent(SLeaf(a), b)


def is_simple(s: Sequent) -> bool:
    return isinstance(s.ant, SLeaf)


def phi_of_tree(t: StructTree) -> LFormula:
    """Formula of a bracket-free tree: leaves stay, each node becomes *."""
    if isinstance(t, SLeaf):
        return t.f
    if isinstance(t, SNode):
        return LProd(phi_of_tree(t.l), phi_of_tree(t.r))
    raise ValueError("phi is undefined on bracketed trees")


def tree_formulas(t: StructTree) -> Iterator[LFormula]:
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, SLeaf):
            yield x.f
        elif isinstance(x, SNode):
            stack.append(x.l)
            stack.append(x.r)
        else:
            stack.append(x.a)


def sequent_formulas(s: Sequent) -> Iterator[LFormula]:
    if s.ant is not None:
        yield from tree_formulas(s.ant)
    yield s.suc


def subformulas_of_problem(goal: Sequent, phi: Iterable[Sequent]) -> frozenset[LFormula]:
    roots: list[LFormula] = list(sequent_formulas(goal))
    for s in phi:
        roots.extend(sequent_formulas(s))
    return subformulas_many(roots)


# ---------------------------------------------------------------------------
# rendering

# precedence, loosest to tightest; slashes are non-associative, the rest
# associate to the right.
_P_IMP, _P_OR, _P_AND, _P_SLASH, _P_STAR, _P_UNARY, _P_ATOM = 1, 2, 3, 4, 5, 6, 7


def _mprec(f: ModalFormula) -> int:
    if isinstance(f, MImp):
        return _P_IMP
    if isinstance(f, MOr):
        return _P_OR
    if isinstance(f, MAnd):
        return _P_AND
    if isinstance(f, (MNot, MDia)):
        return _P_UNARY
    return _P_ATOM


def render_modal(f: ModalFormula) -> str:
    if isinstance(f, MAtom):
        return f.name
    if isinstance(f, MBot):
        return "bot"
    if isinstance(f, MNot):
        return "~" + _wrap(render_modal(f.a), _mprec(f.a) < _P_UNARY)
    if isinstance(f, MDia):
        return "<>" + _wrap(render_modal(f.a), _mprec(f.a) < _P_UNARY)
    op = {"MAnd": "/\\", "MOr": "\\/", "MImp": "->"}[type(f).__name__]
    lvl = _mprec(f)
    left = _wrap(render_modal(f.l), _mprec(f.l) <= lvl)
    right = _wrap(render_modal(f.r), _mprec(f.r) < lvl)
    return f"{left} {op} {right}"


def _wrap(s: str, yes: bool) -> str:
    return f"({s})" if yes else s


def _lprec(f: LFormula) -> int:
    if isinstance(f, LOr):
        return _P_OR
    if isinstance(f, LAnd):
        return _P_AND
    if isinstance(f, (LUnder, LOver)):
        return _P_SLASH
    if isinstance(f, LProd):
        return _P_STAR
    if isinstance(f, _UNARY):
        return _P_UNARY
    return _P_ATOM


def render_lambek(f: LFormula) -> str:
    if isinstance(f, LAtom):
        return f.name
    if isinstance(f, LFresh):
        if f.mark == "bot":
            return "p_bot"
        if f.mark == "top":
            return "p_top"
        return "p{" + render_lambek(f.of) + "}"
    if isinstance(f, LBot):
        return "bot"
    if isinstance(f, LTop):
        return "top"
    if isinstance(f, LOne):
        return "one"
    if isinstance(f, LNot):
        return "~" + _wrap(render_lambek(f.a), _lprec(f.a) < _P_UNARY)
    if isinstance(f, LDia):
        return "<>" + _wrap(render_lambek(f.a), _lprec(f.a) < _P_UNARY)
    if isinstance(f, LBoxDown):
        return "[v]" + _wrap(render_lambek(f.a), _lprec(f.a) < _P_UNARY)
    lvl = _lprec(f)
    op = {"LAnd": "/\\", "LOr": "\\/", "LProd": "*", "LUnder": "\\", "LOver": "/"}[
        type(f).__name__
    ]
    if lvl == _P_SLASH:
        # slashes do not chain; parenthesize same-level children on both sides
        left = _wrap(render_lambek(f.l), _lprec(f.l) <= lvl)
        right = _wrap(render_lambek(f.r), _lprec(f.r) <= lvl)
    else:
        left = _wrap(render_lambek(f.l), _lprec(f.l) <= lvl)
        right = _wrap(render_lambek(f.r), _lprec(f.r) < lvl)
    return f"{left} {op} {right}"


def render_tree(t: StructTree) -> str:
    if isinstance(t, SLeaf):
        return render_lambek(t.f)
    if isinstance(t, SBracket):
        return "< " + render_tree(t.a) + " >"
    left = _wrap(render_tree(t.l), isinstance(t.l, SNode))
    right = _wrap(render_tree(t.r), isinstance(t.r, SNode))
    return f"{left} o {right}"


def render_sequent(s: Sequent) -> str:
    if s.ant is None:
        return "=> " + render_lambek(s.suc)
    return render_tree(s.ant) + " => " + render_lambek(s.suc)


def _prefix_key(f: LFormula) -> str:
    # canonical prefix spelling; groups same-size formulas by connective
    # (and(..) before or(..)), then by operands left to right
    if isinstance(f, LAtom):
        return "atom " + f.name
    if isinstance(f, LFresh):
        if f.of is None:
            return "fresh " + f.mark
        return "fresh neg(" + _prefix_key(f.of) + ")"
    if isinstance(f, (LBot, LTop, LOne)):
        return "const " + {LBot: "bot", LTop: "top", LOne: "one"}[type(f)]
    tag = _L_TAGS[type(f)]
    if isinstance(f, _UNARY):
        return tag + "(" + _prefix_key(f.a) + ")"
    return tag + "(" + _prefix_key(f.l) + "," + _prefix_key(f.r) + ")"


def sort_key(f: LFormula) -> tuple[int, str]:
    """Enumeration order: size first, canonical prefix text to break ties."""
    return (lsize(f), _prefix_key(f))


# ---------------------------------------------------------------------------
# tokenizer

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")
_RESERVED = {
    "bot": "BOT",
    "top": "TOP",
    "one": "ONE",
    "o": "O",
    "p_bot": "PBOT",
    "p_top": "PTOP",
}
# longest first so /\ beats /, <> beats <, etc.
_SYMBOLS = [
    ("/\\", "AND"),
    ("\\/", "OR"),
    ("->", "IMP"),
    ("=>", "SEQ"),
    ("<>", "DIA"),
    ("[v]", "BOXDOWN"),
    ("[]", "BOX"),
    ("*", "STAR"),
    ("\\", "UNDER"),
    ("/", "OVER"),
    ("~", "NOT"),
    ("(", "LP"),
    (")", "RP"),
    ("<", "LT"),
    (">", "GT"),
]


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = _ATOM_RE.match(text, i)
        if m:
            name = m.group(0)
            j = m.end()
            if name == "p" and j < n and text[j] == "{":
                # fresh letter p{...}: find the matching brace
                depth, k = 1, j + 1
                while k < n and depth:
                    if text[k] == "{":
                        depth += 1
                    elif text[k] == "}":
                        depth -= 1
                    k += 1
                if depth:
                    raise ParseError("unterminated fresh letter", i)
                toks.append(_Tok("FRESH", text[j + 1 : k - 1], i))
                i = k
                continue
            kind = _RESERVED.get(name, "ATOM")
            toks.append(_Tok(kind, name, i))
            i = j
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(_Tok(kind, sym, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    toks.append(_Tok("EOF", "", n))
    return toks


class _Parser:
    """Recursive descent over the token list.  `lang` switches the accepted
    token set: "modal" or "lambek"."""

    def __init__(self, toks: list[_Tok], lang: str):
        self.toks = toks
        self.pos = 0
        self.lang = lang

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind}, found {t.text or 'end of input'!r}", t.pos)
        return self.take()

    def fail(self, msg: str):
        raise ParseError(msg, self.peek().pos)

    # formula levels, loosest first

    def formula(self):
        if self.lang == "modal":
            return self.imp()
        return self.or_()

    def imp(self):
        left = self.or_()
        if self.peek().kind == "IMP":
            self.take()
            return MImp(left, self.imp())
        return left

    def or_(self):
        left = self.and_()
        if self.peek().kind == "OR":
            self.take()
            right = self.or_()
            return MOr(left, right) if self.lang == "modal" else LOr(left, right)
        return left

    def and_(self):
        left = self.slash()
        if self.peek().kind == "AND":
            self.take()
            right = self.and_()
            return MAnd(left, right) if self.lang == "modal" else LAnd(left, right)
        return left

    def slash(self):
        # \ and / are non-associative: a second slash at this level is an error
        left = self.star()
        k = self.peek().kind
        if k in ("UNDER", "OVER") and self.lang == "lambek":
            self.take()
            right = self.star()
            out = LUnder(left, right) if k == "UNDER" else LOver(left, right)
            nxt = self.peek()
            if nxt.kind in ("UNDER", "OVER"):
                raise ParseError("slashes do not chain; parenthesize", nxt.pos)
            return out
        return left

    def star(self):
        left = self.unary()
        if self.peek().kind == "STAR" and self.lang == "lambek":
            self.take()
            return LProd(left, self.star())
        return left

    def unary(self):
        t = self.peek()
        if t.kind == "NOT":
            self.take()
            a = self.unary()
            return MNot(a) if self.lang == "modal" else LNot(a)
        if t.kind == "DIA":
            self.take()
            a = self.unary()
            return MDia(a) if self.lang == "modal" else LDia(a)
        if t.kind == "BOX":
            if self.lang != "modal":
                self.fail("[] is modal syntax")
            self.take()
            return mbox(self.unary())
        if t.kind == "BOXDOWN":
            if self.lang != "lambek":
                self.fail("[v] is not modal syntax")
            self.take()
            return LBoxDown(self.unary())
        return self.atom()

    def atom(self):
        t = self.take()
        if t.kind == "ATOM":
            return MAtom(t.text) if self.lang == "modal" else LAtom(t.text)
        if t.kind == "BOT":
            return MBot() if self.lang == "modal" else BOT
        if self.lang == "lambek":
            if t.kind == "TOP":
                return TOP
            if t.kind == "ONE":
                return ONE
            if t.kind == "PBOT":
                return P_BOT
            if t.kind == "PTOP":
                return P_TOP
            if t.kind == "FRESH":
                return LFresh("neg", parse_lambek(t.text))
        if t.kind == "LP":
            f = self.formula()
            self.expect("RP")
            return f
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    # structure trees

    def tree(self) -> StructTree:
        left = self.tree_primary()
        if self.peek().kind == "O":
            self.take()
            right = self.tree_primary()
            if self.peek().kind == "O":
                self.fail("o does not chain; parenthesize")
            return SNode(left, right)
        return left

    def tree_primary(self) -> StructTree:
        t = self.peek()
        if t.kind == "LT":
            self.take()
            inner = self.tree()
            self.expect("GT")
            return SBracket(inner)
        if t.kind == "LP":
            # a parenthesis may open a formula or a subtree; try the formula
            # reading first and fall back on failure
            save = self.pos
            try:
                return SLeaf(self.formula())
            except ParseError:
                self.pos = save
            self.take()
            inner = self.tree()
            self.expect("RP")
            return inner
        return SLeaf(self.formula())

    def sequent(self) -> Sequent:
        if self.peek().kind == "SEQ":
            self.take()
            return Sequent(None, self.formula())
        ant = self.tree()
        self.expect("SEQ")
        return Sequent(ant, self.formula())


def _parse(text: str, lang: str, goal: str):
    p = _Parser(_tokenize(text), lang)
    out = getattr(p, goal)()
    if p.peek().kind != "EOF":
        raise ParseError(f"trailing input {p.peek().text!r}", p.peek().pos)
    return out


def parse_modal(text: str) -> ModalFormula:
    return _parse(text, "modal", "formula")


def parse_lambek(text: str) -> LFormula:
    return _parse(text, "lambek", "formula")


def parse_tree(text: str) -> StructTree:
    return _parse(text, "lambek", "tree")


def parse_sequent(text: str) -> Sequent:
    return _parse(text, "lambek", "sequent")


# ---------------------------------------------------------------------------
# closures


@_node
class ClosureSpec:
    base: frozenset[LFormula]
    mode: str  # "and_or" for c(T), "and_or_not" for c'(T)
    size_bound: int


def closure_contains(spec: ClosureSpec, f: LFormula) -> bool:
    """Membership test; the closure itself is infinite, so no enumeration."""
    if f in spec.base:
        return True
    if isinstance(f, (LAnd, LOr)):
        return closure_contains(spec, f.l) and closure_contains(spec, f.r)
    if isinstance(f, LNot) and spec.mode == "and_or_not":
        return closure_contains(spec, f.a)
    return False


@lru_cache(maxsize=64)
def enumerate_closure(spec: ClosureSpec) -> tuple[LFormula, ...]:
    """All members with size <= bound, sorted by (size, rendered text).

    Sizes compose additively, so layer k is assembled from base members and
    smaller layers; results are deduplicated against the base.
    """
    by_size: dict[int, set[LFormula]] = {}
    for f in spec.base:
        by_size.setdefault(lsize(f), set()).add(f)
    seen = set(spec.base)
    for k in range(spec.size_bound + 1):
        layer = by_size.setdefault(k, set())
        if k == 0:
            continue
        for i in range(k):
            for l in by_size.get(i, ()):
                for r in by_size.get(k - 1 - i, ()):
                    for g in (LAnd(l, r), LOr(l, r)):
                        if g not in seen:
                            seen.add(g)
                            layer.add(g)
        if spec.mode == "and_or_not":
            for a in by_size.get(k - 1, ()):
                g = LNot(a)
                if g not in seen:
                    seen.add(g)
                    layer.add(g)
    out = [f for k in range(spec.size_bound + 1) for f in by_size.get(k, ()) if lsize(f) <= spec.size_bound]
    out.sort(key=sort_key)
    return tuple(out)


# ---------------------------------------------------------------------------
# JSON codecs

_M_TAGS = {MAtom: "atom", MBot: "bot", MAnd: "and", MOr: "or", MImp: "imp", MNot: "not", MDia: "dia"}


def modal_to_json(f: ModalFormula) -> dict:
    k = _M_TAGS[type(f)]
    if isinstance(f, MAtom):
        return {"k": k, "name": f.name}
    if isinstance(f, MBot):
        return {"k": k}
    if isinstance(f, (MNot, MDia)):
        return {"k": k, "a": modal_to_json(f.a)}
    return {"k": k, "l": modal_to_json(f.l), "r": modal_to_json(f.r)}


def modal_from_json(d: dict) -> ModalFormula:
    k = d["k"]
    if k == "atom":
        return MAtom(d["name"])
    if k == "bot":
        return MBot()
    if k == "not":
        return MNot(modal_from_json(d["a"]))
    if k == "dia":
        return MDia(modal_from_json(d["a"]))
    ctor = {"and": MAnd, "or": MOr, "imp": MImp}[k]
    return ctor(modal_from_json(d["l"]), modal_from_json(d["r"]))


_L_TAGS = {
    LAtom: "atom",
    LFresh: "fresh",
    LBot: "bot",
    LTop: "top",
    LOne: "one",
    LAnd: "and",
    LOr: "or",
    LNot: "not",
    LProd: "prod",
    LUnder: "under",
    LOver: "over",
    LDia: "dia",
    LBoxDown: "boxdown",
}
_L_BIN_CTORS = {"and": LAnd, "or": LOr, "prod": LProd, "under": LUnder, "over": LOver}
_L_UN_CTORS = {"not": LNot, "dia": LDia, "boxdown": LBoxDown}
_L_CONSTS = {"bot": BOT, "top": TOP, "one": ONE}


def lformula_to_json(f: LFormula) -> dict:
    k = _L_TAGS[type(f)]
    if isinstance(f, LAtom):
        return {"k": k, "name": f.name}
    if isinstance(f, LFresh):
        d = {"k": k, "mark": f.mark}
        if f.of is not None:
            d["of"] = lformula_to_json(f.of)
        return d
    if isinstance(f, _UNARY):
        return {"k": k, "a": lformula_to_json(f.a)}
    if isinstance(f, _BINARY):
        return {"k": k, "l": lformula_to_json(f.l), "r": lformula_to_json(f.r)}
    return {"k": k}


def lformula_from_json(d: dict) -> LFormula:
    k = d["k"]
    if k == "atom":
        return LAtom(d["name"])
    if k == "fresh":
        of = lformula_from_json(d["of"]) if "of" in d else None
        return LFresh(d["mark"], of)
    if k in _L_CONSTS:
        return _L_CONSTS[k]
    if k in _L_UN_CTORS:
        return _L_UN_CTORS[k](lformula_from_json(d["a"]))
    return _L_BIN_CTORS[k](lformula_from_json(d["l"]), lformula_from_json(d["r"]))


def tree_to_json(t: StructTree) -> dict:
    if isinstance(t, SLeaf):
        return {"k": "leaf", "f": lformula_to_json(t.f)}
    if isinstance(t, SNode):
        return {"k": "node", "l": tree_to_json(t.l), "r": tree_to_json(t.r)}
    return {"k": "bracket", "a": tree_to_json(t.a)}


def tree_from_json(d: dict) -> StructTree:
    k = d["k"]
    if k == "leaf":
        return SLeaf(lformula_from_json(d["f"]))
    if k == "node":
        return SNode(tree_from_json(d["l"]), tree_from_json(d["r"]))
    return SBracket(tree_from_json(d["a"]))


def sequent_to_json(s: Sequent) -> dict:
    return {
        "ant": None if s.ant is None else tree_to_json(s.ant),
        "suc": lformula_to_json(s.suc),
    }


def sequent_from_json(d: dict) -> Sequent:
    ant = None if d.get("ant") is None else tree_from_json(d["ant"])
    return Sequent(ant, lformula_from_json(d["suc"]))
