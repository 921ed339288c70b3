"""Derivation trees, rule names, context paths, and serialization.

A derivation node carries its conclusion, a rule name, premise subtrees,
and the instantiation data (hole path, principal formulas) the checker
needs to re-validate the step without search.  Nodes hash by identity so
large proofs can share subtrees freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from . import syntax as sx

# rule names; which of them a system admits is decided by systems.py
ID = "Id"
DIST = "D"
BOT_AX = "Bot"
TOP_AX = "Top"
NEG1 = "Neg1"
NEG2 = "Neg2"
UNDER_L = "UnderL"
UNDER_R = "UnderR"
OVER_L = "OverL"
OVER_R = "OverR"
PROD_L = "ProdL"
PROD_R = "ProdR"
CUT = "Cut"
AND_L = "AndL"
AND_R = "AndR"
OR_L = "OrL"
OR_R = "OrR"
EXCH = "Exch"
DIA_L = "DiaL"
DIA_R = "DiaR"
BOXDOWN_L = "BoxDownL"
BOXDOWN_R = "BoxDownR"
AX_T = "AxT"
AX_4 = "Ax4"
AX_5 = "Ax5"
ONE_R = "OneR"
ONE_L_LEFT = "OneLLeft"
ONE_L_RIGHT = "OneLRight"
ASSUMPTION = "Assumption"

Path = tuple[int, ...]
LEFT, RIGHT, UNDER_BRACKET = 0, 1, 2


def tree_at(t: sx.StructTree, path: Path) -> sx.StructTree:
    for step in path:
        if step == LEFT and isinstance(t, sx.SNode):
            t = t.l
        elif step == RIGHT and isinstance(t, sx.SNode):
            t = t.r
        elif step == UNDER_BRACKET and isinstance(t, sx.SBracket):
            t = t.a
        else:
            raise ValueError(f"path {path} leaves the tree")
    return t


def tree_replace(t: sx.StructTree, path: Path, new: sx.StructTree) -> sx.StructTree:
    if not path:
        return new
    step, rest = path[0], path[1:]
    if step == LEFT and isinstance(t, sx.SNode):
        return sx.SNode(tree_replace(t.l, rest, new), t.r)
    if step == RIGHT and isinstance(t, sx.SNode):
        return sx.SNode(t.l, tree_replace(t.r, rest, new))
    if step == UNDER_BRACKET and isinstance(t, sx.SBracket):
        return sx.SBracket(tree_replace(t.a, rest, new))
    raise ValueError(f"path {path} leaves the tree")


def positions(t: sx.StructTree) -> Iterator[tuple[Path, sx.StructTree]]:
    """All subtree positions, outermost first, left before right."""
    queue = [((), t)]
    while queue:
        path, x = queue.pop(0)
        yield path, x
        if isinstance(x, sx.SNode):
            queue.append((path + (LEFT,), x.l))
            queue.append((path + (RIGHT,), x.r))
        elif isinstance(x, sx.SBracket):
            queue.append((path + (UNDER_BRACKET,), x.a))


@dataclass(frozen=True)
class Inst:
    """Re-check data for one step: where the action happened and with
    what."""

    path: Optional[Path] = None
    main: Optional[sx.LFormula] = None  # principal formula
    side: Optional[sx.LFormula] = None  # cut formula / residual partner
    idx: Optional[int] = None  # 1 or 2 for the pick-one rules
    member: Optional[sx.Sequent] = None  # the assumption used


@dataclass(frozen=True, eq=False)
class Derivation:
    seq: sx.Sequent
    rule: str
    premises: tuple["Derivation", ...] = ()
    inst: Inst = Inst()


def node(seq: sx.Sequent, rule: str, premises=(), inst: Inst = Inst()) -> Derivation:
    return Derivation(seq, rule, tuple(premises), inst)


def iter_nodes(d: Derivation) -> Iterator[Derivation]:
    """Every node once, shared subtrees deduplicated by identity."""
    seen: set[int] = set()
    stack = [d]
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        yield x
        stack.extend(x.premises)


def size(d: Derivation) -> int:
    return sum(1 for _ in iter_nodes(d))


def formulas_of(d: Derivation) -> frozenset[sx.LFormula]:
    out: set[sx.LFormula] = set()
    for n in iter_nodes(d):
        out.update(sx.sequent_formulas(n.seq))
    return frozenset(out)


def assumptions_of(d: Derivation) -> frozenset[sx.Sequent]:
    """The assumption members a derivation actually leans on."""
    return frozenset(
        n.inst.member for n in iter_nodes(d) if n.rule == ASSUMPTION
    )


# ---------------------------------------------------------------------------
# serialization (iterative: derivations can be thousands of nodes deep)


def _inst_to_json(i: Inst) -> dict:
    d = {}
    if i.path is not None:
        d["path"] = list(i.path)
    if i.main is not None:
        d["main"] = sx.render_lambek(i.main)
    if i.side is not None:
        d["side"] = sx.render_lambek(i.side)
    if i.idx is not None:
        d["idx"] = i.idx
    if i.member is not None:
        d["member"] = sx.render_sequent(i.member)
    return d


def _inst_from_json(d: dict) -> Inst:
    return Inst(
        path=tuple(d["path"]) if "path" in d else None,
        main=sx.parse_lambek(d["main"]) if "main" in d else None,
        side=sx.parse_lambek(d["side"]) if "side" in d else None,
        idx=d.get("idx"),
        member=sx.parse_sequent(d["member"]) if "member" in d else None,
    )


def to_json(d: Derivation) -> dict:
    out: dict[int, dict] = {}
    stack: list[tuple[Derivation, bool]] = [(d, False)]
    while stack:
        n, ready = stack.pop()
        if id(n) in out:
            continue
        if not ready:
            stack.append((n, True))
            stack.extend((p, False) for p in n.premises)
            continue
        j = {
            "seq": sx.render_sequent(n.seq),
            "rule": n.rule,
            "premises": [out[id(p)] for p in n.premises],
        }
        inst = _inst_to_json(n.inst)
        if inst:
            j["inst"] = inst
        out[id(n)] = j
    return out[id(d)]


def from_json(j: dict) -> Derivation:
    done: dict[int, Derivation] = {}
    stack: list[tuple[dict, bool]] = [(j, False)]
    while stack:
        d, ready = stack.pop()
        if id(d) in done:
            continue
        if not ready:
            stack.append((d, True))
            stack.extend((p, False) for p in d["premises"])
            continue
        done[id(d)] = Derivation(
            sx.parse_sequent(d["seq"]),
            d["rule"],
            tuple(done[id(p)] for p in d["premises"]),
            _inst_from_json(d.get("inst", {})),
        )
    return done[id(j)]


def pretty(d: Derivation) -> str:
    """Indented tree, conclusion first."""
    lines: list[str] = []
    stack: list[tuple[Derivation, int]] = [(d, 0)]
    while stack:
        n, depth = stack.pop()
        lines.append("  " * depth + f"{n.rule}: {sx.render_sequent(n.seq)}")
        for p in reversed(n.premises):
            stack.append((p, depth + 1))
    return "\n".join(lines)
