"""Certified derivation builders.

Every function here returns a Derivation object that the independent
checker accepts; shape mismatches raise LemmaError immediately rather
than producing a bad proof.  On top of the one-node-per-rule
constructors sit the algebraic workhorses: transitivity chains,
monotonicity in every connective, the double-negation and De Morgan
conversions, and `lat_le`/`bool_le`, which decide (and certify) lattice
and boolean entailments between formulas built from opaque generators."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional

from . import proofs as pf
from . import syntax as sx
from .errors import LemmaError


def _fit(cond: bool, what: str) -> None:
    if not cond:
        raise LemmaError(f"derivation pieces do not fit: {what}")


def _ls(a: sx.LFormula, b: sx.LFormula) -> sx.Sequent:
    return sx.Sequent(sx.SLeaf(a), b)


# ---------------------------------------------------------------------------
# one node per rule


def did(a: sx.LFormula) -> pf.Derivation:
    """A => A."""
    return pf.node(_ls(a, a), pf.ID, [], pf.Inst())


def dtop(ant: Optional[sx.StructTree] = None) -> pf.Derivation:
    """G => top."""
    return pf.node(sx.Sequent(ant, sx.TOP), pf.TOP_AX, [], pf.Inst())


def dbot(ant: sx.StructTree, path: pf.Path, suc: sx.LFormula) -> pf.Derivation:
    """G[bot] => A."""
    _fit(pf.tree_at(ant, path) == sx.SLeaf(sx.BOT), "no bot leaf at path")
    return pf.node(sx.Sequent(ant, suc), pf.BOT_AX, [], pf.Inst(path=path))


def dbot_f(suc: sx.LFormula) -> pf.Derivation:
    """bot => A."""
    return dbot(sx.SLeaf(sx.BOT), (), suc)


def dD(a: sx.LFormula, b: sx.LFormula, c: sx.LFormula) -> pf.Derivation:
    """A /\\ (B \\/ C) => (A /\\ B) \\/ (A /\\ C)."""
    seq = _ls(sx.LAnd(a, sx.LOr(b, c)), sx.LOr(sx.LAnd(a, b), sx.LAnd(a, c)))
    return pf.node(seq, pf.DIST, [], pf.Inst())


def dneg1(a: sx.LFormula) -> pf.Derivation:
    """A /\\ ~A => bot."""
    return pf.node(_ls(sx.LAnd(a, sx.LNot(a)), sx.BOT), pf.NEG1, [], pf.Inst())


def dneg2(a: sx.LFormula) -> pf.Derivation:
    """top => A \\/ ~A."""
    return pf.node(_ls(sx.TOP, sx.LOr(a, sx.LNot(a))), pf.NEG2, [], pf.Inst())


def done_r() -> pf.Derivation:
    """=> one."""
    return pf.node(sx.Sequent(None, sx.ONE), pf.ONE_R, [], pf.Inst())


def dax_t(a: sx.LFormula) -> pf.Derivation:
    """A => <>A."""
    return pf.node(_ls(a, sx.LDia(a)), pf.AX_T, [], pf.Inst())


def dax_4(a: sx.LFormula) -> pf.Derivation:
    """<><>A => <>A."""
    return pf.node(_ls(sx.LDia(sx.LDia(a)), sx.LDia(a)), pf.AX_4, [], pf.Inst())


def dax_5(a: sx.LFormula) -> pf.Derivation:
    """<>A => ~<>~<>A."""
    seq = _ls(sx.LDia(a), sx.LNot(sx.LDia(sx.LNot(sx.LDia(a)))))
    return pf.node(seq, pf.AX_5, [], pf.Inst())


def dassume(seq: sx.Sequent) -> pf.Derivation:
    """A member of the assumption set, verbatim."""
    return pf.node(seq, pf.ASSUMPTION, [], pf.Inst(member=seq))


def dcut(minor: pf.Derivation, major: pf.Derivation, path: pf.Path = ()) -> pf.Derivation:
    """From D => A and G[A] => B conclude G[D] => B."""
    a = minor.seq.suc
    m_ant = major.seq.ant
    _fit(m_ant is not None, "cut into an empty antecedent")
    _fit(pf.tree_at(m_ant, path) == sx.SLeaf(a), "major premise lacks the cut formula at path")
    if minor.seq.ant is None:
        _fit(path == (), "an empty minor premise can only cut at the root")
        new_ant = None
    else:
        new_ant = pf.tree_replace(m_ant, path, minor.seq.ant)
    seq = sx.Sequent(new_ant, major.seq.suc)
    return pf.node(seq, pf.CUT, [minor, major], pf.Inst(path=path, side=a))


def le_trans(*ds: pf.Derivation) -> pf.Derivation:
    """Chain G => A1, A1 => A2, ..., An-1 => An into G => An."""
    _fit(len(ds) >= 1, "empty chain")
    out = ds[0]
    for d in ds[1:]:
        out = dcut(out, d, ())
    return out


def dand_r(d1: pf.Derivation, d2: pf.Derivation) -> pf.Derivation:
    """From G => A and G => B conclude G => A /\\ B."""
    _fit(d1.seq.ant == d2.seq.ant, "conjunction premises differ in antecedent")
    seq = sx.Sequent(d1.seq.ant, sx.LAnd(d1.seq.suc, d2.seq.suc))
    return pf.node(seq, pf.AND_R, [d1, d2], pf.Inst(main=seq.suc))


def dand_l(d: pf.Derivation, main: sx.LAnd, idx: int, path: pf.Path = ()) -> pf.Derivation:
    """From G[A_idx] => C conclude G[A1 /\\ A2] => C."""
    sub = main.l if idx == 1 else main.r
    ant = d.seq.ant
    _fit(ant is not None and pf.tree_at(ant, path) == sx.SLeaf(sub), "premise lacks the conjunct")
    seq = sx.Sequent(pf.tree_replace(ant, path, sx.SLeaf(main)), d.seq.suc)
    return pf.node(seq, pf.AND_L, [d], pf.Inst(path=path, main=main, idx=idx))


def dor_r(d: pf.Derivation, main: sx.LOr, idx: int) -> pf.Derivation:
    """From G => A_idx conclude G => A1 \\/ A2."""
    sub = main.l if idx == 1 else main.r
    _fit(d.seq.suc == sub, "premise does not prove the chosen disjunct")
    return pf.node(sx.Sequent(d.seq.ant, main), pf.OR_R, [d], pf.Inst(main=main, idx=idx))


def dor_l(d1: pf.Derivation, d2: pf.Derivation, main: sx.LOr, path: pf.Path = ()) -> pf.Derivation:
    """From G[A] => C and G[B] => C conclude G[A \\/ B] => C."""
    ant = d1.seq.ant
    _fit(ant is not None and pf.tree_at(ant, path) == sx.SLeaf(main.l), "left premise mismatch")
    _fit(
        d2.seq == sx.Sequent(pf.tree_replace(ant, path, sx.SLeaf(main.r)), d1.seq.suc),
        "right premise mismatch",
    )
    seq = sx.Sequent(pf.tree_replace(ant, path, sx.SLeaf(main)), d1.seq.suc)
    return pf.node(seq, pf.OR_L, [d1, d2], pf.Inst(path=path, main=main))


def dprod_r(d1: pf.Derivation, d2: pf.Derivation) -> pf.Derivation:
    """From G => A and D => B conclude G o D => A * B."""
    _fit(d1.seq.ant is not None and d2.seq.ant is not None, "product needs nonempty sides")
    seq = sx.Sequent(sx.SNode(d1.seq.ant, d2.seq.ant), sx.LProd(d1.seq.suc, d2.seq.suc))
    return pf.node(seq, pf.PROD_R, [d1, d2], pf.Inst(main=seq.suc))


def dprod_l(d: pf.Derivation, path: pf.Path = ()) -> pf.Derivation:
    """From G[A o B] => C (two leaves) conclude G[A * B] => C."""
    ant = d.seq.ant
    _fit(ant is not None, "empty antecedent")
    x = pf.tree_at(ant, path)
    _fit(
        isinstance(x, sx.SNode) and isinstance(x.l, sx.SLeaf) and isinstance(x.r, sx.SLeaf),
        "no two-leaf node at path",
    )
    main = sx.LProd(x.l.f, x.r.f)
    seq = sx.Sequent(pf.tree_replace(ant, path, sx.SLeaf(main)), d.seq.suc)
    return pf.node(seq, pf.PROD_L, [d], pf.Inst(path=path, main=main))


def dunder_r(d: pf.Derivation, a: sx.LFormula) -> pf.Derivation:
    """From A o G => B (or A => B) conclude G => A \\ B (=> A \\ B)."""
    ant = d.seq.ant
    if ant == sx.SLeaf(a):
        rest = None
    else:
        _fit(isinstance(ant, sx.SNode) and ant.l == sx.SLeaf(a), "antecedent does not start with A")
        rest = ant.r
    main = sx.LUnder(a, d.seq.suc)
    return pf.node(sx.Sequent(rest, main), pf.UNDER_R, [d], pf.Inst(main=main))


def dover_r(d: pf.Derivation, b: sx.LFormula) -> pf.Derivation:
    """From G o B => A (or B => A) conclude G => A / B (=> A / B)."""
    ant = d.seq.ant
    if ant == sx.SLeaf(b):
        rest = None
    else:
        _fit(isinstance(ant, sx.SNode) and ant.r == sx.SLeaf(b), "antecedent does not end with B")
        rest = ant.l
    main = sx.LOver(d.seq.suc, b)
    return pf.node(sx.Sequent(rest, main), pf.OVER_R, [d], pf.Inst(main=main))


def dunder_l(minor: pf.Derivation, major: pf.Derivation, path: pf.Path = ()) -> pf.Derivation:
    """From D => A and G[B] => C conclude G[D o (A \\ B)] => C."""
    _fit(minor.seq.ant is not None, "minor premise must be nonempty")
    m_ant = major.seq.ant
    _fit(m_ant is not None, "major premise must be nonempty")
    hole = pf.tree_at(m_ant, path)
    _fit(isinstance(hole, sx.SLeaf), "major premise hole is not a leaf")
    main = sx.LUnder(minor.seq.suc, hole.f)
    new = pf.tree_replace(m_ant, path, sx.SNode(minor.seq.ant, sx.SLeaf(main)))
    seq = sx.Sequent(new, major.seq.suc)
    return pf.node(seq, pf.UNDER_L, [minor, major], pf.Inst(path=path, main=main))


def dover_l(major: pf.Derivation, minor: pf.Derivation, path: pf.Path = ()) -> pf.Derivation:
    """From G[A] => C and D => B conclude G[(A / B) o D] => C."""
    _fit(minor.seq.ant is not None, "minor premise must be nonempty")
    m_ant = major.seq.ant
    _fit(m_ant is not None, "major premise must be nonempty")
    hole = pf.tree_at(m_ant, path)
    _fit(isinstance(hole, sx.SLeaf), "major premise hole is not a leaf")
    main = sx.LOver(hole.f, minor.seq.suc)
    new = pf.tree_replace(m_ant, path, sx.SNode(sx.SLeaf(main), minor.seq.ant))
    seq = sx.Sequent(new, major.seq.suc)
    return pf.node(seq, pf.OVER_L, [major, minor], pf.Inst(path=path, main=main))


def ddia_r(d: pf.Derivation) -> pf.Derivation:
    """From G => A conclude < G > => <>A."""
    _fit(d.seq.ant is not None, "empty antecedent cannot be bracketed")
    main = sx.LDia(d.seq.suc)
    return pf.node(sx.Sequent(sx.SBracket(d.seq.ant), main), pf.DIA_R, [d], pf.Inst(main=main))


def ddia_l(d: pf.Derivation, path: pf.Path = ()) -> pf.Derivation:
    """From G[< A >] => B conclude G[<>A] => B."""
    ant = d.seq.ant
    x = pf.tree_at(ant, path) if ant is not None else None
    _fit(isinstance(x, sx.SBracket) and isinstance(x.a, sx.SLeaf), "no bracketed leaf at path")
    main = sx.LDia(x.a.f)
    seq = sx.Sequent(pf.tree_replace(ant, path, sx.SLeaf(main)), d.seq.suc)
    return pf.node(seq, pf.DIA_L, [d], pf.Inst(path=path, main=main))


def dboxdown_r(d: pf.Derivation) -> pf.Derivation:
    """From < G > => A conclude G => []vA."""
    _fit(isinstance(d.seq.ant, sx.SBracket), "antecedent is not bracketed")
    main = sx.LBoxDown(d.seq.suc)
    return pf.node(sx.Sequent(d.seq.ant.a, main), pf.BOXDOWN_R, [d], pf.Inst(main=main))


def dboxdown_l(d: pf.Derivation, path: pf.Path = ()) -> pf.Derivation:
    """From G[A] => B conclude G[< []vA >] => B."""
    ant = d.seq.ant
    x = pf.tree_at(ant, path) if ant is not None else None
    _fit(isinstance(x, sx.SLeaf), "no leaf at path")
    main = sx.LBoxDown(x.f)
    new = pf.tree_replace(ant, path, sx.SBracket(sx.SLeaf(main)))
    return pf.node(sx.Sequent(new, d.seq.suc), pf.BOXDOWN_L, [d], pf.Inst(path=path, main=main))


def dexch(d: pf.Derivation, path: pf.Path = ()) -> pf.Derivation:
    """From G[D2 o D1] => A conclude G[D1 o D2] => A."""
    ant = d.seq.ant
    x = pf.tree_at(ant, path) if ant is not None else None
    _fit(isinstance(x, sx.SNode), "no node at path")
    new = pf.tree_replace(ant, path, sx.SNode(x.r, x.l))
    return pf.node(sx.Sequent(new, d.seq.suc), pf.EXCH, [d], pf.Inst(path=path))


def done_l(d: pf.Derivation, path: pf.Path = (), side: str = "l") -> pf.Derivation:
    """From G[D] => A conclude G[one o D] => A (side "l") or G[D o one] => A."""
    ant = d.seq.ant
    _fit(ant is not None, "empty antecedent")
    sub = pf.tree_at(ant, path)
    unit = sx.SLeaf(sx.ONE)
    new_sub = sx.SNode(unit, sub) if side == "l" else sx.SNode(sub, unit)
    rule = pf.ONE_L_LEFT if side == "l" else pf.ONE_L_RIGHT
    seq = sx.Sequent(pf.tree_replace(ant, path, new_sub), d.seq.suc)
    return pf.node(seq, rule, [d], pf.Inst(path=path))


def dassume_prod(member: sx.Sequent) -> pf.Derivation:
    """From assumption A * B => C conclude A o B => C."""
    f = member.ant.f if isinstance(member.ant, sx.SLeaf) else None
    _fit(isinstance(f, sx.LProd), "assumption is not a product sequent")
    return dcut(dprod_r(did(f.l), did(f.r)), dassume(member), ())


# ---------------------------------------------------------------------------
# monotonicity and small algebra


def comm_and(a: sx.LFormula, b: sx.LFormula) -> pf.Derivation:
    """A /\\ B => B /\\ A."""
    main = sx.LAnd(a, b)
    return dand_r(dand_l(did(b), main, 2), dand_l(did(a), main, 1))


def and_mono(d1: pf.Derivation, d2: pf.Derivation) -> pf.Derivation:
    """From A => A' and B => B' conclude A /\\ B => A' /\\ B'."""
    a = d1.seq.ant.f if isinstance(d1.seq.ant, sx.SLeaf) else None
    b = d2.seq.ant.f if isinstance(d2.seq.ant, sx.SLeaf) else None
    _fit(a is not None and b is not None, "monotonicity needs simple premises")
    main = sx.LAnd(a, b)
    return dand_r(dand_l(d1, main, 1), dand_l(d2, main, 2))


def or_mono(d1: pf.Derivation, d2: pf.Derivation) -> pf.Derivation:
    """From A => A' and B => B' conclude A \\/ B => A' \\/ B'."""
    out = sx.LOr(d1.seq.suc, d2.seq.suc)
    a = d1.seq.ant.f if isinstance(d1.seq.ant, sx.SLeaf) else None
    b = d2.seq.ant.f if isinstance(d2.seq.ant, sx.SLeaf) else None
    _fit(a is not None and b is not None, "monotonicity needs simple premises")
    return dor_l(dor_r(d1, out, 1), dor_r(d2, out, 2), sx.LOr(a, b))


def prod_mono(d1: pf.Derivation, d2: pf.Derivation) -> pf.Derivation:
    """From A => A' and B => B' conclude A * B => A' * B'."""
    return dprod_l(dprod_r(d1, d2))


def under_mono(d1: pf.Derivation, d2: pf.Derivation) -> pf.Derivation:
    """From A' => A and B => B' conclude A \\ B => A' \\ B'."""
    b = d2.seq.ant.f if isinstance(d2.seq.ant, sx.SLeaf) else None
    _fit(b is not None, "monotonicity needs simple premises")
    return dunder_r(dunder_l(d1, d2, ()), d1.seq.ant.f)


def over_mono(d1: pf.Derivation, d2: pf.Derivation) -> pf.Derivation:
    """From A => A' and B' => B conclude A / B => A' / B'."""
    a = d1.seq.ant.f if isinstance(d1.seq.ant, sx.SLeaf) else None
    _fit(a is not None, "monotonicity needs simple premises")
    return dover_r(dover_l(d1, d2, ()), d2.seq.ant.f)


def dia_mono(d: pf.Derivation) -> pf.Derivation:
    """From A => B conclude <>A => <>B."""
    return ddia_l(ddia_r(d))


def boxdown_mono(d: pf.Derivation) -> pf.Derivation:
    """From A => B conclude []vA => []vB."""
    a = d.seq.ant.f if isinstance(d.seq.ant, sx.SLeaf) else None
    _fit(a is not None, "monotonicity needs simple premises")
    inner = pf.node(
        sx.Sequent(sx.SBracket(sx.SLeaf(sx.LBoxDown(a))), d.seq.suc),
        pf.BOXDOWN_L,
        [d],
        pf.Inst(path=(), main=sx.LBoxDown(a)),
    )
    return dboxdown_r(inner)


def expand_by_cases(d: pf.Derivation, g: sx.LFormula) -> pf.Derivation:
    """From G => X conclude G => (X /\\ g) \\/ (X /\\ ~g)."""
    x = d.seq.suc
    with_lem = dand_r(d, le_trans(dtop(d.seq.ant), dneg2(g)))
    return le_trans(with_lem, dD(x, g, sx.LNot(g)))


def neg_intro(d: pf.Derivation) -> pf.Derivation:
    """From X /\\ Y => bot conclude X => ~Y."""
    f = d.seq.ant.f if isinstance(d.seq.ant, sx.SLeaf) else None
    _fit(isinstance(f, sx.LAnd) and d.seq.suc == sx.BOT, "premise is not a refutation pair")
    x, y = f.l, f.r
    ny = sx.LNot(y)
    split = expand_by_cases(did(x), y)
    left = le_trans(d, dbot_f(ny))
    right = dand_l(did(ny), sx.LAnd(x, ny), 2)
    return le_trans(split, dor_l(left, right, sx.LOr(sx.LAnd(x, y), sx.LAnd(x, ny))))


def neg_anti(d: pf.Derivation) -> pf.Derivation:
    """From A => B conclude ~B => ~A."""
    a = d.seq.ant.f if isinstance(d.seq.ant, sx.SLeaf) else None
    _fit(a is not None, "antitonicity needs a simple premise")
    b = d.seq.suc
    nb = sx.LNot(b)
    refute = le_trans(and_mono(did(nb), d), comm_and(nb, b), dneg1(b))
    return neg_intro(refute)


def fact7(d: pf.Derivation) -> pf.Derivation:
    """From A => B conclude => ~A \\/ B."""
    a = d.seq.ant.f if isinstance(d.seq.ant, sx.SLeaf) else None
    _fit(a is not None, "needs a simple premise")
    na = sx.LNot(a)
    out = sx.LOr(na, d.seq.suc)
    branch = dor_l(dor_r(d, out, 2), dor_r(did(na), out, 1), sx.LOr(a, na))
    return le_trans(dtop(None), dneg2(a), branch)


def cong_replace(
    c: sx.LFormula,
    a: sx.LFormula,
    b: sx.LFormula,
    dab: pf.Derivation,
    dba: pf.Derivation,
) -> tuple[sx.LFormula, pf.Derivation, pf.Derivation]:
    """Replace every occurrence of a inside c by b and certify both
    directions: returns (c', c => c', c' => c).  The residuals flip the
    argument direction and a negation flips the whole step."""
    _fit(dab.seq == _ls(a, b) and dba.seq == _ls(b, a), "premises must be a two-way pair")
    if c == a:
        return b, dab, dba
    if isinstance(c, (sx.LAnd, sx.LOr, sx.LProd, sx.LUnder, sx.LOver)):
        l2, fl, bl = cong_replace(c.l, a, b, dab, dba)
        r2, fr, br = cong_replace(c.r, a, b, dab, dba)
        if l2 == c.l and r2 == c.r:
            return c, did(c), did(c)
        c2 = type(c)(l2, r2)
        if isinstance(c, sx.LAnd):
            return c2, and_mono(fl, fr), and_mono(bl, br)
        if isinstance(c, sx.LOr):
            return c2, or_mono(fl, fr), or_mono(bl, br)
        if isinstance(c, sx.LProd):
            return c2, prod_mono(fl, fr), prod_mono(bl, br)
        if isinstance(c, sx.LUnder):
            return c2, under_mono(bl, fr), under_mono(fl, br)
        return c2, over_mono(fl, br), over_mono(bl, fr)
    if isinstance(c, sx.LNot):
        a2, f, bwd = cong_replace(c.a, a, b, dab, dba)
        if a2 == c.a:
            return c, did(c), did(c)
        return sx.LNot(a2), neg_anti(bwd), neg_anti(f)
    if isinstance(c, (sx.LDia, sx.LBoxDown)):
        a2, f, bwd = cong_replace(c.a, a, b, dab, dba)
        if a2 == c.a:
            return c, did(c), did(c)
        mono = dia_mono if isinstance(c, sx.LDia) else boxdown_mono
        return type(c)(a2), mono(f), mono(bwd)
    return c, did(c), did(c)


def dnn_intro(a: sx.LFormula) -> pf.Derivation:
    """A => ~~A."""
    na, nna = sx.LNot(a), sx.LNot(sx.LNot(a))
    split = expand_by_cases(did(a), na)
    left = le_trans(dneg1(a), dbot_f(nna))
    right = dand_l(did(nna), sx.LAnd(a, nna), 2)
    return le_trans(split, dor_l(left, right, sx.LOr(sx.LAnd(a, na), sx.LAnd(a, nna))))


def dnn_elim(a: sx.LFormula) -> pf.Derivation:
    """~~A => A."""
    na, nna = sx.LNot(a), sx.LNot(sx.LNot(a))
    split = expand_by_cases(did(nna), a)
    left = dand_l(did(a), sx.LAnd(nna, a), 2)
    flip = lat_le_strict(sx.LAnd(nna, na), sx.LAnd(na, nna))
    right = le_trans(flip, dneg1(na), dbot_f(a))
    return le_trans(split, dor_l(left, right, sx.LOr(sx.LAnd(nna, a), sx.LAnd(nna, na))))


def dneg_top() -> pf.Derivation:
    """~top => bot."""
    nt = sx.LNot(sx.TOP)
    return le_trans(dand_r(dtop(sx.SLeaf(nt)), did(nt)), dneg1(sx.TOP))


def dtop_negbot() -> pf.Derivation:
    """top => ~bot."""
    nb = sx.LNot(sx.BOT)
    return le_trans(dneg2(sx.BOT), dor_l(dbot_f(nb), did(nb), sx.LOr(sx.BOT, nb)))


def dm_and_fwd(a: sx.LFormula, b: sx.LFormula) -> pf.Derivation:
    """~(A /\\ B) => ~A \\/ ~B."""
    ab = sx.LAnd(a, b)
    x = sx.LNot(ab)
    na, nb = sx.LNot(a), sx.LNot(b)
    target = sx.LOr(na, nb)
    xa = sx.LAnd(x, a)
    xab = sx.LAnd(xa, b)
    xanb = sx.LAnd(xa, nb)
    leftleft = le_trans(lat_le_strict(xab, sx.LAnd(ab, x)), dneg1(ab), dbot_f(target))
    leftright = lat_le_strict(xanb, target)
    left = le_trans(expand_by_cases(did(xa), b), dor_l(leftleft, leftright, sx.LOr(xab, xanb)))
    right = lat_le_strict(sx.LAnd(x, na), target)
    split = expand_by_cases(did(x), a)
    return le_trans(split, dor_l(left, right, sx.LOr(xa, sx.LAnd(x, na))))


def dm_and_bwd(a: sx.LFormula, b: sx.LFormula) -> pf.Derivation:
    """~A \\/ ~B => ~(A /\\ B)."""
    ab = sx.LAnd(a, b)
    left = neg_anti(lat_le_strict(ab, a))
    right = neg_anti(lat_le_strict(ab, b))
    return dor_l(left, right, sx.LOr(sx.LNot(a), sx.LNot(b)))


def dm_or_fwd(a: sx.LFormula, b: sx.LFormula) -> pf.Derivation:
    """~(A \\/ B) => ~A /\\ ~B."""
    ab = sx.LOr(a, b)
    return dand_r(neg_anti(dor_r(did(a), ab, 1)), neg_anti(dor_r(did(b), ab, 2)))


def dm_or_bwd(a: sx.LFormula, b: sx.LFormula) -> pf.Derivation:
    """~A /\\ ~B => ~(A \\/ B)."""
    ab = sx.LOr(a, b)
    x = sx.LAnd(sx.LNot(a), sx.LNot(b))
    pairs = sx.LOr(sx.LAnd(a, sx.LNot(a)), sx.LAnd(b, sx.LNot(b)))
    core = lat_le_strict(sx.LAnd(x, ab), pairs)
    refute = le_trans(core, dor_l(dneg1(a), dneg1(b), pairs))
    return neg_intro(refute)


def dist_prod_or(m: sx.LFormula, x: sx.LFormula, y: sx.LFormula) -> pf.Derivation:
    """M * (X \\/ Y) => (M * X) \\/ (M * Y)."""
    out = sx.LOr(sx.LProd(m, x), sx.LProd(m, y))
    left = dor_r(dprod_r(did(m), did(x)), out, 1)
    right = dor_r(dprod_r(did(m), did(y)), out, 2)
    return dprod_l(dor_l(left, right, sx.LOr(x, y), path=(1,)))


def undist_prod_or(m: sx.LFormula, x: sx.LFormula, y: sx.LFormula) -> pf.Derivation:
    """(M * X) \\/ (M * Y) => M * (X \\/ Y)."""
    xy = sx.LOr(x, y)
    left = prod_mono(did(m), dor_r(did(x), xy, 1))
    right = prod_mono(did(m), dor_r(did(y), xy, 2))
    return dor_l(left, right, sx.LOr(sx.LProd(m, x), sx.LProd(m, y)))


# ---------------------------------------------------------------------------
# lattice entailment with certificates

_LATTICE = (sx.LAnd, sx.LOr)


def members(f: sx.LFormula) -> tuple[sx.LFormula, ...]:
    """The conjunct leaves of a /\\-tree (f itself if not a conjunction)."""
    if isinstance(f, sx.LAnd):
        return members(f.l) + members(f.r)
    return (f,)


def or_leaves(f: sx.LFormula) -> tuple[sx.LFormula, ...]:
    if isinstance(f, sx.LOr):
        return or_leaves(f.l) + or_leaves(f.r)
    return (f,)


def or_elim(f: sx.LFormula, build: Callable[[sx.LFormula], pf.Derivation]) -> pf.Derivation:
    """Assemble G-free case analysis: from d_i : C_i => G for each \\/-leaf
    C_i of f, conclude f => G."""
    if isinstance(f, sx.LOr):
        return dor_l(or_elim(f.l, build), or_elim(f.r, build), f)
    return build(f)


def or_inject(d: pf.Derivation, f: sx.LFormula) -> pf.Derivation:
    """From G => D, with D a \\/-leaf of f, conclude G => f."""
    target = d.seq.suc
    if f == target:
        return d
    _fit(isinstance(f, sx.LOr), "succedent is not a disjunct of the target")
    if target in or_leaves(f.l):
        return dor_r(or_inject(d, f.l), f, 1)
    return dor_r(or_inject(d, f.r), f, 2)


def _has_or(f: sx.LFormula) -> bool:
    if isinstance(f, sx.LOr):
        return True
    if isinstance(f, sx.LAnd):
        return _has_or(f.l) or _has_or(f.r)
    return False


def _hoist(f: sx.LAnd) -> tuple[pf.Derivation, sx.LFormula, sx.LFormula]:
    """For a conjunction containing a buried disjunction, certify
    f => f[u] \\/ f[v] where u \\/ v is the hoisted member."""
    l, r = f.l, f.r
    if isinstance(r, sx.LOr):
        return dD(l, r.l, r.r), sx.LAnd(l, r.l), sx.LAnd(l, r.r)
    if isinstance(l, sx.LOr):
        u, v = l.l, l.r
        d = le_trans(
            comm_and(l, r),
            dD(r, u, v),
            or_mono(comm_and(r, u), comm_and(r, v)),
        )
        return d, sx.LAnd(u, r), sx.LAnd(v, r)
    if _has_or(r):
        dh, ru, rv = _hoist(r)
        d = le_trans(and_mono(did(l), dh), dD(l, ru, rv))
        return d, sx.LAnd(l, ru), sx.LAnd(l, rv)
    dh, lu, lv = _hoist(l)
    d = le_trans(
        and_mono(dh, did(r)),
        comm_and(sx.LOr(lu, lv), r),
        dD(r, lu, lv),
        or_mono(comm_and(r, lu), comm_and(r, lv)),
    )
    return d, sx.LAnd(lu, r), sx.LAnd(lv, r)


@lru_cache(maxsize=131072)
def _lat(a: sx.LFormula, b: sx.LFormula) -> Optional[pf.Derivation]:
    if a == b:
        return did(a)
    if b == sx.TOP:
        return dtop(sx.SLeaf(a))
    if a == sx.BOT:
        return dbot_f(b)
    if isinstance(a, sx.LOr):
        d1, d2 = _lat(a.l, b), _lat(a.r, b)
        if d1 is not None and d2 is not None:
            return dor_l(d1, d2, a)
        return None
    if isinstance(a, sx.LAnd) and _has_or(a):
        dh, fu, fv = _hoist(a)
        d1, d2 = _lat(fu, b), _lat(fv, b)
        if d1 is not None and d2 is not None:
            return le_trans(dh, dor_l(d1, d2, sx.LOr(fu, fv)))
        return None
    if isinstance(b, sx.LAnd):
        d1, d2 = _lat(a, b.l), _lat(a, b.r)
        if d1 is not None and d2 is not None:
            return dand_r(d1, d2)
        return None
    if isinstance(a, sx.LAnd):
        d = _lat(a.l, b)
        if d is not None:
            return dand_l(d, a, 1)
        d = _lat(a.r, b)
        if d is not None:
            return dand_l(d, a, 2)
    if isinstance(b, sx.LOr):
        d = _lat(a, b.l)
        if d is not None:
            return dor_r(d, b, 1)
        d = _lat(a, b.r)
        if d is not None:
            return dor_r(d, b, 2)
    return None


def lat_le(a: sx.LFormula, b: sx.LFormula) -> Optional[pf.Derivation]:
    """Certify A => B when it holds in every bounded distributive lattice,
    treating non-lattice subformulas as opaque generators; None otherwise."""
    return _lat(a, b)


def lat_le_strict(a: sx.LFormula, b: sx.LFormula) -> pf.Derivation:
    d = _lat(a, b)
    if d is None:
        raise LemmaError(
            f"not a lattice entailment: {sx.render_lambek(a)} => {sx.render_lambek(b)}"
        )
    return d


# ---------------------------------------------------------------------------
# boolean entailment with certificates


def _is_generator(f: sx.LFormula) -> bool:
    return not isinstance(f, (sx.LAnd, sx.LOr, sx.LNot)) and f not in (sx.TOP, sx.BOT)


@lru_cache(maxsize=65536)
def _nnf(f: sx.LFormula) -> tuple[sx.LFormula, pf.Derivation, pf.Derivation]:
    """Negation-normal form with certificates both ways: (nf, f=>nf, nf=>f)."""
    if isinstance(f, sx.LAnd):
        nl, tl, fl = _nnf(f.l)
        nr, tr, fr = _nnf(f.r)
        return sx.LAnd(nl, nr), and_mono(tl, tr), and_mono(fl, fr)
    if isinstance(f, sx.LOr):
        nl, tl, fl = _nnf(f.l)
        nr, tr, fr = _nnf(f.r)
        return sx.LOr(nl, nr), or_mono(tl, tr), or_mono(fl, fr)
    if isinstance(f, sx.LNot):
        g = f.a
        if g == sx.TOP:
            return sx.BOT, dneg_top(), dbot_f(f)
        if g == sx.BOT:
            return sx.TOP, dtop(sx.SLeaf(f)), dtop_negbot()
        if isinstance(g, sx.LNot):
            nf, to, frm = _nnf(g.a)
            return nf, le_trans(dnn_elim(g.a), to), le_trans(frm, dnn_intro(g.a))
        if isinstance(g, sx.LAnd):
            nf, to, frm = _nnf(sx.LOr(sx.LNot(g.l), sx.LNot(g.r)))
            return nf, le_trans(dm_and_fwd(g.l, g.r), to), le_trans(frm, dm_and_bwd(g.l, g.r))
        if isinstance(g, sx.LOr):
            nf, to, frm = _nnf(sx.LAnd(sx.LNot(g.l), sx.LNot(g.r)))
            return nf, le_trans(dm_or_fwd(g.l, g.r), to), le_trans(frm, dm_or_bwd(g.l, g.r))
        return f, did(f), did(f)
    return f, did(f), did(f)


def _bool_gens(f: sx.LFormula, acc: set) -> None:
    if isinstance(f, (sx.LAnd, sx.LOr)):
        _bool_gens(f.l, acc)
        _bool_gens(f.r, acc)
    elif isinstance(f, sx.LNot):
        _bool_gens(f.a, acc)
    elif f not in (sx.TOP, sx.BOT):
        acc.add(f)


def _bool_eval(f: sx.LFormula, mu: dict) -> bool:
    if isinstance(f, sx.LAnd):
        return _bool_eval(f.l, mu) and _bool_eval(f.r, mu)
    if isinstance(f, sx.LOr):
        return _bool_eval(f.l, mu) or _bool_eval(f.r, mu)
    if isinstance(f, sx.LNot):
        return not _bool_eval(f.a, mu)
    if f == sx.TOP:
        return True
    if f == sx.BOT:
        return False
    return mu[f]


@lru_cache(maxsize=65536)
def _blat(x: sx.LFormula, y: sx.LFormula) -> Optional[pf.Derivation]:
    d = _lat(x, y)
    if d is not None:
        return d
    if isinstance(x, sx.LOr):
        d1, d2 = _blat(x.l, y), _blat(x.r, y)
        if d1 is not None and d2 is not None:
            return dor_l(d1, d2, x)
        return None
    if isinstance(x, sx.LAnd) and _has_or(x):
        dh, fu, fv = _hoist(x)
        d1, d2 = _blat(fu, y), _blat(fv, y)
        if d1 is not None and d2 is not None:
            return le_trans(dh, dor_l(d1, d2, sx.LOr(fu, fv)))
        return None
    mems = members(x)
    memset = set(mems)
    for m in mems:
        if sx.LNot(m) in memset:
            clash = le_trans(
                lat_le_strict(x, sx.LAnd(m, sx.LNot(m))), dneg1(m), dbot_f(y)
            )
            return clash
    if isinstance(y, sx.LAnd):
        d1, d2 = _blat(x, y.l), _blat(x, y.r)
        if d1 is not None and d2 is not None:
            return dand_r(d1, d2)
        return None
    if isinstance(y, sx.LOr):
        d = _blat(x, y.l)
        if d is not None:
            return dor_r(d, y, 1)
        d = _blat(x, y.r)
        if d is not None:
            return dor_r(d, y, 2)
    gens: set = set()
    _bool_gens(y, gens)
    undecided = [
        g for g in sorted(gens, key=sx.sort_key) if g not in memset and sx.LNot(g) not in memset
    ]
    if not undecided:
        return None
    g = undecided[0]
    split = expand_by_cases(did(x), g)
    xg, xng = sx.LAnd(x, g), sx.LAnd(x, sx.LNot(g))
    d1, d2 = _blat(xg, y), _blat(xng, y)
    if d1 is not None and d2 is not None:
        return le_trans(split, dor_l(d1, d2, sx.LOr(xg, xng)))
    return None


def bool_le(x: sx.LFormula, y: sx.LFormula) -> Optional[pf.Derivation]:
    """Certify X => Y when it is a boolean-algebra entailment over opaque
    generators (negation classical, /\\ \\/ top bot as usual)."""
    gens: set = set()
    _bool_gens(x, gens)
    _bool_gens(y, gens)
    gens_t = sorted(gens, key=sx.sort_key)
    if len(gens_t) > 12:
        return None
    for bits in range(1 << len(gens_t)):
        mu = {g: bool(bits >> i & 1) for i, g in enumerate(gens_t)}
        if _bool_eval(x, mu) and not _bool_eval(y, mu):
            return None
    nx, tox, _ = _nnf(x)
    ny, _, fromy = _nnf(y)
    core = _blat(nx, ny)
    if core is None:
        return None
    return le_trans(tox, core, fromy)
