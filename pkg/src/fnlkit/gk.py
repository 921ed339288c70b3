"""Proof-producing sequent prover for the modal logic K, with a certified
translation of its proofs into the negation system's sequent calculus.

Sequents here are pairs of formula tuples (L, R) read as "the conjunction
of L entails the disjunction of R".  Both sides are kept deduplicated and
sorted, so search is deterministic and memoizable.  A proof translates,
rule by rule, into a derivation of  /\\L-image => \\/R-image  where
diamonds become left products with the designated marker atom; all the
regrouping between steps is discharged by the certified lattice and
boolean entailment engines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import lemmas as lm
from . import proofs as pf
from . import syntax as sx
from .errors import LemmaError
from .transform import TranslationContext, dagger

Side = tuple[sx.ModalFormula, ...]


def _mkey(f: sx.ModalFormula):
    return (sx.msize(f), sx.render_modal(f))


def canon(fs) -> Side:
    return tuple(sorted(set(fs), key=_mkey))


@dataclass(frozen=True, eq=False)
class GKProof:
    left: Side
    right: Side
    rule: str
    premises: tuple["GKProof", ...] = ()
    principal: Optional[sx.ModalFormula] = None


def _without(side: Side, f: sx.ModalFormula) -> tuple[sx.ModalFormula, ...]:
    return tuple(g for g in side if g != f)


def _is_passive(f: sx.ModalFormula) -> bool:
    return isinstance(f, (sx.MAtom, sx.MDia))


class KProver:
    def __init__(self) -> None:
        self._memo: dict = {}

    def prove(self, left, right) -> Optional[GKProof]:
        return self._prove(canon(left), canon(right))

    def prove_formula(self, a: sx.ModalFormula) -> Optional[GKProof]:
        return self._prove((), (a,))

    def _prove(self, left: Side, right: Side) -> Optional[GKProof]:
        key = (left, right)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = None  # sizes strictly decrease; this only guards reentry
        out = self._step(left, right)
        self._memo[key] = out
        return out

    def _step(self, left: Side, right: Side) -> Optional[GKProof]:
        for f in left:
            if f in right:
                return GKProof(left, right, "ax", (), f)
        if sx.MBot() in left:
            return GKProof(left, right, "botl", (), sx.MBot())
        for f in left:
            if _is_passive(f):
                continue
            rest = _without(left, f)
            if isinstance(f, sx.MAnd):
                p = self._prove(canon(rest + (f.l, f.r)), right)
                return GKProof(left, right, "andl", (p,), f) if p else None
            if isinstance(f, sx.MOr):
                p1 = self._prove(canon(rest + (f.l,)), right)
                p2 = self._prove(canon(rest + (f.r,)), right) if p1 else None
                return GKProof(left, right, "orl", (p1, p2), f) if p1 and p2 else None
            if isinstance(f, sx.MNot):
                p = self._prove(canon(rest), canon(right + (f.a,)))
                return GKProof(left, right, "negl", (p,), f) if p else None
            if isinstance(f, sx.MImp):
                p1 = self._prove(canon(rest), canon(right + (f.l,)))
                p2 = self._prove(canon(rest + (f.r,)), right) if p1 else None
                return GKProof(left, right, "impl", (p1, p2), f) if p1 and p2 else None
            raise AssertionError(f"unhandled connective {f!r}")
        for f in right:
            if _is_passive(f) or f == sx.MBot():
                continue
            rest = _without(right, f)
            if isinstance(f, sx.MAnd):
                p1 = self._prove(left, canon(rest + (f.l,)))
                p2 = self._prove(left, canon(rest + (f.r,))) if p1 else None
                return GKProof(left, right, "andr", (p1, p2), f) if p1 and p2 else None
            if isinstance(f, sx.MOr):
                p = self._prove(left, canon(rest + (f.l, f.r)))
                return GKProof(left, right, "orr", (p,), f) if p else None
            if isinstance(f, sx.MNot):
                p = self._prove(canon(left + (f.a,)), canon(rest))
                return GKProof(left, right, "negr", (p,), f) if p else None
            if isinstance(f, sx.MImp):
                p = self._prove(canon(left + (f.l,)), canon(rest + (f.r,)))
                return GKProof(left, right, "impr", (p,), f) if p else None
        if sx.MBot() in right:
            p = self._prove(left, _without(right, sx.MBot()))
            return GKProof(left, right, "botr", (p,), sx.MBot()) if p else None
        witnesses = canon(g.a for g in right if isinstance(g, sx.MDia))
        for f in left:
            if isinstance(f, sx.MDia):
                p = self._prove((canon((f.a,))), witnesses)
                if p:
                    return GKProof(left, right, "k", (p,), f)
        return None


# ---------------------------------------------------------------------------
# certified translation


def _conj(side: Side, ctx: TranslationContext) -> sx.LFormula:
    imgs = [dagger(f, ctx) for f in side]
    if not imgs:
        return sx.TOP
    out = imgs[-1]
    for g in reversed(imgs[:-1]):
        out = sx.LAnd(g, out)
    return out


def _disj(side: Side, ctx: TranslationContext) -> sx.LFormula:
    imgs = [dagger(f, ctx) for f in side]
    if not imgs:
        return sx.BOT
    out = imgs[-1]
    for g in reversed(imgs[:-1]):
        out = sx.LOr(g, out)
    return out


def _glue(a: sx.LFormula, b: sx.LFormula) -> pf.Derivation:
    d = lm.lat_le(a, b)
    if d is None:
        d = lm.bool_le(a, b)
    if d is None:
        raise LemmaError(
            f"translation glue failed: {sx.render_lambek(a)} => {sx.render_lambek(b)}"
        )
    return d


def _k_core(m: sx.LFormula, a_img: pf.Derivation, witnesses: list[sx.LFormula]) -> pf.Derivation:
    """From A => \\/B_j conclude m * A => \\/(m * B_j) (bot if no witnesses)."""
    if not witnesses:
        target = sx.BOT
        spine = lm.dbot(sx.SNode(sx.SLeaf(m), sx.SLeaf(sx.BOT)), (1,), target)
    else:
        prods = [sx.LProd(m, w) for w in witnesses]
        target = prods[-1]
        for g in reversed(prods[:-1]):
            target = sx.LOr(g, target)

        def eliminate(f: sx.LFormula, ws: list[sx.LFormula]) -> pf.Derivation:
            # builds  m o f  =>  target  by cases along the disjunction
            # spine of f; the split follows the witness list because a
            # witness may itself be a disjunction that must stay whole
            if len(ws) == 1:
                return lm.or_inject(lm.dprod_r(lm.did(m), lm.did(ws[0])), target)
            d1 = eliminate(f.l, ws[:1])
            d2 = eliminate(f.r, ws[1:])
            return lm.dor_l(d1, d2, f, path=(1,))

        disj_b = a_img.seq.suc
        spine = eliminate(disj_b, witnesses)
    return lm.dprod_l(lm.dcut(a_img, spine, (1,)))


def to_derivation(proof: GKProof, ctx: TranslationContext) -> pf.Derivation:
    """A derivation of  conj(L)-image => disj(R)-image  in the negation
    system, mirroring the K proof step by step."""
    c = _conj(proof.left, ctx)
    d = _disj(proof.right, ctx)
    r = proof.rule
    if r in ("ax", "botl"):
        return _glue(c, d)
    if r == "botr":
        sub = to_derivation(proof.premises[0], ctx)
        return lm.le_trans(sub, _glue(sub.seq.suc, d))
    if r in ("andl", "orr"):
        sub = to_derivation(proof.premises[0], ctx)
        return lm.le_trans(_glue(c, _conj(proof.premises[0].left, ctx)), sub, _glue(sub.seq.suc, d))
    if r == "andr":
        d1 = to_derivation(proof.premises[0], ctx)
        d2 = to_derivation(proof.premises[1], ctx)
        both = lm.dand_r(d1, d2)
        return lm.le_trans(both, _glue(both.seq.suc, d))
    if r in ("orl", "impl"):
        g1 = (
            dagger(proof.principal.l, ctx)
            if r == "orl"
            else sx.LNot(dagger(proof.principal.l, ctx))
        )
        g2 = dagger(proof.principal.r, ctx)
        rest = _conj(canon(_without(proof.left, proof.principal)), ctx)
        case1, case2 = sx.LAnd(rest, g1), sx.LAnd(rest, g2)
        split = _glue(c, sx.LOr(case1, case2))
        if r == "orl":
            sub1 = to_derivation(proof.premises[0], ctx)
            b1 = lm.le_trans(_glue(case1, _conj(proof.premises[0].left, ctx)), sub1,
                             _glue(sub1.seq.suc, d))
        else:
            sub1 = to_derivation(proof.premises[0], ctx)
            mono = lm.and_mono(
                lm.le_trans(_glue(rest, _conj(proof.premises[0].left, ctx)), sub1), lm.did(g1)
            )
            b1 = lm.le_trans(mono, _glue(mono.seq.suc, d))
        sub2 = to_derivation(proof.premises[1], ctx)
        b2 = lm.le_trans(_glue(case2, _conj(proof.premises[1].left, ctx)), sub2,
                         _glue(sub2.seq.suc, d))
        return lm.le_trans(split, lm.dor_l(b1, b2, sx.LOr(case1, case2)))
    if r == "negl":
        g = sx.LNot(dagger(proof.principal.a, ctx))
        sub = to_derivation(proof.premises[0], ctx)
        prem_c = _conj(proof.premises[0].left, ctx)
        mono = lm.and_mono(sub, lm.did(g))
        start = _glue(c, sx.LAnd(prem_c, g))
        return lm.le_trans(start, mono, _glue(mono.seq.suc, d))
    if r in ("negr", "impr"):
        x = proof.principal.a if r == "negr" else proof.principal.l
        gx = dagger(x, ctx)
        split = lm.expand_by_cases(lm.did(c), gx)
        sub = to_derivation(proof.premises[0], ctx)
        left = lm.le_trans(
            _glue(sx.LAnd(c, gx), _conj(proof.premises[0].left, ctx)), sub,
            _glue(sub.seq.suc, d),
        )
        right = lm.le_trans(_glue(sx.LAnd(c, sx.LNot(gx)), sx.LNot(gx)),
                            _glue(sx.LNot(gx), d))
        combined = lm.dor_l(left, right, sx.LOr(sx.LAnd(c, gx), sx.LAnd(c, sx.LNot(gx))))
        return lm.le_trans(split, combined)
    if r == "k":
        m = sx.LAtom(ctx.m_letter)
        sub = to_derivation(proof.premises[0], ctx)
        witnesses = [dagger(b, ctx) for b in proof.premises[0].right]
        core = _k_core(m, sub, witnesses)
        pick = _glue(c, sx.LProd(m, dagger(proof.principal.a, ctx)))
        return lm.le_trans(pick, core, _glue(core.seq.suc, d))
    raise AssertionError(f"unknown rule {r}")


def prove_dagger_goal(a: sx.ModalFormula, ctx: TranslationContext) -> Optional[pf.Derivation]:
    """A derivation of  => dagger(a)  when a is K-provable, else None."""
    proof = KProver().prove_formula(a)
    if proof is None:
        return None
    d = to_derivation(proof, ctx)
    return lm.dcut(lm.dtop(None), d, ())


def prove_dagger_top(b: sx.ModalFormula, ctx: TranslationContext) -> Optional[pf.Derivation]:
    """A derivation of  top => dagger(b)  when b is K-provable, else None.
    (The raw translation of an empty left side already starts from top.)"""
    proof = KProver().prove_formula(b)
    if proof is None:
        return None
    return to_derivation(proof, ctx)


def prove_dagger_sequent(
    a: sx.ModalFormula, b: sx.ModalFormula, ctx: TranslationContext
) -> Optional[pf.Derivation]:
    """A derivation of  dagger(a) => dagger(b)  when a entails b in K."""
    proof = KProver().prove((a,), (b,))
    if proof is None:
        return None
    d = to_derivation(proof, ctx)
    start = lm.lat_le_strict(dagger(a, ctx), _conj(proof.left, ctx))
    end = lm.lat_le_strict(_disj(proof.right, ctx), dagger(b, ctx))
    return lm.le_trans(start, d, end)
