"""System registry: which connectives, structure, and rules each variant
of the calculus admits."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import proofs as pf
from . import syntax as sx
from .errors import ValidationError

MODAL_AXIOMS = {
    "K": frozenset(),
    "T": frozenset({pf.AX_T}),
    "K4": frozenset({pf.AX_4}),
    "S4": frozenset({pf.AX_T, pf.AX_4}),
    "S5": frozenset({pf.AX_T, pf.AX_4, pf.AX_5}),
}


@dataclass(frozen=True)
class SystemSpec:
    name: str
    negation: bool
    bounded: bool
    exchange: bool
    unit: bool
    allow_empty_antecedent: bool
    modal: Optional[str] = None  # None or a key of MODAL_AXIOMS

    def __post_init__(self):
        if self.negation and not self.bounded:
            raise ValidationError("negation needs the bounds (its axioms mention them)")
        if self.modal is not None and self.modal not in MODAL_AXIOMS:
            raise ValidationError(f"unknown modal axiom set {self.modal!r}")


_BASE_RULES = frozenset(
    {
        pf.ID,
        pf.DIST,
        pf.UNDER_L,
        pf.UNDER_R,
        pf.OVER_L,
        pf.OVER_R,
        pf.PROD_L,
        pf.PROD_R,
        pf.CUT,
        pf.AND_L,
        pf.AND_R,
        pf.OR_L,
        pf.OR_R,
        pf.ASSUMPTION,
    }
)


def allowed_rules(sys: SystemSpec) -> frozenset[str]:
    rules = set(_BASE_RULES)
    if sys.bounded:
        rules |= {pf.BOT_AX, pf.TOP_AX}
    if sys.negation:
        rules |= {pf.NEG1, pf.NEG2}
    if sys.exchange:
        rules.add(pf.EXCH)
    if sys.unit:
        rules |= {pf.ONE_R, pf.ONE_L_LEFT, pf.ONE_L_RIGHT}
    if sys.modal is not None:
        rules |= {pf.DIA_L, pf.DIA_R, pf.BOXDOWN_L, pf.BOXDOWN_R}
        rules |= MODAL_AXIOMS[sys.modal]
    return frozenset(rules)


@lru_cache(maxsize=1 << 16)
def _formula_misfit(sys: SystemSpec, f: sx.LFormula) -> Optional[str]:
    # vocabulary checks run on every node of every derivation, over a
    # heavily repeating formula population, so the verdict is memoized
    for g in sx.walk(f):
        if isinstance(g, sx.LNot) and not sys.negation:
            return f"{sys.name} has no negation"
        if isinstance(g, (sx.LTop, sx.LBot)) and not sys.bounded:
            return f"{sys.name} has no bounds"
        if isinstance(g, sx.LOne) and not sys.unit:
            return f"{sys.name} has no unit"
        if isinstance(g, (sx.LDia, sx.LBoxDown)) and sys.modal is None:
            return f"{sys.name} has no modalities"
    return None


def validate_formula(sys: SystemSpec, f: sx.LFormula):
    msg = _formula_misfit(sys, f)
    if msg is not None:
        raise ValidationError(msg)


def validate_tree(sys: SystemSpec, t: sx.StructTree):
    for _, x in pf.positions(t):
        if isinstance(x, sx.SBracket) and sys.modal is None:
            raise ValidationError(f"{sys.name} has no bracket structure")
        if isinstance(x, sx.SLeaf):
            validate_formula(sys, x.f)


def validate_sequent(sys: SystemSpec, s: sx.Sequent):
    if s.ant is None:
        if not sys.allow_empty_antecedent:
            raise ValidationError(f"{sys.name} does not allow empty antecedents")
    else:
        validate_tree(sys, s.ant)
    validate_formula(sys, s.suc)


def sequent_validator(sys: SystemSpec):
    """Return a single-use validate_sequent that skips objects it has already
    accepted.  Derivations share tree and formula objects across nodes, so a
    bulk check can replace most vocabulary walks with id lookups; the memo is
    only sound while the caller keeps every checked object alive."""
    seen: set[int] = set()

    def check(s: sx.Sequent) -> None:
        if s.ant is None:
            if not sys.allow_empty_antecedent:
                raise ValidationError(f"{sys.name} does not allow empty antecedents")
        elif id(s.ant) not in seen:
            for _, x in pf.positions(s.ant):
                if isinstance(x, sx.SBracket) and sys.modal is None:
                    raise ValidationError(f"{sys.name} has no bracket structure")
                if isinstance(x, sx.SLeaf) and id(x.f) not in seen:
                    validate_formula(sys, x.f)
                    seen.add(id(x.f))
            seen.add(id(s.ant))
        if id(s.suc) not in seen:
            validate_formula(sys, s.suc)
            seen.add(id(s.suc))

    return check


def validate_assumptions(sys: SystemSpec, phi):
    for s in phi:
        if not sx.is_simple(s):
            raise ValidationError("assumptions must be simple sequents")
        validate_sequent(sys, s)


def _mk(name, negation, bounded, exchange, unit, empty, modal=None):
    return SystemSpec(name, negation, bounded, exchange, unit, empty, modal)


def _registry() -> dict[str, SystemSpec]:
    out = {}

    def add(s: SystemSpec):
        out[s.name] = s

    add(_mk("bfnl-star", True, True, False, False, True))
    add(_mk("bfnl-e-star", True, True, True, False, True))
    for i in MODAL_AXIOMS:
        low = i.lower()
        add(_mk(f"bfnl-star-{low}", True, True, False, False, True, i))
        add(_mk(f"bfnl-e-star-{low}", True, True, True, False, True, i))
        add(_mk(f"bfnl1-{low}", True, True, False, True, True, i))
        add(_mk(f"bfnl1-e-{low}", True, True, True, True, True, i))
    add(_mk("bdfnl-star", False, True, False, False, True))
    add(_mk("dfnl-star", False, False, False, False, True))
    add(_mk("dfnl", False, False, False, False, False))
    return out


SYSTEMS = _registry()


def get_system(name: str) -> SystemSpec:
    try:
        return SYSTEMS[name]
    except KeyError:
        known = ", ".join(sorted(SYSTEMS))
        raise ValidationError(f"unknown system {name!r}; known: {known}") from None
