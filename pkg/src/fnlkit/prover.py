"""Budgeted proof search: strategy chain, iterative-deepening backward
search with analytic cut, and gated semantic refutation.

The driver tries the closed-form strategies first, then deepening
depth-first search over the rule moves with cut formulas drawn from a
bounded closure of the problem's subformulas, and finally a countermodel
search on the fragments where the semantics is known to match the
calculus.  Proofs are re-validated by the independent checker before
they are returned; countermodels are re-evaluated on a fresh copy.
Unknown is an honest first-class outcome."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from . import checker as ck
from . import models as md
from . import proofs as pf
from . import rules
from . import sampling
from . import strategy as st
from . import syntax as sx
from .errors import LemmaError, ValidationError
from .systems import SystemSpec, validate_assumptions, validate_sequent

PROVED = "proved"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 14
    max_goals: int = 40000
    cut_size: int = 0  # closure size bound for cut candidates
    time_cap_ms: int = 15000
    seed: int = 0
    samples: int = 600  # countermodel attempts
    refute: bool = True
    cut_candidates: Optional[sx.ClosureSpec] = None  # overrides cut_size

    def __post_init__(self):
        if self.max_depth < 0 or self.max_goals <= 0 or self.time_cap_ms <= 0:
            raise ValidationError("budget limits must be positive")
        if self.cut_size < 0 or self.samples < 0:
            raise ValidationError("budget limits must be positive")


_BUDGET_KEYS = {
    "depth": "max_depth",
    "goals": "max_goals",
    "cutsize": "cut_size",
    "ms": "time_cap_ms",
    "seed": "seed",
    "samples": "samples",
}


def parse_budget(text: str) -> SearchBudget:
    """Budget string: comma-separated key:int pairs, e.g.
    "depth:30,goals:100000,cutsize:1,ms:30000"."""
    kw = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, val = part.partition(":")
        if key not in _BUDGET_KEYS:
            raise ValidationError(f"unknown budget key {key!r}; known: {sorted(_BUDGET_KEYS)}")
        try:
            kw[_BUDGET_KEYS[key]] = int(val)
        except ValueError:
            raise ValidationError(f"budget value for {key!r} must be an integer") from None
    return SearchBudget(**kw)


@dataclass(frozen=True)
class ProofResult:
    verdict: str  # proved | refuted | unknown
    derivation: Optional[pf.Derivation] = None
    model: Optional[md.TernaryModel] = None
    state: Optional[str] = None
    report: str = ""
    strategy: str = ""


def result_to_json(r: ProofResult) -> dict:
    out: dict = {"verdict": r.verdict}
    if r.derivation is not None:
        out["derivation"] = pf.to_json(r.derivation)
    if r.model is not None:
        out["model"] = md.ternary_to_json(r.model)
        out["state"] = r.state
    if r.report:
        out["report"] = r.report
    if r.strategy:
        out["strategy"] = r.strategy
    return out


# ---------------------------------------------------------------------------
# search


class _Exhausted(Exception):
    pass


def _cut_pool(sys: SystemSpec, phi, goal: sx.Sequent, budget: SearchBudget):
    spec = budget.cut_candidates
    if spec is None:
        base = set(sx.subformulas_of_problem(goal, phi))
        if sys.bounded:
            base |= {sx.TOP, sx.BOT}
        mode = "and_or_not" if sys.negation else "and_or"
        spec = sx.ClosureSpec(frozenset(base), mode, budget.cut_size)
    pool = set(spec.base) | set(sx.enumerate_closure(spec))
    return tuple(sorted(pool, key=sx.sort_key))


def _search(sys: SystemSpec, phi, goal: sx.Sequent, budget: SearchBudget,
            deadline: float) -> Optional[pf.Derivation]:
    pool = _cut_pool(sys, phi, goal, budget)
    proved: dict[sx.Sequent, pf.Derivation] = {}
    failed: dict[sx.Sequent, int] = {}
    goals = 0

    def dfs(g: sx.Sequent, depth: int, path: frozenset):
        # returns (derivation or None, clean); a failure is clean when no
        # branch was pruned by the cycle check, so it may be memoized
        nonlocal goals
        if g in proved:
            return proved[g], True
        if g in path:
            return None, False
        if failed.get(g, -1) >= depth:
            return None, True
        goals += 1
        if goals > budget.max_goals:
            raise _Exhausted
        if goals % 256 == 0 and time.monotonic() > deadline:
            raise _Exhausted
        moves = rules.rule_instances(sys, g, phi, pool)
        path2 = path | {g}
        clean = True
        for rule, prems, inst in moves:
            if prems and depth == 0:
                clean = False  # deeper iterations will retry this move
                continue
            ds = []
            ok = True
            for p in prems:
                d, cl = dfs(p, depth - 1, path2)
                if d is None:
                    ok = False
                    clean = clean and cl
                    break
                ds.append(d)
            if ok:
                out = pf.node(g, rule, ds, inst)
                proved[g] = out
                return out, True
        if clean and failed.get(g, -1) < depth:
            failed[g] = depth
        return None, clean

    for depth in range(budget.max_depth + 1):
        try:
            d, _ = dfs(goal, depth, frozenset())
        except _Exhausted:
            return None
        if d is not None:
            return d
    return None


# ---------------------------------------------------------------------------
# refutation gate


def _refutation_ok(sys: SystemSpec, phi, goal: sx.Sequent) -> bool:
    """Countermodels refute only on fragments where truth in the sampled
    model class is implied by derivability: no modal vocabulary (plain
    models refute the modal systems only through their conservative
    fragment), and no residuals when the antecedent is empty (the empty
    residual introductions outrun the everywhere-true reading)."""
    subs = sx.subformulas_of_problem(goal, phi)
    if any(isinstance(f, (sx.LDia, sx.LBoxDown)) for f in subs):
        return False
    if goal.ant is not None and any(
        isinstance(x, sx.SBracket) for _, x in pf.positions(goal.ant)
    ):
        return False
    if goal.ant is None and any(isinstance(f, (sx.LUnder, sx.LOver)) for f in subs):
        return False
    return True


# ---------------------------------------------------------------------------
# driver


def derive(sys: SystemSpec, phi: Iterable[sx.Sequent], goal: sx.Sequent,
           budget: Optional[SearchBudget] = None) -> ProofResult:
    """Three-valued derivability: Proved with a checked derivation,
    Refuted with a re-verified countermodel, or Unknown."""
    budget = budget or SearchBudget()
    phi = frozenset(phi)
    validate_sequent(sys, goal)
    validate_assumptions(sys, phi)
    deadline = time.monotonic() + budget.time_cap_ms / 1000.0

    def recurse(sys2, phi2, goal2):
        left = max(1, int((deadline - time.monotonic()) * 1000))
        sub = derive(sys2, phi2, goal2, replace(budget, refute=False, time_cap_ms=left))
        return sub.derivation if sub.verdict == PROVED else None

    for name, fn in st.STRATEGIES:
        try:
            d = fn(sys, phi, goal, recurse)
        except LemmaError:
            d = None
        if d is not None and d.seq == goal and ck.check_derivation(sys, phi, d):
            return ProofResult(PROVED, derivation=d, strategy=name)

    d = _search(sys, phi, goal, budget, deadline)
    if d is not None and ck.check_derivation(sys, phi, d):
        return ProofResult(PROVED, derivation=d, strategy="search")

    if budget.refute and _refutation_ok(sys, phi, goal):
        sb = sampling.SampleBudget(
            seed=budget.seed,
            samples=budget.samples,
            symmetric=sys.exchange,
            with_unit=sys.unit,
        )
        hit = sampling.find_countermodel(goal, tuple(sorted(phi, key=sx.render_sequent)), sb)
        if hit is not None:
            j, u = hit
            return ProofResult(REFUTED, model=j, state=u)

    report = (
        f"no proof within depth {budget.max_depth}, {budget.max_goals} goals, "
        f"{budget.time_cap_ms}ms; no countermodel"
        + ("" if budget.refute else " (refutation off)")
    )
    return ProofResult(UNKNOWN, report=report)


# ---------------------------------------------------------------------------
# regression corpus


@dataclass(frozen=True)
class Fact:
    """One corpus entry: derive the premises first, then the conclusion."""

    label: str
    conclusion: sx.Sequent
    premises: tuple[sx.Sequent, ...] = ()


def facts_corpus() -> tuple[Fact, ...]:
    s = sx.parse_sequent
    cond = ("p /\\ q => p \\/ q",)
    pair8 = ("p => ~~p", "~~p => p")
    return (
        Fact("bounds-swap-a", s("~bot => top")),
        Fact("bounds-swap-b", s("top => ~bot")),
        Fact("bounds-swap-c", s("~top => bot")),
        Fact("bounds-swap-d", s("bot => ~top")),
        Fact("double-negation-a", s("p => ~~p")),
        Fact("double-negation-b", s("~~p => p")),
        Fact("de-morgan-and-a", s("~(p /\\ q) => ~p \\/ ~q")),
        Fact("de-morgan-and-b", s("~p \\/ ~q => ~(p /\\ q)")),
        Fact("de-morgan-or-a", s("~(p \\/ q) => ~p /\\ ~q")),
        Fact("de-morgan-or-b", s("~p /\\ ~q => ~(p \\/ q)")),
        Fact("distribute-and-a", s("p /\\ (q \\/ r) => (p /\\ q) \\/ (p /\\ r)")),
        Fact("distribute-and-b", s("(p /\\ q) \\/ (p /\\ r) => p /\\ (q \\/ r)")),
        Fact("distribute-or-a", s("p \\/ (q /\\ r) => (p \\/ q) /\\ (p \\/ r)")),
        Fact("distribute-or-b", s("(p \\/ q) /\\ (p \\/ r) => p \\/ (q /\\ r)")),
        Fact("distribute-prod-a", s("m * (p \\/ q) => (m * p) \\/ (m * q)")),
        Fact("distribute-prod-b", s("(m * p) \\/ (m * q) => m * (p \\/ q)")),
        Fact(
            "negation-antitone",
            s("~(p \\/ q) => ~(p /\\ q)"),
            tuple(s(t) for t in cond),
        ),
        Fact(
            "entails-as-theorem",
            s("=> ~(p /\\ q) \\/ (p \\/ q)"),
            tuple(s(t) for t in cond),
        ),
        Fact(
            "congruence-a",
            s("~(p * (p \\ q)) => ~(~~p * (~~p \\ q))"),
            tuple(s(t) for t in pair8),
        ),
        Fact(
            "congruence-b",
            s("~(~~p * (~~p \\ q)) => ~(p * (p \\ q))"),
            tuple(s(t) for t in pair8),
        ),
    )
