"""Batch command-line front end.

One process per command, no state between runs.  JSON goes to standard
output by default; ``--format text`` renders derivations and models for
reading.  Exit codes: 0 = the command completed (whatever the verdict
says), 1 = usage or input error, 2 = the command ended in an Unknown
verdict (proof search exhausted, or no countermodel found).
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from dataclasses import replace
from typing import Optional

from . import checker as ck
from . import ktableau as kt
from . import models as md
from . import proofs as pf
from . import prover as pv
from . import sampling
from . import syntax as sx
from . import transform as tr
from .errors import FnlError, ModelError, ParseError
from .systems import get_system


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the exit-code protocol reserves 2
    for Unknown verdicts, so usage errors are remapped to 1."""

    def error(self, message):
        self.print_usage(_sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# shared plumbing


def _load_assumptions(path: Optional[str]) -> frozenset[sx.Sequent]:
    """One sequent per line; blank lines and ``#`` comments are skipped."""
    if path is None:
        return frozenset()
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    out = set()
    for no, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            out.add(sx.parse_sequent(text))
        except ParseError as e:
            raise ParseError(f"{path}:{no}: {e}") from None
    return frozenset(out)


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except ValueError as e:
            raise ModelError(f"{path}: not valid JSON: {e}") from None


def _budget(args) -> pv.SearchBudget:
    b = pv.parse_budget(args.budget) if args.budget else pv.SearchBudget()
    if getattr(args, "seed", None) is not None:
        b = replace(b, seed=args.seed)
    return b


def _model_to_json(m) -> dict:
    if isinstance(m, md.KripkeModel):
        return md.kripke_to_json(m)
    return md.ternary_to_json(m)


def _model_text(m) -> str:
    lines = [f"states: {' '.join(m.states)}"]
    if isinstance(m, md.KripkeModel):
        pairs = ", ".join(f"{a}->{b}" for a, b in sorted(m.rel))
        lines.append(f"rel: {pairs or '(none)'}")
    else:
        triples = ", ".join(f"({a},{b},{c})" for a, b, c in sorted(m.rel3))
        lines.append(f"rel: {triples or '(none)'}")
        if m.unit is not None:
            lines.append(f"unit: {m.unit}")
        if m.dia is not None:
            pairs = ", ".join(f"{a}->{b}" for a, b in sorted(m.dia))
            lines.append(f"dia: {pairs or '(none)'}")
    for k in sorted(m.val):
        lines.append(f"val {k}: {{{', '.join(sorted(m.val[k]))}}}")
    return "\n".join(lines)


def _phi_lines(phi) -> list[str]:
    return sorted(sx.render_sequent(s) for s in phi)


def _result_text(r: pv.ProofResult) -> str:
    lines = [f"verdict: {r.verdict}"]
    if r.strategy:
        lines.append(f"strategy: {r.strategy}")
    if r.derivation is not None:
        lines.append(pf.pretty(r.derivation))
    if r.model is not None:
        lines.append(f"countermodel falsifying the goal at {r.state}:")
        lines.append(_model_text(r.model))
    if r.report:
        lines.append(r.report)
    return "\n".join(lines)


def _recheck(r: pv.ProofResult, system, phi, goal: sx.Sequent) -> str:
    """Round-trip the verdict's evidence through the serializers and the
    independent checkers; any failure is a hard error."""
    if r.verdict == pv.PROVED:
        again = pf.from_json(json.loads(json.dumps(pf.to_json(r.derivation))))
        if again.seq != goal or not ck.check_derivation(system, phi, again):
            raise FnlError("recheck failed: reloaded derivation rejected")
        return "derivation reloaded and accepted"
    if r.verdict == pv.REFUTED:
        again = md.ternary_from_json(json.loads(json.dumps(md.ternary_to_json(r.model))))
        if not md.satisfies_assumptions(again, phi):
            raise FnlError("recheck failed: countermodel loses the assumptions")
        if md.sequent_true(again, r.state, goal):
            raise FnlError("recheck failed: countermodel no longer falsifies")
        return "countermodel reloaded and still falsifies"
    return "nothing to recheck"


# ---------------------------------------------------------------------------
# commands; each returns (json payload, text rendering, exit code)


_STAGES = ("dagger", "ddagger", "section")


def _translate_stage(a: sx.ModalFormula, stage: str):
    ctx = tr.TranslationContext()
    base = sx.Sequent(None, tr.dagger(a, ctx))
    if stage == "dagger":
        return "bfnl-star", base, frozenset()
    goal, phi = tr.ddagger_problem(base, ())
    if stage == "ddagger":
        return "bdfnl-star", goal, phi
    goal, phi = tr.section_embed(goal, phi)
    return "dfnl-star", goal, phi


def cmd_translate(args):
    a = sx.parse_modal(args.formula)
    system, goal, phi = _translate_stage(a, args.stage)
    payload = {
        "source": args.source,
        "formula": sx.render_modal(a),
        "stage": args.stage,
        "system": system,
        "goal": sx.render_sequent(goal),
        "assumptions": _phi_lines(phi),
    }
    text = [f"system: {system}", f"goal: {sx.render_sequent(goal)}"]
    text.append(f"assumptions ({len(phi)}):")
    text += [f"  {line}" for line in _phi_lines(phi)]
    return payload, "\n".join(text), 0


def cmd_prove(args):
    system = get_system(args.system)
    goal = sx.parse_sequent(args.goal)
    phi = _load_assumptions(args.assumptions)
    r = pv.derive(system, phi, goal, _budget(args))
    payload = {"system": args.system, "goal": sx.render_sequent(goal)}
    payload.update(pv.result_to_json(r))
    text = _result_text(r)
    if args.recheck:
        note = _recheck(r, system, phi, goal)
        payload["recheck"] = note
        text += f"\nrecheck: {note}"
    return payload, text, 2 if r.verdict == pv.UNKNOWN else 0


def cmd_modelcheck(args):
    loaders = {
        "kripke": md.kripke_from_json,
        "ternary": md.ternary_from_json,
        "auto": md.model_from_json,
    }
    m = loaders[args.kind](_load_json(args.model))
    if args.state is not None and args.state not in m.states:
        raise ModelError(f"state {args.state!r} not in the model")
    payload: dict = {"input": args.text}
    if isinstance(m, md.KripkeModel):
        payload["model"] = "kripke"
        if "=>" in args.text:
            raise ParseError("sequents need a ternary model, not a Kripke one")
        f = sx.parse_modal(args.text)
        state = args.state or m.states[0]
        value = md.eval_modal(m, state, f)
        payload.update(state=state, value=value)
    else:
        payload["model"] = "ternary"
        if "=>" in args.text:
            s = sx.parse_sequent(args.text)
            if args.state is None:
                value = md.sequent_true_everywhere(m, s)
                payload["holds_everywhere"] = value
            else:
                value = md.sequent_true(m, args.state, s)
                payload.update(state=args.state, value=value)
        else:
            f = sx.parse_lambek(args.text)
            state = args.state or m.states[0]
            value = md.eval_lambek(m, state, f)
            payload.update(state=state, value=value)
    return payload, "true" if value else "false", 0


def cmd_countermodel(args):
    phi = _load_assumptions(args.assumptions)
    goal = sx.parse_modal(args.goal) if args.modal else sx.parse_sequent(args.goal)
    budget = sampling.SampleBudget(
        seed=args.seed or 0,
        max_states=args.max_states,
        samples=args.samples,
        symmetric=args.symmetric,
        with_unit=args.with_unit,
        with_dia=args.with_dia,
    )
    hit = sampling.find_countermodel(
        goal, tuple(sorted(phi, key=sx.render_sequent)), budget
    )
    if hit is None:
        payload = {"found": False, "report": f"no countermodel in {args.samples} samples"}
        return payload, "no countermodel found", 2
    m, state = hit
    payload = {"found": True, "state": state, "model": _model_to_json(m)}
    text = f"countermodel falsifying the goal at {state}:\n{_model_text(m)}"
    return payload, text, 0


def cmd_pipeline(args):
    a = sx.parse_modal(args.formula)
    system, goal, phi = tr.pipeline_k_to_dfnl(a)
    payload = {
        "formula": sx.render_modal(a),
        "system": system,
        "goal": sx.render_sequent(goal),
        "assumptions": _phi_lines(phi),
    }
    text = [f"system: {system}", f"goal: {sx.render_sequent(goal)}",
            f"assumptions: {len(phi)}"]
    code = 0
    if args.run_prover:
        r = pv.derive(get_system(system), phi, goal, _budget(args))
        payload.update(pv.result_to_json(r))
        text.append(_result_text(r))
        code = 2 if r.verdict == pv.UNKNOWN else 0
    return payload, "\n".join(text), code


def cmd_kdecide(args):
    a = sx.parse_modal(args.formula)
    v = kt.k_decide(a)
    if v.valid:
        payload = {"verdict": "valid", "trace": v.trace}
        return payload, f"valid\n{v.trace}", 0
    payload = {
        "verdict": "invalid",
        "root": v.root,
        "model": md.kripke_to_json(v.model),
    }
    text = f"invalid at {v.root}:\n{_model_text(v.model)}"
    return payload, text, 0


def cmd_buildmodel(args):
    m = md.kripke_from_json(_load_json(args.kripke))
    letter = args.letter or None
    j = tr.build_ternary_model(m, letter, exchange=args.variant == "exchange")
    if args.variant == "unit":
        j = tr.extend_with_unit(j, m, letter)
    return md.ternary_to_json(j), _model_text(j), 0


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> _Parser:
    top = _Parser(prog="fnlkit", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, helptext):
        p = sub.add_parser(name, help=helptext)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=("json", "text"), default="json",
                       help="output rendering (default json)")
        return p

    p = add("translate", cmd_translate, "map a modal formula down the reduction chain")
    p.add_argument("source", choices=("k",), help="source logic")
    p.add_argument("formula", help="modal formula in the concrete grammar")
    p.add_argument("--stage", choices=_STAGES, default="dagger",
                   help="dagger: negation goal; ddagger: letter-companion "
                        "problem; section: constant-free problem")

    p = add("prove", cmd_prove, "run the three-valued prover on a sequent")
    p.add_argument("goal", help="sequent in the concrete grammar")
    p.add_argument("--system", required=True, help="system name, e.g. bfnl-star")
    p.add_argument("--assumptions", help="file with one sequent per line")
    p.add_argument("--budget", help="depth:N,goals:N,cutsize:N,ms:N,seed:N,samples:N")
    p.add_argument("--seed", type=int, help="overrides the budget's seed")
    p.add_argument("--recheck", action="store_true",
                   help="round-trip the evidence through JSON and re-verify")

    p = add("modelcheck", cmd_modelcheck, "evaluate a formula or sequent in a model file")
    p.add_argument("model", help="model JSON file (binary or ternary)")
    p.add_argument("text", help="formula, or sequent containing '=>'")
    p.add_argument("--state", help="state to evaluate at (default: first state; "
                                   "omitting it checks sequents at every state)")
    p.add_argument("--kind", choices=("auto", "kripke", "ternary"), default="auto",
                   help="force the model reading (auto guesses from the "
                        "relation arity, which misreads edgeless binary models)")

    p = add("countermodel", cmd_countermodel, "sample models hunting for a falsifier")
    p.add_argument("goal", help="sequent (or modal formula with --modal)")
    p.add_argument("--modal", action="store_true", help="goal is a modal formula")
    p.add_argument("--assumptions", help="file with one sequent per line")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1500)
    p.add_argument("--max-states", type=int, default=4)
    p.add_argument("--symmetric", action="store_true", help="commutative frames only")
    p.add_argument("--with-unit", action="store_true", help="unital frames")
    p.add_argument("--with-dia", action="store_true", help="frames with a binary accessibility")
    p.set_defaults(budget=None)

    p = add("pipeline", cmd_pipeline, "full modal-to-constant-free reduction")
    p.add_argument("formula", help="modal formula in the concrete grammar")
    p.add_argument("--run-prover", action="store_true",
                   help="also run the prover on the reduced problem")
    p.add_argument("--budget", help="depth:N,goals:N,cutsize:N,ms:N,seed:N,samples:N")
    p.add_argument("--seed", type=int, help="overrides the budget's seed")

    p = add("kdecide", cmd_kdecide, "decide modal validity by tableau")
    p.add_argument("formula", help="modal formula in the concrete grammar")

    p = add("buildmodel", cmd_buildmodel, "turn a binary model file into a ternary one")
    p.add_argument("kripke", help="binary model JSON file")
    p.add_argument("--variant", choices=("plain", "exchange", "unit"), default="plain")
    p.add_argument("--letter", default="m",
                   help="designated letter valued everywhere ('' for none)")

    return top


def main(argv: Optional[list[str]] = None) -> int:
    _sys.setrecursionlimit(30000)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        payload, text, code = args.fn(args)
    except FnlError as e:
        print(f"error: {e}", file=_sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=_sys.stderr)
        return 1
    print(json.dumps(payload, indent=2) if args.format == "json" else text)
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
