import itertools
import random

import pytest
from hypothesis import given, settings

from conftest import lambek_formulas, modal_formulas
from fnlkit import models as md
from fnlkit import sampling as smp
from fnlkit import syntax as sx
from fnlkit.errors import ModelError

p, q = sx.LAtom("p"), sx.LAtom("q")


def K(states, rel, val):
    return md.KripkeModel(tuple(states), frozenset(rel), {k: frozenset(v) for k, v in val.items()})


def T3(states, rel3, val, **kw):
    return md.TernaryModel(tuple(states), frozenset(rel3), {k: frozenset(v) for k, v in val.items()}, **kw)


# ---------------------------------------------------------------------------
# evaluation


def test_eval_modal_clauses():
    m = K(["w"], [], {"p": ["w"]})
    assert not md.eval_modal(m, "w", sx.MDia(sx.MAtom("p")))  # no successor
    assert not md.eval_modal(m, "w", sx.MBot())
    m2 = K(["w", "u"], [("w", "u")], {"p": ["u"]})
    assert md.eval_modal(m2, "w", sx.MDia(sx.MAtom("p")))
    assert md.eval_modal(m2, "w", sx.parse_modal("[](p \\/ ~p)"))
    assert not md.eval_modal(m2, "u", sx.parse_modal("p -> <>q"))
    with pytest.raises(ModelError):
        md.eval_modal(m2, "nope", sx.MBot())


def test_eval_lambek_product_and_slashes():
    j = T3(["a", "b", "c"], [("a", "b", "c")], {"p": ["b"], "q": ["c"]})
    assert md.eval_lambek(j, "a", sx.LProd(p, q))
    assert not md.eval_lambek(j, "b", sx.LProd(p, q))  # no triple headed at b
    j0 = T3(["a"], [], {})
    assert md.eval_lambek(j0, "a", sx.LUnder(p, q))  # vacuous universal
    # b \ q needs: for triples (v,w,a)... none end at a except through rel3
    assert md.eval_lambek(j, "c", sx.LUnder(p, sx.LProd(p, q)))


def test_eval_lambek_constants_and_unit():
    j = T3(["a"], [("a", "a", "a")], {"p": ["a"]})
    assert md.eval_lambek(j, "a", sx.TOP)
    assert not md.eval_lambek(j, "a", sx.BOT)
    with pytest.raises(ModelError):
        md.eval_lambek(j, "a", sx.ONE)
    ju = T3(["a", "e"], [("a", "e", "a"), ("a", "a", "e"), ("e", "e", "e")], {}, unit="e")
    assert md.eval_lambek(ju, "e", sx.ONE)
    assert not md.eval_lambek(ju, "a", sx.ONE)


def test_eval_fresh_atoms_use_rendered_names():
    f = sx.fresh_for(p)
    j = T3(["a"], [], {"p{p}": ["a"]})
    assert md.eval_lambek(j, "a", f)
    assert not md.eval_lambek(j, "a", sx.P_BOT)


def test_sequent_truth():
    j = T3(["a"], [], {"p": ["a"]})
    assert md.sequent_true(j, "a", sx.parse_sequent("p => p"))
    assert md.sequent_true(j, "a", sx.parse_sequent("=> top"))
    assert not md.sequent_true(j, "a", sx.parse_sequent("=> p /\\ ~p"))
    assert md.satisfies_assumptions(j, [])
    assert md.satisfies_assumptions(j, [sx.parse_sequent("p => top")])
    assert not md.satisfies_assumptions(j, [sx.parse_sequent("top => bot")])


def test_modal_operators_on_ternary_models():
    j = T3(["a", "b"], [], {"p": ["b"]}, dia=frozenset([("a", "b")]))
    assert md.eval_lambek(j, "a", sx.LDia(p))
    assert not md.eval_lambek(j, "b", sx.LDia(p))
    # box-down looks backwards along dia
    assert md.eval_lambek(j, "a", sx.LBoxDown(p))  # vacuous: nothing sees a
    assert not md.eval_lambek(j, "b", sx.LBoxDown(q))
    jfree = T3(["a"], [], {})
    with pytest.raises(ModelError):
        md.eval_lambek(jfree, "a", sx.LDia(p))


# ---------------------------------------------------------------------------
# invariants over sampled models


def _random_ternary(seed, **kw):
    rng = random.Random(seed)
    return smp.sample_ternary(rng, 4, ("p", "q"), **kw)


@settings(max_examples=40)
@given(lambek_formulas)
def test_negation_is_complementation(a):
    if any(isinstance(g, (sx.LOne, sx.LDia, sx.LBoxDown)) for g in sx.walk(a)):
        return
    j = _random_ternary(11)
    for u in j.states:
        assert md.eval_lambek(j, u, a) != md.eval_lambek(j, u, sx.LNot(a))


def test_distribution_semantically_exact():
    for seed in range(20):
        j = _random_ternary(seed)
        a, b, c = p, q, sx.LProd(p, q)
        lhs = sx.LAnd(a, sx.LOr(b, c))
        rhs = sx.LOr(sx.LAnd(a, b), sx.LAnd(a, c))
        for u in j.states:
            assert md.eval_lambek(j, u, lhs) == md.eval_lambek(j, u, rhs)


def test_residuation_on_samples():
    for seed in range(20):
        j = _random_ternary(seed)
        f = sx.LUnder(p, q)
        for u in j.states:
            if not md.eval_lambek(j, u, f):
                continue
            for (v, w, x) in j.rel3:
                if x == u and md.eval_lambek(j, w, p):
                    assert md.eval_lambek(j, v, q)


def test_unit_laws_on_unital_models():
    for seed in range(20):
        j = _random_ternary(seed, with_unit=True)
        for a in [p, q, sx.LAnd(p, q), sx.LProd(p, q), sx.LNot(p)]:
            for u in j.states:
                assert md.eval_lambek(j, u, sx.LProd(a, sx.ONE)) == md.eval_lambek(j, u, a)
                assert md.eval_lambek(j, u, sx.LProd(sx.ONE, a)) == md.eval_lambek(j, u, a)


# ---------------------------------------------------------------------------
# enumeration and sampling


def test_exhaustive_kripke_count():
    ms = list(smp.all_kripke(1, ("p",)))
    assert len(ms) == 4  # 2 relations x 2 valuations
    assert len({(m.rel, m.val["p"]) for m in ms}) == 4


def test_exhaustive_ternary_count():
    js = list(smp.all_ternary(2, ()))
    assert len(js) == 2 ** 8  # relation choices per valuation
    with pytest.raises(ModelError):
        next(smp.all_ternary(3, ()))


def test_streams_deterministic():
    a = list(itertools.islice(smp.ternary_stream(7, 4, ("p",)), 25))
    b = list(itertools.islice(smp.ternary_stream(7, 4, ("p",)), 25))
    assert [md.ternary_to_json(x) for x in a] == [md.ternary_to_json(x) for x in b]
    c = list(itertools.islice(smp.ternary_stream(8, 4, ("p",)), 25))
    assert [md.ternary_to_json(x) for x in a] != [md.ternary_to_json(x) for x in c]


def test_symmetric_and_unit_sampling():
    rng = random.Random(3)
    for _ in range(15):
        j = smp.sample_ternary(rng, 4, ("p",), symmetric=True)
        assert all((u, w, v) in j.rel3 for (u, v, w) in j.rel3)
        ju = smp.sample_ternary(rng, 3, ("p",), with_unit=True)
        assert ju.unit == "e"
        for u in ju.states:
            assert (u, "e", u) in ju.rel3 and (u, u, "e") in ju.rel3


# ---------------------------------------------------------------------------
# countermodels


def test_find_countermodel_hits():
    hit = smp.find_countermodel(sx.parse_sequent("=> p"))
    assert hit is not None
    j, u = hit
    assert not md.eval_lambek(j, u, p)


def test_find_countermodel_respects_assumptions():
    phi = (sx.parse_sequent("p => q"),)
    assert smp.find_countermodel(sx.parse_sequent("p => q"), phi) is None
    hit = smp.find_countermodel(sx.parse_sequent("q => p"), phi)
    assert hit is not None
    j, u = hit
    assert md.satisfies_assumptions(j, phi)
    assert md.eval_lambek(j, u, q) and not md.eval_lambek(j, u, p)


def test_find_countermodel_none_for_valid():
    budget = smp.SampleBudget(samples=250)
    assert smp.find_countermodel(sx.parse_sequent("=> p \\/ ~p"), (), budget) is None
    assert smp.find_countermodel(sx.parse_sequent("p /\\ (q \\/ p) => p"), (), budget) is None


def test_find_countermodel_modal():
    hit = smp.find_countermodel(sx.parse_modal("[]p -> p"))
    assert hit is not None
    m, w = hit
    assert not md.eval_modal(m, w, sx.parse_modal("[]p -> p"))
    assert smp.find_countermodel(sx.parse_modal("p -> p")) is None


# ---------------------------------------------------------------------------
# json and validation


def test_model_json_roundtrip():
    j = _random_ternary(5, with_unit=True)
    j2 = md.ternary_from_json(md.ternary_to_json(j))
    assert j2.states == j.states and j2.rel3 == j.rel3 and j2.unit == j.unit
    m = K(["w", "u"], [("w", "u")], {"p": ["u"]})
    assert md.kripke_from_json(md.kripke_to_json(m)) == m
    loaded = md.model_from_json(md.kripke_to_json(m))
    assert isinstance(loaded, md.KripkeModel)


def test_model_validation():
    with pytest.raises(ModelError):
        K([], [], {})
    with pytest.raises(ModelError):
        K(["w"], [("w", "zzz")], {})
    with pytest.raises(ModelError):
        T3(["a"], [], {"p": ["b"]})
    with pytest.raises(ModelError):
        T3(["a", "e"], [("a", "e", "a")], {}, unit="e")  # triples missing
    with pytest.raises(ModelError):
        md.ternary_from_json({"states": ["a"], "rel": [["a", "a"]], "val": {}})


@settings(max_examples=25)
@given(modal_formulas)
def test_modal_eval_total_on_samples(f):
    m = smp.sample_kripke(random.Random(1), 3, ("p", "q", "r", "s_1"))
    for w in m.states:
        assert md.eval_modal(m, w, f) in (True, False)
