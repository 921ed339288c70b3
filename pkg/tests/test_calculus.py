"""Rule application, the independent checker, and the certified lemma
builders."""

import pytest
from hypothesis import given, settings

from conftest import lambek_formulas
from fnlkit import checker as ck
from fnlkit import lemmas as lm
from fnlkit import proofs as pf
from fnlkit import rules
from fnlkit import syntax as sx
from fnlkit.errors import LemmaError, ValidationError
from fnlkit.systems import get_system

BF = get_system("bfnl-star")
BFT = get_system("bfnl-star-t")
BFE = get_system("bfnl-e-star")
BD = get_system("bdfnl-star")
DF = get_system("dfnl-star")
B1 = get_system("bfnl1-k")

p, q, r = sx.LAtom("p"), sx.LAtom("q"), sx.LAtom("r")


def seq(text):
    return sx.parse_sequent(text)


def f(text):
    return sx.parse_lambek(text)


def checked(sys, d, phi=()):
    trail = []
    ok = ck.check_derivation(sys, phi, d, trail)
    assert ok, "\n".join(trail)
    return d


# ---------------------------------------------------------------------------
# backward rule application


def test_rule_instances_id_and_prod_l():
    goal = seq("p * q => p * q")
    moves = rules.rule_instances(BF, goal, frozenset())
    names = [m[0] for m in moves]
    assert pf.ID in names  # matched directly, zero premises
    idx = names.index(pf.ID)
    assert moves[idx][1] == []
    assert (pf.PROD_L, [seq("(p o q) => p * q")]) in [(n, pr) for n, pr, _ in moves]


def test_rule_instances_bot_axiom_under_any_context():
    goal = seq("(q o bot) o p => r")
    moves = rules.rule_instances(BF, goal, frozenset())
    bots = [m for m in moves if m[0] == pf.BOT_AX]
    assert bots and bots[0][1] == []


def test_rule_instances_t_axiom():
    goal = seq("p => <>p")
    names = [m[0] for m in rules.rule_instances(BFT, goal, frozenset())]
    assert pf.AX_T in names
    # the same goal in plain bfnl-star-k has no T axiom
    names_k = [m[0] for m in rules.rule_instances(get_system("bfnl-star-k"), goal, frozenset())]
    assert pf.AX_T not in names_k


def test_rule_instances_assumption_and_cut_pool():
    member = seq("p => q")
    goal = seq("p => q")
    moves = rules.rule_instances(BF, goal, frozenset([member]), cut_pool=(r,))
    names = [m[0] for m in moves]
    assert pf.ASSUMPTION in names
    cuts = [m for m in moves if m[0] == pf.CUT]
    # analytic cut instantiates only over the pool
    assert all(m[2].side == r for m in cuts)
    assert any(m[1] == [seq("p => r"), seq("r => q")] for m in cuts)


def test_rule_instances_exchange_only_with_flag():
    goal = seq("(p o q) => r")
    swapped = [m for m in rules.rule_instances(BFE, goal, frozenset()) if m[0] == pf.EXCH]
    assert any(m[1] == [seq("(q o p) => r")] for m in swapped)
    assert not [m for m in rules.rule_instances(BF, goal, frozenset()) if m[0] == pf.EXCH]


def test_premises_stay_well_formed():
    # every premise of every move must be admitted by the same system
    goals = ["p * (q \\ p) => p \\/ ~q", "(p o < q >) => <>q", "=> ~p \\/ p"]
    for sysname, text in [("bfnl-star-k", goals[1]), ("bfnl-star", goals[0]), ("bfnl-star", goals[2])]:
        sys = get_system(sysname)
        goal = seq(text)
        for _, prems, _ in rules.rule_instances(sys, goal, frozenset(), cut_pool=(p,)):
            for g in prems:
                from fnlkit.systems import validate_sequent

                validate_sequent(sys, g)


# ---------------------------------------------------------------------------
# the checker on hand-built nodes


def test_checker_accepts_id_and_rejects_renamed_rule():
    d = pf.node(seq("p => p"), pf.ID)
    assert ck.check_derivation(BF, (), d)
    bad = pf.node(seq("p => p"), pf.TOP_AX)
    trail = []
    assert not ck.check_derivation(BF, (), bad, trail)
    assert trail  # diagnostics accompany the verdict


def test_checker_rejects_foreign_rules_per_system():
    # exchange node inside a non-exchange system
    d = pf.node(seq("(q o p) => r"), pf.EXCH,
                [pf.node(seq("(p o q) => r"), pf.ID)], pf.Inst(path=()))
    assert not ck.check_derivation(BF, (), d)
    # negation axioms are bfnl-family only
    d2 = lm.dneg1(p)
    assert ck.check_derivation(BF, (), d2)
    assert not ck.check_derivation(DF, (), d2)


def test_checker_rejects_wrong_arity_and_bad_premise():
    d = pf.node(seq("p => p /\\ p"), pf.AND_R, [pf.node(seq("p => p"), pf.ID)])
    assert not ck.check_derivation(BF, (), d)  # AndR needs two premises
    d2 = pf.node(
        seq("p => p /\\ q"), pf.AND_R,
        [pf.node(seq("p => p"), pf.ID), pf.node(seq("p => p"), pf.ID)],
    )
    assert not ck.check_derivation(BF, (), d2)  # second premise proves the wrong thing


def test_checker_assumption_literal_membership():
    member = seq("p => q")
    d = pf.node(member, pf.ASSUMPTION, inst=pf.Inst(member=member))
    assert ck.check_derivation(BF, [member], d)
    assert not ck.check_derivation(BF, (), d)
    # near-miss member is rejected
    assert not ck.check_derivation(BF, [seq("p => r")], d)


def test_checker_rejects_sequents_the_system_disallows():
    # bounded starred systems admit both top and empty antecedents
    d = pf.node(seq("=> top"), pf.TOP_AX)
    assert ck.check_derivation(BD, (), d)
    assert not ck.check_derivation(DF, (), d)  # no top in the unbounded language
    # unstarred dfnl also refuses the empty antecedent itself
    d2 = pf.node(seq("=> p * (p \\ p)"), pf.UNDER_R)
    assert not ck.check_derivation(get_system("dfnl"), (), d2)


# ---------------------------------------------------------------------------
# certified builders: zero-premise schemas


def test_axiom_builders_check():
    checked(BF, lm.did(f("p * (q \\ p)")))
    checked(BF, lm.dtop(sx.parse_tree("p o q")))
    checked(BF, lm.dtop(None))
    checked(BF, lm.dbot(sx.parse_tree("p o bot"), (1,), q))
    checked(BF, lm.dbot_f(q))
    checked(BF, lm.dD(p, q, r))
    checked(BF, lm.dneg1(p))
    checked(BF, lm.dneg2(p))
    checked(B1, lm.done_r())
    checked(BFT, lm.dax_t(p))
    checked(get_system("bfnl-star-k4"), lm.dax_4(p))
    checked(get_system("bfnl-star-s5"), lm.dax_5(p))
    member = seq("p => q")
    checked(BF, lm.dassume(member), [member])


def test_axiom_builders_validate_their_contracts():
    with pytest.raises(LemmaError):
        lm.dbot(sx.parse_tree("p o q"), (0,), r)  # no bot at that spot


# ---------------------------------------------------------------------------
# certified builders: connective rules and combinators


def test_cut_and_trans():
    d = lm.dcut(lm.did(p), lm.did(p), ())
    assert d.seq == seq("p => p")
    checked(BF, d)
    d2 = lm.le_trans(lm.did(p), lm.did(p), lm.did(p))
    checked(BF, d2)


def test_lattice_rule_builders():
    a, b = f("p /\\ q"), f("p \\/ q")
    checked(BF, lm.dand_r(lm.dand_l(lm.did(p), a, 1), lm.dand_l(lm.did(q), a, 2)))
    checked(BF, lm.dor_l(lm.dor_r(lm.did(p), b, 1), lm.dor_r(lm.did(q), b, 2), b))


def test_product_and_slash_builders():
    d = lm.dprod_l(lm.dprod_r(lm.did(p), lm.did(q)), ())
    assert d.seq == seq("p * q => p * q")
    checked(BF, d)
    dresid = lm.dunder_r(lm.dprod_r(lm.did(p), lm.did(q)), p)
    assert dresid.seq == seq("q => p \\ (p * q)")
    checked(BF, dresid)
    dresid2 = lm.dover_r(lm.dprod_r(lm.did(p), lm.did(q)), q)
    assert dresid2.seq == seq("p => (p * q) / q")
    checked(BF, dresid2)
    minor, major = lm.did(p), lm.did(q)
    checked(BF, lm.dunder_l(minor, major, ()))
    checked(BF, lm.dover_l(major, minor, ()))


def test_modal_and_unit_builders():
    sysk = get_system("bfnl-star-k")
    checked(sysk, lm.ddia_l(lm.ddia_r(lm.did(p)), ()))
    checked(sysk, lm.dboxdown_r(lm.dboxdown_l(lm.did(p), ())))
    d = lm.dexch(lm.dprod_r(lm.did(q), lm.did(p)), ())
    assert d.seq == seq("(p o q) => q * p")
    checked(BFE, d)
    d1 = lm.done_l(lm.did(p), (), side="l")
    assert d1.seq == seq("(one o p) => p")
    checked(B1, d1)


def test_monotonicity_combinators():
    dpq = lm.dand_l(lm.did(p), f("p /\\ q"), 1)  # p /\ q => p
    checked(BF, lm.and_mono(dpq, dpq))
    checked(BF, lm.or_mono(dpq, dpq))
    checked(BF, lm.prod_mono(dpq, dpq))
    # slashes are antitone in one argument each
    under = lm.under_mono(dpq, dpq)
    assert under.seq == seq("p \\ (p /\\ q) => (p /\\ q) \\ p")
    checked(BF, under)
    over = lm.over_mono(dpq, dpq)
    assert over.seq == seq("(p /\\ q) / p => p / (p /\\ q)")
    checked(BF, over)
    neg = lm.neg_anti(dpq)
    assert neg.seq == seq("~p => ~(p /\\ q)")
    checked(BF, neg)
    checked(get_system("bfnl-star-k"), lm.dia_mono(dpq))
    checked(get_system("bfnl-star-k"), lm.boxdown_mono(dpq))


def test_double_negation_and_de_morgan_builders():
    checked(BF, lm.dnn_intro(p))
    checked(BF, lm.dnn_elim(p))
    checked(BF, lm.dneg_top())
    checked(BF, lm.dtop_negbot())
    checked(BF, lm.dm_and_fwd(p, q))
    checked(BF, lm.dm_and_bwd(p, q))
    checked(BF, lm.dm_or_fwd(p, q))
    checked(BF, lm.dm_or_bwd(p, q))
    checked(BF, lm.dist_prod_or(f("m"), p, q))
    checked(BF, lm.undist_prod_or(f("m"), p, q))
    checked(BF, lm.fact7(lm.did(p)))
    checked(BF, lm.comm_and(p, q))


def test_cong_replace_rebuilds_contexts():
    a, b = f("~~p"), p
    dab = lm.dnn_elim(p)  # ~~p => p
    dba = lm.dnn_intro(p)  # p => ~~p
    c = f("~(~~p * (~~p \\ q))")
    c2, fwd, bwd = lm.cong_replace(c, a, b, dab, dba)
    assert c2 == f("~(p * (p \\ q))")
    assert fwd.seq == sx.Sequent(sx.SLeaf(c), c2)
    assert bwd.seq == sx.Sequent(sx.SLeaf(c2), c)
    checked(BF, fwd)
    checked(BF, bwd)


def test_cong_replace_untouched_context_is_identity():
    c = f("q * r")
    c2, fwd, _ = lm.cong_replace(c, p, f("~~p"), lm.dnn_intro(p), lm.dnn_elim(p))
    assert c2 == c and fwd.rule == pf.ID


# ---------------------------------------------------------------------------
# lattice and boolean entailment engines


def test_lat_le_distributivity_both_ways():
    a = f("p /\\ (q \\/ r)")
    b = f("p /\\ q \\/ p /\\ r")
    checked(BF, lm.lat_le_strict(a, b))
    checked(BF, lm.lat_le_strict(b, a))
    assert lm.lat_le(p, q) is None


def test_lat_le_treats_non_lattice_formulas_as_opaque():
    a = f("(p * q) /\\ r")
    checked(DF, lm.lat_le_strict(a, f("p * q")))
    # it must not peek inside the product
    assert lm.lat_le(f("p * (q \\/ r)"), f("(p * q) \\/ (p * r)")) is None


def test_bool_le_certifies_classical_consequences():
    pairs = [
        ("~(p /\\ q)", "~p \\/ ~q"),
        ("~p \\/ ~q", "~(p /\\ q)"),
        ("p /\\ ~p", "bot"),
        ("top", "~p \\/ p"),
        ("p", "~~p"),
        ("~~p", "p"),
        ("p /\\ (q \\/ r)", "(p /\\ q) \\/ r"),
    ]
    for left, right in pairs:
        d = lm.bool_le(f(left), f(right))
        assert d is not None, (left, right)
        assert d.seq == sx.Sequent(sx.SLeaf(f(left)), f(right))
        checked(BF, d)
    assert lm.bool_le(p, q) is None
    assert lm.bool_le(f("p \\/ q"), f("p /\\ q")) is None


def test_bool_le_opaque_generators():
    # products are generators: p*q => q*p is NOT a boolean consequence
    assert lm.bool_le(f("p * q"), f("q * p")) is None
    d = lm.bool_le(f("(p * q) /\\ ~(p * q)"), sx.BOT)
    assert d is not None
    checked(BF, d)


def test_expand_by_cases():
    d = lm.expand_by_cases(lm.did(f("p \\/ q")), f("p \\/ q"))
    checked(BF, d)


# ---------------------------------------------------------------------------
# property tests


@given(lambek_formulas)
def test_did_always_checks(a):
    d = lm.did(a)
    assert d.seq == sx.Sequent(sx.SLeaf(a), a)
    assert ck.check_derivation(get_system("bfnl1-s5"), (), d)


@given(lambek_formulas, lambek_formulas)
@settings(max_examples=40)
def test_comm_and_always_checks(a, b):
    d = lm.comm_and(a, b)
    assert d.seq == sx.Sequent(sx.SLeaf(sx.LAnd(a, b)), sx.LAnd(b, a))
    assert ck.check_derivation(get_system("bfnl1-s5"), (), d)


@given(lambek_formulas, lambek_formulas)
@settings(max_examples=40)
def test_mono_combinators_always_check(a, b):
    da, db = lm.did(a), lm.did(b)
    sys = get_system("bfnl1-s5")
    for d in (lm.and_mono(da, db), lm.or_mono(da, db), lm.prod_mono(da, db),
              lm.under_mono(da, db), lm.over_mono(da, db), lm.neg_anti(da)):
        assert ck.check_derivation(sys, (), d)


def test_serialization_round_trip_preserves_checkability():
    d = lm.dm_and_fwd(f("p * q"), f("q \\ r"))
    j = pf.to_json(d)
    d2 = pf.from_json(j)
    assert d2.seq == d.seq and pf.size(d2) == pf.size(d)
    checked(BF, d2)


def test_assumptions_of_collects_used_members():
    member = seq("p => q")
    d = lm.dcut(lm.dassume(member), lm.did(q), ())
    assert pf.assumptions_of(d) == frozenset([member])
    assert pf.assumptions_of(lm.did(p)) == frozenset()
