import pytest
from hypothesis import given, settings

from conftest import lambek_formulas, modal_formulas, sequents, struct_trees
from fnlkit import syntax as sx
from fnlkit.errors import ParseError

p, q, r = sx.LAtom("p"), sx.LAtom("q"), sx.LAtom("r")


# ---------------------------------------------------------------------------
# parsing


def test_parse_modal_basics():
    assert sx.parse_modal("<>p") == sx.MDia(sx.MAtom("p"))
    assert sx.parse_modal("~p \\/ q") == sx.MOr(sx.MNot(sx.MAtom("p")), sx.MAtom("q"))
    # box is sugar, there is no box constructor
    assert sx.parse_modal("[]p") == sx.MNot(sx.MDia(sx.MNot(sx.MAtom("p"))))
    assert sx.parse_modal("bot") == sx.MBot()


def test_parse_modal_precedence():
    f = sx.parse_modal("p -> q \\/ r /\\ p")
    assert f == sx.MImp(sx.MAtom("p"), sx.MOr(sx.MAtom("q"), sx.MAnd(sx.MAtom("r"), sx.MAtom("p"))))
    # binary connectives associate to the right
    assert sx.parse_modal("p -> q -> p") == sx.MImp(sx.MAtom("p"), sx.MImp(sx.MAtom("q"), sx.MAtom("p")))


def test_parse_lambek_basics():
    assert sx.parse_lambek("m * p") == sx.LProd(sx.LAtom("m"), p)
    assert sx.parse_lambek("top") == sx.TOP
    assert sx.parse_lambek("one") == sx.ONE
    assert sx.parse_lambek("p \\ q") == sx.LUnder(p, q)
    assert sx.parse_lambek("p / q") == sx.LOver(p, q)
    assert sx.parse_lambek("[v]p") == sx.LBoxDown(p)
    assert sx.parse_lambek("~p * q") == sx.LProd(sx.LNot(p), q)


def test_parse_fresh_letters():
    assert sx.parse_lambek("p_bot") == sx.P_BOT
    assert sx.parse_lambek("p_top") == sx.P_TOP
    assert sx.parse_lambek("p{q}") == sx.fresh_for(q)
    nested = sx.parse_lambek("p{p * p{q}}")
    assert nested == sx.fresh_for(sx.LProd(p, sx.fresh_for(q)))


def test_parse_sequents_and_trees():
    s = sx.parse_sequent("(p o q) => p * q")
    assert s == sx.Sequent(sx.SNode(sx.SLeaf(p), sx.SLeaf(q)), sx.LProd(p, q))
    assert sx.parse_sequent("=> top") == sx.Sequent(None, sx.TOP)
    t = sx.parse_tree("< p o q > o r")
    assert t == sx.SNode(sx.SBracket(sx.SNode(sx.SLeaf(p), sx.SLeaf(q))), sx.SLeaf(r))
    # a parenthesized formula is still a leaf
    assert sx.parse_tree("(p \\/ q) * r") == sx.SLeaf(sx.LProd(sx.LOr(p, q), r))


def test_parse_errors():
    for bad in [
        "p \\ q \\ r",  # slashes do not chain
        "p / q \\ r",
        "p }",
        "p{q",  # unterminated fresh letter
        "p * ",
        "(p",
        "p q",
    ]:
        with pytest.raises(ParseError):
            sx.parse_lambek(bad)
    with pytest.raises(ParseError):
        sx.parse_tree("p o q o r")  # o does not chain
    with pytest.raises(ParseError):
        sx.parse_modal("[v]p")  # not modal syntax
    with pytest.raises(ParseError):
        sx.parse_modal("p * q")
    with pytest.raises(ParseError):
        sx.parse_lambek("[]p")  # box sugar is modal-only
    with pytest.raises(ParseError):
        sx.parse_lambek("p -> q")


@given(modal_formulas)
def test_modal_render_roundtrip(f):
    assert sx.parse_modal(sx.render_modal(f)) == f


@given(lambek_formulas)
def test_lambek_render_roundtrip(f):
    assert sx.parse_lambek(sx.render_lambek(f)) == f


@given(struct_trees)
def test_tree_render_roundtrip(t):
    assert sx.parse_tree(sx.render_tree(t)) == t


@given(sequents)
def test_sequent_render_roundtrip(s):
    assert sx.parse_sequent(sx.render_sequent(s)) == s


# ---------------------------------------------------------------------------
# sizes and subformulas


def test_sizes():
    assert sx.lsize(p) == 0
    assert sx.lsize(sx.BOT) == 0
    assert sx.lsize(sx.fresh_for(sx.LAnd(p, q))) == 0  # fresh letters are atomic
    assert sx.lsize(sx.LProd(p, sx.LNot(q))) == 2
    assert sx.msize(sx.parse_modal("[]p")) == 3


def test_subformulas():
    assert sx.subformulas(sx.LProd(p, q)) == {p, q, sx.LProd(p, q)}
    assert sx.subformulas(p) == {p}
    f = sx.LNot(sx.LAnd(p, sx.BOT))
    assert sx.subformulas(f) == {p, sx.BOT, sx.LAnd(p, sx.BOT), f}


@given(lambek_formulas)
def test_subformulas_idempotent(f):
    subs = sx.subformulas(f)
    for g in subs:
        assert sx.subformulas(g) <= subs


def test_phi_of_tree():
    assert sx.phi_of_tree(sx.SLeaf(p)) == p
    t = sx.SNode(sx.SLeaf(p), sx.SNode(sx.SLeaf(q), sx.SLeaf(r)))
    assert sx.phi_of_tree(t) == sx.LProd(p, sx.LProd(q, r))
    assert sx.phi_of_tree(sx.SNode(sx.SLeaf(p), sx.SLeaf(p))) == sx.LProd(p, p)
    with pytest.raises(ValueError):
        sx.phi_of_tree(sx.SBracket(sx.SLeaf(p)))


@given(struct_trees)
def test_phi_size_accounting(t):
    leaves, nodes, ok = [], 0, True
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, sx.SLeaf):
            leaves.append(x.f)
        elif isinstance(x, sx.SNode):
            nodes += 1
            stack += [x.l, x.r]
        else:
            ok = False
            break
    if not ok:
        return  # phi undefined on bracketed trees
    assert sx.lsize(sx.phi_of_tree(t)) == sum(sx.lsize(f) for f in leaves) + nodes


# ---------------------------------------------------------------------------
# closures


def brute_closure(base, mode, bound):
    """Oracle: saturate under the closure connectives, keep sizes <= bound."""
    out = set(base)
    changed = True
    while changed:
        changed = False
        snapshot = list(out)
        for a in snapshot:
            for b in snapshot:
                for g in (sx.LAnd(a, b), sx.LOr(a, b)):
                    if sx.lsize(g) <= bound and g not in out:
                        out.add(g)
                        changed = True
            if mode == "and_or_not":
                g = sx.LNot(a)
                if sx.lsize(g) <= bound and g not in out:
                    out.add(g)
                    changed = True
    return {f for f in out if sx.lsize(f) <= bound}


def test_closure_contains():
    base = frozenset([p, q, sx.TOP, sx.BOT])
    c = sx.ClosureSpec(base, "and_or", 5)
    assert sx.closure_contains(c, sx.LAnd(p, sx.LOr(q, p)))
    assert not sx.closure_contains(c, sx.LNot(p))
    cn = sx.ClosureSpec(frozenset([p, sx.TOP, sx.BOT]), "and_or_not", 5)
    assert sx.closure_contains(cn, sx.LNot(sx.LOr(p, sx.BOT)))
    assert not sx.closure_contains(cn, sx.LProd(p, p))


def test_enumerate_closure_frozen_order():
    c0 = sx.ClosureSpec(frozenset([p]), "and_or", 0)
    assert list(sx.enumerate_closure(c0)) == [p]
    c1 = sx.ClosureSpec(frozenset([p, q]), "and_or", 1)
    got = [sx.render_lambek(f) for f in sx.enumerate_closure(c1)]
    assert got == [
        "p",
        "q",
        "p /\\ p",
        "p /\\ q",
        "q /\\ p",
        "q /\\ q",
        "p \\/ p",
        "p \\/ q",
        "q \\/ p",
        "q \\/ q",
    ]


def test_enumerate_closure_negations():
    c = sx.ClosureSpec(frozenset([p, sx.TOP, sx.BOT]), "and_or_not", 1)
    got = set(sx.enumerate_closure(c))
    assert {sx.LNot(p), sx.LNot(sx.TOP), sx.LNot(sx.BOT)} <= got


@pytest.mark.parametrize("mode,bound", [("and_or", 2), ("and_or_not", 2)])
def test_enumerate_matches_oracle(mode, bound):
    base = frozenset([p, q, sx.TOP, sx.BOT])
    spec = sx.ClosureSpec(base, mode, bound)
    got = set(sx.enumerate_closure(spec))
    assert got == brute_closure(base, mode, bound)
    # membership test agrees with enumeration on everything enumerated
    for f in got:
        assert sx.closure_contains(spec, f)


@settings(max_examples=60)
@given(lambek_formulas)
def test_closure_contains_vs_enumeration(f):
    spec = sx.ClosureSpec(frozenset([p, q, sx.TOP, sx.BOT]), "and_or", 3)
    inside = f in set(sx.enumerate_closure(spec))
    if sx.lsize(f) <= 3:
        assert sx.closure_contains(spec, f) == inside
    elif inside:
        raise AssertionError("enumeration produced an oversized formula")


# ---------------------------------------------------------------------------
# json


@given(modal_formulas)
def test_modal_json_roundtrip(f):
    assert sx.modal_from_json(sx.modal_to_json(f)) == f


@given(sequents)
def test_sequent_json_roundtrip(s):
    assert sx.sequent_from_json(sx.sequent_to_json(s)) == s
