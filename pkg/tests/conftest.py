"""Shared hypothesis strategies for formula/tree/sequent generation."""

import hypothesis.strategies as st
from hypothesis import settings

from fnlkit import syntax as sx

# several property tests drive search or cold caches; wall-clock deadlines
# would only add flakiness
settings.register_profile("fnlkit", deadline=None)
settings.load_profile("fnlkit")

atom_names = st.sampled_from(["p", "q", "r", "s_1"])

modal_formulas = st.recursive(
    st.one_of(atom_names.map(sx.MAtom), st.just(sx.MBot())),
    lambda kids: st.one_of(
        st.builds(sx.MAnd, kids, kids),
        st.builds(sx.MOr, kids, kids),
        st.builds(sx.MImp, kids, kids),
        st.builds(sx.MNot, kids),
        st.builds(sx.MDia, kids),
    ),
    max_leaves=12,
)

_l_leaves = st.one_of(
    atom_names.map(sx.LAtom),
    st.sampled_from([sx.BOT, sx.TOP, sx.ONE, sx.P_BOT, sx.P_TOP]),
    atom_names.map(lambda n: sx.fresh_for(sx.LAtom(n))),
)

lambek_formulas = st.recursive(
    _l_leaves,
    lambda kids: st.one_of(
        st.builds(sx.LAnd, kids, kids),
        st.builds(sx.LOr, kids, kids),
        st.builds(sx.LNot, kids),
        st.builds(sx.LProd, kids, kids),
        st.builds(sx.LUnder, kids, kids),
        st.builds(sx.LOver, kids, kids),
        st.builds(sx.LDia, kids),
        st.builds(sx.LBoxDown, kids),
        st.builds(lambda a: sx.fresh_for(a), kids),
    ),
    max_leaves=10,
)

struct_trees = st.recursive(
    lambek_formulas.map(sx.SLeaf),
    lambda kids: st.one_of(st.builds(sx.SNode, kids, kids), st.builds(sx.SBracket, kids)),
    max_leaves=6,
)

sequents = st.builds(
    sx.Sequent, st.one_of(st.none(), struct_trees), lambek_formulas
)
