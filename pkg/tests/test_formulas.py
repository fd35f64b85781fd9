import pytest
from hypothesis import given, strategies as st

from cmzg.cm import I, INF
from cmzg.formulas import (BOTTOM, TOP, AntichainFormula, N, OrderType, ParseError, ac_join, ac_leq,
                           ac_meet, antichain_of, equivalent, evaluate, evaluate_antichain, formula_meet,
                           formula_sum, interval_elements, interval_report, is_minimal_pair, leq,
                           node_geq, node_leq, node_meet, parse_pp, pattern_dot, pattern_poset, realize,
                           window_nodes)
from cmzg.points import RTILDE, XYpow

nodes = st.builds(lambda a, i: N(a, i), st.one_of(st.none(), st.integers(0, 6)), st.integers(0, 6))


def test_parse_errors():
    for bad in ["", "pt(I2,", "ann(x", "pt(Q, x)", "div(y^1/2)"]:
        with pytest.raises(ParseError):
            parse_pp(bad)


def test_realizations_of_atoms():
    assert str(realize("pt(I2, x*y)")) == "(I2; y, 0)"
    assert antichain_of(realize("pt(Iinf, x)")) == TOP
    assert realize("ann(1)").is_zero()


def test_quoted_order_instances():
    a, b, c = realize("pt(I2, x*y)"), realize("pt(m, x*y)"), realize("pt(I3, x*y^2)")
    assert leq(b, a) and not leq(a, b)
    assert leq(c, a)
    assert node_geq(N(2, 1), N(1, 1)) and node_geq(N(2, 1), N(3, 2))


def test_top_of_pattern():
    for u in window_nodes(4):
        assert node_leq(u, N(None, 0))


@given(nodes, nodes, nodes)
def test_node_order_is_partial_order(u, v, w):
    assert node_leq(u, u)
    if node_leq(u, v) and node_leq(v, u):
        assert u == v
    if node_leq(u, v) and node_leq(v, w):
        assert node_leq(u, w)


@given(nodes, nodes)
def test_node_meet_is_glb(u, v):
    m = node_meet(u, v)
    assert node_leq(m, u) and node_leq(m, v)
    for w in window_nodes(4):
        if node_leq(w, u) and node_leq(w, v):
            assert node_leq(w, m)


@given(nodes, nodes)
def test_closed_form_matches_realization(u, v):
    assert node_leq(u, v) == leq(u.formula(), v.formula())


def test_sum_and_meet_of_realizations():
    s = formula_sum(realize("pt(R, x)"), realize("pt(Iinf, x*y)"))
    assert antichain_of(s) == AntichainFormula.of(N(0, 0), N(None, 1))
    m = formula_meet(realize("pt(I2, x)"), realize("pt(Iinf, x*y)"))
    assert equivalent(m, node_meet(N(2, 0), N(None, 1)).formula())


def test_comparable_nodes_rejected():
    with pytest.raises(ValueError):
        AntichainFormula(frozenset([N(0, 0), N(None, 0)]))


@given(st.lists(nodes, max_size=3), st.lists(nodes, max_size=3), st.lists(nodes, max_size=3))
def test_antichain_lattice_laws(a, b, c):
    A, B, C = (AntichainFormula.of(*x) for x in (a, b, c))
    assert ac_meet(A, ac_join(B, C)) == ac_join(ac_meet(A, B), ac_meet(A, C))
    assert ac_leq(ac_meet(A, B), A) and ac_leq(A, ac_join(A, B))
    assert ac_leq(A, B) == (ac_join(A, B) == B)


def test_evaluation_on_points():
    phi = realize("pt(I2, x*y)")
    assert evaluate(phi, RTILDE) == XYpow(-1)
    assert evaluate(phi, I(5)).x_valuation() == 4
    assert evaluate_antichain(AntichainFormula.of(N(2, 1)), I(5)) == 4
    assert evaluate_antichain(AntichainFormula.of(N(2, 1)), INF) is None


def test_chain_intervals():
    r = interval_report(AntichainFormula.of(N(None, 1)), TOP, 6)
    assert r.chain and r.order_type is OrderType.OMEGA_PLUS_ONE
    assert [str(e) for e in r.elements[:3]] == ["xy∈Iinf", "x∈R + xy∈Iinf", "x∈m + xy∈Iinf"]
    r = interval_report(AntichainFormula.of(N(0, 0)), AntichainFormula.of(N(1, 0)), 6)
    assert r.order_type is OrderType.ONE_PLUS_OMEGA_STAR
    assert interval_elements(TOP, TOP, 4) == [TOP]


def test_minimal_pairs():
    assert is_minimal_pair(AntichainFormula.of(N(0, 0), N(2, 1)), AntichainFormula.of(N(1, 0)), 6)
    assert is_minimal_pair(AntichainFormula.of(N(1, 1)), AntichainFormula.of(N(0, 0)), 6)
    assert not is_minimal_pair(AntichainFormula.of(N(None, 1)), TOP, 6)
    assert not is_minimal_pair(TOP, TOP, 6)


def test_pattern_poset_and_dot():
    nodes, covers = pattern_poset(3)
    assert len(nodes) == 16 + 4
    assert all(node_leq(u, v) for u, v in covers)
    assert pattern_dot(3) == pattern_dot(3)
    assert pattern_dot(3).startswith("digraph pattern {")


def test_window_lattice_size():
    assert len(interval_elements(BOTTOM, TOP, 3)) == 66
