import pytest

from cmzg.formulas import BOTTOM, TOP, AntichainFormula, N, interval_elements
from cmzg.mdim import (CatalogChain, FiniteLattice, PatternIntervalLattice, UnsupportedPresentation,
                       WindowStable, downset_difference, exact_interval_length, m_dim,
                       second_derivative_report, tail_signature, tower)
from cmzg.ordinals import OMEGA, SmallOrdinal


def test_ordinals():
    assert str(OMEGA.succ()) == "omega+1"
    assert SmallOrdinal.parse("ω+2") == SmallOrdinal(1, 2)
    assert SmallOrdinal.finite(3) + OMEGA == OMEGA
    assert SmallOrdinal.finite(7) < OMEGA


def test_finite_lattices():
    assert m_dim(FiniteLattice.chain(range(5))) == SmallOrdinal.finite(0)
    assert FiniteLattice.chain(range(5)).length() == 4
    assert m_dim(FiniteLattice.chain([0])) is None


@pytest.mark.parametrize("tag,dim", [("omega+1", 1), ("1+omega*", 1), ("omega", 0), ("omega*", 0),
                                     ("1+omega", 0), ("omega*+1", 0)])
def test_catalog_chains(tag, dim):
    assert m_dim(CatalogChain(tag)) == SmallOrdinal.finite(dim)
    assert m_dim(WindowStable(CatalogChain(tag))) == SmallOrdinal.finite(dim)


def test_unknown_chain():
    with pytest.raises(UnsupportedPresentation):
        CatalogChain("omega^2")


def test_downset_difference_counts_window_nodes():
    # in a distributive lattice the interval length is the size of the down-set difference
    from cmzg.formulas import ac_leq, node_leq, window_nodes
    elems = interval_elements(BOTTOM, TOP, 2)
    wide = window_nodes(9)
    for a in elems:
        for b in elems:
            if not ac_leq(a, b):
                continue
            d = downset_difference(a, b)
            if d is None:
                continue
            seen = [u for u in wide if any(node_leq(u, v) for v in b.nodes)
                    and not any(node_leq(u, v) for v in a.nodes)]
            assert len(seen) == d


def test_tail_signatures():
    assert tail_signature(BOTTOM) == ("zero",)
    assert tail_signature(TOP)[0] == "inf"
    assert tail_signature(AntichainFormula.of(N(2, 3)))[0] == "fin"
    assert downset_difference(BOTTOM, TOP) is None


def test_pattern_tower():
    rep = tower(PatternIntervalLattice(5), 5)
    assert rep.m_dim == SmallOrdinal.finite(2)
    st = rep.steps
    assert len(st) == 4 and st[1].chain and st[2].chain and st[2].window_size == 3 and st[3].trivial


def test_second_derivative():
    rep = second_derivative_report((5, 6), depth=3)
    assert rep.interval_length == 2 and rep.full_length == 3 and rep.ok
