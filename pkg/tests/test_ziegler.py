import pytest
from hypothesis import given, strategies as st

from cmzg.formulas import AntichainFormula, N
from cmzg.ordinals import SmallOrdinal
from cmzg.ziegler import (G_POINT, I_INF, Q_POINT, R_TILDE, SPECIALS, CatalogMiss, SymbolicOpenSet,
                          ZgPoint, basis_catalog, catalog_checks, cb_analysis, closed_points,
                          closure_contains, cofinite, constant_type, open_set_of_pair, point_in_pair,
                          product_realization_check, rtilde_type, shifted_type)

fin_sets = st.builds(lambda fin, m, sp: SymbolicOpenSet.make(fin, m, sp),
                     st.frozensets(st.integers(0, 8), max_size=4),
                     st.one_of(st.none(), st.integers(0, 9)),
                     st.frozensets(st.sampled_from(SPECIALS)))


def test_point_parsing():
    assert ZgPoint.parse("I3") == ZgPoint.fin(3)
    assert ZgPoint.parse("R~") == R_TILDE and ZgPoint.parse("Iinf") == I_INF
    with pytest.raises(CatalogMiss):
        ZgPoint.parse("nowhere")


def test_open_set_normal_form():
    s = SymbolicOpenSet.make([2, 3, 4], 5, [])
    assert s == cofinite(2)
    assert str(cofinite(1) | SymbolicOpenSet.of(I_INF)) == "{O_1, Iinf}"


@given(fin_sets, fin_sets)
def test_set_algebra_pointwise(a, b):
    for p in [ZgPoint.fin(k) for k in range(14)] + list(SPECIALS):
        assert (p in (a | b)) == (p in a or p in b)
        assert (p in (a & b)) == (p in a and p in b)
        assert (p in (a - b)) == (p in a and p not in b)


def test_iinf_neighbourhoods():
    for m in range(5):
        U = open_set_of_pair(AntichainFormula.of(N(None, 0)), AntichainFormula.of(N(None, 1), N(m, 0)))
        assert U == cofinite(m + 1) | SymbolicOpenSet.of(I_INF)


def test_open_set_matches_pointwise_test():
    phi, psi = AntichainFormula.of(N(3, 3)), AntichainFormula.of(N(0, 1))
    U = open_set_of_pair(phi, psi)
    for k in range(20):
        assert (ZgPoint.fin(k) in U) == point_in_pair(phi, psi, ZgPoint.fin(k))


@pytest.mark.parametrize("p", [ZgPoint.fin(0), ZgPoint.fin(4)] + list(SPECIALS))
def test_basis_catalogs(p):
    entries = basis_catalog(p, 4)
    assert entries and all(p in e.open_set for e in entries)


def test_finite_points_isolated():
    for n in range(6):
        (e,) = basis_catalog(ZgPoint.fin(n), 4)
        assert e.open_set.is_singleton(ZgPoint.fin(n))


def test_cb_ranks():
    rep = cb_analysis(6)
    assert rep.space_rank == SmallOrdinal.finite(2)
    assert rep.finite_rank == SmallOrdinal.finite(0)
    assert rep.rank(I_INF) == rep.rank(R_TILDE) == SmallOrdinal.finite(1)
    assert rep.rank(Q_POINT) == rep.rank(G_POINT) == SmallOrdinal.finite(2)


def test_closed_points_and_closure():
    assert closed_points(6) == {G_POINT, Q_POINT}
    assert closure_contains(I_INF, G_POINT, 6)
    assert not closure_contains(G_POINT, I_INF, 6)


def test_catalog_shape_checks():
    checks = catalog_checks(5)
    assert all(v for k, v in checks.items() if k != "entries")


def test_product_obstruction():
    rep = product_realization_check(rtilde_type(), 6)
    assert rep.obstruction
    assert all(v == "zero" for v, _ in rep.finite.values())
    assert not rep.rtilde_meet.is_zero


def test_other_types():
    assert rtilde_type().is_decreasing(8) and shifted_type().is_decreasing(8)
    rep = product_realization_check(constant_type(N(0, 0)), 6)
    assert not rep.obstruction
    assert all(v == "stable" for v, _ in rep.finite.values())
