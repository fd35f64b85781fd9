import pytest

from cmzg.cm import INF, I, MorphCM, canonical, hom_closed_form, incl, loop_y, mult_y, x_to_inf
from cmzg.formulas import BoundExceeded
from cmzg.kernel import SeriesMatrix
from cmzg.ordinals import OMEGA, SmallOrdinal
from cmzg.radical import (canonical_path, in_rad, in_rad_omega, in_rad_omega_plus_one, layer,
                          paths_from, paths_into, rad_power_membership, stabilization, verify_nilpotency)


def _iinf_to_r_to_iinf():
    R, Iinf = canonical(I(0)), canonical(INF)
    return MorphCM(Iinf, R, SeriesMatrix([[1], [0]])) @ MorphCM(R, Iinf, SeriesMatrix([[0, 1]]))


def test_paths():
    p = canonical_path(I(1), 2, 1)
    assert p.target == I(2) and len(p) == 3
    assert all(q.target.n >= 0 for q in paths_from(I(0), 3))
    assert all(q.target == I(2) for q in paths_into(I(2), 3))


def test_layers_of_catalog_maps():
    assert str(layer(_iinf_to_r_to_iinf())) == "omega+1"
    y3 = loop_y() @ loop_y() @ loop_y()
    assert layer(y3).value == SmallOrdinal.finite(3)
    assert layer(mult_y(1)).value == SmallOrdinal.finite(1)
    assert layer(x_to_inf(2)).value == OMEGA
    assert layer(canonical(I(2)).identity()).value == SmallOrdinal.finite(0)
    assert str(layer(mult_y(1).scale(0))) == "0 (zero map)"


def test_powers():
    y_id = incl(1) @ mult_y(1)
    assert rad_power_membership(y_id, 2) and not rad_power_membership(y_id, 3)
    assert rad_power_membership(mult_y(1), 1) and not rad_power_membership(mult_y(1), 2)
    assert in_rad(mult_y(1)) and not in_rad(canonical(I(1)).identity())


def test_bound_is_enforced():
    with pytest.raises(BoundExceeded):
        rad_power_membership(mult_y(9), 1, bound=8)


def test_stabilization_matches_closed_form():
    for a in range(4):
        for b in range(4):
            for f in hom_closed_form(I(a), I(b)):
                assert in_rad_omega(f) == all(stabilization(f, 8))


def test_omega_plus_one():
    assert in_rad_omega_plus_one(_iinf_to_r_to_iinf(), 4)
    assert not in_rad_omega_plus_one(x_to_inf(1), 4)


def test_nilpotency():
    rep = verify_nilpotency(3)
    assert rep.ok and rep.summary().startswith("omega+2 confirmed")
