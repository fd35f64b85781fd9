from pathlib import Path

import pytest

from cmzg.cm import INF, I, incl, mult_y, x_to_inf
from cmzg.kernel import TruncSeries
from cmzg.quilt import (NotInSpan, build_quilt, export_dot, factor_walks, grid_size, mesh_holds,
                        traverse_identification, walks_between)
from cmzg.radical import rad_omega_generators

GOLDEN = Path(__file__).parent / "golden" / "quilt_b3.dot"


def test_grid_layout():
    for b in (2, 4, 6):
        g = build_quilt(b)
        assert g.grid_count() == grid_size(b) == b * (b + 1) // 2
    with pytest.raises(ValueError):
        build_quilt(1)


def test_meshes_commute():
    assert mesh_holds(build_quilt(6)) == []


def test_gluing_is_orientation_reversing():
    g = build_quilt(5)
    assert g.orientation == "reversed"
    for ident in g.identification:
        back, sign = traverse_identification(g, ident, 2)
        assert back == ident and sign == 1
        assert traverse_identification(g, ident, 1)[1] == -1


def test_zero_edges_flagged():
    g = build_quilt(4)
    assert not g.edge("g0").irreducible and not g.edge("zinf").irreducible


def test_dot_golden():
    dot = export_dot(build_quilt(3))
    assert dot == GOLDEN.read_text()
    assert export_dot(build_quilt(3), overlay_pattern=True).count("cluster_pattern") == 1


def test_json_roundtrip_is_stable():
    g = build_quilt(3)
    assert g.dumps() == build_quilt(3).dumps()


def test_walks():
    ws = walks_between(I(1), I(1), 2, 4)
    assert {str(w) for w in ws} >= {"[mult_y(1); incl(1)]", "[incl(0); mult_y(0)]"}
    assert all(w.evaluate().is_intertwining() for w in ws)


def test_factor_walks():
    res = factor_walks(incl(1) @ mult_y(1))
    assert res.length == 2
    total = None
    for w in res.decomposition:
        m = w.evaluate()
        total = m if total is None else total + m
    assert total == incl(1) @ mult_y(1)
    (f,) = rad_omega_generators(I(0), INF)
    assert factor_walks(f).walks[0].crossing


def test_factor_walks_limits():
    # a map known only to working precision is not a finite sum of walks
    with pytest.raises(NotInSpan):
        factor_walks(x_to_inf(0).scale(TruncSeries([1, 1], 24)), max_len=1)
