import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from cmzg.cm import (INF, FgCM, I, Indec, MorphCM, NonSquareZero, ar_sequence, biendomorphism_ring,
                     block_sum, canonical, decompose, factor_through, hom_closed_form, hom_space, incl,
                     inf_incl, inf_map_normal_form, is_iso, loop_y, mult_y, radical_generators,
                     verify_exact, x_to_inf)
from cmzg.kernel import SeriesMatrix, parse_field

from helpers import random_block_sum, random_conjugate


def test_catalog_names():
    assert [str(I(n)) for n in (0, 1, 2)] == ["R", "m", "I2"]
    assert str(INF) == "Iinf"
    assert Indec.parse("I7") == I(7) and Indec.parse("Iinf") == INF
    assert I(3) < I(4) < INF


def test_canonical_actions():
    X = canonical(I(3)).X
    assert X == SeriesMatrix([[0, [0, 0, 0, 1]], [0, 0]])
    assert canonical(INF).X == SeriesMatrix([[0]])


def test_decompose_known():
    d = decompose(block_sum([I(2), INF, I(0)]))
    assert Counter(d.summands) == Counter([I(2), INF, I(0)])


def test_decompose_rejects_bad_input():
    with pytest.raises(NonSquareZero):
        decompose(FgCM(SeriesMatrix([[1, 0], [0, 0]])))


def test_decompose_over_fp():
    F7 = parse_field("Fp(7)")
    rng = random.Random(3)
    M, _ = random_conjugate(rng, [I(1), I(4)], 24, F7)
    assert Counter(decompose(M).summands) == Counter([I(1), I(4)])


@given(st.integers(0, 10_000))
def test_decompose_recovers_blocks(seed):
    rng = random.Random(seed)
    blocks = random_block_sum(rng, max_rank=5, max_n=4)
    M, _ = random_conjugate(rng, blocks)
    d = decompose(M)
    assert Counter(d.summands) == Counter(blocks)
    assert M.X @ d.basis == d.basis @ d.canonical.X


def test_hom_ranks():
    for a, b in [(0, 0), (1, 3), (4, 2)]:
        assert len(hom_closed_form(I(a), I(b))) == 2
    assert len(hom_closed_form(INF, I(2))) == 1
    assert len(hom_closed_form(I(2), INF)) == 1


def test_hom_closed_form_matches_solver():
    for a in range(3):
        for b in list(range(3)):
            gens = hom_closed_form(I(a), I(b))
            solved = hom_space(canonical(I(a)), canonical(I(b)))
            assert len(solved) == len(gens)
            for g in gens:
                assert g.is_intertwining()


def test_irreducible_maps_intertwine():
    for f in [mult_y(2), incl(1), loop_y(), inf_incl(2), x_to_inf(3)]:
        assert f.is_intertwining()


def test_composition_order():
    f = incl(1) @ mult_y(1)        # m -> I2 -> m
    assert f.source.label == (I(1),) and f.target.label == (I(1),)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_ar_sequences_exact(n):
    rep = verify_exact(ar_sequence(n), bound=6)
    assert rep.ok, rep.failures


def test_radical_maps_factor_through_left_map():
    s = ar_sequence(3)
    for h in radical_generators(3, I(2)):
        assert factor_through(h, s.inj) is not None


def test_isomorphisms():
    assert is_iso(canonical(I(2)).identity())
    assert not is_iso(mult_y(0) @ incl(0))


def test_biendomorphisms():
    rep = biendomorphism_ring(3)
    assert rep.generator_squares_to_zero and rep.x_equals_ypow_times_generator and rep.commutant_is_generated
    assert rep.summary() == "R_3 = R<xy^-3>"


def test_inf_map_normal_form():
    f = inf_incl(2) @ loop_y() @ loop_y()
    unit, k = inf_map_normal_form(f)
    assert k == 2
