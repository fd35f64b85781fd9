import random

import pytest

from cmzg.cm import I, INF
from cmzg.points import (GPT, QPT, QX_FULL, RTILDE, CatalogError, InfPoint, SubmoduleDesc, XYpow, Ypow,
                         hom_into, limit_ideal_check, random_elem, submodule_chain, trace,
                         verify_ar_sequence_inf, zero_desc)
from cmzg.kernel import TruncSeries


def test_point_names():
    assert InfPoint.parse("R~") is RTILDE and InfPoint.parse("Q") is QPT and InfPoint.parse("G") is GPT
    with pytest.raises(ValueError):
        InfPoint.parse("P")


def test_rtilde_chain_order():
    chain = [d for d, _ in submodule_chain(RTILDE, 3)]
    assert all(a > b for a, b in zip(chain, chain[1:]))
    assert Ypow(5) > QX_FULL > XYpow(-7) > XYpow(2) > zero_desc(RTILDE)


def test_bad_descriptor():
    with pytest.raises(CatalogError):
        SubmoduleDesc(QPT, "Ypow", 1)


def test_limit_ideal():
    assert all(limit_ideal_check(trials=30).values())


def test_trace_of_nodes():
    y = lambda k: TruncSeries.monomial(k)
    z = TruncSeries.zero()
    assert trace([(I(2), (y(1), z))], RTILDE) == XYpow(-1)
    assert trace([(INF, (y(0),))], RTILDE) == QX_FULL
    assert trace([(I(0), (y(0), z))], GPT).is_zero


def test_hom_into_families_are_morphisms():
    rng = random.Random(0)
    for N in (I(0), I(3), INF):
        for P in (RTILDE, QPT, GPT):
            fam = hom_into(N, P)
            for _ in range(5):
                assert fam.check(fam.random_values(rng))


def test_random_elements_live_in_rtilde():
    rng = random.Random(1)
    for _ in range(20):
        assert random_elem(rng, RTILDE).in_rtilde()


def test_ar_sequence_ending_in_iinf():
    rep = verify_ar_sequence_inf(trials=60, max_n=5)
    assert rep.ok
    assert len(rep.pp_generators_hold) == 5
