from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cmzg.kernel import (GF, QQ, DEFAULT_PREC, InsufficientPrecision, LaurentTrunc, QElem, SeriesMatrix,
                         TruncSeries, ZeroDivisor, FieldError, inverse, is_unimodular, parse_field,
                         q_invert, smith_normal_form, solve_linear)

coeffs = st.lists(st.integers(-5, 5), min_size=1, max_size=6)


def poly(cs, prec=12):
    return TruncSeries(cs, prec, QQ, exact=True)


def series(cs, prec=12):
    return TruncSeries(cs, prec, QQ)


def test_field_parsing():
    assert parse_field("Q") is QQ or parse_field("Q") == QQ
    assert parse_field("Fp(5)") == parse_field("GF(5)") == parse_field("F5")
    with pytest.raises(FieldError):
        parse_field("Fp(2)")
    with pytest.raises(FieldError):
        parse_field("Fp(9)")


def test_fp_arithmetic():
    F5 = GF(5) if callable(GF) else parse_field("F5")
    a = TruncSeries([3, 1], 8, F5, exact=True)
    b = a.inverse()
    assert (a * b - TruncSeries.one(8, F5)).is_zero()


@given(coeffs, coeffs)
def test_product_commutes(a, b):
    assert poly(a) * poly(b) == poly(b) * poly(a)


@given(coeffs, coeffs, coeffs)
def test_product_distributes(a, b, c):
    x, y, z = series(a), series(b), series(c)
    assert x * (y + z) == x * y + x * z


@given(coeffs)
def test_inverse_of_unit(cs):
    if cs[0] == 0:
        cs = [1] + cs
    s = series(cs)
    assert (s * s.inverse() - TruncSeries.one(12)).is_zero()


def test_inverse_of_nonunit_is_laurent():
    s = series([0, 0, 2, 1])
    inv = s.inverse()
    assert isinstance(inv, LaurentTrunc)
    assert inv.valuation() == -2
    assert (s * inv - TruncSeries.one(12)).is_zero()


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisor):
        TruncSeries.zero(8).inverse()


def test_exactness_is_kept():
    a = poly([1, 2])
    assert (a * a).exact
    assert not (a * series([1, 1])).exact
    assert (a - a).is_exact_zero()
    assert not (series([1]) - series([1])).is_exact_zero()


def test_precision_of_products():
    # y^2 * (unknown beyond y^5) is known beyond y^7
    a = TruncSeries.monomial(2, 12)
    b = TruncSeries([1, 1], 5)
    assert (a * b).prec == 7


def test_json_roundtrip():
    s = TruncSeries([Fraction(1, 2), 0, 3], 9, QQ, exact=True)
    assert TruncSeries.from_json(s.to_json()) == s


def test_ring_inversion_formula():
    # (y^n - x g)^-1 = (y^n + x g) y^-2n
    s = QElem(LaurentTrunc.monomial(2, 16), LaurentTrunc(0, [-1, 1], 16))
    t = q_invert(s)
    one = s * t
    assert (one.a - LaurentTrunc.one(16)).is_zero() and one.b.is_zero()


def _mat(rows, prec=12):
    return SeriesMatrix(rows, prec, QQ)


def test_snf_certificate():
    A = _mat([[[0, 1], [0, 0, 1]], [[0, 0, 2], [1]], [0, [0, 1]]])
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.D
    assert is_unimodular(s.U) and is_unimodular(s.V)
    assert s.exponents == sorted(s.exponents)
    for t, e in enumerate(s.exponents):
        assert s.D[t, t] == TruncSeries.monomial(e, 12)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_property(entries):
    rows = [[[c, d] for c, d in zip(r, r[1:] + r[:1])] for r in entries]
    A = _mat(rows)
    try:
        s = smith_normal_form(A)
    except InsufficientPrecision:
        return
    assert s.U @ A @ s.V == s.D


def test_solve_linear_and_certificate():
    A = _mat([[[0, 1], 0], [0, 1]])
    beta = [TruncSeries([0, 0, 3], 12, exact=True), TruncSeries([5], 12, exact=True)]
    sol = solve_linear(A, beta)
    assert sol
    assert A @ sol.particular == beta
    bad = solve_linear(A, [TruncSeries([1], 12, exact=True), TruncSeries.zero(12)])
    assert not bad and bad.exponent == 1


def test_inverse_matrix():
    A = _mat([[1, [0, 1]], [0, 1]])
    assert A @ inverse(A) == SeriesMatrix.identity(2, 12)


def test_matrix_json():
    A = _mat([[0, 1], [[0, 1], "1/2"]])
    assert SeriesMatrix.from_json(A.to_json(), 12) == A
    with pytest.raises(ValueError):
        SeriesMatrix.from_json({"rows": 1})
