from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import Poly, discriminant as poly_disc, symbols

from ellcarm.curve import (
    WeierstrassCurve,
    cm_field,
    has_good_reduction,
    is_two_torsion_form,
    on_curve,
    parse_curve,
    reduce_mod,
    short_model,
)
from ellcarm.errors import BadReductionError, SingularCurveError

MULLER_N = 676258600736819377469073681570025709


def test_discriminant_examples():
    assert WeierstrassCurve.short(7, 3).discriminant == -25840
    assert WeierstrassCurve.short(-5, 0).discriminant == 8000
    with pytest.raises(SingularCurveError):
        WeierstrassCurve.short(0, 0)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_short_discriminant_is_16_times_cubic_discriminant(A, B):
    x = symbols("x")
    d = int(poly_disc(Poly(x**3 + A * x + B, x)))
    if d == 0:
        with pytest.raises(SingularCurveError):
            WeierstrassCurve.short(A, B)
    else:
        assert WeierstrassCurve.short(A, B).discriminant == 16 * d


@given(st.integers(-30, 30), st.integers(-30, 30), st.sampled_from([5, 7, 11, 13, 17, 19, 23]))
def test_good_reduction_iff_cubic_squarefree_mod_p(A, B, p):
    if 4 * A**3 + 27 * B**2 == 0:
        return
    E = WeierstrassCurve.short(A, B)
    # a repeated root mod p is a common root of f and f'
    repeated = any((x**3 + A * x + B) % p == 0 and (3 * x * x + A) % p == 0 for x in range(p))
    assert has_good_reduction(E, p) == (not repeated)


def test_good_reduction_examples():
    assert has_good_reduction(WeierstrassCurve.short(7, 3), 43)
    assert not has_good_reduction(WeierstrassCurve.short(7, 3), 2)
    assert not has_good_reduction(WeierstrassCurve.short(-5, 0), 5)


def test_reduce_mod():
    r = reduce_mod(WeierstrassCurve.short(-1056, 13352), 7739)
    assert r.residues == (0, 0, 0, -1056 % 7739, 13352 % 7739)
    reduce_mod(WeierstrassCurve.short(0, 80), 6119)
    with pytest.raises(BadReductionError) as info:
        reduce_mod(WeierstrassCurve.short(-5, 0), 10)
    assert info.value.prime == 2  # 8000 = 2^6 5^3, so 2 is found first
    with pytest.raises(BadReductionError) as info:
        reduce_mod(WeierstrassCurve.short(-5, 0), 15)
    assert info.value.prime == 5


def test_two_torsion_form():
    E = WeierstrassCurve.short(-1056, 13552)
    assert is_two_torsion_form(E, 102, 0, 109)
    assert is_two_torsion_form(WeierstrassCurve.short(-3500, -98000), 513078336047534294929224848649215641, 0, MULLER_N)
    assert not is_two_torsion_form(E, 33, 121, 7739)


def test_parse_curve():
    assert parse_curve("[-1056,13552]") == WeierstrassCurve.short(-1056, 13552)
    assert parse_curve(" [1, 0, 1, -2, 3] ") == WeierstrassCurve(1, 0, 1, -2, 3)
    assert str(parse_curve("[7,3]")) == "[7,3]"
    for bad in ["[1,2,3]", "x^3", ""]:
        with pytest.raises(ValueError):
            parse_curve(bad)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_parse_round_trip(a1, a2, a3, a4, a6):
    try:
        E = WeierstrassCurve(a1, a2, a3, a4, a6)
    except SingularCurveError:
        return
    assert parse_curve(str(E)) == E


def test_on_curve_examples():
    E = WeierstrassCurve.short(-3500, -98000)
    assert on_curve(E, 84, 448, MULLER_N)
    assert not on_curve(E, 84, 884, MULLER_N)
    assert not on_curve(WeierstrassCurve.short(-1056, 13352), 33, 121, 7739)
    assert on_curve(WeierstrassCurve.short(-1056, 13552), 33, 121, 7739)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5),
       st.sampled_from([5, 7, 11, 13]))
def test_short_model_maps_points_to_points(a1, a2, a3, a4, a6, p):
    try:
        E = WeierstrassCurve(a1, a2, a3, a4, a6)
    except SingularCurveError:
        return
    m = short_model(E, p)
    for x in range(p):
        for y in range(p):
            if on_curve(E, x, y, p):
                X, Y = m.to_short(x, y)
                assert (Y * Y - X**3 - m.A * X - m.B) % p == 0
                assert m.from_short_projective(X, Y, 1) == (x, y, 1)


def test_cm_field():
    assert cm_field(WeierstrassCurve.short(-3500, -98000)) == 7
    assert cm_field(WeierstrassCurve.short(-1056, 13552)) == 11
    assert cm_field(WeierstrassCurve.short(0, 80)) == 3
    assert cm_field(WeierstrassCurve.short(-5, 0)) == 1
    assert cm_field(WeierstrassCurve.short(7, 3)) is None
    assert WeierstrassCurve.short(-1056, 13552).j_invariant == Fraction(-32768)
