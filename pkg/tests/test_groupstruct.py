import pytest
from hypothesis import given, strategies as st

from ellcarm.arith import factorize
from ellcarm.curve import WeierstrassCurve
from ellcarm.ecpoint import ProjectivePoint, add_points, multiply_by_addition
from ellcarm.fpcurve import enumerate_points, walk_orders
from ellcarm.groupstruct import (
    GroupShape,
    count_order_two,
    exponent_mod_prime_power,
    group_shape,
    group_shape_exhaustive,
    is_double,
    is_double_mod_p,
    point_order,
)
from ellcarm.errors import UnsupportedCaseError

MULLER_N = 676258600736819377469073681570025709
MULLER = WeierstrassCurve.short(-3500, -98000)


@pytest.mark.parametrize(
    "A, B, p, eps",
    [(0, 80, 29, 30), (0, 80, 211, 15), (14, 6, 3, 2), (14, 6, 7, 2), (7, 3, 43, 42), (7, 3, 641, 657)],
)
def test_group_shape_examples(A, B, p, eps):
    s = group_shape(WeierstrassCurve.short(A, B), p)
    assert s.epsilon == eps
    assert s.delta * s.epsilon == s.order


def test_group_shape_rejects_inconsistent_factors():
    with pytest.raises(ValueError):
        GroupShape(7, 8, 2, 3)
    with pytest.raises(ValueError):
        GroupShape(11, 9, 3, 3)  # 3 does not divide p - 1


@given(st.integers(0, 40), st.integers(0, 40), st.sampled_from([5, 13, 17, 37, 41, 73, 97, 101, 193, 241, 257, 401]))
def test_group_shape_matches_exhaustive(A, B, p):
    if (4 * A**3 + 27 * B**2) % p == 0:
        return
    E = WeierstrassCurve.short(A, B)
    assert group_shape(E, p) == group_shape_exhaustive(E, p)


def _brute_order(xy, E, p):
    P = ProjectivePoint.affine(*xy, p)
    k, R = 1, P
    while not R.is_identity:
        R = add_points(R, P, E)
        k += 1
    return k


def test_point_order():
    E = WeierstrassCurve.short(-1056, 13552)
    assert point_order(None, E, 109, 110) == 1
    assert point_order((102, 0), E, 109, 110) == 2
    n = group_shape(E, 109).order
    for xy in enumerate_points(E, 109)[1::9]:
        k = point_order(xy, E, 109, n)
        assert n % k == 0 and k == _brute_order(xy, E, 109)


def test_exponent_examples():
    E80 = WeierstrassCurve.short(0, 80)
    assert exponent_mod_prime_power(E80, 29, 1).epsilon_N_p == 30
    # 29 does not divide #E(F_29), so the exponent picks up a factor 29
    assert exponent_mod_prime_power(E80, 29, 2).epsilon_N_p == 29 * 30


@pytest.mark.parametrize(
    "A, B, p, e, eps",
    # frozen from affine chord-tangent orders over Z/p^e, with both slope formulas
    [(3, 8, 5, 2, 25), (3, 8, 5, 3, 125), (1, 4, 19, 2, 361), (7, 3, 13, 2, 169)],
)
def test_exponent_by_lift_enumeration(A, B, p, e, eps):
    E = WeierstrassCurve.short(A, B)
    rec = exponent_mod_prime_power(E, p, e)
    assert rec.epsilon_N_p == eps
    n = group_shape(E, p).order
    assert (p ** (e - 1) * n) % rec.epsilon_N_p == 0


def test_exponent_out_of_range():
    E = WeierstrassCurve.short(1, 4)
    with pytest.raises(UnsupportedCaseError):
        exponent_mod_prime_power(E, 103, 2)  # anomalous, above the enumeration limit


def test_is_double_examples():
    P = ProjectivePoint.affine(84, 448, MULLER_N)
    assert is_double(P, MULLER, factorize(MULLER_N))
    assert is_double(ProjectivePoint.identity(7739), WeierstrassCurve.short(-1056, 13552), factorize(7739))


def _doubles(E, p):
    return {multiply_by_addition(2, ProjectivePoint.affine(*xy, p), E) for xy in enumerate_points(E, p)[1:]}


def test_order_two_point_in_cyclic_group():
    seen = {2: False, 0: False}
    for A in range(1, 30):
        for p in (11, 13, 17, 19, 23, 29):
            E = WeierstrassCurve.short(A, 1)
            if E.discriminant % p:
                s = group_shape(E, p)
                if s.delta != 1 or s.order % 2:
                    continue
                T = next(xy for xy in enumerate_points(E, p)[1:] if xy[1] == 0)
                expect = s.order % 4 == 0  # in Z/n the element n/2 is a double iff 4 | n
                assert is_double_mod_p(*T, E, p) == expect
                assert (ProjectivePoint.affine(*T, p) in _doubles(E, p)) == expect
                seen[s.order % 4] = True
    assert all(seen.values())


@given(st.integers(-10, 10), st.integers(-10, 10), st.sampled_from([5, 7, 11, 13, 17, 43, 71, 109]))
def test_is_double_matches_brute_force(A, B, p):
    if (4 * A**3 + 27 * B**2) % p == 0:
        return
    E = WeierstrassCurve.short(A, B)
    doubles = _doubles(E, p)
    for xy in enumerate_points(E, p)[1:]:
        assert is_double_mod_p(*xy, E, p) == (ProjectivePoint.affine(*xy, p) in doubles)


def test_count_order_two_examples():
    assert count_order_two(WeierstrassCurve.short(-1056, 13552), 109) >= 1
    assert count_order_two(WeierstrassCurve.short(-1, 0), 7) == 3
    # x^3 + x + 1 takes the values 1, 3, 1, 1, 4 on F_5
    assert count_order_two(WeierstrassCurve.short(1, 1), 5) == 0


@given(st.integers(-10, 10), st.integers(-10, 10), st.sampled_from([5, 7, 11, 13, 97]))
def test_count_order_two_matches_orders(A, B, p):
    if (4 * A**3 + 27 * B**2) % p == 0:
        return
    E = WeierstrassCurve.short(A, B)
    order, _ = walk_orders(E, p)
    assert count_order_two(E, p) == sum(1 for k in order.values() if k == 2)
