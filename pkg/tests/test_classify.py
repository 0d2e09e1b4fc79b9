import json

import pytest
from hypothesis import given, strategies as st

from ellcarm.arith import crt_combine, factorize, jacobi, primes_between
from ellcarm.classify import (
    carmichael_by_enumeration,
    classify_report,
    is_elliptic_carmichael,
    is_elliptic_pseudoprime,
    is_euler_elliptic_carmichael,
    is_euler_elliptic_pseudoprime,
    is_gordon_elliptic_pseudoprime,
    is_korselt_type1,
    is_korselt_type2,
    is_strong_elliptic_carmichael,
    is_strong_elliptic_pseudoprime,
    korselt1_euler_equivalence,
    korselt1_strong_equivalence,
    prepare,
)
from ellcarm.curve import WeierstrassCurve, has_good_reduction
from ellcarm.ecpoint import ProjectivePoint
from ellcarm.errors import BadReductionError, PreconditionError, UndefinedPredicateError, UnsupportedCaseError
from ellcarm.experiments import type1_pair
from ellcarm.fpcurve import enumerate_points
from ellcarm.lseries import trace_of_frobenius

MULLER_N = 676258600736819377469073681570025709
MULLER = WeierstrassCurve.short(-3500, -98000)
E7739 = WeierstrassCurve.short(-1056, 13552)
E80 = WeierstrassCurve.short(0, 80)
E73 = WeierstrassCurve.short(7, 3)
E146 = WeierstrassCurve.short(14, 6)
E14 = WeierstrassCurve.short(1, 4)  # anomalous at 19, 103, 107


def test_elliptic_pseudoprime_examples():
    assert is_elliptic_pseudoprime(MULLER_N, MULLER, (84, 448))
    v = is_elliptic_pseudoprime(9090870127122419, WeierstrassCurve.short(-5, 0), (5, 10))
    assert not v and v.witness["failing_primes"] == [997, 1289, 3851, 30113]
    assert is_elliptic_pseudoprime(7739, E7739, (33, 121))


def test_gordon_examples():
    assert is_gordon_elliptic_pseudoprime(MULLER_N, MULLER, (84, 448), d=7)
    v = is_gordon_elliptic_pseudoprime(7739, E7739, (33, 121))
    assert v and v.witness["d"] == 11 and v.witness["N_mod_4"] == 3
    # 31 * 37 = 1147 has (-3/1147) = +1, so the test answers false without multiplying
    assert jacobi(-3, 1147) == 1
    pts = enumerate_points(E80, 31)[1], enumerate_points(E80, 37)[1]
    x, _ = crt_combine([(pts[0][0], 31), (pts[1][0], 37)])
    y, _ = crt_combine([(pts[0][1], 31), (pts[1][1], 37)])
    v = is_gordon_elliptic_pseudoprime(1147, E80, (x, y))
    assert not v and v.witness["jacobi"] == 1


def test_gordon_needs_cm_and_coprime_to_six():
    with pytest.raises(PreconditionError):
        is_gordon_elliptic_pseudoprime(27563, E73, (0, 0))
    with pytest.raises(PreconditionError):
        is_gordon_elliptic_pseudoprime(3 * 7739, E7739, (33, 121), d=11)


def test_euler_examples():
    v = is_euler_elliptic_pseudoprime(7739, E7739, (33, 121))
    assert v and v.witness["branch"] == "not-double"
    assert not is_euler_elliptic_pseudoprime(MULLER_N, MULLER, (84, 448))
    assert is_euler_elliptic_pseudoprime(7739, E7739, ProjectivePoint.identity(7739))


def test_strong_examples():
    v = is_strong_elliptic_pseudoprime(MULLER_N, MULLER, (84, 448))
    # N + 1 = 2t with t odd, and tP is the affine 2-torsion point (513078..., 0)
    assert v and v.witness["branch"] == "r" and v.witness["r"] == 0
    assert not is_strong_elliptic_pseudoprime(7739, E7739, (33, 121))
    assert not is_strong_elliptic_pseudoprime(32759, MULLER, (84, 448))


def test_off_curve_point_is_named():
    with pytest.raises(PreconditionError, match=r"\(84, 884\)"):
        is_elliptic_pseudoprime(32759, MULLER, (84, 884))


def test_korselt_type1_examples():
    assert is_korselt_type1(27563, E73)
    assert is_korselt_type1(19 * 103, E14)
    v = is_korselt_type1(21, E146)
    assert not v and v.witness["prime"] == 3 and "4 does not divide 22" in v.witness["condition"]


def test_korselt_type2_examples():
    assert is_korselt_type2(6119, E80)
    assert is_korselt_type2(27563, E73)
    v = is_korselt_type2(21, E146)
    assert v.witness["exponents"] == {3: 2, 7: 2} and v.holds  # 2 | 22 at both primes
    assert is_elliptic_carmichael(21, E146)
    with pytest.raises(UnsupportedCaseError):
        is_elliptic_carmichael(2 * 21, E146)


def test_euler_carmichael_examples():
    v = is_euler_elliptic_carmichael(6119, E80)
    assert v and v.witness["exponents"] == {29: 30, 211: 15} and v.witness["half_multiplier"] == 3060
    v = is_euler_elliptic_carmichael(27563, E73)
    assert not v and v.witness["half_multiplier"] == 13797 and v.witness["failing_primes"] == [43]
    v = is_euler_elliptic_carmichael(21, E146)
    assert not v and v.witness["half_multiplier"] == 11


def test_strong_carmichael_examples():
    assert is_strong_elliptic_carmichael(19 * 107, E14)
    assert not is_strong_elliptic_carmichael(6119, E80)
    with pytest.raises(PreconditionError):
        is_strong_elliptic_carmichael(2 * 19 * 107, E14)


def test_korselt1_equivalence_examples():
    v = korselt1_euler_equivalence(27563, E73)
    assert not v and v.witness["branches"][43] is None
    assert not korselt1_strong_equivalence(27563, E73)  # 43 + 1 - 2 = 42 is even
    assert korselt1_strong_equivalence(103 * 107, E14)
    with pytest.raises(PreconditionError):
        korselt1_strong_equivalence(21, E146)


def _type1_numbers(E, bound):
    primes = [p for p in primes_between(5, bound // 5) if has_good_reduction(E, p)]
    a = {p: trace_of_frobenius(E, p) for p in primes}
    out = []
    for i, p in enumerate(primes):
        for q in primes[i + 1:]:
            if p * q > bound:
                break
            if type1_pair(p, a[p], q, a[q]):
                out.append(p * q)
    return out


@pytest.mark.parametrize("E", [E73, E14, WeierstrassCurve.short(2, 3), WeierstrassCurve.short(-1, 1)])
def test_type1_equivalences_over_search(E):
    found = _type1_numbers(E, 10**5)
    assert found
    for N in found:
        ctx = prepare(N, E)
        assert is_korselt_type1(N, E, ctx)
        if ctx.multiplier % 2 == 0:
            assert korselt1_euler_equivalence(N, E, ctx).holds == is_euler_elliptic_carmichael(N, E, ctx).holds
        assert korselt1_strong_equivalence(N, E, ctx).holds == is_strong_elliptic_carmichael(N, E, ctx).holds


def test_enumeration_oracle_on_examples():
    assert carmichael_by_enumeration(6119, E80) == {"elliptic": True, "euler": True, "strong": False}
    assert carmichael_by_enumeration(27563, E73) == {"elliptic": True, "euler": False, "strong": False}
    assert carmichael_by_enumeration(21, E146) == {"elliptic": True, "euler": False, "strong": False}


def test_prepare_rejects():
    with pytest.raises(PreconditionError, match="at least two distinct prime factors"):
        prepare(5366089, MULLER)
    with pytest.raises(PreconditionError, match="at least two distinct prime factors"):
        prepare(49, E73)
    with pytest.raises(BadReductionError) as info:
        prepare(17 * 43, E73)
    assert info.value.prime == 17


def test_context_mismatch():
    ctx = prepare(27563, E73)
    with pytest.raises(ValueError):
        is_korselt_type1(21, E146, ctx)


def test_report_examples():
    r = classify_report(MULLER_N, MULLER, (84, 448)).to_dict()
    assert (r["elliptic_pp"], r["strong_pp"], r["euler_pp"]) == (True, True, False)
    assert r["N"] == str(MULLER_N)
    r = classify_report(7739, E7739, (33, 121)).to_dict()
    assert r["euler_pp"] is True and r["strong_pp"] is False
    with pytest.raises(PreconditionError, match="at least two distinct prime factors"):
        classify_report(5366089, MULLER)


def _no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(_no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_floats(v) for v in obj)
    return not isinstance(obj, int) or isinstance(obj, bool)


def test_report_json_uses_decimal_strings():
    line = classify_report(MULLER_N, MULLER, (84, 448)).to_json_line()
    assert "\n" not in line
    obj = json.loads(line)
    assert _no_floats(obj)
    assert obj["witnesses"]["elliptic_pp"]["multiplier"] == str(MULLER_N + 1)


def test_report_marks_undefined_predicates():
    # look for an odd N + 1 - a_N, where the Euler variants are undefined
    E = WeierstrassCurve.short(1, 1)
    for N in (35, 55, 65, 77, 85, 91, 95, 115, 119, 133):
        if not all(has_good_reduction(E, p) for p in factorize(N).primes):
            continue
        ctx = prepare(N, E)
        if ctx.multiplier % 2:
            break
    else:
        pytest.fail("no odd multiplier in the sample")
    with pytest.raises(UndefinedPredicateError):
        is_euler_elliptic_carmichael(N, E, ctx)
    r = classify_report(N, E).to_dict()
    assert r["euler_carmichael"] == "n/a" and "odd" in r["reasons"]["euler_carmichael"]


def _affine_points_mod(E, N):
    f = factorize(N)
    comps = [enumerate_points(E, p)[1:] for p in f.primes]
    out = [[]]
    for p, pts in zip(f.primes, comps):
        out = [acc + [(p, P)] for acc in out for P in pts]
    for combo in out:
        x, _ = crt_combine([(P[0], p) for p, P in combo])
        y, _ = crt_combine([(P[1], p) for p, P in combo])
        yield x, y


@given(st.integers(0, 8), st.integers(0, 8), st.sampled_from([35, 55, 77, 91, 143, 187, 221, 5 * 7 * 11]), st.integers(0, 10**6))
def test_strong_and_euler_imply_elliptic(A, B, N, seed):
    if 4 * A**3 + 27 * B**2 == 0:
        return
    E = WeierstrassCurve.short(A, B)
    if not all(has_good_reduction(E, p) for p in factorize(N).primes):
        return
    ctx = prepare(N, E)
    pts = list(_affine_points_mod(E, N))
    if not pts:
        return
    P = pts[seed % len(pts)]
    ell = is_elliptic_pseudoprime(N, E, P, ctx).holds
    if is_strong_elliptic_pseudoprime(N, E, P, ctx):
        assert ell
    if ctx.multiplier % 2 == 0 and is_euler_elliptic_pseudoprime(N, E, P, ctx):
        assert ell
