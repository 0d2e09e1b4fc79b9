from fractions import Fraction
from math import isqrt

import numpy as np
import pytest

from ellcarm.arith import primes_between
from ellcarm.curve import WeierstrassCurve
from ellcarm.experiments import (
    batch_traces,
    census_csv,
    density_csv,
    hurwitz_class_number,
    sample_density,
    trace_census,
    type1_pair,
    verify_anomalous_trichotomy,
    verify_divisibility_lemmas,
)
from ellcarm.lseries import count_points_naive


@pytest.mark.parametrize(
    "n, H",
    # classical table of Hurwitz class numbers H(n), D = -n
    [(3, "1/3"), (4, "1/2"), (7, "1"), (8, "1"), (11, "1"), (12, "4/3"), (15, "2"),
     (16, "3/2"), (19, "1"), (20, "2"), (23, "3"), (24, "2"), (27, "4/3"), (28, "2")],
)
def test_hurwitz_table(n, H):
    assert hurwitz_class_number(-n) == Fraction(H)


@pytest.mark.parametrize("p", primes_between(3, 300))
def test_hurwitz_trace_sum(p):
    # sum over |t| < 2 sqrt(p) of H(4p - t^2) is 2p
    r = isqrt(4 * p)
    assert sum(hurwitz_class_number(t * t - 4 * p) for t in range(-r, r + 1) if t * t < 4 * p) == 2 * p


@pytest.mark.parametrize("D", [0, 5, -2, -5])
def test_hurwitz_rejects(D):
    with pytest.raises(ValueError):
        hurwitz_class_number(D)


def test_batch_traces_matches_naive():
    p = 31
    A = np.arange(0, 31, dtype=np.int64)
    B = (A * 7 + 3) % p
    keep = (4 * A**3 + 27 * B**2) % p != 0
    A, B = A[keep], B[keep]
    got = batch_traces(p, A, B)
    want = [p + 1 - count_points_naive(WeierstrassCurve.short(int(a), int(b)), p) for a, b in zip(A, B)]
    assert list(got) == want


def test_census_examples():
    c5 = trace_census(5)
    assert c5.total_curves == 5 * 5 - 5
    c7 = trace_census(7)
    assert all(t * t <= 28 for t in c7.classes)
    c13 = trace_census(13)
    for t, w in c13.weighted.items():
        assert w == hurwitz_class_number(t * t - 52)
    with pytest.raises(ValueError):
        trace_census(3)


def test_census_csv_rows():
    text = census_csv([trace_census(13)])
    rows = [r.split(",") for r in text.strip().splitlines()]
    assert rows[0][:5] == ["p", "t", "class_count", "weighted_class_count", "hurwitz_value"]
    assert all(r[3] == r[4] for r in rows[1:])
    assert len(rows) == 1 + 15


def test_density_smallest_bound_and_determinism():
    e = sample_density(7, 2000, seed=3)
    assert e.trials == 2000 and 0 <= e.anomalous <= e.conditioned_successes
    assert sample_density(7, 2000, seed=3) == e
    with pytest.raises(ValueError):
        sample_density(6, 10)


def test_density_checks_every_anomalous_sample():
    e = sample_density(200, 100_000, seed=11)
    assert e.anomalous > 0 and e.checked_orders == e.anomalous
    assert density_csv([e]).splitlines()[1].startswith("200,100000,")


def test_divisibility_lemmas_small():
    rep = verify_divisibility_lemmas(50)
    assert rep.ok and rep.tuples > 0 and rep.parametrized_pairs > 0
    with pytest.raises(ValueError):
        verify_divisibility_lemmas(501)


def test_anomalous_pair_is_type1():
    # p + 1 - 1 = p and q divide pq + 1 - 1
    assert type1_pair(5, 1, 7, 1)
    assert not type1_pair(5, 2, 7, 1)


def test_trichotomy():
    rep = verify_anomalous_trichotomy(WeierstrassCurve.short(7, 3), 2000)
    assert rep.ok and 27563 in rep.korselt_numbers
    assert rep.branches["p>=sqrt(q)/16"] >= 1  # 43 >= sqrt(641)/16
    rep = verify_anomalous_trichotomy(WeierstrassCurve.short(1, 4), 120)
    assert rep.ok and rep.branches["anomalous"] == 3  # 19 * 103, 19 * 107, 103 * 107
