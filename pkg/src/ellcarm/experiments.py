"""Experiments on traces: the Deuring census, density sampling, lemma scans."""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .arith import crt_combine, is_prime, primes_between
from .curve import WeierstrassCurve, has_good_reduction
from .lseries import count_points, squares_mask, trace_of_frobenius

__all__ = [
    "TraceCensus",
    "trace_census",
    "hurwitz_class_number",
    "batch_traces",
    "DensityEstimate",
    "sample_density",
    "LemmaScanReport",
    "verify_divisibility_lemmas",
    "TrichotomyReport",
    "verify_anomalous_trichotomy",
    "census_csv",
    "density_csv",
]


def hurwitz_class_number(D: int) -> Fraction:
    """H(D): reduced forms (a, b, c) of discriminant D, primitive or not.

    Forms proportional to x^2 + y^2 count 1/2 and forms proportional to
    x^2 + xy + y^2 count 1/3.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    n = -D
    total = Fraction(0)
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if a == c and b == 0:
                total += Fraction(1, 2)
            elif a == b == c:
                total += Fraction(1, 3)
            else:
                total += 1
        a += 1
    return total


def _admissible_traces(p: int) -> range:
    r = isqrt(4 * p)
    if r * r == 4 * p:
        r -= 1
    return range(-r, r + 1)


def batch_traces(p: int, A: np.ndarray, B: np.ndarray, max_cells: int = 1 << 22) -> np.ndarray:
    """a_p for many short curves y^2 = x^3 + A x + B over one prime p > 3."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    x = np.arange(p, dtype=np.int64)
    cube = x * x % p * x % p
    mask = squares_mask(p)
    out = np.empty(len(A), dtype=np.int64)
    rows = max(1, max_cells // p)
    for lo in range(0, len(A), rows):
        a, b = A[lo:lo + rows, None], B[lo:lo + rows, None]
        v = (cube[None, :] + a * x[None, :] + b) % p
        chi = 2 * mask[v].sum(axis=1) - (v != 0).sum(axis=1)
        out[lo:lo + rows] = -chi
    return out


@dataclass(frozen=True)
class TraceCensus:
    """Isomorphism classes of curves over F_p, by trace.

    ``classes[t]`` is the plain number of classes with trace t and
    ``weighted[t]`` sums 2/#Aut over them; ``curves[t]`` counts pairs (A, B).
    """

    p: int
    classes: dict
    weighted: dict
    curves: dict

    @property
    def total_curves(self) -> int:
        return sum(self.curves.values())


def trace_census(p: int) -> TraceCensus:
    """Every nonsingular y^2 = x^3 + Ax + B over F_p, grouped by u^4/u^6 scaling."""
    if not is_prime(p) or p <= 3:
        raise ValueError(f"census needs a prime p > 3, got {p}")
    A, B = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    A, B = A.ravel().astype(np.int64), B.ravel().astype(np.int64)
    good = (4 * A**3 + 27 * B**2) % p != 0
    A, B = A[good], B[good]
    traces = batch_traces(p, A, B)
    # canonical representative: least code over the orbit (u^4 A, u^6 B)
    code = A * p + B
    canon = code.copy()
    stab = np.zeros(len(A), dtype=np.int64)
    for u in range(1, p):
        u4, u6 = pow(u, 4, p), pow(u, 6, p)
        c = (u4 * A % p) * p + (u6 * B % p)
        np.minimum(canon, c, out=canon)
        stab += c == code
    classes, weighted, curves = Counter(), defaultdict(Fraction), Counter()
    for t in traces:
        curves[int(t)] += 1
    seen = set()
    for k in range(len(A)):
        key = int(canon[k])
        if key in seen:
            continue
        seen.add(key)
        t = int(traces[k])
        classes[t] += 1
        weighted[t] += Fraction(2, int(stab[k]))
    ts = _admissible_traces(p)
    return TraceCensus(
        p,
        {t: classes.get(t, 0) for t in ts},
        {t: weighted.get(t, Fraction(0)) for t in ts},
        {t: curves.get(t, 0) for t in ts},
    )


def census_csv(censuses) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "t", "class_count", "weighted_class_count", "hurwitz_value", "curve_count"])
    for c in censuses:
        for t in c.classes:
            w.writerow([c.p, t, c.classes[t], str(c.weighted[t]), str(hurwitz_class_number(t * t - 4 * c.p)), c.curves[t]])
    return buf.getvalue()


@dataclass(frozen=True)
class DensityEstimate:
    M: int
    trials: int
    conditioned_successes: int
    anomalous: int
    rng_seed: int
    checked_orders: int = 0

    @property
    def anomalous_fraction(self) -> float:
        if self.conditioned_successes == 0:
            return 0.0
        return self.anomalous / self.conditioned_successes


def _random_good_curves(p: int, k: int, rng: np.random.Generator):
    A = rng.integers(0, p, size=k)
    B = rng.integers(0, p, size=k)
    bad = (4 * A**3 + 27 * B**2) % p == 0
    while bad.any():
        n = int(bad.sum())
        A[bad] = rng.integers(0, p, size=n)
        B[bad] = rng.integers(0, p, size=n)
        bad = (4 * A**3 + 27 * B**2) % p == 0
    return A, B


def sample_density(M: int, trials: int, seed: int = 0, batch: int = 1 << 16) -> DensityEstimate:
    """Monte Carlo estimate of Pr[a_p = a_q = 1 | both orders divide N + 1 - a_N].

    Each trial draws distinct primes p, q in [5, M] and independent uniform
    nonsingular curves mod p and mod q, which by the Chinese remainder
    theorem is a uniform curve mod N = pq with good reduction at both.
    ``trials`` counts raw draws, before conditioning. For every accepted
    anomalous draw the glued curve mod N is rebuilt and its order mod p and
    mod q recounted, and the product is checked against N + 1 - a_N.
    """
    if M < 7:
        raise ValueError("M must be at least 7")
    primes = np.array(primes_between(5, M), dtype=np.int64)
    rng = np.random.default_rng(seed)
    accepted = anomalous = checked = 0
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        done += k
        i = rng.integers(0, len(primes), size=k)
        j = rng.integers(0, len(primes) - 1, size=k)
        j = np.where(j >= i, j + 1, j)  # uniform over ordered distinct pairs
        p, q = primes[i], primes[j]
        ap = np.empty(k, dtype=np.int64)
        aq = np.empty(k, dtype=np.int64)
        Ap, Bp = np.empty(k, dtype=np.int64), np.empty(k, dtype=np.int64)
        Aq, Bq = np.empty(k, dtype=np.int64), np.empty(k, dtype=np.int64)
        for ell in np.unique(np.concatenate([p, q])):
            ell = int(ell)
            for sel, Aa, Bb, out in ((p == ell, Ap, Bp, ap), (q == ell, Aq, Bq, aq)):
                n = int(sel.sum())
                if n:
                    a, b = _random_good_curves(ell, n, rng)
                    Aa[sel], Bb[sel] = a, b
                    out[sel] = batch_traces(ell, a, b)
        X = p * q + 1 - ap * aq
        ok = (X % (p + 1 - ap) == 0) & (X % (q + 1 - aq) == 0)
        anom = ok & (ap == 1) & (aq == 1)
        accepted += int(ok.sum())
        anomalous += int(anom.sum())
        for idx in np.flatnonzero(anom):
            pp, qq = int(p[idx]), int(q[idx])
            N = pp * qq
            A, _ = crt_combine([(int(Ap[idx]), pp), (int(Aq[idx]), qq)])
            B, _ = crt_combine([(int(Bp[idx]), pp), (int(Bq[idx]), qq)])
            E = WeierstrassCurve.short(A, B)
            order = count_points(E, pp) * count_points(E, qq)
            if order != N + 1 - int(ap[idx]) * int(aq[idx]):
                raise AssertionError(f"#E(Z/{N}Z) = {order} differs from N + 1 - a_N for {E}")
            checked += 1
    return DensityEstimate(M, trials, accepted, anomalous, seed, checked)


def density_csv(estimates) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["M", "trials", "accepted", "anomalous", "anomalous_fraction", "seed"])
    for e in estimates:
        w.writerow([e.M, e.trials, e.conditioned_successes, e.anomalous, f"{e.anomalous_fraction:.6f}", e.rng_seed])
    return buf.getvalue()


# exhaustive scans of the divisibility lemmas

@dataclass
class LemmaScanReport:
    q_max: int
    tuples: int = 0
    hypothesis_tuples: int = 0
    parametrized_pairs: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _hasse(p: int) -> np.ndarray:
    r = isqrt(4 * p)
    return np.arange(-r, r + 1, dtype=np.int64)


def verify_divisibility_lemmas(q_max: int) -> LemmaScanReport:
    """Enumerate (p, a_p, q, a_q) with 5 <= p < q <= q_max inside the Hasse bounds.

    Checks, for every tuple:
    1. when (q + 1 - a_q) | (pq + 1 - a_p a_q): a_q != 0, and a_q != 1 unless a_p = a_q = 1;
    2. the two ways of writing the pair of divisibility conditions agree;
    3. within each (q, a_q), every (p, a_p) with
       (q + 1 - a_q) | (1 - a_p a_q - p + p a_q) comes from the first such
       pair through integers k, alpha with
       a_p = a_p0 + k m + (1 - a_q) alpha and p = p0 + k m - a_q alpha, m = q + 1 - a_q.
    """
    if q_max > 500:
        raise ValueError("scan is exhaustive; keep q_max <= 500")
    rep = LemmaScanReport(q_max)
    primes = primes_between(5, q_max)
    for qi, q in enumerate(primes):
        aq = _hasse(q)
        m = q + 1 - aq
        base: dict[int, tuple[int, int]] = {}
        for p in primes[:qi]:
            ap = _hasse(p)[:, None]
            X = p * q + 1 - ap * aq[None, :]
            n = p + 1 - ap
            rep.tuples += X.size
            hyp = X % m[None, :] == 0
            rep.hypothesis_tuples += int(hyp.sum())
            bad = hyp & ((aq[None, :] == 0) | ((aq[None, :] == 1) & (ap != 1)))
            for r, c in zip(*np.nonzero(bad)):
                rep.counterexamples.append(("apaq", p, int(ap[r, 0]), q, int(aq[c])))
            Dp = 1 - ap * aq[None, :] - q + q * ap
            Dq = 1 - ap * aq[None, :] - p + p * aq[None, :]
            lhs = (X % n == 0) & hyp
            rhs = (Dp % n == 0) & (Dq % m[None, :] == 0)
            for r, c in zip(*np.nonzero(lhs != rhs)):
                rep.counterexamples.append(("equivalence", p, int(ap[r, 0]), q, int(aq[c])))
            for r, c in zip(*np.nonzero(Dq % m[None, :] == 0)):
                a_q, a_p = int(aq[c]), int(ap[r, 0])
                if a_q not in base:
                    base[a_q] = (p, a_p)
                    continue
                p0, a0 = base[a_q]
                mm = q + 1 - a_q
                D0 = 1 - a0 * a_q - p0 + p0 * a_q
                D = 1 - a_p * a_q - p + p * a_q
                rep.parametrized_pairs += 1
                if (D0 - D) % mm:
                    rep.counterexamples.append(("k", p, a_p, q, a_q))
                    continue
                k = (D0 - D) // mm
                dx, dy = a_p - a0 - k * mm, p - p0 - k * mm
                # dx = (1 - a_q) alpha, dy = -a_q alpha
                if a_q != 1:
                    alpha, rem = divmod(dx, 1 - a_q)
                    good = rem == 0 and dy == -a_q * alpha
                else:
                    alpha, rem = divmod(-dy, a_q)
                    good = rem == 0 and dx == (1 - a_q) * alpha
                if not good:
                    rep.counterexamples.append(("alpha", p, a_p, q, a_q))
    return rep


@dataclass
class TrichotomyReport:
    curve: WeierstrassCurve
    M: int
    korselt_numbers: list = field(default_factory=list)
    branches: Counter = field(default_factory=Counter)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def type1_pair(p: int, ap: int, q: int, aq: int) -> bool:
    """Type I Korselt condition for the squarefree product pq."""
    N, aN = p * q, ap * aq
    X = N + 1 - aN
    for r, ar in ((p, ap), (q, aq)):
        if X % (r + 1 - ar):
            return False
        if (ar - 1) % r == 0 and (aN - 1) % r:
            return False
    return True


def verify_anomalous_trichotomy(E: WeierstrassCurve, M: int) -> TrichotomyReport:
    """Every type I N = pq with p < q <= M has p <= 13, both primes anomalous, or p >= sqrt(q)/16."""
    if M > 10**4:
        raise ValueError("M must be at most 10^4")
    rep = TrichotomyReport(E, M)
    primes = [p for p in primes_between(5, M) if has_good_reduction(E, p)]
    ap = {p: trace_of_frobenius(E, p) for p in primes}
    for i, p in enumerate(primes):
        for q in primes[i + 1:]:
            if not type1_pair(p, ap[p], q, ap[q]):
                continue
            rep.korselt_numbers.append(p * q)
            if p <= 13:
                rep.branches["p<=13"] += 1
            elif ap[p] == 1 and ap[q] == 1:
                rep.branches["anomalous"] += 1
            elif 256 * p * p >= q:
                rep.branches["p>=sqrt(q)/16"] += 1
            else:
                rep.counterexamples.append((p, q, ap[p], ap[q]))
    return rep
