"""Traces of Frobenius, the coefficients a_{p^e}, and their product a_N.

Point counts use the character sum #E(F_p) = p + 1 + sum_x chi(D(x)), where
D(x) is the discriminant of the quadratic in y at abscissa x. For short
curves D(x) = 4(x^3 + Ax + B), so chi(D) = chi(x^3 + Ax + B). The sum is
evaluated with numpy against a table of squares mod p.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt, prod

import numpy as np

from .arith import Factorization, factorize, is_prime, primes_between
from .curve import WeierstrassCurve, has_good_reduction
from .fpcurve import fp_add, fp_mul, fp_neg, random_point
from .errors import BadReductionError, PreconditionError

__all__ = [
    "TraceEntry",
    "TraceTable",
    "count_points",
    "count_points_naive",
    "trace_of_frobenius",
    "bsgs_candidates",
    "bsgs_group_order",
    "prime_power_coefficient",
    "a_N",
    "trace_table",
    "is_anomalous",
    "find_anomalous",
    "squares_mask",
    "thread_count",
]

CHUNK = 1 << 20
BSGS_THRESHOLD = 10**5


def thread_count() -> int:
    """Worker cap from ELLCARM_THREADS, default 1."""
    try:
        return max(1, int(os.environ.get("ELLCARM_THREADS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=32)
def squares_mask(p: int) -> np.ndarray:
    """Boolean array s with s[v] true iff v is a nonzero square mod p."""
    mask = np.zeros(p, dtype=bool)
    y = np.arange(1, (p + 1) // 2, dtype=np.int64)
    mask[(y * y) % p] = True
    return mask


def _chi_sum(E: WeierstrassCurve, p: int, lo: int, hi: int, mask: np.ndarray) -> int:
    x = np.arange(lo, hi, dtype=np.int64)
    a1, a2, a3, a4, a6 = (c % p for c in E.coefficients)
    x2 = x * x % p
    rhs = (x2 * x % p + a2 * x2 % p + a4 * x % p + a6) % p
    if a1 == 0 and a3 == 0:
        d = rhs
    else:
        lin = (a1 * x + a3) % p
        d = (lin * lin % p + 4 * rhs) % p
    nonzero = d != 0
    squares = int(np.count_nonzero(mask[d]))
    return 2 * squares - int(np.count_nonzero(nonzero))


def count_points(E: WeierstrassCurve, p: int) -> int:
    """#E(F_p), including the point at infinity."""
    if p == 2:
        return count_points_naive(E, p)
    mask = squares_mask(p)
    bounds = [(lo, min(lo + CHUNK, p)) for lo in range(0, p, CHUNK)]
    workers = min(thread_count(), len(bounds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _chi_sum(E, p, b[0], b[1], mask), bounds))
    else:
        parts = [_chi_sum(E, p, lo, hi, mask) for lo, hi in bounds]
    return p + 1 + sum(parts)


def count_points_naive(E: WeierstrassCurve, p: int) -> int:
    """#E(F_p) by trying every (x, y). Quadratic in p; meant for checks."""
    a1, a2, a3, a4, a6 = E.coefficients
    total = 1
    for x in range(p):
        r = (x**3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - r) % p == 0:
                total += 1
    return total


# Baby-step giant-step over the Hasse interval.

def _killers_in_window(P, E, p, lo, hi):
    """All k in [lo, hi] with kP = O, by baby-step giant-step."""
    width = hi - lo + 1
    s = isqrt(width) + 1
    baby = {}
    R = None
    for j in range(s):
        baby.setdefault(R, []).append(j)
        R = fp_add(R, P, E, p)
    step = fp_neg(R, E, p)  # -sP
    # k = lo + i*s + j with kP = O  <=>  jP = -(lo + i*s)P
    G = fp_neg(fp_mul(lo, P, E, p), E, p)
    found = []
    for i in range(s + 1):
        for j in baby.get(G, ()):
            k = lo + i * s + j
            if k <= hi:
                found.append(k)
        G = fp_add(G, step, E, p)
    return set(found)


def bsgs_candidates(E: WeierstrassCurve, p: int, seed: int = 0, max_points: int = 40) -> set[int]:
    """Integers in the Hasse interval that kill every one of a few random points.

    Stops as soon as a single candidate is left. A group of small exponent can
    leave several, so callers must handle a set.
    """
    if p < 5:
        raise PreconditionError("baby-step giant-step needs p >= 5")
    r = 2 * isqrt(p) + 2
    lo, hi = max(1, p + 1 - r), p + 1 + r
    rng = random.Random(hash((E.coefficients, p, seed)) & 0xFFFFFFFF)
    candidates = None
    for _ in range(max_points):
        ks = _killers_in_window(random_point(E, p, rng), E, p, lo, hi)
        candidates = ks if candidates is None else candidates & ks
        if len(candidates) == 1:
            break
    return candidates


def bsgs_group_order(E: WeierstrassCurve, p: int, seed: int = 0) -> int:
    """#E(F_p) without point counting; raises if random points cannot pin it down."""
    c = bsgs_candidates(E, p, seed)
    if len(c) != 1:
        raise RuntimeError(f"group order not isolated at p={p}: {sorted(c)[:5]}")
    return c.pop()


@lru_cache(maxsize=4096)
def _trace(E: WeierstrassCurve, p: int, verify: bool) -> int:
    n = count_points(E, p)
    if verify and p > BSGS_THRESHOLD:
        c = bsgs_candidates(E, p)
        if n not in c:
            raise AssertionError(f"point count {n} is not among BSGS candidates {sorted(c)[:5]} at p={p}")
    a = p + 1 - n
    assert a * a <= 4 * p, f"Hasse bound violated at p={p}"
    return a


def trace_of_frobenius(E: WeierstrassCurve, p: int, verify: bool = True) -> int:
    """a_p = p + 1 - #E(F_p) for a prime p of good reduction.

    For p above 10^5 the count is confirmed by a baby-step giant-step order
    computation unless ``verify`` is false.
    """
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if not has_good_reduction(E, p):
        raise BadReductionError(p)
    return _trace(E, p, verify)


def prime_power_coefficient(a_p: int, p: int, e: int, good: bool = True) -> int:
    """a_{p^e} from a_{p^e} = a_p a_{p^{e-1}} - [good] p a_{p^{e-2}}, a_1 = 1."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    prev, cur = 1, a_p  # a_{p^0}, a_{p^1}
    if e == 0:
        return 1
    eps = p if good else 0
    for _ in range(e - 1):
        prev, cur = cur, a_p * cur - eps * prev
    return cur


@dataclass(frozen=True)
class TraceEntry:
    p: int
    e: int
    a_p: int
    a_pe: int


@dataclass(frozen=True)
class TraceTable:
    curve: WeierstrassCurve
    N: int
    entries: tuple[TraceEntry, ...]

    @property
    def a_N(self) -> int:
        return prod(t.a_pe for t in self.entries)

    def a(self, p: int) -> int:
        for t in self.entries:
            if t.p == p:
                return t.a_p
        raise KeyError(p)

    @property
    def order_estimate(self) -> int:
        """N + 1 - a_N."""
        return self.N + 1 - self.a_N


def trace_table(E: WeierstrassCurve, N: int, factorization: Factorization | None = None) -> TraceTable:
    f = factorization or factorize(N)
    if f.value != N:
        raise ValueError("factorization does not match N")
    for p, _ in f:
        if not has_good_reduction(E, p):
            raise BadReductionError(p)
    entries = []
    for p, e in f:
        ap = trace_of_frobenius(E, p)
        entries.append(TraceEntry(p, e, ap, prime_power_coefficient(ap, p, e)))
    return TraceTable(E, N, tuple(entries))


def a_N(E: WeierstrassCurve, N: int, factorization: Factorization | None = None) -> int:
    return trace_table(E, N, factorization).a_N


def is_anomalous(E: WeierstrassCurve, p: int) -> bool:
    return trace_of_frobenius(E, p) == 1


def find_anomalous(E: WeierstrassCurve, p_min: int, p_max: int) -> list[int]:
    """Every anomalous prime of good reduction in [p_min, p_max]."""
    if p_min < 5:
        raise PreconditionError("anomalous search starts at p >= 5")
    return [p for p in primes_between(p_min, p_max)
            if has_good_reduction(E, p) and trace_of_frobenius(E, p) == 1]
