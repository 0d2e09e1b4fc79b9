"""Structure of E(F_p) and E(Z/p^e Z): invariant factors, exponents, halving."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, lcm

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .arith import Factorization, factorize, padic_order
from .curve import WeierstrassCurve, has_good_reduction, short_model
from .ecpoint import ProjectivePoint, scalar_mul
from .errors import BadReductionError, PreconditionError, UnsupportedCaseError
from .fpcurve import enumerate_points, fp_add, fp_mul, fp_neg, random_point, walk_orders
from .lseries import count_points

__all__ = [
    "GroupShape",
    "ExponentRecord",
    "group_shape",
    "group_shape_exhaustive",
    "point_order",
    "exponent_mod_prime_power",
    "is_double",
    "is_double_mod_p",
    "count_order_two",
    "roots_mod_p",
    "SignatureProfile",
    "signature_profile",
]

EXHAUSTIVE_LIMIT = 10**4


@dataclass(frozen=True)
class GroupShape:
    """E(F_p) is isomorphic to Z/delta x Z/epsilon."""

    p: int
    order: int
    delta: int
    epsilon: int

    def __post_init__(self):
        if self.delta * self.epsilon != self.order:
            raise ValueError("delta * epsilon must equal the group order")
        if self.epsilon % self.delta or (self.p - 1) % self.delta:
            raise ValueError(f"invalid invariant factors {self.delta}, {self.epsilon} at p={self.p}")


@dataclass(frozen=True)
class ExponentRecord:
    p: int
    e: int
    epsilon_N_p: int


def point_order(P, E: WeierstrassCurve, p: int, n_factorization: Factorization | int) -> int:
    """Least k > 0 with kP = O, given a multiple n of the order (or its factorization)."""
    f = n_factorization if isinstance(n_factorization, Factorization) else factorize(n_factorization)
    if fp_mul(f.value, P, E, p) is not None:
        raise PreconditionError(f"{f.value} does not annihilate {P}")
    k = f.value
    for ell, _ in f:
        while k % ell == 0 and fp_mul(k // ell, P, E, p) is None:
            k //= ell
    return k


def _discrete_log_member(Q, G, order_g: int, E, p) -> bool:
    """Whether Q lies in <G>, by baby-step giant-step over the order of G."""
    if Q is None:
        return True
    s = isqrt(order_g) + 1
    baby = {}
    R = None
    for j in range(s):
        baby.setdefault(R, j)
        R = fp_add(R, G, E, p)
    step = fp_neg(R, E, p)
    T = Q
    for _ in range(s + 1):
        if T in baby:
            return True
        T = fp_add(T, step, E, p)
    return False


def _ell_part_exponent(E, p, n, ell, v, rng, max_samples=200):
    """Certified exponent of the ell-primary part of E(F_p), or None.

    P1 is the sampled point of largest ell-power order ell^b. Once some sampled
    R has ell^c R in <P1> only for c with b + c = v, the subgroup <P1, R> is the
    whole ell-part, so its exponent is ell^b.
    """
    cofactor = n // ell**v
    best, best_k = None, 0
    samples = []
    for _ in range(max_samples):
        Q = fp_mul(cofactor, random_point(E, p, rng), E, p)
        k = 0
        T = Q
        while T is not None:
            T = fp_mul(ell, T, E, p)
            k += 1
        samples.append((Q, k))
        if k > best_k:
            best, best_k = Q, k
        if best_k == v:
            return ell**v
        for R, kr in samples:
            # smallest c with ell^c R in <best>
            c = 0
            T = R
            while not _discrete_log_member(T, best, ell**best_k, E, p):
                T = fp_mul(ell, T, E, p)
                c += 1
            if best_k + c == v:
                return ell**best_k
        # keep the sample list short; the max-order point carries the information
        samples = samples[-4:]
    return None


def group_shape_exhaustive(E: WeierstrassCurve, p: int) -> GroupShape:
    """Invariant factors from the orders of every point."""
    order, _ = walk_orders(E, p)
    n = len(order)
    eps = lcm(*order.values())
    return GroupShape(p, n, n // eps, eps)


@lru_cache(maxsize=65536)
def _group_shape(E: WeierstrassCurve, p: int, seed: int) -> GroupShape:
    n = count_points(E, p)
    fn = factorize(n)
    rng = random.Random(hash((E.coefficients, p, seed)) & 0xFFFFFFFF)
    eps = 1
    for ell, v in fn:
        if v == 1 or (p - 1) % ell:
            eps *= ell**v
            continue
        part = _ell_part_exponent(E, p, n, ell, v, rng)
        if part is None:
            if p <= EXHAUSTIVE_LIMIT:
                return group_shape_exhaustive(E, p)
            raise UnsupportedCaseError(f"could not certify the {ell}-part of E(F_{p})")
        eps *= part
    return GroupShape(p, n, n // eps, eps)


def group_shape(E: WeierstrassCurve, p: int, seed: int = 0) -> GroupShape:
    """Z/delta x Z/epsilon decomposition of E(F_p) for a prime of good reduction.

    Randomized but certified: each ell-part with possible rank two is settled
    only once sampled points are shown to generate all of it. Sampling is
    seeded from (curve, p, seed), so results are reproducible.
    """
    if not has_good_reduction(E, p):
        raise BadReductionError(p)
    if p < 5:
        return group_shape_exhaustive(E, p)
    return _group_shape(E, p, seed)


# polynomial roots mod p

def roots_mod_p(coeffs: list[int], p: int) -> list[int]:
    """Distinct roots in F_p of the polynomial with coefficients high to low."""
    f = [c % p for c in coeffs]
    while f and f[0] == 0:
        f.pop(0)
    if len(f) <= 1:
        if not f:
            raise ValueError("zero polynomial")
        return []
    _, factors = gf_factor([ZZ(c) for c in f], p, ZZ)
    roots = set()
    for g, _ in factors:
        if len(g) == 2:  # monic linear x + c
            roots.add(int(-g[1]) % p)
    return sorted(roots)


def count_order_two(E: WeierstrassCurve, p: int) -> int:
    """Points of order exactly 2 in E(F_p): roots of 4x^3 + b2 x^2 + 2 b4 x + b6."""
    if p == 2:
        order, _ = walk_orders(E, p)
        return sum(1 for k in order.values() if k == 2)
    if not has_good_reduction(E, p):
        raise BadReductionError(p)
    return len(roots_mod_p([4, E.b2, 2 * E.b4, E.b6], p))


def is_double_mod_p(x: int, y: int, E: WeierstrassCurve, p: int) -> bool:
    """Whether the affine point (x, y) of E(F_p) equals 2Q for some Q in E(F_p).

    On the short model, x(2Q) = x_P exactly when x(Q) is a root of
    x^4 - 2Ax^2 - 8Bx + A^2 - 4 x_P (x^3 + Ax + B). A root r gives points
    over F_p iff r^3 + Ar + B is a nonzero square; a zero value means Q has
    order 2 and doubles to O instead. Since 2(-Q) = -2Q, one of the two
    ordinates then doubles to P itself.
    """
    if p <= 3:
        order, doubles = walk_orders(E, p)
        return (x % p, y % p) in doubles
    n = count_points(E, p)
    if n % 2:
        return True
    model = short_model(E, p)
    A, B = model.A, model.B
    xs, _ = model.to_short(x, y)
    quartic = [1, -4 * xs, -2 * A, -8 * B - 4 * A * xs, A * A - 4 * B * xs]
    for r in roots_mod_p(quartic, p):
        v = (r**3 + A * r + B) % p
        if v and pow(v, (p - 1) // 2, p) == 1:
            return True
    return False


def is_double(P: ProjectivePoint, E: WeierstrassCurve, factorization: Factorization) -> bool:
    """Whether P = 2Q for some Q in E(Z/NZ), N squarefree."""
    if not factorization.is_squarefree():
        raise UnsupportedCaseError("halving is only implemented for squarefree N")
    if factorization.value != P.modulus:
        raise ValueError("factorization does not match the point's modulus")
    for p in factorization.primes:
        Pp = P.reduce(p)
        if Pp.is_identity:
            continue
        if not is_double_mod_p(*Pp.xy, E, p):
            return False
    return True


# E(Z/p^e Z) for e >= 2

def _hensel_lifts(E: WeierstrassCurve, x0: int, y0: int, p: int, e: int):
    """All points of E(Z/p^e) reducing to the affine point (x0, y0) mod p."""
    q = p**e
    a1, a2, a3, a4, a6 = E.coefficients

    def F(x, y):
        return y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)

    Fy = (2 * y0 + a1 * x0 + a3) % p
    Fx = (a1 * y0 - (3 * x0 * x0 + 2 * a2 * x0 + a4)) % p
    step = p ** (e - 1)
    lifts = []
    for k in range(step):
        if Fy:
            x, y = x0 + k * p, y0
            inv = pow(2 * y0 + a1 * x0 + a3, -1, q)
            for _ in range(e):
                y = (y - F(x, y) * inv) % q
        else:
            x, y = x0, y0 + k * p
            inv = pow(Fx, -1, q)
            for _ in range(e):
                x = (x - F(x, y) * inv) % q
        assert F(x, y) % q == 0
        lifts.append((x % q, y % q))
    return lifts


def _exponent_by_lifting(E: WeierstrassCurve, p: int, e: int, n: int) -> int:
    q = p**e
    bound = factorize(p ** (e - 1) * n)
    eps = p ** (e - 1)  # the kernel of reduction is cyclic of this order
    for P0 in enumerate_points(E, p)[1:]:
        for x, y in _hensel_lifts(E, *P0, p, e):
            P = ProjectivePoint.affine(x, y, q)
            k = bound.value
            for ell, _ in bound:
                while k % ell == 0 and scalar_mul(k // ell, P, E).is_identity:
                    k //= ell
            eps = lcm(eps, k)
    return eps


def exponent_mod_prime_power(E: WeierstrassCurve, p: int, e: int) -> ExponentRecord:
    """Exponent of E(Z/p^e Z).

    For e = 1 this is epsilon of E(F_p). When p does not divide #E(F_p) the
    reduction sequence splits and the exponent is p^(e-1) epsilon. Otherwise
    every point of E(Z/p^e Z) is enumerated, which is done only for p <= 100.
    """
    if e < 1:
        raise ValueError("exponent must be positive")
    shape = group_shape(E, p)
    if e == 1:
        return ExponentRecord(p, 1, shape.epsilon)
    if shape.order % p:
        return ExponentRecord(p, e, p ** (e - 1) * shape.epsilon)
    if p > 100 or (not E.is_short and p == 3) or p == 2:
        raise UnsupportedCaseError(
            f"exponent of E(Z/{p}^{e}) with {p} | #E(F_{p}) needs lift enumeration; supported for 5 <= p <= 100"
        )
    return ExponentRecord(p, e, _exponent_by_lifting(E, p, e, shape.order))


@dataclass(frozen=True)
class SignatureProfile:
    """What an exhaustive walk of E(F_p) saw.

    ``signatures`` is the set of (order, is_double) pairs realized by points.
    """

    p: int
    order: int
    epsilon: int
    signatures: frozenset
    two_torsion: int


@lru_cache(maxsize=None)
def signature_profile(E: WeierstrassCurve, p: int) -> SignatureProfile:
    order, doubles = walk_orders(E, p)
    sigs = frozenset((k, P in doubles) for P, k in order.items())
    return SignatureProfile(
        p, len(order), lcm(*order.values()), sigs, sum(1 for k in order.values() if k == 2)
    )
