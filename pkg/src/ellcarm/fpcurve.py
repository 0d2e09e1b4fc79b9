"""Affine group law on E(F_p) with Python integers.

Points are ``(x, y)`` tuples and the identity is ``None``. These helpers are
small and direct; they back the order computations, the baby-step giant-step
counts and the exhaustive oracles.
"""

from __future__ import annotations

from math import gcd

from sympy.ntheory import sqrt_mod

from .curve import WeierstrassCurve

__all__ = [
    "fp_add",
    "fp_neg",
    "fp_mul",
    "random_point",
    "enumerate_points",
    "walk_orders",
]


def fp_add(P, Q, E: WeierstrassCurve, p: int):
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, _ = E.coefficients
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        s = (y1 + y2 + a1 * x2 + a3) % p
        if s == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(s, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
    y3 = (-(lam + a1) * x3 - (y1 - lam * x1) - a3) % p
    return (x3, y3)


def fp_neg(P, E: WeierstrassCurve, p: int):
    if P is None:
        return None
    x, y = P
    return (x, (-y - E.a1 * x - E.a3) % p)


def fp_mul(k: int, P, E: WeierstrassCurve, p: int):
    if k < 0:
        k, P = -k, fp_neg(P, E, p)
    R = None
    while k:
        if k & 1:
            R = fp_add(R, P, E, p)
        P = fp_add(P, P, E, p)
        k >>= 1
    return R


def _y_values(E: WeierstrassCurve, p: int, x: int) -> list[int]:
    a1, a2, a3, a4, a6 = E.coefficients
    if p == 2:
        r = (x**3 + a2 * x * x + a4 * x + a6) % 2
        return [y for y in (0, 1) if (y * y + a1 * x * y + a3 * y - r) % 2 == 0]
    b = (a1 * x + a3) % p
    d = (b * b + 4 * (x**3 + a2 * x * x + a4 * x + a6)) % p
    inv2 = pow(2, -1, p)
    if d == 0:
        return [(-b) * inv2 % p]
    r = sqrt_mod(d, p)
    if r is None:
        return []
    return sorted({(r - b) * inv2 % p, (-r - b) * inv2 % p})


def random_point(E: WeierstrassCurve, p: int, rng):
    """A random affine point: random abscissas until one lies under the curve."""
    while True:
        x = rng.randrange(p)
        ys = _y_values(E, p, x)
        if ys:
            return (x, ys[rng.randrange(len(ys))])


def enumerate_points(E: WeierstrassCurve, p: int) -> list:
    """Every point of E(F_p), identity first."""
    pts = [None]
    for x in range(p):
        pts.extend((x, y) for y in _y_values(E, p, x))
    return pts


def walk_orders(E: WeierstrassCurve, p: int, points=None) -> tuple[dict, set]:
    """Orders of all points and the set of doubles 2E(F_p), by walking multiples.

    Each unvisited point P is stepped P, 2P, ... until the identity. That gives
    k = ord(P) and assigns order k / gcd(j, k) to jP, while the even multiples
    of P are exactly the doubles inside <P>. Every point lies in the cyclic
    group it generates, so the union covers all of 2E(F_p).
    """
    if points is None:
        points = enumerate_points(E, p)
    order = {None: 1}
    doubles = {None}
    for P in points:
        if P in order:
            continue
        walk = [None, P]
        R = P
        while True:
            R = fp_add(R, P, E, p)
            if R is None:
                break
            walk.append(R)
        k = len(walk)
        for j in range(1, k):
            order.setdefault(walk[j], k // gcd(j, k))
            doubles.add(walk[2 * j % k])
    return order, doubles
