"""Points on E(Z/mZ) and scalar multiplication by division polynomials.

Multiplication never inverts anything modulo m. The division-polynomial
values at P are built by the usual doubling recurrences, in a variant that
drops the factor 2y from the even-index polynomials so that only the
short-form coefficients and the coordinates of P appear. The result
``[phi_n psi_n : omega_n : psi_n^3]`` is then inspected prime power by prime
power, which is how points of E over a composite modulus have to be read.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .arith import Factorization
from .curve import WeierstrassCurve, on_curve, short_model
from .errors import FactorFound

__all__ = [
    "ProjectivePoint",
    "DivisionPolynomialContext",
    "psi_hat",
    "psi",
    "scalar_mul",
    "add_points",
    "negate",
    "multiply_by_addition",
    "is_identity_componentwise",
    "psi_vanishes",
]

IDENTITY, AFFINE, MIXED = "identity", "affine", "mixed"


@dataclass(frozen=True)
class ProjectivePoint:
    """A point [X : Y : Z] modulo m, with x = X/Z and y = Y/Z.

    ``kind`` is ``"identity"`` when X and Z both vanish mod m, ``"affine"``
    when Z is a unit (the point is then stored with Z = 1), and ``"mixed"``
    otherwise: the point reduces to the identity modulo some prime powers of
    m and to an affine point modulo the others.
    """

    X: int
    Y: int
    Z: int
    modulus: int

    @classmethod
    def affine(cls, x: int, y: int, m: int) -> "ProjectivePoint":
        return cls(x % m, y % m, 1 % m, m)

    @classmethod
    def identity(cls, m: int) -> "ProjectivePoint":
        return cls(0, 1 % m, 0, m)

    @classmethod
    def normalized(cls, X: int, Y: int, Z: int, m: int) -> "ProjectivePoint":
        X, Y, Z = X % m, Y % m, Z % m
        if X == 0 and Z == 0:
            return cls.identity(m)
        if gcd(Z, m) == 1:
            zi = pow(Z, -1, m)
            return cls(X * zi % m, Y * zi % m, 1 % m, m)
        return cls(X, Y, Z, m)

    @property
    def kind(self) -> str:
        m = self.modulus
        if self.X % m == 0 and self.Z % m == 0:
            return IDENTITY
        if gcd(self.Z, m) == 1:
            return AFFINE
        return MIXED

    @property
    def is_identity(self) -> bool:
        return self.kind == IDENTITY

    @property
    def xy(self) -> tuple[int, int]:
        """Affine coordinates; only defined when Z is a unit."""
        if self.kind != AFFINE:
            raise ValueError(f"{self} has no affine coordinates mod {self.modulus}")
        zi = pow(self.Z, -1, self.modulus)
        return self.X * zi % self.modulus, self.Y * zi % self.modulus

    def reduce(self, q: int) -> "ProjectivePoint":
        """Image modulo a divisor q of the modulus."""
        if self.modulus % q:
            raise ValueError(f"{q} does not divide {self.modulus}")
        return ProjectivePoint.normalized(self.X, self.Y, self.Z, q)

    def __str__(self):
        k = self.kind
        if k == IDENTITY:
            return "O"
        if k == AFFINE:
            return "({}, {})".format(*self.xy)
        return f"[{self.X} : {self.Y} : {self.Z}]"


class DivisionPolynomialContext:
    """Memoized values of the modified division polynomials at one point.

    ``value(k)`` is psi_k(x, y) for odd k and psi_k(x, y) / (2y) for even k,
    reduced mod m, on the short curve y^2 = x^3 + A x + B.
    """

    def __init__(self, A: int, B: int, x: int, y: int, m: int):
        self.A, self.B, self.x, self.y, self.m = A % m, B % m, x % m, y % m, m
        A, B, x = self.A, self.B, self.x
        f = (x * x * x + A * x + B) % m
        self.f = f
        # 16 y^4, with y^2 replaced by the cubic
        self.sixteen_y4 = 16 * f * f % m
        x2 = x * x % m
        self._memo = {
            0: 0,
            1: 1 % m,
            2: 1 % m,
            3: (3 * x2 * x2 + 6 * A * x2 + 12 * B * x - A * A) % m,
            4: 2 * (x2 * x2 * x2 + 5 * A * x2 * x2 + 20 * B * x2 * x
                    - 5 * A * A * x2 - 4 * A * B * x - 8 * B * B - A * A * A) % m,
        }

    def value(self, k: int) -> int:
        if k < 0:
            return -self.value(-k) % self.m
        memo = self._memo
        if k in memo:
            return memo[k]
        m, v = self.m, self.value
        j = k // 2
        if k % 2:
            a, b = v(j) ** 3 * v(j + 2), v(j + 1) ** 3 * v(j - 1)
            if j % 2 == 0:
                r = self.sixteen_y4 * a - b
            else:
                r = a - self.sixteen_y4 * b
        else:
            r = v(j) * (v(j + 2) * v(j - 1) ** 2 - v(j - 2) * v(j + 1) ** 2)
        r %= m
        memo[k] = r
        return r

    def psi(self, n: int) -> int:
        """The unmodified psi_n(x, y) mod m."""
        h = self.value(n)
        return h if n % 2 else 2 * self.y * h % self.m

    def multiple(self, n: int) -> tuple[int, int, int]:
        """Projective coordinates of nP on the short curve."""
        m = self.m
        if n == 0:
            return 0, 1 % m, 0
        if n < 0:
            X, Y, Z = self.multiple(-n)
            return X, -Y % m, Z
        v, x, y, f = self.value, self.x, self.y, self.f
        hn, hp, hm = v(n), v(n + 1), v(n - 1)
        inner = (v(n + 2) * hm * hm - v(n - 2) * hp * hp) % m
        if n % 2 == 0:
            phi = (4 * x * f * hn * hn - hp * hm) % m
            omega = inner * pow(2, -1, m) % m
            psi_n = 2 * y * hn % m
        else:
            phi = (x * hn * hn - 4 * f * hp * hm) % m
            omega = y * inner % m
            psi_n = hn
        return phi * psi_n % m, omega, pow(psi_n, 3, m)


def _context(P: ProjectivePoint, E: WeierstrassCurve):
    m = P.modulus
    if P.kind != AFFINE:
        raise ValueError("division polynomials are evaluated at an affine point")
    x, y = P.xy
    model = short_model(E, m)
    xs, ys = model.to_short(x, y)
    return DivisionPolynomialContext(model.A, model.B, xs, ys, m), model


def psi_hat(n: int, x: int, y: int, E: WeierstrassCurve, m: int) -> int:
    """Modified division polynomial of index n at (x, y) on a short curve, mod m."""
    if not E.is_short:
        raise ValueError("psi_hat is defined for short-form curves")
    if n < 0:
        raise ValueError("index must be nonnegative")
    return DivisionPolynomialContext(E.a4, E.a6, x, y, m).value(n)


def psi(n: int, x: int, y: int, E: WeierstrassCurve, m: int) -> int:
    if not E.is_short:
        raise ValueError("psi is defined for short-form curves")
    return DivisionPolynomialContext(E.a4, E.a6, x, y, m).psi(n)


def scalar_mul(n: int, P: ProjectivePoint, E: WeierstrassCurve) -> ProjectivePoint:
    """nP modulo P.modulus. Long-form curves go through the short model."""
    m = P.modulus
    if n == 0 or P.is_identity:
        return ProjectivePoint.identity(m)
    ctx, model = _context(P, E)
    X, Y, Z = ctx.multiple(n)
    X, Y, Z = model.from_short_projective(X, Y, Z)
    return ProjectivePoint.normalized(X, Y, Z, m)


def psi_vanishes(n: int, P: ProjectivePoint, E: WeierstrassCurve) -> bool:
    """True iff psi_n(P) == 0 mod the point's modulus, i.e. nP is the identity."""
    if n == 0:
        return True
    ctx, _ = _context(P, E)
    return ctx.psi(n) == 0


def is_identity_componentwise(P: ProjectivePoint, factorization: Factorization) -> dict[int, bool]:
    """Map each prime p of the modulus to whether P is O modulo p^e."""
    if factorization.value != P.modulus:
        raise ValueError("factorization does not match the point's modulus")
    return {p: P.reduce(p**e).is_identity for p, e in factorization}


# chord-tangent arithmetic, used as an independent check on scalar_mul

def negate(P: ProjectivePoint, E: WeierstrassCurve) -> ProjectivePoint:
    if P.is_identity:
        return P
    x, y = P.xy
    return ProjectivePoint.affine(x, -y - E.a1 * x - E.a3, P.modulus)


def _inverse(d: int, m: int) -> int:
    d %= m
    g = gcd(d, m)
    if g != 1:
        raise FactorFound(g, m)
    return pow(d, -1, m)


def add_points(P: ProjectivePoint, Q: ProjectivePoint, E: WeierstrassCurve) -> ProjectivePoint:
    """P + Q by the chord-tangent law with affine inputs.

    Raises FactorFound when a denominator shares a proper factor with m.
    """
    m = P.modulus
    if Q.modulus != m:
        raise ValueError("points live modulo different integers")
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    a1, a2, a3, a4, _ = E.coefficients
    x1, y1 = P.xy
    x2, y2 = Q.xy
    if (x1 - x2) % m == 0:
        s = (y1 + y2 + a1 * x2 + a3) % m
        if s == 0:
            return ProjectivePoint.identity(m)
        if (y1 - y2) % m:
            # x agrees but neither Q = P nor Q = -P: a proper factor hides here
            raise FactorFound(gcd(s, m), m)
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * _inverse(s, m)
    else:
        lam = (y2 - y1) * _inverse(x2 - x1, m)
    lam %= m
    nu = (y1 - lam * x1) % m
    x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % m
    y3 = (-(lam + a1) * x3 - nu - a3) % m
    R = ProjectivePoint.affine(x3, y3, m)
    assert on_curve(E, x3, y3, m)
    return R


def multiply_by_addition(n: int, P: ProjectivePoint, E: WeierstrassCurve) -> ProjectivePoint:
    """nP by double-and-add with the chord-tangent law."""
    R = ProjectivePoint.identity(P.modulus)
    if n < 0:
        n, P = -n, negate(P, E)
    while n:
        if n & 1:
            R = add_points(R, P, E)
        P = add_points(P, P, E)
        n >>= 1
    return R
