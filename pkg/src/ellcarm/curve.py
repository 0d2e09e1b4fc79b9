"""Weierstrass curves with integer coefficients and their reductions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import factorize
from .errors import BadReductionError, SingularCurveError

__all__ = [
    "WeierstrassCurve",
    "ReducedCurve",
    "ShortModel",
    "discriminant",
    "has_good_reduction",
    "reduce_mod",
    "is_two_torsion_form",
    "on_curve",
    "short_model",
    "cm_field",
    "parse_curve",
]


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over the integers."""

    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    def __post_init__(self):
        if self.discriminant == 0:
            raise SingularCurveError(f"{self} is singular (discriminant 0)")

    @classmethod
    def short(cls, A: int, B: int) -> "WeierstrassCurve":
        return cls(0, 0, 0, A, B)

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def is_short(self) -> bool:
        return self.a1 == self.a2 == self.a3 == 0

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.coefficients
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> int:
        if self.is_short:
            return -16 * (4 * self.a4**3 + 27 * self.a6**2)
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(self.c4**3, self.discriminant)

    def rhs(self, x: int) -> int:
        return x**3 + self.a2 * x * x + self.a4 * x + self.a6

    def __str__(self):
        if self.is_short:
            return f"[{self.a4},{self.a6}]"
        return "[" + ",".join(str(c) for c in self.coefficients) + "]"


_INTS = r"-?\d+(?:\s*,\s*-?\d+)*"
_CURVE_RE = re.compile(rf"^\s*(?:\[\s*({_INTS})\s*\]|({_INTS}))\s*$")


def parse_curve(text: str) -> WeierstrassCurve:
    """Parse ``[A,B]`` (short form) or ``[a1,a2,a3,a4,a6]``."""
    m = _CURVE_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse curve {text!r}; expected [A,B] or [a1,a2,a3,a4,a6]")
    coeffs = [int(c) for c in (m.group(1) or m.group(2)).split(",")]
    if len(coeffs) == 2:
        return WeierstrassCurve.short(*coeffs)
    if len(coeffs) == 5:
        return WeierstrassCurve(*coeffs)
    raise ValueError(f"curve needs 2 or 5 coefficients, got {len(coeffs)}")


def discriminant(E: WeierstrassCurve) -> int:
    return E.discriminant


def has_good_reduction(E: WeierstrassCurve, p: int) -> bool:
    """True iff p does not divide the discriminant of the given model."""
    return E.discriminant % p != 0


@dataclass(frozen=True)
class ReducedCurve:
    curve: WeierstrassCurve
    modulus: int
    residues: tuple[int, int, int, int, int]


def reduce_mod(E: WeierstrassCurve, m: int, require_coprime_to_6: bool = False) -> ReducedCurve:
    """Reduce E modulo m, refusing moduli that share a prime with the discriminant."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    bad = gcd(m, E.discriminant * (6 if require_coprime_to_6 else 1))
    if bad != 1:
        # the offending prime divides a gcd with a small integer, so factoring is cheap
        small = gcd(bad, E.discriminant * 6)
        raise BadReductionError(min(factorize(small).primes))
    return ReducedCurve(E, m, tuple(c % m for c in E.coefficients))


def on_curve(E: WeierstrassCurve, x: int, y: int, m: int) -> bool:
    lhs = y * y + E.a1 * x * y + E.a3 * y
    return (lhs - E.rhs(x)) % m == 0


def is_two_torsion_form(E: WeierstrassCurve, x: int, y: int, m: int) -> bool:
    """2y + a1 x + a3 == 0 (mod m); for short form this is y == 0."""
    return (2 * y + E.a1 * x + E.a3) % m == 0


@dataclass(frozen=True)
class ShortModel:
    """y^2 = x^3 + A x + B modulo m, isomorphic to a given curve.

    For a short-form input the map is the identity and works for every odd m.
    Long-form curves use (x, y) -> (36x + 3b2, 108(2y + a1x + a3)), which
    needs gcd(m, 6) = 1.
    """

    curve: WeierstrassCurve
    modulus: int
    A: int
    B: int

    def to_short(self, x: int, y: int) -> tuple[int, int]:
        E, m = self.curve, self.modulus
        if E.is_short:
            return x % m, y % m
        return (36 * x + 3 * E.b2) % m, 108 * (2 * y + E.a1 * x + E.a3) % m

    def from_short_projective(self, X: int, Y: int, Z: int) -> tuple[int, int, int]:
        E, m = self.curve, self.modulus
        if E.is_short:
            return X % m, Y % m, Z % m
        inv36, inv108, inv2 = pow(36, -1, m), pow(108, -1, m), pow(2, -1, m)
        Xl = (X - 3 * E.b2 * Z) * inv36 % m
        Yl = (Y * inv108 - E.a1 * Xl - E.a3 * Z) * inv2 % m
        return Xl, Yl, Z % m


def short_model(E: WeierstrassCurve, m: int) -> ShortModel:
    if E.is_short:
        return ShortModel(E, m, E.a4 % m, E.a6 % m)
    if gcd(m, 6) != 1:
        raise ValueError("a long-form curve needs gcd(m, 6) = 1 to pass to short form")
    return ShortModel(E, m, (-27 * E.c4) % m, (-54 * E.c6) % m)


# Rational j-invariants with complex multiplication, keyed to the squarefree d
# of the CM field Q(sqrt(-d)).
_CM_J = {
    0: 3, 54000: 3, -12288000: 3,
    1728: 1, 287496: 1,
    -3375: 7, 16581375: 7,
    8000: 2,
    -32768: 11,
    -884736: 19,
    -884736000: 43,
    -147197952000: 67,
    -262537412640768000: 163,
}


def cm_field(E: WeierstrassCurve):
    """d such that E has CM in Q(sqrt(-d)), or None if E has no CM."""
    j = E.j_invariant
    if j.denominator != 1:
        return None
    return _CM_J.get(j.numerator)
