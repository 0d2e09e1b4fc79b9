"""Integer utilities: Jacobi symbols, p-adic valuations, factoring, CRT."""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from math import gcd, prod
from typing import Iterable, Iterator

from sympy import factorint, isprime, primerange

from .errors import FactorizationBudgetExceeded

__all__ = [
    "INFINITY",
    "Infinity",
    "Factorization",
    "TwoPowerSplit",
    "jacobi",
    "padic_order",
    "factorize",
    "crt_combine",
    "split_two_power",
    "is_prime",
    "primes_between",
    "DEFAULT_DIGIT_BUDGET",
]

DEFAULT_DIGIT_BUDGET = 40


@total_ordering
class Infinity:
    """Valuation of zero. Compares greater than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return not isinstance(other, Infinity)

    def __hash__(self):
        return hash("ellcarm.Infinity")

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = Infinity()


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, via quadratic reciprocity.

    >>> jacobi(2, 7)
    1
    >>> jacobi(-11, 7739)
    -1
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def padic_order(n: int, p: int):
    """Largest e with p**e | n, or INFINITY when n == 0."""
    if p < 2:
        raise ValueError("p must be a prime")
    if n == 0:
        return INFINITY
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as an increasing tuple of (prime, exponent) pairs."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        for p, e in self.factors:
            if e < 1 or not isprime(p):
                raise ValueError(f"invalid factor {p}^{e}")

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "Factorization":
        return cls(tuple(sorted((int(p), int(e)) for p, e in d.items())))

    @property
    def value(self) -> int:
        return prod(p**e for p, e in self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    @property
    def prime_powers(self) -> list[int]:
        return [p**e for p, e in self.factors]

    def exponent(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


@dataclass(frozen=True)
class TwoPowerSplit:
    s: int
    t: int

    def __iter__(self):
        return iter((self.s, self.t))


def factorize(n: int, max_digits: int = DEFAULT_DIGIT_BUDGET) -> Factorization:
    """Factor n >= 1. Inputs longer than ``max_digits`` digits are refused."""
    if n < 1:
        raise ValueError(f"can only factor positive integers, got {n}")
    if len(str(n)) > max_digits:
        raise FactorizationBudgetExceeded(n, max_digits)
    f = Factorization.from_dict(factorint(n))
    assert f.value == n
    return f


def crt_combine(residues: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine (residue, modulus) pairs with pairwise-coprime moduli.

    Returns ``(r, M)`` with M the product of the moduli and 0 <= r < M.
    """
    r, m = 0, 1
    for a, n in residues:
        if n < 1:
            raise ValueError(f"modulus must be positive, got {n}")
        if gcd(m, n) != 1:
            raise ValueError(f"moduli {m} and {n} are not coprime")
        # r + m*k == a (mod n)
        k = (a - r) * pow(m, -1, n) % n if n > 1 else 0
        r += m * k
        m *= n
    return r % m, m


def split_two_power(m: int) -> TwoPowerSplit:
    if m < 1:
        raise ValueError(f"expected a positive integer, got {m}")
    s = (m & -m).bit_length() - 1
    return TwoPowerSplit(s, m >> s)


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [int(p) for p in primerange(lo, hi + 1)]
