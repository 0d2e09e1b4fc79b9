"""Pseudoprime and Carmichael predicates for a curve E over Z/NZ.

Every predicate returns a :class:`Verdict`, which is truthy when the property
holds and carries the evidence behind the answer in ``witness``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .arith import Factorization, factorize, jacobi, padic_order, split_two_power
from .curve import WeierstrassCurve, cm_field, has_good_reduction, is_two_torsion_form, on_curve
from .ecpoint import ProjectivePoint, scalar_mul
from .errors import (
    BadReductionError,
    EllCarmError,
    PreconditionError,
    UndefinedPredicateError,
    UnsupportedCaseError,
)
from .groupstruct import count_order_two, exponent_mod_prime_power, is_double, signature_profile
from .lseries import TraceTable, trace_table

__all__ = [
    "Verdict",
    "Context",
    "prepare",
    "as_point",
    "is_elliptic_pseudoprime",
    "is_gordon_elliptic_pseudoprime",
    "is_euler_elliptic_pseudoprime",
    "is_strong_elliptic_pseudoprime",
    "is_korselt_type1",
    "is_korselt_type2",
    "is_elliptic_carmichael",
    "is_euler_elliptic_carmichael",
    "is_strong_elliptic_carmichael",
    "korselt1_euler_equivalence",
    "korselt1_strong_equivalence",
    "carmichael_by_enumeration",
    "ClassificationReport",
    "classify_report",
]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class Context:
    """N with its factorization and the L-series data of E at N."""

    N: int
    curve: WeierstrassCurve
    factorization: Factorization
    traces: TraceTable

    @property
    def a_N(self) -> int:
        return self.traces.a_N

    @property
    def multiplier(self) -> int:
        """N + 1 - a_N."""
        return self.N + 1 - self.traces.a_N


def prepare(N: int, E: WeierstrassCurve, factorization: Factorization | None = None) -> Context:
    """Check the standing hypotheses and compute a_p for every p | N."""
    if N < 2:
        raise PreconditionError(f"N must be at least 2, got {N}")
    f = factorization or factorize(N)
    if len(f) < 2:
        raise PreconditionError(f"N = {N} must have at least two distinct prime factors")
    for p in f.primes:
        if not has_good_reduction(E, p):
            raise BadReductionError(p)
    return Context(N, E, f, trace_table(E, N, f))


def _ctx(N, E, ctx):
    if ctx is not None:
        if ctx.N != N or ctx.curve != E:
            raise ValueError("context was prepared for a different (N, E)")
        return ctx
    return prepare(N, E)


def as_point(P, E: WeierstrassCurve, N: int) -> ProjectivePoint:
    """Accept (x, y) or a ProjectivePoint; reject points off the curve mod N."""
    if isinstance(P, ProjectivePoint):
        if P.modulus != N:
            raise PreconditionError(f"point is taken modulo {P.modulus}, not {N}")
        if P.is_identity:
            return P
        x, y = P.xy
    else:
        x, y = P
    if not on_curve(E, x, y, N):
        raise PreconditionError(f"({x}, {y}) is not on {E} modulo {N}")
    return ProjectivePoint.affine(x, y, N)


def _failing_primes(R: ProjectivePoint, f: Factorization) -> list[int]:
    return [p for p, e in f if not R.reduce(p**e).is_identity]


def is_elliptic_pseudoprime(N, E, P, ctx: Context | None = None) -> Verdict:
    """(N + 1 - a_N) P is the identity modulo N."""
    ctx = _ctx(N, E, ctx)
    P = as_point(P, E, N)
    R = scalar_mul(ctx.multiplier, P, E)
    bad = _failing_primes(R, ctx.factorization)
    return Verdict(not bad, {"multiplier": ctx.multiplier, "failing_primes": bad})


def _gordon_gate(N: int, E: WeierstrassCurve, d: int | None) -> int:
    if gcd(N, 6 * E.discriminant) != 1:
        raise PreconditionError("Gordon's setting needs gcd(N, 6 * discriminant) = 1")
    if d is None:
        d = cm_field(E)
        if d is None:
            raise PreconditionError(f"{E} has no rational CM j-invariant; supply d")
    return d


def is_gordon_elliptic_pseudoprime(N, E, P, d: int | None = None) -> Verdict:
    """jacobi(-d, N) = -1 and (N + 1) P = O, for E with CM by Q(sqrt(-d))."""
    d = _gordon_gate(N, E, d)
    f = factorize(N)
    if f.factors == ((N, 1),):
        raise PreconditionError(f"N = {N} is prime")
    P = as_point(P, E, N)
    j = jacobi(-d, N)
    # the original formulation also asks N = 1 mod 4; report it rather than enforce it
    w = {"d": d, "jacobi": j, "N_mod_4": N % 4}
    if j != -1:
        return Verdict(False, w)
    R = scalar_mul(N + 1, P, E)
    return Verdict(R.is_identity, {**w, "failing_primes": _failing_primes(R, f)})


def _is_affine_two_torsion(R: ProjectivePoint, E: WeierstrassCurve) -> bool:
    if R.kind != "affine":
        return False
    x, y = R.xy
    return is_two_torsion_form(E, x, y, R.modulus)


def is_euler_elliptic_pseudoprime(N, E, P, ctx: Context | None = None) -> Verdict:
    """Half-multiple test, split on whether P is a double.

    With H = (N + 1 - a_N)/2: a double must have HP = O; any other point
    passes when HP is O or an affine point with 2y + a1 x + a3 = 0 mod N.
    """
    ctx = _ctx(N, E, ctx)
    M = ctx.multiplier
    if M % 2:
        raise UndefinedPredicateError(f"N + 1 - a_N = {M} is odd; the Euler test needs it even")
    P = as_point(P, E, N)
    double = P.is_identity or is_double(P, E, ctx.factorization)
    R = scalar_mul(M // 2, P, E)
    w = {"half_multiplier": M // 2, "is_double": double, "half_multiple": str(R)}
    if double:
        return Verdict(R.is_identity, {**w, "branch": "double"})
    return Verdict(R.is_identity or _is_affine_two_torsion(R, E), {**w, "branch": "not-double"})


def is_strong_elliptic_pseudoprime(N, E, P, ctx: Context | None = None) -> Verdict:
    """With N + 1 - a_N = 2^s t: tP = O, or (2^r t) P is affine 2-torsion for some r < s.

    The witness names ``r`` for the second branch and ``"tP=O"`` for the first.
    """
    ctx = _ctx(N, E, ctx)
    s, t = split_two_power(ctx.multiplier)
    P = as_point(P, E, N)
    R = scalar_mul(t, P, E)
    w = {"s": s, "t": t}
    if R.is_identity:
        return Verdict(True, {**w, "branch": "tP=O"})
    for r in range(s):
        if _is_affine_two_torsion(R, E):
            return Verdict(True, {**w, "branch": "r", "r": r, "point": str(R)})
        R = scalar_mul(2, R, E) if R.kind == "affine" else None
        if R is None:
            break
    return Verdict(False, w)


def is_korselt_type1(N, E, ctx: Context | None = None) -> Verdict:
    ctx = _ctx(N, E, ctx)
    M, aN = ctx.multiplier, ctx.a_N
    for p, e in ctx.factorization:
        ap = ctx.traces.a(p)
        if M % (p + 1 - ap):
            return Verdict(False, {"prime": p, "condition": f"{p + 1 - ap} does not divide {M}"})
        need = e - (1 if (ap - 1) % p else 0)
        if padic_order(aN - 1, p) < need:
            return Verdict(False, {"prime": p, "condition": f"ord_{p}(a_N - 1) < {need}"})
    return Verdict(True, {"a_N": aN, "multiplier": M})


def _exponents(ctx: Context) -> dict[int, int]:
    return {p: exponent_mod_prime_power(ctx.curve, p, e).epsilon_N_p for p, e in ctx.factorization}


def is_korselt_type2(N, E, ctx: Context | None = None) -> Verdict:
    """epsilon_{N,p} divides N + 1 - a_N for every p | N."""
    ctx = _ctx(N, E, ctx)
    eps = _exponents(ctx)
    bad = [p for p, v in eps.items() if ctx.multiplier % v]
    return Verdict(not bad, {"exponents": eps, "multiplier": ctx.multiplier, "failing_primes": bad})


def is_elliptic_carmichael(N, E, ctx: Context | None = None) -> Verdict:
    """Through the type II criterion, which characterizes Carmichael numbers for odd N."""
    if N % 2 == 0:
        raise UnsupportedCaseError("the exponent criterion characterizes elliptic Carmichael numbers only for odd N")
    return is_korselt_type2(N, E, ctx)


def is_euler_elliptic_carmichael(N, E, ctx: Context | None = None) -> Verdict:
    """epsilon_{N,p} divides (N + 1 - a_N)/2 for every p | N."""
    ctx = _ctx(N, E, ctx)
    M = ctx.multiplier
    if M % 2:
        raise UndefinedPredicateError(f"N + 1 - a_N = {M} is odd; the Euler test needs it even")
    eps = _exponents(ctx)
    bad = [p for p, v in eps.items() if (M // 2) % v]
    return Verdict(not bad, {"exponents": eps, "half_multiplier": M // 2, "failing_primes": bad})


def is_strong_elliptic_carmichael(N, E, ctx: Context | None = None) -> Verdict:
    """epsilon_{N,p} divides the odd part t of N + 1 - a_N, N odd."""
    if N % 2 == 0:
        raise PreconditionError("the strong criterion is stated for odd N")
    ctx = _ctx(N, E, ctx)
    _, t = split_two_power(ctx.multiplier)
    eps = _exponents(ctx)
    bad = [p for p, v in eps.items() if t % v]
    return Verdict(not bad, {"exponents": eps, "t": t, "failing_primes": bad})


def korselt1_euler_equivalence(N, E, ctx: Context | None = None) -> Verdict:
    """For type I N with even N + 1 - a_N, per prime: (p+1-a_p) | (N+1-a_N)/2, or full 2-torsion."""
    ctx = _ctx(N, E, ctx)
    if not is_korselt_type1(N, E, ctx):
        raise PreconditionError(f"{N} is not a type I Korselt number for {E}")
    M = ctx.multiplier
    if M % 2:
        raise UndefinedPredicateError(f"N + 1 - a_N = {M} is odd")
    branches = {}
    for p in ctx.factorization.primes:
        n = p + 1 - ctx.traces.a(p)
        if (M // 2) % n == 0:
            branches[p] = "divides-half"
        elif count_order_two(E, p) == 3:
            branches[p] = "full-2-torsion"
        else:
            branches[p] = None
    return Verdict(all(branches.values()), {"branches": branches})


def korselt1_strong_equivalence(N, E, ctx: Context | None = None) -> Verdict:
    """For type I N: every p + 1 - a_p is odd."""
    ctx = _ctx(N, E, ctx)
    if not is_korselt_type1(N, E, ctx):
        raise PreconditionError(f"{N} is not a type I Korselt number for {E}")
    even = [p for p in ctx.factorization.primes if (p + 1 - ctx.traces.a(p)) % 2 == 0]
    return Verdict(not even, {"even_order_primes": even})


def carmichael_by_enumeration(N, E, ctx: Context | None = None) -> dict[str, object]:
    """Decide the three Carmichael properties from every point of E(Z/NZ).

    N must be squarefree. By the Chinese remainder theorem a point of E(Z/NZ)
    is a tuple of points of E(F_p), and each predicate only depends on the
    order of each component and on whether it is a double. Every E(F_p) is
    walked in full to find which (order, is_double) pairs occur, and the
    predicates are then checked over all combinations of those pairs.
    Returns booleans, or None for the Euler property when N + 1 - a_N is odd.
    """
    ctx = _ctx(N, E, ctx)
    if not ctx.factorization.is_squarefree():
        raise UnsupportedCaseError("enumeration oracle needs squarefree N")
    M = ctx.multiplier
    s, t = split_two_power(M)
    sigs = [sorted(signature_profile(E, p).signatures) for p in ctx.factorization.primes]

    def kills(k, m):
        return m % k == 0

    def order_two_after(k, m):
        return k // gcd(k, m) == 2

    elliptic = all(kills(k, M) for S in sigs for k, _ in S)
    strong = True
    euler = None if M % 2 else True
    for combo in product(*sigs):
        orders = [k for k, _ in combo]
        if strong and not (
            all(kills(k, t) for k in orders)
            or any(all(order_two_after(k, 2**r * t) for k in orders) for r in range(s))
        ):
            strong = False
        if euler:
            H = M // 2
            if all(dbl for _, dbl in combo):
                ok = all(kills(k, H) for k in orders)
            else:
                ok = all(kills(k, H) for k in orders) or all(order_two_after(k, H) for k in orders)
            if not ok:
                euler = False
        if not strong and not euler:
            break
    return {"elliptic": elliptic, "euler": euler, "strong": strong}


NA = "n/a"


@dataclass
class ClassificationReport:
    N: int
    curve: WeierstrassCurve
    point: tuple[int, int] | None
    a_N: int | None = None
    flags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    reasons: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, bool) or v is None:
                return v
            if isinstance(v, int):
                return str(v)
            if isinstance(v, dict):
                return {str(k): clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        return {
            "N": str(self.N),
            "curve": str(self.curve),
            "point": None if self.point is None else [str(c) for c in self.point],
            "a_N": None if self.a_N is None else str(self.a_N),
            **{k: clean(v) for k, v in self.flags.items()},
            "witnesses": clean(self.witnesses),
            "reasons": self.reasons,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def classify_report(N: int, E: WeierstrassCurve, P=None, d: int | None = None) -> ClassificationReport:
    """Run every predicate that applies and record why the others do not."""
    ctx = prepare(N, E)
    point = None
    if P is not None:
        point = tuple(as_point(P, E, N).xy)
    rep = ClassificationReport(N, E, point, a_N=ctx.a_N)

    def run(name, fn, *args):
        try:
            v = fn(*args)
        except (UndefinedPredicateError, UnsupportedCaseError, PreconditionError) as exc:
            rep.flags[name] = NA
            rep.reasons[name] = str(exc)
            return
        rep.flags[name] = v.holds
        rep.witnesses[name] = v.witness

    if P is not None:
        run("elliptic_pp", is_elliptic_pseudoprime, N, E, P, ctx)
        run("euler_pp", is_euler_elliptic_pseudoprime, N, E, P, ctx)
        run("strong_pp", is_strong_elliptic_pseudoprime, N, E, P, ctx)
        if d is not None or cm_field(E) is not None:
            run("gordon_pp", is_gordon_elliptic_pseudoprime, N, E, P, d)
    run("korselt_type1", is_korselt_type1, N, E, ctx)
    run("korselt_type2", is_korselt_type2, N, E, ctx)
    run("elliptic_carmichael", is_elliptic_carmichael, N, E, ctx)
    run("euler_carmichael", is_euler_elliptic_carmichael, N, E, ctx)
    run("strong_carmichael", is_strong_elliptic_carmichael, N, E, ctx)
    return rep
