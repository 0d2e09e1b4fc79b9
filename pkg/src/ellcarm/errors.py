"""Exception types shared across the package."""


class EllCarmError(Exception):
    """Base class for every domain error raised by ellcarm."""


class SingularCurveError(EllCarmError, ValueError):
    pass


class BadReductionError(EllCarmError, ValueError):
    """The curve has bad reduction at ``prime`` (which divides the modulus)."""

    def __init__(self, prime, message=None):
        self.prime = prime
        super().__init__(message or f"bad reduction at p = {prime}")


class PreconditionError(EllCarmError, ValueError):
    """An input violates the documented precondition of a predicate."""


class UndefinedPredicateError(PreconditionError):
    """The predicate makes no sense for this input (e.g. odd N+1-a_N for Euler)."""


class UnsupportedCaseError(EllCarmError):
    """The input is mathematically valid but outside what is implemented."""


class FactorizationBudgetExceeded(EllCarmError):
    def __init__(self, n, max_digits):
        self.n = n
        self.max_digits = max_digits
        super().__init__(f"refusing to factor a {len(str(n))}-digit integer (budget {max_digits} digits)")


class FactorFound(EllCarmError):
    """An inversion modulo m failed; ``divisor`` is a nontrivial factor of m."""

    def __init__(self, divisor, modulus):
        self.divisor = divisor
        self.modulus = modulus
        super().__init__(f"non-invertible element modulo {modulus}: found factor {divisor}")
