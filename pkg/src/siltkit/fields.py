"""Coefficient fields for exact linear algebra: prime fields F_p and the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_PRIME = 32003

# primes below this bound use the int64 fast path; larger primes (and the
# rationals) fall back to exact object arithmetic
FAST_PRIME_BOUND = 1 << 20

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for the range we care about
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field: ``prime`` carries the characteristic, ``rational`` has none."""

    kind: str
    p: int = 0

    @staticmethod
    def prime(p: int = DEFAULT_PRIME) -> "FieldSpec":
        if not _is_prime(p):
            raise ValueError(f"not a prime: {p}")
        return FieldSpec("prime", p)

    @staticmethod
    def rational() -> "FieldSpec":
        return FieldSpec("rational")

    @property
    def fast(self) -> bool:
        return self.kind == "prime" and self.p < FAST_PRIME_BOUND

    @property
    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def coerce(self, x):
        """Normalise ``x`` (int, Fraction or string) to a canonical field element."""
        if self.kind == "prime":
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {self.p}")
                return int(x.numerator) * pow(int(x.denominator), self.p - 2, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if self.kind == "prime":
            x = int(x) % self.p
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(x, self.p - 2, self.p)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / x

    def __str__(self) -> str:
        return f"F_{self.p}" if self.kind == "prime" else "Q"
