"""Exact integer, residue, and rational-angle arithmetic.

Everything in this module is exact.  Modular work uses Python integers but
rejects moduli above 2**31, so any product of two moduli stays below 2**62
and the same numbers are reproducible in fixed-width reimplementations.
Elements of Q/Z are stored as reduced fractions with bounded denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotInvertible, OutOfRange

MAX_MODULUS = 1 << 31
MAX_FACTOR_INPUT = 1 << 40
MAX_DENOMINATOR = 1 << 62

TAU = 2.0 * math.pi


def check_modulus(m, what="modulus"):
    if m < 1:
        raise OutOfRange(f"{what} must be positive, got {m}")
    if m > MAX_MODULUS:
        raise OutOfRange(f"{what} {m} exceeds the supported bound 2**31")
    return m


def mod_inv(a, m):
    """Inverse of a modulo m, in [0, m).  mod_inv(anything, 1) is 0."""
    check_modulus(m)
    if m == 1:
        return 0
    if math.gcd(a, m) != 1:
        raise NotInvertible(f"gcd({a}, {m}) > 1")
    return pow(a, -1, m)


@dataclass(frozen=True)
class Factorization:
    """Canonical factorization n = prod p**e, primes ascending."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def recompose(self):
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def factorize(n):
    if n < 1:
        raise OutOfRange(f"cannot factor {n}")
    if n > MAX_FACTOR_INPUT:
        raise OutOfRange(f"{n} exceeds the factorization bound 2**40")
    m = n
    factors = []
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    d = 5
    while d * d <= m:
        # wheel over 6k+-1
        for q in (d, d + 2):
            if m % q == 0:
                e = 0
                while m % q == 0:
                    m //= q
                    e += 1
                factors.append((q, e))
        d += 6
    if m > 1:
        factors.append((m, 1))
    factors.sort()
    return Factorization(n, tuple(factors))


def arithmetic_functions(n):
    """(phi(n), mu(n), d(n)) from the canonical factorization."""
    fac = factorize(n)
    phi, mu, dd = 1, 1, 1
    for p, e in fac.factors:
        phi *= p ** (e - 1) * (p - 1)
        mu = 0 if e > 1 else -mu
        dd *= e + 1
    return phi, mu, dd


def euler_phi(n):
    return arithmetic_functions(n)[0]


def mobius(n):
    return arithmetic_functions(n)[1]


def divisor_count(n):
    return arithmetic_functions(n)[2]


def divisors(n):
    """All positive divisors of n, ascending."""
    fac = factorize(n)
    out = [1]
    for p, e in fac.factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def is_prime(n):
    """Deterministic trial-division primality test (n <= 2**40)."""
    if n < 2:
        return False
    if n > MAX_FACTOR_INPUT:
        raise OutOfRange(f"{n} exceeds the primality bound 2**40")
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def primes_between(lo, hi):
    """Primes p with lo < p < hi (both ends exclusive)."""
    return [p for p in range(max(lo + 1, 2), hi) if is_prime(p)]


def p_star(P):
    """Sum of (p - 1) over primes P < p < 2P.

    For an odd prime p the character average sum_{psi mod p} (1 - psi(-1))
    equals p - 1, so this is the normalizing count of the delta-method
    family built from odd characters.
    """
    if P < 1:
        raise OutOfRange("P must be positive")
    return sum(p - 1 for p in primes_between(P, 2 * P))


@dataclass(frozen=True)
class RationalAngle:
    """An element of Q/Z stored as a reduced fraction in [0, 1).

    Equality is exact; denominators are capped at 2**62 so that all
    intermediates of angle arithmetic stay representable in 64-bit
    reimplementations.
    """

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1:
            raise OutOfRange("denominator must be positive")
        num = self.numerator % self.denominator
        g = math.gcd(num, self.denominator)
        num //= g
        den = self.denominator // g
        if den > MAX_DENOMINATOR:
            raise OutOfRange(f"denominator {den} exceeds 2**62")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def __neg__(self):
        return RationalAngle(-self.numerator, self.denominator)

    def is_zero(self):
        return self.numerator == 0

    def to_float(self):
        return self.numerator / self.denominator

    def to_complex(self):
        """e(x) = exp(2*pi*i*x), evaluated from the reduced fraction."""
        t = TAU * self.numerator / self.denominator
        return complex(math.cos(t), math.sin(t))


def angle(numerator, denominator):
    return RationalAngle(numerator, denominator)


def angle_add(a, b):
    """Exact reduced sum in Q/Z."""
    g = math.gcd(a.denominator, b.denominator)
    den = a.denominator // g * b.denominator
    num = a.numerator * (b.denominator // g) + b.numerator * (a.denominator // g)
    return RationalAngle(num, den)


def e_of(num, den):
    """exp(2*pi*i*num/den) with the argument reduced exactly mod 1."""
    return RationalAngle(num, den).to_complex()
