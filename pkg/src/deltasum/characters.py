"""Dirichlet characters modulo an odd prime, with Gauss sums.

A character chi mod q is stored as (q, g, index) where g is the least
primitive root mod q and chi(g**k) = e(index * k / (q-1)).  Index 0 is the
principal character; mod a prime every non-principal character is
primitive.  Evaluation goes through a per-modulus discrete-log table that
is built once under a lock and then shared read-only, so characters are
cheap value objects safe for concurrent use.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import fsum

import numpy as np

from .errors import NotPrime, OutOfRange
from .numcore import RationalAngle, factorize, is_prime

MAX_CHARACTER_MODULUS = 10**6

_dlog_lock = threading.Lock()
_dlog_cache = {}
_root_lock = threading.Lock()
_root_cache = {}


def primitive_root(q):
    """Smallest primitive root modulo the odd prime q."""
    prime_divisors = [p for p, _ in factorize(q - 1).factors]
    for g in range(2, q):
        if all(pow(g, (q - 1) // s, q) != 1 for s in prime_divisors):
            return g
    raise NotPrime(f"no primitive root mod {q}")


def discrete_log_table(q):
    """table[x] = k with g**k = x mod q (table[0] = -1), cached per modulus."""
    table = _dlog_cache.get(q)
    if table is not None:
        return table
    with _dlog_lock:
        table = _dlog_cache.get(q)
        if table is not None:
            return table
        g = primitive_root(q)
        table = np.full(q, -1, dtype=np.int64)
        acc = 1
        for k in range(q - 1):
            table[acc] = k
            acc = acc * g % q
        table.setflags(write=False)
        _dlog_cache[q] = table
        return table


def unit_roots(n):
    """Array of the n-th roots of unity e(j/n), j = 0..n-1, cached."""
    w = _root_cache.get(n)
    if w is not None:
        return w
    with _root_lock:
        w = _root_cache.get(n)
        if w is not None:
            return w
        w = np.exp(2j * np.pi * np.arange(n) / n)
        w.setflags(write=False)
        _root_cache[n] = w
        return w


def _check_odd_prime(q):
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise NotPrime(f"{q} is not an odd prime")
    if q > MAX_CHARACTER_MODULUS:
        raise OutOfRange(f"character modulus {q} exceeds {MAX_CHARACTER_MODULUS}")


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod an odd prime q, indexed against the least primitive root."""

    modulus: int
    generator: int
    index: int

    @classmethod
    def from_index(cls, q, index):
        _check_odd_prime(q)
        return cls(q, primitive_root(q), index % (q - 1))

    @classmethod
    def principal(cls, q):
        return cls.from_index(q, 0)

    @classmethod
    def legendre(cls, q):
        return cls.from_index(q, (q - 1) // 2)

    @property
    def is_principal(self):
        return self.index == 0

    def conjugate(self):
        return DirichletCharacter(self.modulus, self.generator, (-self.index) % (self.modulus - 1))

    def eval(self, n):
        """chi(n): 0 on multiples of q, else the exact root of unity."""
        q = self.modulus
        n %= q
        if n == 0:
            return 0j
        k = int(discrete_log_table(q)[n])
        return RationalAngle(self.index * k, q - 1).to_complex()

    def parity(self):
        """chi(-1); -1 means odd.  Equals (-1)**index since -1 = g**((q-1)/2)."""
        return -1 if self.index % 2 else 1

    def value_array(self):
        """chi at every residue 0..q-1 as a complex array (chi(0) = 0)."""
        q = self.modulus
        dlog = discrete_log_table(q)
        roots = unit_roots(q - 1)
        vals = np.zeros(q, dtype=np.complex128)
        vals[1:] = roots[(self.index * dlog[1:]) % (q - 1)]
        return vals


def enumerate_characters(q):
    """All q-1 characters mod the odd prime q, by ascending index."""
    _check_odd_prime(q)
    g = primitive_root(q)
    return [DirichletCharacter(q, g, a) for a in range(q - 1)]


def gauss_sum(chi):
    """g_chi = sum_{a mod q} chi(a) e(a/q) by direct summation."""
    q = chi.modulus
    terms = chi.value_array()[1:] * unit_roots(q)[1:]
    return complex(fsum(terms.real.tolist()), fsum(terms.imag.tolist()))
