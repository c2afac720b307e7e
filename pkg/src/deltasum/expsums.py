"""Complete exponential and character sums, raw and closed-form.

Conventions shared by every sum here:

* summation order is ascending residue and the final reduction is
  math.fsum (exact compensated summation), so results are reproducible;
* roots of unity come from per-modulus tables built from exactly reduced
  fractions j/c;
* each result carries the summand count and a conservative bound on the
  accumulated rounding error (UNIT_EPS per tabulated root of unity);
* the raw direct-summation path is always available next to a closed
  form, and the verification suites compare the two - the closed form is
  never trusted alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import fsum, gcd

import numpy as np

from .characters import unit_roots
from .errors import (
    BudgetExceeded,
    ModulusMismatch,
    NotPrime,
    NotUnit,
    OutOfRange,
    ParameterInconsistency,
    PrincipalCharacter,
    SharedFactor,
)
from .numcore import (
    RationalAngle,
    arithmetic_functions,
    euler_phi,
    is_prime,
    mod_inv,
    mobius,
)

UNIT_EPS = 2e-15  # per-summand error bound for a tabulated unit-modulus value
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class ExpSumValue:
    """A complex sum with its summand count and rounding-error estimate."""

    value: complex
    terms: int
    est_error: float

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "terms", int(self.terms))
        object.__setattr__(self, "est_error", float(self.est_error))
        if self.est_error > 1e-12 * max(self.terms, 1):
            raise OutOfRange("est_error exceeds the 1e-12 * terms contract")
        if abs(self.value) > self.terms + self.est_error + 1e-9:
            raise OutOfRange("|value| exceeds terms + est_error")


def identity_tolerance(total_terms, lhs_abs, rhs_abs, scale=1.0):
    """Allowed |LHS-RHS| for an identity over total_terms roots of unity.

    Root-of-unity rounding grows like sqrt(T) in the worst random-walk
    case, plus a relative guard on the magnitudes themselves.
    """
    return 1e-6 * math.sqrt(max(total_terms, 1)) * scale + 1e-9 * (lhs_abs + rhs_abs)


def _fsum_complex(terms):
    return complex(fsum(terms.real.tolist()), fsum(terms.imag.tolist()))


_units_cache = {}


def units_and_inverses(c):
    """(units mod c ascending, their inverses), cached per modulus.

    For c = 1 the single residue 0 counts as the unit with inverse 0, so
    empty-modulus sums come out as a single e(0) term.
    """
    cached = _units_cache.get(c)
    if cached is not None:
        return cached
    if c == 1:
        xs = np.array([0], dtype=np.int64)
        inv = np.array([0], dtype=np.int64)
    else:
        mask = np.gcd(np.arange(c, dtype=np.int64), c) == 1
        xs = np.nonzero(mask)[0].astype(np.int64)
        inv = np.array([pow(int(x), -1, c) for x in xs], dtype=np.int64)
    xs.setflags(write=False)
    inv.setflags(write=False)
    if len(_units_cache) > 256:
        _units_cache.clear()
    _units_cache[c] = (xs, inv)
    return xs, inv


def _check_budget(c, budget):
    if c < 1:
        raise OutOfRange(f"modulus must be positive, got {c}")
    if c > budget:
        raise BudgetExceeded(f"modulus {c} exceeds the summation budget {budget}")


def kloosterman(m, n, c, budget=DEFAULT_BUDGET):
    """S(m, n; c) = sum over units x mod c of e((m x + n x^-1)/c)."""
    _check_budget(c, budget)
    xs, inv = units_and_inverses(c)
    idx = ((m % c) * xs + (n % c) * inv) % c
    terms = unit_roots(c)[idx]
    return ExpSumValue(_fsum_complex(terms), xs.size, UNIT_EPS * xs.size)


def twisted_kloosterman(psi, m, n, c, budget=DEFAULT_BUDGET):
    """S_psi(m, n; c) with psi mod p lifted to modulus c via reduction mod p.

    Requires p | c; summands with gcd(x, c) > 1 contribute 0 (unit-group
    convention), and every remaining x is prime to p, so the lift never
    evaluates psi at 0.
    """
    p = psi.modulus
    if c % p != 0:
        raise ModulusMismatch(f"character modulus {p} does not divide {c}")
    _check_budget(c, budget)
    xs, inv = units_and_inverses(c)
    idx = ((m % c) * xs + (n % c) * inv) % c
    terms = psi.value_array()[xs % p] * unit_roots(c)[idx]
    return ExpSumValue(_fsum_complex(terms), xs.size, 2 * UNIT_EPS * xs.size)


def ramanujan_sum(q, n):
    """c_q(n) by the closed form mu(q/g) * phi(q) / phi(q/g), g = gcd(n, q)."""
    if q < 1:
        raise OutOfRange("q must be positive")
    g = gcd(n, q)
    phi_q, _, _ = arithmetic_functions(q)
    qg = q // g
    return mobius(qg) * phi_q // euler_phi(qg)


def _require_nonprincipal(chi, M):
    if chi.modulus != M:
        raise ModulusMismatch(f"character modulus {chi.modulus} != {M}")
    if chi.is_principal:
        raise PrincipalCharacter("the sum needs a non-principal character")
    if not is_prime(M) or M % 2 == 0:
        raise NotPrime(f"{M} is not an odd prime")


def d_sum(u, M, chi):
    """D(u; M) = sum over b mod M, b != 0,1 of conj(chi)(b-1) e((b^-1 - 1)u/M)."""
    _require_nonprincipal(chi, M)
    _, inv = units_and_inverses(M)
    bs = np.arange(2, M, dtype=np.int64)
    inv_b = inv[bs - 1]  # inverses of 2..M-1 (units array skips 0)
    chib = np.conj(chi.value_array())[bs - 1]
    terms = chib * unit_roots(M)[((inv_b - 1) * (u % M)) % M]
    return ExpSumValue(_fsum_complex(terms), M - 2, 2 * UNIT_EPS * (M - 2))


@dataclass(frozen=True)
class PsiAverageParams:
    """Parameters of the odd-character average of twisted Kloosterman sums."""

    r: int
    m: int
    c: int
    p: int
    M: int

    def __post_init__(self):
        if min(self.r, self.m, self.c) < 1:
            raise OutOfRange("r, m, c must be positive")
        for q in (self.p, self.M):
            if q % 2 == 0 or not is_prime(q):
                raise NotPrime(f"{q} is not an odd prime")
        if self.p == self.M:
            raise ParameterInconsistency("p and M must be distinct primes")


def psi_average_raw(params, budget=DEFAULT_BUDGET):
    """sum over psi mod p of (1 - psi(-1)) S_psi(r, m; cpM), directly."""
    from .characters import enumerate_characters

    c_total = params.c * params.p * params.M
    _check_budget(c_total, budget)
    total = 0j
    terms = 0
    est = 0.0
    for psi in enumerate_characters(params.p):
        weight = 1 - psi.parity()
        s = twisted_kloosterman(psi, params.r, params.m, c_total, budget)
        terms += s.terms
        if weight:
            total += weight * s.value
            est += weight * s.est_error
    return ExpSumValue(total, (params.p - 1) * euler_phi(c_total), est + UNIT_EPS * terms)


def psi_average_closed(params, budget=DEFAULT_BUDGET):
    """Exact orthogonality evaluation of psi_average_raw.

    Equals (p-1) S(pbar r, pbar m; cM) (e(w) - e(-w)) with pbar = p^-1 mod
    cM and w = ((cM)^-1 mod p)(r + m)/p.  The count in front is exactly
    p - 1 and the two sign terms enter as a difference; both follow from
    summing psi over the full character group mod p.
    """
    cM = params.c * params.M
    if gcd(params.p, cM) != 1:
        raise SharedFactor(f"gcd(p, cM) = {gcd(params.p, cM)} > 1")
    pbar = mod_inv(params.p, cM)
    s = kloosterman(pbar * params.r, pbar * params.m, cM, budget)
    w = RationalAngle(mod_inv(cM, params.p) * (params.r + params.m), params.p)
    bracket = w.to_complex() - (-w).to_complex()
    value = (params.p - 1) * s.value * bracket
    terms = (params.p - 1) * euler_phi(params.c * params.p * params.M)
    est = (params.p - 1) * 2 * (s.est_error + UNIT_EPS * abs(s.value))
    return ExpSumValue(value, terms, min(est, 1e-12 * terms))


def _c3_context(v, M, chi):
    _require_nonprincipal(chi, M)
    if v % M == 0:
        raise NotUnit(f"v = {v} is not a unit mod {M}")
    _, inv = units_and_inverses(M)
    return v % M, np.asarray(inv), chi.value_array()


def c3_raw(v, M, chi):
    """Autocorrelation of D over the scaling v, as the congruence pair sum.

    M * sum over admissible b, b' mod M with b'^-1 = 1 + (b^-1 - 1)v of
    conj(chi)(b-1) chi(b'-1); enumerated directly over b.
    """
    v, inv, chiv = _c3_context(v, M, chi)
    total = 0j
    for b in range(2, M):
        ib = int(inv[b - 1])
        w = (1 + (ib - 1) * v) % M
        if w == 0:
            continue
        bp = int(inv[w - 1])
        if bp <= 1:
            continue
        total += chiv[b - 1].conjugate() * chiv[bp - 1]
    terms = M * (M - 2)
    return ExpSumValue(M * total, terms, 2 * UNIT_EPS * terms)


def c3_closed(v, M, chi):
    """Closed form M * sum over b mod M, b != 0,1 of conj(chi)(1 + b(v^-1 - 1))."""
    v, inv, chiv = _c3_context(v, M, chi)
    vbar = int(inv[v - 1])
    bs = np.arange(2, M, dtype=np.int64)
    idx = (1 + bs * (vbar - 1)) % M
    total = np.conj(chiv)[idx].sum()  # chi(0) = 0 drops the two excluded shifts
    terms = M * (M - 2)
    return ExpSumValue(M * complex(total), terms, 2 * UNIT_EPS * terms)


def _kloosterman_row(m1, modulus):
    """S(m1, y; modulus) for every y mod modulus, as a complex array."""
    xs, inv = units_and_inverses(modulus)
    w = unit_roots(modulus)
    base = w[(m1 % modulus) * xs % modulus]
    out = np.zeros(modulus, dtype=np.complex128)
    for y in range(modulus):
        out[y] = complex(np.sum(base * w[(y * inv) % modulus]))
    return out


def c4_correlation(c2, q2_tilde, p, p_prime, q1, m_dprime, M, h, n,
                   r_prime, ell, ell_prime, budget=DEFAULT_BUDGET):
    """Correlation of two Kloosterman sums against an additive character.

    sum over a mod r'*ell*ell' of
      S(c2 - q2t/p, (q1 q2t)^-1 m'' M h a; r' ell)
      * S(c2 - q2t/p', (q1 q2t)^-1 m'' M h a; r' ell')
      * e(a n / (r' ell ell'))
    with every inverse taken modulo the Kloosterman modulus it sits in.
    """
    if not (is_prime(ell) and is_prime(ell_prime)):
        raise ParameterInconsistency("ell and ell' must be prime")
    mod1 = r_prime * ell
    mod2 = r_prime * ell_prime
    big = r_prime * ell * ell_prime
    _check_budget(big, budget)
    if gcd(p, mod1) != 1 or gcd(p_prime, mod2) != 1:
        raise ParameterInconsistency("r' ell (resp. r' ell') must be prime to p (resp. p')")
    if gcd(q1 * q2_tilde, big) != 1:
        raise ParameterInconsistency("q1 * q2-tilde must be prime to r' ell ell'")
    m1 = (c2 - q2_tilde * mod_inv(p, mod1)) % mod1
    m2 = (c2 - q2_tilde * mod_inv(p_prime, mod2)) % mod2
    t1 = mod_inv(q1 * q2_tilde, mod1) * (m_dprime * M * h) % mod1
    t2 = mod_inv(q1 * q2_tilde, mod2) * (m_dprime * M * h) % mod2
    row1 = _kloosterman_row(m1, mod1)
    row2 = _kloosterman_row(m2, mod2)
    a = np.arange(big, dtype=np.int64)
    terms = row1[t1 * a % mod1] * row2[t2 * a % mod2] * unit_roots(big)[(n % big) * a % big]
    value = _fsum_complex(terms)
    phi1 = units_and_inverses(mod1)[0].size
    phi2 = units_and_inverses(mod2)[0].size
    count = int(big * phi1 * phi2)
    return ExpSumValue(value, count, 4 * UNIT_EPS * count)


def _voronoi_setup(n, m, m_prime, c, d, r, ell, M):
    if min(n, m, m_prime, c, d, r, ell, M) < 1:
        raise ParameterInconsistency("all parameters must be positive")
    if c % d != 0:
        raise ParameterInconsistency(f"d = {d} does not divide c = {c}")
    if (m * c) % m_prime != 0:
        raise ParameterInconsistency(f"m' = {m_prime} does not divide m*c = {m * c}")
    if not is_prime(ell):
        raise ParameterInconsistency(f"ell = {ell} is not prime")
    if M % 2 == 0 or not is_prime(M) or gcd(M, c) != 1:
        raise ParameterInconsistency("M must be an odd prime coprime to c")
    cc = c // d
    c1 = gcd(m_prime, cc)
    if c1 % ell == 0:
        raise ParameterInconsistency("the generic case requires ell not dividing c1")
    return cc, c1


def voronoi_char_sum_raw(n, m, m_prime, c, d, r, ell, M, budget=DEFAULT_BUDGET):
    """The beta-sum produced by Voronoi summation, by direct enumeration.

    sum over units beta mod m*c/m' subject to r*ell*M^-1 + beta*m' = 0
    mod c/d, of e(beta^-1 n / (m*c/m')).
    """
    _voronoi_setup(n, m, m_prime, c, d, r, ell, M)
    modulus = m * c // m_prime
    cc = c // d
    _check_budget(modulus, budget)
    xs, inv = units_and_inverses(modulus)
    if cc > 1:
        residue = (-r * ell * mod_inv(M, cc)) % cc
        keep = (xs * (m_prime % cc)) % cc == residue
        xs, inv = xs[keep], inv[keep]
    terms = unit_roots(modulus)[(inv * (n % modulus)) % modulus]
    return ExpSumValue(_fsum_complex(terms), int(xs.size), UNIT_EPS * max(int(xs.size), 1))


def _c2_part(q, c2):
    """Largest divisor of q supported on the primes of c2."""
    out = 1
    g = gcd(q, c2)
    while g > 1:
        out *= g
        q //= g
        g = gcd(q, c2)
    return out


def voronoi_char_sum_closed(n, m, m_prime, c, d, r, ell, M):
    """Closed form of the beta-sum: 0 off the divisibility strata, else
    q2 * c_{q1}(n) * e(-(r' ell)^-1 m'' M (n/q2) q1^-1 / c2).

    Writes c/d = c1*c2 with c1 = gcd(m', c/d), m'' = m'/c1, q = m*d/m''
    and q = q1*q2 with q2 the part of q supported on the primes of c2.
    Vanishes unless c1 | r and q2 | n (and unless the congruence is
    solvable at all, which needs gcd(r' ell, c2) = 1).  All inverses in
    the phase are taken mod c2; this is the exact CRT evaluation of the
    raw sum.
    """
    cc, c1 = _voronoi_setup(n, m, m_prime, c, d, r, ell, M)
    c2 = cc // c1
    m_dp = m_prime // c1
    if (m * d) % m_dp != 0:
        raise ParameterInconsistency("m'' does not divide m*d")
    q = m * d // m_dp
    q2 = _c2_part(q, c2)
    q1 = q // q2
    terms = m * c // m_prime
    if r % c1 != 0:
        return ExpSumValue(0j, terms, 0.0)
    r_p = r // c1
    if c2 > 1 and gcd(r_p * ell, c2) != 1:
        return ExpSumValue(0j, terms, 0.0)
    if n % q2 != 0:
        return ExpSumValue(0j, terms, 0.0)
    g = gcd(n, q1)
    ram = mobius(q1 // g) * euler_phi(q1) // euler_phi(q1 // g)
    if c2 > 1:
        g0 = (-mod_inv(r_p * ell, c2) * m_dp * M) % c2
        phase = RationalAngle(g0 * (n // q2) * mod_inv(q1, c2), c2).to_complex()
    else:
        phase = 1.0 + 0j
    value = q2 * ram * phase
    return ExpSumValue(value, terms, min(UNIT_EPS * abs(value), 1e-12 * terms))


def twisted_split_check(n, p, M, r, ell, c, psi, budget=DEFAULT_BUDGET):
    """The three stages of splitting S_psi(n p^2 M, r ell; c p M).

    Returns (lhs, rhs1, rhs2) where

      lhs  = S_psi(n p^2 M, r ell; c p M),
      rhs1 = -S_psi(n p^2, r ell M^-1; c p)        (None when M | c),
      rhs2 = -psi(r ell) conj(psi)(c M) g_{conj(psi)} S(n, r ell M^-1; c)
                                                    (None when p | c or p | r ell).

    When M | c the sum vanishes, so only lhs is returned.  The minus sign
    carries through both reductions: the mod-M factor of lhs is the
    Ramanujan sum c_M(unit) = -1, and the remaining factor of rhs1
    evaluates exactly to psi(r ell) conj(psi)(c M) g_{conj(psi)} S(...).
    """
    from .characters import gauss_sum

    if M % 2 == 0 or not is_prime(M):
        raise NotPrime(f"M = {M} is not an odd prime")
    if gcd(r * ell, M) != 1:
        raise ParameterInconsistency("r ell must be prime to M")
    if psi.modulus != p:
        raise ModulusMismatch("psi must be a character mod p")
    lhs = twisted_kloosterman(psi, n * p * p * M, r * ell, c * p * M, budget)
    if c % M == 0:
        return lhs, None, None
    mbar_cp = mod_inv(M, c * p)
    s1 = twisted_kloosterman(psi, n * p * p, r * ell * mbar_cp, c * p, budget)
    rhs1 = ExpSumValue(-s1.value, s1.terms, s1.est_error)
    if c % p == 0 or (r * ell) % p == 0:
        return lhs, rhs1, None
    mbar_c = mbar_cp % c if c > 1 else 0
    s = kloosterman(n, r * ell * mbar_c, c, budget)
    front = psi.eval(r * ell) * psi.conjugate().eval(c * M) * gauss_sum(psi.conjugate())
    value = -front * s.value
    terms = s.terms * p
    est = abs(front) * s.est_error + abs(s.value) * (p * UNIT_EPS + 3 * UNIT_EPS * abs(front))
    rhs2 = ExpSumValue(value, terms, min(est, 1e-12 * terms))
    return lhs, rhs1, rhs2
