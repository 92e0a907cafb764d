"""Scalar special functions behind the closed forms of the psi family.

Everything here works in plain double precision. Gamma ratios are always
formed as falling-factorial products so that arguments crossing the poles
of Gamma are handled exactly.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import BranchWarning, DomainError, PoleInDenominator

BESSEL_SERIES_MAX = 8.0
INCGAMMA_SERIES_MIN = 8.0

_EPS = 1e-17
_TINY = 1e-300


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as (log|value|, sign)."""

    log_magnitude: float
    sign: int

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        if x == 0:
            return cls(0.0, 0)
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue(0.0, 0)
        return SignedLogValue(self.log_magnitude + other.log_magnitude,
                              self.sign * other.sign)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return self
        return SignedLogValue(self.log_magnitude - other.log_magnitude,
                              self.sign * other.sign)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


def csum(values: Iterable[complex]) -> complex:
    """Correctly rounded sum of complex values (fsum on each component)."""
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def _is_nonneg_int(a: float) -> bool:
    return a >= 0 and a == math.floor(a)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return math.prod(a + j for j in range(k))


def falling_gamma_ratio(a: float, k: int) -> float:
    """Gamma(a+1)/Gamma(a-k+1) as the product a(a-1)...(a-k+1).

    Zero when a is a nonnegative integer below k.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    return math.prod(a - j for j in range(k))


def _gen_binom(top: float, k: int) -> float:
    return falling_gamma_ratio(top, k) / math.factorial(k)


def laguerre(n: int, a: float, x):
    """Generalized Laguerre polynomial L_n^{(a)}(x).

    Works for any real a (including a <= -1) and for real, complex or
    array-valued x.
    """
    if n < 0:
        raise DomainError("degree must be nonnegative")
    coeffs = [(-1) ** k * _gen_binom(n + a, n - k) / math.factorial(k) for k in range(n + 1)]
    if isinstance(x, np.ndarray):
        powers = np.ones_like(x)
        terms = []
        for c in coeffs:
            terms.append(c * powers)
            powers = powers * x
        return np.sum(np.stack(terms), axis=0)
    terms = [c * x ** k for k, c in enumerate(coeffs)]
    if isinstance(x, complex):
        return csum(terms)
    return math.fsum(terms)


def _check_kummer_denominator(n: int, c: float) -> None:
    if c <= 0 and c == math.floor(c) and -c <= n - 1:
        raise PoleInDenominator(f"1F1(-{n}; {c}; x): denominator parameter hits a pole")


def kummer_1f1_terminating(n: int, c: float, x):
    """Terminating Kummer series 1F1(-n; c; x)."""
    _check_kummer_denominator(n, c)
    t = 1.0
    terms = [t]
    for k in range(1, n + 1):
        t = t * (-n + k - 1) * x / ((c + k - 1) * k)
        terms.append(t)
    return csum(terms) if isinstance(x, complex) else math.fsum(terms)


def kummer_1f1_regularized(n: int, c: float, x):
    """(c)_n * 1F1(-n; c; x), finite for every real c.

    Each term is (-n)_k (c+k)_{n-k} x^k / k!, so poles of the plain series
    at c = 0, -1, ... cancel against the prefactor.
    """
    terms = []
    for k in range(n + 1):
        coef = pochhammer(-n, k) * pochhammer(c + k, n - k) / math.factorial(k)
        terms.append(coef * x ** k)
    return csum(terms) if isinstance(x, complex) else math.fsum(terms)


def hyp2f0_terminating(n: int, b: float, x):
    """Terminating 2F0(-n, b; ; x)."""
    t = 1.0
    terms = [t]
    for k in range(1, n + 1):
        t = t * (-n + k - 1) * (b + k - 1) * x / k
        terms.append(t)
    return csum(terms) if isinstance(x, complex) else math.fsum(terms)


def hyp1f1_series(a: float, c: float, x: complex, max_terms: int = 2000) -> complex:
    """Convergent Kummer series 1F1(a; c; x) for moderate |x|."""
    if c <= 0 and c == math.floor(c):
        raise PoleInDenominator("1F1 denominator parameter is a nonpositive integer")
    t = 1.0 + 0j
    terms = [t]
    for k in range(1, max_terms):
        t = t * (a + k - 1) * x / ((c + k - 1) * k)
        terms.append(t)
        if abs(t) < _EPS * abs(terms[0]) and k > abs(x):
            break
    return csum(terms)


def hyp0f1_series(c: float, x: complex, max_terms: int = 2000) -> complex:
    """0F1(; c; x) by its power series."""
    if c <= 0 and c == math.floor(c):
        raise PoleInDenominator("0F1 denominator parameter is a nonpositive integer")
    t = 1.0 + 0j
    terms = [t]
    for k in range(1, max_terms):
        t = t * x / ((c + k - 1) * k)
        terms.append(t)
        if abs(t) < _EPS and k * k > abs(x):
            break
    return csum(terms)


# Bessel J ------------------------------------------------------------------

def _bessel_series(nu: float, x: float) -> float:
    q = -(x * x) / 4
    t = 1.0
    terms = [t]
    k = 0
    while True:
        k += 1
        t *= q / (k * (nu + k))
        terms.append(t)
        if abs(t) < _EPS and k > x:
            break
    return (x / 2) ** nu / math.gamma(nu + 1) * math.fsum(terms)


def _bessel_miller(nu: float, x: float) -> float:
    # backward recurrence normalised by (x/2)^nu = sum (nu+2k) Gamma(nu+k)/k! J_{nu+2k}
    top = int(x + 30 + 8 * x ** (1 / 3))
    top += top % 2
    vals = np.zeros(top + 1)
    j_next, j = 0.0, 1e-300
    vals[top] = j
    for k in range(top, 0, -1):
        j_next, j = j, 2 * (nu + k) / x * j - j_next
        vals[k - 1] = j
        if abs(j) > 1e250:
            vals *= 1e-250
            j *= 1e-250
            j_next *= 1e-250
    c = math.gamma(nu + 1)
    norm = [c * vals[0]]
    for k in range(1, top // 2 + 1):
        if k > 1:
            c *= nu + k - 1
        c /= k
        norm.append((nu + 2 * k) * c * vals[2 * k])
    return vals[0] * (x / 2) ** nu / math.fsum(norm)


def _bessel_hankel(nu: float, x: float) -> float:
    mu = 4 * nu * nu
    p_terms, q_terms = [], []
    term, k, prev = 1.0, 0, math.inf
    while abs(term) <= prev and abs(term) > _EPS and k < 400:
        (p_terms if k % 2 == 0 else q_terms).append((-1) ** (k // 2) * term)
        prev = abs(term)
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8 * x)
    chi = x - (nu / 2 + 0.25) * math.pi
    p, q = math.fsum(p_terms), math.fsum(q_terms)
    return math.sqrt(2 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_asymptotic_min(nu: float) -> float:
    """Smallest argument handed to the large-argument expansion."""
    return max(40.0, 2.0 * nu * nu)


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind J_nu(x) for nu > -1, x >= 0.

    Power series up to x = 8, Miller backward recurrence in the middle
    range, Hankel asymptotic expansion beyond max(40, 2 nu^2).
    """
    if nu <= -1:
        raise DomainError(f"bessel_j needs nu > -1, got {nu}")
    if x < 0:
        raise DomainError("bessel_j needs x >= 0")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    if x <= BESSEL_SERIES_MAX:
        return _bessel_series(nu, x)
    if x < bessel_asymptotic_min(nu):
        return _bessel_miller(nu, x)
    return _bessel_hankel(nu, x)


# incomplete gamma ---------------------------------------------------------

def _principal_power(x: complex, s: float) -> complex:
    return cmath.exp(s * cmath.log(x))


def _flag_cut(s: float, x: complex) -> None:
    if x.imag == 0 and x.real < 0 and s != math.floor(s):
        warnings.warn(f"x={x} lies on the branch cut of x^{s}", BranchWarning, stacklevel=3)


def _lower_gamma_series(s: float, x: complex) -> complex:
    t = 1.0 / s + 0j
    terms = [t]
    k = 0
    while True:
        k += 1
        t *= x / (s + k)
        terms.append(t)
        if abs(t) < _EPS * abs(terms[0]) and k > abs(x):
            break
        if k > 5000:
            break
    return cmath.exp(s * cmath.log(x) - x) * csum(terms)


def _upper_gamma_cf(s: float, x: complex) -> complex:
    # modified Lentz evaluation of the Legendre continued fraction
    b = x + 1 - s
    c = 1 / _TINY
    d = 1 / b
    h = d
    for i in range(1, 5000):
        an = -i * (i - s)
        b += 2
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < 1e-16:
            break
    return cmath.exp(s * cmath.log(x) - x) * h


def _use_cf(s: float, x: complex) -> bool:
    # the continued fraction converges off the negative axis; the series loses
    # about e^{|x| + Re x} to cancellation for large |x| in the left half-plane
    return abs(x) > max(s, INCGAMMA_SERIES_MIN)


def lower_incomplete_gamma(s: float, x: complex) -> complex:
    """gamma(s, x) on the principal branch of x^s."""
    if s <= 0:
        raise DomainError("lower_incomplete_gamma needs s > 0")
    x = complex(x)
    if x == 0:
        return 0j
    _flag_cut(s, x)
    if _use_cf(s, x):
        return math.gamma(s) - _upper_gamma_cf(s, x)
    return _lower_gamma_series(s, x)


def upper_incomplete_gamma(s: float, x: complex) -> complex:
    """Gamma(s, x) on the principal branch of x^s."""
    if s <= 0:
        raise DomainError("upper_incomplete_gamma needs s > 0")
    x = complex(x)
    if x == 0:
        return complex(math.gamma(s))
    _flag_cut(s, x)
    if _use_cf(s, x):
        return _upper_gamma_cf(s, x)
    return math.gamma(s) - _lower_gamma_series(s, x)


# Hermite-type reference polynomials -----------------------------------------

def real_hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    h_prev, h = 0.0, 1.0
    for k in range(n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


def ito_hermite(m: int, n: int, alpha: float, z: complex) -> complex:
    """Complex Ito-Hermite polynomial H_{m,n}^alpha(z, zbar).

    Degree m in z and n in zbar, i.e. m derivatives in zbar and n in z of
    the Gaussian exp(-alpha |z|^2).
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    z = complex(z)
    zb = z.conjugate()
    terms = []
    for k in range(min(m, n) + 1):
        coef = (-1) ** k * math.factorial(k) * math.comb(m, k) * math.comb(n, k) * alpha ** (m + n - k)
        terms.append(coef * z ** (m - k) * zb ** (n - k))
    return csum(terms)
