"""Generating functions of psi_{n,m}: truncated series against closed forms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import jets
from .errors import BranchCutError, DomainError, HypothesisViolated, TruncationNotConverged
from .numerics import hyp0f1_series, hyp1f1_series, laguerre, lower_incomplete_gamma, pochhammer
from .numerics import upper_incomplete_gamma
from .psi import FamilyParams, ModeIndex, PuncturedPoint, psi_explicit

WINDOW = 5


@dataclass(frozen=True)
class TruncationSpec:
    max_m: int = 40
    max_n: int = 40
    tail_bound_target: float = 1e-13

    def __post_init__(self):
        if self.max_m < 0 or self.max_n < 0:
            raise ValueError("truncation orders must be nonnegative")
        if not self.tail_bound_target > 0:
            raise ValueError("tail_bound_target must be positive")


@dataclass(frozen=True)
class GenResult:
    series: complex
    closed: complex
    tail_bound: float
    closed_1f1: Optional[complex] = None
    closed_upper: Optional[complex] = None

    def __iter__(self):
        yield self.series
        yield self.closed
        if self.closed_1f1 is not None:
            yield self.closed_1f1

    def discrepancy(self) -> float:
        """Largest |closed form - series| / max(1, |closed|) over the closed forms."""
        forms = [c for c in (self.closed, self.closed_1f1, self.closed_upper) if c is not None]
        return max(abs(c - self.series) / max(1.0, abs(self.closed)) for c in forms)

    def tolerance(self, floor: float = 1e-9) -> float:
        return max(floor, 10 * self.tail_bound)


def _tail(mags: Sequence[float], target: float, what: str) -> float:
    """Accept a truncated series from its final term magnitudes; return a tail estimate.

    The final WINDOW magnitudes must all sit below the target and may not
    exceed the WINDOW before them (terms need not be strictly monotone,
    since individual psi values pass through zeros).
    """
    mags = list(mags)
    if len(mags) <= 2 * WINDOW:
        last = mags[-1] if mags else 0.0
        if last >= target and max(mags) > 0:
            raise TruncationNotConverged(f"{what}: last term {last:.3e} above target")
        return last
    tail = mags[-WINDOW:]
    prev = mags[-2 * WINDOW:-WINDOW]
    if max(tail) >= target:
        raise TruncationNotConverged(f"{what}: final terms reach {max(tail):.3e} >= {target:.1e}")
    if max(tail) > max(prev):
        raise TruncationNotConverged(f"{what}: terms not decreasing over the final {WINDOW} indices")
    # geometric estimate from the envelope ratio across the two windows
    ratio = (max(tail) / max(prev)) ** (1 / WINDOW) if max(prev) > 0 else 0.0
    if ratio >= 1:
        return max(tail) * 10
    return max(tail) * ratio / (1 - ratio)


def _z(z) -> complex:
    return z.z if isinstance(z, PuncturedPoint) else complex(z)


def _ppow(x: complex, s: float) -> complex:
    return cmath.exp(s * cmath.log(x))


def _check_log_split(total: complex, parts, what: str, tol=1e-12) -> None:
    """Log(total) must equal the sum of Log(parts); otherwise branches disagree."""
    diff = cmath.log(total) - sum(cmath.log(p) for p in parts)
    if abs(diff) > tol:
        raise BranchCutError(f"{what}: principal logarithms differ by {diff:.3g}")


def _psi_grid(params, z, nmax, mmax, m0=0):
    grid = np.zeros((nmax + 1, mmax + 1), dtype=complex)
    for n in range(nmax + 1):
        for m in range(m0, mmax + 1):
            grid[n, m] = psi_explicit(params, ModeIndex(n, m), z)
    return grid


def _double_series(terms: np.ndarray, target: float):
    mag = np.abs(terms)
    t_n = _tail(mag.max(axis=1), target, "series in n")
    t_m = _tail(mag.max(axis=0), target, "series in m")
    # each tail index bound counts all entries of the neglected rows/columns
    total = t_n * terms.shape[1] + t_m * terms.shape[0]
    s = terms.sum()
    return complex(s), float(total)


def gen_full(u, v, params: FamilyParams, z, trunc: TruncationSpec = TruncationSpec()) -> GenResult:
    """sum u^m v^n/(m! n!) psi_{n,m} = (1 - v/z)^beta e^{zu + alpha v zbar - uv}."""
    z, u, v = _z(z), complex(u), complex(v)
    b, a = params.beta_eff, params.alpha
    if b <= -1:
        raise DomainError("needs beta > -1")
    if abs(v) >= abs(z):
        raise DomainError("needs |v| < |z|")
    grid = _psi_grid(params, z, trunc.max_n, trunc.max_m)
    n = np.arange(trunc.max_n + 1)[:, None]
    m = np.arange(trunc.max_m + 1)[None, :]
    fact = np.vectorize(math.factorial, otypes=[float])
    weights = u ** m / fact(m) * v ** n / fact(n)
    series, tail = _double_series(weights * grid, trunc.tail_bound_target)
    closed = _ppow(1 - v / z, b) * cmath.exp(z * u + a * v * z.conjugate() - u * v)
    return GenResult(series, closed, tail)


def gen_full_u_derivative(k: int, v, params: FamilyParams, z) -> complex:
    """k-th u-derivative at u = 0 of the gen_full closed form, through a jet in u."""
    z, v = _z(z), complex(v)
    a, b = params.alpha, params.beta_eff
    u = jets.jet_variable("z", (0, 0), (k, 0))
    jet = _ppow(1 - v / z, b) * jets.jet_exp(z * u + a * v * z.conjugate() - u * v)
    return jets.wirtinger_derivative(jet, k, 0)


def gen_partial_v(v, k: int, params: FamilyParams, z, trunc: TruncationSpec = TruncationSpec()) -> GenResult:
    """sum_n psi_{n,k} v^n/n! = (z - v)^{k+beta} z^{-beta} e^{alpha v zbar}."""
    z, v = _z(z), complex(v)
    a, b = params.alpha, params.beta_eff
    if b <= -1:
        raise DomainError("needs beta > -1")
    if abs(v) >= abs(z):
        raise DomainError("needs |v| < |z|")
    idx0 = ModeIndex(0, k).check(params)
    if not params.beta_is_integer:
        PuncturedPoint(z).check_branch(params)
        PuncturedPoint(z - v).check_branch(params)
        _check_log_split(z - v, [z, 1 - v / z], "(z - v)^(k+beta) z^(-beta)")
    terms, mags = [], []
    t = 1.0 + 0j
    for n in range(trunc.max_n + 1):
        if n:
            t *= v / n
        term = t * psi_explicit(params, ModeIndex(n, idx0.m), z)
        terms.append(term)
        mags.append(abs(term))
    tail = _tail(mags, trunc.tail_bound_target, "series in n")
    series = complex(np.sum(terms))
    closed = _ppow(z - v, k + b) * _ppow(z, -b) * cmath.exp(a * v * z.conjugate())
    return GenResult(series, closed, tail)


def gen_partial_u(u, n: int, params: FamilyParams, z, trunc: TruncationSpec = TruncationSpec()) -> GenResult:
    """sum_{m>=0} u^m/m! psi_{n,m} = (-1)^n n! z^{-n} e^{uz} L_n^{(beta-n)}(alpha|z|^2 - uz)."""
    z, u = _z(z), complex(u)
    a, b = params.alpha, params.beta_eff
    if b <= -1:
        raise DomainError("the series over m >= 0 is only defined for beta > -1")
    terms, mags = [], []
    t = 1.0 + 0j
    for m in range(trunc.max_m + 1):
        if m:
            t *= u / m
        term = t * psi_explicit(params, ModeIndex(n, m), z)
        terms.append(term)
        mags.append(abs(term))
    tail = _tail(mags, trunc.tail_bound_target, "series in m")
    series = complex(np.sum(terms))
    x = a * abs(z) ** 2 - u * z
    closed = (-1) ** n * math.factorial(n) * z ** (-n) * cmath.exp(u * z) * laguerre(n, b - n, complex(x))
    return GenResult(series, closed, tail)


def gen_weighted(u, v, params: FamilyParams, z, trunc: TruncationSpec = TruncationSpec()) -> GenResult:
    """sum u^m v^n/((beta+1)_m n!) psi_{n,m} in three closed forms.

    closed      beta u^{-beta} z^{-beta} e^{u(z-v) + alpha zbar v} gamma(beta, u(z-v))
    closed_1f1  (1 - v/z)^beta e^{alpha zbar v} 1F1(1; beta+1; u(z-v))
    closed_upper  same as closed with gamma = Gamma(beta) - Gamma(beta, .)
    """
    z, u, v = _z(z), complex(u), complex(v)
    a, b = params.alpha, params.beta_eff
    if b <= 0:
        raise DomainError("needs beta > 0")
    if abs(v) >= abs(z):
        raise DomainError("needs |v| < |z|")
    x = u * (z - v)
    if x.real <= 0:
        raise HypothesisViolated("needs Re(u(z - v)) > 0")
    if not params.beta_is_integer:
        _check_log_split(x, [u, z, 1 - v / z], "(u(z - v))^beta against u^beta z^beta (1 - v/z)^beta")
    grid = _psi_grid(params, z, trunc.max_n, trunc.max_m)
    n = np.arange(trunc.max_n + 1)[:, None]
    m = np.arange(trunc.max_m + 1)[None, :]
    poch = np.array([pochhammer(b + 1, int(k)) for k in range(trunc.max_m + 1)])[None, :]
    fact_n = np.array([math.factorial(int(k)) for k in range(trunc.max_n + 1)], dtype=float)[:, None]
    series, tail = _double_series(u ** m / poch * v ** n / fact_n * grid, trunc.tail_bound_target)
    pref = b * _ppow(u, -b) * _ppow(z, -b) * cmath.exp(x + a * z.conjugate() * v)
    closed = pref * lower_incomplete_gamma(b, x)
    closed_upper = pref * (math.gamma(b) - upper_incomplete_gamma(b, x))
    closed_1f1 = _ppow(1 - v / z, b) * cmath.exp(a * z.conjugate() * v) * hyp1f1_series(1.0, b + 1, x)
    return GenResult(series, closed, tail, closed_1f1, closed_upper)


def bilinear_closed(t, k: int, params: FamilyParams, z, w) -> complex:
    """z^k w^k (1-t)^{-(beta+k+1)} e^{-t alpha(|z|^2+|w|^2)/(1-t)} 0F1(; beta+k+1; alpha^2|z|^2|w|^2 t/(1-t)^2)."""
    z, w, t = _z(z), _z(w), complex(t)
    a, b = params.alpha, params.beta_eff
    c = b + k + 1
    r2 = abs(z) ** 2 + abs(w) ** 2
    arg = a * a * abs(z) ** 2 * abs(w) ** 2 * t / (1 - t) ** 2
    return (z * w) ** k * _ppow(1 - t, -c) * cmath.exp(-t * a * r2 / (1 - t)) * hyp0f1_series(c, arg)


def bilinear_closed_printed(t, k: int, params: FamilyParams, z, w) -> complex:
    """The display as printed: positive exponent and t in the 0F1 denominator."""
    z, w, t = _z(z), _z(w), complex(t)
    a, b = params.alpha, params.beta_eff
    c = b + k + 1
    r2 = abs(z) ** 2 + abs(w) ** 2
    arg = abs(a * z * w) ** 2 / (t * (1 - t) ** 2)
    return (w * z) ** k * _ppow(1 - t, -c) * cmath.exp(a * t * r2 / (1 - t)) * hyp0f1_series(c, arg)


def gen_bilinear(t, k: int, params: FamilyParams, z, w, trunc: TruncationSpec = TruncationSpec()) -> GenResult:
    """sum_n t^n psi_{n,n+k}(z) psi_{n,n+k}(w) / (n! (1+beta+k)_n) against its 0F1 closed form."""
    z, w, t = _z(z), _z(w), complex(t)
    b = params.beta_eff
    if b + k <= -1:
        raise DomainError("needs beta + k > -1")
    if abs(t) >= 1:
        raise DomainError("needs |t| < 1")
    terms, mags = [], []
    coef = 1.0 + 0j
    for n in range(trunc.max_n + 1):
        if n:
            coef *= t / (n * (b + k + n))
        idx = ModeIndex(n, n + k)
        term = coef * psi_explicit(params, idx, z) * psi_explicit(params, idx, w)
        terms.append(term)
        mags.append(abs(term))
    tail = _tail(mags, trunc.tail_bound_target, "bilinear series")
    return GenResult(complex(np.sum(terms)), bilinear_closed(t, k, params, z, w), tail)
