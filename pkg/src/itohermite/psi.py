"""Evaluation of the two-parameter family psi_{n,m}^{alpha,beta}.

psi_{n,m}(z) = (-1)^n z^{-beta} e^{alpha|z|^2} d_z^n ( z^{beta+m} e^{-alpha|z|^2} )

Five independent routes are offered (explicit sum, Laguerre, Kummer 1F1,
2F0 and the Rodrigues formula itself through Wirtinger jets).
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import BranchCutError, DomainError, InadmissibleIndex
from .numerics import (
    SignedLogValue,
    csum,
    falling_gamma_ratio,
    hyp2f0_terminating,
    kummer_1f1_regularized,
    kummer_1f1_terminating,
    laguerre,
)

INTEGER_TOL = 1e-9
BRANCH_MARGIN = 1e-6


@dataclass(frozen=True)
class FamilyParams:
    alpha: float
    beta: float
    beta_is_integer: bool = field(init=False)
    beta_rounded: int = field(init=False)

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        r = round(self.beta)
        object.__setattr__(self, "beta_is_integer", abs(self.beta - r) <= INTEGER_TOL)
        object.__setattr__(self, "beta_rounded", int(r))

    @property
    def beta_eff(self) -> float:
        """beta with near-integers snapped to the integer."""
        return float(self.beta_rounded) if self.beta_is_integer else float(self.beta)


@dataclass(frozen=True)
class ModeIndex:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0:
            raise InadmissibleIndex(f"n must be nonnegative, got {self.n}")

    def admissible(self, params: FamilyParams) -> bool:
        if params.beta_is_integer:
            return self.m >= -params.beta_rounded
        return self.m > -params.beta - 1

    def check(self, params: FamilyParams) -> "ModeIndex":
        if not self.admissible(params):
            raise InadmissibleIndex(f"m={self.m} violates m > -beta-1 for beta={params.beta}")
        return self


@dataclass(frozen=True)
class PuncturedPoint:
    z: complex
    branch_margin: float = BRANCH_MARGIN

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if self.z == 0:
            raise DomainError("the point must be nonzero")

    def near_cut(self) -> bool:
        return abs(abs(cmath.phase(self.z)) - math.pi) < self.branch_margin

    def check_branch(self, params: FamilyParams) -> "PuncturedPoint":
        if not params.beta_is_integer and self.near_cut():
            raise BranchCutError(f"z={self.z} within {self.branch_margin} rad of the negative real axis")
        return self


@dataclass(frozen=True)
class BiOrder:
    r: int
    s: int


class EvalRoute(enum.Enum):
    ExplicitSum = "explicit"
    LaguerreForm = "laguerre"
    Kummer1F1 = "kummer"
    Hyp2F0 = "hyp2f0"
    RodriguesJet = "rodrigues"


def _as_point(z) -> PuncturedPoint:
    return z if isinstance(z, PuncturedPoint) else PuncturedPoint(z)


def weight_rho(params: FamilyParams, z) -> float:
    r2 = abs(_as_point(z).z) ** 2
    return r2 ** params.beta_eff * math.exp(-params.alpha * r2)


def starred_min(n: int, b: float, b_is_integer: bool) -> int:
    if b_is_integer:
        return min(n, int(round(b)))
    return n


def _coeff_signed_log(params: FamilyParams, m: int, n: int, k: int) -> SignedLogValue:
    b = params.beta_eff + m
    acc = SignedLogValue(math.log(math.comb(n, k)) + (n - k) * math.log(params.alpha), (-1) ** k)
    for j in range(k):
        acc = acc * SignedLogValue.from_float(b - j)
    return acc


@functools.lru_cache(maxsize=65536)
def _coeff(alpha: float, b: float, m: int, n: int, k: int) -> float:
    val = (-1) ** k * math.comb(n, k) * falling_gamma_ratio(b + m, k) * alpha ** (n - k)
    if math.isfinite(val) and (val != 0 or falling_gamma_ratio(b + m, k) == 0):
        return val
    # out of double range: fall back to the signed log
    return _coeff_signed_log(FamilyParams(alpha, b), m, n, k).to_float()


def coeff_c(params: FamilyParams, m: int, n: int, k: int) -> float:
    """(-1)^k binom(n,k) (beta+m)(beta+m-1)...(beta+m-k+1) alpha^{n-k}.

    The plain product is formed; the signed log is only a magnitude guard
    since a log/exp round trip costs about log|c| ulps.
    """
    if not 0 <= k <= n:
        raise DomainError("need 0 <= k <= n")
    return _coeff(params.alpha, params.beta_eff, m, n, k)


def _sstar(params: FamilyParams, idx: ModeIndex) -> int:
    return starred_min(idx.n, params.beta_eff + idx.m, params.beta_is_integer)


def psi_explicit(params: FamilyParams, idx: ModeIndex, z, w=None):
    """Explicit sum over k of c_k z^{m-k} w^{n-k}; w defaults to conj(z).

    Accepts scalars or numpy arrays. No branch enters: all powers are integral.
    """
    n, m = idx.n, idx.m
    kmax = _sstar(params, idx)
    if isinstance(z, np.ndarray):
        z = z.astype(complex)
        if w is None:
            r, phase = np.abs(z), np.exp(1j * (m - n) * np.angle(z))
            out = np.zeros(z.shape)
            for k in range(kmax + 1):
                out = out + coeff_c(params, m, n, k) * r ** (m + n - 2 * k)
            return out * phase
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for k in range(kmax + 1):
            out = out + coeff_c(params, m, n, k) * z ** (m - k) * w ** (n - k)
        return out
    z = complex(z)
    if w is None:
        # on the diagonal z^{m-k} zbar^{n-k} = r^{m+n-2k} e^{i(m-n)theta}:
        # sum the real radial parts, apply the phase once
        r = abs(z)
        terms = [coeff_c(params, m, n, k) * r ** (m + n - 2 * k) for k in range(kmax + 1)]
        return math.fsum(terms) * cmath.exp(1j * (m - n) * cmath.phase(z))
    w = complex(w)
    terms = [coeff_c(params, m, n, k) * z ** (m - k) * w ** (n - k) for k in range(kmax + 1)]
    return csum(terms)


def psi_laguerre(params: FamilyParams, idx: ModeIndex, z: complex) -> complex:
    n, m = idx.n, idx.m
    x = params.alpha * abs(z) ** 2
    return (-1) ** n * math.factorial(n) * z ** (m - n) * laguerre(n, params.beta_eff + m - n, x)


def psi_kummer(params: FamilyParams, idx: ModeIndex, z: complex) -> complex:
    n, m = idx.n, idx.m
    x = params.alpha * abs(z) ** 2
    c = params.beta_eff + m - n + 1
    if c <= 0 and c == math.floor(c) and -c <= n - 1:
        # (c)_n 1F1(-n; c; x) stays finite when c hits a pole of the series
        scaled = kummer_1f1_regularized(n, c, x)
    else:
        scaled = falling_gamma_ratio(params.beta_eff + m, n) * kummer_1f1_terminating(n, c, x)
    return (-1) ** n * z ** (m - n) * scaled


def psi_hyp2f0(params: FamilyParams, idx: ModeIndex, z: complex) -> complex:
    n, m = idx.n, idx.m
    r2 = abs(z) ** 2
    if r2 == 0:
        raise DomainError("the 2F0 form needs z != 0")
    a = params.alpha
    return a ** n * z ** m * z.conjugate() ** n * hyp2f0_terminating(n, -params.beta_eff - m, -1 / (a * r2))


def psi_jet(params: FamilyParams, idx: ModeIndex, base, orders) -> jets.WirtingerJet:
    """Jet of psi(z, w) with z, w independent, straight from the Rodrigues formula."""
    p, q = orders
    n, m = idx.n, idx.m
    a, b = params.alpha, params.beta_eff
    big = (n + p, q)
    zj = jets.jet_variable("z", base, big)
    wj = jets.jet_variable("zbar", base, big)
    inner = jets.jet_pow_principal(zj, b + m) * jets.jet_exp(-a * zj * wj)
    dn = jets.jet_dz(inner, n) if n else inner
    zs = jets.jet_variable("z", base, orders)
    ws = jets.jet_variable("zbar", base, orders)
    outer = jets.jet_pow_principal(zs, -b) * jets.jet_exp(a * zs * ws)
    return (-1) ** n * outer * dn


def psi_rodrigues(params: FamilyParams, idx: ModeIndex, z: complex, w=None) -> complex:
    """Rodrigues formula through a jet of order (n, 0) in z with w frozen."""
    z = complex(z)
    w = z.conjugate() if w is None else complex(w)
    return psi_jet(params, idx, (z, w), (0, 0)).value


_ROUTES = {
    EvalRoute.ExplicitSum: psi_explicit,
    EvalRoute.LaguerreForm: psi_laguerre,
    EvalRoute.Kummer1F1: psi_kummer,
    EvalRoute.Hyp2F0: psi_hyp2f0,
    EvalRoute.RodriguesJet: psi_rodrigues,
}


def eval_psi(route: EvalRoute, params: FamilyParams, idx: ModeIndex, z) -> complex:
    pt = _as_point(z)
    idx.check(params)
    pt.check_branch(params)
    return complex(_ROUTES[EvalRoute(route)](params, idx, pt.z))


def in_l2(params: FamilyParams, idx: ModeIndex) -> bool:
    """Whether |psi_{n,m}|^2 |z|^{2 beta} e^{-alpha|z|^2} is integrable at the origin.

    |psi|^2 behaves like |z|^{2(m+n-2s)} there, s the starred minimum; this
    always holds for integer beta and reduces to beta + m - n > -1 otherwise.
    """
    d = idx.m + idx.n - 2 * _sstar(params, idx)
    return d + params.beta_eff > -1


def norm_sq(params: FamilyParams, idx: ModeIndex) -> float:
    """Squared norm pi alpha^n n! Gamma(beta+m+1) / alpha^{m+beta+1}.

    This is the closed form; the weighted integral it stands for is finite
    only when in_l2 holds.
    """
    idx.check(params)
    a, b = params.alpha, params.beta_eff
    if b + idx.m + 1 <= 0:
        raise InadmissibleIndex("beta+m+1 must be positive")
    logv = (idx.n * math.log(a) + math.lgamma(idx.n + 1) + math.lgamma(b + idx.m + 1)
            - (idx.m + b + 1) * math.log(a))
    return math.pi * math.exp(logv)


def biorder(params: FamilyParams, idx: ModeIndex) -> BiOrder:
    """Orders (r, s) of the zero or pole at the origin."""
    idx.check(params)
    s = _sstar(params, idx)
    return BiOrder(idx.m - s, idx.n - s)
