"""Integral representations of psi_{n,m} and the associated integral transforms.

Everything here is evaluated by quadrature and compared against direct
evaluation of psi. Gaussian integrals over C or C^2 are only attempted when
the integrand is a polynomial (or entire factor) times a Gaussian; branch
factors with non-integer exponents are refused rather than approximated.
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, InadmissibleIndex, NotConverged
from .identities import VerificationReport, _report, residual
from .numerics import bessel_j, laguerre
from .psi import FamilyParams, ModeIndex, PuncturedPoint, norm_sq, psi_explicit, starred_min
from .quad import gauss_laguerre_rule, gaussian_plane_rule, pair_shift, inner_product_weighted

PLANE_ORDER = 40
C2_ORDER = 30
BESSEL_ORDER = 60
GROWTH_RTOL = 1e-9


class TransformKind(enum.Enum):
    BargmannForward = "bargmann-forward"
    BargmannInverse = "bargmann-inverse"
    STransform = "s-transform"
    BesselRep = "bessel"
    GaussianRepC2 = "gaussian-c2"
    MonomialProjectionRep = "monomial-projection"
    GA3Rep = "ga3"
    LaguerreIntegralFormula = "laguerre-integral"


@dataclass(frozen=True)
class TransformSpec:
    which: TransformKind
    params: FamilyParams
    fixed_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "which", TransformKind(self.which))
        if self.which in (TransformKind.BargmannForward, TransformKind.BargmannInverse):
            ModeIndex(0, self.fixed_index).check(self.params)
        elif self.fixed_index < 0:
            raise InadmissibleIndex("the fixed index must be nonnegative")


def _require_integer_beta(params: FamilyParams, what: str, minimum=0) -> int:
    if not params.beta_is_integer:
        raise DomainError(f"{what}: non-integer beta gives a branch factor inside a Gaussian integral; refused")
    if params.beta_rounded < minimum:
        raise DomainError(f"{what}: needs integer beta >= {minimum}")
    return params.beta_rounded


def _plane_sum(integrand: Callable, order: int, scale: float, check: bool):
    """Sum over the last axis of integrand(points) against the plane rule.

    The growth check recomputes at order + 4 and measures the change against
    the sum of |terms|, the scale of rounding error.
    """
    pts, w = gaussian_plane_rule(order, scale)
    terms = w * integrand(pts)
    val = np.sum(terms, axis=-1)
    if check:
        pts2, w2 = gaussian_plane_rule(order + 4, scale)
        ref = np.sum(w2 * integrand(pts2), axis=-1)
        size = np.maximum(1.0, np.sum(np.abs(terms), axis=-1))
        if np.any(~np.isfinite(val)) or np.any(np.abs(val - ref) > GROWTH_RTOL * size):
            raise NotConverged(f"plane rule of order {order} not converged")
    return val


def _out(val, z):
    return complex(val) if np.ndim(z) == 0 else val


def _col(z):
    return np.atleast_1d(np.asarray(z, dtype=complex))[:, None]


# Bessel representation -------------------------------------------------------------

def _bessel_pre(params, idx, z):
    z = PuncturedPoint(z).check_branch(params).z
    nu = params.beta_eff + idx.m - idx.n
    if nu <= -1:
        raise DomainError(f"the Bessel representation needs beta + m - n > -1, got {nu}")
    return z, nu


def bessel_rep(params: FamilyParams, idx: ModeIndex, z, order: int = BESSEL_ORDER, check=True) -> complex:
    """(-1)^n z^{m-n} e^{alpha|z|^2} (sqrt(alpha)|z|)^{-nu} int_0^inf e^{-t} t^{(n+m+beta)/2} J_nu(2|z|sqrt(alpha t)) dt.

    nu = beta + m - n. Near t = 0 the integrand is t^{beta+m} times an entire
    function, so the Laguerre rule for t^{beta+m} e^{-t} is used and the Bessel
    factor divided by t^{beta+m} is what the rule sees.
    """
    z, nu = _bessel_pre(params, idx, z)
    a, b = params.alpha, params.beta_eff
    n, m = idx.n, idx.m
    r = abs(z)
    c = 2 * r * math.sqrt(a)
    power = (n + m + b) / 2 - (b + m)

    def integral(k):
        rule = gauss_laguerre_rule(k, b + m)
        vals = [t ** power * bessel_j(nu, c * math.sqrt(t)) for t in rule.nodes]
        return math.fsum(w * v for w, v in zip(rule.weights, vals))

    val = integral(order)
    if check:
        ref = integral(order + 8)
        if abs(val - ref) > GROWTH_RTOL * max(1.0, abs(ref)):
            raise NotConverged("Bessel representation not converged")
    return (-1) ** n * z ** (m - n) * math.exp(a * r * r) * (math.sqrt(a) * r) ** (-nu) * val


def bessel_rep_x(params: FamilyParams, idx: ModeIndex, z, printed: bool = False) -> complex:
    """The same representation after t = x^2:

    2 (-1)^n z^{m-n} e^{alpha|z|^2} (sqrt(alpha)|z|)^{-nu} int_0^inf x^{n+m+beta+1} J_nu(2 sqrt(alpha)|z| x) e^{-x^2} dx.
    The printed display drops the factor 2 that dt = 2x dx brings in.
    """
    z, nu = _bessel_pre(params, idx, z)
    a, b = params.alpha, params.beta_eff
    n, m = idx.n, idx.m
    r = abs(z)
    c = 2 * math.sqrt(a) * r

    def f(x):
        return x ** (n + m + b + 1) * bessel_j(nu, c * x) * math.exp(-x * x)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, 0, np.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
    factor = 1.0 if printed else 2.0
    return factor * (-1) ** n * z ** (m - n) * math.exp(a * r * r) * (math.sqrt(a) * r) ** (-nu) * val


# Gaussian representations -----------------------------------------------------------

def gaussian_rep_c2(params: FamilyParams, idx: ModeIndex, z, order: int = C2_ORDER, check=True) -> complex:
    """(1/(pi^2 z^beta)) int_{C^2} u^m v^n (z - vbar)^beta e^{-|u|^2-|v|^2+alpha vbar zbar+ubar z-ubar vbar} dlambda(u,v)."""
    b = _require_integer_beta(params, "gaussian_rep_c2")
    idx.check(params)
    if idx.m < 0:
        raise InadmissibleIndex("needs m >= 0")
    z = PuncturedPoint(z).z
    a, n, m = params.alpha, idx.n, idx.m
    pts, w = gaussian_plane_rule(order, 1.0)

    def total(pts, w):
        u, v = pts[:, None], pts[None, :]
        ub, vb = np.conj(u), np.conj(v)
        F = u ** m * v ** n * (z - vb) ** b * np.exp(-abs(u) ** 2 - abs(v) ** 2 + a * vb * np.conj(z) + ub * z - ub * vb)
        terms = np.outer(w, w) * F
        return complex(np.sum(terms)), float(np.sum(np.abs(terms)))

    val, size = total(pts, w)
    if check:
        ref, _ = total(*gaussian_plane_rule(order + 2, 1.0))
        if abs(val - ref) > GROWTH_RTOL * max(1.0, size):
            raise NotConverged("C^2 representation not converged")
    return val / (math.pi ** 2 * z ** b)


def ga3_rep(params: FamilyParams, idx: ModeIndex, z, order: int = PLANE_ORDER, check=True) -> complex:
    """((-1)^{m+beta} alpha^{n+1}/(pi z^beta)) int xi^n xibar^{m+beta} e^{-alpha(|xi|^2-|z|^2+xi z-xibar zbar)} dlambda."""
    b = _require_integer_beta(params, "ga3_rep", minimum=-10 ** 9)
    if b + idx.m < 0:
        raise DomainError("ga3_rep needs beta + m >= 0")
    z = PuncturedPoint(z).z
    a, n, m = params.alpha, idx.n, idx.m
    zc = _col(z)

    def F(x):
        return x ** n * np.conj(x) ** (m + b) * np.exp(-a * (abs(x) ** 2 - abs(zc) ** 2 + x * zc - np.conj(x) * np.conj(zc)))

    val = _plane_sum(F, order, a, check)[0]
    return (-1) ** (m + b) * a ** (n + 1) / (math.pi * z ** b) * val


def monomial_projection_rep(params: FamilyParams, n: int, k: int, z, order: int = PLANE_ORDER,
                            check=True, printed: bool = False) -> complex:
    """psi_{n,k} = (1/(pi z^beta)) int vbar^n (z - v)^{k+beta} e^{alpha v zbar} e^{-|v|^2} dlambda(v).

    This projects the partial generating function in v onto vbar^n. The
    printed display has no 1/pi (and garbled indices); printed=True drops it.
    """
    b = _require_integer_beta(params, "monomial_projection_rep", minimum=-10 ** 9)
    if b + k < 0:
        raise DomainError("needs beta + k >= 0 (otherwise (z - v)^{k+beta} has a pole)")
    if n < 0:
        raise InadmissibleIndex("n must be nonnegative")
    z = PuncturedPoint(z).z
    a = params.alpha
    zc = _col(z)

    def F(v):
        return np.conj(v) ** n * (zc - v) ** (k + b) * np.exp(a * v * np.conj(zc) - abs(v) ** 2)

    val = _plane_sum(F, order, 1.0, check)[0] / z ** b
    return val if printed else val / math.pi


def laguerre_integral(beta: float, n: int, alpha: float, u, z, order: int = PLANE_ORDER, check=True) -> complex:
    """((-1)^n z^{n-beta}/(n! pi)) int vbar^n (z - v)^beta e^{alpha v zbar - u v} e^{-|v|^2} dlambda(v).

    alpha = 0 is allowed here, as in the specialization L_n^{(beta-n)}(z).
    """
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    if beta <= -1:
        raise DomainError("needs beta > -1")
    if abs(beta - round(beta)) > 1e-9:
        raise DomainError("non-integer beta gives a branch factor inside a Gaussian integral; refused")
    b = int(round(beta))
    z = PuncturedPoint(z).z
    u = complex(u)
    zc = _col(z)

    def F(v):
        return np.conj(v) ** n * (zc - v) ** b * np.exp(alpha * v * np.conj(zc) - u * v - abs(v) ** 2)

    val = _plane_sum(F, order, 1.0, check)[0]
    return (-1) ** n * z ** (n - b) / (math.factorial(n) * math.pi) * val


def laguerre_integral_formula(params: FamilyParams, n: int, u, z, **kw) -> complex:
    """Integral side of L_n^{(beta-n)}(alpha|z|^2 - u z)."""
    return laguerre_integral(params.beta_eff, n, params.alpha, u, z, **kw)


def laguerre_direct(beta: float, n: int, alpha: float, u, z) -> complex:
    z = complex(z)
    return complex(laguerre(n, beta - n, alpha * abs(z) ** 2 - complex(u) * z))


# transforms -------------------------------------------------------------------------------

def fock_basis(alpha: float, n: int) -> Callable:
    """e_n(w) = (alpha^{n+1}/(pi n!))^{1/2} w^n, orthonormal for e^{-alpha|w|^2} dlambda."""
    c = math.sqrt(alpha ** (n + 1) / (math.pi * math.factorial(n)))
    return lambda w: c * np.asarray(w) ** n


def bargmann_constant(params: FamilyParams, m: int) -> float:
    b = params.beta_eff
    return (params.alpha / math.pi) * math.sqrt(params.alpha ** (b + m) / math.gamma(b + m + 1))


def bargmann_image_constant(params: FamilyParams, n: int, m: int) -> float:
    """The transform of e_n is this multiple of psi_{n,m}."""
    a, b = params.alpha, params.beta_eff
    return math.sqrt(a ** (b + m + 1) / (math.pi * a ** n * math.gamma(b + m + 1) * math.factorial(n)))


def _bargmann_pre(spec: TransformSpec):
    p = spec.params
    b = _require_integer_beta(p, "Bargmann transform", minimum=0)
    m = spec.fixed_index
    if b + m < 0:
        raise DomainError("needs beta + m >= 0")
    return p.alpha, b, m


def bargmann_forward(spec: TransformSpec, f: Callable, z, order: int = PLANE_ORDER, check=True):
    """C z^m int (1 - wbar/z)^{beta+m} e^{-alpha wbar (w - zbar)} f(w) dlambda(w), vectorized in z."""
    a, b, m = _bargmann_pre(spec)
    zc = _col(z)
    if np.any(zc == 0):
        raise DomainError("the point must be nonzero")

    def F(w):
        wb = np.conj(w)
        return (zc - wb) ** (b + m) * np.exp(-a * wb * (w - np.conj(zc))) * f(w)

    val = _plane_sum(F, order, a, check) * zc[:, 0] ** (-b)
    return _out(bargmann_constant(spec.params, m) * val, z)


def bargmann_inverse(spec: TransformSpec, f: Callable, w, order: int = PLANE_ORDER, check=True,
                     printed: bool = False):
    """C int (zbar - w)^{beta+m} z^beta e^{-alpha(zbar - w) z} f(z) dlambda(z), vectorized in w.

    This is the adjoint of the forward map with respect to |z|^{2 beta} e^{-alpha|z|^2};
    the printed display has zbar^{-beta} in place of z^beta, i.e. it omits |z|^{2 beta}.
    """
    a, b, m = _bargmann_pre(spec)
    wc = _col(w)

    def F(z):
        zb = np.conj(z)
        tilt = zb ** (-b) if printed else z ** b
        return (zb - wc) ** (b + m) * tilt * np.exp(-a * (zb - wc) * z) * f(z)

    return _out(bargmann_constant(spec.params, m) * _plane_sum(F, order, a, check), w)


def s_kernel(params: FamilyParams, n: int, u, z):
    """s_n(u, z) = (-1)^n n! z^{-n} e^{uz} L_n^{(beta-n)}(alpha|z|^2 - uz)."""
    a, b = params.alpha, params.beta_eff
    return (-1) ** n * math.factorial(n) * z ** (-n) * np.exp(u * z) * laguerre(n, b - n, a * abs(z) ** 2 - u * z)


def s_transform(spec: TransformSpec, f: Callable, z, order: int = PLANE_ORDER, check=True,
                printed: bool = False):
    """int s_n(ubar, z) f(u) e^{-|u|^2} dlambda(u), vectorized in z.

    With ubar in the kernel, u^j maps to pi psi_{n,j}. The printed form uses
    s_n(u, z), which is holomorphic in u, so every u^j with j >= 1 maps to 0.
    """
    p, n = spec.params, spec.fixed_index
    if p.beta_eff <= -1:
        raise DomainError("needs beta > -1")
    zc = _col(z)
    if np.any(zc == 0):
        raise DomainError("the point must be nonzero")

    def F(u):
        uu = u if printed else np.conj(u)
        return s_kernel(p, n, uu, zc) * np.exp(-abs(u) ** 2) * f(u)

    return _out(_plane_sum(F, order, 1.0, check), z)


# verification -------------------------------------------------------------------------------

def _rel(val, ref) -> float:
    return abs(val - ref) / max(abs(ref), 1e-300)


def check_bessel_rep(params, idx, z, tol=1e-7) -> List[VerificationReport]:
    ref = psi_explicit(params, idx, complex(z))
    t_form = bessel_rep(params, idx, z)
    x_form = bessel_rep_x(params, idx, z)
    return [_report("ZZ", *residual(t_form, [ref]), tol),
            _report("ZZ2", *residual(x_form, [ref]), tol, errata=True)]


def check_gaussian_rep_c2(params, idx, z, tol=1e-7) -> VerificationReport:
    return _report("Ghanmi", *residual(gaussian_rep_c2(params, idx, z), [psi_explicit(params, idx, complex(z))]), tol)


def check_ga3_rep(params, idx, z, tol=1e-7) -> VerificationReport:
    return _report("GA3", *residual(ga3_rep(params, idx, z), [psi_explicit(params, idx, complex(z))]), tol)


def check_monomial_projection(params, n, k, z, tol=1e-7) -> VerificationReport:
    ref = psi_explicit(params, ModeIndex(n, k), complex(z))
    return _report("IntREp3", *residual(monomial_projection_rep(params, n, k, z), [ref]), tol, errata=True)


def check_laguerre_integral(params, n, u, z, tol=1e-7) -> VerificationReport:
    """The integral identity at (alpha, u) plus its (alpha=0, u=-1) and (alpha=1, u=0) cases."""
    b = params.beta_eff
    cases = [(params.alpha, u), (0.0, -1.0), (1.0, 0.0)]
    res = [residual(laguerre_integral(b, n, a, uu, z), [laguerre_direct(b, n, a, uu, z)]) for a, uu in cases]
    return _report("INtLaguerre", max(r[0] for r in res), max(r[1] for r in res), tol)


def check_bargmann_basis(params, m, n, zs, tol=1e-8) -> VerificationReport:
    spec = TransformSpec(TransformKind.BargmannForward, params, m)
    zs = np.asarray(zs, dtype=complex)
    got = bargmann_forward(spec, fock_basis(params.alpha, n), zs)
    c = bargmann_image_constant(params, n, m)
    ref = np.array([c * psi_explicit(params, ModeIndex(n, m), z) for z in zs])
    res = [residual(g, [r]) for g, r in zip(got, ref)]
    return _report("Bargmann", max(r[0] for r in res), max(r[1] for r in res), tol)


def bargmann_roundtrip(params, m, n, ws, printed=False):
    spec = TransformSpec(TransformKind.BargmannForward, params, m)
    fwd = lambda z: bargmann_forward(spec, fock_basis(params.alpha, n), z, check=False)  # noqa: E731
    ws = np.asarray(ws, dtype=complex)
    # the printed kernel has a zbar^{-beta} singularity, so the rule is not exact there
    back = bargmann_inverse(spec, fwd, ws, check=not printed, printed=printed)
    return back, fock_basis(params.alpha, n)(ws)


def check_bargmann_roundtrip(params, m, n, ws, tol=1e-7) -> VerificationReport:
    back, ref = bargmann_roundtrip(params, m, n, ws)
    res = [residual(g, [r]) for g, r in zip(back, ref)]
    return _report("Bargmann-inverse", max(r[0] for r in res), max(r[1] for r in res), tol,
                   errata=not params.beta_is_integer or params.beta_rounded != 0)


def proportionality_spread(values, reference) -> tuple:
    """Least-squares constant c with values ~ c reference, and max|values - c ref| / max|c ref|.

    Ratios at single points are unusable near zeros of the reference, hence the fit.
    """
    v = np.asarray(values, dtype=complex)
    r = np.asarray(reference, dtype=complex)
    c = np.vdot(r, v) / np.vdot(r, r)
    scale = np.max(np.abs(c * r))
    if scale == 0:
        return complex(c), math.inf
    return complex(c), float(np.max(np.abs(v - c * r)) / scale)


def check_s_transform(params, n, j, zs, tol=1e-7, printed=False) -> VerificationReport:
    spec = TransformSpec(TransformKind.STransform, params, n)
    zs = np.asarray(zs, dtype=complex)
    got = s_transform(spec, lambda u: fock_basis(params.alpha, j)(u), zs, printed=printed)
    ref = np.array([psi_explicit(params, ModeIndex(n, j), z) for z in zs])
    c, spread = proportionality_spread(got, ref)
    # the constant itself is pi times the normalization of e_j
    expected = math.pi * math.sqrt(params.alpha ** (j + 1) / (math.pi * math.factorial(j)))
    err = max(spread, abs(c - expected) / expected)
    return _report("S-printed" if printed else "S", err, err, tol, errata=not printed)


def bargmann_gram(params, m, size=5, order=PLANE_ORDER):
    """Weighted Gram matrix of the images of e_0..e_{size-1}; the identity when the map is unitary."""
    spec = TransformSpec(TransformKind.BargmannForward, params, m)
    imgs = [(lambda z, n=n: bargmann_forward(spec, fock_basis(params.alpha, n), z.ravel(), order, False)
             .reshape(z.shape)) for n in range(size)]
    ro, ao = size + abs(m) + params.beta_rounded + 6, 2 * (size + abs(m)) + 5
    G = np.zeros((size, size), dtype=complex)
    for i in range(size):
        for k in range(size):
            s = pair_shift(params, ModeIndex(i, m), ModeIndex(k, m))
            G[i, k] = inner_product_weighted(imgs[i], imgs[k], params, ro, ao, s)
    return G


def check_bargmann_unitarity(params, m, size=5, tol=1e-7) -> VerificationReport:
    G = bargmann_gram(params, m, size)
    err = float(np.max(np.abs(G - np.eye(size))))
    return _report("Bargmann-unitarity", err, err, tol)


def export_csv(path, zs: Sequence[complex], values: Sequence[complex]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re_z", "im_z", "re_value", "im_value"])
        for z, v in zip(zs, values):
            z, v = complex(z), complex(v)
            w.writerow(["%.17g" % z.real, "%.17g" % z.imag, "%.17g" % v.real, "%.17g" % v.imag])
