"""Gauss rules and weighted integrals over the punctured plane.

Radial rules come from the Golub-Welsch eigenproblem of the Jacobi matrix.
Weighted integrals use z = sqrt(t/alpha) e^{i theta}, under which
    int f conj(g) |z|^{2 beta} e^{-alpha|z|^2} dlambda
        = (1 / (2 alpha^{beta+1})) int_0^{2 pi} int_0^inf f conj(g) t^beta e^{-t} dt dtheta.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, EigenSolverFailure, NotConverged
from .psi import FamilyParams, ModeIndex, norm_sq, psi_explicit, starred_min


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    a: Optional[float] = None

    def __len__(self):
        return len(self.nodes)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["node", "weight"])
            for x, wt in zip(self.nodes, self.weights):
                w.writerow(["%.17g" % x, "%.17g" % wt])


def _golub_welsch(diag, off, mu0):
    """Nodes from the Jacobi matrix eigenvalues, weights as Christoffel numbers.

    Weights read off the eigenvectors carry only absolute accuracy, so tail
    weights can be wrong by orders of magnitude; 1 / sum_k p_k(x)^2 over the
    orthonormal polynomials is accurate in the relative sense.
    """
    try:
        x = eigh_tridiagonal(diag, off, eigvals_only=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenSolverFailure(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise EigenSolverFailure("non-finite eigenvalues")
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1 / math.sqrt(mu0))
    total = p * p
    for k in range(len(diag) - 1):
        p_next = ((x - diag[k]) * p - (off[k - 1] * p_prev if k else 0)) / off[k]
        p_prev, p = p, p_next
        total += p * p
    w = 1 / total
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise EigenSolverFailure("Christoffel weights not finite")
    return x, w


def gauss_laguerre_rule(order: int, a: float = 0.0) -> QuadratureRule:
    """Generalized Gauss-Laguerre rule for t^a e^{-t} on (0, inf)."""
    if order < 1:
        raise DomainError("order must be at least 1")
    if a <= -1:
        raise DomainError(f"Laguerre weight needs a > -1, got {a}")
    k = np.arange(order)
    diag = 2 * k + a + 1.0
    kk = np.arange(1, order)
    off = np.sqrt(kk * (kk + a))
    x, w = _golub_welsch(diag, off, math.gamma(a + 1))
    return QuadratureRule("GaussLaguerre", x, w, a)


def gauss_hermite_rule(order: int) -> QuadratureRule:
    """Gauss-Hermite rule for e^{-x^2} on the real line."""
    if order < 1:
        raise DomainError("order must be at least 1")
    kk = np.arange(1, order)
    x, w = _golub_welsch(np.zeros(order), np.sqrt(kk / 2.0), math.sqrt(math.pi))
    return QuadratureRule("GaussHermite", x, w)


def angular_trapezoid_rule(order: int) -> QuadratureRule:
    if order < 1:
        raise DomainError("order must be at least 1")
    j = np.arange(order)
    return QuadratureRule("AngularTrapezoid", 2 * np.pi * j / order, np.full(order, 2 * np.pi / order))


def default_orders(max_m: int, max_n: int):
    """(radial, angular) orders that make psi-pair integrals exact under the caps."""
    return max_m + max_n + 5, 2 * (max_m + max_n) + 3


def inner_product_weighted(f: Callable, g: Callable, params: FamilyParams, radial_order: int,
                           angular_order: int, radial_shift: int = 0) -> complex:
    """int f conj(g) |z|^{2 beta} e^{-alpha|z|^2} dlambda by polar tensor quadrature.

    f and g take numpy arrays of complex points. With radial_shift s the rule
    for t^{beta-s} e^{-t} is used and t^s folded into the integrand, which keeps
    the rule exact for integrands with a t^{-s} pole; the integral exists only
    while beta - s > -1.
    """
    a, b = params.alpha, params.beta_eff
    if b <= -1:
        raise DomainError("the weight needs beta > -1")
    if b - radial_shift <= -1:
        raise DomainError(f"integrand not integrable at the origin (beta - shift = {b - radial_shift})")
    rad = gauss_laguerre_rule(radial_order, b - radial_shift)
    ang = angular_trapezoid_rule(angular_order)
    t, th = np.meshgrid(rad.nodes, ang.nodes, indexing="ij")
    z = np.sqrt(t / a) * np.exp(1j * th)
    vals = f(z) * np.conj(g(z))
    if radial_shift:
        vals = vals * t ** radial_shift
    w = np.outer(rad.weights, ang.weights)
    return complex(np.sum(w * vals)) / (2 * a ** (b + 1))


# psi Gram matrices -------------------------------------------------------------------

def _low_degree(params, idx) -> int:
    """Lowest total power of |z| in psi_{n,m}."""
    s = starred_min(idx.n, params.beta_eff + idx.m, params.beta_is_integer)
    return idx.m + idx.n - 2 * s


def pair_shift(params, i1: ModeIndex, i2: ModeIndex) -> Optional[int]:
    """Radial shift for <psi_i1, psi_i2>, or None when the integral diverges.

    Pairs with different angular frequencies integrate to zero in theta for
    every radius, so they are taken as iterated integrals with no shift.
    """
    if (i1.m - i1.n) != (i2.m - i2.n):
        return 0
    p0 = (_low_degree(params, i1) + _low_degree(params, i2)) // 2
    s = max(0, -p0)
    if params.beta_eff - s <= -1:
        return None
    return s


def gram_matrix(params: FamilyParams, max_n: int, max_m: int, radial_order=None, angular_order=None):
    """Gram matrix over admissible (n, m), n <= max_n, m <= max_m, in lexicographic order.

    Returns (indices, G, divergent) where divergent lists the pairs whose weighted
    integral does not exist; their entries are set to inf.
    """
    ro, ao = default_orders(max_m, max_n)
    ro = radial_order or ro
    ao = angular_order or ao
    idxs = [ModeIndex(n, m) for n in range(max_n + 1) for m in range(max_m + 1)
            if ModeIndex(n, m).admissible(params)]
    k = len(idxs)
    G = np.zeros((k, k), dtype=complex)
    divergent = []
    for i, a in enumerate(idxs):
        for j, b in enumerate(idxs):
            if j < i:
                G[i, j] = np.conj(G[j, i])
                continue
            s = pair_shift(params, a, b)
            if s is None:
                G[i, j] = complex(np.inf, 0)
                divergent.append((a, b))
                continue
            G[i, j] = inner_product_weighted(lambda z, a=a: psi_explicit(params, a, z),
                                             lambda z, b=b: psi_explicit(params, b, z),
                                             params, ro, ao, s)
    return idxs, G, divergent


def check_gram(params: FamilyParams, max_n: int = 4, max_m: int = 4, tol=1e-10):
    """Compare a Gram matrix with the closed-form norms.

    Returns (worst diagonal relative error, worst off-diagonal ratio, divergent pairs).
    Off-diagonals are measured against the geometric mean of the two diagonal norms.
    """
    idxs, G, divergent = gram_matrix(params, max_n, max_m)
    norms = np.array([norm_sq(params, i) for i in idxs])
    diag_err, off_err = 0.0, 0.0
    for i in range(len(idxs)):
        if np.isfinite(G[i, i]):
            diag_err = max(diag_err, abs(G[i, i] - norms[i]) / norms[i])
        for j in range(len(idxs)):
            if i != j and np.isfinite(G[i, j]):
                off_err = max(off_err, abs(G[i, j]) / math.sqrt(norms[i] * norms[j]))
    return diag_err, off_err, divergent


# Gaussian integrals over C and C^2 ----------------------------------------------------------

def gaussian_plane_rule(order: int, scale: float = 1.0):
    """Points and weights on C with sum W F(xi) ~ int F dlambda for F Gaussian-dominated.

    Tensor Gauss-Hermite on the real and imaginary axes after xi = eta/sqrt(scale);
    the factor e^{|eta|^2} is folded into the weights (in log space to avoid overflow).
    """
    rule = gauss_hermite_rule(order)
    x, y = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    lw = np.log(rule.weights)
    logw = lw[:, None] + lw[None, :] + x ** 2 + y ** 2
    pts = (x + 1j * y).ravel() / math.sqrt(scale)
    return pts, np.exp(logw).ravel() / scale


def _gh_tensor(F, dims, order, scale):
    """(integral, sum of |terms|); the second sets the scale of rounding error."""
    pts, w = gaussian_plane_rule(order, scale)
    if dims == 1:
        terms = w * F(pts)
    else:
        terms = np.outer(w, w) * F(pts[:, None], pts[None, :])
    return complex(np.sum(terms)), float(np.sum(np.abs(terms)))


def gaussian_plane_integral(F: Callable, dims: int = 1, order: int = 30, scale: float = 1.0,
                            rtol: Optional[float] = 1e-9) -> complex:
    """int_{C^dims} F dlambda by tensor Gauss-Hermite on each real axis.

    F receives one complex array per complex dimension and must return the
    full integrand; the Gaussian e^{-scale |xi|^2} is divided out and handled
    by the rule. With rtol set, the result is recomputed at order + 2 and a
    disagreement beyond rtol times the sum of |terms| (floored at 1) raises
    NotConverged: the integrand is not Gaussian-dominated.
    """
    if dims not in (1, 2):
        raise DomainError("dims must be 1 or 2")
    val, size = _gh_tensor(F, dims, order, scale)
    if rtol is not None:
        ref, _ = _gh_tensor(F, dims, order + 2, scale)
        if not np.isfinite(val) or abs(val - ref) > rtol * max(1.0, size):
            raise NotConverged(f"Gauss-Hermite results at orders {order}, {order + 2} disagree")
    return val
