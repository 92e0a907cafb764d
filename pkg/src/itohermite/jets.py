"""Truncated bivariate Taylor series in (z, zbar) as independent variables.

A jet of orders (p, q) at base (z0, w0) stores c[i, j] so that the germ is
sum c[i, j] (z - z0)^i (w - w0)^j, with w standing for zbar. Wirtinger
derivatives are then read off as i! j! c[i, j].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import BranchCutError, OrderExceeded, ShapeMismatch, ZeroBaseError

BRANCH_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class WirtingerJet:
    base_z: complex
    base_zbar: complex
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2:
            raise ShapeMismatch("coeffs must be a 2-d array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order_z(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def order_zbar(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def orders(self) -> Tuple[int, int]:
        return self.order_z, self.order_zbar

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0, 0])

    def _like(self, coeffs) -> "WirtingerJet":
        return WirtingerJet(self.base_z, self.base_zbar, coeffs)

    def __add__(self, other):
        if isinstance(other, WirtingerJet):
            return jet_add(self, other)
        c = self.coeffs.copy()
        c[0, 0] += other
        return self._like(c)

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, WirtingerJet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, WirtingerJet):
            return jet_mul(self, jet_pow_principal(other, -1))
        return jet_scale(self, 1 / other)

    def __rtruediv__(self, other):
        return jet_scale(jet_pow_principal(self, -1), other)

    def __pow__(self, s):
        return jet_pow_principal(self, s)


def _check_compatible(a: WirtingerJet, b: WirtingerJet) -> None:
    if a.coeffs.shape != b.coeffs.shape:
        raise ShapeMismatch(f"jet orders differ: {a.orders} vs {b.orders}")
    if a.base_z != b.base_z or a.base_zbar != b.base_zbar:
        raise ShapeMismatch("jets expanded at different base points")


def jet_constant(value: complex, base, orders) -> WirtingerJet:
    p, q = orders
    c = np.zeros((p + 1, q + 1), dtype=complex)
    c[0, 0] = value
    return WirtingerJet(complex(base[0]), complex(base[1]), c)


def jet_variable(which: str, base, orders) -> WirtingerJet:
    """Jet of the coordinate function z or zbar."""
    p, q = orders
    if p < 0 or q < 0:
        raise ValueError("orders must be nonnegative")
    c = np.zeros((p + 1, q + 1), dtype=complex)
    if which == "z":
        c[0, 0] = base[0]
        if p >= 1:
            c[1, 0] = 1
    elif which == "zbar":
        c[0, 0] = base[1]
        if q >= 1:
            c[0, 1] = 1
    else:
        raise ValueError(f"unknown variable {which!r}")
    return WirtingerJet(complex(base[0]), complex(base[1]), c)


def on_diagonal(z0: complex) -> Tuple[complex, complex]:
    """Base point (z0, conj(z0)) for evaluation on the real plane."""
    z0 = complex(z0)
    return z0, z0.conjugate()


def jet_add(a: WirtingerJet, b: WirtingerJet) -> WirtingerJet:
    _check_compatible(a, b)
    return a._like(a.coeffs + b.coeffs)


def jet_scale(a: WirtingerJet, s: complex) -> WirtingerJet:
    return a._like(a.coeffs * s)


def jet_mul(a: WirtingerJet, b: WirtingerJet) -> WirtingerJet:
    """Truncated Cauchy product in both indices."""
    _check_compatible(a, b)
    p, q = a.orders
    out = np.zeros_like(a.coeffs)
    ac, bc = a.coeffs, b.coeffs
    for i in range(p + 1):
        for j in range(q + 1):
            if ac[i, j] != 0:
                out[i:, j:] += ac[i, j] * bc[: p + 1 - i, : q + 1 - j]
    return a._like(out)


def jet_exp(a: WirtingerJet) -> WirtingerJet:
    """exp of a jet.

    With e = exp(a), d_z e = e d_z a gives row I >= 1; the first row uses
    the same relation in the zbar direction.
    """
    p, q = a.orders
    ac = a.coeffs
    e = np.zeros_like(ac)
    e[0, 0] = cmath.exp(ac[0, 0])
    for j in range(1, q + 1):
        e[0, j] = sum(l * ac[0, l] * e[0, j - l] for l in range(1, j + 1)) / j
    for i in range(1, p + 1):
        for j in range(q + 1):
            acc = 0j
            for k in range(1, i + 1):
                for l in range(j + 1):
                    acc += k * ac[k, l] * e[i - k, j - l]
            e[i, j] = acc / i
    return a._like(e)


def _is_integer(s) -> bool:
    return float(s) == math.floor(float(s))


def jet_pow_principal(a: WirtingerJet, exponent: float,
                      branch_margin: float = BRANCH_MARGIN) -> WirtingerJet:
    """a**exponent on the principal branch of the logarithm.

    Integer exponents need no branch and skip the cut check.
    """
    a00 = complex(a.coeffs[0, 0])
    if a00 == 0:
        raise ZeroBaseError("constant term of the base jet is zero")
    s = float(exponent)
    if _is_integer(s):
        p00 = a00 ** int(s)
    else:
        if abs(abs(cmath.phase(a00)) - math.pi) < branch_margin:
            raise BranchCutError(f"base value {a00} lies on the cut of the principal power")
        p00 = cmath.exp(s * cmath.log(a00))
    p, q = a.orders
    ac = a.coeffs
    out = np.zeros_like(ac)
    out[0, 0] = p00
    # a * d(a^s) = s * da * a^s, in z for rows i >= 1 and in zbar for row 0
    for j in range(1, q + 1):
        acc = sum(((s + 1) * l - j) * ac[0, l] * out[0, j - l] for l in range(1, j + 1))
        out[0, j] = acc / (j * a00)
    for i in range(1, p + 1):
        for j in range(q + 1):
            acc = 0j
            for k in range(i + 1):
                for l in range(j + 1):
                    if k == 0 and l == 0:
                        continue
                    acc += ((s + 1) * k - i) * ac[k, l] * out[i - k, j - l]
            out[i, j] = acc / (i * a00)
    return a._like(out)


def wirtinger_derivative(a: WirtingerJet, i: int, j: int) -> complex:
    """d^{i+j} f / dz^i dzbar^j at the base point."""
    if i < 0 or j < 0 or i > a.order_z or j > a.order_zbar:
        raise OrderExceeded(f"derivative ({i},{j}) beyond jet orders {a.orders}")
    return complex(math.factorial(i) * math.factorial(j) * a.coeffs[i, j])


def jet_dz(a: WirtingerJet, times: int = 1) -> WirtingerJet:
    """Jet of d^times f/dz^times, one order lower in z per derivative."""
    if times > a.order_z:
        raise OrderExceeded("not enough z-order to differentiate")
    c = a.coeffs
    for _ in range(times):
        c = c[1:, :] * np.arange(1, c.shape[0])[:, None]
    return a._like(c)


def jet_dzbar(a: WirtingerJet, times: int = 1) -> WirtingerJet:
    if times > a.order_zbar:
        raise OrderExceeded("not enough zbar-order to differentiate")
    c = a.coeffs
    for _ in range(times):
        c = c[:, 1:] * np.arange(1, c.shape[1])[None, :]
    return a._like(c)


def truncate(a: WirtingerJet, orders) -> WirtingerJet:
    p, q = orders
    if p > a.order_z or q > a.order_zbar:
        raise OrderExceeded("cannot extend a jet by truncation")
    return a._like(a.coeffs[: p + 1, : q + 1])
