"""Differential operators applied pointwise through Wirtinger jets.

Operators are maps on jets, so compositions are exact up to truncation;
``apply_operator`` evaluates them at the base point. Each term is formed
at its natural orders and then truncated to a common target order, which
loses nothing because low coefficients of a product only involve low
coefficients of the factors.
"""

from __future__ import annotations

import enum
import math
from typing import Callable

from . import jets
from .errors import BranchCutError, DomainError
from .identities import VerificationReport, _report, residual
from .jets import WirtingerJet, jet_dz, jet_dzbar, truncate
from .psi import FamilyParams, ModeIndex, PuncturedPoint, psi_jet

JetEvaluable = Callable[[tuple, tuple], WirtingerJet]


class OperatorId(enum.Enum):
    DeltaAlphaBeta = "delta"
    TildeDelta = "tilde_delta"
    MagneticD = "magnetic"
    A = "A"
    AStar = "A_star"
    BStar = "B_star"
    EulerDiff = "euler_diff"
    Landau = "landau"


def _zw(g: WirtingerJet):
    base = (g.base_z, g.base_zbar)
    return jets.jet_variable("z", base, g.orders), jets.jet_variable("zbar", base, g.orders)


def _lower(f: WirtingerJet, k: int):
    p, q = f.orders
    return (p - k, q - k)


def _sum_at(orders, *terms):
    out = truncate(terms[0], orders)
    for t in terms[1:]:
        out = out + truncate(t, orders)
    return out


# first-order maps -----------------------------------------------------------------

def op_A(f):
    return truncate(jet_dzbar(f), _lower(f, 1))


def op_astar(f, a, b):
    """-(f_z + (b/z - a zbar) f) = -rho^{-1} d_z(rho f), rho = |z|^{2b} e^{-a|z|^2}."""
    z, w = _zw(f)
    return -_sum_at(_lower(f, 1), jet_dz(f), (b / z - a * w) * f)


def op_bstar(f, a, b):
    """f_zbar + (b/zbar - a z) f = rho^{-1} d_zbar(rho f)."""
    z, w = _zw(f)
    return _sum_at(_lower(f, 1), jet_dzbar(f), (b / w - a * z) * f)


def _euler_terms(f):
    fz, fw = jet_dz(f), jet_dzbar(f)
    return _zw(fz)[0] * fz, _zw(fw)[1] * fw


def op_euler_diff(f):
    ez, ew = _euler_terms(f)
    return _sum_at(_lower(f, 1), ez, -ew)


# second-order maps -------------------------------------------------------------------

def op_delta(f, a, b):
    """-f_{z zbar} + (a - b/|z|^2) zbar f_zbar."""
    fw = jet_dzbar(f)
    z, w = _zw(fw)
    return _sum_at(_lower(f, 1), -jet_dz(fw), (a - b / (z * w)) * w * fw)


def op_tilde_delta(f, a, b):
    """-f_{z zbar} + a z f_z - (b/z) f_zbar."""
    fz, fw = jet_dz(f), jet_dzbar(f)
    return _sum_at(_lower(f, 1), -jet_dzbar(fz), a * _zw(fz)[0] * fz, -(b / _zw(fw)[0]) * fw)


def op_magnetic(f, a, b):
    """-(f_{z zbar} + k (z f_z - zbar f_zbar)) + k^2 |z|^2 f with k = a - b/|z|^2."""
    ez, ew = _euler_terms(f)
    orders = _lower(f, 1)
    fl = truncate(f, orders)
    z, w = _zw(fl)
    k = a - b / (z * w)
    euler = _sum_at(orders, ez, -ew)
    return _sum_at(orders, -jet_dzbar(jet_dz(f)), -(k * euler), k * k * z * w * fl)


def op_landau(f, a):
    """(i d_x - 2a y)^2 + (i d_y + 2a x)^2 expanded in real coordinates.

    d_x = d_z + d_zbar and d_y = i(d_z - d_zbar); x, y are built from z, zbar.
    """
    def dx(g):
        return _sum_at(_lower(g, 1), jet_dz(g), jet_dzbar(g))

    def dy(g):
        return 1j * _sum_at(_lower(g, 1), jet_dz(g), -jet_dzbar(g))

    def x_of(g):
        z, w = _zw(g)
        return (z + w) * 0.5

    def y_of(g):
        z, w = _zw(g)
        return (z - w) * (-0.5j)

    def px(g):  # i d_x - 2 a y
        return _sum_at(_lower(g, 1), 1j * dx(g), -2 * a * y_of(g) * g)

    def py(g):  # i d_y + 2 a x
        return _sum_at(_lower(g, 1), 1j * dy(g), 2 * a * x_of(g) * g)

    return _sum_at(_lower(f, 2), px(px(f)), py(py(f)))


def jet_operator(op: OperatorId, f: WirtingerJet, params: FamilyParams) -> WirtingerJet:
    a, b = params.alpha, params.beta_eff
    op = OperatorId(op)
    if op is OperatorId.DeltaAlphaBeta:
        return op_delta(f, a, b)
    if op is OperatorId.TildeDelta:
        return op_tilde_delta(f, a, b)
    if op is OperatorId.MagneticD:
        return op_magnetic(f, a, b)
    if op is OperatorId.A:
        return op_A(f)
    if op is OperatorId.AStar:
        return op_astar(f, a, b)
    if op is OperatorId.BStar:
        return op_bstar(f, a, b)
    if op is OperatorId.EulerDiff:
        return op_euler_diff(f)
    return op_landau(f, a)


def apply_operator(op: OperatorId, f: JetEvaluable, params: FamilyParams, z) -> complex:
    pt = z if isinstance(z, PuncturedPoint) else PuncturedPoint(z)
    if pt.z == 0:
        raise DomainError("operators are applied on the punctured plane")
    jet = f(jets.on_diagonal(pt.z), (2, 2))
    return jet_operator(op, jet, params).value


# test functions -----------------------------------------------------------------------

def psi_evaluable(params: FamilyParams, idx: ModeIndex) -> JetEvaluable:
    idx.check(params)
    return lambda base, orders: psi_jet(params, idx, base, orders)


def rho_jet(a: float, b: float, base, orders) -> WirtingerJet:
    """Jet of |z|^{2b} e^{-a|z|^2} written as (z w)^b e^{-a z w}."""
    z = jets.jet_variable("z", base, orders)
    w = jets.jet_variable("zbar", base, orders)
    zw = z * w
    return jets.jet_pow_principal(zw, b) * jets.jet_exp(-a * zw)


def weighted_psi_evaluable(params: FamilyParams, idx: ModeIndex) -> JetEvaluable:
    """|z|^{2 beta} e^{-alpha|z|^2} psi^{2 alpha, 2 beta}_{n,m}, the magnetic eigenfunction."""
    doubled = FamilyParams(2 * params.alpha, 2 * params.beta_eff)
    idx.check(doubled)

    def f(base, orders):
        return rho_jet(params.alpha, params.beta_eff, base, orders) * psi_jet(doubled, idx, base, orders)
    return f


def corpus_function(a: int, b: int, c: float, gamma: float) -> JetEvaluable:
    """z^a zbar^b e^{-c z zbar} z^gamma."""
    def f(base, orders):
        z = jets.jet_variable("z", base, orders)
        w = jets.jet_variable("zbar", base, orders)
        out = jets.jet_exp(-c * z * w)
        if a:
            out = out * jets.jet_pow_principal(z, a)
        if b:
            out = out * jets.jet_pow_principal(w, b)
        if gamma:
            out = out * jets.jet_pow_principal(z, gamma)
        return out
    return f


TEST_CORPUS = [(a, b, c, g) for a in range(4) for b in range(4) for c in (0.5, 1.0) for g in (0.0, 0.5)]


# checks ------------------------------------------------------------------------------------

def _eigen_setup(op: OperatorId, params, idx):
    op = OperatorId(op)
    if op is OperatorId.MagneticD:
        return weighted_psi_evaluable(params, idx)
    if op is OperatorId.Landau:
        return weighted_psi_evaluable(FamilyParams(params.alpha, 0.0), idx)
    return psi_evaluable(params, idx)


def expected_eigenvalue(op: OperatorId, params: FamilyParams, idx: ModeIndex) -> float:
    a = params.alpha
    table = {
        OperatorId.DeltaAlphaBeta: a * idx.n,
        OperatorId.TildeDelta: a * idx.m,
        OperatorId.EulerDiff: idx.m - idx.n,
        OperatorId.MagneticD: a * (2 * idx.n + 1),
        OperatorId.Landau: 4 * a * (2 * idx.n + 1),
    }
    return table[OperatorId(op)]


def eigen_residual(op: OperatorId, params, idx, z, expected_eigenvalue: float) -> float:
    """|Op f - lambda f| / (1 + |f|) at z, f the eigenfunction attached to op."""
    pt = z if isinstance(z, PuncturedPoint) else PuncturedPoint(z)
    pt.check_branch(params)
    f = _eigen_setup(op, params, idx)
    jet = f(jets.on_diagonal(pt.z), (2, 2))
    val = jet.value
    out = jet_operator(op, jet, params).value
    if OperatorId(op) is OperatorId.Landau:
        out = jet_operator(op, jet, FamilyParams(params.alpha, 0.0)).value
    return abs(out - expected_eigenvalue * val) / (1 + abs(val))


def check_factorizations(params: FamilyParams, f: JetEvaluable, z, tol=1e-10) -> VerificationReport:
    """Commutator, two factorizations of Delta and two of the magnetic operator.

    The magnetic factorizations carry the constants forced by a direct
    check on the Gaussian ground state: D = B*_{-a,-b} A*_{a,b} - a
    = A*_{a,b} B*_{-a,-b} + a (the opposite signs fail there).
    """
    pt = z if isinstance(z, PuncturedPoint) else PuncturedPoint(z)
    if pt.near_cut():
        raise BranchCutError("factorization checks stay off the negative real axis")
    a, b = params.alpha, params.beta_eff
    jet = f(jets.on_diagonal(pt.z), (2, 2))
    fv = jet.value
    res = []
    aas = op_A(op_astar(jet, a, b)).value
    asa = op_astar(op_A(jet), a, b).value
    res.append(residual(aas - asa, [a * fv]))
    delta = op_delta(jet, a, b).value
    res.append(residual(delta, [asa]))
    res.append(residual(delta, [aas, -a * fv]))
    mag = op_magnetic(jet, a, b).value
    res.append(residual(mag, [op_bstar(op_astar(jet, a, b), -a, -b).value, -a * fv]))
    res.append(residual(mag, [op_astar(op_bstar(jet, -a, -b), a, b).value, a * fv]))
    return _report("factorizations", max(r[0] for r in res), max(r[1] for r in res), tol, errata=True)


def check_factorizations_printed(params: FamilyParams, f: JetEvaluable, z) -> float:
    """Largest absolute residual of the magnetic factorizations with the printed constants."""
    a, b = params.alpha, params.beta_eff
    jet = f(jets.on_diagonal(complex(z)), (2, 2))
    fv = jet.value
    mag = op_magnetic(jet, a, b).value
    r1 = abs(mag - op_bstar(op_astar(jet, a, b), -a, -b).value - a * fv)
    r2 = abs(mag - op_astar(op_bstar(jet, -a, -b), a, b).value + a * fv)
    return max(r1, r2)


def check_operator_relations(params: FamilyParams, f: JetEvaluable, z, tol=1e-11) -> VerificationReport:
    """~Delta - Delta = alpha (E - Ebar), and Landau = 4 D_{alpha,0}."""
    pt = z if isinstance(z, PuncturedPoint) else PuncturedPoint(z)
    a, b = params.alpha, params.beta_eff
    jet = f(jets.on_diagonal(pt.z), (2, 2))
    td = op_tilde_delta(jet, a, b).value
    d = op_delta(jet, a, b).value
    e = op_euler_diff(jet).value
    r1 = residual(td - d, [a * e])
    r2 = residual(op_landau(jet, a).value, [4 * op_magnetic(jet, a, 0.0).value])
    return _report("operator-relations", max(r1[0], r2[0]), max(r1[1], r2[1]), tol)


def ground_state_magnetic_value(alpha: float, z: complex) -> float:
    """exp(-alpha|z|^2): the magnetic ground state, eigenvalue alpha."""
    return math.exp(-alpha * abs(z) ** 2)
