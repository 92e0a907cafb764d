import cmath
import math

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from itohermite import genfun as G
from itohermite.errors import DomainError, HypothesisViolated, TruncationNotConverged
from itohermite.psi import EvalRoute, FamilyParams, ModeIndex, eval_psi


def psi_mp(alpha, beta, n, m, z):
    """Laguerre form of psi in mpmath, used as an independent series oracle."""
    z = mpmath.mpc(z)
    return (-1) ** n * mpmath.factorial(n) * z ** (m - n) * mpmath.laguerre(n, beta + m - n, alpha * abs(z) ** 2)


def ok(res, floor=1e-9):
    return res.discrepancy() <= res.tolerance(floor)


def test_gen_full_examples():
    p = FamilyParams(1.0, 0.5)
    r = G.gen_full(0.7 - 0.2j, 0, p, 1.2 + 0.3j)
    assert abs(r.closed - cmath.exp((1.2 + 0.3j) * (0.7 - 0.2j))) < 1e-14 and ok(r)
    r = G.gen_full(0, 0.5, FamilyParams(1.0, 1.0), 2, G.TruncationSpec(max_n=30, max_m=30))
    assert abs(r.closed - 0.75 * cmath.exp(0.5 * 2)) < 1e-14
    assert abs(r.series - r.closed) <= 1e-10
    # v-coefficient at u=0 by a central difference of the closed form
    b, z = 0.8, 1.1 + 0.6j
    p = FamilyParams(1.3, b)
    h = 1e-4
    c1 = (G.gen_full(0, h, p, z).closed - G.gen_full(0, -h, p, z).closed) / (2 * h)
    assert abs(c1 - eval_psi(EvalRoute.ExplicitSum, p, ModeIndex(1, 0), z)) < 1e-7


def test_gen_full_u_derivative_matches_partial_v():
    p = FamilyParams(1.2, 0.7)
    z, v = 1.5 + 0.4j, 0.3 - 0.2j
    for k in range(5):
        d = G.gen_full_u_derivative(k, v, p, z)
        closed = G.gen_partial_v(v, k, p, z).closed
        assert abs(d - closed) <= 1e-11 * abs(closed)


def test_gen_partial_v_examples():
    z = 1.3 - 0.4j
    for k in (0, 2):
        r = G.gen_partial_v(0, k, FamilyParams(1.0, 0.5), z)
        assert abs(r.series - z ** k) < 1e-14 and abs(r.closed - z ** k) < 1e-14
    r = G.gen_partial_v(0.4, 0, FamilyParams(1.0, 0.0), z, G.TruncationSpec(max_n=30))
    assert abs(r.closed - cmath.exp(0.4 * z.conjugate())) < 1e-14 and abs(r.series - r.closed) <= 1e-10
    r = G.gen_partial_v(0.3j, 2, FamilyParams(1.0, 0.5), 1 + 1j)
    assert abs(r.series - r.closed) <= 1e-10


def test_gen_partial_v_mpmath_series():
    a, b, k, z, v = 1.4, 0.5, 1, 1.2 + 0.5j, 0.5 - 0.3j
    ref = mpmath.nsum(lambda n: mpmath.mpc(v) ** n / mpmath.factorial(n) * psi_mp(a, b, int(n), k, z), [0, 60])
    r = G.gen_partial_v(v, k, FamilyParams(a, b), z)
    assert abs(r.closed - complex(ref)) <= 1e-12 * abs(ref)


def test_gen_partial_u_examples():
    z = 0.9 + 0.8j
    r = G.gen_partial_u(0.6, 0, FamilyParams(1.0, 0.5), z)
    assert abs(r.closed - cmath.exp(0.6 * z)) < 1e-14 and ok(r)
    for n in range(4):
        p = FamilyParams(1.5, 0.3)
        r = G.gen_partial_u(0, n, p, z)
        assert abs(r.closed - eval_psi(EvalRoute.LaguerreForm, p, ModeIndex(n, 0), z)) < 1e-12
    r = G.gen_partial_u(0.4, 2, FamilyParams(1.0, 0.5), 1 + 1j, G.TruncationSpec(max_m=40))
    assert abs(r.series - r.closed) <= 1e-9
    with pytest.raises(DomainError):
        G.gen_partial_u(0.4, 2, FamilyParams(1.0, -1.5), 1 + 1j)


def test_gen_weighted_examples():
    r = G.gen_weighted(1e-9, 0, FamilyParams(1.0, 0.5), 1.5)
    assert abs(r.series - 1) < 1e-8 and abs(r.closed - 1) < 1e-8
    # with v != 0 the u -> 0 limit is the partial series in v at k = 0
    r = G.gen_weighted(1e-9, 0.1, FamilyParams(1.0, 0.5), 1.5)
    assert abs(r.closed - (1 - 0.1 / 1.5) ** 0.5 * cmath.exp(0.15)) < 1e-8
    r = G.gen_weighted(0.8, 0.2 + 0.1j, FamilyParams(1.2, 1.0), 1.3 + 0.2j)
    # beta = 1: gamma(1, x) = 1 - e^{-x}
    z, u, v = 1.3 + 0.2j, 0.8, 0.2 + 0.1j
    x = u * (z - v)
    hand = 1 / (u * z) * cmath.exp(x + 1.2 * z.conjugate() * v) * (1 - cmath.exp(-x))
    assert abs(r.closed - hand) <= 1e-12 * abs(hand) and ok(r, 1e-10)
    r = G.gen_weighted(1, 0.2, FamilyParams(1.0, 0.5), 2, G.TruncationSpec(max_m=40, max_n=40))
    assert ok(r)
    assert abs(r.closed_1f1 - r.closed) < 1e-9 and abs(r.closed_upper - r.closed) < 1e-9


def test_gen_weighted_hypothesis():
    with pytest.raises(HypothesisViolated):
        G.gen_weighted(-1, 0.2, FamilyParams(1.0, 0.5), 2)
    with pytest.raises(DomainError):
        G.gen_weighted(1, 0.2, FamilyParams(1.0, 0.0), 2)


def test_bilinear_examples():
    p = FamilyParams(1.0, 0.0)
    r = G.gen_bilinear(0, 2, p, 0.7 + 0.1j, 1.1 - 0.2j)
    assert abs(r.series - ((0.7 + 0.1j) * (1.1 - 0.2j)) ** 2) < 1e-14 and abs(r.closed - r.series) < 1e-14
    r = G.gen_bilinear(0.3, 0, p, 1.2, 1.2, G.TruncationSpec(max_n=40))
    assert abs(r.series - r.closed) <= 1e-9 * max(1, abs(r.closed))
    r = G.gen_bilinear(0.25, 1, FamilyParams(1.0, 0.5), 1 + 1j, 1 - 0.5j)
    assert abs(r.series - r.closed) <= 1e-9 * max(1, abs(r.closed))


def test_bilinear_closed_mpmath():
    a, b, k, t, z, w = 1.3, 0.5, 1, 0.3 + 0.1j, 0.8 + 0.4j, 1.1 - 0.3j
    c = b + k + 1
    zz, ww, tt = mpmath.mpc(z), mpmath.mpc(w), mpmath.mpc(t)
    ref = ((zz * ww) ** k * (1 - tt) ** (-c) * mpmath.exp(-tt * a * (abs(zz) ** 2 + abs(ww) ** 2) / (1 - tt))
           * mpmath.hyp0f1(c, a * a * abs(zz) ** 2 * abs(ww) ** 2 * tt / (1 - tt) ** 2))
    assert abs(G.bilinear_closed(t, k, FamilyParams(a, b), z, w) - complex(ref)) <= 1e-13 * abs(ref)


def test_bilinear_printed_fails():
    p = FamilyParams(1.0, 0.0)
    r = G.gen_bilinear(0.3, 0, p, 1.2, 0.9)
    printed = G.bilinear_closed_printed(0.3, 0, p, 1.2, 0.9)
    assert abs(printed - r.series) / max(1, abs(r.series)) >= 0.5


def test_truncation_not_converged():
    with pytest.raises(TruncationNotConverged):
        G.gen_partial_u(6.0, 1, FamilyParams(1.0, 0.5), 2.5, G.TruncationSpec(max_m=8))


def test_truncation_spec_validation():
    with pytest.raises(ValueError):
        G.TruncationSpec(max_m=-1)
    with pytest.raises(ValueError):
        G.TruncationSpec(tail_bound_target=0)


@given(st.floats(0.3, 2.5), st.sampled_from([0.0, 0.5, 1.0, 2.0]), st.integers(0, 3),
       st.floats(0.5, 2.0), st.floats(-2.5, 2.5), st.floats(0, 0.45), st.floats(-3, 3))
def test_gen_partial_v_property(alpha, beta, k, r, th, vr, vth):
    z = r * cmath.exp(1j * th)
    v = vr * r * cmath.exp(1j * vth)
    try:
        res = G.gen_partial_v(v, k, FamilyParams(alpha, beta), z)
    except (DomainError, TruncationNotConverged):
        assume(False)
    assert ok(res)


@settings(max_examples=25)
@given(st.floats(0.3, 2.0), st.sampled_from([0.0, 0.5, 1.5]), st.floats(0.5, 1.8), st.floats(-2.5, 2.5),
       st.floats(-1, 1), st.floats(-1, 1), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_gen_full_property(alpha, beta, r, th, ur, ui, vr, vi):
    z = r * cmath.exp(1j * th)
    try:
        res = G.gen_full(complex(ur, ui), complex(vr, vi) * r, FamilyParams(alpha, beta), z)
    except (DomainError, TruncationNotConverged):
        assume(False)
    assert ok(res)
