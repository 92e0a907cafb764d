import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from itohermite import numerics as nm
from itohermite.errors import BranchWarning, DomainError, PoleInDenominator


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(1e-300, abs(complex(b)))


@pytest.mark.parametrize("a,k,expected", [(2.5, 0, 1), (1, 4, 24), (0.5, 2, 0.75)])
def test_pochhammer_examples(a, k, expected):
    assert nm.pochhammer(a, k) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("a,k,expected", [(3, 2, 6), (2, 5, 0), (0.5, 1, 0.5)])
def test_falling_examples(a, k, expected):
    assert nm.falling_gamma_ratio(a, k) == pytest.approx(expected, rel=1e-15)


@given(st.floats(-5, 5), st.integers(0, 12))
def test_falling_matches_mpmath(a, k):
    ref = mpmath.ff(a, k)
    assert nm.falling_gamma_ratio(a, k) == pytest.approx(float(ref), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("n,a,x,expected", [(0, 7.3, -2, 1), (1, 2.5, 1, 2.5), (2, 0, 2, -1)])
def test_laguerre_examples(n, a, x, expected):
    assert nm.laguerre(n, a, x) == pytest.approx(expected, rel=1e-14)


@given(st.integers(0, 25), st.floats(-0.9, 6), st.floats(0, 30))
def test_laguerre_mpmath(n, a, x):
    ref = mpmath.laguerre(n, a, x)
    scale = float(mpmath.binomial(n + a, n)) * max(1.0, x) ** n
    assert abs(nm.laguerre(n, a, x) - float(ref)) <= 1e-12 * (1 + abs(float(ref)) + scale)


@pytest.mark.parametrize("n,c,x,expected", [(0, 3, 5, 1), (1, 2, 4, -1)])
def test_kummer_examples(n, c, x, expected):
    assert nm.kummer_1f1_terminating(n, c, x) == pytest.approx(expected, abs=1e-15)


def test_kummer_laguerre_consistency():
    n, c, x = 3, 1.5, 0.7
    # 1F1(-n; c; x) = n! / (c)_n * L_n^{(c-1)}(x)
    lhs = nm.kummer_1f1_terminating(n, c, x)
    rhs = math.factorial(n) / nm.pochhammer(c, n) * nm.laguerre(n, c - 1, x)
    assert rel(lhs, rhs) < 1e-13
    assert rel(lhs, mpmath.hyp1f1(-n, c, x)) < 1e-13


def test_kummer_pole():
    with pytest.raises(PoleInDenominator):
        nm.kummer_1f1_terminating(3, -1, 0.5)


def test_kummer_regularized_mpmath():
    # (c)_n 1F1(-n; c; x), taken as a limit in c where the plain series has a pole
    for n, c, x in [(3, -1.0, 0.5), (4, -2.0, 1.3), (2, 0.0, 2.0), (5, 2.5, 0.9)]:
        f = lambda cc: mpmath.rf(cc, n) * mpmath.hyp1f1(-n, cc, x)
        ref = complex(mpmath.limit(f, c) if c <= 0 else f(c))
        assert abs(nm.kummer_1f1_regularized(n, c, x) - ref) <= 1e-12 * (1 + abs(ref))


@pytest.mark.parametrize("n,b,x,expected", [(0, 2, 9, 1), (1, 3, 0.5, -0.5)])
def test_hyp2f0_examples(n, b, x, expected):
    assert nm.hyp2f0_terminating(n, b, x) == pytest.approx(expected, abs=1e-15)


def test_hyp2f0_mpmath():
    for n, b, x in [(2, -1.5, 0.2), (5, 0.5, -0.3), (7, 2.25, 0.1)]:
        ref = float(mpmath.hyp2f0(-n, b, x))
        assert rel(nm.hyp2f0_terminating(n, b, x), ref) < 1e-13


def test_bessel_examples():
    assert nm.bessel_j(0, 0) == 1
    assert nm.bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-13)
    assert abs(nm.bessel_j(0, 2.4048255576957728)) < 1e-9


@given(st.floats(0, 12), st.floats(0, 80))
def test_bessel_mpmath(nu, x):
    ref = float(mpmath.besselj(nu, x))
    assert abs(nm.bessel_j(nu, x) - ref) <= 1e-12 * max(1.0, abs(ref)) + 1e-14


def test_incomplete_gamma_examples():
    assert nm.lower_incomplete_gamma(1, 2 + 0j) == pytest.approx(1 - math.exp(-2), rel=1e-14)
    assert abs(nm.lower_incomplete_gamma(0.5, 1) - 1.4936482656248540) < 1e-12
    assert abs(nm.upper_incomplete_gamma(1, 0) - 1) < 1e-15
    assert nm.upper_incomplete_gamma(2, 3) == pytest.approx(4 * math.exp(-3), rel=1e-13)


@given(st.floats(0.1, 8), st.floats(0.01, 30), st.floats(-2.9, 2.9))
def test_incomplete_gamma_mpmath(s, r, th):
    x = r * complex(math.cos(th), math.sin(th))
    lo = complex(mpmath.gammainc(s, 0, x))
    up = complex(mpmath.gammainc(s, x, mpmath.inf))
    assert abs(nm.lower_incomplete_gamma(s, x) - lo) <= 1e-10 * (1 + abs(lo)) * max(1, math.gamma(s))
    assert abs(nm.upper_incomplete_gamma(s, x) - up) <= 1e-10 * (1 + abs(up)) * max(1, math.gamma(s))


def test_incomplete_gamma_branch_cut_warns():
    with pytest.warns(BranchWarning):
        nm.lower_incomplete_gamma(0.5, complex(-2, 0))


@given(st.floats(0.3, 4), st.floats(0.05, 10), st.floats(-1.5, 1.5))
def test_incomplete_gamma_complementary(s, r, th):
    x = r * complex(math.cos(th), math.sin(th))
    total = nm.lower_incomplete_gamma(s, x) + nm.upper_incomplete_gamma(s, x)
    assert abs(total - math.gamma(s)) <= 1e-12 * math.gamma(s) * max(1.0, abs(total))


def test_incomplete_gamma_regimes_agree():
    # series and continued fraction on an annulus around the switch radius
    for s in (0.5, 1.5, 3.0):
        for th in np.linspace(-1.2, 1.2, 7):
            x = 8.5 * complex(math.cos(th), math.sin(th))
            se = math.gamma(s) - nm._lower_gamma_series(s, x)
            cf = nm._upper_gamma_cf(s, x)
            assert abs(se - cf) <= 1e-12 * abs(cf) * 10


def test_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        nm.lower_incomplete_gamma(-1.0, 1.0)


@pytest.mark.parametrize("n,x,expected", [(0, 3.7, 1), (1, 2, 4), (3, 1, -4)])
def test_real_hermite(n, x, expected):
    assert nm.real_hermite(n, x) == pytest.approx(expected, rel=1e-15)


def test_ito_hermite_examples():
    # m derivatives in zbar bring down (-alpha z)^m, so H_{m,0} = (alpha z)^m
    z = 0.3 - 1.2j
    assert abs(nm.ito_hermite(1, 0, 1.0, z) - z) < 1e-15
    assert abs(nm.ito_hermite(0, 1, 1.0, z) - z.conjugate()) < 1e-15
    assert abs(nm.ito_hermite(1, 1, 1.0, 1 + 1j) - 1) < 1e-14
    assert nm.ito_hermite(0, 0, 2.0, z) == 1


def _ito_rodrigues(m, n, a, z):
    """(-1)^{m+n} e^{a|z|^2} d^{m+n}/dzbar^m dz^n e^{-a|z|^2}, with z and zbar independent."""
    zz, zb = mpmath.mpc(z), mpmath.mpc(z).conjugate()
    d = mpmath.diff(lambda u, v: mpmath.exp(-a * u * v), (zz, zb), (n, m))
    return complex((-1) ** (m + n) * mpmath.exp(a * zz * zb) * d)


@pytest.mark.parametrize("m,n,a,z", [(0, 3, 1.0, 0.7 + 0.2j), (2, 1, 1.5, -0.4 + 1.1j),
                                     (3, 3, 0.8, 1.2 - 0.5j), (4, 2, 2.0, 0.3 + 0.3j)])
def test_ito_hermite_rodrigues(m, n, a, z):
    ref = _ito_rodrigues(m, n, a, z)
    assert abs(nm.ito_hermite(m, n, a, z) - ref) <= 1e-12 * (1 + abs(ref))


@given(st.integers(0, 8), st.integers(0, 8), st.floats(0.3, 3), st.complex_numbers(max_magnitude=3))
def test_ito_hermite_conjugate_symmetry(m, n, a, z):
    lhs = nm.ito_hermite(m, n, a, z)
    rhs = nm.ito_hermite(n, m, a, z).conjugate()
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_signed_log_value_roundtrip():
    for x in (3.5, -2e-200, 1e250):
        v = nm.SignedLogValue.from_float(x)
        assert v.to_float() == pytest.approx(x, rel=1e-14)
    assert (nm.SignedLogValue.from_float(-2.0) * nm.SignedLogValue.from_float(3.0)).to_float() == pytest.approx(-6.0)


def test_csum_accuracy():
    vals = [1e16, 1.0, -1e16, 1j]
    assert nm.csum(vals) == 1 + 1j
    assert nm.csum(np.array([0.1] * 10)) == pytest.approx(1.0, abs=1e-16)
