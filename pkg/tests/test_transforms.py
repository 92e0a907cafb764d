import math

import mpmath
import numpy as np
import pytest

from itohermite import transforms as T
from itohermite.errors import DomainError
from itohermite.psi import FamilyParams, ModeIndex, psi_explicit
from itohermite.transforms import TransformKind, TransformSpec


def psi(a, b, n, m, z):
    return psi_explicit(FamilyParams(a, b), ModeIndex(n, m), complex(z))


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def test_bessel_examples():
    p = FamilyParams(1, 0)
    assert rel(T.bessel_rep(p, ModeIndex(0, 0), 0.7 + 0.2j), 1) < 1e-12
    assert rel(T.bessel_rep(FamilyParams(1, 0.5), ModeIndex(1, 1), 1), psi(1, 0.5, 1, 1, 1)) < 1e-7
    z = 1.1 - 0.4j
    assert rel(T.bessel_rep(FamilyParams(1.7, 0.3), ModeIndex(0, 2), z), z ** 2) < 1e-8


def test_bessel_weber_oracle():
    # int e^{-t} J_0(2 r sqrt t) dt = e^{-r^2}
    r = 1.3
    ref = mpmath.quad(lambda t: mpmath.exp(-t) * mpmath.besselj(0, 2 * r * mpmath.sqrt(t)), [0, 5, 20, mpmath.inf])
    assert abs(float(ref) - math.exp(-r * r)) < 1e-12


def test_bessel_x_form_factor_two():
    params, idx, z = FamilyParams(1.2, 0.5), ModeIndex(2, 3), 0.9 + 0.5j
    ref = psi(1.2, 0.5, 2, 3, z)
    assert rel(T.bessel_rep_x(params, idx, z), ref) < 1e-7
    printed = T.bessel_rep_x(params, idx, z, printed=True)
    assert abs(printed / ref - 0.5) < 1e-7


@pytest.mark.parametrize("beta", [0.5, -0.5, 1.0, 2.25])
def test_bessel_grid(beta):
    params = FamilyParams(1.3, beta)
    for n in range(5):
        for m in range(5):
            idx = ModeIndex(n, m)
            if beta + m - n <= -1:
                continue
            z = 1.4 * complex(math.cos(0.3 * n + 0.1), math.sin(0.2 * m - 0.5))
            assert all(r.passed for r in T.check_bessel_rep(params, idx, z))


def test_bessel_domain():
    with pytest.raises(DomainError):
        T.bessel_rep(FamilyParams(1, 0.5), ModeIndex(3, 0), 1j)


def test_gaussian_rep_c2_examples():
    assert rel(T.gaussian_rep_c2(FamilyParams(1, 0), ModeIndex(0, 0), 0.6 + 0.3j), 1) < 1e-12
    assert rel(T.gaussian_rep_c2(FamilyParams(1, 0), ModeIndex(1, 0), 1 + 1j), 1 - 1j) < 1e-9
    assert rel(T.gaussian_rep_c2(FamilyParams(1, 1), ModeIndex(1, 1), 2), psi(1, 1, 1, 1, 2)) < 1e-8
    with pytest.raises(DomainError):
        T.gaussian_rep_c2(FamilyParams(1, 0.5), ModeIndex(1, 1), 2)


def test_ga3_examples():
    assert rel(T.ga3_rep(FamilyParams(1, 0), ModeIndex(0, 0), 0.3 - 0.8j), 1) < 1e-12
    assert rel(T.ga3_rep(FamilyParams(1, 0), ModeIndex(1, 0), 1), psi(1, 0, 1, 0, 1)) < 1e-9
    z = 1 + 0.5j
    assert rel(T.ga3_rep(FamilyParams(1, 1), ModeIndex(2, 1), z), psi(1, 1, 2, 1, z)) < 1e-8
    # negative integer beta with beta + m >= 0
    assert rel(T.ga3_rep(FamilyParams(0.8, -1), ModeIndex(2, 3), z), psi(0.8, -1, 2, 3, z)) < 1e-8


def test_monomial_projection_examples():
    assert rel(T.monomial_projection_rep(FamilyParams(1, 0), 0, 0, 0.4 + 1j), 1) < 1e-12
    assert rel(T.monomial_projection_rep(FamilyParams(1, 0), 1, 0, 1 + 1j), 1 - 1j) < 1e-8
    assert rel(T.monomial_projection_rep(FamilyParams(1, 1), 1, 1, 2), psi(1, 1, 1, 1, 2)) < 1e-7
    printed = T.monomial_projection_rep(FamilyParams(1, 1), 1, 1, 2, printed=True)
    assert abs(printed / psi(1, 1, 1, 1, 2) - math.pi) < 1e-7


def test_laguerre_integral_examples():
    assert rel(T.laguerre_integral_formula(FamilyParams(1, 0), 0, 0.3, 1 + 1j), 1) < 1e-12
    # the special case alpha=1, u=0 gives L_1^{(-1)}(|z|^2) = -|z|^2
    assert rel(T.laguerre_integral(0, 1, 1.0, 0, 1), -1) < 1e-9
    z = 1 + 1j
    direct = complex(mpmath.laguerre(2, -1, 2 - 0.3 * mpmath.mpc(z)))
    assert rel(T.laguerre_integral_formula(FamilyParams(1, 1), 2, 0.3, z), direct) < 1e-8
    # alpha = 0, u = -1: L_n^{(beta-n)}(z)
    direct = complex(mpmath.laguerre(3, -1, mpmath.mpc(0.7 - 0.2j)))
    assert rel(T.laguerre_integral(2, 3, 0.0, -1, 0.7 - 0.2j), direct) < 1e-8
    assert T.check_laguerre_integral(FamilyParams(1.4, 2), 3, 0.2 - 0.1j, 0.8 + 0.4j).passed


def test_fock_basis_orthonormal():
    a = 1.7
    for j in range(4):
        for k in range(4):
            from itohermite.quad import gaussian_plane_integral
            val = gaussian_plane_integral(lambda w: T.fock_basis(a, j)(w) * np.conj(T.fock_basis(a, k)(w))
                                          * np.exp(-a * np.abs(w) ** 2), scale=a, order=12)
            assert abs(val - (j == k)) < 1e-12


def test_bargmann_forward_examples():
    z = np.array([0.6 + 0.2j, -1.1 + 0.5j])
    spec = TransformSpec(TransformKind.BargmannForward, FamilyParams(1, 0), 0)
    assert np.allclose(T.bargmann_forward(spec, T.fock_basis(1, 0), z), 1 / math.sqrt(math.pi), rtol=1e-10)
    assert T.check_bargmann_basis(FamilyParams(1, 0), 0, 1, z, tol=1e-9).passed
    assert T.check_bargmann_basis(FamilyParams(1, 1), 1, 2, z, tol=1e-8).passed
    assert T.check_bargmann_basis(FamilyParams(1.6, 2), 0, 3, z, tol=1e-8).passed


def test_bargmann_image_constant():
    a, b, m, n = 1.6, 2, 1, 3
    c = T.bargmann_image_constant(FamilyParams(a, b), n, m)
    ref = math.sqrt(a ** (b + m + 1) / (math.pi * a ** n * math.gamma(b + m + 1) * math.factorial(n)))
    assert c == pytest.approx(ref, rel=1e-15)


def test_bargmann_refuses_non_integer_beta():
    spec = TransformSpec(TransformKind.BargmannForward, FamilyParams(1, 0.5), 0)
    with pytest.raises(DomainError):
        T.bargmann_forward(spec, T.fock_basis(1, 0), 1j)


def test_bargmann_roundtrip_examples():
    ws = np.array([0.5, 0.3 - 0.4j])
    back, ref = T.bargmann_roundtrip(FamilyParams(1, 0), 0, 0, ws)
    assert abs(back[0] - ref[0]) < 1e-9
    assert T.check_bargmann_roundtrip(FamilyParams(1, 0), 0, 1, ws, tol=1e-8).passed
    rep = T.check_bargmann_roundtrip(FamilyParams(1, 1), 1, 2, ws, tol=1e-7)
    assert rep.passed and rep.errata_corrected


def test_bargmann_inverse_printed_fails():
    ws = np.array([0.4 + 0.1j])
    back, ref = T.bargmann_roundtrip(FamilyParams(1, 1), 1, 0, ws, printed=True)
    assert abs(back[0] - ref[0]) / abs(ref[0]) >= 0.5
    # with beta = 0 the printed and corrected kernels coincide
    back, ref = T.bargmann_roundtrip(FamilyParams(1, 0), 0, 1, ws, printed=True)
    assert abs(back[0] - ref[0]) < 1e-9


def test_bargmann_unitarity():
    for params, m in [(FamilyParams(1, 0), 0), (FamilyParams(1, 1), 1), (FamilyParams(1.7, 2), 0)]:
        assert T.check_bargmann_unitarity(params, m, 5).passed


def test_proportionality_spread():
    ref = np.array([1, 2j, -3, 0.001])
    c, spread = T.proportionality_spread(2.5 * ref, ref)
    assert abs(c - 2.5) < 1e-15 and spread < 1e-15
    _, spread = T.proportionality_spread(ref + np.array([0, 0, 0.3, 0]), ref)
    assert spread > 0.04


def test_s_transform_examples():
    zs = np.array([0.7 + 0.2j, 1.2 - 0.5j, -0.4 + 0.9j, 1.5 + 1.0j, 0.3 - 1.3j])
    spec = TransformSpec(TransformKind.STransform, FamilyParams(1, 0), 0)
    vals = T.s_transform(spec, T.fock_basis(1, 0), zs)
    assert np.allclose(vals, vals[0], rtol=1e-12)
    assert T.check_s_transform(FamilyParams(1, 0), 1, 0, zs, tol=1e-8).passed
    assert T.check_s_transform(FamilyParams(1, 0.5), 1, 2, zs, tol=1e-7).passed


def test_s_transform_printed_fails():
    zs = np.array([0.7 + 0.2j, 1.2 - 0.5j, -0.4 + 0.9j])
    rep = T.check_s_transform(FamilyParams(1, 0), 1, 2, zs, printed=True)
    assert not rep.passed and rep.max_rel_residual >= 0.5


def test_export_csv(tmp_path):
    path = tmp_path / "t.csv"
    T.export_csv(path, [1 + 2j], [0.5 - 0.25j])
    assert path.read_text().splitlines() == ["re_z,im_z,re_value,im_value", "1,2,0.5,-0.25"]
