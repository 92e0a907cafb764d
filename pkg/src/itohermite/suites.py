"""Seeded verification suites shared by the CLI and the acceptance tests.

Every suite is a pure function of its arguments and returns
VerificationReport rows in a fixed order.
"""

from __future__ import annotations

import math
import zlib
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import genfun, operators, transforms
from .errors import BranchCutError, HypothesisViolated, InadmissibleIndex, TruncationNotConverged
from .identities import (
    PROTOCOLS,
    VerificationReport,
    check_beta_half,
    check_monomial_expansion,
    run_protocol,
    sample_point,
)
from .operators import OperatorId
from .psi import BiOrder, FamilyParams, ModeIndex, biorder, in_l2
from .quad import check_gram, gram_matrix

SUITES = ("identities", "errata", "spectral", "genfun", "orthogonality", "transforms", "biorder")


def _rng(name: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def _row(identity_id, samples, abs_r, rel_r, tol, passed=None, errata=False, seed=None):
    passed = rel_r <= tol if passed is None else passed
    return VerificationReport(identity_id, samples, float(abs_r), float(rel_r), tol, bool(passed), errata, seed)


def _merge(identity_id, reports, tol, seed=None):
    reports = list(reports)
    return _row(identity_id, len(reports), max(r.max_abs_residual for r in reports),
                max(r.max_rel_residual for r in reports), tol,
                all(r.passed for r in reports), any(r.errata_corrected for r in reports), seed)


# identities ------------------------------------------------------------------------------

def suite_identities(seed: int = 0, samples: int = 100) -> List[VerificationReport]:
    return [run_protocol(name, seed, samples) for name in PROTOCOLS]


# printed forms that are expected to fail ------------------------------------------------

REFUTE_THRESHOLD = 0.5


def _refuted(identity_id, rel, threshold=REFUTE_THRESHOLD):
    # passes when the printed form is off by at least the threshold
    return _row(identity_id + "-printed-refuted", 1, rel, rel, threshold, passed=rel >= threshold, errata=True)


def printed_counterexamples() -> Dict[str, float]:
    """Relative discrepancy of each printed display at its documented counterexample."""
    out = {}
    out["COMP"] = check_monomial_expansion(FamilyParams(1.0, 0.0), 2, 2, 1.0, printed=True).max_rel_residual
    out["beta-half"] = check_beta_half(1.0, 1, 2.0, printed=True).max_rel_residual
    t, z, w, p = 0.3, 1.2 + 0.5j, 0.8 - 0.6j, FamilyParams(1.0, 0.5)
    good = genfun.bilinear_closed(t, 1, p, z, w)
    out["bilinear"] = abs(genfun.bilinear_closed_printed(t, 1, p, z, w) - good) / abs(good)
    p, idx, z = FamilyParams(1.0, 0.5), ModeIndex(1, 1), 1.0
    good = transforms.bessel_rep_x(p, idx, z)
    out["ZZ2"] = abs(transforms.bessel_rep_x(p, idx, z, printed=True) - good) / abs(good)
    p, z = FamilyParams(1.0, 0.0), 1 + 1j
    good = transforms.monomial_projection_rep(p, 1, 0, z)
    out["IntREp3"] = abs(transforms.monomial_projection_rep(p, 1, 0, z, printed=True) - good) / abs(good)
    p = FamilyParams(1.0, 1.0)
    f = operators.psi_evaluable(p, ModeIndex(1, 1))
    out["factorizations"] = operators.check_factorizations_printed(p, f, 0.9 + 0.4j)
    back, ref = transforms.bargmann_roundtrip(p, 1, 0, [0.5 + 0.2j], printed=True)
    out["Bargmann-inverse"] = float(abs(back[0] - ref[0]) / abs(ref[0]))
    zs = [0.8 + 0.3j, -1.1 + 0.9j, 1.7j, 1.2 - 0.4j, 0.5 + 1.5j]
    out["S"] = transforms.check_s_transform(FamilyParams(1.0, 0.5), 1, 2, zs, printed=True).max_rel_residual
    return out


def suite_errata(seed: int = 0) -> List[VerificationReport]:
    return [_refuted(k, v) for k, v in printed_counterexamples().items()]


# spectral ---------------------------------------------------------------------------------

SPECTRAL_OPS = (OperatorId.DeltaAlphaBeta, OperatorId.TildeDelta, OperatorId.EulerDiff,
                OperatorId.MagneticD, OperatorId.Landau)


def spectral_samples(op: OperatorId, seed: int, samples: int = 50, nmax: int = 6, mmax: int = 6):
    """Worst eigen-residual of op over seeded (alpha, beta, n, m, z) draws."""
    rng = _rng("spectral-" + op.value, seed)
    worst, count = 0.0, 0
    while count < samples:
        params = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(-0.45, 3.0))
        idx = ModeIndex(int(rng.integers(0, nmax + 1)), int(rng.integers(0, mmax + 1)))
        z = sample_point(rng)
        try:
            lam = operators.expected_eigenvalue(op, params, idx)
            worst = max(worst, operators.eigen_residual(op, params, idx, z, lam))
        except InadmissibleIndex:
            continue
        count += 1
    return worst, count


def suite_spectral(seed: int = 0, samples: int = 50) -> List[VerificationReport]:
    rows = []
    for op in SPECTRAL_OPS:
        worst, count = spectral_samples(op, seed, samples)
        rows.append(_row("eigen-" + op.value, count, worst, worst, 1e-9, seed=seed))
    rng = _rng("factorizations", seed)
    fac, rel = [], []
    for a, b, c, g in operators.TEST_CORPUS:
        params = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(-0.9, 3.0))
        f = operators.corpus_function(a, b, c, g)
        z = sample_point(rng)
        fac.append(operators.check_factorizations(params, f, z))
        rel.append(operators.check_operator_relations(params, f, z))
    rows.append(_merge("factorizations", fac, 1e-10, seed))
    rows.append(_merge("operator-relations", rel, 1e-11, seed))
    return rows


# generating functions ---------------------------------------------------------------------

def _box_point(rng, rmin=0.5, rmax=2.0):
    return sample_point(rng, rmin, rmax)


def _gf_full(rng):
    p = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(-0.9, 3.0))
    z = _box_point(rng)
    u = complex(*rng.uniform(-0.7, 0.7, 2))
    v = 0.5 * abs(z) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(-np.pi, np.pi))
    return lambda trunc: genfun.gen_full(u, v, p, z, trunc)


def _gf_partial_v(rng):
    p = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(-0.9, 3.0))
    k = int(rng.integers(0, 5))
    z = _box_point(rng)
    v = 0.5 * abs(z) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(-np.pi, np.pi))
    if not ModeIndex(0, k).admissible(p):
        raise InadmissibleIndex("k")
    return lambda trunc: genfun.gen_partial_v(v, k, p, z, trunc)


def _gf_partial_u(rng):
    p = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(-0.9, 3.0))
    n = int(rng.integers(0, 6))
    u = complex(*rng.uniform(-0.8, 0.8, 2))
    z = _box_point(rng)
    return lambda trunc: genfun.gen_partial_u(u, n, p, z, trunc)


def _gf_weighted(rng):
    p = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(0.1, 3.0))
    z = _box_point(rng)
    v = 0.4 * abs(z) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(-np.pi, np.pi))
    d = z - v
    # Re(u (z - v)) > 0: u within 1 rad of conj(z - v)
    u = rng.uniform(0.2, 0.8) * np.conj(d) / abs(d) * np.exp(1j * rng.uniform(-1, 1))
    return lambda trunc: genfun.gen_weighted(u, v, p, z, trunc)


# terms decay like (alpha^2 |z w|^2 |t|)^n / (n!)^2, slower than the other series
BILINEAR_TRUNC = genfun.TruncationSpec(max_n=90)


def _gf_bilinear(rng):
    p = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(-0.9, 3.0))
    k = int(rng.integers(0, 4))
    t = rng.uniform(0, 0.5) * np.exp(1j * rng.uniform(-np.pi, np.pi))
    z, w = _box_point(rng), _box_point(rng)
    return lambda trunc: genfun.gen_bilinear(t, k, p, z, w, trunc)


# draw, errata flag, truncation ladder; a draw whose series has not reached
# the tail target is re-evaluated at the next truncation
DEFAULT_LADDER = (genfun.TruncationSpec(), genfun.TruncationSpec(max_m=80, max_n=80))
GENFUN_DRAWS: Dict[str, Tuple[Callable, bool, tuple]] = {
    "gen_full": (_gf_full, False, DEFAULT_LADDER),
    "gen_partial_v": (_gf_partial_v, False, DEFAULT_LADDER),
    "gen_partial_u": (_gf_partial_u, False, DEFAULT_LADDER),
    "gen_weighted": (_gf_weighted, False, DEFAULT_LADDER),
    "bilinear": (_gf_bilinear, True, (BILINEAR_TRUNC, genfun.TruncationSpec(max_n=160))),
}


def _evaluate(thunk, ladder):
    for trunc in ladder[:-1]:
        try:
            return thunk(trunc)
        except TruncationNotConverged:
            continue
    return thunk(ladder[-1])


def genfun_samples(name: str, seed: int, samples: int) -> List[genfun.GenResult]:
    """Seeded draws inside the hypothesis box; draws that leave it are redrawn."""
    draw, _, ladder = GENFUN_DRAWS[name]
    rng = _rng("genfun-" + name, seed)
    out = []
    while len(out) < samples:
        try:
            out.append(_evaluate(draw(rng), ladder))
        except (BranchCutError, HypothesisViolated, InadmissibleIndex):
            continue
    return out


def suite_genfun(seed: int = 0, samples: int = 20) -> List[VerificationReport]:
    rows = []
    for name, (_, errata, _) in GENFUN_DRAWS.items():
        res = genfun_samples(name, seed, samples)
        worst = max(r.discrepancy() for r in res)
        ok = all(r.discrepancy() <= r.tolerance() for r in res)
        tol = max(r.tolerance() for r in res)
        rows.append(_row(name, len(res), worst, worst, tol, passed=ok, errata=errata, seed=seed))
    return rows


# orthogonality ----------------------------------------------------------------------------

def _tag(params: FamilyParams) -> str:
    return f"[a={params.alpha:g};b={params.beta:g}]"


def suite_orthogonality(alpha: float = 1.0, beta: float = 0.0, nmax: int = 4, mmax: int = 4,
                        tol: float = 1e-10) -> List[VerificationReport]:
    params = FamilyParams(alpha, beta)
    diag, off, divergent = check_gram(params, nmax, mmax)
    rows = [_row("Gram-diagonal" + _tag(params), 1, diag, diag, tol),
            _row("Gram-offdiagonal" + _tag(params), 1, off, off, tol)]
    if divergent:
        # the norm integral is infinite for these pairs although a finite closed form exists
        rows.append(_row("Gram-L2" + _tag(params), len(divergent), math.inf, math.inf, tol))
    return rows


# transforms --------------------------------------------------------------------------------

ANNULUS = (0.5, 2.0)


def suite_transforms(seed: int = 0, samples: int = 4) -> List[VerificationReport]:
    rng = _rng("transforms", seed)
    zz = []
    while len(zz) < 2 * samples:
        p = FamilyParams(rng.uniform(0.5, 2.0), rng.uniform(-0.9, 3.0))
        idx = ModeIndex(int(rng.integers(0, 7)), int(rng.integers(0, 7)))
        if p.beta + idx.m - idx.n <= -1 or not idx.admissible(p):
            continue
        zz.append(transforms.check_bessel_rep(p, idx, _box_point(rng, *ANNULUS)))
    rows = [_merge("ZZ", [r[0] for r in zz], 1e-7, seed), _merge("ZZ2", [r[1] for r in zz], 1e-7, seed)]

    reps = []
    for _ in range(max(1, samples // 2)):
        p = FamilyParams(rng.uniform(0.5, 2.0), float(rng.integers(0, 3)))
        idx = ModeIndex(int(rng.integers(0, 5)), int(rng.integers(0, 5)))
        reps.append(transforms.check_gaussian_rep_c2(p, idx, _box_point(rng, 0.5, 1.5)))
    rows.append(_merge("Ghanmi", reps, 1e-7, seed))

    reps = []
    while len(reps) < samples:
        p = FamilyParams(rng.uniform(0.5, 2.0), float(rng.integers(-2, 3)))
        idx = ModeIndex(int(rng.integers(0, 7)), int(rng.integers(0, 7)))
        if p.beta_rounded + idx.m < 0 or not idx.admissible(p):
            continue
        reps.append(transforms.check_ga3_rep(p, idx, _box_point(rng, *ANNULUS)))
    rows.append(_merge("GA3", reps, 1e-7, seed))

    reps = []
    while len(reps) < samples:
        p = FamilyParams(rng.uniform(0.5, 2.0), float(rng.integers(-2, 3)))
        n, k = int(rng.integers(0, 7)), int(rng.integers(0, 7))
        if p.beta_rounded + k < 0:
            continue
        reps.append(transforms.check_monomial_projection(p, n, k, _box_point(rng, *ANNULUS)))
    rows.append(_merge("IntREp3", reps, 1e-7, seed))

    reps = []
    for _ in range(samples):
        p = FamilyParams(rng.uniform(0.5, 2.0), float(rng.integers(0, 4)))
        u = complex(*rng.uniform(-0.5, 0.5, 2))
        reps.append(transforms.check_laguerre_integral(p, int(rng.integers(0, 9)), u, _box_point(rng, *ANNULUS)))
    rows.append(_merge("INtLaguerre", reps, 1e-7, seed))

    rows.extend(transform_rows(seed))
    return rows


TRANSFORM_CONFIGS = ((1.0, 0.0, 0), (1.0, 1.0, 1), (1.7, 2.0, 0))


def transform_rows(seed: int = 0, configs=TRANSFORM_CONFIGS, basis: int = 5) -> List[VerificationReport]:
    """Bargmann basis images, round trips and unitarity, plus S proportionality."""
    rng = _rng("bargmann", seed)
    basis_r, trip_r, unit_r, s_r = [], [], [], []
    for alpha, beta, m in configs:
        p = FamilyParams(alpha, beta)
        zs = [_box_point(rng, *ANNULUS) for _ in range(5)]
        ws = [_box_point(rng, 0.2, 1.0) for _ in range(2)]
        for n in range(basis):
            basis_r.append(transforms.check_bargmann_basis(p, m, n, zs))
            trip_r.append(transforms.check_bargmann_roundtrip(p, m, n, ws))
        unit_r.append(transforms.check_bargmann_unitarity(p, m, basis))
    for beta in (0.0, 0.5, 1.0):
        p = FamilyParams(rng.uniform(0.5, 2.0), beta)
        zs = [_box_point(rng, *ANNULUS) for _ in range(5)]
        n, j = int(rng.integers(0, 9)), int(rng.integers(0, 5))
        s_r.append(transforms.check_s_transform(p, n, j, zs))
    return [_merge("Bargmann", basis_r, 1e-8, seed), _merge("Bargmann-inverse", trip_r, 1e-7, seed),
            _merge("Bargmann-unitarity", unit_r, 1e-7, seed), _merge("S", s_r, 1e-7, seed)]


# bi-order ----------------------------------------------------------------------------------

BIORDER_BETAS = (-2.0, -1.0, 0.0, 0.5, 1.0, 2.0)


def biorder_table(beta: float, n: int, m: int) -> BiOrder:
    """Case table for the bi-order at the origin."""
    if abs(beta - round(beta)) > 1e-9:
        return BiOrder(m - n, 0)
    b = int(round(beta))
    if b <= 0:
        return BiOrder(-b, n - m - b) if n > b + m else BiOrder(m - n, 0)
    if m >= n or b + m >= n:
        return BiOrder(m - n, 0)
    return BiOrder(-b, n - b - m)


def biorder_from_sum(beta: float, n: int, m: int) -> BiOrder:
    """Exponents of the last nonzero term of the explicit sum, in exact arithmetic."""
    b = Fraction(beta).limit_denominator(10 ** 6)
    last, fall = 0, Fraction(1)
    for k in range(n + 1):
        if k:
            fall *= b + m - (k - 1)
        if fall != 0:
            last = k
        else:
            break
    return BiOrder(m - last, n - last)


def biorder_grid(nmax: int = 8, mmax: int = 8):
    for beta in BIORDER_BETAS:
        p = FamilyParams(1.0, beta)
        for n in range(nmax + 1):
            for m in range(-3, mmax + 1):
                idx = ModeIndex(n, m)
                if idx.admissible(p):
                    yield p, idx


def suite_biorder(nmax: int = 8, mmax: int = 8) -> List[VerificationReport]:
    bad, cells = 0, 0
    for p, idx in biorder_grid(nmax, mmax):
        got = biorder(p, idx)
        cells += 1
        if got != biorder_table(p.beta, idx.n, idx.m) or got != biorder_from_sum(p.beta, idx.n, idx.m):
            bad += 1
    return [_row("biorder", cells, bad, bad, 0.0)]


# dispatch ---------------------------------------------------------------------------------

def run_suite(name: str, seed: int = 0, samples=None, alpha=1.0, beta=0.0, nmax=4, mmax=4):
    if name == "identities":
        return suite_identities(seed, samples or 100)
    if name == "errata":
        return suite_errata(seed)
    if name == "spectral":
        return suite_spectral(seed, samples or 50)
    if name == "genfun":
        return suite_genfun(seed, samples or 20)
    if name == "orthogonality":
        return suite_orthogonality(alpha, beta, nmax, mmax)
    if name == "transforms":
        return suite_transforms(seed, samples or 4)
    if name == "biorder":
        return suite_biorder()
    raise ValueError(f"unknown suite {name!r}")


def in_l2_grid(params: FamilyParams, nmax: int, mmax: int):
    return [(n, m) for n in range(nmax + 1) for m in range(mmax + 1)
            if ModeIndex(n, m).admissible(params) and not in_l2(params, ModeIndex(n, m))]

