"""Command-line driver: eval, verify, table, transform, quadrules.

Exit codes: 0 pass, 1 verification failure, 2 usage or domain error,
3 branch-cut error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import itertools
import math
import re
import sys
from typing import Dict, List, Optional

import numpy as np

from . import suites, transforms
from .errors import BranchCutError, DomainError
from .identities import VerificationReport
from .psi import EvalRoute, FamilyParams, ModeIndex, biorder, eval_psi, in_l2, norm_sq
from .quad import angular_trapezoid_rule, gauss_hermite_rule, gauss_laguerre_rule

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BRANCH, EXIT_IO = 0, 1, 2, 3, 4

COMPLEX_HELP = ("complex numbers are written a+bi, a-bi, bi or a, with optional exponents "
                "(1.5e-1-2i); give negative values as --z=-1+2i")

_COMPLEX_RE = re.compile(
    r"^[+-]?((\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?"
    r"([+-]((\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?i)?$")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse a+bi / a-bi / bi / a (optional exponents) into a complex number."""
    s = text.strip().replace(" ", "")
    if s in ("i", "+i", "-i"):
        s = ("-" if s.startswith("-") else "") + "1i"
    # a lone imaginary part such as "2i" or "-2.5e1i" has no real part
    plain_imag = re.fullmatch(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?i", s)
    if not s or not (plain_imag or _COMPLEX_RE.fullmatch(s)):
        raise UsageError(f"cannot parse complex number {text!r}; {COMPLEX_HELP}")
    if s.endswith("i"):
        s = s[:-1] + ("1j" if s[-2] in "+-" else "j")
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}; {COMPLEX_HELP}") from None


def fmt(x: float) -> str:
    return "%.17g" % x


def fmt_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{fmt(z.real)}{sign}{fmt(abs(z.imag))}i"


def parse_range(text: str) -> List[int]:
    """'3' -> [3]; '0:4' -> [0..4]; '0,2,5' -> [0, 2, 5]."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad index range {text!r}") from None
    if not out:
        raise UsageError(f"empty index range {text!r}")
    return out


# config --------------------------------------------------------------------------------

DEFAULTS: Dict[str, object] = {
    "alpha": 1.0, "beta": 0.0, "seed": 0, "samples": None, "suite": "all",
    "nmax": 4, "mmax": 4, "n": "0", "m": "0", "route": "explicit",
    "rmin": 0.5, "rmax": 2.0, "count": 1, "output": None, "format": "text",
    "basis": 3, "kind": "laguerre", "order": 5, "a": 0.0,
}

# effective values echoed in each header, per command
ECHO = {
    "eval": ["route", "alpha", "beta", "n", "m"],
    "verify": ["suite", "seed", "samples", "alpha", "beta", "nmax", "mmax"],
    "table": ["alpha", "beta", "n", "m", "rmin", "rmax", "count", "seed"],
    "transform": ["alpha", "beta", "m", "basis", "seed"],
    "quadrules": ["kind", "order", "a"],
}

_CASTS = {"alpha": float, "beta": float, "seed": int, "samples": int, "nmax": int, "mmax": int,
          "rmin": float, "rmax": float, "count": int, "basis": int, "order": int, "a": float}


def read_config_file(path: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc.strerror}") from exc
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def effective_config(args: argparse.Namespace) -> Dict[str, object]:
    """Defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        for key, value in read_config_file(args.config).items():
            if key not in DEFAULTS:
                raise UsageError(f"unknown config key {key!r}")
            cfg[key] = value
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    for key, cast in _CASTS.items():
        if cfg[key] is not None:
            try:
                cfg[key] = cast(cfg[key])
            except (TypeError, ValueError):
                raise UsageError(f"bad value for {key}: {cfg[key]!r}") from None
    if cfg["rmin"] <= 0 or cfg["rmax"] < cfg["rmin"]:
        raise UsageError("the annulus needs 0 < rmin <= rmax")
    if cfg["count"] < 1:
        raise UsageError("count must be at least 1")
    return cfg


def header(command: str, cfg: Dict[str, object], extra: Optional[Dict[str, object]] = None) -> List[str]:
    lines = [f"# itohermite {command}"]
    items = [(k, cfg[k]) for k in ECHO[command]] + list((extra or {}).items())
    for key, value in items:
        if value is None:
            value = "default"
        elif isinstance(value, float):
            value = fmt(value)
        lines.append(f"# {key}={value}")
    return lines


# commands ------------------------------------------------------------------------------------

ROUTES = [r.value for r in EvalRoute]


def cmd_eval(args, cfg, out) -> int:
    routes = ROUTES if cfg["route"] == "all" else str(cfg["route"]).split(",")
    for r in routes:
        if r not in ROUTES:
            raise UsageError(f"unknown route {r!r}; choose from {', '.join(ROUTES)} or all")
    if not args.z:
        raise UsageError("eval needs at least one --z")
    zs = [parse_complex(t) for t in args.z]
    params = FamilyParams(cfg["alpha"], cfg["beta"])
    lines = header("eval", cfg, {"z": " ".join(fmt_complex(z) for z in zs)})
    for n, m, z in itertools.product(parse_range(str(cfg["n"])), parse_range(str(cfg["m"])), zs):
        idx = ModeIndex(n, m)
        vals = []
        for r in routes:
            v = eval_psi(EvalRoute(r), params, idx, z)
            vals.append(v)
            lines.append(f"{r} n={n} m={m} z={fmt_complex(z)} {fmt(v.real)} {fmt(v.imag)}")
        if len(vals) > 1:
            d = max(abs(a - b) / (1 + max(abs(a), abs(b))) for a, b in itertools.combinations(vals, 2))
            lines.append(f"diff n={n} m={m} z={fmt_complex(z)} {fmt(d)}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


REPORT_COLUMNS = ["identity_id", "samples", "max_rel_residual", "tolerance", "status", "errata"]


def report_lines(rows: List[VerificationReport], style: str = "text") -> List[str]:
    cells = [REPORT_COLUMNS] + [r.row().split(",") for r in rows]
    if style == "csv":
        lines = [",".join(c) for c in cells]
    else:
        widths = [max(len(c[k]) for c in cells) for k in range(len(REPORT_COLUMNS))]
        lines = ["  ".join(x.ljust(w) for x, w in zip(c, widths)).rstrip() for c in cells]
    passed = sum(r.passed for r in rows)
    lines.append(f"# {passed}/{len(rows)} rows passed")
    return lines


def _suite_job(name, seed, samples, alpha, beta, nmax, mmax):
    return suites.run_suite(name, seed, samples, alpha, beta, nmax, mmax)


def run_suites(names, cfg, jobs: int) -> List[VerificationReport]:
    argv = [(n, cfg["seed"], cfg["samples"], cfg["alpha"], cfg["beta"], cfg["nmax"], cfg["mmax"]) for n in names]
    if jobs <= 1 or len(names) == 1:
        results = [_suite_job(*a) for a in argv]
    else:
        # results are collected in submission order, so output does not depend on jobs
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_suite_job, *zip(*argv)))
    return [row for rows in results for row in rows]


def cmd_verify(args, cfg, out) -> int:
    name = str(cfg["suite"])
    names = list(suites.SUITES) if name == "all" else name.split(",")
    for n in names:
        if n not in suites.SUITES:
            raise UsageError(f"unknown suite {n!r}; choose from {', '.join(suites.SUITES)} or all")
    rows = run_suites(names, cfg, args.jobs)
    _emit("\n".join(header("verify", cfg) + report_lines(rows, cfg["format"])) + "\n", cfg["output"], out)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def sample_annulus(rmin: float, rmax: float, count: int, seed: int) -> List[complex]:
    """Points with area-uniform radius in [rmin, rmax] and angle in (-pi, pi)."""
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.uniform(rmin ** 2, rmax ** 2, count))
    th = rng.uniform(-math.pi, math.pi, count)
    return [complex(x) for x in r * np.exp(1j * th)]


TABLE_HEADER = ["n", "m", "alpha", "beta", "re_z", "im_z", "re_psi", "im_psi", "biorder_r", "biorder_s", "norm_sq"]


def table_rows(params: FamilyParams, ns, ms, zs) -> List[List[str]]:
    rows = []
    for n in ns:
        for m in ms:
            idx = ModeIndex(n, m)
            if not idx.admissible(params):
                continue
            bo = biorder(params, idx)
            nsq = norm_sq(params, idx) if in_l2(params, idx) else math.inf
            for z in zs:
                v = eval_psi(EvalRoute.ExplicitSum, params, idx, z)
                rows.append([str(n), str(m), fmt(params.alpha), fmt(params.beta), fmt(z.real), fmt(z.imag),
                             fmt(v.real), fmt(v.imag), str(bo.r), str(bo.s), fmt(nsq)])
    return rows


def cmd_table(args, cfg, out) -> int:
    params = FamilyParams(cfg["alpha"], cfg["beta"])
    if args.z:
        zs = [parse_complex(t) for t in args.z]
        extra = {"z": " ".join(fmt_complex(z) for z in zs)}
    else:
        zs = sample_annulus(cfg["rmin"], cfg["rmax"], cfg["count"], cfg["seed"])
        extra = {}
    rows = table_rows(params, parse_range(str(cfg["n"])), parse_range(str(cfg["m"])), zs)
    buf = io.StringIO()
    buf.write("\n".join(header("table", cfg, extra)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    w.writerows(rows)
    _emit(buf.getvalue(), cfg["output"], out)
    return EXIT_OK


def _emit(text: str, path, out) -> None:
    if path in (None, "-"):
        out.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def cmd_transform(args, cfg, out) -> int:
    params = FamilyParams(cfg["alpha"], cfg["beta"])
    if not params.beta_is_integer:
        lines = header("transform", cfg) + [
            "# refused: the Bargmann kernels carry (z - wbar)^(beta+m), a branch factor for non-integer beta",
            "# exact Gauss-Hermite evaluation needs integer beta"]
        out.write("\n".join(lines) + "\n")
        print(f"domain error: transform checks need integer beta, got {fmt(params.beta)}", file=sys.stderr)
        return EXIT_USAGE
    m = parse_range(str(cfg["m"]))[0]
    rng = np.random.default_rng(cfg["seed"])
    zs = [complex(z) for z in np.sqrt(rng.uniform(0.25, 4.0, 5)) * np.exp(1j * rng.uniform(-3, 3, 5))]
    ws = [complex(w) for w in np.sqrt(rng.uniform(0.04, 1.0, 2)) * np.exp(1j * rng.uniform(-3, 3, 2))]
    basis = cfg["basis"]
    rows = []
    for n in range(basis):
        rows.append(_renamed(transforms.check_bargmann_basis(params, m, n, zs), f"Bargmann[n={n}]"))
        rows.append(_renamed(transforms.check_bargmann_roundtrip(params, m, n, ws), f"Bargmann-inverse[n={n}]"))
    rows.append(transforms.check_bargmann_unitarity(params, m, basis))
    for j in range(basis):
        rows.append(_renamed(transforms.check_s_transform(params, min(max(m, 0), 8), j, zs), f"S[j={j}]"))
    _emit("\n".join(header("transform", cfg) + report_lines(rows, cfg["format"])) + "\n", cfg["output"], out)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def _renamed(r: VerificationReport, name: str) -> VerificationReport:
    from dataclasses import replace
    return replace(r, identity_id=name)


def cmd_quadrules(args, cfg, out) -> int:
    kind, order = cfg["kind"], cfg["order"]
    if kind == "laguerre":
        rule = gauss_laguerre_rule(order, cfg["a"])
    elif kind == "hermite":
        rule = gauss_hermite_rule(order)
    elif kind == "angular":
        rule = angular_trapezoid_rule(order)
    else:
        raise UsageError(f"unknown rule kind {kind!r}; choose laguerre, hermite or angular")
    buf = io.StringIO()
    buf.write("\n".join(header("quadrules", cfg)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", "weight"])
    for x, wt in zip(rule.nodes, rule.weights):
        w.writerow([fmt(x), fmt(wt)])
    _emit(buf.getvalue(), cfg["output"], out)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "table": cmd_table,
            "transform": cmd_transform, "quadrules": cmd_quadrules}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="itohermite", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter, epilog=COMPLEX_HELP)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key=value file; flags override it")
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta", type=float)
        sp.add_argument("--output", "-o", help="output path (default stdout)")
        sp.add_argument("--format", choices=["csv", "text"])
        return sp

    e = common(sub.add_parser("eval", help="evaluate psi by one or more routes", epilog=COMPLEX_HELP))
    e.add_argument("--route", help=f"{', '.join(ROUTES)}, a comma list, or all")
    e.add_argument("--n", help="index or range lo:hi")
    e.add_argument("--m", help="index or range lo:hi")
    e.add_argument("--z", action="append", help="point a+bi (repeatable)")

    v = common(sub.add_parser("verify", help="run verification suites"))
    v.add_argument("--suite", help=f"{', '.join(suites.SUITES)}, a comma list, or all")
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int, help="samples per identity (suite defaults otherwise)")
    v.add_argument("--nmax", type=int)
    v.add_argument("--mmax", type=int)
    v.add_argument("--jobs", type=int, default=1, help="worker processes; output does not depend on it")

    t = common(sub.add_parser("table", help="CSV table of psi values", epilog=COMPLEX_HELP))
    t.add_argument("--n")
    t.add_argument("--m")
    t.add_argument("--z", action="append", help="explicit points instead of annulus samples")
    t.add_argument("--rmin", type=float)
    t.add_argument("--rmax", type=float)
    t.add_argument("--count", type=int)
    t.add_argument("--seed", type=int)

    tr = common(sub.add_parser("transform", help="Bargmann and S transform checks"))
    tr.add_argument("--m", help="fixed index m of the Bargmann transform")
    tr.add_argument("--basis", type=int, help="number of basis functions e_0..e_{basis-1}")
    tr.add_argument("--seed", type=int)

    q = common(sub.add_parser("quadrules", help="export a quadrature rule as CSV"))
    q.add_argument("--kind", help="laguerre, hermite or angular")
    q.add_argument("--order", type=int)
    q.add_argument("--a", type=float, help="Laguerre exponent a > -1")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = effective_config(args)
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BranchCutError as exc:
        print(f"branch-cut error: {exc}", file=sys.stderr)
        return EXIT_BRANCH
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
