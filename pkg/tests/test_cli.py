import io
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from itohermite import cli


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def body(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_eval_examples():
    code, out = run("eval", "--route", "explicit", "--alpha", "1", "--beta", "0.5", "--n", "1", "--m", "2", "--z", "1+1i")
    assert code == 0
    route, n, m, z, re_, im_ = body(out)[0].split()
    assert (route, n, m, z) == ("explicit", "n=1", "m=2", "z=1+1i")
    assert abs(float(re_) + 0.5) < 1e-15 and abs(float(im_) + 0.5) < 1e-15
    code, out = run("eval", "--route", "laguerre", "--n", "0", "--m", "3", "--z", "0+2i")
    assert code == 0 and body(out)[0].split()[-2:] == ["0", "-8"]


def test_eval_multi_route_diff():
    code, out = run("eval", "--route", "explicit,rodrigues", "--beta", "0.5", "--n", "3", "--m", "1", "--z=-1+0.5i")
    lines = body(out)
    assert code == 0 and len(lines) == 3 and lines[2].startswith("diff")
    assert float(lines[2].split()[-1]) <= 1e-10


def test_eval_all_routes_and_ranges():
    code, out = run("eval", "--route", "all", "--n", "0:2", "--m", "1", "--z", "1-1i", "--z", "2i")
    lines = body(out)
    # 3 n values x 2 points x (5 routes + diff)
    assert code == 0 and len(lines) == 3 * 2 * 6


def test_eval_seventeen_digits():
    code, out = run("eval", "--n", "2", "--m", "1", "--alpha", "1.3", "--z", "0.7+0.1i")
    value = body(out)[0].split()[-2]
    assert len(value.lstrip("-").replace(".", "").lstrip("0")) == 17


def test_exit_codes():
    assert run("eval", "--beta", "0.5", "--n", "3", "--m", "-2", "--z", "1")[0] == 2
    assert run("eval", "--beta", "0.5", "--n", "3", "--m", "1", "--z=-1")[0] == 3
    assert run("eval", "--z", "1+2j")[0] == 2
    assert run("eval", "--route", "nope", "--z", "1")[0] == 2
    assert run("eval", "--alpha", "-1", "--z", "1")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("table", "--n", "0", "--m", "0", "-o", "/nonexistent/dir/x.csv")[0] == 4
    assert run("verify", "--suite", "nope")[0] == 2


def test_error_messages_name_precondition(capsys):
    run("eval", "--beta", "0.5", "--n", "3", "--m", "-2", "--z", "1")
    assert "m > -beta-1" in capsys.readouterr().err
    run("eval", "--beta", "0.5", "--n", "3", "--m", "1", "--z=-1")
    assert "negative real axis" in capsys.readouterr().err


def test_table_examples(tmp_path):
    path = tmp_path / "t.csv"
    code, _ = run("table", "--n", "0:1", "--m", "0:1", "--count", "1", "--seed", "7", "-o", str(path))
    text = path.read_text()
    lines = body(text)
    assert code == 0
    assert lines[0] == "n,m,alpha,beta,re_z,im_z,re_psi,im_psi,biorder_r,biorder_s,norm_sq"
    rows = [ln.split(",") for ln in lines[1:]]
    assert [(r[0], r[1]) for r in rows] == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]
    assert [(r[8], r[9]) for r in rows] == [("0", "0"), ("1", "0"), ("0", "1"), ("0", "0")]
    assert abs(float(rows[0][10]) - 3.141592653589793) < 1e-15
    assert "# seed=7" in text
    run("table", "--n", "0:1", "--m", "0:1", "--count", "1", "--seed", "7", "-o", str(tmp_path / "u.csv"))
    assert (tmp_path / "u.csv").read_text() == text


def test_table_non_l2_norm_is_inf():
    code, out = run("table", "--beta", "0.5", "--n", "2", "--m", "0", "--z", "1+1i")
    assert code == 0 and body(out)[1].split(",")[-1] == "inf"


def test_table_annulus():
    code, out = run("table", "--n", "0", "--m", "1", "--count", "20", "--rmin", "0.5", "--rmax", "0.75")
    for row in body(out)[1:]:
        f = row.split(",")
        r = abs(complex(float(f[4]), float(f[5])))
        assert 0.5 <= r <= 0.75
    assert run("table", "--rmin", "0")[0] == 2


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\nalpha = 2\nbeta=0.5\nn=1\nm=2\n")
    code, out = run("eval", "--config", str(cfg), "--alpha", "1", "--z", "1+1i")
    assert code == 0 and "# alpha=1" in out and "# beta=0.5" in out
    re_ = float(body(out)[0].split()[-2])
    assert abs(re_ + 0.5) < 1e-15
    cfg.write_text("gamma=3\n")
    assert run("eval", "--config", str(cfg), "--z", "1")[0] == 2
    assert run("eval", "--config", str(tmp_path / "missing.cfg"), "--z", "1")[0] == 4


def test_verify_small_suites():
    code, out = run("verify", "--suite", "biorder,errata", "--format", "csv")
    lines = body(out)
    assert code == 0
    assert lines[0] == "identity_id,samples,max_rel_residual,tolerance,status,errata"
    ids = [ln.split(",")[0] for ln in lines[1:]]
    assert "biorder" in ids and "COMP-printed-refuted" in ids
    assert all(ln.split(",")[4] == "PASS" for ln in lines[1:])


def test_verify_orthogonality_beta_half_fails():
    code, out = run("verify", "--suite", "orthogonality", "--beta", "0.5", "--format", "csv")
    assert code == 1
    assert any(ln.startswith("Gram-L2") and ",FAIL," in ln for ln in body(out))


def test_verify_spectral():
    code, out = run("verify", "--suite", "spectral", "--samples", "10", "--format", "csv")
    assert code == 0 and "# samples=10" in out
    assert {ln.split(",")[0] for ln in body(out)[1:]} >= {"eigen-delta", "eigen-tilde_delta", "eigen-magnetic"}


def test_verify_jobs_not_echoed():
    a = run("verify", "--suite", "identities,biorder", "--samples", "5")
    b = run("verify", "--suite", "identities,biorder", "--samples", "5", "--jobs", "2")
    assert a == b and "jobs" not in a[1]


def test_transform_examples():
    code, out = run("transform")
    assert code == 0 and "# beta=0" in out
    code, out = run("transform", "--beta", "1", "--m", "1", "--basis", "2")
    assert code == 0 and all(" PASS " in ln for ln in body(out)[1:])
    code, out = run("transform", "--beta", "0.5")
    assert code == 2 and "refused" in out


def test_quadrules(tmp_path):
    code, out = run("quadrules", "--kind", "hermite", "--order", "4")
    rows = body(out)
    assert code == 0 and rows[0] == "node,weight" and len(rows) == 5
    assert run("quadrules", "--kind", "angular", "--order", "3")[0] == 0
    assert run("quadrules", "--kind", "laguerre", "--order", "3", "--a", "-2")[0] == 2
    assert run("quadrules", "--kind", "legendre")[0] == 2


def test_help_documents_complex_grammar():
    out = subprocess.run([sys.executable, "-m", "itohermite", "eval", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "a+bi" in out.stdout


def test_module_entry_exit_code():
    out = subprocess.run([sys.executable, "-m", "itohermite", "eval", "--z", "zz"], capture_output=True, text=True)
    assert out.returncode == 2 and "cannot parse" in out.stderr


@pytest.mark.parametrize("text,value", [("1+1i", 1 + 1j), ("0+2i", 2j), ("-3.5e-1-2i", -0.35 - 2j), ("2i", 2j),
                                        ("-i", -1j), ("1.5E-2+3e1i", 0.015 + 30j), ("7", 7), (".5-i", 0.5 - 1j)])
def test_parse_complex(text, value):
    assert cli.parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "1+", "abc", "1+2j", "i1", "inf", "nan", "1e", "2ii", "1+1i+1"])
def test_parse_complex_rejects(text):
    with pytest.raises(cli.UsageError):
        cli.parse_complex(text)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(finite, finite)
def test_parse_complex_roundtrip(re_, im_):
    z = complex(re_, im_)
    assert cli.parse_complex(cli.fmt_complex(z)) == z
