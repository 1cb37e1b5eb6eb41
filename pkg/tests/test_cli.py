import io
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from reflwit.cli import parse_point, run
from reflwit.poly import Polynomial, read_polynomial, write_polynomial

FIXTURE = Path(__file__).parent / "fixtures" / "table1.txt"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    out = {}
    for ln in text.splitlines():
        key, _, val = ln.partition(": ")
        out.setdefault(key, val)
    return out


@pytest.fixture
def b2_files(tmp_path):
    eta2 = tmp_path / "eta2.txt"
    write_polynomial(Polynomial(2, {(4, 0): 1, (0, 4): 1}), eta2)
    return tmp_path, eta2


def test_degrees_golden_file():
    code, out, _ = call("degrees")
    assert code == 0
    assert out == FIXTURE.read_text(encoding="utf-8")


def test_degrees_row():
    code, out, _ = call("degrees", "--family", "B", "--rank", "3")
    assert code == 0
    assert "degrees: 2 4 6 | 2dn: 12 | thmB-bound: 12" in out.splitlines()


def test_degrees_sym_reports_both_rows():
    code, out, _ = call("degrees", "--family", "Sym", "--rank", "3")
    lines = out.splitlines()
    assert "ambient Sym(3): degrees: 1 2 3 | 2dn: 6 | thmB-bound: 8" in lines
    assert "table A_2: degrees: 2 3 | 2dn: 6 | thmB-bound: 12" in lines


@pytest.mark.parametrize("family", ["E6", "E7", "E8", "F4", "G2", "H3", "H4"])
def test_degrees_exceptional(family):
    code, out, _ = call("degrees", "--family", family)
    assert code == 0 and "thmB-bound" in out


def test_check_eta2(b2_files):
    _, eta2 = b2_files
    code, out, _ = call("check", "--family", "B", "--rank", "2", "--poly", str(eta2))
    f = fields(out)
    assert code == 0
    assert f["min-exact"] == "1/2"
    assert f["seed"] == "0" and f["command"] == "check"


def test_counterexample_roundtrip(b2_files):
    tmp, _ = b2_files
    out_file = tmp / "phibar.txt"
    code, out, _ = call("counterexample", "--family", "B", "--rank", "2", "--y", "1/√5,2/√5",
                        "--out", str(out_file))
    assert code == 0
    f = fields(out)
    assert f["mu"] == "81/2500" and f["phi_bar(y)"] == "-81/5000"
    phibar = read_polynomial(out_file)
    assert phibar.degree() == 8

    code, out, _ = call("check", "--family", "B", "--rank", "2", "--poly", str(out_file),
                        "--point", "1/√5,2/√5")
    assert code == 1
    assert fields(out)["value-at-point"] == "-81/5000"

    code, out, _ = call("minimize", "--family", "B", "--rank", "2", "--poly", str(out_file), "--on-witness")
    assert code == 0
    assert float(fields(out)["min"]) >= 81 / 5000 - 1e-8

    code, out, _ = call("minimize", "--poly", str(out_file))
    assert code == 1 and float(fields(out)["min"]) < 0


def test_counterexample_to_stdout():
    code, out, _ = call("counterexample", "--family", "B", "--rank", "2", "--y", "1,2")
    assert code == 0
    body = [ln.split(": ", 1)[1] for ln in out.splitlines() if ln.startswith("phi_bar-file: ")]
    assert Polynomial.loads("\n".join(body)).degree() == 8


def test_check_beyond_degree_bound_is_hypothesis_violation(b2_files):
    tmp, _ = b2_files
    f8 = tmp / "f8.txt"
    write_polynomial(Polynomial(2, {(8, 0): 1, (0, 8): 1}), f8)
    code, out, _ = call("check", "--family", "B", "--rank", "2", "--poly", str(f8))
    assert code == 2 and fields(out)["classification"] == "hypothesis_violated"


def test_hypothesis_gate_custom(tmp_path):
    (tmp_path / "roots.txt").write_text("1 0\n-1 0\n")
    write_polynomial(Polynomial(2, {(0, 1): 1}), tmp_path / "i1.txt")
    write_polynomial(Polynomial(2, {(2, 0): 1}), tmp_path / "i2.txt")
    write_polynomial(Polynomial(2, {(2, 0): -1}), tmp_path / "f.txt")
    code, out, _ = call("check", "--roots", str(tmp_path / "roots.txt"),
                        "--invariants", str(tmp_path / "i1.txt"), str(tmp_path / "i2.txt"),
                        "--poly", str(tmp_path / "f.txt"))
    assert code == 2
    assert fields(out)["classification"] == "hypothesis_violated"


def test_not_invariant_exit_2(tmp_path):
    write_polynomial(Polynomial(2, {(3, 1): 1}), tmp_path / "f.txt")
    code, _, err = call("check", "--family", "B", "--rank", "2", "--poly", str(tmp_path / "f.txt"))
    assert code == 2 and "NotInvariant" in err


@pytest.mark.parametrize("argv", [["bogus"], ["check"], ["degrees", "--rank", "x"], []])
def test_usage_errors_exit_2(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_missing_file_exit_2():
    code, _, err = call("check", "--family", "B", "--rank", "2", "--poly", "/nonexistent/f.txt")
    assert code == 2 and "error:" in err


@pytest.mark.parametrize("argv,expect", [
    (["group-order", "--family", "B", "--rank", "3"], {"order": "48", "match": "true"}),
    (["group-order", "--family", "I2", "--rank", "7"], {"order": "14"}),
    (["jacobian-check", "--family", "B", "--rank", "2"], {"lambda": "-8/1", "residual": "0"}),
    (["jacobian-check", "--family", "Sym", "--rank", "3"], {"lambda": "-6/1", "ok": "true"}),
    (["d3-locus"], {"ok": "true"}),
    (["minor-check", "--family", "B", "--rank", "2", "--samples", "20"], {"ok": "true"}),
    (["flats", "--family", "B", "--rank", "3", "--codim", "2"], {"count": "3"}),
    (["property-suite", "--family", "B", "--rank", "2", "--degree", "4", "--trials", "3"], {"ok": "true"}),
])
def test_report_subcommands(argv, expect):
    code, out, _ = call(*argv)
    assert code == 0
    f = fields(out)
    for key, val in expect.items():
        assert f[key] == val


def test_special_point_cmd():
    code, out, _ = call("special-point", "--family", "B", "--rank", "2", "--y", "1,2")
    assert code == 0 and float(fields(out)["min-root-angle"]) <= 1e-5


def test_ci_and_highcodim_cmds(tmp_path):
    g1, g2 = tmp_path / "g1.txt", tmp_path / "g2.txt"
    write_polynomial(Polynomial.norm_squared(2), g1)
    write_polynomial(Polynomial(2, {(4, 0): 1, (0, 4): 1}), g2)
    f = tmp_path / "f.txt"
    norm = Polynomial.norm_squared(2)
    write_polynomial(norm * norm - Polynomial(2, {(4, 0): 1, (0, 4): 1}) * Fraction(3, 2), f)
    code, out, _ = call("ci-check", "--g", str(g1), str(g2), "--j", "1", "--poly", str(f))
    assert code == 1 and fields(out)["heuristic"] == "true"
    code, out, _ = call("highcodim-check", "--family", "B", "--rank", "2", "--poly", str(f), "--j", "2")
    assert code == 1
    code, _, err = call("highcodim-check", "--family", "D", "--rank", "3", "--poly", str(f), "--j", "2")
    assert code == 2 and "MinorFactorizationUnknown" in err


def test_conjecture_probe_cmd():
    code, out, _ = call("conjecture-probe", "--family", "B", "--rank", "3", "--j", "2", "--degree", "6",
                        "--trials", "4")
    f = fields(out)
    assert code == 0 and f["disagreements"] == "0" and f["seed"] == "0"


def test_reports_are_deterministic(b2_files):
    _, eta2 = b2_files
    a = call("check", "--family", "B", "--rank", "2", "--poly", str(eta2), "--seed", "3")
    b = call("check", "--family", "B", "--rank", "2", "--poly", str(eta2), "--seed", "3")
    assert a == b


def test_parse_point():
    assert parse_point("1/√5,2/√5") == (Fraction(1), Fraction(2))
    assert parse_point("-1/sqrt(2), 1/sqrt(2)") == (Fraction(-1), Fraction(1))
    assert parse_point("1/2,3") == (Fraction(1, 2), Fraction(3))
    pt = parse_point("1,√2")
    assert isinstance(pt[1], float) and abs(pt[1] - 2 ** 0.5) < 1e-15


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "reflwit", "degrees", "--family", "B", "--rank", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "degrees: 2 4 6 | 2dn: 12 | thmB-bound: 12" in res.stdout
