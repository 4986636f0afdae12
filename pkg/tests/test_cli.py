import json
import subprocess
import sys

import pytest

from anosov_lie import certificate as C
from anosov_lie.cli import main
from anosov_lie.lie import abelian, direct_sum, heisenberg

from conftest import CUBIC, GOLDEN

QUADS = ["--f", GOLDEN, "--g", "x^2-4x+1", "--h", "x^2-5x+1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_process(*argv):
    return subprocess.run([sys.executable, "-m", "anosov_lie", *argv], capture_output=True, text=True)


class TestConstruct:
    def test_type_pq(self, capsys, tmp_path):
        path = tmp_path / "a.cert"
        code, out, _ = run(capsys, "construct", "--family", "type-pq", "--f", GOLDEN, "--g", CUBIC, "-o", str(path))
        assert code == 0
        assert "dim 11, type (9,2)" in out
        assert "min_margin" in out and "jacobi: ok" in out
        assert path.exists()

    def test_dim13(self, capsys):
        code, out, _ = run(capsys, "construct", "--family", "dim13", "--f", GOLDEN, "--g", CUBIC)
        assert code == 0 and "dim 13, type (9,4)" in out

    def test_cyclotomic_f(self, capsys):
        code, _, err = run(capsys, "construct", "--family", "type-pq", "--f", "x^2-x+1", "--g", CUBIC)
        assert code == 3 and "unit circle" in err

    def test_non_unit_g(self, capsys):
        code, _, err = run(capsys, "construct", "--family", "type-pq", "--f", GOLDEN, "--g", "x-2")
        assert code == 2 and "not a unit" in err

    def test_cyclotomic_and_non_unit_together(self, capsys):
        code, _, err = run(capsys, "construct", "--family", "type-pq", "--f", "x^2-x+1", "--g", "x-2")
        assert code in (2, 3) and err.startswith("error:")

    def test_bad_polynomial_and_counts(self, capsys):
        assert run(capsys, "construct", "--family", "type-pq", "--f", "x^^2", "--g", CUBIC)[0] == 2
        assert run(capsys, "construct", "--family", "type-pq", "--f", GOLDEN)[0] == 2
        assert run(capsys, "construct", "--family", "dim16", "--f", GOLDEN, "--g", GOLDEN)[0] == 2
        assert run(capsys, "construct", "--family", "nope", "--f", GOLDEN)[0] == 2
        assert run(capsys, "construct", "--family", "bipartite", "--f", GOLDEN, "--g", CUBIC, "--method", "realize")[0] == 2

    def test_machine_format(self, capsys):
        code, out, _ = run(capsys, "construct", "--format", "machine", "--family", "bipartite", "--f", GOLDEN, "--g", CUBIC)
        assert code == 0
        pairs = dict(line.split("=", 1) for line in out.splitlines())
        assert pairs["dim_type"] == "11;(5,6)"
        assert pairs["status"] == "ok"
        assert pairs["check.jacobi"] == "ok"

    def test_method_flag(self, capsys):
        code, out, _ = run(
            capsys, "construct", "--family", "p2", "--f", GOLDEN, "--g", CUBIC, "--method", "both", "--precision", "1e-15"
        )
        assert code == 0 and "realize_residual" in out


class TestVerify:
    @pytest.fixture
    def cert_path(self, capsys, tmp_path):
        path = tmp_path / "a.cert"
        assert run(capsys, "construct", "--family", "type-pq", "--f", GOLDEN, "--g", CUBIC, "-o", str(path))[0] == 0
        return path

    def test_separate_process(self, cert_path):
        result = run_process("verify", str(cert_path))
        assert result.returncode == 0, result.stdout + result.stderr
        assert "verified" in result.stdout

    def test_bracket_edit(self, capsys, cert_path):
        data = json.loads(cert_path.read_text())
        data["brackets"][0][3] = str(int(data["brackets"][0][3]) + 1)
        cert_path.write_text(json.dumps(data))
        code, out, _ = run(capsys, "verify", str(cert_path))
        assert code == 1
        assert "finding jacobi" in out or "finding equivariance" in out

    def test_determinant_edit(self, capsys, cert_path):
        data = json.loads(cert_path.read_text())
        for row in data["automorphism"]:
            row[0] = str(3 * int(row[0]))
        cert_path.write_text(json.dumps(data))
        code, out, _ = run(capsys, "verify", str(cert_path))
        assert code == 1 and "finding determinant" in out

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.cert"
        bad.write_text("{")
        assert run(capsys, "verify", str(bad))[0] == 2
        assert run(capsys, "verify", str(tmp_path / "missing.cert"))[0] == 2


class TestSearch:
    def test_quadratics(self, capsys):
        code, out, _ = run(capsys, "search-units", "--degree", "2", "--bound", "3")
        assert code == 0 and "  x^2-3x+1  margin" in out

    def test_linear_empty(self, capsys):
        code, out, _ = run(capsys, "search-units", "--degree", "1", "--bound", "1")
        assert code == 0 and out.startswith("0 units")

    def test_pair_constraint(self, capsys):
        code, out, _ = run(capsys, "search-units", "--degree", "3", "--bound", "2", "--pair-with", GOLDEN, "--words", "1,1")
        assert code == 0 and "  x^3+x^2-2x-1  margin" in out

    def test_degree_scope(self, capsys):
        assert run(capsys, "search-units", "--degree", "7", "--bound", "1")[0] == 2

    def test_bad_words(self, capsys):
        assert run(capsys, "search-units", "--degree", "2", "--bound", "1", "--pair-with", GOLDEN, "--words", "a,b")[0] == 2
        assert run(capsys, "search-units", "--degree", "2", "--bound", "1", "--pair-with", GOLDEN)[0] == 2


class TestInfoQuotient:
    def test_info_dim13(self, capsys, tmp_path):
        path = tmp_path / "d13.cert"
        run(capsys, "construct", "--family", "dim13", "--f", GOLDEN, "--g", CUBIC, "-o", str(path))
        code, out, _ = run(capsys, "info", str(path))
        assert code == 0
        assert "indecomposable (basis-aligned search, exhaustive)" in out
        assert "center dim 4" in out and "derived dim 4" in out

    def test_quotient_then_info(self, capsys, tmp_path):
        three, two, quotient = tmp_path / "t3.cert", tmp_path / "t2.cert", tmp_path / "q.cert"
        run(capsys, "construct", "--family", "three-unit-3step", *QUADS, "-o", str(three))
        run(capsys, "construct", "--family", "three-unit-2step", *QUADS, "-o", str(two))
        assert run(capsys, "quotient", str(three), "-o", str(quotient))[0] == 0
        _, out_q, _ = run(capsys, "info", "--format", "machine", str(quotient))
        _, out_two, _ = run(capsys, "info", "--format", "machine", str(two))
        q_info = dict(line.split("=", 1) for line in out_q.splitlines())
        two_info = dict(line.split("=", 1) for line in out_two.splitlines())
        assert q_info["type"] == two_info["type"]
        assert run(capsys, "verify", str(quotient))[0] == 0
        assert json.loads(quotient.read_text())["status"] == "algebra-only"

    def test_info_heisenberg_pair(self, capsys, tmp_path):
        path = tmp_path / "hh.cert"
        C.save(C.AnosovCertificate(direct_sum(heisenberg(), heisenberg()), None, "h3+h3", status="algebra-only"), path)
        code, out, _ = run(capsys, "info", str(path))
        assert code == 0 and "decomposes: {0,1,2} ⊕ {3,4,5}" in out

    def test_info_scope(self, capsys, tmp_path):
        path = tmp_path / "big.cert"
        C.save(C.AnosovCertificate(abelian(30), None, "abelian", status="algebra-only"), path)
        assert run(capsys, "info", str(path))[0] == 4

    def test_quotient_of_single_layer(self, capsys, tmp_path):
        path = tmp_path / "ab.cert"
        C.save(C.AnosovCertificate(abelian(3), None, "abelian", status="algebra-only"), path)
        assert run(capsys, "quotient", str(path), "-o", str(tmp_path / "q.cert"))[0] == 2


def test_construct_is_deterministic_across_processes(tmp_path):
    paths = [tmp_path / "one.cert", tmp_path / "two.cert"]
    outputs = []
    for path in paths:
        result = run_process("construct", "--family", "dim13", "--f", GOLDEN, "--g", CUBIC, "-o", str(path))
        assert result.returncode == 0
        outputs.append(result.stdout.replace(str(path), "OUT"))
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert outputs[0] == outputs[1]


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
