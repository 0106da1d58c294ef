import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qftschmidt import BipartiteDims, SchmidtDecomposition, digit_swap, matrix_to_json, qft_matrix
from qftschmidt.cli import main, verify_pair


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSpectrum:
    def test_divides(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n1", "2", "--n2", "4", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["case"] == "divides"
        assert obj["entries"] == [{"coefficient": pytest.approx(math.sqrt(2)), "multiplicity": 4}]

    def test_n1_greater_csv(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n1", "5", "--n2", "3", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 1
        assert rows[0]["case"] == "n1_ge_n2" and rows[0]["multiplicity"] == "9"
        assert float(rows[0]["coefficient"]) == math.sqrt(5 / 3)

    def test_general_table(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n1", "4", "--n2", "6")
        assert code == 0 and "case: general" in out
        assert len(out.strip().splitlines()) == 5

    def test_bad_dims(self, capsys):
        code, _, err = run(capsys, "spectrum", "--n1", "1", "--n2", "4")
        assert code == 2 and "n1" in err

    def test_missing_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["spectrum", "--n1", "2"])
        assert exc.value.code == 2


class TestDecompose:
    def test_closed_form_file(self, capsys, tmp_path):
        out = tmp_path / "d.json"
        code, _, _ = run(capsys, "decompose", "--n1", "2", "--n2", "3", "--out", str(out))
        assert code == 0
        d = SchmidtDecomposition.from_json(json.loads(out.read_text()))
        assert d.schmidt_number == 4
        assert np.linalg.norm(d.reconstruct() - qft_matrix(6)) < 1e-12

    def test_numeric_matches_closed(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "decompose", "--n1", "3", "--n2", "5", "--out", str(a))
        run(capsys, "decompose", "--n1", "3", "--n2", "5", "--numeric", "--out", str(b))
        ca = [t["lambda"] for t in json.loads(a.read_text())["terms"]]
        cb = [t["lambda"] for t in json.loads(b.read_text())["terms"]]
        np.testing.assert_allclose(sorted(ca), sorted(cb), atol=1e-9)

    def test_round_trip_lossless(self, capsys, tmp_path):
        p = tmp_path / "d.json"
        run(capsys, "decompose", "--n1", "2", "--n2", "3", "--out", str(p))
        obj = json.loads(p.read_text())
        assert SchmidtDecomposition.from_json(obj).to_json() == obj

    def test_deterministic(self, capsys):
        _, first, _ = run(capsys, "decompose", "--n1", "3", "--n2", "4", "--format", "json")
        _, second, _ = run(capsys, "decompose", "--n1", "3", "--n2", "4", "--format", "json")
        assert first == second

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, "decompose", "--n1", "2", "--n2", "3", "--out", str(tmp_path / "no" / "x.json"))
        assert code == 2 and "cannot write" in err


class TestDecomposeFile:
    def write(self, tmp_path, m):
        p = tmp_path / "m.json"
        p.write_text(json.dumps(matrix_to_json(m)))
        return str(p)

    def test_identity(self, capsys, tmp_path):
        code, out, _ = run(capsys, "decompose-file", self.write(tmp_path, np.eye(4)), "--n1", "2", "--n2", "2", "--format", "json")
        d = SchmidtDecomposition.from_json(json.loads(out))
        assert code == 0 and d.schmidt_number == 1
        assert d.coefficients[0] == pytest.approx(2)
        np.testing.assert_allclose(d.terms[0].left, np.eye(2) / np.sqrt(2), atol=1e-12)
        np.testing.assert_allclose(d.terms[0].right, np.eye(2) / np.sqrt(2), atol=1e-12)

    def test_swap(self, capsys, tmp_path):
        swap = digit_swap(BipartiteDims(2, 2))
        code, out, _ = run(capsys, "decompose-file", self.write(tmp_path, swap), "--n1", "2", "--n2", "2", "--format", "json")
        lam = [t["lambda"] for t in json.loads(out)["terms"]]
        # independent route: eigenvalues of the partial trace over the first operator factor
        t = swap.reshape(2, 2, 2, 2)
        psi = np.einsum("alAL->aAlL", t).reshape(4, 4)
        ev = np.linalg.eigvalsh(psi.T @ psi.conj())
        np.testing.assert_allclose(sorted(lam), np.sqrt(np.sort(ev)), atol=1e-12)
        np.testing.assert_allclose(lam, [1, 1, 1, 1], atol=1e-12)

    def test_qft_file_matches_decompose(self, capsys, tmp_path):
        code, out, _ = run(capsys, "decompose-file", self.write(tmp_path, qft_matrix(6)), "--n1", "2", "--n2", "3", "--format", "json")
        _, ref, _ = run(capsys, "decompose", "--n1", "2", "--n2", "3", "--numeric", "--format", "json")
        assert code == 0 and out == ref

    @pytest.mark.parametrize("content", ["not json", '{"rows": 2}', '{"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]}'])
    def test_malformed(self, capsys, tmp_path, content):
        p = tmp_path / "bad.json"
        p.write_text(content)
        code, _, err = run(capsys, "decompose-file", str(p), "--n1", "2", "--n2", "2")
        assert code == 2 and err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "decompose-file", str(tmp_path / "nope.json"), "--n1", "2", "--n2", "2")
        assert code == 2


class TestVerify:
    def test_smallest(self, capsys):
        code, out, err = run(capsys, "verify", "--max", "2", "--format", "json")
        assert code == 0
        assert len(json.loads(out)) == 1 and "1/1 pairs passed" in err

    def test_fault_injection(self, capsys):
        code, out, err = run(capsys, "verify", "--max", "4", "--inject-fault", "3,4")
        assert code == 1
        assert "N1=3, N2=4" in err
        assert sum(line.startswith("FAIL") for line in out.splitlines()) == 1

    def test_rectangular_and_jobs(self, capsys):
        code, out, _ = run(capsys, "verify", "--n1-max", "3", "--n2-max", "5", "--jobs", "4", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 8
        assert [(int(r["n1"]), int(r["n2"])) for r in rows] == [(a, b) for a in (2, 3) for b in (2, 3, 4, 5)]

    @pytest.mark.parametrize("argv", [["--max", "1"], ["--max", "3", "--tol", "0"], []])
    def test_usage(self, capsys, argv):
        code, _, _ = run(capsys, "verify", *argv)
        assert code == 2

    def test_outcome(self):
        o = verify_pair(BipartiteDims(4, 6))
        assert o.passed and o.case_label == "general" and o.schmidt_number_match
        bad = verify_pair(BipartiteDims(4, 6), corrupt=True)
        assert not bad.passed and bad.max_reconstruction_error > 1e-3


class TestStrength:
    def test_four_four(self, capsys):
        code, out, _ = run(capsys, "strength", "--n1", "4", "--n2", "4", "--format", "json")
        r = json.loads(out)
        assert code == 0 and (r["hartley"], r["q0_lower"], r["q0_upper"]) == (4, 4, 4)

    def test_two_three(self, capsys):
        _, out, _ = run(capsys, "strength", "--n1", "2", "--n2", "3", "--format", "json")
        r = json.loads(out)
        assert r["schmidt_number"] == 4 and r["hartley"] == 2 and r["q0_upper"] is None

    def test_eight_four(self, capsys):
        _, out, _ = run(capsys, "strength", "--n1", "8", "--n2", "4", "--numeric", "--format", "json")
        assert json.loads(out)["schmidt_number"] == 16

    def test_table_and_bad(self, capsys):
        code, out, _ = run(capsys, "strength", "--n1", "3", "--n2", "3")
        assert code == 0 and "q0_upper" in out
        code, _, _ = run(capsys, "strength", "--n1", "3", "--n2", "0")
        assert code == 2


class TestCommop:
    @pytest.mark.parametrize("dims,terms,coeff", [((2, 3, 2), 3, 2.0), ((2, 2, 2), 2, 2.0), ((3, 4, 5), 4, math.sqrt(15))])
    def test_examples(self, capsys, dims, terms, coeff):
        argv = ["commop", "--n1", str(dims[0]), "--n2", str(dims[1]), "--n3", str(dims[2]), "--format", "json"]
        code, out, _ = run(capsys, *argv)
        s = json.loads(out)
        assert code == 0 and s["terms"] == terms == s["numeric_terms"]
        assert s["coefficient"] == pytest.approx(coeff, abs=1e-15)
        assert s["numeric_max_deviation"] < 1e-10 and s["reconstruction_error"] < 1e-12

    def test_full(self, capsys):
        _, out, _ = run(capsys, "commop", "--n1", "2", "--n2", "3", "--n3", "2", "--full", "--format", "json")
        factors = json.loads(out)["factors"]
        assert len(factors) == 3 and factors[0]["A"]["rows"] == 2 and factors[0]["A"]["cols"] == 6

    def test_bad(self, capsys):
        code, _, _ = run(capsys, "commop", "--n1", "2", "--n2", "1", "--n3", "2")
        assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qftschmidt", "spectrum", "--n1", "2", "--n2", "2", "--format", "json"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["case"] == "divides"
