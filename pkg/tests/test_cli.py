"""Tests for the command-line surface."""

import io
import json

import pytest

from frechet.main import run
from frechet.models.database import VertexStore
from frechet.models.entities import FrechetClass

F3 = ["--d", "3", "--s", "2", "--t", "5"]
F4 = ["--d", "4", "--s", "2", "--t", "5"]


def invoke(*argv, stdin_text=""):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(stdin_text), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


@pytest.fixture
def r6_file(pmf_file, f3_vertices):
    return str(pmf_file(f3_vertices["r6"], "r6.txt"))


def test_class_info():
    code, out, _ = invoke("class-info", *F3)
    assert code == 0
    info = json.loads(out)
    assert info["p"] == "2/5"
    assert info["c"] == "3/2"
    assert (info["j_max"], info["j_min"]) == (1, 2)
    assert info["vanishing_points"][1] == ["-3/2", "1"]
    assert info["lower_frechet"] is None
    assert info["H"][0][:2] == ["1", "-3/2"]


def test_validate(r6_file):
    code, out, _ = invoke("validate", *F3, "--pmf", r6_file)
    assert code == 0
    assert json.loads(out) == {"valid": True, "support_size": 4}


def test_validate_reports_constraint(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("100 1/2\n010 1/2\n")
    code, out, err = invoke("validate", *F3, "--pmf", str(path))
    assert code == 2
    assert out == ""
    assert "[margin 1]" in err


def test_class_above_one_half_is_rejected(r6_file):
    code, _, err = invoke("validate", "--d", "3", "--s", "3", "--t", "5", "--pmf", r6_file)
    assert code == 2
    assert "complement" in err


def test_missing_pmf_file(tmp_path):
    code, _, err = invoke("classify", *F3, "--pmf", str(tmp_path / "nope.txt"))
    assert code == 2
    assert "file not found" in err


def test_to_poly_and_classify(r6_file):
    assert invoke("to-poly", *F3, "--pmf", r6_file)[1].strip() == (
        "-1/5*x1*x2 + 1/5*x1 + 1/5*x2 - 1/5"
    )
    assert invoke("classify", *F3, "--pmf", r6_file)[1].strip() == "Type1"


def test_pmf_from_stdin():
    text = "000 3/5\n111 2/5\n"
    code, out, _ = invoke("classify", *F3, "--pmf", "-", stdin_text=text)
    assert code == 0
    assert out.strip() == "Type1K"


def test_from_poly():
    code, out, _ = invoke("from-poly", *F3, "--poly", "x1*x2 - x1 - x2 + 1")
    assert code == 0
    assert out.strip().splitlines() == ["000 2/5", "110 1/5", "101 1/5", "011 1/5"]


def test_from_poly_outside_ideal():
    code, _, err = invoke("from-poly", *F3, "--poly", "x1 - 1")
    assert code == 2
    assert "[ideal]" in err


def test_extremal_check(pmf_file, f3_vertices):
    path = str(pmf_file(f3_vertices["r9"]))
    code, out, _ = invoke("extremal-check", *F3, "--pmf", path)
    assert code == 0
    assert json.loads(out) == {"is_extremal": True, "rank_found": 7, "rank_required": 7}


def test_kernel_basis():
    code, out, _ = invoke("kernel-basis", *F3)
    lines = out.strip().splitlines()
    assert code == 0
    assert len(lines) == 4
    assert lines[0] == "3/5 0 0 0 0 0 0 2/5"


def test_enumerate_with_store_and_pdf(tmp_path, f3):
    db, pdf = tmp_path / "v.db", tmp_path / "v.pdf"
    code, out, _ = invoke("enumerate", *F3, "--db", str(db), "--pdf", str(pdf))
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert len(records) == 9
    assert all(r["support_size"] <= 4 for r in records)
    assert pdf.exists()
    with VertexStore(db) as store:
        assert store.count_vertices(f3) == 9


def test_enumerate_dimension_guard():
    code, _, err = invoke("enumerate", "--d", "6", "--s", "1", "--t", "3")
    assert code == 2
    assert "--force-large-d" in err


def test_search():
    code, out, _ = invoke("search", *F4, "--J", "x1x2,x1x3", "--K", "2")
    assert code == 0
    record = json.loads(out)
    assert record["coefficients"] == ["1", "-1"]
    assert record["polynomial"] == "1*x1*x2 - 1*x1*x3 - 1*x2 + 1*x3"
    assert record["extremal"] is True


def test_search_rejects_bad_monomial():
    code, _, _ = invoke("search", *F4, "--J", "x1", "--K", "")
    assert code == 2


def test_sweep_resume(tmp_path):
    db, out_path = tmp_path / "s.db", tmp_path / "sweep.jsonl"
    code, _, _ = invoke("sweep", *F4, "--max-J", "1", "--out", str(out_path), "--db", str(db))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines
    assert all("cursor" in json.loads(line) for line in lines)
    with VertexStore(db) as store:
        assert store.get_sweep_cursor(FrechetClass(4, 2, 5), 1) == 32

    code, _, _ = invoke(
        "sweep", *F4, "--max-J", "1", "--out", str(out_path), "--db", str(db), "--resume"
    )
    assert code == 0
    assert out_path.read_text().strip().splitlines() == lines


def test_sweep_resume_needs_store():
    code, _, err = invoke("sweep", *F4, "--max-J", "1", "--resume")
    assert code == 2
    assert "--db" in err


def test_min_convex_emit_poly():
    code, out, _ = invoke("min-convex", "--d", "7", "--s", "2", "--t", "5", "--emit", "poly")
    assert code == 0
    assert out.strip() == "-2*x1*x2*x3*x4 + 1*x1*x2 + 1*x1*x3*x4 + 1*x2*x3*x4 - 1"


def test_min_convex_emit_json():
    code, out, _ = invoke("min-convex", *F3, "--emit", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["pmf"] == {"100": "1/5", "010": "1/5", "110": "1/5", "001": "2/5"}
    assert payload["sum_pmf"] == ["0", "4/5", "1/5", "0"]


def test_stop_loss(r6_file):
    code, out, _ = invoke("stop-loss", *F3, "--pmf", r6_file, "--l", "3/2")
    assert code == 0
    assert out.strip() == "1/10"


def test_stop_loss_bad_level(r6_file):
    code, _, _ = invoke("stop-loss", *F3, "--pmf", r6_file, "--l", "1.5")
    assert code == 2


def test_moments_and_exclusivity(r6_file):
    code, out, _ = invoke("moments", *F3, "--pmf", r6_file)
    assert code == 0
    moments = json.loads(out)
    assert moments["crossed_moment_sum"] == "1/5"
    assert moments["mean_second_moment"] == "1/15"
    assert moments["mean_correlation"] == "-7/18"
    assert invoke("exclusivity", *F3, "--pmf", r6_file)[1].strip() == "3"


def test_success_rate_is_seeded():
    first = invoke("success-rate", *F3, "--trials", "20", "--seed", "3")
    second = invoke("success-rate", *F3, "--trials", "20", "--seed", "3")
    assert first[0] == 0
    assert first[1] == second[1]


def test_success_rate_requires_seed():
    code, _, _ = invoke("success-rate", *F3, "--trials", "20")
    assert code == 2


def test_report(tmp_path, r6_file):
    pdf = tmp_path / "r6.pdf"
    code, out, _ = invoke("report", *F3, "--pmf", r6_file, "--pdf", str(pdf))
    assert code == 0
    assert json.loads(out)["classification"] == "Type1"
    assert pdf.exists()


def test_verbose_logging_goes_to_stderr():
    code, out, err = invoke("-vv", "enumerate", *F3)
    assert code == 0
    assert "Found 9 vertices" in err
    assert "Found" not in out


def test_from_poly_refuses_code(tmp_path):
    marker = tmp_path / "marker"
    payload = f"__import__('pathlib').Path({str(marker)!r}).touch() or x1*x2 - x1 - x2 + 1"
    code, out, err = invoke("from-poly", *F3, "--poly", payload)
    assert code == 2
    assert out == ""
    assert "[polynomial]" in err
    assert not marker.exists()


def test_from_poly_file_refuses_code(tmp_path):
    marker = tmp_path / "marker"
    path = tmp_path / "poly.txt"
    path.write_text(f"exec('open({str(marker)!r}, \"w\")') or x1 - 1\n")
    code, _, err = invoke("from-poly", *F3, "--poly-file", str(path))
    assert code == 2
    assert "[polynomial]" in err
    assert not marker.exists()


def test_sweep_output_in_missing_directory(tmp_path):
    out_path = tmp_path / "no" / "such" / "sweep.jsonl"
    code, out, err = invoke("sweep", *F4, "--max-J", "1", "--out", str(out_path))
    assert code == 2
    assert out == ""
    assert "[file]" in err
