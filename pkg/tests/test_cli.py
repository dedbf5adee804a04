"""End-to-end CLI behavior: output formats, exit codes, determinism."""
import json
import math

import pytest

from spherearc.cli import main

LINF = '{"type": "lp", "p": "inf"}'
SQUARE = ('{"type": "polygon", "vertices": '
          '[[1, 1], [-1, 1], [-1, -1], [1, -1]]}')


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_distance_on_the_flat_linf_pair(capsys):
    code, out, _ = run(capsys, "distance", "--norm", LINF,
                       "--x", "1", "0.01", "--y", "-1", "0.01")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(3.98)
    assert payload["lower"] <= payload["value"] <= payload["upper"]
    assert payload["arc_choice"] in ("ccw", "cw")


def test_ratio_subcommand(capsys):
    code, out, _ = run(capsys, "ratio", "--norm", LINF,
                       "--x", "1", "0.01", "--y", "-1", "0.01")
    assert code == 0
    assert json.loads(out)["ratio"] == pytest.approx(1.99)


def test_john_subcommand_certifies_the_square(capsys):
    code, out, _ = run(capsys, "john", "--norm", SQUARE)
    assert code == 0
    payload = json.loads(out)
    m = payload["ellipse"]["m"]
    assert m[0][0] == pytest.approx(1.0, abs=1e-6)
    assert m[0][1] == pytest.approx(0.0, abs=1e-6)
    assert payload["certificate"]["inner_ok"] and payload["certificate"]["outer_ok"]


def test_verify_subcommand_exit_code_and_lines(capsys):
    code, out, _ = run(capsys, "verify", "--norm", LINF,
                       "--suite", "tangent-lines,angles", "--trials", "200")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert [r["name"] for r in lines] == ["angles", "tangent-lines"]
    assert all(r["passed"] for r in lines)


def test_verify_accepts_legacy_suite_aliases(capsys):
    code, out, _ = run(capsys, "verify", "--norm", LINF,
                       "--suite", "lemma-3.1", "--trials", "100")
    assert code == 0
    assert json.loads(out.strip())["name"] == "tangent-lines"


def test_verify_unknown_suite_is_a_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--norm", LINF, "--suite", "nope")
    assert code == 2
    assert "unknown suite" in err


def test_search_subcommand_is_deterministic(capsys):
    code1, out1, _ = run(capsys, "search", "--family", "lp",
                         "--budget", "4", "--seed", "9")
    code2, out2, _ = run(capsys, "search", "--family", "lp",
                         "--budget", "4", "--seed", "9")
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["best_ratio"] >= 1.0


def test_export_sphere_csv(capsys, tmp_path):
    target = tmp_path / "sphere.csv"
    code, out, _ = run(capsys, "export", "--norm", LINF, "--what", "sphere",
                       "--points", "16", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().strip().splitlines()
    assert lines[0] == "theta,x,y"
    assert len(lines) == 17
    first = [float(v) for v in lines[1].split(",")]
    assert first == pytest.approx([0.0, 1.0, 0.0])


def test_export_ratio_landscape_json(capsys):
    code, out, _ = run(capsys, "export", "--norm", LINF,
                       "--what", "ratio-landscape", "--points", "6",
                       "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 36
    diag = [r["ratio"] for r in rows if r["theta_x"] == r["theta_y"]]
    assert diag == [1.0] * 6
    assert all(1.0 - 1e-9 <= r["ratio"] <= 2.0 + 1e-6 for r in rows)


def test_norm_from_file_and_stdin(capsys, tmp_path, monkeypatch):
    spec_file = tmp_path / "norm.json"
    spec_file.write_text(LINF)
    code, out, _ = run(capsys, "ratio", "--norm", f"@{spec_file}",
                       "--x", "1", "0", "--y", "0", "1")
    assert code == 0
    # chord 1, arc through the corner 2
    assert json.loads(out)["ratio"] == pytest.approx(2.0)

    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(LINF))
    code, out, _ = run(capsys, "ratio", "--norm", "-",
                       "--x", "1", "0", "--y", "0", "1")
    assert code == 0


def test_bad_inputs_exit_two(capsys):
    code, _, err = run(capsys, "distance", "--norm", "{broken",
                       "--x", "1", "0", "--y", "0", "1")
    assert code == 2 and "error:" in err
    code, _, err = run(capsys, "distance", "--norm", LINF,
                       "--x", "0.5", "0", "--y", "0", "1")
    assert code == 2  # off-sphere point
    code, _, err = run(capsys, "ratio", "--norm", "@/nonexistent/norm.json",
                       "--x", "1", "0", "--y", "0", "1")
    assert code == 2


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["distance", "--norm"])
    assert exc.value.code == 2
