from __future__ import annotations

import csv
import json

import pytest

from rmkit.cli import main
from rmkit.errors import BoundExceeded, ParseError
from rmkit.report import (
    GridSpec,
    exit_code,
    parse_grid,
    read_json,
    recheck_report,
    resolve_jobs,
    run_verification,
    theorem1_point,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("omega", "--D", "5"), "(1+sqrt(5))/2"),
        (("omega", "--D", "7"), "sqrt(7)"),
        (("cf", "--theta", "sqrt(7)"), "[2; (1, 1, 1, 4)]"),
        (("order", "--theta", "sqrt(5)"), "D=5 f=2 real"),
        (("stabilizer", "--theta", "sqrt(2)"), "3,4,2,3"),
        (("fixed-points", "--matrix", "2,1,1,1"), "(1+sqrt(5))/2, (1-sqrt(5))/2"),
        (("equivalent", "--x", "sqrt(2)", "--y", "sqrt(3)"), "false"),
    ],
)
def test_cli_text(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == expected


def test_cli_cf_extras(capsys):
    code, out, _ = run(capsys, "cf", "--theta", "(1+sqrt(5))/2", "--convergents", "4", "--bratteli", "2", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["convergents"] == ["1", "2", "3/2", "5/3"]
    assert payload["bratteli"] == [[1, 1, 1, 0], [1, 1, 1, 0]]


def test_cli_equivalent_witness(capsys):
    code, out, _ = run(capsys, "equivalent", "--x", "sqrt(2)", "--y", "1+sqrt(2)", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["equivalent"]
    assert abs(payload["determinant"]) == 1


def test_cli_functor(capsys):
    code, out, _ = run(capsys, "functor", "--D", "2", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["claimed"] == {"D": 2, "f": 1, "sign": "real"}
    assert payload["agreement"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ("cf", "--theta", "sqrt(4)"),
        ("cf", "--theta", "banana"),
        ("omega", "--D", "12"),
        ("fixed-points", "--matrix", "1,1,0,1"),
        ("fixed-points", "--matrix", "1,2,3"),
        ("verify", "lemma3", "--D-max", "500"),
        ("verify", "lemma1", "--grid", "(4,1)"),
    ],
)
def test_cli_domain_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("rmkit: error:")


def test_cli_unwritable_output(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "verify", "lemma4", "--N-max", "3", "--out", str(blocker / "r.json"))
    assert code == 2 and "cannot write" in err


def test_parse_grid():
    assert parse_grid("(2,1),(5, 1)") == [(2, 1), (5, 1)]
    with pytest.raises(ParseError):
        parse_grid("(2,1),x")
    with pytest.raises(ParseError):
        parse_grid("")


def test_grid_guards():
    with pytest.raises(BoundExceeded):
        GridSpec(k_max=300).validate()
    with pytest.raises(BoundExceeded):
        GridSpec(N_max=31).validate()
    with pytest.raises(BoundExceeded):
        GridSpec(points=[(2, 11)]).validate()
    with pytest.raises(BoundExceeded):
        GridSpec(bound=3, f_max=2).validate()


def test_jobs_env_override(monkeypatch):
    monkeypatch.delenv("RMKIT_JOBS", raising=False)
    assert resolve_jobs(3) == 3
    assert resolve_jobs(None) == 1
    monkeypatch.setenv("RMKIT_JOBS", "2")
    assert resolve_jobs(7) == 2


def _strip(report):
    return {k: v for k, v in report.items() if k != "duration_seconds"}


def test_report_deterministic_and_parallel_invariant(monkeypatch):
    monkeypatch.delenv("RMKIT_JOBS", raising=False)
    grid = GridSpec(D_max=13, f_max=2)
    serial = run_verification("theorem1", grid, jobs=1)
    again = run_verification("theorem1", grid, jobs=1)
    parallel = run_verification("theorem1", grid, jobs=3)
    assert _strip(serial) == _strip(again) == _strip(parallel)
    assert serial["schema_version"] == 1
    assert exit_code(serial) == 0


def test_report_structure():
    rep = run_verification("lemma3", GridSpec(points=[(5, 1), (5, 2), (2, 1)]))
    by_key = {(p["D"], p["f"]): p for p in rep["points"]}
    assert list(by_key) == [(2, 1), (5, 1), (5, 2)]
    assert by_key[(2, 1)]["discrepancies"] == []
    assert by_key[(5, 1)]["discrepancies"] == ["recovered_conductor_differs"]
    assert "minimum_below_f2D" in by_key[(5, 2)]["discrepancies"]
    assert "minimum_is_f2D" not in by_key[(5, 2)]["asserted"]
    assert all(p["status"] == "pass" for p in rep["points"])
    assert rep["summary"]["discrepancy_flagged"] == 2


def test_theorem1_skips_large_levels():
    small, large = theorem1_point(2, 1, 64, None), theorem1_point(29, 3, 64, None)
    assert small["recorded"]["lemma4.skipped"] is False
    assert "lemma4.index_is_N" in small["asserted"]
    assert large["recorded"]["lemma4.skipped"] is True
    assert large["data"]["lemma4"] is None


def test_recheck_detects_tampering():
    rep = json.loads(json.dumps(run_verification("theorem1", GridSpec(points=[(2, 1), (5, 1)]))))
    assert recheck_report(rep) == []
    rep["points"][0]["data"]["lemma1"]["minimal_power"] = 2
    rep["points"][1]["data"]["lemma3"]["mapped_matrix"] = [0, -1, 5, 0]
    problems = recheck_report(rep)
    assert len(problems) >= 2


def test_verify_writes_json_csv_figures(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RMKIT_JOBS", "1")
    out, table, figs = tmp_path / "r.json", tmp_path / "r.csv", tmp_path / "figs"
    code, text, _ = run(
        capsys, "verify", "theorem1", "--grid", "(2,1),(5,1),(3,1),(2,2)",
        "--out", str(out), "--csv", str(table), "--figures", str(figs), "--recheck",
    )
    assert code == 0
    assert text.startswith("theorem1: 4 points, 4 pass, 0 fail")
    report = read_json(out)
    with open(table, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [(int(r["D"]), int(r["f"])) for r in rows] == [(p["D"], p["f"]) for p in report["points"]]
    assert {r["recorded.lemma1.minimal_power"] for r in rows} == {"1", "10", "6", "4"}
    assert sorted(p.name for p in figs.iterdir()) == ["theorem1_minimal_powers.png", "theorem1_norm_minima.png"]


@pytest.mark.parametrize("target, figure", [("lemma1", "lemma1_minimal_powers.png"),
                                            ("lemma3", "lemma3_norm_minima.png"),
                                            ("lemma4", "lemma4_indices.png")])
def test_verify_targets_render(capsys, tmp_path, target, figure):
    code, _, _ = run(capsys, "verify", target, "--D-max", "7", "--f-max", "2", "--N-max", "5",
                     "--figures", str(tmp_path), "--json")
    assert code == 0
    assert (tmp_path / figure).stat().st_size > 0


def test_read_json_rejects_schema(tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"schema_version": 99}))
    with pytest.raises(ValueError):
        read_json(path)
