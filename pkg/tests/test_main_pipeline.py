import csv
import io
import json

import pytest

import main_pipeline
from main_pipeline import WallCrossingPipeline, main, parse_int_list, render_csv
from errors import PreconditionError
from quiver import Side


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_int_list():
    assert parse_int_list("4,2,1") == (4, 2, 1)
    assert parse_int_list(" ") == ()
    with pytest.raises(PreconditionError):
        parse_int_list("4,x")


def test_unknown_format_is_rejected():
    with pytest.raises(PreconditionError):
        WallCrossingPipeline(output_format="xml")


def test_pt_series_low_order(capsys):
    code, report = run_json(capsys, "pt-series", "--nmax", "3", "--bmax", "2")
    assert code == 0 and report["passed"]
    values = {(row["n"], row["beta"]): row["P"] for row in report["rows"]}
    assert values[(1, 1)] == 1
    assert values[(2, 1)] == -2
    assert values[(3, 1)] == 3
    assert values[(2, 2)] == 0
    assert all(row["P"] * (-1) ** (row["n"] + row["beta"]) == row["a"] for row in report["rows"])
    assert report["certificate"]["passed"]


def test_pt_series_empty_box(capsys):
    code, report = run_json(capsys, "pt-series", "--nmax", "0")
    assert code == 0
    assert report["rows"] == [{"n": 0, "beta": 0, "P": 1, "a": 1}]


def test_pt_series_csv_agrees_with_json(capsys):
    _, report = run_json(capsys, "pt-series", "--nmax", "4", "--bmax", "3")
    assert main(["pt-series", "--nmax", "4", "--bmax", "3", "--format", "csv"]) == 0
    table = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(table) == len(report["rows"])
    for row, parsed in zip(report["rows"], table):
        assert {key: str(value) for key, value in row.items()} == parsed


def test_output_is_deterministic(capsys):
    main(["crosscheck", "--nmax", "5"])
    first = capsys.readouterr().out
    main(["crosscheck", "--nmax", "5"])
    assert capsys.readouterr().out == first


def test_resolve_worked_example(capsys):
    code, report = run_json(capsys, "resolve", "--diagram", "4,2,1", "--d", "4", "--b", "7")
    assert code == 0
    assert [row["s"] for row in report["rows"]] == [1, 3, 5, 6]
    assert [row["mult"] for row in report["rows"]] == [7, 35, 21, 7]
    assert report["rows"][-1]["delta"] == [4, 4, 3, 2]


def test_resolve_of_empty_diagram(capsys):
    code, report = run_json(capsys, "resolve", "--diagram", "", "--d", "1", "--b", "0")
    assert code == 0 and report["rows"] == []


def test_invalid_diagram_exits_with_two(capsys):
    assert main(["resolve", "--diagram", "1,2", "--d", "3", "--b", "2"]) == 2
    assert "❌" in capsys.readouterr().err


def test_strip(capsys):
    _, report = run_json(capsys, "strip", "--diagram", "5,4,3,2,2", "--d", "5")
    assert report["rows"] == [{"delta": [5, 4, 3, 2, 2], "stripped": [3, 2, 1, 1], "removed": 9}]


def test_sod_standard_flip(capsys):
    code, report = run_json(capsys, "sod", "--a", "3", "--b", "0", "--d", "1")
    assert code == 0
    assert len(report["rows"]) == 4
    assert [row["child"] for row in report["rows"]] == ["B_0(0)"] * 3 + ["B_0(1)"]


def test_kn_strata(capsys):
    _, report = run_json(capsys, "kn-strata", "--a", "8", "--b", "6", "--d", "2")
    assert [row["eta"] for row in report["rows"]] == [16, 7, 12, 5]
    assert report["passed"]


def test_flip_window_check(capsys):
    code, report = run_json(capsys, "flip-window-check", "--a", "5", "--b", "3", "--d", "2")
    assert code == 0 and report["passed"]


def test_ext_quiver(capsys):
    _, report = run_json(capsys, "ext-quiver", "--v0", "4", "--v1", "3", "--m", "2", "--d", "1")
    row = report["rows"][0]
    assert {key: row[key] for key in ("a", "b", "c", "C")} == {"a": 8, "b": 6, "c": 4, "C": 9}
    assert row["loops_inf"] == "unknown"


def test_walls(capsys):
    _, report = run_json(capsys, "walls", "--v0", "0", "--v1", "0")
    assert report["rows"] == []
    _, report = run_json(capsys, "walls", "--v0", "3", "--v1", "2")
    assert [(row["m"], row["max_l"]) for row in report["rows"]] == [(1, 3), (2, 1), (3, 1)]


def test_wallcross(capsys):
    _, report = run_json(capsys, "wallcross", "--v0", "2", "--v1", "1", "--m", "2")
    assert report["passed"]
    assert sum(1 for row in report["rows"] if row["l"] == 1) == 2


def test_window_check(capsys):
    code, report = run_json(capsys, "window-check", "--v0", "4", "--v1", "3", "--m", "2", "--d", "1",
                            "--side", "both")
    assert code == 0 and report["passed"]
    assert report["rows"][0]["interval"] == {"lo": "-19/2", "hi": "-3/2", "closed": "[)"}


def test_twists(capsys):
    _, report = run_json(capsys, "twists", "--j", "0", "--m", "2", "--d", "1")
    assert report["rows"][0]["per_factor_weights"] == [2]
    assert report["rows"][0]["tail_twist"] == 4


def test_bad_twists_exit_with_two(capsys):
    assert main(["twists", "--j", "5", "--m", "2", "--d", "1"]) == 2


def test_usage_errors_exit_through_argparse():
    with pytest.raises(SystemExit) as info:
        main(["pt-series"])
    assert info.value.code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.csv"
    assert main(["walls", "--v0", "3", "--v1", "2", "--format", "csv", "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    lines = target.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "family,m,max_l"
    assert lines[1:] == ["W,1,3", "W,2,1", "W,3,1"]


def test_pretty_output(capsys):
    assert main(["pt-series", "--nmax", "2", "--format", "pretty"]) == 0
    out = capsys.readouterr().out
    assert "pt-series" in out and "✅ PASSED" in out


def test_render_csv_of_nothing():
    assert render_csv([]) == ""


def failing_verdict(name):
    return {"name": name, "passed": False, "checked": 1, "first_failure": {"case": 1}}


def test_too_few_walls_fail_the_crosscheck(capsys):
    code = main(["crosscheck", "--nmax", "3", "--walls", "1"])
    captured = capsys.readouterr()
    assert code == 1
    report = json.loads(captured.out)
    assert not report["passed"]
    assert report["certificate"]["first_failure"]["check"] == "wall-crossing product = P"
    assert "❌ crosscheck: wall-crossing product = P failed" in captured.err


def test_failed_pt_series_exits_with_one(capsys, monkeypatch):
    broken = failing_verdict("P = (-1)^(n+beta) a")
    monkeypatch.setattr(main_pipeline, "crosscheck", lambda trunc, walls=None: {
        "name": "crosscheck",
        "passed": False,
        "walls": 2,
        "checks": [broken],
        "rows": [],
        "first_failure": {"check": broken["name"], "n": 1, "beta": 1},
    })
    assert main(["pt-series", "--nmax", "2"]) == 1
    assert "❌ pt-series: P = (-1)^(n+beta) a failed at {'case': 1}" in capsys.readouterr().err


def test_failed_window_check_exits_with_one(capsys, monkeypatch):
    monkeypatch.setattr(main_pipeline, "verify_koszul_block",
                        lambda setup, side=Side.PLUS: failing_verdict("koszul window"))
    assert main(["window-check", "--v0", "4", "--v1", "3", "--m", "2", "--d", "1"]) == 1
    assert "koszul window failed" in capsys.readouterr().err


def test_failed_flip_window_check_exits_with_one(capsys, monkeypatch):
    monkeypatch.setattr(main_pipeline, "verify_flip_windows", lambda setup: failing_verdict("flip windows"))
    code, report = run_json(capsys, "flip-window-check", "--a", "5", "--b", "3", "--d", "2")
    assert code == 1 and not report["passed"]
    assert report["certificate"]["certificate"]["checks"][0]["name"] == "flip windows"


def test_pt_summands_command(capsys):
    code, report = run_json(capsys, "pt-summands", "--n", "3", "--beta", "2")
    assert code == 0 and report["passed"]
    assert report["params"] == {"n": 3, "beta": 2, "walls": 3}
    assert [row["order"] for row in report["rows"]] == [0, 1]
    assert report["rows"][0]["labels"] == [
        {"m": 3, "l": 0, "j": []},
        {"m": 2, "l": 1, "j": [1]},
        {"m": 1, "l": 1, "j": [0]},
    ]
    names = [check["name"] for check in report["certificate"]["certificate"]["checks"]]
    assert names == ["consecutive summands descend", "summand count = a"]


def test_pt_summands_rejects_large_beta(capsys):
    assert main(["pt-summands", "--n", "1", "--beta", "2"]) == 2
    assert "❌" in capsys.readouterr().err
