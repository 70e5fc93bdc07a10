import json
import sys

import pytest
from click.testing import CliRunner

from dmcount.cli import cli, main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("DM_ORACLE_CAP", raising=False)
    monkeypatch.delenv("DM_AUT_ORACLE_CAP", raising=False)
    monkeypatch.delenv("DM_LOG_LEVEL", raising=False)


@pytest.fixture
def runner():
    return CliRunner()


def run_json(runner, *args):
    result = runner.invoke(cli, ["--json", *args])
    return result, json.loads(result.stdout) if result.exit_code == 0 else None


@pytest.mark.parametrize("spec, value", [("Z4xZ8", "24"), ("Z2^2xZ3^2", "50"), ("Z2xZ4^3", "61474")])
def test_dm(runner, spec, value):
    result, payload = run_json(runner, "dm", spec)
    assert result.exit_code == 0
    assert payload["value"] == value
    assert set(payload) >= {"input", "canonical_type", "order", "value", "method", "timings"}


def test_dm_payload_fields(runner):
    _, payload = run_json(runner, "dm", "Z6 x Z6")
    assert payload["canonical_type"] == "Z2^2 x Z3^2"
    assert payload["order"] == "36" and isinstance(payload["order"], str)
    assert payload["method"] == "multiprime-combination"
    assert [c["dm"] for c in payload["breakdown"]] == ["1", "4"]


def test_dm_text(runner):
    result = runner.invoke(cli, ["dm", "Z4xZ8"])
    assert result.exit_code == 0
    assert "dm(G) = 24  [rank2]" in result.stdout


def test_dm_oracle_method(runner):
    _, payload = run_json(runner, "dm", "--method", "oracle", "Z3^2")
    assert payload["value"] == "4"
    assert payload["method"] == "oracle"


def test_dm_list(runner):
    _, payload = run_json(runner, "dm", "--list", "Z2^2")
    assert payload["diamonds"] == [[["0", "1"], ["0", "2"], ["0", "3"]]]


def test_dm_list_limited_to_small_groups(runner):
    result = runner.invoke(cli, ["dm", "--list", "Z2^7"])
    assert result.exit_code == 2


@pytest.mark.parametrize("spec", ["Z0", "Z4xx", "hello"])
def test_parse_errors_exit_1(runner, spec):
    result = runner.invoke(cli, ["dm", spec])
    assert result.exit_code == 1
    assert "error:" in result.output


def test_method_unavailable_exits_2(runner):
    result = runner.invoke(cli, ["--oracle-cap", "64", "dm", "Z2xZ4^3"])
    assert result.exit_code == 2
    assert "cap 64" in result.output


def test_oracle_cap_from_environment(runner, monkeypatch):
    monkeypatch.setenv("DM_ORACLE_CAP", "64")
    assert runner.invoke(cli, ["dm", "Z2xZ4^3"]).exit_code == 2
    assert runner.invoke(cli, ["--oracle-cap", "128", "dm", "Z2xZ4^3"]).exit_code == 0


def test_bad_environment_exits_1(runner, monkeypatch):
    monkeypatch.setenv("DM_ORACLE_CAP", "lots")
    result = runner.invoke(cli, ["dm", "Z4"])
    assert result.exit_code == 1
    assert "DM_ORACLE_CAP" in result.output


@pytest.mark.parametrize("spec, value", [("Z2^4", "735"), ("Z3^2", "4"), ("Z2xZ2xZ4", None), ("Z2^2 x Z3", None)])
def test_verify_passes(runner, spec, value):
    result, payload = run_json(runner, "verify", spec)
    assert result.exit_code == 0
    assert payload["verdict"] == "PASS"
    assert len(set(payload["values"].values())) == 1
    assert "oracle" in payload["values"]
    if value is not None:
        assert payload["values"]["oracle"] == value


def test_verify_lists_every_method(runner):
    _, payload = run_json(runner, "verify", "Z2xZ8")
    assert set(payload["values"]) == {
        "dispatcher",
        "rank2",
        "corollary",
        "master-sum (closed-form census)",
        "master-sum (oracle census)",
        "oracle",
    }


def test_verify_mismatch_exits_3(runner, monkeypatch):
    monkeypatch.setattr("dmcount.services.reports.dm_oracle", lambda t, config: 0)
    result = runner.invoke(cli, ["verify", "Z2^2"])
    assert result.exit_code == 3
    assert "FAIL" in result.output


def test_verify_above_cap_exits_2(runner):
    result = runner.invoke(cli, ["--oracle-cap", "16", "verify", "Z2^5"])
    assert result.exit_code == 2


def test_sections_worked_example(runner):
    _, payload = run_json(runner, "sections", "Z2xZ4^3")
    rows = {r["type"]: r["count"] for r in payload["sections"]}
    assert rows["Z2^2"] == "2338"
    assert rows["Z4^2"] == "896"
    assert rows["Z2^4"] == "16"
    assert rows["Z2^2 x Z4^2"] == "14"
    assert [c["subtotal"] for c in payload["diamond_classes"]] == ["2338", "7168", "8960", "43008"]
    assert payload["value"] == "61474"
    first = payload["diamond_classes"][0]["subgroup_classes"]
    assert [(k["subgroups"], k["quotient"]) for k in first] == [("28", "Z2 x Z4^2"), ("7", "Z2^3 x Z4")]


def test_sections_text(runner):
    result = runner.invoke(cli, ["sections", "Z2^4"])
    assert result.exit_code == 0
    assert "per section" in result.stdout
    assert "dm(G) = 735" in result.stdout


def test_sections_trivial_group(runner):
    _, payload = run_json(runner, "sections", "Z1")
    assert payload["sections"] == [{"type": "Z1", "count": "1"}]
    assert payload["value"] == "0"


def test_aut(runner):
    _, payload = run_json(runner, "aut", "Z4xZ4")
    assert payload["value"] == "96"
    _, payload = run_json(runner, "aut", "--brute-force", "Z2xZ4")
    assert payload["value"] == payload["brute_force"] == "8"


def test_aut_brute_force_cap(runner):
    result = runner.invoke(cli, ["aut", "--brute-force", "Z2^7"])
    assert result.exit_code == 2


@pytest.mark.parametrize("spec, value", [("Z2^3", "16"), ("Z2xZ4", "8"), ("Z2^2xZ3^2", "30")])
def test_subgroups(runner, spec, value):
    _, payload = run_json(runner, "subgroups", spec)
    assert payload["value"] == value
    assert sum(int(v) for v in payload["by_order"].values()) == int(value)


def test_subgroups_by_type_and_dump(runner):
    _, payload = run_json(runner, "subgroups", "--by-type", "Z2^2")
    assert payload["by_type"] == {"Z1": "1", "Z2": "3", "Z2^2": "1"}
    result = runner.invoke(cli, ["subgroups", "--dump", "Z2^2"])
    assert "4\t0,1,2,3\tZ2^2" in result.stdout


def test_subgroups_formula_above_cap(runner):
    _, payload = run_json(runner, "--oracle-cap", "16", "subgroups", "Z2^10")
    assert payload["method"] == "formula"
    assert "by_order" not in payload


def test_survey_order_four(runner):
    _, payload = run_json(runner, "survey", "--prime", "2", "--exponent", "2")
    assert [(r["type"], r["dm"], r["lex_rank"]) for r in payload["rows"]] == [("Z2^2", "1", "0"), ("Z4", "0", "1")]
    assert payload["violations"] == "0"


def test_survey_order_sixteen(runner):
    _, payload = run_json(runner, "survey", "-p", "2", "-n", "4", "--sort", "dm")
    assert payload["rows"][0]["type"] == "Z2^4"
    assert payload["rows"][0]["dm"] == "735"
    assert payload["rows"][-1]["dm"] == "0"


def test_survey_odd_prime(runner):
    _, payload = run_json(runner, "survey", "-p", "3", "-n", "2")
    assert {r["type"]: r["dm"] for r in payload["rows"]} == {"Z3^2": "4", "Z9": "0"}


def test_survey_marks_unavailable_rows(runner):
    result, payload = run_json(runner, "--oracle-cap", "64", "survey", "-p", "2", "-n", "8")
    assert result.exit_code == 0
    methods = {r["type"]: r["method"] for r in payload["rows"]}
    assert methods["Z2 x Z4 x Z32"] == "unavailable"
    assert methods["Z2^8"] == "elementary"


def test_survey_rejects_non_prime(runner):
    result = runner.invoke(cli, ["survey", "-p", "4", "-n", "2"])
    assert result.exit_code == 1


@pytest.mark.parametrize(
    "args, message",
    [
        (["dm"], "Missing argument"),
        (["dm", "--method", "bogus", "Z4"], "bogus"),
        (["--oracle-cap", "0", "dm", "Z4"], "--oracle-cap"),
        (["survey", "-p", "2"], "--exponent"),
        (["nope"], "nope"),
    ],
)
def test_click_usage_errors_exit_1(runner, args, message):
    result = runner.invoke(cli, args)
    assert result.exit_code == 1
    assert message in result.output


def test_main_exit_codes(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["dmcount", "dm"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 1
    assert "Missing argument" in capsys.readouterr().err

    monkeypatch.setattr(sys, "argv", ["dmcount", "dm", "--method", "bogus", "Z4"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 1

    monkeypatch.setattr(sys, "argv", ["dmcount", "--json", "dm", "Z4xZ8"])
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 0
    assert json.loads(capsys.readouterr().out)["value"] == "24"


def test_log_level_from_environment(runner, monkeypatch):
    assert "Parsed 'Z4' as Z4" not in runner.invoke(cli, ["dm", "Z4"]).output
    monkeypatch.setenv("DM_LOG_LEVEL", "INFO")
    assert "Parsed 'Z4' as Z4" in runner.invoke(cli, ["dm", "Z4"]).output


def test_verbose_overrides_log_level(runner, monkeypatch):
    monkeypatch.setenv("DM_LOG_LEVEL", "ERROR")
    assert "Parsed 'Z4' as Z4" in runner.invoke(cli, ["-v", "dm", "Z4"]).output


def test_subgroups_closed_form_skips_large_breakdown(runner):
    result, payload = run_json(runner, "subgroups", "Z2^7")
    assert result.exit_code == 0
    assert payload["value"] == "29212"
    assert payload["method"] == "formula"
    assert "by_order" not in payload


def test_subgroups_dump_in_json(runner):
    _, payload = run_json(runner, "subgroups", "--dump", "Z2^2")
    assert "4\t0,1,2,3\tZ2^2" in payload["lines"]
    assert len(payload["lines"]) == 5


def _numbers(node):
    if isinstance(node, bool) or node is None or isinstance(node, str):
        return []
    if isinstance(node, dict):
        return [n for v in node.values() for n in _numbers(v)]
    if isinstance(node, list):
        return [n for v in node for n in _numbers(v)]
    return [node]


@pytest.mark.parametrize(
    "args",
    [
        ["dm", "--list", "Z2^2"],
        ["verify", "Z2xZ4"],
        ["sections", "Z2^3"],
        ["aut", "--brute-force", "Z2xZ4"],
        ["subgroups", "--by-type", "Z2^2xZ3"],
        ["survey", "-p", "2", "-n", "3"],
    ],
    ids=lambda args: args[0],
)
def test_json_payload_fields(runner, args):
    result, payload = run_json(runner, *args)
    assert result.exit_code == 0
    assert {"input", "canonical_type", "order", "method", "timings"} <= set(payload)
    assert "value" in payload or "values" in payload
    assert _numbers(payload) == []
