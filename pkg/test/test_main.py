# -*- coding: utf-8 -*-

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from core.config import settings
from apps.calculus.parser import pretty
from main import cli, main

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def quiet_logs(monkeypatch):
    # 标准输出只保留命令结果
    monkeypatch.setattr(settings, "LOG_LEVEL", "CRITICAL")


def invoke(runner: CliRunner, *args: str):
    return runner.invoke(cli, [str(arg) for arg in args])


def envelope(result) -> dict:
    return json.loads(result.stdout)


def test_parse_prints_canonical_form(runner, corpus_dir, nemid):
    result = invoke(runner, "parse", corpus_dir / "nemid.vqc")
    assert result.exit_code == 0
    assert result.stdout.strip() == pretty(nemid)


def test_parse_reports_span(runner, tmp_path):
    source = tmp_path / "bad.vqc"
    source.write_text("1: c?x .\n  2: d", encoding="utf-8")
    result = invoke(runner, "parse", source)
    assert result.exit_code == 2
    assert result.stdout.strip() == f"{source}:2:7: error: expected '?' or '!' but found end of input"


def test_parse_empty_file(runner, tmp_path):
    source = tmp_path / "empty.vqc"
    source.write_text("", encoding="utf-8")
    result = invoke(runner, "parse", source, "--json")
    assert result.exit_code == 2
    body = envelope(result)
    assert body["result"] is None
    assert body["diagnostics"][0]["code"] == "PARSE_ERROR"
    assert body["diagnostics"][0]["line"] == 1


def test_parse_validation_error(runner, tmp_path):
    source = tmp_path / "dup.vqc"
    source.write_text("1: c?x . 0 | 1: d?x2 . 0", encoding="utf-8")
    result = invoke(runner, "parse", source)
    assert result.exit_code == 2
    assert "duplicate label 1" in result.stdout


def test_missing_process_file(runner, tmp_path):
    result = invoke(runner, "parse", tmp_path / "nowhere.vqc")
    assert result.exit_code == 1


def test_discover_nemid(runner, corpus_dir):
    result = invoke(runner, "discover", corpus_dir / "nemid.vqc", "--label", 13, "--json")
    assert result.exit_code == 0
    body = envelope(result)
    assert set(body) == {"command", "input", "result", "diagnostics"}
    assert body["command"] == "discover"
    assert body["result"]["attacks"] == [["cert"], ["id", "otp", "pwd"], ["id", "pin"], ["login"]]


def test_discover_text(runner, corpus_dir):
    result = invoke(runner, "discover", corpus_dir / "nemid.vqc", "--label", 13)
    assert result.stdout.splitlines() == ["{cert}", "{id, otp, pwd}", "{id, pin}", "{login}"]


def test_discover_all_attacks(runner, corpus_dir):
    result = invoke(runner, "discover", corpus_dir / "restriction.vqc", "--label", 5, "--all", "--json")
    assert envelope(result)["result"]["attacks"] == [["a"], ["a", "c"], ["c"]]


def test_discover_unreachable(runner, tmp_path):
    source = tmp_path / "dead.vqc"
    source.write_text("1: a?x . 2: case x of some(y): 0 else 3: b!b . 0 end", encoding="utf-8")
    result = invoke(runner, "discover", source, "--label", 3)
    assert result.exit_code == 3
    assert result.stdout.strip() == "unreachable"


def test_discover_unknown_label(runner, corpus_dir):
    result = invoke(runner, "discover", corpus_dir / "nemid.vqc", "--label", 99)
    assert result.exit_code == 1
    assert "unknown label 99" in result.stdout


def test_quantify_nemid(runner, corpus_dir, config_dir):
    result = invoke(
        runner, "quantify", corpus_dir / "nemid.vqc", "--label", 13, "--costs", config_dir / "nemid.costs", "--json"
    )
    assert result.exit_code == 0
    assert envelope(result)["result"]["minima"] == [{"attack": ["id", "pin"], "cost": "15000"}]


def test_quantify_symbolic(runner, corpus_dir, config_dir):
    result = invoke(
        runner,
        "quantify", corpus_dir / "two_paths.vqc",
        "--label", 6,
        "--costs", config_dir / "two_paths.costs",
        "--lattice", config_dir / "resources.lattice",
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["{a}\tcpu", "{b}\tenrg"]


def test_quantify_bad_cost_file(runner, corpus_dir, tmp_path):
    costs = tmp_path / "bad.costs"
    costs.write_text("pin = 1\n", encoding="utf-8")
    result = invoke(runner, "quantify", corpus_dir / "nemid.vqc", "--label", 13, "--costs", costs)
    assert result.exit_code == 4


def test_check_nemid(runner, corpus_dir, config_dir):
    result = invoke(
        runner,
        "check", corpus_dir / "nemid.vqc",
        "--labels", "13,12",
        "--costs", config_dir / "nemid.costs",
        "--levels", config_dir / "nemid.levels",
        "--security", config_dir / "nemid.security",
        "--security-lattice", config_dir / "access.lattice",
        "--json",
    )
    assert result.exit_code == 0
    body = envelope(result)["result"]
    assert body["inversions"] == [13]
    entries = {entry["label"]: entry for entry in body["entries"]}
    assert entries[12]["verdict"] == "pass"
    assert entries[13]["gap"] == "4400000000985000"


def test_check_without_labels(runner, corpus_dir, config_dir):
    result = invoke(
        runner,
        "check", corpus_dir / "nemid.vqc",
        "--costs", config_dir / "nemid.costs",
        "--levels", config_dir / "nemid.levels",
        "--security", config_dir / "nemid.security",
        "--security-lattice", config_dir / "access.lattice",
        "--json",
    )
    assert result.exit_code == 0
    assert envelope(result)["result"]["entries"] == []


def test_tree_writes_dot(runner, corpus_dir, tmp_path):
    target = tmp_path / "nemid.dot"
    result = invoke(runner, "tree", corpus_dir / "nemid.vqc", "--label", 13, "--dot", target, "--title", "NemID")
    assert result.exit_code == 0
    assert target.read_bytes() == (GOLDEN_DIR / "nemid_13.dot").read_bytes()


def test_tree_via_constraints(runner, corpus_dir, config_dir):
    result = invoke(
        runner,
        "tree", corpus_dir / "nemid.vqc",
        "--label", 13,
        "--via", "constraints",
        "--costs", config_dir / "nemid.costs",
        "--json",
    )
    assert result.exit_code == 0
    body = envelope(result)["result"]
    assert body["via"] == "constraints"
    assert body["minima"] == [{"attack": ["id", "pin"], "cost": "15000"}]


def test_tree_via_constraints_needs_costs(runner, corpus_dir):
    result = invoke(runner, "tree", corpus_dir / "nemid.vqc", "--label", 13, "--via", "constraints")
    assert result.exit_code == 1


def test_simulate(runner, corpus_dir):
    result = invoke(runner, "simulate", corpus_dir / "nemid.vqc", "--label", 13, "--know", "pin,id", "--json")
    assert result.exit_code == 0
    body = envelope(result)["result"]
    assert body["verdict"] == "pass"
    assert body["knowledge"] == ["id", "pin"]
    assert body["support"] == ["id", "pin"]
    assert 13 in body["reached"]


def test_constraints_implication_view(runner, corpus_dir):
    result = invoke(runner, "constraints", corpus_dir / "cyclic.vqc", "--label", 7, "--view", "implies", "--json")
    assert result.exit_code == 0
    rules = {rule["consequent"]: rule["antecedent"] for rule in envelope(result)["result"]["rules"]}
    assert rules["chan:a"] == "chan:b"
    assert rules["lab:7"] == "(and chan:a chan:b)"


def test_lattice_command(runner, config_dir, tmp_path):
    assert invoke(runner, "lattice", config_dir / "resources.lattice").exit_code == 0
    broken = tmp_path / "broken.lattice"
    broken.write_text("elements: b, x, y\nbottom: b\nleq: b < x\nleq: b < y\n", encoding="utf-8")
    result = invoke(runner, "lattice", broken)
    assert result.exit_code == 4
    assert "lub missing: x, y" in result.stdout


def test_output_is_deterministic(runner, corpus_dir):
    args = ("discover", corpus_dir / "nemid_phone.vqc", "--label", 13, "--json")
    assert invoke(runner, *args).stdout == invoke(runner, *args).stdout


def test_main_maps_usage_errors(corpus_dir):
    assert main(["discover", str(corpus_dir / "nemid.vqc"), "--label", "x"]) == 1
    assert main(["discover", str(corpus_dir / "nemid.vqc"), "--label", "13", "--bogus"]) == 1
    assert main(["quantify", str(corpus_dir / "nemid.vqc"), "--label", "13"]) == 1
    assert main(["--version"]) == 0


def test_main_returns_command_exit_codes(corpus_dir, tmp_path):
    assert main(["discover", str(corpus_dir / "nemid.vqc"), "--label", "13"]) == 0
    broken = tmp_path / "broken.vqc"
    broken.write_text("1: a?x .", encoding="utf-8")
    assert main(["parse", str(broken)]) == 2
