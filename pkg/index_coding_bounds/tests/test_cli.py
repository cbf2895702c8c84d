"""Command-line smoke tests."""

import pytest
from typer.testing import CliRunner

from index_coding_bounds import __version__
from index_coding_bounds.main import app
from index_coding_bounds.report import parse_json

runner = CliRunner()


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_catalog_single_entry():
    result = runner.invoke(app, ["catalog", "--no", "140"])
    assert result.exit_code == 0
    assert "Problem No 140: (1|-),(2|1,4),(3|1,2),(4|1,2,3)  sum_rate=21  class=bold" in result.output


def test_catalog_count_by_class():
    result = runner.invoke(app, ["catalog", "--class", "open_star", "--count"])
    assert result.exit_code == 0
    assert result.output.strip().splitlines()[-1] == "5"


def test_catalog_filter_by_fractional_rate():
    result = runner.invoke(app, ["catalog", "--sum-rate", "56/3", "--format", "csv"])
    assert result.exit_code == 0
    assert '47,"(1|' in result.output


def test_catalog_rejects_unknown_number():
    result = runner.invoke(app, ["catalog", "--no", "219"])
    assert result.exit_code != 0


def test_inner_catalog_problem():
    result = runner.invoke(app, ["inner", "--no", "140"])
    assert result.exit_code == 0
    assert "value=21  (21.000000 (21))" in result.output
    assert "delta=full |Δ|=32" in result.output
    assert "composite_rates=65" in result.output


def test_inner_single_message_centralized():
    result = runner.invoke(app, ["inner", "--problem", "(1|-)", "--scheme", "cc", "--cap", "1"])
    assert result.exit_code == 0
    assert "value=1  " in result.output
    assert "composite_rates=1  " in result.output


def test_inner_nonenhanced_problem_155():
    result = runner.invoke(app, ["inner", "--no", "155", "--scheme", "dist-nonenhanced"])
    assert result.exit_code == 0
    assert "value=23  " in result.output


def test_inner_centralized_symmetric():
    result = runner.invoke(app, ["inner", "--problem", "(1|2),(2|1)", "--scheme", "cc-enhanced", "--objective", "sym"])
    assert result.exit_code == 0
    assert "value=1  " in result.output


def test_inner_dumps_lp(tmp_path):
    target = tmp_path / "inner.lp"
    result = runner.invoke(app, ["inner", "--problem", "(1|-)", "--dump-lp", str(target)])
    assert result.exit_code == 0
    assert target.read_text(encoding="utf-8").startswith("\\ dist\nMaximize")


def test_inner_delta_file(tmp_path):
    delta = tmp_path / "delta.txt"
    delta.write_text("1;2;3;4\n", encoding="utf-8")
    result = runner.invoke(app, ["inner", "--no", "155", "--delta-file", str(delta)])
    assert result.exit_code == 0
    assert "delta=custom |Δ|=1" in result.output


def test_inner_needs_exactly_one_problem():
    assert runner.invoke(app, ["inner"]).exit_code != 0
    assert runner.invoke(app, ["inner", "--no", "1", "--problem", "(1|-)"]).exit_code != 0


def test_inner_reports_parse_errors():
    result = runner.invoke(app, ["inner", "--problem", "(1|1)"])
    assert result.exit_code == 1


def test_inner_centralized_rejects_caps_file(tmp_path):
    caps = tmp_path / "caps.txt"
    caps.write_text("1=1\n3=1\n", encoding="utf-8")
    result = runner.invoke(app, ["inner", "--problem", "(1|2),(2|1)", "--scheme", "cc", "--caps-file", str(caps)])
    assert result.exit_code == 1


def test_outer_problem_140():
    result = runner.invoke(app, ["outer", "--no", "140"])
    assert result.exit_code == 0
    assert "thm2=21 best=21 U={1} V={2}" in result.output


def test_outer_no_side_information():
    result = runner.invoke(app, ["outer", "--no", "1"])
    assert result.exit_code == 0
    assert "thm1=15 thm2=15 best=15" in result.output


def test_outer_inapplicable_closure_bound():
    result = runner.invoke(app, ["outer", "--no", "218"])
    assert result.exit_code == 0
    assert "thm1=32 thm2=inapplicable best=32" in result.output


@pytest.mark.parametrize("n, count", [(2, "3"), (3, "16")])
def test_enumerate_count(n, count):
    result = runner.invoke(app, ["enumerate", "--n", str(n), "--count"])
    assert result.exit_code == 0
    assert result.output.strip().splitlines()[-1] == count


def test_enumerate_four_messages_names_catalog_numbers():
    result = runner.invoke(app, ["enumerate", "--n", "4"])
    assert result.exit_code == 0
    lines = [line for line in result.output.splitlines() if "(Problem No " in line]
    assert len(lines) == 218


def test_table_json_output(tmp_path):
    target = tmp_path / "table.json"
    result = runner.invoke(
        app,
        ["table", "--no", "140", "--jobs", "1", "--format", "json", "--no-log", "--output", str(target)],
    )
    assert result.exit_code == 0
    table = parse_json(target.read_text(encoding="utf-8"))
    assert [r.problem_no for r in table.reports] == [140]
    assert table.summary.established == 1


def test_table_text_with_check():
    result = runner.invoke(app, ["table", "--no", "218", "--jobs", "1", "--no-log", "--check-table"])
    assert result.exit_code == 0
    assert "total=1" in result.output


def test_table_rejects_out_of_range_numbers():
    result = runner.invoke(app, ["table", "--no", "0", "--no-log"])
    assert result.exit_code != 0


def test_table_text_cannot_be_written_to_a_file(tmp_path):
    target = tmp_path / "table.txt"
    result = runner.invoke(app, ["table", "--no", "218", "--jobs", "1", "--no-log", "--output", str(target)])
    assert result.exit_code == 2
    assert not target.exists()
