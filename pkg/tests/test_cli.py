import json
from fractions import Fraction

import pytest

from unical.cli import main

LITRE_TEXT = """\
[units]
L L^3

[rules]
L 1 dm^3
"""

CYCLIC_TEXT = """\
[dimensions]
D

[units]
a D
b D

[rules]
a 2 b
b 3 a
"""


@pytest.fixture
def litre_path(tmp_path):
    path = tmp_path / "litre.reg"
    path.write_text(LITRE_TEXT, encoding="utf-8")
    return str(path)


@pytest.fixture
def cyclic_path(tmp_path):
    path = tmp_path / "cyclic.reg"
    path.write_text(CYCLIC_TEXT, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out), err


def test_convert_plain_output(capsys):
    code, out, _ = run(capsys, "convert", "lb*g_n", "N", "--registry", "si", "--registry", "uk")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "ratio: 8896443230521/2000000000000"
    assert lines[1] == "decimal: 4.4482216152605"
    assert lines[2] == "exact: yes"
    assert lines[3].startswith("source: (") and lines[4].startswith("target: (")


def test_convert_structured_fields(capsys):
    code, payload, _ = run_json(capsys, "convert", "mm", "m")
    assert code == 0
    assert payload["schema"] == "unical-cli/1"
    assert payload["convertible"] is True
    assert (payload["ratio_num"], payload["ratio_den"]) == (1, 1000)
    assert payload["decimal"] == "0.001"
    assert payload["root"] == "m"


def test_convert_directions_multiply_to_one(capsys):
    _, forward, _ = run_json(capsys, "convert", "J", "kg*m^2/s^2")
    _, backward, _ = run_json(capsys, "convert", "kg*m^2/s^2", "J")
    product = Fraction(forward["ratio_num"], forward["ratio_den"]) * Fraction(
        backward["ratio_num"], backward["ratio_den"]
    )
    assert product == 1


def test_convert_reports_root_difference(capsys):
    code, out, _ = run(capsys, "convert", "m", "s")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "not convertible"
    assert "source root: m" in lines[1]
    assert "target root: s" in lines[2]
    assert "difference: m*s^-1" in lines[3]


def test_parse_errors_exit_two(capsys):
    code, out, err = run(capsys, "convert", "m", "bogus")
    assert code == 2 and not out and "bogus" in err


def test_registry_errors_exit_two(capsys, tmp_path):
    broken = tmp_path / "broken.reg"
    broken.write_text("[units]\nx NOPE\n", encoding="utf-8")
    code, _, err = run(capsys, "convert", "m", "m", "--registry", str(broken))
    assert code == 2 and "line" in err
    code, _, err = run(capsys, "norm", "m", "--registry", "missing-name")
    assert code == 2 and "missing-name" in err


def test_cyclic_rules_exit_three(capsys, cyclic_path):
    code, _, err = run(capsys, "convert", "a", "b", "--registry", cyclic_path)
    assert code == 3 and "cycle" in err
    code, _, err = run(capsys, "explain", "a", "--registry", cyclic_path)
    assert code == 3


def test_classify_reports_cycle_without_failing(capsys, cyclic_path):
    code, payload, _ = run_json(capsys, "classify", "--registry", cyclic_path)
    assert code == 0
    assert payload["well_defining"] is False
    assert payload["consistency"] == "witness_found"
    assert payload["cycle"] == "a > b"
    assert payload["witness"] == "1 = 6 * 1"


def test_classify_bundled_registry(capsys):
    code, out, _ = run(capsys, "classify")
    assert code == 0
    assert "defining: yes" in out
    assert "well-defining: yes" in out
    assert "regular: no" in out
    assert "consistency: guaranteed" in out
    assert "iteration bound: 6" in out


def test_norm_output(capsys):
    code, out, _ = run(capsys, "norm", "dm^3/m^2")
    assert code == 0
    assert "prefix: d^3" in out and "root: m" in out and "normalized: (d^3, m)" in out


def test_eval_is_rule_free(capsys, litre_path):
    code, out, _ = run(capsys, "eval", "dm^3/m^2")
    assert code == 0
    assert "factor: 1/1000" in out and "root: m" in out
    code, out, _ = run(capsys, "eval", "L/m^2", "--registry", "si", "--registry", litre_path)
    assert code == 0
    assert out.splitlines()[0] == "factor: 1"
    assert "root: L*m^-2" in out


def test_dim_output(capsys):
    code, out, _ = run(capsys, "dim", "N")
    assert code == 0 and out.strip() == "dimension: L*M*T^-2"


def test_explain_traces_to_fixpoint(capsys, litre_path):
    code, payload, _ = run_json(
        capsys, "explain", "L/m^2", "--registry", "si", "--registry", litre_path
    )
    assert code == 0
    assert payload["eval"] == "(1, L*m^-2)"
    assert payload["steps"] == ["(1/1000, m)"]
    assert payload["fixpoint"] == "(1/1000, m)"


def test_explain_counts_parallel_passes(capsys):
    code, payload, _ = run_json(capsys, "explain", "W/V")
    assert code == 0
    assert len(payload["steps"]) == 4
    assert payload["fixpoint"] == "(1, A)"


def test_litre_extension_convert(capsys, litre_path):
    code, out, _ = run(
        capsys, "convert", "cL", "m^3", "--registry", "si", "--registry", litre_path
    )
    assert code == 0 and "ratio: 1/100000" in out


def test_env_var_supplies_registries(capsys, monkeypatch, litre_path):
    import os

    monkeypatch.setenv("UNICAL_REGISTRY", os.pathsep.join(["si", litre_path]))
    code, out, _ = run(capsys, "convert", "cL", "m^3")
    assert code == 0 and "ratio: 1/100000" in out
    code, _, _ = run(capsys, "convert", "cL", "m^3", "--registry", "si")
    assert code == 2  # flags override the environment, and bare si lacks L


def test_digits_flag(capsys):
    code, out, _ = run(capsys, "convert", "m", "km", "--digits", "2")
    assert code == 0 and "decimal: 0" in out and "exact: no" in out
    code, _, err = run(capsys, "convert", "m", "km", "--digits", "99")
    assert code == 2 and err


def test_no_pathological_rules_flag(capsys):
    code, payload, _ = run_json(capsys, "explain", "rad")
    assert payload["fixpoint"] == "(1, 1)"
    code, payload, _ = run_json(capsys, "explain", "rad", "--no-pathological-rules")
    assert payload["fixpoint"] == "(1, rad)"


def test_list_commands(capsys):
    code, out, _ = run(capsys, "list", "dimensions")
    assert code == 0 and out.split() == ["I", "J", "L", "M", "N", "T", "Θ"]
    code, payload, _ = run_json(capsys, "list", "units")
    assert code == 0 and len(payload["entries"]) == 29
    assert "N L*M*T^-2" in payload["entries"]
    code, out, _ = run(capsys, "list", "prefixes")
    assert "k 1000" in out.splitlines()


def test_argparse_rejects_missing_command():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
