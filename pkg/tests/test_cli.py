import json

import pytest

from twisted_lambert.cli import EXIT_ACCEPTANCE, EXIT_CONFIG, EXIT_DATA, EXIT_OK, eval_expression, main, parse_config
from twisted_lambert.errors import ConfigError
from twisted_lambert.precision import PrecisionContext

CTX = PrecisionContext(40)

BASE = """
[form]
source = delta
n_max = 4096

[psi]
modulus = 1
values = principal

[psi_prime]
modulus = 1
values = principal

[run]
y = 2
n_max_lhs = 1500
n_max_rhs = 1500
zero_budget = 15
digits = 40
tolerance = 1e-6
"""


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_expressions():
    mp = CTX.mp
    assert eval_expression("1+sqrt(5)", CTX) == 1 + mp.sqrt(5)
    assert eval_expression("pi**sqrt(3)", CTX) == mp.pi ** mp.sqrt(3)
    assert eval_expression("0.1", CTX) == mp.mpf("0.1")
    for bad in ("__import__('os')", "x + 1", "sqrt(2, 3)", "1 +"):
        with pytest.raises(ValueError):
            eval_expression(bad, CTX)


def test_config_problems_are_aggregated(tmp_path):
    text = BASE.replace("digits = 40", "digits = 10").replace("y = 2", "y = -1, foo").replace(
        "modulus = 1\nvalues = principal\n\n[run]", "modulus = 6\nvalues = principal\n\n[run]")
    text += "colour = red\n"
    with pytest.raises(ConfigError) as info:
        parse_config(write(tmp_path, text))
    problems = info.value.problems
    assert len(problems) >= 4
    joined = " ".join(problems)
    assert "digits" in joined and "colour" in joined and "primitive" in joined and "positive" in joined


def test_config_error_exit_code(tmp_path, capsys):
    p = write(tmp_path, BASE.replace("zero_budget = 15", "zero_budget = many"))
    assert main(["verify", str(p)]) == EXIT_CONFIG
    assert "zero_budget" in capsys.readouterr().err


def test_missing_coefficient_file(tmp_path):
    p = write(tmp_path, BASE.replace("source = delta", "source = nowhere.txt"))
    assert main(["verify", str(p)]) == EXIT_CONFIG


def test_verify_is_byte_identical(tmp_path):
    p = write(tmp_path, BASE)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", str(p), "--out", str(out1)]) == EXIT_OK
    assert main(["verify", str(p), "--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert float(report["records"][0]["abs_diff"]) <= 1e-6
    meta = json.loads((tmp_path / "a.json.meta.json").read_text())
    assert "timestamp" in meta and "timestamp" not in report


def test_verify_tolerance_failure(tmp_path):
    p = write(tmp_path, BASE.replace("tolerance = 1e-6", "tolerance = 1e-40"))
    assert main(["verify", str(p), "--out", str(tmp_path / "r.json")]) == EXIT_ACCEPTANCE


def test_zeros_roundtrip_and_failure(tmp_path, capsys):
    csv_path = tmp_path / "z.csv"
    assert main(["zeros", "find", "--modulus", "1", "--t-max", "30", "--out", str(csv_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("\n") == 3 and "14.1347251417" in out and "25.0108575801" in out
    assert main(["zeros", "import", str(csv_path), "--modulus", "1"]) == EXIT_OK
    text = csv_path.read_text().replace(",14.1347", ",14.1357")
    csv_path.write_text(text)
    assert main(["zeros", "import", str(csv_path), "--modulus", "1"]) == EXIT_DATA
    assert "[zeros]" in capsys.readouterr().err


def test_zeros_export_needs_out():
    assert main(["zeros", "export", "--modulus", "1", "--t-max", "15"]) == EXIT_CONFIG


def test_bad_modulus():
    assert main(["zeros", "find", "--modulus", "6"]) == EXIT_CONFIG


def test_oscillate_and_asymptotic(tmp_path):
    text = BASE.replace("modulus = 1\nvalues = principal\n\n[run]", "modulus = 5\nvalues = [1, -1, -1, 1, 0]\n\n[run]")
    text = text.replace("y = 2", "y_min = 0.02\ny_max = 0.1\ny_points = 5").replace("n_max = 4096", "n_max = 6000")
    p = write(tmp_path, text)
    lo = tmp_path / "lo.csv"
    hi = tmp_path / "hi.csv"
    assert main(["oscillate", str(p), "--zero-budget", "5", "--out", str(lo)]) == EXIT_OK
    assert main(["oscillate", str(p), "--zero-budget", "15", "--out", str(hi)]) == EXIT_OK

    def max_dev(path):
        rows = path.read_text().splitlines()[1:]
        return max(abs(float(r.split(",")[3])) for r in rows)

    assert max_dev(hi) < max_dev(lo)
    assert main(["asymptotic", str(p), "--out", str(tmp_path / "b.json")]) == EXIT_OK
    data = json.loads((tmp_path / "b.json").read_text())
    assert data["B"][0] == "0.0" and float(data["relative_gap"]) < 5e-4


def test_table1_precision_stability(tmp_path, capsys):
    codes, tables = [], []
    for digits in ("40", "60"):
        codes.append(main(["table1", "--digits", digits, "--out", str(tmp_path / f"t{digits}.json")]))
        out = capsys.readouterr().out
        tables.append([line for line in out.splitlines() if not line.startswith(("FAIL", "all rows"))])
    assert tables[0] == tables[1]
    assert "0.02160533841" in tables[0][1]
    assert "0.00069009521" in tables[0][5]
    # the printed LHS at y = 0.0749 does not reproduce, so the run reports an acceptance failure
    assert codes == [EXIT_ACCEPTANCE, EXIT_ACCEPTANCE]
