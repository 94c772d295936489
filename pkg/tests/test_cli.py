import json

import pytest

from padic_cf.cli import main, run_sweep


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.json"
    path.write_text(json.dumps({"p": 5, "preperiod": ["0", "4/25", "-3/125"], "period": ["1/5"]}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_human(capsys):
    code, out, _ = run(capsys, "expand", "--p", "5", "--value", "1/3")
    assert code == 0
    assert out.strip() == "[2, -3/5] Finite"


def test_expand_ruban(capsys):
    code, out, _ = run(capsys, "expand", "--p", "5", "--kind", "ruban", "--value", "-5")
    assert code == 0 and "PeriodDetected" in out


def test_expand_json_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "expand", "--p", "7", "--value", "(0 + 1*sqrt(2))/1", "--json")
    data = json.loads(out)
    assert data["schema"] == 1 and data["status"] == "PeriodDetected"
    path = tmp_path / "cf.json"
    path.write_text(out)
    code, out, _ = run(capsys, "convergents", "--p", "7", "--cf", str(path), "--csv", "--n", "6")
    assert code == 0
    assert out.splitlines()[0] == "n,A,B,e,f"
    assert len(out.splitlines()) == 1 + 8


def test_euclid(capsys):
    code, out, _ = run(capsys, "euclid", "--p", "5", "--x", "1", "--y", "3")
    assert code == 0 and "quotients: [2, -3/5]" in out


def test_floor_json(capsys):
    code, out, _ = run(capsys, "floor", "--p", "5", "--value", "2/5", "--kind", "counterexample", "--json")
    data = json.loads(out)
    assert data["floor"] == "1/5" and data["padic_contraction"] is False


def test_height_h2_worked_example(capsys, example_file):
    code, out, _ = run(capsys, "height", "--p", "5", "--cf", example_file, "--check", "h2")
    assert "h = 9713125, bound = 9765625" in out and "PASS" in out
    # the size claim |B_2|^2 < p/(4p+2) fails, which is an invariant violation
    assert "|B_k|^2 < p/(4p+2): False" in out
    assert code == 2


def test_height_h1_json(capsys, example_file):
    code, out, _ = run(capsys, "height", "--p", "5", "--cf", example_file, "--check", "h1", "--json")
    data = json.loads(out)
    assert code == 0 and data["naive_h"] == "9713125" and data["bound_holds"]
    assert data["B_k_p"] == "3125"


def test_height_wrong_prime(capsys, example_file):
    code, _, err = run(capsys, "height", "--p", "7", "--cf", example_file)
    assert code == 1 and "E_USAGE" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "height", "--p", "5", "--cf", "/nonexistent.json")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "expand", "--value", "1/3")[0] == 1
    assert run(capsys, "expand", "--p", "4", "--value", "1/3")[0] == 1
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "expand", "--p", "5", "--value", "1/0")[0] == 1


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--p", "7", "--value", "(0 + 1*sqrt(2))/1")
    assert code == 0 and "valuation laws: PASS" in out


def test_family_qper_certificate(capsys, tmp_path):
    spec = tmp_path / "q.json"
    spec.write_text(json.dumps({"C": "4", "D_cap": 25, "filler_pool": ["1/5", "2/25", "-2/25"]}))
    code, out, _ = run(capsys, "family", "qper", "--p", "5", "--length", "60", "--spec", str(spec),
                       "--emit-certificate", "--json")
    data = json.loads(out)
    assert code == 0 and data["certificate"]["all_pass"]
    spec.write_text(json.dumps({"C": "2", "D_cap": 25, "filler_pool": ["1/5"]}))
    code, out, _ = run(capsys, "family", "qper", "--p", "5", "--length", "60", "--spec", str(spec),
                       "--emit-certificate")
    assert code == 2 and "FAIL  C_threshold" in out


def test_family_words(capsys):
    code, out, _ = run(capsys, "family", "thue-morse", "--p", "5", "--length", "4")
    assert out.split() == ["1/5", "-1/5", "-1/5", "1/5"]
    code, out, _ = run(capsys, "family", "sturmian", "--p", "5", "--length", "8", "--json")
    assert json.loads(out)["sequence"] == ["1/5", "-1/5", "1/5", "1/5", "-1/5", "1/5", "-1/5", "1/5"]


def test_sweep_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--primes", "3,5", "--samples", "15")
    assert code == 0
    code, out, _ = run(capsys, "sweep", "--primes", "3,5,7", "--samples", "15", "--kind", "counterexample",
                       "--suites", "floor")
    assert code == 2 and "counterexample:" in out
    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    assert run(capsys, "sweep", "--spec", str(empty))[0] == 1


def test_sweep_is_deterministic(capsys):
    a = run(capsys, "sweep", "--primes", "3,7", "--samples", "10", "--seed", "42", "--json")[1]
    b = run(capsys, "sweep", "--primes", "3,7", "--samples", "10", "--seed", "42", "--json")[1]
    assert a == b
    assert run_sweep([5], 5, ["termination"], seed=1) == run_sweep([5], 5, ["termination"], seed=1)
