import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from hilbertring import cli
from hilbertring.borcherds import UnresolvableLeadingExponent
from hilbertring.qseries import FracQSeries


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def expansion_of(out):
    return FracQSeries.from_text(out.strip().splitlines()[-1])


def test_restrict_prints_provenance_and_series(capsys):
    code, out, _ = run(capsys, "restrict", "--field", "37", "--gen", "psi1", "--lambda", "lambda21", "--prec", "4")
    assert code == 0
    assert "# leading exponent: 5/3 (weyl-interpolation)" in out
    assert "# input: sha256:" in out
    f = expansion_of(out)
    assert f == FracQSeries({Fraction(5, 3): 1, Fraction(8, 3): -2}, prec=4)


def test_restrict_on_a_wall_is_zero(capsys):
    code, out, _ = run(capsys, "restrict", "--field", "29", "--gen", "phi4", "--lambda", "lambda5", "--prec", "6")
    assert code == 0
    assert "curve lies in the divisor" in out
    assert expansion_of(out).is_zero()


def test_divisor_json(capsys):
    code, out, _ = run(capsys, "divisor", "--field", "29", "--gen", "phi4", "--json")
    assert code == 0
    assert json.loads(out)["divisors"]["phi4"] == {"1": "1", "4": "1", "5": "1", "6": "1"}


def test_obstructed_exit_code(capsys):
    code, _, err = run(capsys, "realize", "--field", "29", "--poles", "1:1")
    assert code == 4
    assert json.loads(err)["error"] == "Obstructed"


def test_verification_failure_exit_code(capsys):
    code, out, err = run(capsys, "verify", "--field", "37", "--relations", "printed", "--fast")
    assert code == 2
    assert "R_9_chi (weight 9): FAILED" in out
    assert json.loads(err)["exit"] == 2


def test_leading_exponent_exit_code(capsys, monkeypatch):
    def refuse(*args, **kwargs):
        raise UnresolvableLeadingExponent("no prime-norm points")

    monkeypatch.setattr(cli, "resolve_leading", refuse)
    code, _, err = run(capsys, "restrict", "--field", "29", "--gen", "phi2", "--lambda", "lambda23", "--prec", "4")
    assert code == 3
    assert json.loads(err)["message"] == "no prime-norm points"


def test_bad_input_exit_code(capsys):
    code, _, err = run(capsys, "restrict", "--field", "29", "--gen", "phi2", "--lambda", "3,1")
    assert code == 1
    assert "not totally positive" in json.loads(err)["message"]


def test_contract_at_the_field_prime(capsys):
    code, out, _ = run(capsys, "contract", "--field", "5", "--gen", "s5", "--ell", "5", "--prec", "8")
    assert code == 0
    assert "# valence leading exponent: 2" in out
    assert expansion_of(out) == FracQSeries({-4: 2, 0: 10, 1: 4, 4: 22, 5: 20}, prec=8)


def test_hilbert_series_and_generators(capsys):
    code, out, _ = run(capsys, "hilbert-series", "--field", "37", "--sector", "trivial", "--json")
    assert code == 0
    assert json.loads(out)["hilbert_series"]["denominator"] == [[1, 0], [2, 0], [3, 0]]
    code, out, _ = run(capsys, "generators", "--field", "37", "--trivial-char", "--json")
    assert code == 0
    assert len(json.loads(out)["trivial_character_generators"]) == 15


def test_console_script_selftest():
    proc = subprocess.run(
        [sys.executable, "-m", "hilbertring.cli", "selftest", "--field", "5", "--json"],
        capture_output=True, text=True, timeout=600,
    )
    assert proc.returncode == 0, proc.stderr
    checks = json.loads(proc.stdout)["results"]
    assert checks and all(c["passed"] for c in checks)


def test_warm_cache_is_bit_identical(tmp_path):
    argv = [sys.executable, "-m", "hilbertring.cli", "restrict", "--field", "29", "--gen", "phi3", "--lambda", "lambda5", "--prec", "12"]
    outputs = []
    for cache in ("", str(tmp_path), str(tmp_path)):
        env = {**os.environ, "HILBERTRING_CACHE": cache}
        proc = subprocess.run(argv, capture_output=True, text=True, env=env, timeout=600)
        assert proc.returncode == 0, proc.stderr
        outputs.append(proc.stdout)
    assert any(tmp_path.iterdir())
    assert outputs[0] == outputs[1] == outputs[2]
