import io
import json
import subprocess
import sys

import pytest

from sbim_specialise.cli import main
from sbim_specialise.config import parse_config
from sbim_specialise.errors import ConfigError


def run_cli(tmp_path, text, *args, name="job.yaml"):
    path = tmp_path / name
    path.write_text(text)
    out = io.StringIO()
    status = main([str(path), *args], out=out)
    return status, out.getvalue()


WORKED = """\
coxeter: A2
point:
  pairings: [0, 1]
word: [2, 1]
verify: true
"""


def test_worked_example(tmp_path):
    status, text = run_cli(tmp_path, WORKED)
    assert status == 0
    assert "Decomposition (2 summands, total dim 4)" in text
    assert "s2s1s2" in text
    assert "Oracle report" in text


def test_zero_point(tmp_path):
    status, text = run_cli(tmp_path, "coxeter: A2\npoint: {pairings: [0, 0]}\nword: [1, 2, 1]\n",
                           "--json", str(tmp_path / "r.json"))
    assert status == 0
    report = json.loads((tmp_path / "r.json").read_text())
    (summand,) = report["decomposition"]["summands"]
    assert summand["dim"] == 8 and summand["point"] == ["0", "0"]


def test_out_of_range_generator(tmp_path):
    status, text = run_cli(tmp_path, "coxeter: A2\npoint: {pairings: [0, 1]}\nword: [9]\n")
    assert status == 2
    assert "generator index out of range" in text


def test_errors_are_aggregated(tmp_path):
    status, text = run_cli(tmp_path, "coxeter: Z9\nfield_d: x\nword: [1, 0.5]\nverify: maybe\nextra: 1\n")
    assert status == 2
    problems = [line for line in text.splitlines() if line.startswith("  ")]
    assert len(problems) == 6


def test_non_tits_point(tmp_path):
    status, text = run_cli(
        tmp_path, "coxeter: [[1, inf], [inf, 1]]\npoint: {coords: [1, 0]}\nword: [1]\ncaps: {descent: 100}\n")
    assert status == 3
    assert "undetermined" in text


def test_caps_flag(tmp_path):
    status, _ = run_cli(tmp_path, "coxeter: B3\npoint: {pairings: [1, 1, 1]}\nword: [1]\n",
                        "--caps", "orbit=10")
    assert status == 3
    status, _ = run_cli(tmp_path, WORKED, "--caps", "orbit=ten")
    assert status == 2


def test_unsupported_field_is_a_config_error(tmp_path):
    status, text = run_cli(tmp_path, "coxeter: [[1, 7], [7, 1]]\npoint: {coords: [0, 0]}\n")
    assert status == 2 and "unsupported field" in text


def test_verification_mismatch_exit_code(tmp_path, monkeypatch):
    from sbim_specialise import cli, oracle

    original = oracle.verify_decomposition

    def broken(real, w, a, table=None, **kw):
        return original(real, w, a, table, actual={a: (99, [99, 0])}, dec=kw.get("dec"))

    monkeypatch.setattr(cli, "verify_decomposition", broken)
    status, text = run_cli(tmp_path, WORKED)
    assert status == 1 and "FAIL" in text


def test_json_round_trip(tmp_path):
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    status1, text1 = run_cli(tmp_path, WORKED, "--json", str(first))
    out = io.StringIO()
    status2 = main([str(first), "--json", str(second)], out=out)
    assert status1 == status2 == 0
    assert first.read_text() == second.read_text()
    assert text1 == out.getvalue()
    report = json.loads(first.read_text())
    assert report["point"] == {"coords": ["1/3", "2/3"], "pairings": ["0", "1"]}


def test_round_trip_over_root5(tmp_path):
    job = 'coxeter: H3\npoint: {pairings: [0, "1/2+1/2*sqrt(5)", 1]}\nword: [3, 2]\n'
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run_cli(tmp_path, job, "--json", str(first))
    main([str(first), "--json", str(second)], out=io.StringIO())
    assert first.read_text() == second.read_text()


def test_sweep_a2(tmp_path):
    status, text = run_cli(tmp_path, "coxeter: A2\n", "--sweep", "--max-word-len", "4", "--verify",
                           "--json", str(tmp_path / "s.json"))
    assert status == 0
    summary = json.loads((tmp_path / "s.json").read_text())["sweep"]["summary"]
    assert summary["failed"] == 0 and summary["verified_pass"] == summary["jobs"] > 0


def test_sweep_b2(tmp_path):
    status, _ = run_cli(tmp_path, "coxeter: B2\nverify: true\nsweep: {max_word_len: 4}\n", "--sweep")
    assert status == 0


def test_sweep_without_verify(tmp_path):
    status, text = run_cli(tmp_path, "coxeter: G2\nsweep: {max_word_len: 3, walls: [[1]]}\n", "--sweep",
                           "--json", str(tmp_path / "s.json"))
    assert status == 0 and "dimension/flag checks only" in text
    jobs = json.loads((tmp_path / "s.json").read_text())["sweep"]["jobs"]
    assert jobs and all(j["verified"] is None and j["twist_ok"] is None for j in jobs)


def test_sweep_of_infinite_group(tmp_path):
    status, _ = run_cli(tmp_path, "coxeter: [[1, inf], [inf, 1]]\n", "--sweep")
    assert status == 3


def test_module_entry_point(tmp_path):
    path = tmp_path / "job.yaml"
    path.write_text(WORKED)
    proc = subprocess.run([sys.executable, "-m", "sbim_specialise", str(path)], capture_output=True, text=True)
    assert proc.returncode == 0 and "Flag cross-check" in proc.stdout


class TestConfig:
    def test_pairings_and_coords(self):
        job = parse_config({"coxeter": "B2", "point": {"coords": ["1/2", 1]}, "word": [1, 2]})
        assert job.point == {"coords": ["1/2", "1"]}
        assert job.word0() == (0, 1)

    def test_h3_defaults_to_root5(self):
        job = parse_config({"coxeter": "H3", "point": {"pairings": [0, 0, "sqrt(5)"]}})
        assert job.field_d == 5

    def test_rejects_inexact_floats(self):
        with pytest.raises(ConfigError, match="exact fraction"):
            parse_config({"coxeter": "A2", "point": {"coords": [0.1, 0]}})

    def test_both_point_forms(self):
        with pytest.raises(ConfigError):
            parse_config({"coxeter": "A2", "point": {"coords": [0, 0], "pairings": [0, 0]}})

    def test_user_realisation(self):
        job = parse_config({"coxeter": [[1, 3], [3, 1]],
                            "realisation": {"roots": [[1, -1, 0], [0, 1, -1]],
                                            "coroots": [[1, -1, 0], [0, 1, -1]]},
                            "point": {"coords": [1, 0, -1]}, "word": [1]})
        assert job.build_realisation().dim == 3
        assert parse_config(job.to_json()).to_json() == job.to_json()
