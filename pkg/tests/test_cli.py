import json
import math
import os
import shutil
import subprocess
import sys

import pytest

from heunkummer.cli import format_complex, main, parse_complex

CHE_EXAMPLE = ["che-series", "--family", "a2", "--gamma", "1", "--delta", "0",
               "--eps", "1", "--alpha", "1", "--q", "1", "--z", "0.3"]
SPECTRUM_EXAMPLE = ["q-spectrum", "--family", "a2", "--gamma", "2.3",
                    "--delta=-2", "--eps", "1.1", "--alpha", "0.7"]


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


def run_json(capsys, argv):
    code, out = run(capsys, argv)
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# literal parsing and formatting

def test_parse_complex_literals():
    assert parse_complex("2") == 2.0
    assert parse_complex("-0.5i") == -0.5j
    assert parse_complex("1+0.4i") == 1 + 0.4j
    assert parse_complex(" 2.5 - 1i ") == 2.5 - 1j


def test_format_complex_round_trips():
    for z in (2.0 + 0j, -0.5j, 1 + 0.4j, 2.5 - 1j, 0j):
        assert parse_complex(format_complex(z)) == z
    # the real part keeps its own sign bit, so a bare imaginary literal
    # echoes with an explicit zero real part
    assert format_complex(complex(0.0, -0.5)) == "0.0-0.5i"
    assert format_complex(1.5 + 0j) == "1.5"


# ---------------------------------------------------------------------------
# records

def test_che_series_example_record(capsys):
    code, record = run_json(capsys, CHE_EXAMPLE)
    assert code == 0
    assert record["command"] == "che-series"
    assert record["inputs"]["z"] == "0.3"
    res = record["results"]
    assert res["terminated"] is True
    assert res["terminal_index"] == 0
    assert res["value"]["re"] == pytest.approx(math.exp(-0.3), rel=1e-14)
    assert res["value"]["im"] == 0
    assert record["diagnostics"]["ode_residual"] <= 1e-12
    assert record["diagnostics"]["tail_estimate"] == 0


def test_eval_1f1_record(capsys):
    code, record = run_json(capsys, ["eval-1f1", "--a", "1", "--c", "1",
                                     "--x", "1"])
    assert code == 0
    assert record["results"]["value"]["re"] == pytest.approx(math.e, rel=1e-14)
    assert record["diagnostics"]["recheck_delta"] <= 1e-13


def test_q_spectrum_example_record(capsys):
    code, record = run_json(capsys, SPECTRUM_EXAMPLE)
    assert code == 0
    res = record["results"]
    assert res["kind"] == "DeltaInt" and res["N"] == 2
    assert len(res["roots"]) == 3
    assert res["verified"] == [True, True, True]
    assert record["diagnostics"]["all_verified"] is True
    assert res["table"]["columns"] == ["root_re", "root_im", "verified",
                                       "rebuild_residual"]


def test_detect_termination_record(capsys):
    base = ["detect-termination", "--family", "a2", "--gamma", "2.3",
            "--delta=-1", "--eps", "1.1", "--alpha=-2.2"]
    code, record = run_json(capsys, base)
    assert code == 0
    assert record["results"]["found"] is True
    assert record["results"]["conditions"] == [{"kind": "DeltaInt", "N": 1}]
    code, record = run_json(capsys, base + ["--all"])
    assert record["inputs"]["all"] is True
    assert record["results"]["conditions"] == [{"kind": "DeltaInt", "N": 1},
                                               {"kind": "AlphaOverEps", "N": 2}]


def test_transform_record(capsys):
    code, record = run_json(capsys, ["transform", "--gamma", "1", "--delta",
                                     "2", "--eps", "3", "--alpha", "0",
                                     "--q", "5"])
    assert code == 0
    res = record["results"]
    assert (res["gamma"]["re"], res["delta"]["re"]) == (2, 1)
    assert res["eps"]["re"] == -3
    assert record["diagnostics"]["involution_exact"] is True


def test_frobenius_record(capsys):
    code, record = run_json(capsys, ["frobenius", "--gamma", "1", "--delta",
                                     "1", "--eps", "1", "--alpha", "1",
                                     "--q", "0.5", "--z", "0.3",
                                     "--k-terms", "60"])
    assert code == 0
    assert record["diagnostics"]["ode_residual"] <= 1e-10


def test_two_state_record(capsys):
    u0 = repr(math.sqrt(3.0))
    code, record = run_json(capsys, ["two-state", "--u0", u0, "--delta0", "2",
                                     "--delta1=-2", "--t-start=-3",
                                     "--t-end", "3", "--steps", "2000",
                                     "--samples", "7"])
    assert code == 0
    res = record["results"]
    assert res["terminated"] is True
    assert res["R"] == pytest.approx(2.0)
    assert res["max_deviation"] <= 1e-9
    assert len(res["table"]["rows"]) == 7
    assert record["diagnostics"]["norm_drift"] <= 1e-10


def test_two_state_off_manifold_reports_trajectory_only(capsys):
    code, record = run_json(capsys, ["two-state", "--u0", "2", "--delta0",
                                     "0.5", "--delta1", "1", "--t-start=-2",
                                     "--t-end", "2", "--steps", "2000",
                                     "--samples", "5"])
    assert code == 0
    assert record["results"]["terminated"] is False
    assert record["results"]["max_deviation"] is None
    assert "closed_form" in record["diagnostics"]
    # populations still come out of the integrator
    assert record["results"]["table"]["rows"][0][1] == pytest.approx(1.0, abs=1e-9)


def test_return_spectrum_scan_record(capsys):
    code, record = run_json(capsys, ["return-spectrum-scan", "--u0",
                                     repr(math.sqrt(0.75)), "--delta1=-1",
                                     "--n", "0", "--delta0-min=-0.3",
                                     "--delta0-max", "0.7", "--points", "11"])
    assert code == 0
    located = record["results"]["located"]
    assert abs(located["delta0"]) <= 1e-3
    assert located["residual"] <= 1e-8
    assert len(record["results"]["table"]["rows"]) == 11


# ---------------------------------------------------------------------------
# determinism and replay

def test_repeated_runs_are_byte_identical(capsys):
    _, first = run(capsys, CHE_EXAMPLE)
    _, second = run(capsys, CHE_EXAMPLE)
    assert first == second


def test_sweep_is_byte_identical_across_jobs(capsys):
    base = ["verify-identities", "--draws", "20", "--seed", "3"]
    _, serial = run_json(capsys, base + ["--jobs", "1"])
    _, pooled = run_json(capsys, base + ["--jobs", "3"])
    assert serial["results"] == pooled["results"]
    assert serial["results"]["max_residual"] <= 1e-10


def test_replay_reproduces_the_record(capsys, tmp_path):
    _, original = run(capsys, CHE_EXAMPLE)
    path = tmp_path / "record.json"
    path.write_text(original, encoding="utf-8")
    _, replayed = run(capsys, ["--replay", str(path)])
    assert replayed == original


def test_replay_accepts_overrides(capsys, tmp_path):
    _, original = run(capsys, CHE_EXAMPLE)
    path = tmp_path / "record.json"
    path.write_text(original, encoding="utf-8")
    code, record = run_json(capsys, ["--replay", str(path), "--z", "0.4"])
    assert code == 0
    assert record["inputs"]["z"] == "0.4"
    assert record["results"]["value"]["re"] == pytest.approx(math.exp(-0.4),
                                                             rel=1e-14)


# ---------------------------------------------------------------------------
# option plumbing

def test_point_mode_identity_check(capsys):
    code, record = run_json(capsys, ["verify-identities", "--identity", "D6",
                                     "--a", "1.3", "--c", "0.7", "--x", "0.4"])
    assert code == 0
    assert record["diagnostics"]["mode"] == "point"
    assert record["results"]["residuals"]["D6"] <= 1e-12


def test_negative_complex_literals_use_the_equals_form(capsys):
    code, record = run_json(capsys, ["eval-1f1", "--a=-1", "--c", "2",
                                     "--x=-0.5i"])
    assert code == 0
    assert record["inputs"]["a"] == "-1.0"
    assert record["inputs"]["x"] == "0.0-0.5i"
    assert parse_complex(record["inputs"]["x"]) == -0.5j


def test_config_file_supplies_defaults(capsys, tmp_path):
    cfg = tmp_path / "che.cfg"
    cfg.write_text("gamma = 1\ndelta = 0\neps = 1\nalpha = 1\nq = 1\n",
                   encoding="utf-8")
    code, record = run_json(capsys, ["che-series", "--family", "a2",
                                     "--config", str(cfg), "--z", "0.3"])
    assert code == 0
    assert record["results"]["value"]["re"] == pytest.approx(math.exp(-0.3),
                                                             rel=1e-14)
    # explicit flags beat the file
    code, record = run_json(capsys, ["che-series", "--family", "a2",
                                     "--config", str(cfg), "--z", "0.4"])
    assert record["inputs"]["z"] == "0.4"


def test_csv_table_output(capsys):
    code, out = run(capsys, SPECTRUM_EXAMPLE + ["--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "root_re,root_im,verified,rebuild_residual"
    assert len(lines) == 4


def test_csv_flatten_output(capsys):
    code, out = run(capsys, ["eval-1f1", "--a", "1", "--c", "1", "--x", "1",
                             "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key,value"
    # complex scalars flatten to one cell in the RE+IMi notation
    assert any(line.startswith("results.value,") for line in lines)


# ---------------------------------------------------------------------------
# exit codes

def test_domain_error_yields_structured_record(capsys):
    code, record = run_json(capsys, ["che-series", "--family", "a2",
                                     "--gamma", "1", "--delta=-2", "--eps",
                                     "1", "--alpha", "1", "--z", "0.3"])
    assert code == 1
    assert record["error"]["type"] == "ApplicabilityError"
    assert "results" not in record


def test_missing_required_option_is_a_usage_error(capsys):
    code = main(["che-series", "--family", "a2", "--z", "0.3"])
    capsys.readouterr()
    assert code == 2


def test_unknown_command_is_a_usage_error(capsys):
    code = main(["no-such-command"])
    capsys.readouterr()
    assert code == 2


def test_no_command_prints_usage(capsys):
    code = main([])
    captured = capsys.readouterr()
    assert code == 2
    assert "usage" in captured.err.lower()


# ---------------------------------------------------------------------------
# installed entry point

def test_console_script_runs():
    exe = shutil.which("heunkummer")
    assert exe, "console script not on PATH; install with pip install -e ."
    env = dict(os.environ, HEUN_LOG_LEVEL="info")
    proc = subprocess.run([exe] + CHE_EXAMPLE, capture_output=True,
                          text=True, env=env, timeout=120)
    assert proc.returncode == 0
    record = json.loads(proc.stdout)
    assert record["results"]["value"]["re"] == pytest.approx(math.exp(-0.3),
                                                             rel=1e-14)
    # logging goes to stderr, never into the record stream
    assert "INFO" in proc.stderr


def test_module_invocation_matches_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heunkummer.cli"]
                          + CHE_EXAMPLE, capture_output=True, text=True,
                          timeout=120)
    assert proc.returncode == 0
    json.loads(proc.stdout)
