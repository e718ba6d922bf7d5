import json
import math

import pytest

from stratres.cli import main

CONSTANT_PROFILE = """
[left]
c = 1.0
m = 1.4142135623730951

[layer]
kind = constant
h = 1.0
c = 1.0
m = 1.0

[right]
c = 1.0
m = 1.4142135623730951
"""

STACK_PROFILE = """
[left]
c = 1.0
m = 1.4142135623730951

[layer]
kind = stack
sublayers = 0.3 1.0 1.0
    0.4 2.0 1.5
    0.3 1.5 0.8

[right]
c = 1.2
m = 0.9
"""


@pytest.fixture
def profile_file(tmp_path):
    path = tmp_path / "constant.ini"
    path.write_text(CONSTANT_PROFILE)
    return path


def test_missing_profile_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc_info:
        main(["validate", "--profile", str(tmp_path / "nope.ini")])
    assert exc_info.value.code == 2


def test_bad_usage_exits_2(profile_file):
    with pytest.raises(SystemExit) as exc_info:
        main(["resonances", "--profile", str(profile_file)])  # missing range
    assert exc_info.value.code == 2


def test_validate_ok(profile_file, capsys):
    assert main(["validate", "--profile", str(profile_file)]) == 0
    out = capsys.readouterr().out
    assert "tau = 1" in out and "case i" in out


def test_validate_stack_oracle(tmp_path, capsys):
    path = tmp_path / "stack.ini"
    path.write_text(STACK_PROFILE)
    assert main(["validate", "--profile", str(path)]) == 0
    assert "oracle agreement" in capsys.readouterr().out


def test_resonances_csv(profile_file, tmp_path):
    out = tmp_path / "out"
    code = main(["resonances", "--profile", str(profile_file),
                 "--n-lo", "1", "--n-hi", "3", "--out", str(out)])
    assert code == 0
    lines = (out / "resonances.csv").read_text().strip().splitlines()
    assert lines[0].startswith("n,re_omega,im_omega")
    assert len(lines) == 4
    gamma = 0.5 * math.log(9.0)
    row = lines[1].split(",")
    assert float(row[1]) == pytest.approx(math.pi, abs=1e-8)
    assert float(row[2]) == pytest.approx(-gamma, abs=1e-8)


def test_resonances_json_header(profile_file, tmp_path):
    out = tmp_path / "out"
    code = main(["resonances", "--profile", str(profile_file),
                 "--n-lo", "1", "--n-hi", "2", "--out", str(out),
                 "--format", "json"])
    assert code == 0
    payload = json.loads((out / "resonances.json").read_text())
    assert payload["tool"] == "stratres"
    assert payload["rtol"] == 1e-10
    assert len(payload["config_hash"]) == 16
    assert payload["completeness_ok"] is True
    assert len(payload["resonances"]) == 2


def test_resonances_deterministic_across_jobs(profile_file, tmp_path):
    outs = []
    for jobs in ("1", "4"):
        out = tmp_path / f"out{jobs}"
        main(["resonances", "--profile", str(profile_file),
              "--n-lo", "1", "--n-hi", "2", "--out", str(out),
              "--jobs", jobs])
        outs.append((out / "resonances.csv").read_bytes())
    assert outs[0] == outs[1]


def test_scatter(profile_file, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["scatter", "--profile", str(profile_file),
                 "--omega-min", "0.5", "--omega-max", "16.0",
                 "--omega-steps", "800", "--out", str(out)])
    assert code == 0
    assert (out / "spectrum.csv").exists()
    payload = json.loads((out / "peaks.json").read_text())
    assert payload["tau_hat"] == pytest.approx(1.0, rel=0.01)


def test_scatter_rejects_bad_range(profile_file):
    code = main(["scatter", "--profile", str(profile_file),
                 "--omega-min", "5.0", "--omega-max", "1.0"])
    assert code == 2


def test_compare_json(profile_file, tmp_path):
    out = tmp_path / "out"
    code = main(["compare", "--profile", str(profile_file),
                 "--n-lo", "1", "--n-hi", "12", "--n-fit-min", "1",
                 "--out", str(out), "--format", "json"])
    assert code == 0
    payload = json.loads((out / "compare.json").read_text())
    # constant layer: no drift at all
    assert payload["slope"] == pytest.approx(0.0, abs=1e-6)
    assert payload["expected_slope"] == 0.0
