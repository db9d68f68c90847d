import random
import subprocess
import sys

import pytest

from conftest import SAMPLE4_TEXT
from ttp_approx.cli import main
from ttp_approx.generators import random_euclidean, unit_metric
from ttp_approx.instance import render_instance


@pytest.fixture
def n30(tmp_path):
    path = tmp_path / "n30.txt"
    path.write_text(render_instance(random_euclidean(30, random.Random(0))))
    return path


@pytest.fixture
def sample4_file(tmp_path):
    path = tmp_path / "n4.txt"
    path.write_text(SAMPLE4_TEXT)
    return path


def test_solve_n30(n30, tmp_path, capsys):
    out = tmp_path / "sched.txt"
    assert main(["solve", str(n30), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "n: 30" in text and "ratio:" in text and "FAIL" not in text
    assert len(out.read_text().splitlines()) == 30
    assert main(["validate", str(out), str(n30)]) == 0
    report = capsys.readouterr().out
    assert "total:" in report


def test_solve_unsupported(tmp_path, capsys):
    path = tmp_path / "n32.txt"
    path.write_text(render_instance(unit_metric(32)))
    assert main(["solve", str(path)]) == 2
    assert "unsupported size" in capsys.readouterr().err


def test_solve_missing_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.txt")]) == 1
    assert "error" in capsys.readouterr().err


def test_validate_broken(sample4_file, tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    # team 1 hosts team 2 twice in a row, everything else consistent for 2 slots
    bad.write_text("2H,2H\n1A,1A\n4H,4A\n3A,3H\n")
    assert main(["validate", str(bad), str(sample4_file)]) == 1
    out = capsys.readouterr().out
    assert "team 1 meets team 2 in slots 1 and 2" in out


def test_bounds_sample4(sample4_file, capsys):
    assert main(["bounds", str(sample4_file)]) == 0
    out = capsys.readouterr().out
    assert "lb1: 44" in out and "lb2: 40" in out


def test_oracle_sample4(sample4_file, capsys):
    assert main(["oracle", str(sample4_file)]) == 0
    assert "optimum: 45" in capsys.readouterr().out


def test_oracle_too_large(n30, capsys):
    assert main(["oracle", str(n30)]) == 2


def test_solve_n4_routes_to_oracle(sample4_file, capsys):
    assert main(["solve", str(sample4_file)]) == 0
    out = capsys.readouterr().out
    assert "method: exhaustive" in out and "total: 45" in out


def test_bench(capsys):
    assert main(["bench", "--n", "30", "--count", "2", "--seed", "1"]) == 0
    assert "failures: 0" in capsys.readouterr().out


def test_deterministic_bytes(n30):
    cmd = [sys.executable, "-m", "ttp_approx", "solve", str(n30)]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd + ["--jobs", "2"], capture_output=True, check=True).stdout
    assert first == second and first
