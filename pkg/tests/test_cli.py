import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qentangle.cli import fmt, main

SMALL = ["--runs", "6", "--restarts", "3", "--seed", "5"]


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_fmt():
    assert fmt(math.inf) == "inf"
    assert fmt(math.nan) == "nan"
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(3) == "3"
    assert fmt(True) == "1"


def test_trajectory_csv(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["trajectory", "--n", "3", "--geometry", "local", "--steps", "12", *SMALL, "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["t", "mean_K", "sem_K", "k_excluded", "mean_Q", "sem_Q", "mean_G", "sem_G"]
    assert len(rows) == 14 and all(len(r) == 8 for r in rows)
    assert abs(float(rows[1][4])) < 1e-9
    raw = out.read_bytes()
    assert b"\r\n" not in raw
    manifest = json.loads((tmp_path / "traj.csv.manifest.json").read_text())
    assert manifest["command"] == "trajectory" and manifest["config"]["n"] == 3
    assert "wall_clock_seconds" not in manifest


def test_trajectory_skip_groverian_and_record_every(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["trajectory", "--n", "4", "--steps", "10", "--record-every", "4", "--no-groverian", *SMALL,
                 "--out", str(out)]) == 0
    rows = read_csv(out)[1:]
    assert [r[0] for r in rows] == ["0", "4", "8", "10"]
    assert all(r[6] == "nan" for r in rows)


def test_threads_do_not_change_output(tmp_path):
    files = []
    for threads in ("1", "3"):
        out = tmp_path / f"t{threads}.csv"
        assert main(["trajectory", "--n", "4", "--steps", "15", *SMALL, "--threads", threads, "--out", str(out)]) == 0
        files.append(out)
    assert files[0].read_bytes() == files[1].read_bytes()
    m0 = (tmp_path / "t1.csv.manifest.json").read_text().replace("t1.csv", "")
    m1 = (tmp_path / "t3.csv.manifest.json").read_text().replace("t3.csv", "")
    assert m0 == m1


def test_manifest_round_trip(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["trajectory", "--n", "3", "--steps", "8", *SMALL, "--out", str(out)]) == 0
    again = tmp_path / "b.csv"
    assert main(["trajectory", "--manifest", str(tmp_path / "a.csv.manifest.json"), "--out", str(again)]) == 0
    assert out.read_bytes() == again.read_bytes()


def test_record_timing_flag(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["baseline", "--n", "2", "--runs", "3", "--seed", "1", "--record-timing", "--out", str(out)]) == 0
    assert "wall_clock_seconds" in json.loads((tmp_path / "a.csv.manifest.json").read_text())


@pytest.mark.parametrize("argv", [
    ["trajectory", "--n", "1", "--seed", "1", "--out", "x.csv"],
    ["trajectory", "--n", "3", "--out", "x.csv"],
    ["trajectory", "--n", "3", "--seed", "1"],
    ["trajectory", "--n", "3", "--seed", "-4", "--out", "x.csv"],
    ["trajectory", "--n", "3", "--seed", "1", "--geometry", "ring", "--out", "x.csv"],
    ["trajectory", "--n", "3", "--seed", "1", "--runs", "1", "--out", "x.csv"],
    ["distribution", "--n", "3", "--seed", "1", "--t", "5,2", "--out", "x.csv"],
    ["saturation", "--n-range", "1-3", "--seed", "1", "--out", "x.csv"],
    ["bogus"],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_unwritable_output(tmp_path):
    out = tmp_path / "missing" / "x.csv"
    assert main(["baseline", "--n", "2", "--runs", "2", "--seed", "1", "--out", str(out)]) == 1


def test_distribution_series(tmp_path):
    out = tmp_path / "fg.csv"
    assert main(["distribution", "--n", "3", "--t", "0,5,20", "--baseline", "--bins", "8", *SMALL,
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["series_label", "bin_left", "bin_right", "density"]
    by_label = {}
    for label, a, b, d in rows[1:]:
        by_label.setdefault(label, []).append((float(a), float(b), float(d)))
    assert list(by_label) == ["t=0", "t=5", "t=20", "baseline"]
    for bins in by_label.values():
        assert abs(sum((b - a) * d for a, b, d in bins) - 1) < 1e-9
    # every t=0 sample is a product state: all mass in the bin holding G = 0
    t0 = by_label["t=0"]
    assert t0[0][0] <= 0 < t0[0][1] + 1e-12
    assert abs((t0[0][1] - t0[0][0]) * t0[0][2] - 1) < 1e-9


def test_distribution_point_mass_only(tmp_path):
    out = tmp_path / "fg.csv"
    assert main(["distribution", "--n", "3", "--t", "0", *SMALL, "--out", str(out)]) == 0
    rows = read_csv(out)[1:]
    assert len(rows) == 1 and rows[0][0] == "t=0"
    a, b, d = map(float, rows[0][1:])
    assert a <= 0 <= b and (b - a) * d == pytest.approx(1)


def test_saturation_outputs(tmp_path):
    out = tmp_path / "sat.csv"
    assert main(["saturation", "--n-range", "3-5", "--steps-per-qubit", "20", "--batches", "3", *SMALL,
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["n", "geometry", "measure", "saturation_value", "t_star", "undetected", "t_star_sem"]
    assert len(rows) == 1 + 3 * 2 * 3
    fits = json.loads((tmp_path / "sat.csv.fits.json").read_text())
    assert set(fits) == {f"{g}/{m}" for g in ("local", "nonlocal") for m in "KQG"}


def test_baseline_csv(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["baseline", "--n", "3", "--runs", "5", "--restarts", "3", "--seed", "2", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["sample", "Q", "G"] and len(rows) == 6
    q = np.array([float(r[1]) for r in rows[1:]])
    assert np.all((q >= 0) & (q <= 1))


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "qentangle", "trajectory", "--n", "1", "--seed", "1",
                          "--out", str(tmp_path / "x.csv")], capture_output=True, text=True)
    assert res.returncode == 2
    assert "n" in res.stderr
