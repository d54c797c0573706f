"""Command surface: exit codes, output determinism, file flows."""

import json
import re
import subprocess
import sys

import numpy as np
import pytest

from stockframe.cli import main
from stockframe.containers import (
    DOMAIN_FREQUENCY,
    DOMAIN_TIME,
    read_csv_signal,
    read_sfr1,
    read_sfr1_all,
    read_sfr2,
    write_sfr1,
    write_sfr2,
)
from stockframe.spectral import FrequencyGrid, TimeSamples

NUMBER = re.compile(r"(?<![\w.])-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?(?!\w)")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def json_scalars(obj, acc=None):
    """Every leaf value of a parsed JSON tree, rendered the way text mode does."""
    if acc is None:
        acc = set()
    if isinstance(obj, dict):
        for v in obj.values():
            json_scalars(v, acc)
    elif isinstance(obj, list):
        for v in obj:
            json_scalars(v, acc)
    elif isinstance(obj, bool):
        acc.add(str(obj))
    elif isinstance(obj, float):
        acc.add(repr(obj))
    else:
        acc.add(str(obj))
    return acc


# ---------------------------------------------------------------- partition


def test_partition_table(capsys):
    code, out, _ = run(capsys, "partition", "--alpha", "0.5", "--pmax", "7", "--csv")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert rows[0] == ["p", "start", "stop", "width"]
    starts = [int(r[1]) for r in rows[1:]]
    widths = [int(r[3]) for r in rows[1:]]
    assert starts == [0, 1, 2, 3, 4, 6, 8, 10]
    assert widths == [1, 1, 1, 1, 2, 2, 2, 3]


def test_partition_accepts_fraction_text(capsys):
    code_a, out_a, _ = run(capsys, "partition", "--alpha", "1/2", "--pmax", "5", "--json")
    code_b, out_b, _ = run(capsys, "partition", "--alpha", "0.5", "--pmax", "5", "--json")
    assert code_a == code_b == 0
    assert out_a == out_b


def test_partition_rejects_alpha_outside_range(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["partition", "--alpha", "1.5", "--pmax", "5"])
    assert exc.value.code == 2


# ---------------------------------------------------------------- determinism


@pytest.mark.parametrize(
    "argv",
    [
        ["partition", "--alpha", "0.3", "--pmax", "9", "--json"],
        ["frame-bounds", "--alpha", "1", "--mu", "0.5", "--q", "4",
         "--window", "gaussian", "--n", "128", "--json"],
        ["tile", "--d", "2", "--pmax", "3", "--json"],
        ["basis-check", "--alpha", "0.5", "--n", "64", "--json"],
    ],
)
def test_json_output_is_byte_identical_across_runs(capsys, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    json.loads(out1)  # parses


def test_text_numbers_all_appear_in_json(capsys):
    argv = ["frame-bounds", "--alpha", "1", "--mu", "0.5", "--q", "8",
            "--window", "gaussian", "--n", "256"]
    _, text, _ = run(capsys, *argv)
    _, blob, _ = run(capsys, *argv, "--json")
    scalars = json_scalars(json.loads(blob))
    # skip the first line, an echo of the flags already given
    for line in text.strip().splitlines()[1:]:
        for token in NUMBER.findall(line):
            assert token in scalars, f"{token!r} missing from JSON payload"


# ---------------------------------------------------------------- basis


def test_basis_exports_profiles(tmp_path, capsys):
    base = tmp_path / "el"
    code, out, _ = run(capsys, "basis", "--alpha", "0.5", "--p", "4", "--tau", "1",
                       "--n", "64", "--out", str(base))
    assert code == 0
    t_idx, t_vals = read_csv_signal(str(base) + ".time.csv")
    f_idx, f_vals = read_csv_signal(str(base) + ".freq.csv")
    assert t_idx.size == 64 and f_idx.size == 64
    # unit L2([0,1)) norm survives the export
    assert np.linalg.norm(t_vals) / 8.0 == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(f_vals) == pytest.approx(1.0, abs=1e-12)


def test_basis_check_reports_gram_and_concentration(capsys):
    code, out, _ = run(capsys, "basis-check", "--alpha", "0.5", "--n", "64", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["gram_deviation"] < 1e-10
    assert 0.85 <= rep["min_concentration"] <= 1.0


# ---------------------------------------------------------------- stack / bounds


def test_stack_dump_writes_every_band(tmp_path, capsys):
    dump = tmp_path / "bands.sfr1"
    code, out, _ = run(capsys, "stack", "--alpha", "1", "--mu", "0.5",
                       "--window", "gaussian", "--n", "64", "--dump", str(dump))
    assert code == 0
    records = read_sfr1_all(dump)
    assert len(records) == int(re.search(r"bands = (\d+)", out).group(1))
    assert all(rec.grid.size == 64 for rec in records)


def test_stack_exit_three_on_gapped_system(capsys):
    code, _, err = run(capsys, "stack", "--alpha", "1", "--mu", "8",
                       "--window", "tgauss:0.01", "--n", "64")
    assert code == 3


def test_frame_bounds_sandwich_in_json(capsys):
    code, out, _ = run(capsys, "frame-bounds", "--alpha", "1", "--mu", "0.5", "--q", "8",
                       "--window", "gaussian", "--n", "256", "--json")
    assert code == 0
    rep = json.loads(out)
    assert 0 < rep["walnut_lower"] <= rep["eigen_lower"] + 1e-9
    assert rep["eigen_upper"] <= rep["walnut_upper"] + 1e-9


def test_frame_bounds_skips_eigen_on_large_grids(capsys):
    code, out, _ = run(capsys, "frame-bounds", "--alpha", "1", "--mu", "0.5", "--q", "4",
                       "--window", "gaussian", "--n", "2048", "--json")
    assert code == 0
    rep = json.loads(out)
    assert "eigen_lower" not in rep
    assert rep["walnut_lower"] > 0


# ---------------------------------------------------------------- element


def test_element_export_round_trips(tmp_path, capsys):
    base = tmp_path / "fe"
    code, _, _ = run(capsys, "element", "--alpha", "1", "--mu", "0.5", "--q", "4",
                     "--window", "gaussian", "--n", "64", "--p", "3", "--k", "2",
                     "--out", str(base))
    assert code == 0
    f_idx, f_vals = read_csv_signal(str(base) + ".freq.csv")
    from stockframe.frame1d import frame_element, make_frame_spec
    from stockframe.window import gaussian_window
    spec = make_frame_spec(gaussian_window(), 0.5, 4, 1, 64)
    want = frame_element(spec, 3, 2).coeffs
    assert np.array_equal(f_vals, want)


def test_element_out_of_range_is_usage_error(capsys):
    code, _, err = run(capsys, "element", "--alpha", "1", "--mu", "0.5", "--q", "4",
                       "--window", "gaussian", "--n", "64", "--p", "99", "--k", "0",
                       "--out", "/tmp/unused")
    assert code == 2
    assert "error" in err


# ---------------------------------------------------------------- roundtrip


def make_input(tmp_path, n=128, seed=0):
    rng = np.random.default_rng(seed)
    grid = FrequencyGrid(n)
    x = TimeSamples(grid, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    path = tmp_path / "in.sfr1"
    write_sfr1(path, x)
    return path, x


def test_roundtrip_reconstructs_and_mirrors_domain(tmp_path, capsys):
    path, x = make_input(tmp_path)
    out = tmp_path / "rec.sfr1"
    code, text, _ = run(capsys, "roundtrip", "--alpha", "1", "--mu", "0.5", "--q", "8",
                        "--window", "gaussian", "--n", "128",
                        "--in", str(path), "--out", str(out))
    assert code == 0
    rec = read_sfr1(out)
    assert isinstance(rec, TimeSamples)  # input was time domain
    assert np.max(np.abs(rec.values - x.values)) < 1e-5


def test_roundtrip_tight_tolerance_fails_check(tmp_path, capsys):
    # q = 4 leaves a ~1e-11 aliasing residual, far above the requested tol
    path, _ = make_input(tmp_path)
    code, out, err = run(capsys, "roundtrip", "--alpha", "1", "--mu", "0.5", "--q", "4",
                         "--window", "gaussian", "--n", "128",
                         "--in", str(path), "--tol", "1e-15")
    assert code == 3
    assert "FAILED" in out + err


def test_roundtrip_grid_mismatch_is_usage_error(tmp_path, capsys):
    path, _ = make_input(tmp_path, n=64)
    code, _, _ = run(capsys, "roundtrip", "--alpha", "1", "--mu", "0.5", "--q", "8",
                     "--window", "gaussian", "--n", "128", "--in", str(path))
    assert code == 2


def test_roundtrip_missing_file_is_usage_error(capsys):
    code, _, _ = run(capsys, "roundtrip", "--alpha", "1", "--mu", "0.5", "--q", "8",
                     "--window", "gaussian", "--n", "128", "--in", "/nonexistent.sfr1")
    assert code == 2


# ---------------------------------------------------------------- tile / 2d


def test_tile_box_count(capsys):
    code, out, _ = run(capsys, "tile", "--d", "2", "--pmax", "3", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["boxes"] == 1 + 3 * 12
    assert len(rep["table"]) == rep["boxes"]


def test_roundtrip2d_frequency_field(tmp_path, capsys):
    rng = np.random.default_rng(5)
    field = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    path = tmp_path / "in.sfr2"
    write_sfr2(path, field, DOMAIN_FREQUENCY)
    out = tmp_path / "rec.sfr2"
    code, text, _ = run(capsys, "roundtrip2d", "--mu", "0.5", "--q", "4",
                        "--window", "tgauss:0.1", "--n", "16",
                        "--in", str(path), "--out", str(out), "--json")
    assert code == 0
    rep = json.loads(text)
    assert rep["rel_err"] < 1e-10
    back, domain = read_sfr2(out)
    assert domain == DOMAIN_FREQUENCY
    assert np.max(np.abs(back - field)) < 1e-10


def test_roundtrip2d_time_field(tmp_path, capsys):
    rng = np.random.default_rng(6)
    field = rng.standard_normal((16, 16))
    path = tmp_path / "in.sfr2"
    write_sfr2(path, field, DOMAIN_TIME)
    code, text, _ = run(capsys, "roundtrip2d", "--mu", "0.5", "--q", "4",
                        "--window", "gaussian", "--n", "16", "--in", str(path))
    assert code == 0


def test_roundtrip2d_rejects_wrong_rank(tmp_path, capsys):
    path = tmp_path / "in.sfr2"
    write_sfr2(path, np.zeros((4, 4, 4), dtype=complex), DOMAIN_FREQUENCY)
    code, _, _ = run(capsys, "roundtrip2d", "--mu", "0.5", "--q", "4",
                     "--window", "gaussian", "--n", "4", "--in", str(path))
    assert code == 2


# ---------------------------------------------------------------- selftest


def test_selftest_subset_passes(capsys):
    code, out, _ = run(capsys, "selftest", "--criteria", "1,2,11")
    assert code == 0
    lines = [ln for ln in out.strip().splitlines() if ln.startswith("[")]
    assert len(lines) == 3
    assert all(ln.startswith("[PASS]") for ln in lines)


def test_selftest_rejects_unknown_criterion(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["selftest", "--criteria", "1,99"])
    assert exc.value.code == 2


# ---------------------------------------------------------------- environment


def test_thread_cap_env_round_trip(monkeypatch, capsys):
    import os
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "VECLIB_MAXIMUM_THREADS", "NUMEXPR_NUM_THREADS"):
        monkeypatch.delenv(var, raising=False)  # registers restore-on-exit
    monkeypatch.setenv("STOCKFRAME_THREADS", "2")
    code, _, _ = run(capsys, "partition", "--alpha", "0.5", "--pmax", "3")
    assert code == 0
    assert os.environ["OMP_NUM_THREADS"] == "2"
    assert os.environ["MKL_NUM_THREADS"] == "2"


def test_thread_cap_rejects_garbage(monkeypatch, capsys):
    monkeypatch.setenv("STOCKFRAME_THREADS", "zero")
    code, _, err = run(capsys, "partition", "--alpha", "0.5", "--pmax", "3")
    assert code == 2
    assert "STOCKFRAME_THREADS" in err


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "stockframe.cli", "partition", "--alpha", "1", "--pmax", "4", "--csv"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    rows = proc.stdout.strip().splitlines()
    assert rows[1:] == ["0,0,1,1", "1,1,2,1", "2,2,4,2", "3,4,8,4", "4,8,16,8"]
