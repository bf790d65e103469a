import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from sureamp_figures.render import main, read_rows, SchemaError
from sureamp_figures.shapes import denoiser_curve

HEADER = ("experiment,prior,policy,gamma,c,snr_y_db,seed,"
          "metric_name,metric_value,iterations,wall_ms,mode,n")


def _write_csv(path, rows):
    path.write_text(HEADER + "\n" + "\n".join(rows) + ("\n" if rows else ""))
    return path


def _recovery_csv(tmp_path):
    rows = []
    for policy in ("bamp", "sure-pwl1", "l1amp"):
        for gi, g in enumerate((0.3, 0.4, 0.5)):
            for seed in (1, 2):
                snr = 20 + 5 * gi + (1 if policy == "bamp" else 0) + 0.1 * seed
                rows.append(f"recovery-sweep,bg,{policy},{g},,25.0,{seed},"
                            f"snr_x_db,{snr},12,3.5,matrix,2000")
    return _write_csv(tmp_path / "recovery.csv", rows)


def test_recovery_figure(tmp_path):
    csv = _recovery_csv(tmp_path)
    out = tmp_path / "recovery.png"
    assert main(["--csv", str(csv), "--kind", "recovery", "--out", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0


def test_se_compare_figure(tmp_path):
    rows = []
    for mode in ("matrix", "SE"):
        for g in (0.25, 0.3):
            for t in range(1, 6):
                for seed in ((1, 2) if mode == "matrix" else (9,)):
                    val = 0.05 * (0.6 ** t) * (1.0 + (0.05 if mode == "matrix" and seed == 2 else 0))
                    rows.append(f"se-compare,bg,sure-pwl1,{g},,,{seed},"
                                f"mse_at_iter,{val},{t},1.0,{mode},10000")
    csv = _write_csv(tmp_path / "se.csv", rows)
    out = tmp_path / "se.png"
    assert main(["--csv", str(csv), "--kind", "se-compare", "--out", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0


def test_denoise_figure(tmp_path):
    rows = []
    for policy in ("mmse", "sure-pwl1"):
        for c in (0.01, 0.1, 1.0):
            rows.append(f"denoise-sweep,bg,{policy},,{c},,3,mse,{0.2*c},,0.4,denoise,10000")
    csv = _write_csv(tmp_path / "den.csv", rows)
    out = tmp_path / "den.png"
    assert main(["--csv", str(csv), "--kind", "denoise", "--out", str(out)]) == 0
    assert out.exists()


def test_runtime_figure(tmp_path):
    rows = []
    for policy in ("sure-pwl1", "l1amp"):
        for n in (2000, 4000):
            rows.append(f"runtime-sweep,bg,{policy},0.5,,25.0,3,"
                        f"wall_ms_median,{n*0.01},,{n*0.01},matrix,{n}")
    csv = _write_csv(tmp_path / "rt.csv", rows)
    out = tmp_path / "rt.png"
    assert main(["--csv", str(csv), "--kind", "runtime", "--out", str(out)]) == 0
    assert out.exists()


def test_denoiser_shape_figure(tmp_path):
    rec = {"family": "pwl1", "c": 0.1, "weights": [0.04, 1.13, 0.93]}
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(rec))
    out = tmp_path / "shape.png"
    assert main(["--csv", str(spec), "--kind", "denoiser-shape", "--out", str(out)]) == 0
    assert out.exists()


def test_denoiser_curve_is_odd_and_weighted():
    r = np.linspace(-4, 4, 201)
    rec = {"family": "exp", "c": 0.25, "weights": [0.8, 0.2]}
    f = denoiser_curve(rec, r)
    np.testing.assert_allclose(f, -denoiser_curve(rec, -r), atol=1e-14)
    t2 = 6 * 0.25
    np.testing.assert_allclose(f, 0.8 * r + 0.2 * r * np.exp(-r**2 / (2 * t2)), atol=1e-12)
    with pytest.raises(ValueError):
        denoiser_curve({"family": "nope", "c": 0.1, "weights": [1.0]}, r)


def test_empty_csv_is_an_error_and_no_image(tmp_path):
    csv = _write_csv(tmp_path / "empty.csv", [])
    out = tmp_path / "empty.png"
    assert main(["--csv", str(csv), "--kind", "recovery", "--out", str(out)]) != 0
    assert not out.exists()


def test_missing_column_named_in_error(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("experiment,prior,policy\nrecovery-sweep,bg,bamp\n")
    out = tmp_path / "bad.png"
    assert main(["--csv", str(path), "--kind", "recovery", "--out", str(out)]) != 0
    err = capsys.readouterr().err
    assert "gamma" in err and "metric_name" in err
    assert not out.exists()


def test_wrong_metric_for_kind_is_an_error(tmp_path):
    csv = _recovery_csv(tmp_path)
    out = tmp_path / "x.png"
    assert main(["--csv", str(csv), "--kind", "denoise", "--out", str(out)]) != 0
    assert not out.exists()


def test_rendering_does_not_mutate_inputs(tmp_path):
    csv = _recovery_csv(tmp_path)
    before = csv.read_bytes()
    main(["--csv", str(csv), "--kind", "recovery", "--out", str(tmp_path / "o.png")])
    assert csv.read_bytes() == before


def test_same_inputs_same_output_bytes(tmp_path):
    csv = _recovery_csv(tmp_path)
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    main(["--csv", str(csv), "--kind", "recovery", "--out", str(a)])
    main(["--csv", str(csv), "--kind", "recovery", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


# --- end to end against the real harness, through its CLI only -------------

@pytest.mark.parametrize("subcommand,preset,kind", [
    ("denoise-sweep", "bg-denoise", "denoise"),
    ("recover", "bg-recover", "recovery"),
])
def test_renders_real_harness_output(tmp_path, subcommand, preset, kind):
    csv = tmp_path / "real.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "sureamp.cli", subcommand, "--preset", preset,
         "--scale", "0.05", "--seed", "5", "--out", str(csv)],
        capture_output=True, text=True, timeout=900,
    )
    assert proc.returncode == 0, proc.stderr
    out = tmp_path / "real.png"
    assert main(["--csv", str(csv), "--kind", kind, "--out", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0
