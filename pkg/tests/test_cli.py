import json
import subprocess
import sys

import numpy as np
import pytest

from chanvese import BoundaryMode, ParameterError, load_image, load_mask, save_mask
from chanvese.cli import main, parse_config

from conftest import disk_image


def write_disk_pgm(path, n=64, r=18):
    img = (disk_image(n, n / 2.0, n / 2.0, r) * 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{n} {n}\n255\n".encode())
        fh.write(img.tobytes())
    return img > 127


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "chanvese.cli", *args],
        capture_output=True,
        text=True,
    )


def test_defaults(tmp_path):
    cfg = parse_config(["--input", "x.pgm", "--out-dir", str(tmp_path)])
    p = cfg.params
    assert (p.lambda1, p.lambda2, p.mu, p.nu, p.tau) == (1.0, 1.0, 0.5, 0.015, 0.2)
    assert p.max_iters == 500
    assert p.band_width == 3.0
    assert p.reinit_every == 10
    assert p.convergence_tol == 0.00025
    assert p.convergence_window == 3
    assert p.boundary is BoundaryMode.REPLICATE
    assert cfg.init is None and cfg.smooth is None and not cfg.baseline


def test_cfl_rejected_at_parse():
    with pytest.raises(ParameterError, match="0.5"):
        parse_config(["--input", "x.pgm", "--out-dir", "o", "--tau", "0.6"])


def test_conflicting_inits_rejected():
    with pytest.raises(ParameterError, match="mutually exclusive"):
        parse_config([
            "--input", "x.pgm", "--out-dir", "o",
            "--init", "circle:64,64,20", "--init", "mask:m.pgm",
        ])


def test_unknown_flag_usage_error():
    res = run_cli(["--input", "x.pgm", "--out-dir", "o", "--frobnicate"])
    assert res.returncode == 2
    assert "usage" in res.stderr.lower()


def test_unparsable_number_usage_error():
    res = run_cli(["--input", "x.pgm", "--out-dir", "o", "--tau", "fast"])
    assert res.returncode == 2


def test_missing_input_io_exit(tmp_path):
    assert main(["--input", str(tmp_path / "nope.pgm"), "--out-dir", str(tmp_path)]) == 3


def test_full_run_outputs(tmp_path):
    src = tmp_path / "disk.pgm"
    truth = write_disk_pgm(src, n=128, r=30)
    gt = tmp_path / "gt.pgm"
    save_mask(truth, gt)
    out = tmp_path / "out"
    code = main([
        "--input", str(src), "--out-dir", str(out),
        "--ground-truth", str(gt), "--baseline",
    ])
    assert code == 0
    mask = load_mask(out / "mask.pgm")
    report = json.loads((out / "metrics.json").read_text())
    assert report["chan_vese"]["dice"] >= 0.98
    assert report["otsu"]["dice"] >= 0.98
    assert report["chan_vese"]["inside_count"] == int(mask.sum())
    lines = (out / "energy.csv").read_text().strip().splitlines()
    assert lines[0] == "iter,fit_inside,fit_outside,length,area,total"
    assert lines[1].startswith("1,")
    overlay = load_image(out / "overlay.png")  # RGB decodes through luma
    assert overlay.shape == mask.shape


def test_energy_rows_match_iterations(tmp_path):
    src = tmp_path / "disk.pgm"
    write_disk_pgm(src)
    out = tmp_path / "out"
    res = run_cli(["--input", str(src), "--out-dir", str(out), "--max-iters", "7",
                   "--window", "100"])
    assert res.returncode == 0
    rows = (out / "energy.csv").read_text().strip().splitlines()[1:]
    assert len(rows) == 7


def test_max_iters_zero(tmp_path):
    src = tmp_path / "disk.pgm"
    write_disk_pgm(src)
    out = tmp_path / "out"
    assert main(["--input", str(src), "--out-dir", str(out), "--max-iters", "0"]) == 0
    lines = (out / "energy.csv").read_text().strip().splitlines()
    assert lines == ["iter,fit_inside,fit_outside,length,area,total"]
    # outputs reflect the untouched initial circle (r = 0.1 * 64 at center)
    mask = load_mask(out / "mask.pgm")
    from chanvese import sdf_circle
    assert np.array_equal(mask, sdf_circle(64, 64, 32, 32, 6.4) < 0)


def test_init_circle_and_mask(tmp_path):
    src = tmp_path / "disk.pgm"
    truth = write_disk_pgm(src)
    out1 = tmp_path / "o1"
    assert main(["--input", str(src), "--out-dir", str(out1),
                 "--init", "circle:32,32,10", "--max-iters", "0"]) == 0
    from chanvese import sdf_circle
    assert np.array_equal(load_mask(out1 / "mask.pgm"), sdf_circle(64, 64, 32, 32, 10) < 0)

    seed = tmp_path / "seed.pgm"
    save_mask(truth, seed)
    out2 = tmp_path / "o2"
    assert main(["--input", str(src), "--out-dir", str(out2),
                 "--init", f"mask:{seed}", "--max-iters", "0"]) == 0
    assert np.array_equal(load_mask(out2 / "mask.pgm"), truth)


def test_bad_init_spec(tmp_path):
    src = tmp_path / "disk.pgm"
    write_disk_pgm(src)
    assert main(["--input", str(src), "--out-dir", str(tmp_path / "o"),
                 "--init", "blob:1,2"]) == 2


def test_constant_image_baseline_isolated(tmp_path):
    img = np.full((48, 48), 200, dtype=np.uint8)
    src = tmp_path / "flat.pgm"
    with open(src, "wb") as fh:
        fh.write(b"P5\n48 48\n255\n" + img.tobytes())
    out = tmp_path / "out"
    code = main(["--input", str(src), "--out-dir", str(out),
                 "--baseline", "--max-iters", "40"])
    assert code == 0
    report = json.loads((out / "metrics.json").read_text())
    assert "error" in report["otsu"]
    assert (out / "mask.pgm").exists()  # result still written


def test_overlay_snapshots(tmp_path):
    src = tmp_path / "disk.pgm"
    write_disk_pgm(src)
    out = tmp_path / "out"
    assert main(["--input", str(src), "--out-dir", str(out),
                 "--max-iters", "10", "--window", "100",
                 "--overlay-every", "4"]) == 0
    assert (out / "overlay_4.png").exists()
    assert (out / "overlay_8.png").exists()
    assert not (out / "overlay_12.png").exists()


def test_smooth_flag(tmp_path, rng):
    n = 128
    noisy = np.clip(disk_image(n, 64, 64, 30) + rng.normal(0, 0.2, (n, n)), 0, 1)
    src = tmp_path / "noisy.pgm"
    with open(src, "wb") as fh:
        fh.write(f"P5\n{n} {n}\n255\n".encode())
        fh.write(np.rint(noisy * 255).astype(np.uint8).tobytes())
    out = tmp_path / "out"
    assert main(["--input", str(src), "--out-dir", str(out), "--smooth", "1.0"]) == 0
    from chanvese import dice
    assert dice(load_mask(out / "mask.pgm"), disk_image(n, 64, 64, 30) > 0.5) > 0.9


def test_byte_identical_reruns(tmp_path):
    src = tmp_path / "disk.pgm"
    write_disk_pgm(src)
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["--input", str(src), "--out-dir", str(out)]) == 0
        outs.append(out)
    assert (outs[0] / "mask.pgm").read_bytes() == (outs[1] / "mask.pgm").read_bytes()
    assert (outs[0] / "energy.csv").read_bytes() == (outs[1] / "energy.csv").read_bytes()
