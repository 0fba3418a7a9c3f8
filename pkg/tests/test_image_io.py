import numpy as np
import pytest
from PIL import Image

from chanvese import (
    ContourSet,
    DegenerateInputError,
    FormatError,
    ParameterError,
    gaussian_smooth,
    load_image,
    load_mask,
    normalize,
    save_mask,
    save_overlay,
)
from chanvese.image_io import gaussian_kernel


def write_p2(path, rows, maxval=255):
    h = len(rows)
    w = len(rows[0])
    body = "\n".join(" ".join(str(v) for v in row) for row in rows)
    path.write_text(f"P2\n# comment\n{w} {h}\n{maxval}\n{body}\n")


def test_p2_constant(tmp_path):
    p = tmp_path / "c.pgm"
    write_p2(p, [[128] * 3] * 3)
    img = load_image(p)
    assert img.shape == (3, 3)
    assert np.all(img == 128.0)


def test_p5_matches_p2(tmp_path, rng):
    pix = rng.integers(0, 256, size=(5, 7), dtype=np.uint8)
    p2 = tmp_path / "a.pgm"
    write_p2(p2, pix.tolist())
    p5 = tmp_path / "b.pgm"
    p5.write_bytes(b"P5\n7 5\n255\n" + pix.tobytes())
    assert np.array_equal(load_image(p2), load_image(p5))


def test_undersized_image_rejected(tmp_path):
    p = tmp_path / "tiny.pgm"
    write_p2(p, [[1, 2], [3, 4]])
    with pytest.raises(ParameterError, match="3x3"):
        load_image(p)


def test_garbage_and_missing_files(tmp_path):
    p = tmp_path / "x.bin"
    p.write_bytes(b"\x00\x01\x02 not an image")
    with pytest.raises(FormatError):
        load_image(p)
    with pytest.raises(OSError):
        load_image(tmp_path / "missing.pgm")


def test_png_gray_roundtrip(tmp_path, rng):
    pix = rng.integers(0, 256, size=(6, 9), dtype=np.uint8)
    p = tmp_path / "g.png"
    Image.fromarray(pix, mode="L").save(p)
    assert np.array_equal(load_image(p), pix.astype(float))


def test_png_rgb_uses_luma_weights(tmp_path):
    rgb = np.zeros((4, 4, 3), dtype=np.uint8)
    rgb[..., 0] = 100
    rgb[..., 1] = 150
    rgb[..., 2] = 200
    p = tmp_path / "c.png"
    Image.fromarray(rgb, mode="RGB").save(p)
    expect = 0.299 * 100 + 0.587 * 150 + 0.114 * 200
    assert np.abs(load_image(p) - expect).max() < 1e-12


def test_16bit_png_rejected(tmp_path):
    p = tmp_path / "deep.png"
    Image.fromarray(np.zeros((4, 4), dtype=np.uint16)).save(p)
    with pytest.raises(FormatError, match="mode"):
        load_image(p)


def test_normalize_examples():
    img = np.array([[0.0, 64.0], [128.0, 255.0]])
    out = normalize(img)
    assert np.array_equal(out, img / 255.0)
    assert out.max() == 1.0
    assert np.all(normalize(np.full((3, 3), 7.0)) == 1.0)
    with pytest.raises(DegenerateInputError):
        normalize(np.zeros((3, 3)))


def test_normalize_idempotent(rng):
    img = rng.random((8, 8)) * 200.0
    once = normalize(img)
    assert np.array_equal(normalize(once), once)


def test_gaussian_constant_preserved():
    img = np.full((16, 16), 0.37)
    assert np.abs(gaussian_smooth(img, 1.0) - 0.37).max() < 1e-12


def test_gaussian_impulse_matches_kernel_table():
    # direct kernel-table oracle: the impulse response center is the squared
    # 1D peak, and the response mass is the full kernel mass (= 1)
    k = gaussian_kernel(1.0)
    assert k.size == 2 * 4 + 1  # radius ceil(4 sigma)
    assert abs(k.sum() - 1.0) < 1e-12
    img = np.zeros((32, 32))
    img[16, 16] = 1.0
    out = gaussian_smooth(img, 1.0)
    peak = k[k.size // 2]
    assert abs(out[16, 16] - peak * peak) < 1e-12
    assert abs(out.sum() - 1.0) < 1e-12


def test_gaussian_semigroup(rng):
    # semigroup property holds away from the border, where edge replication
    # (which does not commute with composition) cannot reach
    img = rng.random((48, 48))
    twice = gaussian_smooth(gaussian_smooth(img, 1.0), 1.0)
    once = gaussian_smooth(img, np.sqrt(2.0))
    m = 6  # kernel radius of the sigma = sqrt(2) pass
    assert np.abs(twice - once)[m:-m, m:-m].max() < 0.01


def test_gaussian_mean_preserved_with_constant_border(rng):
    img = np.full((24, 24), 0.5)
    img[6:18, 6:18] = rng.random((12, 12))
    out = gaussian_smooth(img, 1.0)  # radius 4 < border width 6
    assert abs(out.mean() - img.mean()) < 1e-6


def test_gaussian_rejects_bad_sigma():
    with pytest.raises(ParameterError):
        gaussian_smooth(np.zeros((4, 4)), 0.0)


def test_mask_roundtrip_bit_exact(tmp_path, rng):
    mask = rng.random((9, 13)) < 0.4
    p = tmp_path / "m.pgm"
    save_mask(mask, p)
    again = tmp_path / "m2.pgm"
    save_mask(load_mask(p), again)
    assert p.read_bytes() == again.read_bytes()
    assert np.array_equal(load_mask(p), mask)


def test_all_inside_mask_saves_255(tmp_path):
    p = tmp_path / "full.pgm"
    save_mask(np.ones((4, 5), dtype=bool), p)
    img = load_image(p)
    assert np.all(img == 255.0)


def test_empty_contour_overlay_is_grayscale(tmp_path, rng):
    img = rng.random((10, 10))
    p = tmp_path / "o.png"
    save_overlay(img, ContourSet(), p)
    with Image.open(p) as im:
        arr = np.asarray(im)
    gray = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    assert arr.shape == (10, 10, 3)
    assert np.array_equal(arr, np.stack([gray] * 3, axis=-1))


def test_overlay_marks_contour_red(tmp_path):
    from chanvese import extract_contour, sdf_circle

    phi = sdf_circle(32, 32, 16, 16, 8)
    p = tmp_path / "o.png"
    save_overlay(np.full((32, 32), 0.5), extract_contour(phi), p)
    with Image.open(p) as im:
        arr = np.asarray(im)
    red = (arr[..., 0] == 255) & (arr[..., 1] == 0) & (arr[..., 2] == 0)
    assert red.sum() > 20  # a ring of marked pixels
    untouched = arr[~red]
    assert np.all(untouched[:, 0] == untouched[:, 1])
    assert np.all(untouched[:, 1] == untouched[:, 2])
