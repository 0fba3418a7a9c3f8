"""Grayscale image loading, normalization, smoothing, and mask/overlay output.

Images are float64 arrays in [0, 255] straight after loading and in [0, 1]
after normalize(). Masks are boolean arrays, True = inside.
"""
from __future__ import annotations

import math

import numpy as np
from PIL import Image

from .errors import DegenerateInputError, FormatError, ParameterError

# ITU-R 601 luma weights for RGB -> grayscale
_LUMA = np.array([0.299, 0.587, 0.114])


def _check_dims(arr: np.ndarray, path) -> np.ndarray:
    if arr.shape[0] < 3 or arr.shape[1] < 3:
        raise ParameterError(
            f"{path}: image must be at least 3x3 pixels, got "
            f"{arr.shape[1]}x{arr.shape[0]}"
        )
    return arr


def _pgm_tokens(data: bytes):
    """Yield whitespace-separated PGM header/ASCII tokens, skipping # comments."""
    i = 0
    n = len(data)
    while i < n:
        c = data[i : i + 1]
        if c == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < n and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            yield i, data[i:j]
            i = j


def _load_pgm(data: bytes, path) -> np.ndarray:
    tokens = _pgm_tokens(data)
    try:
        _, magic = next(tokens)
        head = []
        while len(head) < 3:
            pos, tok = next(tokens)
            head.append((pos, tok))
    except StopIteration:
        raise FormatError(f"{path}: truncated PGM header") from None
    try:
        width, height, maxval = (int(tok) for _, tok in head)
    except ValueError:
        raise FormatError(f"{path}: malformed PGM header") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"{path}: bad PGM dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise FormatError(f"{path}: unsupported PGM maxval {maxval} (need 1..255)")

    if magic == b"P5":
        # binary samples start one whitespace byte after the maxval token
        start = head[2][0] + len(head[2][1]) + 1
        raw = data[start : start + width * height]
        if len(raw) != width * height:
            raise FormatError(f"{path}: P5 pixel data truncated")
        arr = np.frombuffer(raw, dtype=np.uint8).astype(np.float64)
    else:  # P2
        values = []
        for _, tok in tokens:
            try:
                values.append(int(tok))
            except ValueError:
                raise FormatError(f"{path}: non-numeric P2 sample {tok!r}") from None
        if len(values) != width * height:
            raise FormatError(
                f"{path}: P2 expects {width * height} samples, got {len(values)}"
            )
        arr = np.array(values, dtype=np.float64)
    if arr.max(initial=0) > maxval:
        raise FormatError(f"{path}: sample exceeds declared maxval {maxval}")
    return _check_dims(arr.reshape(height, width), path)


def _load_png(path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode in ("P", "RGBA"):
            im = im.convert("RGB")
        if im.mode == "L":
            arr = np.asarray(im, dtype=np.float64)
        elif im.mode == "RGB":
            rgb = np.asarray(im, dtype=np.float64)
            arr = rgb @ _LUMA
        else:
            raise FormatError(f"{path}: unsupported PNG mode {im.mode!r} (need 8-bit L or RGB)")
    return _check_dims(arr, path)


def load_image(path) -> np.ndarray:
    """Load a PGM (P2/P5) or 8-bit PNG as float64 intensities in [0, 255].

    RGB input is reduced with luma weights 0.299/0.587/0.114.
    """
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head[:2] in (b"P2", b"P5"):
        with open(path, "rb") as fh:
            return _load_pgm(fh.read(), path)
    if head[:8] == b"\x89PNG\r\n\x1a\n":
        return _load_png(path)
    raise FormatError(f"{path}: unrecognized format (expected PGM P2/P5 or PNG)")


def load_mask(path) -> np.ndarray:
    """Load a mask image; pixels brighter than half scale are inside."""
    return load_image(path) > 127.5


def normalize(img) -> np.ndarray:
    """Scale so the maximum is exactly 1. Idempotent; rejects all-zero images."""
    img = np.asarray(img, dtype=np.float64)
    peak = img.max()
    if peak <= 0:
        raise DegenerateInputError("cannot normalize an all-zero image")
    return img / peak


def gaussian_kernel(sigma: float) -> np.ndarray:
    """1D Gaussian taps truncated at radius ceil(4 sigma), normalized to sum 1."""
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    radius = math.ceil(4.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_smooth(img, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge replication at the borders."""
    img = np.asarray(img, dtype=np.float64)
    k = gaussian_kernel(sigma)
    r = k.size // 2
    padded = np.pad(img, ((0, 0), (r, r)), mode="edge")
    out = np.empty_like(img)
    for i in range(img.shape[0]):
        out[i] = np.convolve(padded[i], k, mode="valid")
    padded = np.pad(out, ((r, r), (0, 0)), mode="edge")
    for j in range(img.shape[1]):
        out[:, j] = np.convolve(padded[:, j], k, mode="valid")
    return out


def save_mask(mask, path) -> None:
    """Write a boolean mask as binary PGM (P5), inside = 255."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    payload = np.where(mask, 255, 0).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(payload.tobytes())


def _rasterize(contours, shape) -> np.ndarray:
    """Pixels touched by the contour polylines, sampled every half pixel."""
    h, w = shape
    hit = np.zeros(shape, dtype=bool)
    for line in contours.polylines:
        for a, b in zip(line[:-1], line[1:]):
            seg_len = math.hypot(b[0] - a[0], b[1] - a[1])
            steps = max(1, math.ceil(seg_len / 0.5))
            for t in np.linspace(0.0, 1.0, steps + 1):
                x = a[0] + t * (b[0] - a[0])
                y = a[1] + t * (b[1] - a[1])
                xi = min(max(int(round(x)), 0), w - 1)
                yi = min(max(int(round(y)), 0), h - 1)
                hit[yi, xi] = True
    return hit


def save_overlay(img, contours, path) -> None:
    """Write the [0,1] image as RGB PNG with contour pixels in pure red."""
    img = np.asarray(img, dtype=np.float64)
    gray = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    rgb = np.stack([gray, gray, gray], axis=-1)
    if not contours.is_empty():
        hit = _rasterize(contours, img.shape)
        rgb[hit] = (255, 0, 0)
    Image.fromarray(rgb, mode="RGB").save(path, format="PNG")
