import numpy as np
import pytest


def disk_image(n=128, cx=64.0, cy=64.0, r=30.0):
    """Binary disk: 1 inside radius r, 0 outside."""
    y, x = np.mgrid[0:n, 0:n]
    return (((x - cx) ** 2 + (y - cy) ** 2) <= r * r).astype(np.float64)


def brute_force_sdf(mask):
    """O(n^2) nearest-opposite-pixel oracle for the signed distance field."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    pts_in = np.argwhere(mask).astype(np.float64)
    pts_out = np.argwhere(~mask).astype(np.float64)
    out = np.empty((h, w))
    for i in range(h):
        for j in range(w):
            pts = pts_out if mask[i, j] else pts_in
            d = np.sqrt(((pts - (i, j)) ** 2).sum(axis=1)).min()
            out[i, j] = -d if mask[i, j] else d
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
