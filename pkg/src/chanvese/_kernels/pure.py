"""Numpy implementations of the per-pixel evolution kernels.

These are the reference semantics; the compiled backend in _fast.pyx mirrors
each expression operation for operation so both produce identical results.
Inputs are assumed validated (2D float64, finite); callers in the public
modules do the checking.
"""
import numpy as np

NAME = "pure"


def _nbrs(f, periodic):
    """Left, right, up, down neighbours with clamp or wrap at the edges."""
    if periodic:
        left = np.roll(f, 1, axis=1)
        right = np.roll(f, -1, axis=1)
        up = np.roll(f, 1, axis=0)
        down = np.roll(f, -1, axis=0)
    else:
        left = np.concatenate([f[:, :1], f[:, :-1]], axis=1)
        right = np.concatenate([f[:, 1:], f[:, -1:]], axis=1)
        up = np.concatenate([f[:1], f[:-1]], axis=0)
        down = np.concatenate([f[1:], f[-1:]], axis=0)
    return left, right, up, down


def upwind_norm(phi, sign, dx, dy, periodic):
    """Entropy-upwinded |grad phi| for a term whose coefficient has the given sign.

    sign=+1 combines max(Dx+,0), min(Dx-,0) (and likewise in y); sign=-1 swaps
    the min/max roles. Always >= 0.
    """
    left, right, up, down = _nbrs(phi, periodic)
    dxp = (right - phi) / dx
    dxm = (phi - left) / dx
    dyp = (down - phi) / dy
    dym = (phi - up) / dy
    if sign > 0:
        sq = (
            np.maximum(dxp, 0.0) ** 2
            + np.minimum(dxm, 0.0) ** 2
            + np.maximum(dyp, 0.0) ** 2
            + np.minimum(dym, 0.0) ** 2
        )
    else:
        sq = (
            np.minimum(dxp, 0.0) ** 2
            + np.maximum(dxm, 0.0) ** 2
            + np.minimum(dyp, 0.0) ** 2
            + np.maximum(dym, 0.0) ** 2
        )
    return np.sqrt(sq)


def grad_norm(phi, dx, dy, periodic):
    """Central-difference |grad phi|."""
    left, right, up, down = _nbrs(phi, periodic)
    fx = (right - left) / (2.0 * dx)
    fy = (down - up) / (2.0 * dy)
    return np.sqrt(fx * fx + fy * fy)


def curvature(phi, dx, dy, eps, band, periodic):
    """Curvature K = -div(grad phi / |grad phi|), zero outside |phi| < band.

    The denominator is guarded by eps (squared-gradient units) so flat regions
    return 0 instead of 0/0.
    """
    left, right, up, down = _nbrs(phi, periodic)
    fx = (right - left) / (2.0 * dx)
    fy = (down - up) / (2.0 * dy)
    fxx = (right - 2.0 * phi + left) / (dx * dx)
    fyy = (down - 2.0 * phi + up) / (dy * dy)
    # mixed derivative: y-central difference of the x-central difference
    fx_up, fx_down = _nbrs(fx, periodic)[2:]
    fxy = (fx_down - fx_up) / (2.0 * dy)
    g2 = fx * fx + fy * fy
    denom = np.maximum(g2, eps)
    num = fxx * fy * fy - 2.0 * fx * fy * fxy + fyy * fx * fx
    k = -num / (denom * np.sqrt(denom))
    return np.where(np.abs(phi) < band, k, 0.0)


def sussman_sweep(phi, dt, dx, dy, periodic):
    """One reinitialization sweep: phi + dt * s * (1 - |grad phi|_upwind).

    s = phi / sqrt(phi^2 + dx^2) is the smoothed sign of the current iterate,
    so pixels that overshoot across zero are pushed back. The upwind branch
    per pixel follows the advection coefficient -s, so values propagate away
    from the zero crossing (downwind branches are unstable here).
    """
    s = phi / np.sqrt(phi * phi + dx * dx)
    left, right, up, down = _nbrs(phi, periodic)
    dxp = (right - phi) / dx
    dxm = (phi - left) / dx
    dyp = (down - phi) / dy
    dym = (phi - up) / dy
    sq_pos = (
        np.minimum(dxp, 0.0) ** 2
        + np.maximum(dxm, 0.0) ** 2
        + np.minimum(dyp, 0.0) ** 2
        + np.maximum(dym, 0.0) ** 2
    )
    sq_neg = (
        np.maximum(dxp, 0.0) ** 2
        + np.minimum(dxm, 0.0) ** 2
        + np.maximum(dyp, 0.0) ** 2
        + np.minimum(dym, 0.0) ** 2
    )
    norm = np.where(s >= 0.0, np.sqrt(sq_pos), np.sqrt(sq_neg))
    return phi + dt * s * (1.0 - norm)
