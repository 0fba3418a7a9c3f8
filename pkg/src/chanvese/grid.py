"""Finite-difference stencils over 2D scalar fields.

Fields are float64 arrays indexed [row, col] = [y, x]: x runs along axis 1
with spacing dx, y along axis 0 with spacing dy. Boundary handling is either
edge replication (Neumann-like clamp, the default) or periodic wrap-around.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import ParameterError


class BoundaryMode(enum.Enum):
    """How stencils read past the grid edge."""

    REPLICATE = "replicate"
    PERIODIC = "periodic"


def as_field(f, name: str = "field") -> np.ndarray:
    """Validate a 2D scalar field: float64, finite, at least 3x3."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 2:
        raise ParameterError(f"{name} must be 2-D, got {f.ndim}-D")
    if f.shape[0] < 3 or f.shape[1] < 3:
        raise ParameterError(
            f"{name} dimensions must be at least 3x3 (stencils need interior "
            f"points), got {f.shape[1]}x{f.shape[0]}"
        )
    if not np.isfinite(f).all():
        raise ParameterError(f"{name} contains non-finite samples")
    return f


def shift(f: np.ndarray, dr: int, dc: int, mode: BoundaryMode) -> np.ndarray:
    """f sampled at (row + dr, col + dc), reading past edges per mode."""
    if mode is BoundaryMode.PERIODIC:
        return np.roll(f, (-dr, -dc), axis=(0, 1))
    out = f
    if dr > 0:
        out = np.concatenate([out[dr:], np.repeat(out[-1:], dr, axis=0)], axis=0)
    elif dr < 0:
        out = np.concatenate([np.repeat(out[:1], -dr, axis=0), out[:dr]], axis=0)
    if dc > 0:
        out = np.concatenate([out[:, dc:], np.repeat(out[:, -1:], dc, axis=1)], axis=1)
    elif dc < 0:
        out = np.concatenate([np.repeat(out[:, :1], -dc, axis=1), out[:, :dc]], axis=1)
    return out


def central_dx(f, mode: BoundaryMode = BoundaryMode.REPLICATE, dx: float = 1.0) -> np.ndarray:
    """(f(x+dx) - f(x-dx)) / (2 dx). Exact for fields linear or quadratic in x."""
    f = as_field(f)
    return (shift(f, 0, 1, mode) - shift(f, 0, -1, mode)) / (2.0 * dx)


def central_dy(f, mode: BoundaryMode = BoundaryMode.REPLICATE, dy: float = 1.0) -> np.ndarray:
    """(f(y+dy) - f(y-dy)) / (2 dy)."""
    f = as_field(f)
    return (shift(f, 1, 0, mode) - shift(f, -1, 0, mode)) / (2.0 * dy)


def second_dxx(f, mode: BoundaryMode = BoundaryMode.REPLICATE, dx: float = 1.0) -> np.ndarray:
    """(f(x+dx) - 2 f(x) + f(x-dx)) / dx^2."""
    f = as_field(f)
    return (shift(f, 0, 1, mode) - 2.0 * f + shift(f, 0, -1, mode)) / (dx * dx)


def second_dyy(f, mode: BoundaryMode = BoundaryMode.REPLICATE, dy: float = 1.0) -> np.ndarray:
    """(f(y+dy) - 2 f(y) + f(y-dy)) / dy^2."""
    f = as_field(f)
    return (shift(f, 1, 0, mode) - 2.0 * f + shift(f, -1, 0, mode)) / (dy * dy)


def mixed_dxy(
    f,
    mode: BoundaryMode = BoundaryMode.REPLICATE,
    dx: float = 1.0,
    dy: float = 1.0,
) -> np.ndarray:
    """Mixed second derivative: the y-central difference of the x-central difference."""
    return central_dy(central_dx(f, mode, dx), mode, dy)


def one_sided_diffs(
    f,
    mode: BoundaryMode = BoundaryMode.REPLICATE,
    dx: float = 1.0,
    dy: float = 1.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Forward and backward differences (DxPlus, DxMinus, DyPlus, DyMinus).

    DxPlus = (f(x+dx) - f(x)) / dx and DxMinus = (f(x) - f(x-dx)) / dx, so
    DxPlus at x equals DxMinus at x+dx identically (shared numerator).
    """
    f = as_field(f)
    dxp = (shift(f, 0, 1, mode) - f) / dx
    dxm = (f - shift(f, 0, -1, mode)) / dx
    dyp = (shift(f, 1, 0, mode) - f) / dy
    dym = (f - shift(f, -1, 0, mode)) / dy
    return dxp, dxm, dyp, dym
