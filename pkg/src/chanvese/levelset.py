"""Level-set operators: curvature, upwind gradient norms, signed-distance
construction, reinitialization, and zero-level contour extraction.

Convention throughout: phi < 0 is inside the contour, phi > 0 outside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, ParameterError
from .grid import BoundaryMode, as_field

# Guard for the curvature denominator, in squared-gradient units. Well below
# any meaningful slope of a [0,1]-intensity field; keeps flat regions at K=0.
CURVATURE_EPS = 1e-8


def curvature(
    phi,
    mode: BoundaryMode = BoundaryMode.REPLICATE,
    dx: float = 1.0,
    dy: float = 1.0,
    eps: float = CURVATURE_EPS,
    band: float | None = None,
) -> np.ndarray:
    """Curvature K = -div(grad phi / |grad phi|) of every level set of phi.

    For a circle signed-distance field this is -1/(radius + phi): level sets
    inside the band shrink under the length penalty. When band is given, K is
    evaluated only where |phi| < band and is 0 elsewhere.
    """
    phi = as_field(phi, "phi")
    if eps <= 0:
        raise ParameterError("curvature eps must be positive")
    b = math.inf if band is None else float(band)
    return _kernels.curvature(phi, dx, dy, eps, b, mode is BoundaryMode.PERIODIC)


def upwind_norm(
    phi,
    coeff_sign: int,
    mode: BoundaryMode = BoundaryMode.REPLICATE,
    dx: float = 1.0,
    dy: float = 1.0,
) -> np.ndarray:
    """Per-pixel entropy-upwinded |grad phi| for a term with the given coefficient sign.

    coeff_sign=+1: sqrt(max(Dx+,0)^2 + min(Dx-,0)^2 + max(Dy+,0)^2 + min(Dy-,0)^2).
    coeff_sign=-1: min/max roles swapped.
    """
    phi = as_field(phi, "phi")
    if coeff_sign not in (1, -1):
        raise ParameterError(f"coeff_sign must be +1 or -1, got {coeff_sign!r}")
    return _kernels.upwind_norm(phi, coeff_sign, dx, dy, mode is BoundaryMode.PERIODIC)


def sdf_circle(width: int, height: int, cx: float, cy: float, r: float) -> np.ndarray:
    """Exact signed distance to a circle: sqrt((x-cx)^2 + (y-cy)^2) - r, negative inside."""
    if r <= 0:
        raise ParameterError(f"circle radius must be positive, got {r}")
    if width < 3 or height < 3:
        raise ParameterError("field dimensions must be at least 3x3")
    y, x = np.mgrid[0:height, 0:width]
    return np.sqrt((x - cx) ** 2 + (y - cy) ** 2) - r


def _edt_sq_1d(f: np.ndarray) -> np.ndarray:
    """1D squared Euclidean distance transform by the lower envelope of parabolas.

    f holds squared distances sampled on the line (np.inf where no source yet).
    """
    n = f.size
    out = np.full(n, np.inf)
    finite = np.flatnonzero(np.isfinite(f))
    if finite.size == 0:
        return out
    v = np.zeros(n, dtype=np.intp)   # parabola apex positions
    z = np.empty(n + 1)              # envelope breakpoints
    k = 0
    v[0] = finite[0]
    z[0] = -np.inf
    z[1] = np.inf
    for q in finite[1:]:
        s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k])
        while s <= z[k]:
            k -= 1
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k])
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = np.inf
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        d = q - v[k]
        out[q] = d * d + f[v[k]]
    return out


def _edt(sources: np.ndarray) -> np.ndarray:
    """Exact Euclidean distance from every pixel to the nearest True pixel."""
    h, w = sources.shape
    sq = np.where(sources, 0.0, np.inf)
    for i in range(h):
        sq[i] = _edt_sq_1d(sq[i])
    for j in range(w):
        sq[:, j] = _edt_sq_1d(sq[:, j])
    return np.sqrt(sq)


def sdf_from_mask(mask) -> np.ndarray:
    """Signed distance field from a boolean inside-mask.

    phi = distance-to-inside - distance-to-outside, so inside pixels are
    negative and thresholding phi < 0 reproduces the mask exactly.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.shape[0] < 3 or mask.shape[1] < 3:
        raise ParameterError(f"mask must be 2-D and at least 3x3, got shape {mask.shape}")
    if mask.all() or not mask.any():
        raise DegenerateInputError(
            "mask must contain at least one inside and one outside pixel"
        )
    return _edt(mask) - _edt(~mask)


def sussman_reinit(
    phi,
    dt: float = 0.5,
    iterations: int = 10,
    mode: BoundaryMode = BoundaryMode.REPLICATE,
    dx: float = 1.0,
    dy: float = 1.0,
) -> np.ndarray:
    """Restore the signed-distance property without moving the zero crossing.

    Evolves phi_t = S(phi) * (1 - |grad phi|) with the smoothed sign
    S(phi) = phi / sqrt(phi^2 + dx^2) of the current iterate and the
    entropy-upwinded |grad phi|, branch-selected per pixel by the sign of S.
    Planar signed-distance fields are exact fixed points; curved ones drift
    by the first-order truncation O(dt * iterations * curvature).
    """
    phi = as_field(phi, "phi")
    if not 0.0 < dt <= 0.5:
        raise ParameterError(f"reinit dt must be in (0, 0.5] for unit grids, got {dt}")
    if iterations < 1:
        raise ParameterError(f"reinit iterations must be >= 1, got {iterations}")
    periodic = mode is BoundaryMode.PERIODIC
    out = phi.copy()
    for _ in range(iterations):
        out = _kernels.sussman_sweep(out, dt, dx, dy, periodic)
    return out


@dataclass
class ContourSet:
    """Zero-level-set polylines with subpixel (x, y) vertices.

    Closed loops repeat their first vertex at the end.
    """

    polylines: list[np.ndarray] = field(default_factory=list)

    def total_length(self) -> float:
        total = 0.0
        for line in self.polylines:
            seg = np.diff(line, axis=0)
            total += float(np.sqrt((seg * seg).sum(axis=1)).sum())
        return total

    def is_empty(self) -> bool:
        return not self.polylines

    def __len__(self) -> int:
        return len(self.polylines)


# Marching-squares case table. Corner bits: TL=1, TR=2, BR=4, BL=8 (bit set
# when the corner is inside, i.e. phi < 0). Edges: T, R, B, L. Cases 5 and 10
# are saddles resolved by the cell-centre average.
_MS_CASES = {
    1: [("T", "L")],
    2: [("T", "R")],
    3: [("L", "R")],
    4: [("R", "B")],
    6: [("T", "B")],
    7: [("L", "B")],
    8: [("L", "B")],
    9: [("T", "B")],
    11: [("R", "B")],
    12: [("L", "R")],
    13: [("T", "R")],
    14: [("T", "L")],
}
_MS_SADDLE = {
    # case: (segments when centre average < 0, segments otherwise)
    5: ([("T", "R"), ("B", "L")], [("T", "L"), ("R", "B")]),
    10: ([("T", "L"), ("R", "B")], [("T", "R"), ("L", "B")]),
}


def _cell_segments(phi: np.ndarray, dx: float, dy: float):
    """All zero-crossing segments as endpoint arrays plus edge identities.

    Returns (p0, p1, k0, k1): (N,2) float endpoint arrays in (x, y) and (N,)
    integer edge keys. The key identifies the grid edge each endpoint sits on,
    so endpoints shared between cells compare equal exactly.
    """
    h, w = phi.shape
    a = phi[:-1, :-1]  # TL
    b = phi[:-1, 1:]   # TR
    c = phi[1:, 1:]    # BR
    d = phi[1:, :-1]   # BL
    case = (
        (a < 0).astype(np.uint8)
        + ((b < 0).astype(np.uint8) << 1)
        + ((c < 0).astype(np.uint8) << 2)
        + ((d < 0).astype(np.uint8) << 3)
    )

    ii, jj = np.mgrid[0 : h - 1, 0 : w - 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        t_top = a / (a - b)
        t_bottom = d / (d - c)
        t_left = a / (a - d)
        t_right = b / (b - c)

    # horizontal edge (i, j) joins grid points (i, j)-(i, j+1); vertical edge
    # (i, j) joins (i, j)-(i+1, j). Keys: orientation * h * w + i * w + j.
    def edge_point(edge):
        if edge == "T":
            key = ii * w + jj
            return key, (jj + t_top) * dx, ii * dy
        if edge == "B":
            key = (ii + 1) * w + jj
            return key, (jj + t_bottom) * dx, (ii + 1) * dy
        if edge == "L":
            key = h * w + ii * w + jj
            return key, jj * dx, (ii + t_left) * dy
        key = h * w + ii * w + (jj + 1)
        return key, (jj + 1) * dx, (ii + t_right) * dy

    points = {e: edge_point(e) for e in "TRBL"}

    p0s, p1s, k0s, k1s = [], [], [], []

    def emit(sel, e0, e1):
        if not sel.any():
            return
        key0, x0, y0 = points[e0]
        key1, x1, y1 = points[e1]
        p0s.append(np.column_stack([x0[sel], y0[sel]]))
        p1s.append(np.column_stack([x1[sel], y1[sel]]))
        k0s.append(key0[sel])
        k1s.append(key1[sel])

    for case_id, segs in _MS_CASES.items():
        sel = case == case_id
        for e0, e1 in segs:
            emit(sel, e0, e1)
    if (case == 5).any() or (case == 10).any():
        centre_in = (a + b + c + d) * 0.25 < 0
        for case_id, (segs_in, segs_out) in _MS_SADDLE.items():
            sel = case == case_id
            for e0, e1 in segs_in:
                emit(sel & centre_in, e0, e1)
            for e0, e1 in segs_out:
                emit(sel & ~centre_in, e0, e1)

    if not p0s:
        empty = np.empty((0, 2)), np.empty((0, 2)), np.empty(0, np.intp), np.empty(0, np.intp)
        return empty
    return (
        np.concatenate(p0s),
        np.concatenate(p1s),
        np.concatenate(k0s).astype(np.intp),
        np.concatenate(k1s).astype(np.intp),
    )


def contour_length(phi, dx: float = 1.0, dy: float = 1.0) -> float:
    """Total zero-level-set length: the sum of all marching-squares segments.

    Equals extract_contour(phi).total_length() up to summation order; this
    skips the polyline assembly and is cheap enough to call every iteration.
    """
    phi = as_field(phi, "phi")
    p0, p1, _, _ = _cell_segments(phi, dx, dy)
    if p0.shape[0] == 0:
        return 0.0
    seg = p1 - p0
    return float(np.sqrt((seg * seg).sum(axis=1)).sum())


def extract_contour(phi, dx: float = 1.0, dy: float = 1.0) -> ContourSet:
    """Marching-squares zero-level contour with linearly interpolated vertices.

    Saddle cells are resolved by the sign of the cell-centre average. Segments
    are chained into polylines; a field with no sign change yields an empty set.
    """
    phi = as_field(phi, "phi")
    p0, p1, k0, k1 = _cell_segments(phi, dx, dy)
    n = k0.size
    if n == 0:
        return ContourSet()

    pos: dict[int, tuple[float, float]] = {}
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx in range(n):
        ka, kb = int(k0[idx]), int(k1[idx])
        pos[ka] = (float(p0[idx, 0]), float(p0[idx, 1]))
        pos[kb] = (float(p1[idx, 0]), float(p1[idx, 1]))
        adj.setdefault(ka, []).append((kb, idx))
        adj.setdefault(kb, []).append((ka, idx))

    used = np.zeros(n, dtype=bool)

    def walk(start: int) -> list[int]:
        path = [start]
        node = start
        while True:
            nxt = None
            for other, idx in adj[node]:
                if not used[idx]:
                    used[idx] = True
                    nxt = other
                    break
            if nxt is None:
                return path
            path.append(nxt)
            node = nxt

    polylines = []
    # open curves first (endpoints have a single incident segment)
    for key in sorted(k for k, links in adj.items() if len(links) == 1):
        if all(used[idx] for _, idx in adj[key]):
            continue
        path = walk(key)
        polylines.append(np.array([pos[k] for k in path]))
    # remaining segments belong to closed loops
    for idx in range(n):
        if used[idx]:
            continue
        used[idx] = True
        path = [int(k0[idx]), int(k1[idx])]
        node = path[-1]
        while node != path[0]:
            nxt = None
            for other, j in adj[node]:
                if not used[j]:
                    used[j] = True
                    nxt = other
                    break
            if nxt is None:
                break
            path.append(nxt)
            node = nxt
        polylines.append(np.array([pos[k] for k in path]))
    return ContourSet(polylines)
