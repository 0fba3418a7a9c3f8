"""Region-based contour evolution: the minimization loop over the level set.

Each iteration measures the region means, advances the level set by one
explicit time step of

    phi_t = l1 (I-u)^2 |grad phi| - l2 (I-v)^2 |grad phi|
            - mu K |grad phi| + nu |grad phi|

with entropy-upwinded gradient norms for the nonlinear terms, records the
energy, periodically restores the signed-distance property, and stops when
the mask stalls (XOR churn below tolerance for a window of iterations).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, NumericalInstabilityError, ParameterError
from .grid import BoundaryMode, as_field
from .levelset import CURVATURE_EPS, ContourSet, contour_length, extract_contour, sussman_reinit


@dataclass
class SolverParams:
    """All scalar knobs of the evolution.

    Defaults follow the classical recommendation lambda1 = lambda2 = 1 with a
    moderate length penalty; tau must respect the explicit-step stability
    bound tau <= min(dx^2, dy^2) / 2 (see cfl_check).
    """

    lambda1: float = 1.0
    lambda2: float = 1.0
    mu: float = 0.5
    nu: float = 0.015
    tau: float = 0.2
    max_iters: int = 500
    band_width: float = 3.0
    reinit_every: int = 10      # iterations between reinitializations, 0 = never
    # Churn threshold below the smallest quantized front burst a symmetric
    # desk-scale image produces (8 px on 128^2), else the window fires mid-run.
    convergence_tol: float = 0.00025  # fraction of pixels allowed to flip
    convergence_window: int = 3       # consecutive passing checks required
    boundary: BoundaryMode = BoundaryMode.REPLICATE
    dx: float = 1.0
    dy: float = 1.0

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0 or self.mu < 0:
            raise ParameterError("lambda1, lambda2 and mu must be >= 0")
        if self.tau <= 0:
            raise ParameterError(f"tau must be positive, got {self.tau}")
        if self.max_iters < 0:
            raise ParameterError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.band_width < 2:
            raise ParameterError(f"band_width must be >= 2 pixels, got {self.band_width}")
        if self.reinit_every < 0:
            raise ParameterError(f"reinit_every must be >= 0, got {self.reinit_every}")
        if not 0.0 < self.convergence_tol < 1.0:
            raise ParameterError(
                f"convergence_tol must be in (0, 1), got {self.convergence_tol}"
            )
        if self.convergence_window < 1:
            raise ParameterError(
                f"convergence_window must be >= 1, got {self.convergence_window}"
            )
        if self.dx <= 0 or self.dy <= 0:
            raise ParameterError("grid spacings must be positive")


@dataclass
class EnergyRecord:
    """One iteration's energy split: two fit terms, length and area penalties."""

    fit_inside: float
    fit_outside: float
    length_term: float
    area_term: float
    total: float


@dataclass
class SegmentationResult:
    phi: np.ndarray
    mask: np.ndarray
    contours: ContourSet
    trace: list[EnergyRecord] = field(default_factory=list)
    iterations: int = 0
    u: float = 0.0
    v: float = 0.0


def cfl_check(params: SolverParams) -> SolverParams:
    """Reject time steps beyond the explicit stability bound min(dx^2, dy^2)/2."""
    bound = min(params.dx * params.dx, params.dy * params.dy) / 2.0
    if params.tau > bound:
        raise ParameterError(
            f"tau = {params.tau} violates the stability bound: maximum "
            f"admissible tau is {bound} for dx = {params.dx}, dy = {params.dy}"
        )
    return params


def region_means(img, phi) -> tuple[float, float]:
    """Mean intensity inside (phi < 0) and outside (phi > 0) the contour.

    Pixels with phi exactly 0 belong to neither; an empty region reports 0.
    """
    img = np.asarray(img, dtype=np.float64)
    inside = phi < 0
    outside = phi > 0
    u = float(img[inside].mean()) if inside.any() else 0.0
    v = float(img[outside].mean()) if outside.any() else 0.0
    return u, v


def energy(img, phi, params: SolverParams) -> EnergyRecord:
    """Discrete energy at the current level set.

    fit terms are plain pixel sums against the region means, the length term
    weighs the marching-squares contour length, the area term the inside
    pixel count.
    """
    img = np.asarray(img, dtype=np.float64)
    u, v = region_means(img, phi)
    inside = phi < 0
    outside = phi > 0
    fit_in = params.lambda1 * float(((img - u) ** 2)[inside].sum())
    fit_out = params.lambda2 * float(((img - v) ** 2)[outside].sum())
    length = params.mu * contour_length(phi, params.dx, params.dy)
    area = params.nu * float(inside.sum())
    return EnergyRecord(fit_in, fit_out, length, area, fit_in + fit_out + length + area)


def step(img, phi, u: float, v: float, params: SolverParams) -> np.ndarray:
    """One explicit evolution step from the given region means.

    Upwind branch per term follows the sign of its coefficient: +1 for the
    inside fit term, -1 for the outside fit term, sign(nu) for the area term.
    Curvature is evaluated on the narrow band |phi| < band_width only and is
    multiplied by the central-difference gradient norm.
    """
    img = np.asarray(img, dtype=np.float64)
    phi = as_field(phi, "phi")
    if img.shape != phi.shape:
        raise ParameterError(f"image {img.shape} and phi {phi.shape} dimensions differ")
    periodic = params.boundary is BoundaryMode.PERIODIC
    dx, dy = params.dx, params.dy

    rhs = np.zeros_like(phi)
    if params.lambda1 != 0.0:
        diff = img - u
        rhs += params.lambda1 * diff * diff * _kernels.upwind_norm(phi, 1, dx, dy, periodic)
    if params.lambda2 != 0.0:
        diff = img - v
        rhs -= params.lambda2 * diff * diff * _kernels.upwind_norm(phi, -1, dx, dy, periodic)
    if params.mu != 0.0:
        k = _kernels.curvature(phi, dx, dy, CURVATURE_EPS, params.band_width, periodic)
        rhs -= params.mu * k * _kernels.grad_norm(phi, dx, dy, periodic)
    if params.nu != 0.0:
        sign = 1 if params.nu > 0 else -1
        rhs += params.nu * _kernels.upwind_norm(phi, sign, dx, dy, periodic)

    out = phi + params.tau * rhs
    if not np.isfinite(out).all():
        raise NumericalInstabilityError(
            "level set left the finite range; reduce tau or the fit weights"
        )
    return out


def converged(prev, cur, params: SolverParams) -> bool:
    """True when the masks differ on fewer than convergence_tol of all pixels."""
    prev = np.asarray(prev, dtype=bool)
    cur = np.asarray(cur, dtype=bool)
    if prev.shape != cur.shape:
        raise ParameterError(f"mask shapes differ: {prev.shape} vs {cur.shape}")
    changed = int(np.logical_xor(prev, cur).sum())
    return changed / prev.size < params.convergence_tol


def run(img, phi0, params: SolverParams | None = None, on_iteration=None) -> SegmentationResult:
    """Evolve phi0 on img until the mask stalls or max_iters is reached.

    on_iteration, when given, is called as on_iteration(iteration, phi) after
    every completed iteration (snapshot hook for the CLI).
    """
    params = params if params is not None else SolverParams()
    cfl_check(params)
    img = np.asarray(img, dtype=np.float64)
    phi = as_field(phi0, "phi0").copy()
    if img.shape != phi.shape:
        raise ParameterError(f"image {img.shape} and phi0 {phi.shape} dimensions differ")
    if not ((phi < 0).any() and (phi > 0).any()):
        raise DegenerateInputError("phi0 must change sign somewhere on the grid")

    reinit_dt = 0.5 * min(params.dx, params.dy) ** 2
    trace: list[EnergyRecord] = []
    prev_mask = phi < 0
    streak = 0
    iterations = 0
    for it in range(1, params.max_iters + 1):
        u, v = region_means(img, phi)
        try:
            phi = step(img, phi, u, v, params)
        except NumericalInstabilityError as exc:
            raise NumericalInstabilityError(f"iteration {it}: {exc}") from None
        trace.append(energy(img, phi, params))
        if params.reinit_every and it % params.reinit_every == 0:
            phi = sussman_reinit(
                phi, dt=reinit_dt, iterations=10,
                mode=params.boundary, dx=params.dx, dy=params.dy,
            )
        iterations = it
        if on_iteration is not None:
            on_iteration(it, phi)
        cur_mask = phi < 0
        streak = streak + 1 if converged(prev_mask, cur_mask, params) else 0
        prev_mask = cur_mask
        if streak >= params.convergence_window:
            break

    u, v = region_means(img, phi)
    return SegmentationResult(
        phi=phi,
        mask=phi < 0,
        contours=extract_contour(phi, params.dx, params.dy),
        trace=trace,
        iterations=iterations,
        u=u,
        v=v,
    )
