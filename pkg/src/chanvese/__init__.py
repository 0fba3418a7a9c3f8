"""Region-based active-contour segmentation with a level-set solver.

The public surface re-exports the grid stencils, level-set operators, the
evolution loop, overlap metrics, and image I/O. Hot per-pixel kernels run on
a compiled extension when available; kernel_backend() reports which one is
active (see chanvese._kernels).
"""
from . import _kernels
from .errors import (
    DegenerateInputError,
    FormatError,
    NumericalInstabilityError,
    ParameterError,
)
from .grid import (
    BoundaryMode,
    central_dx,
    central_dy,
    mixed_dxy,
    one_sided_diffs,
    second_dxx,
    second_dyy,
)
from .image_io import (
    gaussian_smooth,
    load_image,
    load_mask,
    normalize,
    save_mask,
    save_overlay,
)
from .levelset import (
    ContourSet,
    contour_length,
    curvature,
    extract_contour,
    sdf_circle,
    sdf_from_mask,
    sussman_reinit,
    upwind_norm,
)
from .metrics import MetricsReport, dice, evaluate, iou, otsu_threshold, pixel_accuracy
from .solver import (
    EnergyRecord,
    SegmentationResult,
    SolverParams,
    cfl_check,
    converged,
    energy,
    region_means,
    run,
    step,
)

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Name of the active kernel backend: 'cython' or 'pure'."""
    return _kernels.BACKEND
