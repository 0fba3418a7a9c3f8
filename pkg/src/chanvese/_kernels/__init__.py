"""Kernel backend selection.

The hot per-pixel loops exist twice: a compiled Cython extension (_fast) and
a numpy fallback (pure). The compiled one is used when importable; set
CHANVESE_KERNELS=pure to force the fallback, or CHANVESE_KERNELS=cython to
fail loudly if the extension is missing.
"""
import os

from . import pure

try:
    from . import _fast as fast
except ImportError:
    fast = None

_requested = os.environ.get("CHANVESE_KERNELS", "").strip().lower()
if _requested == "cython" and fast is None:
    raise ImportError(
        "CHANVESE_KERNELS=cython but the compiled extension is not built; "
        "run 'pip install -e . --no-build-isolation' or drop the variable"
    )

if _requested == "pure" or fast is None:
    _impl = pure
else:
    _impl = fast

BACKEND = _impl.NAME

upwind_norm = _impl.upwind_norm
grad_norm = _impl.grad_norm
curvature = _impl.curvature
sussman_sweep = _impl.sussman_sweep


def available_backends():
    """Importable backend modules keyed by name."""
    out = {"pure": pure}
    if fast is not None:
        out["cython"] = fast
    return out
