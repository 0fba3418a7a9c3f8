"""Overlap scores against ground truth and an intensity-threshold baseline."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParameterError


def _check_pair(a, b):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ParameterError(f"mask shapes differ: {a.shape} vs {b.shape}")
    return a, b


def dice(a, b) -> float:
    """2|A n B| / (|A| + |B|); two empty masks agree vacuously (1)."""
    a, b = _check_pair(a, b)
    total = int(a.sum()) + int(b.sum())
    if total == 0:
        return 1.0
    return 2.0 * int((a & b).sum()) / total


def iou(a, b) -> float:
    """|A n B| / |A u B|; two empty masks agree vacuously (1)."""
    a, b = _check_pair(a, b)
    union = int((a | b).sum())
    if union == 0:
        return 1.0
    return int((a & b).sum()) / union


def pixel_accuracy(a, b) -> float:
    a, b = _check_pair(a, b)
    return float((a == b).mean())


@dataclass
class MetricsReport:
    dice: float
    iou: float
    pixel_accuracy: float
    inside_count: int
    outside_count: int

    def to_dict(self) -> dict:
        return {
            "dice": self.dice,
            "iou": self.iou,
            "pixel_accuracy": self.pixel_accuracy,
            "inside_count": self.inside_count,
            "outside_count": self.outside_count,
        }


def evaluate(pred, truth) -> MetricsReport:
    """Score a predicted inside-mask against ground truth."""
    pred, truth = _check_pair(pred, truth)
    inside = int(pred.sum())
    return MetricsReport(
        dice=dice(pred, truth),
        iou=iou(pred, truth),
        pixel_accuracy=pixel_accuracy(pred, truth),
        inside_count=inside,
        outside_count=pred.size - inside,
    )


def otsu_threshold(img, bright_inside: bool = True) -> np.ndarray:
    """Histogram threshold maximizing between-class variance.

    Intensities in [0, 1] are quantized to 256 levels; the returned mask is
    {level > threshold} (flipped when bright_inside is False). Ties pick the
    lowest qualifying threshold.
    """
    img = np.asarray(img, dtype=np.float64)
    levels = np.clip(np.rint(img * 255.0), 0, 255).astype(np.intp)
    hist = np.bincount(levels.ravel(), minlength=256).astype(np.float64)
    if np.count_nonzero(hist) < 2:
        raise DegenerateInputError("image is constant after 256-level quantization")

    total = hist.sum()
    grays = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)                    # pixels at level <= t
    m0 = np.cumsum(hist * grays)            # intensity mass at level <= t
    w1 = total - w0
    mean_total = m0[-1]
    best_t = -1
    best_var = -1.0
    for t in range(255):
        if w0[t] == 0.0 or w1[t] == 0.0:
            continue
        mu0 = m0[t] / w0[t]
        mu1 = (mean_total - m0[t]) / w1[t]
        var = w0[t] * w1[t] * (mu0 - mu1) ** 2
        if var > best_var:
            best_var = var
            best_t = t
    mask = levels > best_t
    return mask if bright_inside else ~mask
