"""Finite-size-scaling collapse of colourable-fraction curves.

Curves for different system sizes are rescaled with ``x = p * N**a`` and
compared in ``log x``. The collapse metric is, for each curve, the weighted
mean squared vertical distance from the piecewise-linear master curve built
out of all *other* curves, restricted to the x-range those other curves
cover; the per-curve values are then averaged. Weights are
``1 / max(h, h_floor)**2`` where ``h`` is the point's confidence half-width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

DEFAULT_H_FLOOR = 1e-3


class CollapseError(ValueError):
    """Curves cannot be compared (too few, or no overlapping rescaled range)."""


@dataclass(frozen=True)
class Curve:
    """One fraction-vs-p curve; ``x`` equals ``p`` until :func:`rescale` is applied."""

    label: str
    N: int
    x: np.ndarray
    y: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        h = np.zeros_like(x) if self.h is None else np.asarray(self.h, dtype=float)
        if not (x.shape == y.shape == h.shape) or x.ndim != 1:
            raise ValueError("x, y and h must be 1-D arrays of equal length")
        if self.N <= 0:
            raise ValueError("N must be positive")
        if np.any(np.diff(x) <= 0):
            raise ValueError(f"curve {self.label!r}: x must be strictly increasing")
        if np.any((y < 0) | (y > 1)):
            raise ValueError(f"curve {self.label!r}: fractions must lie in [0, 1]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "h", h)


def curves_from_rows(rows: Iterable, family: str) -> list[Curve]:
    """One curve per linear size for ``family`` from sweep summary rows.

    Rows with no decided trials (NaN fraction) are dropped.
    """
    by_L: dict[int, list] = {}
    for r in rows:
        if r.family == family and not math.isnan(r.fraction):
            by_L.setdefault(r.L, []).append(r)
    curves = []
    for L in sorted(by_L):
        pts = sorted(by_L[L], key=lambda r: r.p)
        curves.append(Curve(
            f"{family}:{L}", pts[0].N,
            np.array([r.p for r in pts]),
            np.array([r.fraction for r in pts]),
            np.array([(r.ci_hi - r.ci_lo) / 2 for r in pts]),
        ))
    return curves


def rescale(curve: Curve, a: float) -> Curve:
    """Curve with ``x -> x * N**a``; y values and point order unchanged."""
    return replace(curve, x=curve.x * float(curve.N) ** a)


def _log_points(c: Curve) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    keep = c.x > 0  # p = 0 has no place on a log axis
    return np.log(c.x[keep]), c.y[keep], c.h[keep]


def collapse_metric(curves: Sequence[Curve], a: float, h_floor: float = DEFAULT_H_FLOOR) -> float:
    """Collapse quality at exponent ``a``; 0 means the curves coincide on their overlap."""
    if len(curves) < 2:
        raise CollapseError("collapse needs at least two curves")
    pts = [_log_points(rescale(c, a)) for c in curves]
    per_curve = []
    for i, (lx, y, h) in enumerate(pts):
        others_x = np.concatenate([p[0] for j, p in enumerate(pts) if j != i])
        others_y = np.concatenate([p[1] for j, p in enumerate(pts) if j != i])
        if others_x.size == 0 or lx.size == 0:
            continue
        master_x, inverse = np.unique(others_x, return_inverse=True)
        master_y = np.bincount(inverse, weights=others_y) / np.bincount(inverse)
        inside = (lx >= master_x[0]) & (lx <= master_x[-1])
        if not inside.any():
            continue
        dev = y[inside] - np.interp(lx[inside], master_x, master_y)
        w = 1.0 / np.maximum(h[inside], h_floor) ** 2
        per_curve.append(float(np.sum(w * dev * dev) / np.sum(w)))
    if not per_curve:
        raise CollapseError(f"no overlapping rescaled range at a={a}")
    return float(np.mean(per_curve))


def exponent_grid(a_min: float, a_max: float, step: float) -> np.ndarray:
    if step <= 0 or a_max < a_min:
        raise ValueError("need step > 0 and a_max >= a_min")
    count = int(math.floor((a_max - a_min) / step + 1e-9)) + 1
    return np.round(a_min + step * np.arange(count), 12)


def metric_scan(curves: Sequence[Curve], grid: Sequence[float], h_floor: float = DEFAULT_H_FLOOR) -> np.ndarray:
    """Metric at every grid exponent; NaN where the curves do not overlap."""
    out = np.empty(len(grid))
    for i, a in enumerate(grid):
        try:
            out[i] = collapse_metric(curves, a, h_floor)
        except CollapseError:
            if len(curves) < 2:
                raise
            out[i] = np.nan
    return out


def _argbest(grid: np.ndarray, metrics: np.ndarray) -> int:
    if np.all(np.isnan(metrics)):
        raise CollapseError("curves do not overlap anywhere on the exponent grid")
    best = np.nanmin(metrics)
    ties = [i for i in range(len(grid)) if metrics[i] == best]
    return min(ties, key=lambda i: (abs(grid[i]), grid[i]))


def find_best_exponent(curves: Sequence[Curve], a_min: float = -3.0, a_max: float = 3.0,
                       step: float = 0.05, h_floor: float = DEFAULT_H_FLOOR) -> tuple[float, float]:
    """Grid-search the exponent minimising :func:`collapse_metric`.

    Ties go to the smaller ``|a|``.
    """
    grid = exponent_grid(a_min, a_max, step)
    metrics = metric_scan(curves, grid, h_floor)
    i = _argbest(grid, metrics)
    return float(grid[i]), float(metrics[i])


class CollapseFitter(TransformerMixin, BaseEstimator):
    """Fit the collapse exponent on a list of curves, then rescale curves with it.

    Attributes set by ``fit``: ``exponent_``, ``metric_``, ``grid_``,
    ``metrics_`` (the full scan, NaN where there is no overlap).
    """

    def __init__(self, a_min=-3.0, a_max=3.0, step=0.05, h_floor=DEFAULT_H_FLOOR):
        self.a_min = a_min
        self.a_max = a_max
        self.step = step
        self.h_floor = h_floor

    def fit(self, curves, y=None):
        curves = list(curves)
        if len(curves) < 2:
            raise CollapseError("collapse needs at least two curves")
        self.grid_ = exponent_grid(self.a_min, self.a_max, self.step)
        self.metrics_ = metric_scan(curves, self.grid_, self.h_floor)
        i = _argbest(self.grid_, self.metrics_)
        self.exponent_ = float(self.grid_[i])
        self.metric_ = float(self.metrics_[i])
        return self

    def transform(self, curves):
        if not hasattr(self, "exponent_"):
            raise NotFittedError("CollapseFitter is not fitted yet")
        return [rescale(c, self.exponent_) for c in curves]

    def score(self, curves, y=None):
        """Negative collapse metric at the fitted exponent (higher is better)."""
        if not hasattr(self, "exponent_"):
            raise NotFittedError("CollapseFitter is not fitted yet")
        return -collapse_metric(list(curves), self.exponent_, self.h_floor)
