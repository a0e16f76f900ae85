"""Choropleth classification: optimal natural breaks and quantile breaks.

Natural breaks use Fisher's exact dynamic program over sorted values,
O(k*n^2) with numpy, minimizing total within-class sum of squared
deviations. Cost-tied partitions resolve to the lexicographically
smallest boundary-index vector, so results are reproducible across runs
and platforms.
"""
from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BreakCountError

METHOD_NATURAL_BREAKS = "natural_breaks"
METHOD_QUANTILE = "quantile"

_DEFAULT_LABELS = {
    1: ("All",),
    2: ("Low", "High"),
    3: ("Low", "Medium", "High"),
    4: ("Low", "Medium", "High", "Very High"),
    5: ("Very Low", "Low", "Medium", "High", "Very High"),
}


def default_labels(k: int) -> tuple[str, ...]:
    if k in _DEFAULT_LABELS:
        return _DEFAULT_LABELS[k]
    return tuple(f"Class {i + 1}" for i in range(k))


@dataclass(frozen=True)
class BreakSet:
    method: str
    k: int
    breaks: tuple[float, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.method not in (METHOD_NATURAL_BREAKS, METHOD_QUANTILE):
            raise ValueError(f"unknown classification method {self.method!r}")
        if self.k < 1:
            raise ValueError("class count must be at least 1")
        if len(self.breaks) != self.k - 1:
            raise ValueError(f"expected {self.k - 1} breaks, got {len(self.breaks)}")
        if len(self.labels) != self.k:
            raise ValueError(f"expected {self.k} labels, got {len(self.labels)}")
        for lo, hi in zip(self.breaks, self.breaks[1:]):
            if not lo < hi:
                raise ValueError("breaks must be strictly ascending")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "k": self.k,
            "breaks": list(self.breaks),
            "labels": list(self.labels),
        }


def _check_values(values: Sequence[float]) -> list[float]:
    vals = [float(v) for v in values]
    if not vals:
        raise BreakCountError("cannot classify an empty value list", distinct=0)
    if any(not math.isfinite(v) for v in vals):
        raise ValueError("classification values must be finite")
    return vals


def optimal_partition(values: Sequence[float], k: int) -> tuple[tuple[int, ...], float]:
    """Optimal k-way contiguous partition of the sorted values.

    Returns (bounds, cost): bounds has k+1 boundary indices starting at 0
    and ending at n (class i covers sorted[bounds[i]:bounds[i+1]]); cost is
    the total within-class sum of squared deviations. Among partitions with
    exactly equal cost, the lexicographically smallest bounds vector wins.
    """
    vals = sorted(_check_values(values))
    n = len(vals)
    distinct = len(set(vals))
    if k < 1:
        raise BreakCountError(f"class count must be at least 1, got {k}", distinct=distinct)
    if k > distinct:
        raise BreakCountError(
            f"cannot form {k} classes from {distinct} distinct values; lower the class count",
            distinct=distinct,
        )

    arr = np.asarray(vals, dtype=np.float64)
    s = np.concatenate(([0.0], np.cumsum(arr)))
    ssq = np.concatenate(([0.0], np.cumsum(arr * arr)))
    idx = np.arange(n + 1, dtype=np.float64)
    span = idx[np.newaxis, :] - idx[:, np.newaxis]
    diff = s[np.newaxis, :] - s[:, np.newaxis]
    with np.errstate(divide="ignore", invalid="ignore"):
        ssd = (ssq[np.newaxis, :] - ssq[np.newaxis, :].T) - diff * diff / span
    ssd[span <= 0] = np.inf  # only a < e is a valid class [a, e)

    # suffix[j][a] = minimal cost of splitting sorted[a:] into j classes
    suffix = [np.full(n + 1, np.inf)]
    suffix[0][n] = 0.0
    for _ in range(k):
        prev = suffix[-1]
        suffix.append(np.min(ssd + prev[np.newaxis, :], axis=1))
    cost = float(suffix[k][0])

    # Walk forward, always taking the smallest boundary that attains the
    # recorded minimum. Recomputing the identical vectorized expression
    # reproduces the exact floats np.min saw, so == is safe here.
    bounds = [0]
    a = 0
    for j in range(k, 0, -1):
        row = ssd[a] + suffix[j - 1]
        matches = np.flatnonzero(row == suffix[j][a])
        a = int(matches[0])
        bounds.append(a)
    return tuple(bounds), cost


def jenks_breaks(values: Sequence[float], k: int) -> BreakSet:
    """Natural-breaks classification (exact optimal 1-D partitioning).

    Breaks are the class maxima of classes 1..k-1 on the sorted values.
    Raises BreakCountError when k exceeds the number of distinct values.
    """
    bounds, _ = optimal_partition(values, k)
    vals = sorted(float(v) for v in values)
    breaks = tuple(vals[b - 1] for b in bounds[1:-1])
    return BreakSet(
        method=METHOD_NATURAL_BREAKS, k=k, breaks=breaks, labels=default_labels(k)
    )


def quantile_breaks(values: Sequence[float], k: int) -> BreakSet:
    """Quantile classification: break j is the ceil(j*n/k)-th order statistic.

    Duplicate thresholds collapse (with a warning), leaving fewer effective
    classes; the returned BreakSet reflects the effective count.
    """
    vals = sorted(_check_values(values))
    if k < 1:
        raise BreakCountError(
            f"class count must be at least 1, got {k}", distinct=len(set(vals))
        )
    n = len(vals)
    raw = [vals[-(-j * n // k) - 1] for j in range(1, k)]
    breaks: list[float] = []
    for b in raw:
        if not breaks or b > breaks[-1]:
            breaks.append(b)
    if len(breaks) < len(raw):
        warnings.warn(
            f"quantile thresholds collapsed: {k} classes requested, "
            f"{len(breaks) + 1} effective",
            stacklevel=2,
        )
    effective_k = len(breaks) + 1
    return BreakSet(
        method=METHOD_QUANTILE,
        k=effective_k,
        breaks=tuple(breaks),
        labels=default_labels(effective_k),
    )


def assign_class(value: float, break_set: BreakSet) -> int:
    """Class index for a value: upper-inclusive intervals (-inf, b1], (b1, b2], ..."""
    return bisect.bisect_left(break_set.breaks, value)


@dataclass(frozen=True)
class ClassifiedSurface:
    """Zone burdens joined with a break set and the resulting class indices."""

    burdens: tuple  # of burden.ZoneBurden, in ascending zone-id order
    break_set: BreakSet
    class_indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.burdens) != len(self.class_indices):
            raise ValueError("one class index per zone burden required")
        for b, ci in zip(self.burdens, self.class_indices):
            if ci != assign_class(b.cpb, self.break_set):
                raise ValueError(f"class index for zone {b.zone_id} is inconsistent")

    @classmethod
    def from_burdens(cls, burdens, break_set: BreakSet) -> "ClassifiedSurface":
        indices = tuple(assign_class(b.cpb, break_set) for b in burdens)
        return cls(burdens=tuple(burdens), break_set=break_set, class_indices=indices)
