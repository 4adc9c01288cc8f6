"""Finite unions of closed intervals and integer step functions on the line.

Endpoints closer than :func:`merge_tolerance` are treated as equal, so touching
intervals overlap and rounding noise does not create sliver cells.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels

TOL_EXPONENT = -40


def merge_tolerance(values) -> float:
    """``2**-40 * max|endpoint|``; gaps below this are closed."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 0.0
    return 2.0 ** TOL_EXPONENT * float(np.max(np.abs(arr)))


def as_interval_array(intervals) -> np.ndarray:
    arr = np.asarray(intervals, dtype=float)
    if arr.size == 0:
        return np.empty((0, 2))
    arr = arr.reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise ValueError("interval endpoints must be finite")
    if np.any(arr[:, 0] > arr[:, 1]):
        raise ValueError("interval with left > right")
    return arr


def _sorted_union(arr, eps):
    order = np.argsort(arr[:, 0], kind="stable")
    lefts = np.ascontiguousarray(arr[order, 0])
    rights = np.ascontiguousarray(arr[order, 1])
    return kernels.merge_sorted(lefts, rights, eps)


def union_length(intervals, eps: float | None = None) -> float:
    arr = as_interval_array(intervals)
    if arr.shape[0] == 0:
        return 0.0
    if eps is None:
        eps = merge_tolerance(arr)
    lefts, rights = _sorted_union(arr, eps)
    return float(np.sum(rights - lefts))


@dataclass(frozen=True, eq=False)
class DisjointIntervalSet:
    """Sorted, pairwise-disjoint closed intervals stored as an ``(k, 2)`` array."""

    bounds: np.ndarray

    @classmethod
    def from_intervals(cls, intervals, eps: float | None = None) -> "DisjointIntervalSet":
        arr = as_interval_array(intervals)
        if arr.shape[0] == 0:
            return cls.empty()
        if eps is None:
            eps = merge_tolerance(arr)
        lefts, rights = _sorted_union(arr, eps)
        keep = rights > lefts
        return cls(np.column_stack([lefts[keep], rights[keep]]))

    @classmethod
    def empty(cls) -> "DisjointIntervalSet":
        return cls(np.empty((0, 2)))

    def __len__(self):
        return self.bounds.shape[0]

    def __iter__(self):
        return (tuple(row) for row in self.bounds.tolist())

    def __repr__(self):
        return f"DisjointIntervalSet({self.bounds.tolist()!r})"

    @property
    def length(self) -> float:
        return float(np.sum(self.bounds[:, 1] - self.bounds[:, 0]))

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        if len(self) == 0:
            return np.zeros(x.shape, dtype=bool)
        i = np.searchsorted(self.bounds[:, 0], x, side="right") - 1
        ok = i >= 0
        ic = np.clip(i, 0, None)
        return ok & (x <= self.bounds[ic, 1])

    def union(self, other: "DisjointIntervalSet") -> "DisjointIntervalSet":
        return DisjointIntervalSet.from_intervals(np.vstack([self.bounds, other.bounds]))

    def intersection(self, other: "DisjointIntervalSet") -> "DisjointIntervalSet":
        prof = multiplicity_profile(np.vstack([self.bounds, other.bounds]))
        return prof.superlevel_set(2)

    def clip(self, lo: float, hi: float) -> "DisjointIntervalSet":
        b = self.bounds
        l = np.maximum(b[:, 0], lo)
        r = np.minimum(b[:, 1], hi)
        keep = r > l
        return DisjointIntervalSet(np.column_stack([l[keep], r[keep]]))

    def scaled(self, factor: float) -> "DisjointIntervalSet":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return DisjointIntervalSet(self.bounds * factor)

    def issubset(self, other: "DisjointIntervalSet", tol: float = 0.0) -> bool:
        """Every interval of ``self`` lies inside one interval of ``other`` (up to ``tol``)."""
        if len(self) == 0:
            return True
        if len(other) == 0:
            return False
        ob = other.bounds
        i = np.searchsorted(ob[:, 0], self.bounds[:, 0] + tol, side="right") - 1
        if np.any(i < 0):
            return False
        return bool(np.all(self.bounds[:, 1] <= ob[i, 1] + tol))


@dataclass(frozen=True, eq=False)
class StepProfile:
    """Piecewise-constant integer function; ``counts[i]`` holds on ``(x_i, x_{i+1})``."""

    breakpoints: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        ct = np.asarray(self.counts, dtype=np.int64)
        if bp.size == 0 and ct.size == 0:
            bp = np.empty(0)
        elif bp.size != ct.size + 1:
            raise ValueError("need len(breakpoints) == len(counts) + 1")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "counts", ct)

    @classmethod
    def zero(cls) -> "StepProfile":
        return cls(np.empty(0), np.empty(0, dtype=np.int64))

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def max(self) -> int:
        return int(self.counts.max()) if self.counts.size else 0

    def __repr__(self):
        return f"StepProfile(cells={self.counts.size}, max={self.max})"

    def canonical(self) -> "StepProfile":
        """Merge equal neighbours and trim zero cells at both ends."""
        ct = self.counts
        bp = self.breakpoints
        if ct.size == 0:
            return self
        nz = np.flatnonzero(ct)
        if nz.size == 0:
            return StepProfile.zero()
        lo, hi = nz[0], nz[-1]
        ct = ct[lo:hi + 1]
        bp = bp[lo:hi + 2]
        change = np.empty(ct.size, dtype=bool)
        change[0] = True
        change[1:] = ct[1:] != ct[:-1]
        starts = np.flatnonzero(change)
        return StepProfile(np.append(bp[starts], bp[-1]), ct[starts])

    def value_at(self, x):
        """Value on the open cell containing ``x``; at a breakpoint, the cell to its right."""
        x = np.asarray(x, dtype=float)
        if self.counts.size == 0:
            return np.zeros(x.shape, dtype=np.int64)
        i = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (i >= 0) & (i < self.counts.size)
        return np.where(inside, self.counts[np.clip(i, 0, self.counts.size - 1)], 0)

    def left_value_at(self, x):
        x = np.asarray(x, dtype=float)
        if self.counts.size == 0:
            return np.zeros(x.shape, dtype=np.int64)
        i = np.searchsorted(self.breakpoints, x, side="left") - 1
        inside = (i >= 0) & (i < self.counts.size)
        return np.where(inside, self.counts[np.clip(i, 0, self.counts.size - 1)], 0)

    def moment(self, power: int) -> float:
        return float(np.sum(self.counts.astype(float) ** power * self.widths))

    def superlevel_measure(self, level: float) -> float:
        return float(np.sum(self.widths[self.counts >= level]))

    def superlevel_set(self, level: float) -> DisjointIntervalSet:
        if self.counts.size == 0:
            return DisjointIntervalSet.empty()
        sel = self.counts >= level
        cells = np.column_stack([self.breakpoints[:-1][sel], self.breakpoints[1:][sel]])
        # adjacent cells share endpoints exactly, so no tolerance is needed
        return DisjointIntervalSet.from_intervals(cells, eps=0.0)

    def cumulative(self):
        """Breakpoints and the running integral at each breakpoint."""
        G = np.concatenate([[0.0], np.cumsum(self.counts * self.widths)])
        return self.breakpoints, G


def _snap(coords, eps):
    """Cluster sorted-unique coordinates closer than ``eps``; returns (reps, inverse)."""
    uniq, inverse = np.unique(coords, return_inverse=True)
    if uniq.size == 0:
        return uniq, inverse
    new = np.empty(uniq.size, dtype=bool)
    new[0] = True
    new[1:] = np.diff(uniq) > eps
    cluster = np.cumsum(new) - 1
    reps = uniq[new]
    return reps, cluster[inverse]


def multiplicity_profile(intervals, eps: float | None = None) -> StepProfile:
    """Profile whose value at ``x`` is the number of intervals containing ``x``."""
    arr = as_interval_array(intervals)
    if arr.shape[0] == 0:
        return StepProfile.zero()
    if eps is None:
        eps = merge_tolerance(arr)
    coords = arr.ravel(order="F")  # all lefts, then all rights
    k = arr.shape[0]
    delta = np.concatenate([np.ones(k, dtype=np.int64), -np.ones(k, dtype=np.int64)])
    reps, ids = _snap(coords, eps)
    net = np.bincount(ids, weights=delta, minlength=reps.size).astype(np.int64)
    running = np.cumsum(net)
    return StepProfile(reps, running[:-1]).canonical()


def profile_moment(p: StepProfile, power: int) -> float:
    if power < 1:
        raise ValueError("power must be a positive integer")
    return p.moment(power)


def superlevel_measure(p: StepProfile, level: float) -> float:
    return p.superlevel_measure(level)


def pointwise_max(profiles: Sequence[StepProfile], eps: float | None = None) -> StepProfile:
    profiles = list(profiles)
    if not profiles:
        raise ValueError("need at least one profile")
    if len(profiles) == 1:
        return profiles[0].canonical()
    coords = np.concatenate([p.breakpoints for p in profiles])
    if coords.size == 0:
        return StepProfile.zero()
    if eps is None:
        eps = merge_tolerance(coords)
    reps, _ = _snap(coords, eps)
    if reps.size < 2:
        return StepProfile.zero()
    mids = 0.5 * (reps[:-1] + reps[1:])
    vals = np.zeros(mids.size, dtype=np.int64)
    for p in profiles:
        np.maximum(vals, p.value_at(mids), out=vals)
    return StepProfile(reps, vals).canonical()


def hl_maximal_at(p: StepProfile, y):
    """Central Hardy-Littlewood maximal function ``sup_r (1/2r) int_{y-r}^{y+r} p``.

    The window integral is piecewise linear in ``r`` with kinks at
    ``r = |y - b|`` for breakpoints ``b``, and the average is monotone between
    kinks, so the supremum is attained at a kink or in the limit ``r -> 0``.
    """
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    if p.counts.size == 0:
        out = np.zeros(ys.shape)
        return float(out[0]) if np.ndim(y) == 0 else out
    bp, G = p.cumulative()
    out = np.empty(ys.shape)
    for i, yy in enumerate(ys):
        r = np.abs(yy - bp)
        r = r[r > 0]
        best = 0.5 * (float(p.value_at(yy)) + float(p.left_value_at(yy)))
        if r.size:
            total = np.interp(yy + r, bp, G) - np.interp(yy - r, bp, G)
            best = max(best, float(np.max(total / (2.0 * r))))
        out[i] = best
    return float(out[0]) if np.ndim(y) == 0 else out
