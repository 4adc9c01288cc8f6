"""Favard length of K_n: per-angle projection lengths, angular quadrature,
Buffon-needle Monte Carlo and power-law fits.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .cantor import (DEFAULT_CONFIG, CantorConfig, check_generation,
                     reduce_angle)
from .intervals import TOL_EXPONENT
from .quadrature import composite_nodes

SQRT2 = math.sqrt(2.0)
CSV_HEADER = ("n", "fav", "err", "nodes")
MC_BATCH = 2 ** 16


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# projection lengths


def _digit_offsets(config, c, s, eps):
    dx, dy = config.child_digits()
    offs = np.sort((dx * c - dy * s) / config.base)
    keep = np.ones(offs.size, dtype=bool)
    keep[1:] = np.diff(offs) > eps
    return np.ascontiguousarray(offs[keep])


def projection_lengths(n_max: int, theta: float, config: CantorConfig = DEFAULT_CONFIG):
    """|Proj R_theta K_n| for n = 0..n_max, with a rounding/merge error bound for each.

    Uses Proj K_n = union over digits d of (pi(d) + Proj K_{n-1}) / base, so the
    4**n squares are never materialized; only the disjoint components are kept.
    """
    check_generation(n_max)
    r = reduce_angle(theta)
    c, s = math.cos(r), math.sin(r)
    lo, hi = min(0.0, c) + min(0.0, -s), max(0.0, c) + max(0.0, -s)
    eps = 2.0 ** TOL_EXPONENT * max(abs(lo), abs(hi))
    offsets = _digit_offsets(config, c, s, eps)
    lefts = np.array([lo])
    rights = np.array([hi])
    lengths = np.empty(n_max + 1)
    bounds = np.empty(n_max + 1)
    lengths[0] = hi - lo
    bounds[0] = eps
    k = config.n_children
    for n in range(1, n_max + 1):
        raw = offsets.size * lefts.size
        lefts, rights = kernels.replicate_union(lefts, rights, offsets, 1.0 / config.base, eps)
        lengths[n] = float(np.sum(rights - lefts))
        bounds[n] = k * bounds[n - 1] / config.base + raw * eps
    return lengths, bounds


def projection_length(n: int, theta: float, config: CantorConfig = DEFAULT_CONFIG) -> float:
    return float(projection_lengths(n, theta, config)[0][n])


# ---------------------------------------------------------------------------
# angular quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    rule: str = "gauss"
    nodes: int = 512
    refinement: str = "doubling"

    def __post_init__(self):
        if self.rule not in ("gauss", "midpoint"):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.refinement not in ("doubling", "none"):
            raise ValueError(f"unknown refinement {self.refinement!r}")
        if self.nodes < 8:
            raise ValueError("nodeCount must be at least 8")
        if self.rule == "gauss" and self.nodes % 8:
            raise ValueError("gauss rule needs a multiple of 8 nodes")


@dataclass(frozen=True)
class FavardEntry:
    n: int
    fav: float
    err: float
    nodes: int


@dataclass
class FavardCurve:
    entries: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def ns(self):
        return np.array([e.n for e in self.entries])

    @property
    def favs(self):
        return np.array([e.fav for e in self.entries])

    @property
    def errs(self):
        return np.array([e.err for e in self.entries])

    def to_csv(self, target=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(CSV_HEADER)
        for e in self.entries:
            w.writerow([e.n, fmt_float(e.fav), fmt_float(e.err), e.nodes])
        text = buf.getvalue()
        if target is not None:
            with open(target, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "FavardCurve":
        if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
            with open(source, newline="") as fh:
                text = fh.read()
        else:
            text = str(source)
        rows = list(csv.DictReader(io.StringIO(text)))
        if rows and set(CSV_HEADER) - set(rows[0]):
            raise ValueError(f"CSV must have columns {CSV_HEADER}")
        return cls([FavardEntry(int(r["n"]), float(r["fav"]), float(r["err"]), int(r["nodes"]))
                    for r in rows])


def _workers(threads):
    if threads == 0:
        return os.cpu_count() or 1
    return max(1, threads)


def _rule_estimate(n_max, rule, nodes, config, threads):
    thetas, weights = composite_nodes(0.0, math.pi / 4, nodes, rule)

    def one(theta):
        return projection_lengths(n_max, theta, config)

    workers = _workers(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, thetas))
    else:
        results = [one(th) for th in thetas]
    lengths = np.array([r[0] for r in results])
    bounds = np.array([r[1] for r in results])
    scale = 4.0 / math.pi
    return scale * (weights @ lengths), scale * (weights @ bounds)


def _favard_all(n_max, q, config, threads):
    check_generation(n_max)
    est, rounding = _rule_estimate(n_max, q.rule, q.nodes, config, threads)
    if q.refinement == "none":
        return est, rounding
    fine, fine_rounding = _rule_estimate(n_max, q.rule, 2 * q.nodes, config, threads)
    return fine, np.abs(fine - est) + np.maximum(rounding, fine_rounding)


def favard(n: int, q: QuadratureSpec = QuadratureSpec(), config: CantorConfig = DEFAULT_CONFIG,
           threads: int = 1):
    """``Fav(K_n) = (4/pi) int_0^{pi/4} |Proj R_theta K_n| dtheta`` as ``(estimate, err)``.

    With doubling refinement the estimate uses ``2 * nodes`` points and ``err``
    is its distance from the ``nodes``-point value plus the merge-tolerance bound.
    """
    est, err = _favard_all(n, q, config, threads)
    return float(est[n]), float(err[n])


def favard_curve(n_max: int, q: QuadratureSpec = QuadratureSpec(),
                 config: CantorConfig = DEFAULT_CONFIG, threads: int = 1) -> FavardCurve:
    est, err = _favard_all(n_max, q, config, threads)
    return FavardCurve([FavardEntry(n, float(est[n]), float(err[n]), q.nodes)
                        for n in range(n_max + 1)])


# ---------------------------------------------------------------------------
# Buffon needle


@dataclass(frozen=True)
class NeedleResult:
    n: int
    samples: int
    hits: int
    p_hat: float
    ci95: float
    seed: int

    @property
    def fav_estimate(self) -> float:
        return 2 * SQRT2 * self.p_hat


def needle_mc(n: int, samples: int, seed: int, config: CantorConfig = DEFAULT_CONFIG) -> NeedleResult:
    """Throw infinite needles: direction uniform on [0, pi), offset uniform on
    [-sqrt 2, sqrt 2] from the centre of the unit square.

    Sample ``i`` comes from batch ``i // 65536`` whose generator is seeded with
    ``(seed, batch)``, so results do not depend on how batches are scheduled.
    """
    check_generation(n)
    if samples < 1:
        raise ValueError("samples must be positive")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    dx, dy = config.child_digits()
    ox = (dx + 0.5) / config.base - 0.5
    oy = (dy + 0.5) / config.base - 0.5
    sides = float(config.base) ** -np.arange(n + 2, dtype=float)
    hits = 0
    for b in range(-(-samples // MC_BATCH)):
        rng = np.random.default_rng([seed, b])
        theta = rng.random(MC_BATCH) * math.pi
        offset = (2.0 * rng.random(MC_BATCH) - 1.0) * SQRT2
        take = min(MC_BATCH, samples - b * MC_BATCH)
        theta, offset = theta[:take], offset[:take]
        c, s = np.cos(theta), np.sin(theta)
        W = np.ascontiguousarray(c[:, None] * ox[None, :] - s[:, None] * oy[None, :])
        half0 = 0.5 * (np.abs(c) + np.abs(s))
        hits += int(kernels.leaf_counts(offset, np.zeros(take), W, half0, sides, n, True).sum())
    p = hits / samples
    return NeedleResult(n, samples, hits, p, 1.96 * math.sqrt(p * (1 - p) / samples), seed)


# ---------------------------------------------------------------------------
# fits and diagnostics


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual_rms: float
    n_range: tuple


def _pairs(curve):
    if isinstance(curve, FavardCurve):
        return [(e.n, e.fav) for e in curve.entries]
    return [(int(n), float(f)) for n, f in curve]


def fit_power_law(curve, n_from: int = 3, n_to: int | None = None) -> FitResult:
    """Least-squares line through ``(log n, log Fav)``; the slope is the decay exponent."""
    pts = [(n, f) for n, f in _pairs(curve) if n >= n_from and (n_to is None or n <= n_to)]
    if len(pts) < 3:
        raise ValueError("need at least 3 points in the fit range")
    ns = np.array([p[0] for p in pts], dtype=float)
    fs = np.array([p[1] for p in pts], dtype=float)
    if np.any(ns <= 0) or np.any(fs <= 0):
        raise ValueError("fit range must have positive n and positive values")
    x, y = np.log(ns), np.log(fs)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return FitResult(float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2))),
                     (int(ns.min()), int(ns.max())))


def log_star(x: float) -> int:
    k = 0
    while x > 1:
        x = math.log(x)
        k += 1
    return k


def bounds_report(curve: Iterable) -> list:
    """Per ``n >= 1``: ``n Fav`` (against c/n) and ``Fav n^(1/6)`` (against C n^(-1/6))."""
    rows = []
    for n, f in _pairs(curve):
        if n < 1:
            continue
        rows.append({"n": n, "fav": f, "n_fav": n * f, "fav_n_sixth": f * n ** (1 / 6),
                     "log_star": log_star(n), "exp_neg_log_star": math.exp(-log_star(n))})
    if not rows:
        raise ValueError("curve has no entries with n >= 1")
    return rows
