"""Fourier side: products of cosines, Riesz products, kernels and gauge sets.

Convention: ``nu_hat(y) = int exp(-i y x) d nu(x)``, so Plancherel carries a
``1 / (2 pi)``.  All products here are real.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError
from .intervals import DisjointIntervalSet
from .quadrature import oscillatory_integral

SPECTRUM_CAP = 7
ELL_CAP = 24


# ---------------------------------------------------------------------------
# cosine products

def _half_sum_product(t, powers, y):
    y = np.asarray(y, dtype=float)
    out = np.ones(y.shape)
    for p in powers:
        out = out * (0.5 * (np.cos(p * y) + np.cos(p * t * y)))
    return out


def nu_hat(t, N, y):
    """``prod_{k<N} (cos 4^-k y + cos 4^-k t y) / 2``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return _half_sum_product(t, [4.0 ** -k for k in range(N)], y)


def p1(t, m, y):
    return _half_sum_product(t, [4.0 ** k for k in range(m + 1)], y)


def p2(t, m, n, y):
    if m > n:
        raise ValueError("need m <= n")
    return _half_sum_product(t, [4.0 ** k for k in range(m + 1, n + 1)], y)


def sine_floor(t, m, y):
    y = np.asarray(y, dtype=float)
    s = 4.0 ** m
    return np.abs(np.sin(s * (y + t * y))) * np.abs(np.sin(s * (y - t * y))) / s ** 2


def product_sine_identity_residual(m, u):
    """``|2 4^m sin(u/2) prod_{l=0}^{2m} cos(2^(l-1) u) - sin(4^m u)|``."""
    u = np.asarray(u, dtype=float)
    lhs = 2.0 * 4.0 ** m * np.sin(0.5 * u)
    for l in range(2 * m + 1):
        lhs = lhs * np.cos(2.0 ** (l - 1) * u)
    return np.abs(lhs - np.sin(4.0 ** m * u))


# ---------------------------------------------------------------------------
# spectrum

@dataclass(frozen=True)
class SpectralConfig:
    t: float
    m: int
    n: int

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("t must lie in [0, 1]")
        if self.m < 0 or self.n < self.m:
            raise ValueError("need 0 <= m <= n")
        if self.n - self.m > SPECTRUM_CAP:
            raise CapacityError(f"n - m = {self.n - self.m} exceeds spectrum cap {SPECTRUM_CAP}")

    @property
    def L(self) -> int:
        return 4 ** self.m

    @property
    def M(self) -> int:
        return 4 ** (self.n - self.m)


@dataclass(frozen=True, eq=False)
class Spectrum:
    lambdas: np.ndarray

    def __len__(self):
        return self.lambdas.size


def spectrum_sums(t, m, n) -> Spectrum:
    """All ``4^(n-m)`` sums picking one of ``-4^k, -4^k t, 4^k t, 4^k`` per ``k`` in [m+1, n]."""
    SpectralConfig(t, m, n)
    sums = np.zeros(1)
    for k in range(m + 1, n + 1):
        step = np.array([-1.0, -t, t, 1.0]) * 4.0 ** k
        sums = (sums[:, None] + step[None, :]).ravel()
    return Spectrum(sums)


@dataclass(frozen=True, eq=False)
class IndexPartition:
    good: np.ndarray
    bad: np.ndarray
    crowding: np.ndarray   # C * sum_j L / (L^2 + (lam_j - lam_k)^2), j = k included


def good_indices(s, L, C) -> IndexPartition:
    if L <= 0 or C <= 0:
        raise ValueError("L and C must be positive")
    lams = np.ascontiguousarray(getattr(s, "lambdas", s), dtype=float)
    if lams.size > 4 ** SPECTRUM_CAP:
        raise CapacityError("spectrum larger than the cap")
    crowd = C * kernels.crowding_sums(lams, float(L))
    ok = crowd <= 0.125
    return IndexPartition(np.flatnonzero(ok), np.flatnonzero(~ok), crowd)


# ---------------------------------------------------------------------------
# kernels

def h_hat(lam):
    """``2 (1 - cos lam) / lam^2``, the transform of the unit triangle."""
    lam = np.asarray(lam, dtype=float)
    return np.sinc(lam / (2 * np.pi)) ** 2


def triangle_g(L, y):
    if L < 4:
        raise ValueError("L must be at least 4")
    a = np.abs(np.asarray(y, dtype=float))
    return (np.maximum(1 - a, 0)
            - 2 * (1 - 1 / L) * np.maximum(1 - 0.5 * L * a, 0)
            + (1 - 2 / L) * np.maximum(1 - L * a, 0))


def g_hat(L, lam):
    lam = np.asarray(lam, dtype=float)
    return (h_hat(lam)
            - 2 * (1 - 1 / L) * (2 / L) * h_hat(2 * lam / L)
            + (1 - 2 / L) * (1 / L) * h_hat(lam / L))


def g_hat_min_ratio(L, grid):
    """``min ghat(lam) (lam^2 + L^2) / L`` over ``grid``: an empirical ``-C``."""
    lam = np.asarray(grid, dtype=float)
    return float(np.min(g_hat(L, lam) * (lam ** 2 + L ** 2) / L))


# ---------------------------------------------------------------------------
# Riesz products

def riesz(m, n, u):
    """``prod_{k=m+1}^{n} (1 + cos 4^k u)``; period ``pi 4^-m``."""
    if m > n:
        raise ValueError("need m <= n")
    u = np.asarray(u, dtype=float)
    out = np.ones(u.shape)
    for k in range(m + 1, n + 1):
        out = out * (1.0 + np.cos(4.0 ** k * u))
    return out


def riesz_cos_squared(m, n, u):
    """``prod cos^2(4^k u / 2)``, equal to ``2^(m-n) R(u)``."""
    u = np.asarray(u, dtype=float)
    out = np.ones(u.shape)
    for k in range(m + 1, n + 1):
        out = out * np.cos(0.5 * 4.0 ** k * u) ** 2
    return out


def _riesz_freq(m, n):
    return float(sum(4.0 ** k for k in range(m + 1, n + 1))) or 1.0


def riesz_interval_integral(m, n, J, tol=1e-10) -> float:
    """``int_J R`` by doubling Gauss quadrature; raises ToleranceNotReached on budget."""
    a, b = float(J[0]), float(J[1])
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("interval must be bounded")
    value, _ = oscillatory_integral(lambda u: riesz(m, n, u), a, b, _riesz_freq(m, n), tol)
    return value


def riesz_gauge_integral(m, n, delta, tol=1e-9, weighted=False) -> float:
    """``int over I_delta cap [4^-m, 1]`` of ``R(u)`` (or ``R(u)/u`` when weighted)."""
    pieces = i_delta(m, delta, 4.0 ** -m, 1.0)
    if len(pieces) == 0:
        return 0.0
    share = tol / len(pieces)
    freq = _riesz_freq(m, n)
    if weighted:
        f = lambda u: riesz(m, n, u) / u
    else:
        f = lambda u: riesz(m, n, u)
    return float(sum(oscillatory_integral(f, lo, hi, freq, share)[0] for lo, hi in pieces))


def p2_l2_mass(t, m, n, tol=1e-8) -> float:
    """``int_{4^-m}^{1} |P2(y)|^2 dy``."""
    SpectralConfig(t, m, n)
    freq = 2 * _riesz_freq(m, n)
    value, _ = oscillatory_integral(lambda y: p2(t, m, n, y) ** 2, 4.0 ** -m, 1.0, freq, tol)
    return value


def fourier_energy(t, n, rho, tol=1e-7, floor=1e-6) -> float:
    """``(1/2pi) int |f_n^(y)|^2 dy`` from ``nu_hat`` and the box transform.

    ``f_n`` is ``nu^(n)`` convolved with the box of length ``rho 4^-n`` and
    height ``4^n / rho``.  After ``y = 4^n z`` the box transform is
    ``sinc(rho z / 2)``; the range is cut where its square falls below ``floor``.
    """
    z_max = 2.0 / (rho * math.sqrt(floor))
    scale = 4.0 ** n

    def integrand(z):
        box = np.sinc(rho * z / (2 * np.pi))
        return (nu_hat(t, n, scale * z) * box) ** 2

    freq = 2 * sum(4.0 ** k for k in range(1, n + 1)) + rho
    value, _ = oscillatory_integral(integrand, 0.0, z_max, freq, tol * math.pi / scale)
    return scale / math.pi * value


# ---------------------------------------------------------------------------
# gauge sets

@dataclass(frozen=True)
class GaugeSetSpec:
    m: int
    delta: float = 1.0
    eta: float = 1.0
    ell: int = 0
    range: tuple = field(default=None)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        for name in ("delta", "eta"):
            v = float(getattr(self, name))
            if not v > 0:
                raise ValueError(f"{name} must be positive")
            if v > 1:
                warnings.warn(f"{name}={v} clamped to 1", stacklevel=3)
                v = 1.0
            object.__setattr__(self, name, v)
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")
        if self.ell > ELL_CAP:
            raise CapacityError(f"ell {self.ell} exceeds cap {ELL_CAP}")
        if self.range is None:
            object.__setattr__(self, "range", (4.0 ** -self.m, 1.0))


def i_delta(m, delta, lo, hi, width=1.0) -> DisjointIntervalSet:
    """Intervals of length ``width * 4^-m delta`` centred at ``pi j / 4^m``, clipped to [lo, hi].

    ``width`` is 1 for the plain gauge sets.
    """
    r = 0.5 * width * delta * 4.0 ** -m
    step = math.pi * 4.0 ** -m
    j = np.arange(math.floor((lo - r) / step), math.ceil((hi + r) / step) + 1)
    c = step * j
    return DisjointIntervalSet.from_intervals(np.column_stack([c - r, c + r])).clip(lo, hi)


def _preimage(factor, m, delta, lo, hi, width):
    """``{y in [lo, hi] : factor * y in I_delta}``."""
    if factor <= 0:
        # factor * y == 0 is a centre of I_delta
        return DisjointIntervalSet(np.array([[lo, hi]]))
    base = i_delta(m, delta, factor * lo, factor * hi, width)
    return base.scaled(1.0 / factor)


def omega_or(t, m, delta, lo, hi, width=1.0) -> DisjointIntervalSet:
    return _preimage(1 + t, m, delta, lo, hi, width).union(
        _preimage(1 - t, m, delta, lo, hi, width))


def omega_and(t, m, delta, eta, lo, hi, width=1.0) -> DisjointIntervalSet:
    return _preimage(1 + t, m, delta, lo, hi, width).intersection(
        _preimage(1 - t, m, eta, lo, hi, width))


def omega_ell(t, m, ell, lo, hi, width=1.0) -> DisjointIntervalSet:
    """``union_{k=0}^{ell} Omega(t; 2^-k, 2^(-ell+k+1))``, the second parameter capped at 1."""
    if ell > ELL_CAP:
        raise CapacityError(f"ell {ell} exceeds cap {ELL_CAP}")
    out = DisjointIntervalSet.empty()
    for k in range(ell + 1):
        piece = omega_and(t, m, 2.0 ** -k, min(1.0, 2.0 ** (k + 1 - ell)), lo, hi, width)
        out = out.union(piece)
    return out


GAUGE_VARIANTS = ("i_delta", "omega_or", "omega_and", "omega_ell")


def gauge_sets(spec: GaugeSetSpec, t: float, variant: str) -> DisjointIntervalSet:
    lo, hi = spec.range
    if variant == "i_delta":
        return i_delta(spec.m, spec.delta, lo, hi)
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if variant == "omega_or":
        return omega_or(t, spec.m, spec.delta, lo, hi)
    if variant == "omega_and":
        return omega_and(t, spec.m, spec.delta, spec.eta, lo, hi)
    if variant == "omega_ell":
        return omega_ell(t, spec.m, spec.ell, lo, hi)
    raise ValueError(f"unknown gauge variant {variant!r}; expected one of {GAUGE_VARIANTS}")
