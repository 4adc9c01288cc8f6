"""Four-corner Cantor iterates K_n and their projections.

Squares live in true coordinates inside [0, 1]^2.  Generation ``n`` of the
default construction has 4**n squares of side 4**-n whose lower-left corners are
``sum_j (a_j, b_j) 4**-j`` with digits ``a_j, b_j`` in {0, 3}.

Rotation is counterclockwise by ``theta`` followed by projection to the
horizontal axis, i.e. ``(x, y) -> x cos(theta) - y sin(theta)``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import kernels
from .errors import CapacityError

DEFAULT_MAX_GEN = 12
STREAM_ABOVE_GEN = 10


def max_generation() -> int:
    """Generation cap; ``FAVARD_MAX_GEN`` overrides the default of 12."""
    raw = os.environ.get("FAVARD_MAX_GEN")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_GEN
    return int(raw)


def check_generation(n: int, cap: int | None = None) -> int:
    if n < 0:
        raise ValueError(f"generation must be nonnegative, got {n}")
    cap = max_generation() if cap is None else cap
    if n > cap:
        raise CapacityError(f"generation {n} exceeds cap {cap} (set FAVARD_MAX_GEN to raise it)")
    return n


@dataclass(frozen=True)
class CantorConfig:
    """Digit construction ``C_n``; the planar set is its Cartesian square."""

    base: int = 4
    digits: tuple = (0, 3)

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")
        digits = tuple(sorted(set(int(d) for d in self.digits)))
        if not digits:
            raise ValueError("digits must be nonempty")
        if digits[0] < 0 or digits[-1] >= self.base:
            raise ValueError(f"digits {digits} out of range for base {self.base}")
        object.__setattr__(self, "digits", digits)

    @property
    def n_children(self) -> int:
        return len(self.digits) ** 2

    def child_digits(self):
        """(dx, dy) digit arrays in child order: y digit major, x digit minor."""
        d = np.asarray(self.digits, dtype=np.int64)
        dy, dx = np.meshgrid(d, d, indexing="ij")
        return dx.ravel(), dy.ravel()


DEFAULT_CONFIG = CantorConfig()


@dataclass(frozen=True)
class Square:
    gen: int
    corner: tuple
    base: int = 4

    @property
    def side(self) -> Fraction:
        return Fraction(1, self.base ** self.gen)

    @property
    def center(self) -> tuple:
        h = self.side / 2
        return (self.corner[0] + h, self.corner[1] + h)

    def contains(self, other: "Square") -> bool:
        if other.gen < self.gen:
            return False
        s = self.side
        return (self.corner[0] <= other.corner[0] < self.corner[0] + s
                and self.corner[1] <= other.corner[1] < self.corner[1] + s)


def reduce_angle(theta: float) -> float:
    """Representative in [0, pi/4] with the same projection length.

    K_n is invariant under the symmetry group of the square, so the projection
    length is pi/2-periodic and even about pi/4.
    """
    r = math.fmod(theta, math.pi / 2)
    if r < 0:
        r += math.pi / 2
    if r > math.pi / 4:
        r = math.pi / 2 - r
    return r


@dataclass(frozen=True)
class AngleParams:
    """Angle with its slope parameter ``t``, scale ``rho`` and projected width ``sigma``.

    Any real ``theta`` is accepted for geometry; ``t`` and ``rho`` are taken at
    the reduced angle in [0, pi/4].
    """

    theta: float
    t: float = field(init=False)
    rho: float = field(init=False)
    sigma: float = field(init=False)

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise ValueError("theta must be finite")
        r = reduce_angle(theta)
        cr, sr = math.cos(r), math.sin(r)
        t = min(1.0, max(0.0, (cr - sr) / (cr + sr)))   # tan(pi/4 - r)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "rho", 8.0 / (3.0 * math.sqrt(2.0)) * (1.0 + t))
        object.__setattr__(self, "sigma", abs(math.cos(theta)) + abs(math.sin(theta)))

    @property
    def cos(self) -> float:
        return math.cos(self.theta)

    @property
    def sin(self) -> float:
        return math.sin(self.theta)

    @classmethod
    def from_t(cls, t: float) -> "AngleParams":
        return cls(math.pi / 4 - math.atan(t))


def square_coords(config: CantorConfig, n: int):
    """Integer corner coordinates ``(ix, iy)`` (units of base**-n), lexicographic order."""
    check_generation(n)
    dx, dy = config.child_digits()
    ix = np.zeros(1, dtype=np.int64)
    iy = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        ix = (config.base * ix[:, None] + dx[None, :]).ravel()
        iy = (config.base * iy[:, None] + dy[None, :]).ravel()
    return ix, iy


def build_squares(config: CantorConfig, n: int) -> list:
    ix, iy = square_coords(config, n)
    den = config.base ** n
    return [Square(n, (Fraction(int(a), den), Fraction(int(b), den)), config.base)
            for a, b in zip(ix, iy)]


def _extent(c, s):
    # min / max of eps_x * c - eps_y * s over the unit square's corners
    return min(0.0, c) + min(0.0, -s), max(0.0, c) + max(0.0, -s)


def project_square(sq: Square, a: AngleParams) -> tuple:
    c, s = a.cos, a.sin
    lo, hi = _extent(c, s)
    side = float(sq.side)
    base = float(sq.corner[0]) * c - float(sq.corner[1]) * s
    return base + side * lo, base + side * hi


def _intervals_from_coords(ix, iy, n, base, a):
    c, s = a.cos, a.sin
    lo, hi = _extent(c, s)
    side = float(base) ** -n
    core = ix * c - iy * s
    out = np.empty((ix.shape[0], 2))
    out[:, 0] = side * (core + lo)
    out[:, 1] = side * (core + hi)
    return out


def projection_intervals(config: CantorConfig, n: int, a: AngleParams) -> np.ndarray:
    """All |digits|**(2n) projected intervals, in square order, as an ``(k, 2)`` array."""
    ix, iy = square_coords(config, n)
    return _intervals_from_coords(ix, iy, n, config.base, a)


def iter_projection_intervals(config: CantorConfig, n: int, a: AngleParams,
                              block_gen: int = STREAM_ABOVE_GEN) -> Iterator[np.ndarray]:
    """Projected intervals in square order, in blocks of at most |children|**block_gen rows."""
    check_generation(n)
    if n <= block_gen:
        yield projection_intervals(config, n, a)
        return
    top = n - block_gen
    tx, ty = square_coords(config, top)
    bx, by = square_coords(config, block_gen)
    scale = config.base ** block_gen
    for px, py in zip(tx, ty):
        yield _intervals_from_coords(px * scale + bx, py * scale + by, n, config.base, a)


def normalized_centers(n: int, t: float) -> np.ndarray:
    """All sums ``sum_{k<n} 4**-k xi_k`` with ``xi_k`` in (-1, -t, t, 1), k=0 most significant."""
    check_generation(n)
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    choices = np.array([-1.0, -t, t, 1.0])
    sums = np.zeros(1)
    for k in range(n):
        sums = (sums[:, None] + choices[None, :] * 4.0 ** -k).ravel()
    return sums


def child_offsets(config: CantorConfig, a: AngleParams) -> np.ndarray:
    """Projected center offsets of the children relative to a unit parent."""
    dx, dy = config.child_digits()
    ox = (dx + 0.5) / config.base - 0.5
    oy = (dy + 0.5) / config.base - 0.5
    return ox * a.cos - oy * a.sin


def count_at_point(x, a: AngleParams, n: int, config: CantorConfig = DEFAULT_CONFIG):
    """F_n(x): number of generation-n squares whose projection contains ``x``.

    Pruned descent of the square tree; accepts a scalar or an array of points.
    """
    check_generation(n)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    S = xs.shape[0]
    w = child_offsets(config, a)
    offsets = np.ascontiguousarray(np.broadcast_to(w, (S, w.shape[0])))
    centers0 = np.full(S, 0.5 * a.cos - 0.5 * a.sin)
    half0 = np.full(S, 0.5 * a.sigma)
    sides = float(config.base) ** -np.arange(n + 2, dtype=float)
    counts = kernels.leaf_counts(xs, centers0, offsets, half0, sides, n, False)
    if np.ndim(x) == 0:
        return int(counts[0])
    return counts
