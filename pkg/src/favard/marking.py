"""Multiplicity profiles F_0..F_N at a fixed angle and the square-marking procedure.

``F_n(x)`` counts generation-``n`` squares whose projection contains ``x``;
``F_*`` is the pointwise maximum over ``n <= N``.  Everything is evaluated on
the constancy cells of the common refinement of all ``F_n``, with the cell
midpoint as witness.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cantor import (DEFAULT_CONFIG, AngleParams, CantorConfig, Square,
                     check_generation, projection_intervals, square_coords)
from .intervals import (DisjointIntervalSet, StepProfile, _snap, merge_tolerance,
                        multiplicity_profile, pointwise_max)

SUBMULT_CONSTANT = 108


@dataclass(frozen=True)
class _Generation:
    n: int
    intervals: np.ndarray      # index order
    order: np.ndarray          # argsort by left endpoint
    sorted_lefts: np.ndarray
    sorted_rights: np.ndarray
    profile: StepProfile

    def containing(self, x: float) -> np.ndarray:
        """Indices (square order) of the squares whose projection contains ``x``."""
        lo = np.searchsorted(self.sorted_rights, x, side="left")
        hi = np.searchsorted(self.sorted_lefts, x, side="right")
        return self.order[lo:hi]


@dataclass(frozen=True, eq=False)
class MarkedFamily:
    gens: np.ndarray
    indices: np.ndarray
    K: int
    N: int
    max_per_witness: int
    config: CantorConfig = DEFAULT_CONFIG

    def __len__(self):
        return int(self.gens.size)

    @property
    def side_sum(self) -> float:
        return float(np.sum(float(self.config.base) ** -self.gens.astype(float)))

    @property
    def squares(self) -> list:
        out = []
        for g in np.unique(self.gens):
            ix, iy = square_coords(self.config, int(g))
            den = self.config.base ** int(g)
            for i in self.indices[self.gens == g]:
                out.append(Square(int(g), (Fraction(int(ix[i]), den), Fraction(int(iy[i]), den)),
                                  self.config.base))
        return out


@dataclass(frozen=True)
class SubmultiplicativityReport:
    theta: float
    N: int
    K: int
    M: int
    lhs: float
    rhs: float
    holds: bool
    best_constant: float   # lhs / (K mu{F*>=K} mu{F*>=M}); nan when undefined


class MultiplicityStack:
    """All multiplicity profiles of one rotated iterate, up to generation ``N``."""

    def __init__(self, a: AngleParams, N: int, config: CantorConfig = DEFAULT_CONFIG):
        check_generation(N)
        self.angle = a
        self.N = N
        self.config = config
        raw = [projection_intervals(config, n, a) for n in range(N + 1)]
        self.eps = merge_tolerance(np.concatenate([r.ravel() for r in raw]))
        self.generations = []
        for n, iv in enumerate(raw):
            order = np.argsort(iv[:, 0], kind="stable")
            self.generations.append(_Generation(
                n, iv, order, iv[order, 0], iv[order, 1],
                multiplicity_profile(iv, eps=self.eps)))
        self.profiles = [g.profile for g in self.generations]
        self.f_star = pointwise_max(self.profiles, eps=self.eps)
        coords = np.concatenate([p.breakpoints for p in self.profiles])
        cells, _ = _snap(coords, self.eps)
        self.cells = cells
        self.mids = 0.5 * (cells[:-1] + cells[1:])
        self.widths = np.diff(cells)
        self.values = np.vstack([p.value_at(self.mids) for p in self.profiles])

    def superlevel(self, level: float) -> float:
        return self.f_star.superlevel_measure(level)

    def submultiplicativity(self, K: int, M: int, tol: float = 1e-9) -> SubmultiplicativityReport:
        if K < 1 or M < 1:
            raise ValueError("K and M must be positive integers")
        lhs = self.superlevel(4 * K * M)
        muK = self.superlevel(K)
        muM = self.superlevel(M)
        rhs = SUBMULT_CONSTANT * K * muK * muM
        denom = K * muK * muM
        best = lhs / denom if denom > 0 else float("nan")
        return SubmultiplicativityReport(self.angle.theta, self.N, K, M, lhs, rhs,
                                         bool(lhs <= rhs + tol), best)

    def marks(self, threshold: int):
        """Per generation, a boolean mask of squares marked at ``threshold``.

        A witness ``x`` marks every square of the least generation ``n`` with
        ``F_n(x) >= threshold``.  Returns ``(masks, max squares marked by one witness)``.
        """
        reached = self.values >= threshold
        has = reached.any(axis=0)
        first = np.argmax(reached, axis=0)
        masks = []
        worst = 0
        for g in self.generations:
            x = self.mids[has & (first == g.n)]
            size = g.intervals.shape[0]
            if x.size == 0:
                masks.append(np.zeros(size, dtype=bool))
                continue
            lo = np.searchsorted(g.sorted_rights, x, side="left")
            hi = np.searchsorted(g.sorted_lefts, x, side="right")
            worst = max(worst, int(np.max(hi - lo)))
            diff = np.zeros(size + 1, dtype=np.int64)
            np.add.at(diff, lo, 1)
            np.add.at(diff, hi, -1)
            hit_sorted = np.cumsum(diff)[:-1] > 0
            mask = np.zeros(size, dtype=bool)
            mask[g.order] = hit_sorted
            masks.append(mask)
        return masks, worst

    def maximal_marked(self, K: int) -> MarkedFamily:
        if K < 1:
            raise ValueError("K must be a positive integer")
        masks, worst = self.marks(2 * K)
        k = self.config.n_children
        gens, idx = [], []
        above = np.zeros(1, dtype=bool)   # marked at this generation or an ancestor
        for n, mask in enumerate(masks):
            covered = np.repeat(above, k) if n else np.zeros(1, dtype=bool)
            keep = np.flatnonzero(mask & ~covered)
            gens.append(np.full(keep.size, n, dtype=np.int64))
            idx.append(keep)
            above = covered | mask
        return MarkedFamily(np.concatenate(gens), np.concatenate(idx), K, self.N, worst,
                            self.config)

    def side_sum_bound(self, family: MarkedFamily):
        """(side-length sum, 108 K mu{F* >= K}, holds)."""
        bound = SUBMULT_CONSTANT * family.K * self.superlevel(family.K)
        total = family.side_sum
        return total, bound, bool(total <= bound * (1 + 1e-12))

    def coverage_violations(self, family: MarkedFamily, M: int) -> int:
        """Cells with F* >= 4KM where no maximal marked square above the witness reaches M."""
        level = 4 * family.K * M
        fstar = self.values.max(axis=0)
        k = self.config.n_children
        members = {int(g): set(family.indices[family.gens == g].tolist())
                   for g in np.unique(family.gens)}
        bad = 0
        for x in self.mids[fstar >= level]:
            hits = [g.containing(x) for g in self.generations]
            ok = False
            for g, fam in members.items():
                for q in set(hits[g].tolist()) & fam:
                    best = max(int(np.sum(hits[m] // k ** (m - g) == q))
                               for m in range(g, self.N + 1))
                    if best >= M:
                        ok = True
                        break
                if ok:
                    break
            bad += not ok
        return bad

    def green_profile(self, threshold: int):
        """Profile of generation-N squares lying in squares marked at ``threshold``.

        Returns ``(profile, union of projections of all marked squares)``.
        """
        masks, _ = self.marks(threshold)
        k = self.config.n_children
        inside = np.zeros(1, dtype=bool)
        marked_iv = []
        for n, mask in enumerate(masks):
            inside = (np.repeat(inside, k) if n else inside) | mask
            marked_iv.append(self.generations[n].intervals[mask])
        green = self.generations[self.N].intervals[inside]
        xi = DisjointIntervalSet.from_intervals(np.vstack(marked_iv), eps=self.eps)
        return multiplicity_profile(green, eps=self.eps), xi


def maximal_marked_squares(a: AngleParams, N: int, K: int,
                           config: CantorConfig = DEFAULT_CONFIG) -> MarkedFamily:
    return MultiplicityStack(a, N, config).maximal_marked(K)


def submultiplicativity_report(a: AngleParams, N: int, K: int, M: int,
                               config: CantorConfig = DEFAULT_CONFIG,
                               tol: float = 1e-9) -> SubmultiplicativityReport:
    return MultiplicityStack(a, N, config).submultiplicativity(K, M, tol)
