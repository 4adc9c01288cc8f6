import math
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from favard.cantor import (DEFAULT_CONFIG, AngleParams, CantorConfig, Square, build_squares,
                           check_generation, count_at_point, iter_projection_intervals,
                           normalized_centers, project_square, projection_intervals,
                           reduce_angle, square_coords)
from favard.errors import CapacityError


def test_generation_sizes():
    for n in range(4):
        sq = build_squares(DEFAULT_CONFIG, n)
        assert len(sq) == 4 ** n
        assert all(s.side == Fraction(1, 4 ** n) for s in sq)


def test_children_follow_parent_order():
    n = 3
    parents = build_squares(DEFAULT_CONFIG, n - 1)
    kids = build_squares(DEFAULT_CONFIG, n)
    for i, p in enumerate(parents):
        for j in range(4):
            assert p.contains(kids[4 * i + j])


def test_first_generation_corners():
    corners = {s.corner for s in build_squares(DEFAULT_CONFIG, 1)}
    q = Fraction(3, 4)
    assert corners == {(0, 0), (q, 0), (0, q), (q, q)}


def test_square_center_and_contains():
    s = Square(1, (Fraction(3, 4), Fraction(0)), 4)
    assert s.center == (Fraction(7, 8), Fraction(1, 8))
    assert not s.contains(Square(1, (Fraction(0), Fraction(0)), 4))


def test_config_validation():
    with pytest.raises(ValueError):
        CantorConfig(base=4, digits=(0, 4))
    with pytest.raises(ValueError):
        CantorConfig(base=1, digits=(0,))


def test_generation_cap(monkeypatch):
    with pytest.raises(CapacityError):
        check_generation(13)
    monkeypatch.setenv("FAVARD_MAX_GEN", "14")
    assert check_generation(13) == 13
    with pytest.raises(ValueError):
        check_generation(-1)


def test_reduce_angle_symmetries():
    for th in (0.1, 0.7, 1.3, 2.9, -0.4):
        r = reduce_angle(th)
        assert 0 <= r <= math.pi / 4 + 1e-15
        assert reduce_angle(th + math.pi / 2) == pytest.approx(r, abs=1e-12)
        assert reduce_angle(math.pi / 2 - th) == pytest.approx(r, abs=1e-12)


def test_angle_params():
    a = AngleParams(0.0)
    assert a.t == 1.0
    assert a.rho == pytest.approx(16 / (3 * math.sqrt(2)))
    b = AngleParams(math.pi / 4)
    assert b.t == pytest.approx(0.0, abs=1e-15)
    assert b.sigma == pytest.approx(math.sqrt(2))
    assert AngleParams.from_t(0.3).t == pytest.approx(0.3)
    with pytest.raises(ValueError):
        AngleParams(float("nan"))


@given(st.floats(0, math.pi, allow_nan=False), st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_projection_intervals_match_exact_squares(theta, n):
    a = AngleParams(theta)
    iv = projection_intervals(DEFAULT_CONFIG, n, a)
    exact = np.array([project_square(s, a) for s in build_squares(DEFAULT_CONFIG, n)])
    np.testing.assert_allclose(iv, exact, atol=1e-14)
    np.testing.assert_allclose(iv[:, 1] - iv[:, 0], a.sigma * 4.0 ** -n, rtol=1e-12)


def test_streamed_blocks_concatenate():
    a = AngleParams(0.37)
    whole = projection_intervals(DEFAULT_CONFIG, 5, a)
    blocks = list(iter_projection_intervals(DEFAULT_CONFIG, 5, a, block_gen=3))
    assert len(blocks) == 16
    np.testing.assert_array_equal(np.vstack(blocks), whole)


@pytest.mark.parametrize("theta", [0.05, 0.3, 0.61, math.pi / 4])
def test_normalized_centers_scale_to_projected_centers(theta):
    n = 4
    a = AngleParams(theta)
    iv = projection_intervals(DEFAULT_CONFIG, n, a)
    mid = 0.5 * (a.cos - a.sin)   # projection of (1/2, 1/2)
    true = np.sort(0.5 * (iv[:, 0] + iv[:, 1]) - mid)
    scale = 3 * math.sqrt(2) / 8 * math.cos(math.pi / 4 - theta)
    np.testing.assert_allclose(np.sort(scale * normalized_centers(n, a.t)), true, atol=1e-13)


def test_normalized_centers_rejects_bad_t():
    with pytest.raises(ValueError):
        normalized_centers(2, 1.5)


@pytest.mark.parametrize("theta", [0.0, 0.2, 0.785])
def test_count_at_point_matches_brute_force(theta):
    a = AngleParams(theta)
    n = 4
    iv = projection_intervals(DEFAULT_CONFIG, n, a)
    xs = np.random.default_rng(3).uniform(iv.min() - 0.05, iv.max() + 0.05, 500)
    brute = ((iv[None, :, 0] <= xs[:, None]) & (xs[:, None] <= iv[None, :, 1])).sum(axis=1)
    np.testing.assert_array_equal(count_at_point(xs, a, n), brute)


def test_square_coords_digits():
    ix, iy = square_coords(DEFAULT_CONFIG, 2)
    assert set(ix.tolist()) == {0, 3, 12, 15}
    assert (ix[:4].tolist(), iy[:4].tolist()) == ([0, 3, 0, 3], [0, 0, 3, 3])
