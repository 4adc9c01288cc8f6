import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from favard import spectral as sp
from favard.cantor import normalized_centers
from favard.errors import CapacityError, ToleranceNotReached
from favard.quadrature import composite_nodes, oscillatory_integral


def riesz_integral_exact(m, n, a, b):
    """Expand the product into 3^(n-m) exponentials and integrate term by term."""
    freqs = [4 ** k for k in range(m + 1, n + 1)]
    total = 0.0
    for eps in itertools.product((-1, 0, 1), repeat=len(freqs)):
        f = sum(e * q for e, q in zip(eps, freqs))
        w = 0.5 ** sum(e != 0 for e in eps)
        total += w * ((b - a) if f == 0 else (math.sin(f * b) - math.sin(f * a)) / f)
    return total


@given(st.floats(0, 1), st.integers(0, 5), st.floats(-50, 50))
@settings(max_examples=60, deadline=None)
def test_nu_hat_is_characteristic_function_of_centers(t, N, y):
    c = normalized_centers(N, t)
    assert float(sp.nu_hat(t, N, y)) == pytest.approx(np.mean(np.cos(y * c)), abs=1e-12)


def test_nu_hat_at_zero_and_validation():
    assert float(sp.nu_hat(0.4, 7, 0.0)) == 1.0
    with pytest.raises(ValueError):
        sp.nu_hat(0.4, -1, 1.0)


@given(st.floats(0, 1), st.integers(0, 3), st.integers(0, 3), st.floats(-3, 3))
@settings(max_examples=60, deadline=None)
def test_p1_p2_split(t, m, extra, y):
    n = m + extra
    whole = sp.nu_hat(t, n + 1, 4.0 ** n * y)
    assert float(sp.p1(t, m, y) * sp.p2(t, m, n, y)) == pytest.approx(float(whole), abs=1e-12)


def test_p2_requires_order():
    with pytest.raises(ValueError):
        sp.p2(0.5, 3, 2, 0.1)


def test_sine_identity_residual_small():
    u = np.linspace(-4, 4, 2001)
    for m in range(7):
        assert sp.product_sine_identity_residual(m, u).max() < 1e-10


def test_kernel_values():
    assert float(sp.h_hat(math.pi)) == pytest.approx(4 / math.pi ** 2)
    assert float(sp.h_hat(0.0)) == 1.0
    L = 16
    x = np.unique(np.concatenate([np.linspace(-1, 1, 4001), [-1 / L, 1 / L, -2 / L, 2 / L]]))
    g = sp.triangle_g(L, x)
    integral = np.trapezoid(g, x) if hasattr(np, "trapezoid") else np.trapz(g, x)
    assert integral == pytest.approx(0.8203125, abs=1e-12)
    assert float(sp.g_hat(L, 0.0)) == pytest.approx(0.8203125, abs=1e-12)
    with pytest.raises(ValueError):
        sp.triangle_g(2, 0.0)


@pytest.mark.parametrize("lam", [0.5, 3.0, 17.0, 60.0])
def test_g_hat_is_fourier_transform(lam):
    L = 8
    xs, ws = composite_nodes(0.0, 1.0, 8 * 4096)
    # g is even, so the transform is 2 int_0^1 g cos
    numeric = 2 * float(np.dot(ws, sp.triangle_g(L, xs) * np.cos(lam * xs)))
    assert float(sp.g_hat(L, lam)) == pytest.approx(numeric, abs=1e-6)


def test_g_hat_min_ratio_finite():
    assert math.isfinite(sp.g_hat_min_ratio(16, np.linspace(0, 500, 5001)))


def test_spectrum_and_good_indices():
    s = sp.spectrum_sums(0.3, 1, 3)
    assert len(s) == 16
    L, C = 16.0, 2.0
    part = sp.good_indices(s, L, C)
    lam = s.lambdas
    brute = C * np.sum(L / (L ** 2 + (lam[None, :] - lam[:, None]) ** 2), axis=1)
    np.testing.assert_allclose(part.crowding, brute, rtol=1e-12)
    assert set(part.good) | set(part.bad) == set(range(16))
    assert np.all(part.crowding[part.good] <= 0.125)
    with pytest.raises(CapacityError):
        sp.spectrum_sums(0.3, 0, 8)
    with pytest.raises(ValueError):
        sp.SpectralConfig(1.5, 0, 1)


def test_riesz_relations():
    u = np.linspace(0, 1, 777)
    m, n = 1, 5
    np.testing.assert_allclose(sp.riesz_cos_squared(m, n, u) * 2.0 ** (n - m),
                               sp.riesz(m, n, u), atol=1e-12)
    np.testing.assert_allclose(sp.riesz(m, n, u + math.pi / 4), sp.riesz(m, n, u), atol=1e-10)
    assert np.all(sp.riesz(m, n, u) >= 0)


@pytest.mark.parametrize("m,n", [(1, 3), (2, 5), (1, 6)])
def test_riesz_interval_integral_matches_expansion(m, n):
    rng = np.random.default_rng(m * 10 + n)
    for _ in range(4):
        a = rng.uniform(0, 1)
        b = a + rng.uniform(0, 0.5)
        assert sp.riesz_interval_integral(m, n, (a, b), 1e-11) == pytest.approx(
            riesz_integral_exact(m, n, a, b), abs=1e-9)
    assert sp.riesz_interval_integral(m, n, (0, math.pi * 4.0 ** -m)) == pytest.approx(
        math.pi * 4.0 ** -m, abs=1e-10)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_weighted_gauge_integral_bound(m):
    for delta in (4.0 ** -1, 4.0 ** -2):
        val = sp.riesz_gauge_integral(m, m + 3, delta, tol=1e-8, weighted=True)
        assert val <= 8 * math.sqrt(delta) * m + 1e-8


def test_p2_mass_median():
    ratios = [sp.p2_l2_mass(t, 2, 5, tol=1e-8) / 4.0 ** (2 - 5)
              for t in np.linspace(0.01, 0.99, 32)]
    assert np.median(ratios) >= 0.1


def test_fourier_energy_small_case():
    from favard.cantor import AngleParams
    from favard.intervals import multiplicity_profile, profile_moment
    a = AngleParams.from_t(0.4)
    c = normalized_centers(2, 0.4)
    h = 0.5 * a.rho / 16
    direct = profile_moment(multiplicity_profile(np.column_stack([c - h, c + h])), 2) / a.rho ** 2
    assert sp.fourier_energy(0.4, 2, a.rho) == pytest.approx(direct, rel=0.01)


def test_tolerance_budget_raises():
    with pytest.raises(ToleranceNotReached) as info:
        oscillatory_integral(lambda u: np.cos(1e4 * u ** 2), 0, 10, 1.0, 1e-14, max_nodes=2 ** 10)
    assert info.value.tol == 1e-14
    assert math.isfinite(info.value.value)


def test_gauge_spec_validation():
    with pytest.warns(UserWarning):
        s = sp.GaugeSetSpec(2, delta=3.0)
    assert s.delta == 1.0
    assert s.range == (1 / 16, 1.0)
    with pytest.raises(ValueError):
        sp.GaugeSetSpec(2, delta=0.0)
    with pytest.raises(CapacityError):
        sp.GaugeSetSpec(2, ell=25)
    with pytest.raises(ValueError):
        sp.gauge_sets(sp.GaugeSetSpec(1), 0.5, "nope")


def test_i_delta_structure():
    m, delta = 2, 0.5
    s = sp.i_delta(m, delta, 0.0, math.pi)
    inner = s.bounds[1:-1]
    np.testing.assert_allclose(inner[:, 1] - inner[:, 0], delta * 4.0 ** -m)
    np.testing.assert_allclose(0.5 * inner.sum(axis=1) / (math.pi / 16), np.arange(1, 16))


def test_omega_degenerate_t_one():
    spec = sp.GaugeSetSpec(2, delta=0.25, eta=0.25)
    assert sp.gauge_sets(spec, 1.0, "omega_or").bounds.tolist() == [[1 / 16, 1.0]]
    expect = sp.i_delta(2, 0.25, 2 / 16, 2.0).scaled(0.5).clip(1 / 16, 1.0)
    np.testing.assert_allclose(sp.gauge_sets(spec, 1.0, "omega_and").bounds, expect.bounds)


@given(st.floats(0, 1), st.integers(1, 3), st.sampled_from([1.0, 0.5, 0.125]),
       st.sampled_from([1.0, 0.25]))
@settings(max_examples=30, deadline=None)
def test_and_inside_or(t, m, delta, eta):
    spec = sp.GaugeSetSpec(m, delta, eta)
    big = sp.gauge_sets(spec, t, "omega_or")
    small = sp.gauge_sets(spec, t, "omega_and")
    assert small.issubset(big, tol=1e-12)


def test_inclusion_with_sine_comparison_width():
    # |sin x| >= (2/pi) dist(x, pi Z): widening the gauge intervals by pi makes the inclusion hold
    rng = np.random.default_rng(12)
    for t in (0.0, 0.25, 0.6, 1.0):
        for m in (1, 2, 3):
            y = rng.uniform(4.0 ** -m, 1.0, 3000)
            floor = sp.sine_floor(t, m, y) * 4.0 ** (2 * m)
            for ell in range(0, 7):
                omega = sp.omega_ell(t, m, ell, 4.0 ** -m, 1.0, width=math.pi)
                assert np.all(omega.contains(y[floor <= 2.0 ** -ell]))


def test_omega_ell_nonempty_without_warnings():
    for ell in range(1, 5):
        s = sp.gauge_sets(sp.GaugeSetSpec(2, ell=ell), 0.3, "omega_ell")
        assert s.length > 0
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            sp.omega_ell(0.3, 2, ell, 1 / 16, 1.0)
