import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughsq.fnspace import Grid1D, GridFunction, sample
from roughsq.fractional import (BumpSpec, DyadicIndex, band_limits, default_bump,
                                littlewood_paley_project, partition_bump, peetre_square,
                                pk_smooth, riesz_derivative, tk_kernel_apply)
from roughsq.zoo import make_function


def periodic_grid(N=1024, L=2 * math.pi):
    return Grid1D(0.0, L / N, N)


def test_dyadic_index_and_bumpspec_validation():
    with pytest.raises(ValueError):
        DyadicIndex(1.5)
    assert DyadicIndex(3.0).k == 3
    for bad in (dict(M=0), dict(radius=0.7), dict(steepness=-1.0)):
        with pytest.raises(ValueError):
            BumpSpec(**bad)
    with pytest.raises(RuntimeError):
        BumpSpec().psihat(np.array([1.0]))


@given(st.floats(1e-3, 1e3))
def test_partition_of_unity(r):
    ks = np.arange(-20, 21)
    assert np.sum(partition_bump(2.0**-ks * r)) == pytest.approx(1.0, abs=1e-12)


def test_partition_bump_support():
    assert partition_bump(np.array([0.5, 1.0, 2.0]))[1] == 1.0
    assert np.all(partition_bump(np.array([0.4, 0.5, 2.0, 3.0])) == 0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_riesz_derivative_of_cosine(alpha):
    grid = periodic_grid()
    out = riesz_derivative(GridFunction(grid, np.cos(5 * grid.x)), alpha)
    assert np.allclose(out.values, 5.0**alpha * np.cos(5 * grid.x), atol=1e-10)


def test_riesz_potential_needs_mean_zero():
    grid = periodic_grid()
    with pytest.raises(ValueError):
        riesz_derivative(GridFunction(grid, 1.0 + np.cos(grid.x)), -0.5)
    with pytest.raises(ValueError):
        riesz_derivative(GridFunction(grid, np.cos(grid.x)), 2.0)
    g = GridFunction(grid, np.sin(3 * grid.x))
    back = riesz_derivative(riesz_derivative(g, 0.7), -0.7)
    assert np.allclose(back.values, g.values, atol=1e-12)


def test_psi_properties():
    b = default_bump()
    assert b.annulus_min >= 1e-6
    assert abs(b.mean) < 1e-9
    assert np.all(b.psi(np.array([-0.6, 0.51, 0.7])) == 0.0)
    # psi_hat vanishes to order M at the origin
    xi = np.array([1e-3, 2e-3])
    ratio = np.abs(b.psihat(xi[1:])) / np.abs(b.psihat(xi[:1]))
    assert ratio[0] == pytest.approx(2.0**b.M, rel=1e-3)
    # Hermitian symmetry of a real function
    assert b.psihat(np.array([-3.0]))[0] == pytest.approx(np.conj(b.psihat(np.array([3.0]))[0]))


def test_psihat_matches_direct_quadrature():
    b = default_bump()
    x = np.linspace(-0.5, 0.5, 200001)
    # psi samples are large and cancel at small xi; use psi_hat = (i xi)^M eta_hat there
    for xi in (0.5, 4.0):
        eta_hat = np.trapezoid(b.eta(x) * np.cos(x * xi), x)
        assert b.psihat(np.array([xi]))[0] == pytest.approx((1j * xi) ** b.M * eta_hat,
                                                            rel=1e-6)
    for xi in (29.0, 100.0):
        direct = np.trapezoid(b.psi(x) * np.exp(-1j * x * xi), x)
        assert b.psihat(np.array([xi]))[0] == pytest.approx(direct, rel=1e-6)


def test_littlewood_paley_projection_of_single_mode():
    grid = periodic_grid()
    g = GridFunction(grid, np.cos(4 * grid.x))
    # 4 = 2^2: phi(1) = 1 at k = 2 and phi(2) = phi(1/2) = 0 at k = 1, 3
    assert np.allclose(littlewood_paley_project(g, 2).values, g.values, atol=1e-12)
    assert np.allclose(littlewood_paley_project(g, 3).values, 0.0, atol=1e-12)
    with pytest.raises(ValueError):
        littlewood_paley_project(g, 40)
    with pytest.raises(ValueError):
        littlewood_paley_project(g, 2, kind="weighted")
    kmin, kmax = band_limits(grid)
    assert kmin <= 0 and kmax >= 9


def test_pk_smooth_of_mode_is_multiplier():
    grid = periodic_grid(4096)
    b = default_bump()
    g = GridFunction(grid, np.cos(7 * grid.x))
    out = pk_smooth(g, 0)
    expect = (b.psihat(np.array([7.0]))[0] * np.exp(1j * 7 * grid.x)).real
    assert np.allclose(out.values, expect, rtol=0, atol=1e-12 * np.max(np.abs(expect)))
    with pytest.raises(ValueError):
        pk_smooth(GridFunction(periodic_grid(16), np.zeros(16)), 2)


def test_pk_annihilates_affine_with_detrend():
    grid = Grid1D.over(-8.0, 8.0, 2048)
    g = GridFunction(grid, 3.0 * grid.x + 2.0)
    assert np.allclose(pk_smooth(g, 1, detrend=True).values, 0.0, atol=1e-10)


def test_tk_parts_and_validation():
    grid = Grid1D.over(-8.0, 8.0, 2048)
    g = sample(make_function("smooth_bump").f, grid)
    full = tk_kernel_apply(g, 1, 1.0, 0.5, 0.2, detrend=True).values
    first = tk_kernel_apply(g, 1, 1.0, 0.5, 0.2, part="first", detrend=True).values
    second = tk_kernel_apply(g, 1, 1.0, 0.5, 0.2, part="second", detrend=True).values
    assert np.allclose(full, first - second, atol=1e-13)
    assert np.all(tk_kernel_apply(g, 1, 1.0, 0.2, 0.5).values == 0.0)
    for s, t in ((0.0, 0.1), (0.3, 0.3)):
        with pytest.raises(ValueError):
            tk_kernel_apply(g, 1, 1.0, s, t)


def test_peetre_square_dominates_projections():
    grid = periodic_grid(1024)
    rng = np.random.default_rng(2)
    g = GridFunction(grid, rng.standard_normal(1024))
    sq = peetre_square(g, 0, 4).values
    for k in range(0, 5):
        assert np.all(np.abs(littlewood_paley_project(g, k).values) <= sq + 1e-12)
    with pytest.raises(ValueError):
        peetre_square(g, 3, 2)


def test_riesz_first_derivative_is_hilbert_of_derivative():
    from roughsq.fnspace import hilbert_transform

    grid = periodic_grid(512)
    x = grid.x
    g = GridFunction(grid, np.cos(3 * x) + 0.5 * np.sin(7 * x))
    dg = GridFunction(grid, -3 * np.sin(3 * x) + 3.5 * np.cos(7 * x))
    assert np.allclose(riesz_derivative(g, 1.0).values, hilbert_transform(dg).values,
                       atol=1e-11)


def test_projections_sum_to_input():
    grid = periodic_grid(512)
    rng = np.random.default_rng(7)
    modes = rng.integers(1, 200, 12)
    g = GridFunction(grid, sum(np.cos(m * grid.x + rng.uniform(0, 6)) for m in modes))
    kmin, kmax = band_limits(grid)
    total = sum(littlewood_paley_project(g, k).values for k in range(kmin, kmax + 1))
    assert np.allclose(total, g.values, atol=1e-11)


def test_psihat_decay_envelope():
    # |psi_hat(xi)| <= C |xi|^M (1 + |xi|)^-N with N = 4 and a finite fitted C
    b = default_bump()
    xi = np.geomspace(1e-3, 1e4, 400)
    env = np.abs(b.psihat(xi)) / (xi**b.M * (1 + xi) ** -4.0)
    C = float(np.max(env))
    assert math.isfinite(C) and C > 0
    # compact support gives faster than polynomial decay: the envelope dies out
    assert np.max(env[xi > 1e3]) < 1e-6 * C
