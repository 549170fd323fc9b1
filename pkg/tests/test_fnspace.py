import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughsq.fnspace import (Evaluator, Grid1D, GridFunction, NormSpec, apply_multiplier,
                             h1_norm, hilbert_transform, lp_norm, sample, weak_l1_quasinorm,
                             zygmund_seminorm)
from roughsq.zoo import make_function


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(0.0, 0.0, 8)
    with pytest.raises(ValueError):
        Grid1D(0.0, 0.1, 1)
    with pytest.raises(ValueError):
        Grid1D(math.inf, 0.1, 8)
    g = Grid1D.over(-1.0, 1.0, 4)
    assert np.allclose(g.x, [-1.0, -0.5, 0.0, 0.5])


def test_gridfunction_rejects_bad_samples():
    g = Grid1D.over(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        GridFunction(g, np.zeros(3))
    with pytest.raises(ValueError):
        GridFunction(g, np.array([0.0, np.nan, 0.0, 0.0]))


def test_interpolation_exact_for_linear_and_bounded():
    grid = Grid1D.over(-2.0, 2.0, 64)
    gf = GridFunction(grid, 3.0 * grid.x - 1.0)
    y = np.linspace(-2.0, grid.right, 101)
    assert np.allclose(gf(y), 3.0 * y - 1.0)
    with pytest.raises(ValueError):
        gf(np.array([grid.right + 0.1]))


def test_evaluator_support_cut():
    ev = Evaluator("one", {}, lambda x: np.ones_like(x), support_radius=1.0)
    assert np.array_equal(ev(np.array([-2.0, 0.0, 1.5])), [0.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        Evaluator("bad", {}, lambda x: x, smoothness="rough")


def test_lp_norms_of_constant():
    grid = Grid1D.over(0.0, 4.0, 400)
    gf = GridFunction(grid, np.full(400, 2.0))
    assert lp_norm(gf, 2.0) == pytest.approx(2.0 * math.sqrt(4.0))
    assert lp_norm(gf, 1.0) == pytest.approx(8.0)
    assert lp_norm(gf, NormSpec(math.inf)) == 2.0
    with pytest.raises(ValueError):
        NormSpec(2.0, weak=True)


def test_weak_quasinorm_indicator_and_inverse():
    grid = Grid1D.over(0.0, 4.0, 4000)
    ind = GridFunction(grid, (grid.x < 1.0).astype(float))
    assert weak_l1_quasinorm(ind) == pytest.approx(1.0, abs=1e-3)
    # |g| = 1/x on (0, 4]: lambda * |{1/x > lambda}| = min(1, 4 lambda) -> 1
    g = GridFunction(grid, 1.0 / (grid.x + grid.h))
    assert weak_l1_quasinorm(g) == pytest.approx(1.0, rel=2e-3)
    assert weak_l1_quasinorm(GridFunction(grid, np.zeros(4000))) == 0.0


@given(st.floats(0.1, 10.0), st.floats(0.5, 4.0))
def test_lp_norm_homogeneous(c, p):
    grid = Grid1D.over(-3.0, 3.0, 256)
    gf = sample(make_function("smooth_bump").f, grid)
    assert lp_norm(gf.with_values(c * gf.values), p) == pytest.approx(c * lp_norm(gf, p))


def test_weak_quasinorm_bounded_by_l1():
    grid = Grid1D.over(-3.0, 3.0, 512)
    gf = sample(make_function("odd_bump").f, grid)
    assert weak_l1_quasinorm(gf) <= lp_norm(gf, 1.0) + 1e-12


@pytest.mark.parametrize("k", [1, 3, 7])
def test_hilbert_of_cosine_is_sine(k):
    grid = Grid1D.over(0.0, 2 * math.pi, 128)
    gf = GridFunction(grid, np.cos(k * grid.x))
    assert np.allclose(hilbert_transform(gf).values, np.sin(k * grid.x), atol=1e-12)
    with pytest.raises(ValueError):
        hilbert_transform(GridFunction(Grid1D.over(0, 1, 9), np.zeros(9)))


def test_discrete_plancherel_with_unit_multiplier():
    rng = np.random.default_rng(0)
    grid = Grid1D.over(0.0, 8.0, 256)
    gf = GridFunction(grid, rng.standard_normal(256))
    out = apply_multiplier(gf, lambda xi: np.exp(1j * 0.3 * xi))
    assert lp_norm(out, 2.0) == pytest.approx(lp_norm(gf, 2.0), rel=1e-12)


def test_h1_norm_reports_boundary_mass():
    grid = Grid1D.over(-16.0, 16.0, 4096)
    gf = sample(make_function("smooth_bump").df, grid)
    notes = []
    val = h1_norm(gf, report=notes)
    assert val > lp_norm(gf, 1.0) and not notes
    notes = []
    h1_norm(GridFunction(grid, np.ones(4096)), report=notes)
    assert notes


def test_zygmund_seminorm_of_parabola():
    # |g(x+h) + g(x-h) - 2g(x)| / h = 2h for g = x^2
    grid = Grid1D.over(-2.0, 2.0, 801)
    gf = GridFunction(grid, grid.x**2)
    k = int(0.5 / grid.h)
    assert zygmund_seminorm(gf, 0.5) == pytest.approx(2.0 * k * grid.h, rel=1e-9)
    with pytest.raises(ValueError):
        zygmund_seminorm(gf, 10.0)
