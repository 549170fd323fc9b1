"""Cell integrals against frozen nested adaptive-quadrature values.

The reference values were computed once with an independent nested
``scipy.integrate.quad`` evaluation of the defining double integrals and
are stored here so the tests do not depend on that slow computation.
"""
import math

import numpy as np
import pytest

from roughsq.verify.cells import (CellIndex, averaged_multiplier, averaged_multiplier_leading,
                                  cell_bound, cell_integral, cin, lemma_bound,
                                  lemma_region_integral, plancherel_constant, rho,
                                  sigma_tau_lemma_check)

# (kind, n, l, part, lam): (alpha=0.75, alpha=1.25)
ORACLE = {
    ("V", 0, -1, "full", 1.0): (0.06852695393451441, 0.18617953999201736),
    ("V", 0, 2, "full", 1.0): (0.5704404216659359, 0.21938003172922094),
    ("V", 1, -2, "full", 3.0): (0.04751626687524863, 0.08597461019147237),
    ("V", 2, 4, "full", 1.0): (0.3480343447160112, 0.037625260774705474),
    ("V", 0, 1, "full", 5.0): (0.6967838911702783, 0.09835889577234735),
    ("W", 0, -2, "full", 1.0): (0.13255181091298035, 0.09201012878404496),
    ("W", -1, -4, "full", 2.0): (0.06653573265260967, 0.045782172650243036),
    ("W", 2, 0, "first", 1.0): (0.035130286754637224, 0.008240600140672903),
    ("W", 2, -3, "first", 7.0): (0.00029106404521688845, 8.332701853358537e-06),
    ("W", 3, -1, "second", 1.0): (0.2050953886277631, 0.018929518075997163),
    ("W", 4, 1, "second", 0.3): (0.3183263244894907, 0.04950201871078963),
}


@pytest.mark.parametrize("key", sorted(ORACLE))
def test_cell_integral_against_oracle(key):
    kind, n, l, part, lam = key
    got = cell_integral(CellIndex(kind, n, l, part=part), lam, [0.75, 1.25])
    assert np.allclose(got, ORACLE[key], rtol=1e-7)


def test_cell_index_validation():
    with pytest.raises(ValueError):
        CellIndex("X", 0, 0)
    with pytest.raises(ValueError):
        CellIndex("V", 0, 3)
    with pytest.raises(ValueError):
        CellIndex("W", 0, -1)
    with pytest.raises(ValueError):
        CellIndex("V", 0, 0, part="first")


def test_cell_bounds_closed_form():
    assert cell_bound(CellIndex("V", -2, -3), 1.0) == pytest.approx(2.0**-1 * 2.0**-1.5)
    assert cell_bound(CellIndex("V", 2, 1), 1.0) == pytest.approx(
        min(2.0**-1 * 2.0**0.5, 2.0**-1 * 2.0**-0.5))
    assert cell_bound(CellIndex("W", 3, 1, part="first"), 1.0) == pytest.approx(
        2.0**0.5 * 2.0**-3 * 2.0**-1.5)
    with pytest.raises(ValueError):
        cell_bound(CellIndex("W", 3, 1), 1.0)


def test_rho_and_cin():
    u = np.array([-3.0, 0.5, 10.0])
    r = rho(u)
    assert np.all(np.abs(r) <= np.minimum(1.0, 2.0 / np.abs(u)) + 1e-15)
    with pytest.raises(ValueError):
        rho(np.array([0.0]))
    x = np.array([0.3, 1.9, 2.1, 15.0])
    w = np.linspace(0, 1, 200001)[1:]
    direct = [np.trapezoid(np.concatenate([[0.0], (1 - np.cos(a * w)) / w]),
                           np.concatenate([[0.0], w])) for a in x]
    assert np.allclose(cin(x), direct, rtol=1e-8)
    assert np.allclose(cin(-x), cin(x))


def test_plancherel_constant_is_pi_sqrt_two():
    res = plancherel_constant()
    assert res.c_squared == pytest.approx(2 * math.pi**2, rel=1e-4)
    assert res.tail_exponent == pytest.approx(1.0, abs=0.05)


def test_lemma_region():
    assert lemma_bound(0.5, 0.25, 1.0) == pytest.approx(0.5**0.5 * 0.25**0.5)
    assert lemma_bound(4.0, 0.5, 1.0) == pytest.approx(0.5 * 0.5**0.5)
    assert lemma_bound(4.0, 2.0, 1.0) == pytest.approx(0.5 * 2.0**-0.5)
    assert lemma_region_integral(2.0, 1.0, 1.0) > 0
    with pytest.raises(ValueError):
        lemma_region_integral(1.0, 2.0, 1.0)


def test_sigma_tau_lemma_check_runs():
    rep = sigma_tau_lemma_check(1.0)
    assert "max_ratio" in rep.outputs or rep.outputs


@pytest.mark.parametrize("alpha", [0.75, 1.0, 1.25])
def test_averaged_multiplier_leading_term(alpha):
    xi = np.array([0.25, 1.0, 4.0])
    eps = 1e-3
    full = averaged_multiplier(xi, eps, alpha)
    lead = averaged_multiplier_leading(xi, eps, alpha)
    assert np.allclose(full, lead, rtol=0.05)
    assert np.all(np.abs(full) > 0)
