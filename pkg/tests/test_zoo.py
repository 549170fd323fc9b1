import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughsq.zoo import CATALOGUE, make_function, moments, smoothstep, smoothstep_deriv


def test_unknown_id():
    with pytest.raises(KeyError):
        make_function("nope")


@pytest.mark.parametrize("fid", sorted(CATALOGUE))
def test_entries_are_finite_and_tagged(fid):
    e = make_function(fid)
    x = np.linspace(-5.0, 5.0, 1001)
    assert np.all(np.isfinite(e.f(x)))
    assert e.id == fid
    assert e.f.smoothness in ("smooth", "lipschitz", "zygmund")


@pytest.mark.parametrize("fid", [f for f in sorted(CATALOGUE) if f != "weierstrass"])
def test_derivative_matches_central_difference(fid):
    e = make_function(fid)
    x = np.linspace(-2.7, 2.9, 211)
    kinks = np.asarray(e.f.kinks)
    if kinks.size:
        x = x[np.min(np.abs(x[:, None] - kinks[None, :]), axis=1) > 1e-3]
    h = 1e-6
    fd = (e.f(x + h) - e.f(x - h)) / (2 * h)
    assert np.allclose(e.df(x), fd, atol=1e-5 * max(1.0, np.max(np.abs(fd))))


def test_plateaus_and_parity():
    assert np.allclose(make_function("odd_bump").f(np.linspace(0.5, 1.0, 11)), 1.0)
    vm = make_function("vanishing_moment_bump").f
    assert np.allclose(vm(np.linspace(0.0, 1.0, 11)), 1.0)
    qc = make_function("quadratic_cap").f
    x = np.linspace(-1.0, 1.0, 11)
    assert np.allclose(qc(x), x**2)


def test_heaviside_derivative_has_unit_mass():
    for j in (10.0, 1e3, 1e4):
        e = make_function("heaviside_reg", j=j)
        assert e.f(np.array([-1.0]))[0] == 0.0 and e.f(np.array([1.0]))[0] == 1.0
        x = np.linspace(0.0, 1.0 / j, 2001)
        assert np.trapezoid(e.df(x), x) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        make_function("heaviside_reg", j=0.5)


def test_vanishing_moments():
    e = make_function("vanishing_moment_bump")
    m = moments(e.f, -3.0, 3.0, orders=(0, 1), breaks=(0.0, 1.0))
    assert np.allclose(m, 0.0, atol=1e-10)


@given(st.floats(0.0, 1.0))
def test_smoothstep_symmetry(u):
    assert smoothstep(u) + smoothstep(1.0 - u) == pytest.approx(1.0, abs=1e-10)
    assert smoothstep_deriv(u) >= -1e-9


def test_weierstrass_truncation_tail():
    e = make_function("weierstrass", b=2.0)
    b, n = 2.0, e.params["terms"]
    assert b**-n / (1 - 1 / b) < 1e-12
    # lacunary series at 0 sums to sum b^-k
    assert e.f(np.array([0.0]))[0] == pytest.approx(sum(b**-k for k in range(1, n + 1)))
