"""Square functions against closed forms for g(x) = x^2.

For g = x^2 the quotient is q(u) = 2x + u, so q(s) - q(t) = s - t and every
square function reduces to a polynomial integral.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from roughsq.fnspace import Evaluator, Grid1D, sample
from roughsq.sqfun import (SqParams, SqResult, evaluate_many, fails_to_stabilize, g_alpha,
                           g_alpha_m, majorization_constant, marcinkiewicz_constant, q_square,
                           refinement_values, s_alpha, s_alpha_via_m, s_local)
from roughsq.zoo import make_function

SQ = Evaluator("square", {}, lambda x: x * x)
LIN = Evaluator("affine", {}, lambda x: 3.0 * x - 2.0)


def box_oracle(R, alpha):
    # ∬_{[-R,R]^2} |s-t|^b = 2 (2R)^(b+2) / ((b+1)(b+2)),  b = 2 - 2 alpha
    b = 2.0 - 2.0 * alpha
    return math.sqrt(2.0 * (2 * R) ** (b + 2) / ((b + 1) * (b + 2)))


def test_params_validation():
    for bad in (dict(R=0.0), dict(R=math.inf), dict(resolution=2), dict(policy="x"),
                dict(mode="y"), dict(n_rings=0), dict(eps_cut=-1.0), dict(alpha=math.nan)):
        with pytest.raises(ValueError):
            SqParams(**bad)


def test_result_is_float_with_metadata():
    r = SqResult(2.0, err=1e-3)
    assert r == 2.0 and r.value == 2.0 and r.err == 1e-3
    assert math.isnan(r.tail)


@pytest.mark.parametrize("R", [1.0, 4.0])
def test_s_alpha_quadratic_alpha_one(R):
    val = s_alpha(SQ, 0.3, SqParams(alpha=1.0, R=R, resolution=8))
    assert val == pytest.approx(2.0 * R, rel=1e-7)


@pytest.mark.parametrize("alpha", [0.75, 1.25])
def test_s_alpha_quadratic_general_alpha(alpha):
    val = s_alpha(SQ, -0.4, SqParams(alpha=alpha, R=2.0, resolution=16))
    assert val == pytest.approx(box_oracle(2.0, alpha), rel=1e-5)


def test_s_alpha_vanishes_on_affine():
    assert s_alpha(LIN, 0.7, SqParams(R=4.0, resolution=8)) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("alpha", [0.75, 1.0, 1.25])
def test_g_alpha_quadratic(alpha):
    R = 3.0
    oracle = math.sqrt(4.0 * R ** (4 - 2 * alpha) / (4 - 2 * alpha))
    assert g_alpha(SQ, 0.1, SqParams(alpha=alpha, R=R, resolution=8)) == pytest.approx(
        oracle, rel=1e-8)


@pytest.mark.parametrize("m", [-3.0, 2.0, 5.5])
def test_g_alpha_m_quadratic(m):
    R, alpha = 2.0, 1.0
    oracle = math.sqrt(2.0 * (m - 1) ** 2 * R ** (4 - 2 * alpha) / (4 - 2 * alpha))
    assert g_alpha_m(SQ, 0.0, m, SqParams(alpha=alpha, R=R, resolution=8)) == pytest.approx(
        oracle, rel=1e-8)
    with pytest.raises(ValueError):
        g_alpha_m(SQ, 0.0, 1.0)


def test_two_sided_g_is_twice_one_sided_for_even_input():
    p = SqParams(alpha=1.0, R=2.0, resolution=8)
    one = g_alpha(SQ, 0.0, p)
    two = g_alpha(SQ, 0.0, p, two_sided=True)
    assert float(two) ** 2 == pytest.approx(2 * float(one) ** 2, rel=1e-8)


def test_mixing_identity_on_smooth_bump():
    f = make_function("smooth_bump").f
    p = SqParams(alpha=1.0, R=4.0, resolution=16)
    assert s_alpha_via_m(f, 0.2, p) == pytest.approx(float(s_alpha(f, 0.2, p)), rel=2e-3)
    assert s_alpha(f, 0.2, SqParams(alpha=1.0, R=4.0, resolution=16, mode="m")) == \
        pytest.approx(float(s_alpha(f, 0.2, p)), rel=2e-3)


def test_q_square_quadratic():
    R = 2.0
    assert q_square(SQ, 0.5, SqParams(R=R, resolution=8)) == pytest.approx(
        R * math.sqrt(14.0 / 3.0), rel=1e-8)


@pytest.mark.parametrize("delta", [0.1, 0.5])
def test_s_local_quadratic(delta):
    assert s_local(SQ, 0.0, delta, SqParams(resolution=8)) == pytest.approx(
        math.sqrt(2.0) * delta, rel=1e-8)
    with pytest.raises(ValueError):
        s_local(SQ, 0.0, delta, SqParams(alpha=0.9))


@settings(max_examples=8)
@given(st.floats(0.05, 0.4), st.floats(0.45, 1.0))
def test_s_local_monotone_in_delta(d1, d2):
    f = make_function("smooth_bump").f
    p = SqParams(resolution=8, estimate_error=False)
    assert float(s_local(f, 0.3, d1, p)) <= float(s_local(f, 0.3, d2, p)) + 1e-14


def test_gridfunction_input_matches_evaluator_and_checks_reach():
    f = make_function("smooth_bump").f
    grid = Grid1D.over(-8.0, 8.0, 4096)
    gf = sample(f, grid)
    p = SqParams(alpha=1.0, R=2.0, resolution=16)
    assert float(s_alpha(gf, 0.0, p)) == pytest.approx(float(s_alpha(f, 0.0, p)), rel=1e-3)
    with pytest.raises(ValueError):
        s_alpha(gf, 7.0, p)


@settings(max_examples=10)
@given(st.floats(0.2, 5.0), st.floats(-1.0, 1.0))
def test_s_alpha_homogeneous_and_translation_of_affine(c, b):
    # S(c f + affine) = |c| S(f)
    f = make_function("smooth_bump").f
    base = Evaluator("f", {}, lambda x: f(x))
    h = Evaluator("h", {}, lambda x: c * f(x) + b * x + 1.0)
    p = SqParams(alpha=1.0, R=2.0, resolution=8, estimate_error=False)
    assert float(s_alpha(h, 0.1, p)) == pytest.approx(c * float(s_alpha(base, 0.1, p)),
                                                      rel=1e-8)


def test_majorization_constant_properties():
    assert math.isfinite(majorization_constant(1.0, 2.0))
    assert marcinkiewicz_constant(1.0) == pytest.approx(2 * majorization_constant(1.0, 2.0))
    # alpha = 1: A = max_s 2 (s-1)^2 / s, attained at s = m
    m = 3.0
    A = 2 * (m - 1) ** 2 / m
    assert majorization_constant(1.0, m) == pytest.approx(math.sqrt(A / math.log(m)), rel=1e-8)
    with pytest.raises(ValueError):
        majorization_constant(1.0, 1.0)


def test_fails_to_stabilize():
    assert not fails_to_stabilize([1.0, 1.01, 1.015])
    assert fails_to_stabilize([1.0, 1.1])
    assert fails_to_stabilize([1.0, math.inf])
    with pytest.raises(ValueError):
        fails_to_stabilize([1.0])


def test_refinement_and_threads():
    p = SqParams(R=2.0, resolution=8)
    vals = refinement_values(lambda q: s_alpha(SQ, 0.0, q), p, doublings=1)
    assert np.allclose(vals, 4.0, rtol=1e-9)
    xs = [0.0, 0.5, -0.5]
    f = make_function("gaussian").f
    one = evaluate_many(s_alpha, f, xs, p, threads=1)
    two = evaluate_many(s_alpha, f, xs, p, threads=2)
    assert [float(a) for a in one] == [float(b) for b in two]
