import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from roughsq.fnspace import Evaluator
from roughsq.symm import (PlanarPoint, Triple, circumradius_oracle, commutator_kernel,
                          menger_curvature, sym_bruteforce, sym_closed, sym_l2_identity)
from roughsq.zoo import make_function

SQ = Evaluator("square", {}, lambda x: x * x)
CUBE = Evaluator("cube", {}, lambda x: x**3)
AFF = Evaluator("affine", {}, lambda x: 2.0 * x + 1.0)

coord = st.floats(-5.0, 5.0, allow_nan=False)


def test_triple_validation():
    with pytest.raises(ValueError):
        Triple(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Triple(0.0, math.inf, 1.0)
    assert Triple(0.0, 0.25, 1.0).min_gap == 0.25
    with pytest.raises(ValueError):
        PlanarPoint(math.nan, 0.0)


def test_kernel_value():
    assert commutator_kernel(SQ, 1.0, 3.0) == pytest.approx((9.0 - 1.0) / 4.0)


def test_quadratic_and_affine_closed_forms():
    t = Triple(-0.3, 0.4, 2.0)
    assert sym_closed(SQ, t) == pytest.approx(1.0, rel=1e-14)
    assert sym_bruteforce(SQ, t, exact=True) == pytest.approx(1.0, rel=1e-14)
    assert sym_closed(AFF, t) == 0.0
    assert sym_bruteforce(AFF, t, exact=True) == 0.0
    # cubic: A[x,y,z] = x + y + z
    assert sym_closed(CUBE, t) == pytest.approx((t.x + t.y + t.z) ** 2, rel=1e-12)


@given(coord, coord, coord)
def test_symmetrisation_identity(x, y, z):
    assume(min(abs(x - y), abs(x - z), abs(y - z)) > 1e-2)
    A = make_function("smooth_bump").f
    t = Triple(x, y, z)
    exact = sym_bruteforce(A, t, exact=True)
    assert sym_closed(A, t) == pytest.approx(exact, rel=1e-9, abs=1e-13)
    # invariant under permutations
    assert sym_closed(A, Triple(z, x, y)) == pytest.approx(sym_closed(A, t), rel=1e-9,
                                                           abs=1e-13)


def test_vectorised_matches_scalar():
    rng = np.random.default_rng(4)
    x, y, z = rng.uniform(-2, 2, (3, 50))
    A = make_function("gaussian").f
    vec = sym_closed(A, (x, y, z))
    assert np.allclose(vec, [sym_closed(A, Triple(*r)) for r in zip(x, y, z)], rtol=1e-12)


def test_menger_against_circumradius():
    p = [PlanarPoint(0.0, 0.0), PlanarPoint(1.0, 0.0), PlanarPoint(0.0, 1.0)]
    assert menger_curvature(*p) == pytest.approx(1.0 / circumradius_oracle(*p))
    assert menger_curvature((0, 0), (1, 1), (2, 2)) == 0.0
    with pytest.raises(ValueError):
        menger_curvature((0, 0), (0, 0), (1, 2))


@given(coord, coord, coord, coord, coord, coord)
def test_menger_matches_oracle(a, b, c, d, e, f):
    P = np.array([[a, b], [c, d], [e, f]])
    u, v = P[1] - P[0], P[2] - P[0]
    area2 = abs(u[0] * v[1] - u[1] * v[0])
    assume(area2 > 1e-2)
    assert menger_curvature(*map(tuple, P)) == pytest.approx(
        1.0 / circumradius_oracle(*map(tuple, P)), rel=1e-7)


@given(coord, coord, coord)
def test_menger_bound_on_graphs(x, y, z):
    assume(min(abs(x - y), abs(x - z), abs(y - z)) > 1e-3)
    A = make_function("odd_bump").f
    pts = [(v, float(A(v))) for v in (x, y, z)]
    c = menger_curvature(*pts)
    assert c <= 2.0 * math.sqrt(sym_closed(A, Triple(x, y, z))) * (1 + 1e-9) + 1e-12


def test_l2_identity_validation():
    with pytest.raises(ValueError):
        sym_l2_identity(SQ, 2.0)
    A = make_function("smooth_bump").f
    with pytest.raises(ValueError):
        sym_l2_identity(A, 0.5)
    res = sym_l2_identity(A, 4.0, resolution=32, dA=make_function("smooth_bump").df)
    lhs, ratio = res
    assert lhs > 0 and ratio > 0 and res.grad_sq > 0
