import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from roughsq.verify import (REGISTRY, ExperimentReport, IntervalSet, by_tier, combine,
                            experiment_ids, flatten, get, linear_fit, loglog_fit,
                            marcinkiewicz_integral, spearman, stein_zygmund_test)
from roughsq.verify.pointwise import eq6_modulus, second_quotient
from roughsq.zoo import make_function


def test_interval_set_distance():
    F = IntervalSet([(0.0, 1.0), (3.0, 4.0)])
    assert np.allclose(F.dist(np.array([-1.0, 0.5, 2.0, 5.0])), [1.0, 0.0, 1.0, 1.0])
    G = IntervalSet([(0.0, 1.0)], complement=True)
    assert np.allclose(G.dist(np.array([-1.0, 0.25, 0.5, 2.0])), [0.0, 0.25, 0.5, 0.0])
    assert 2.0 in F.breakpoints()
    with pytest.raises(ValueError):
        IntervalSet([(1.0, 0.0)])


def test_marcinkiewicz_closed_form():
    F = IntervalSet([(0.0, math.inf)])
    assert marcinkiewicz_integral(F, 1.0, 0.5) == pytest.approx(math.log(2) - 0.5, rel=1e-10)
    assert marcinkiewicz_integral(F, 1.0, -0.5) == math.inf
    assert marcinkiewicz_integral(F, 1.0, 0.0) == math.inf
    with pytest.raises(ValueError):
        marcinkiewicz_integral(F, 0.0, 0.5)


@settings(max_examples=15)
@given(st.floats(0.2, 3.0), st.floats(0.05, 0.95))
def test_marcinkiewicz_against_quad(lam, x):
    F = IntervalSet([(0.0, math.inf)])
    ref, _ = quad(lambda y: (-y) ** lam / (x - y) ** (1 + lam), x - 1.0, 0.0,
                  epsabs=1e-13, epsrel=1e-11) if x < 1 else (0.0, 0.0)
    assert marcinkiewicz_integral(F, lam, x) == pytest.approx(ref, rel=1e-8, abs=1e-14)


def test_second_quotient_of_quadratic():
    sq = lambda x: np.asarray(x) ** 2
    h = np.array([0.1, 0.5])
    # (4h^2 + 4hx)/(2h) - (h^2 + 2hx)/h = h
    assert np.allclose(second_quotient(sq, 0.7, h), h)


def test_stein_zygmund_on_smooth_and_kink():
    f = make_function("smooth_bump").f
    assert stein_zygmund_test(f, 0.2, 0.25) == (True, True)
    ab = lambda x: np.abs(np.asarray(x, float))
    bounded, finite = stein_zygmund_test(ab, 0.0, 0.25)
    assert bounded and finite
    with pytest.raises(ValueError):
        stein_zygmund_test(f, 0.0, 0.0)


def test_eq6_modulus_affine_zero():
    aff = lambda x: 2.0 * np.asarray(x) + 1.0
    assert np.allclose(eq6_modulus(aff, 0.3, np.array([0.1, 0.2]), np.array([2.0, 3.0])), 0.0)


def test_report_verdicts_and_serialisation():
    rep = ExperimentReport("demo", dict(a=1))
    rep.check("small", 0.5, 1.0)
    rep.check("nan fails", math.nan, 1.0)
    rep.flag("unknown", None)
    assert not rep.passed
    assert rep.failing == ["nan fails", "unknown"]
    d = rep.to_dict()
    assert d["verdicts"][2]["status"] == "inconclusive"
    json.dumps(d)  # plain JSON types only
    with pytest.raises(ValueError):
        rep.check("bad", 1.0, 1.0, "~")


def test_combine_prefixes_and_tables():
    a = ExperimentReport("a", {}, outputs=dict(x=1.0), table=dict(c=[1, 2]), wall_clock=1.0)
    a.check("ok", 0.0, 1.0)
    b = ExperimentReport("b", {}, outputs=dict(x=2.0), table=dict(d=[3]), wall_clock=2.0)
    b.check("bad", 2.0, 1.0)
    c = combine("ab", {}, {"A": a, "B": b})
    assert c.outputs == {"A.x": 1.0, "B.x": 2.0}
    assert c.failing == ["B: bad"]
    assert c.table["part"] == ["A", "A", "B"]
    assert c.table["c"] == [1, 2, None] and c.table["d"] == [None, None, 3]
    assert c.wall_clock == 3.0


def test_fits():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    b, a, r2 = loglog_fit(x, 3.0 * x**-0.5)
    assert b == pytest.approx(-0.5) and r2 == pytest.approx(1.0)
    assert linear_fit([0, 1], [1, 3])[:2] == pytest.approx((2.0, 1.0))
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
    assert spearman([1, 2, 3], [5, 5, 5]) == 0.0
    with pytest.raises(ValueError):
        linear_fit([1.0], [2.0])
    assert by_tier("quick", 1, 2, 3) == 1
    with pytest.raises(ValueError):
        by_tier("fast", 1, 2, 3)


def test_flatten():
    assert flatten({"a": {"b": 1}, "v": [{"n": 2}], "l": [1, 2]}) == {
        "a.b": 1, "v.0.n": 2, "l": [1, 2]}


def test_registry_order_and_criteria():
    ids = experiment_ids()
    crit = [REGISTRY[i].criterion for i in ids if REGISTRY[i].criterion]
    assert crit == list(range(1, 16))
    assert ids[:15] == [i for i in ids if REGISTRY[i].criterion]
    with pytest.raises(KeyError):
        get("nope")


def test_small_experiments_are_deterministic():
    r1 = get("sym-identity").runner(dict(tier="quick", seed=5))
    r2 = get("sym-identity").runner(dict(tier="quick", seed=5))
    assert r1.passed
    assert json.dumps(r1.to_dict(), sort_keys=True) == json.dumps(r2.to_dict(), sort_keys=True)
    assert get("menger").runner(dict(tier="quick", seed=5)).passed
