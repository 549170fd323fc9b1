import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughsq import _kernels_py, kernels

try:
    from roughsq import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def naive(values, x0, h, x, s, t, w):
    xs = x0 + h * np.arange(len(values))
    q = lambda u: (np.interp(x + u, xs, values) - np.interp(x, xs, values)) / u
    return float(sum(wi * (q(si) - q(ti)) ** 2 for si, ti, wi in zip(s, t, w)))


def inputs(seed, m=200):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(513)
    s = rng.uniform(-2, 2, m)
    t = rng.uniform(-2, 2, m)
    s[s == 0] = 0.5
    t[t == 0] = 0.25
    return values, -4.0, 1.0 / 64, 0.3, s, t, rng.uniform(0, 1, m)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_python_kernel_matches_naive_loop(seed):
    args = inputs(seed)
    assert _kernels_py.interp_pair_sum(*args) == pytest.approx(naive(*args), rel=1e-12)


@pytest.mark.skipif(compiled is None, reason="compiled extension not built")
@given(st.integers(0, 10_000))
def test_backends_agree(seed):
    args = inputs(seed, 64)
    assert compiled.interp_pair_sum(*args) == pytest.approx(
        _kernels_py.interp_pair_sum(*args), rel=1e-12)


def test_length_mismatch_raises():
    values, x0, h, x, s, t, w = inputs(0)
    with pytest.raises(ValueError):
        kernels.interp_pair_sum(values, x0, h, x, s, t[:-1], w)


def test_pure_python_switch():
    env = dict(os.environ, ROUGHSQ_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import roughsq; print(roughsq.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("python", "cython")
