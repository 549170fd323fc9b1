"""Pure-Python fallback for the compiled kernels (same signatures)."""
import numpy as np


def _interp(values, x0, h, y):
    n = values.shape[0]
    u = np.clip((np.asarray(y, dtype=float) - x0) / h, 0.0, n - 1)
    i = np.minimum(np.floor(u).astype(np.int64), n - 2)
    w = u - i
    return (1.0 - w) * values[i] + w * values[i + 1]


def interp_pair_sum(values, x0, h, x, s, t, w):
    values = np.asarray(values, dtype=float)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    w = np.asarray(w, dtype=float)
    if t.shape != s.shape or w.shape != s.shape:
        raise ValueError("node arrays must have equal length")
    gx = _interp(values, x0, h, x)
    qs = (_interp(values, x0, h, x + s) - gx) / s
    qt = (_interp(values, x0, h, x + t) - gx) / t
    d = qs - qt
    return float(np.sum(w * d * d))
