"""Composite Gauss-Legendre rules with zone-based geometric grading.

Internal helpers shared by the square-function, symmetrisation and
verification modules.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as _leg


@lru_cache(maxsize=64)
def gauss(order: int):
    t, w = _leg.leggauss(int(order))
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def panel_rule(edges, order: int):
    """Nodes and weights of the composite rule on consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    t, w = gauss(order)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    x = (a + half) + half * t
    wx = half * w
    return x.ravel(), wx.ravel()


def _merge(zones):
    zs = sorted((min(a, b), max(a, b)) for a, b in zones)
    out = []
    for a, b in zs:
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return out


def _geometric(start, stop, width, grade):
    """Points from ``start`` towards ``stop`` with geometrically growing steps."""
    span = stop - start
    if span == 0:
        return np.array([start])
    L = abs(span)
    if L <= width:
        return np.array([start, stop])
    # number of steps with step_k = width * grade**k until the span is covered
    n = int(math.ceil(math.log(1 + L * (grade - 1) / width) / math.log(grade)))
    steps = width * grade ** np.arange(n)
    cum = np.concatenate([[0.0], np.cumsum(steps)])
    cum = cum[cum < L]
    pts = start + math.copysign(1.0, span) * cum
    return np.append(pts, stop)


def graded_edges(a, b, zones, width, grade=2.0, breaks=()):
    """Panel edges on ``[a, b]``.

    Inside each zone the panels are uniform with size at most ``width``;
    away from the zones they grow geometrically by ``grade``.  ``breaks``
    are added verbatim (kinks, singular points).
    """
    if not b > a:
        return np.array([a, b], dtype=float)
    zones = _merge(zones) if zones else []
    if not zones:
        zones = [[a, a]]
    lo = min(a, zones[0][0])
    hi = max(b, zones[-1][1])
    pieces = []
    for z0, z1 in zones:
        n = max(1, int(math.ceil((z1 - z0) / width - 1e-9)))
        pieces.append(np.linspace(z0, z1, n + 1))
    for (p0, p1), (q0, q1) in zip(zones[:-1], zones[1:]):
        mid = 0.5 * (p1 + q0)
        pieces.append(_geometric(p1, mid, width, grade))
        pieces.append(_geometric(q0, mid, width, grade))
    if lo < zones[0][0]:
        pieces.append(_geometric(zones[0][0], lo, width, grade))
    if hi > zones[-1][1]:
        pieces.append(_geometric(zones[-1][1], hi, width, grade))
    e = np.concatenate(pieces + [np.asarray(breaks, dtype=float), [a, b]])
    return clean_edges(e, a, b)


def clean_edges(e, a, b):
    e = np.unique(np.asarray(e, dtype=float))
    e = e[(e >= a) & (e <= b)]
    if e.size < 2:
        return np.array([a, b], dtype=float)
    scale = max(1.0, abs(a), abs(b))
    keep = np.concatenate([[True], np.diff(e) > 1e-13 * scale])
    e = e[keep]
    e[0], e[-1] = a, b
    return e


def ring_edges(top: float, n_rings: int, bottom: float | None = None):
    """Dyadic ring edges ``top*2^-n, ..., top/2, top`` (or down to ``bottom``)."""
    if bottom is not None:
        n = max(1, int(math.ceil(math.log2(top / bottom) - 1e-12)))
        e = top * 2.0 ** -np.arange(n, -1, -1, dtype=float)
        e[0] = bottom
        return e
    return top * 2.0 ** -np.arange(n_rings, -1, -1, dtype=float)
