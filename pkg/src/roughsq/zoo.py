"""Closed-form catalogue of test and counterexample functions.

Every entry is built by :func:`make_function` and returned as a
:class:`CatalogEntry` holding exact :class:`~roughsq.fnspace.Evaluator`
objects for ``f`` and, where it exists, ``f'``.  Defining constraints are
checked when an entry is constructed.

Compactly supported profiles are assembled from the smoothstep polynomial
of order 7 (a C^7 transition with exact plateau values).  Low moments are
removed by subtracting fixed auxiliary bumps with coefficients solved from
a 3x3 (or 2x2) linear system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import legendre as _leg
from scipy.special import comb

from .fnspace import Evaluator

__all__ = [
    "CatalogEntry",
    "CATALOGUE",
    "make_function",
    "smoothstep",
    "smoothstep_deriv",
    "moments",
]

_ORDER = 7
_SS_COEF = np.array(
    [comb(_ORDER + k, k, exact=True) * comb(2 * _ORDER + 1, _ORDER - k, exact=True)
     * (-1) ** k for k in range(_ORDER + 1)],
    dtype=float,
)


def smoothstep(u):
    """Smoothstep of order 7: 0 for u <= 0, 1 for u >= 1, C^7 in between."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    poly = np.zeros_like(u)
    for c in _SS_COEF[::-1]:
        poly = poly * u + c
    return u ** (_ORDER + 1) * poly


def smoothstep_deriv(u):
    """Derivative of :func:`smoothstep` with respect to ``u``."""
    u = np.asarray(u, dtype=float)
    inside = (u > 0) & (u < 1)
    uc = np.clip(u, 0.0, 1.0)
    # d/du [u^(N+1) sum c_k u^k] = sum c_k (N+1+k) u^(N+k)
    out = np.zeros_like(uc)
    for k, c in enumerate(_SS_COEF):
        out += c * (_ORDER + 1 + k) * uc ** (_ORDER + k)
    return np.where(inside, out, 0.0)


def _bump(y):
    """Even C^7 bump: 1 at 0, 0 for |y| >= 1."""
    return 1.0 - smoothstep(np.abs(y))


def _bump_d(y):
    return -smoothstep_deriv(np.abs(y)) * np.sign(y)


def _plateau(x, a, b, ramp_l, ramp_r):
    """1 on [a, b], smooth ramps of widths ramp_l / ramp_r, 0 outside."""
    up = smoothstep((x - (a - ramp_l)) / ramp_l)
    down = 1.0 - smoothstep((x - b) / ramp_r)
    return np.where(x < a, up, np.where(x > b, down, 1.0))


def _plateau_d(x, a, b, ramp_l, ramp_r):
    up = smoothstep_deriv((x - (a - ramp_l)) / ramp_l) / ramp_l
    down = -smoothstep_deriv((x - b) / ramp_r) / ramp_r
    return np.where(x < a, up, np.where(x > b, down, 0.0))


def moments(fn: Callable, lo: float, hi: float, orders=(0, 1, 2), breaks=(),
            n: int = 64, panels: int = 64) -> np.ndarray:
    """Composite Gauss-Legendre moments ``int x^j fn(x) dx`` on ``[lo, hi]``."""
    edges = np.unique(np.concatenate([np.linspace(lo, hi, panels + 1),
                                      np.asarray(breaks, float)]))
    edges = edges[(edges >= lo) & (edges <= hi)]
    t, w = _leg.leggauss(n)
    a, b = edges[:-1, None], edges[1:, None]
    x = 0.5 * (a + b) + 0.5 * (b - a) * t
    wx = 0.5 * (b - a) * w
    fx = fn(x)
    return np.array([np.sum(wx * x**j * fx) for j in orders])


@dataclass(frozen=True)
class CatalogEntry:
    """A catalogue function with optional exact derivative."""

    id: str
    params: dict
    f: Evaluator
    df: Optional[Evaluator]
    note: str


def _entry(id_, params, fn, dfn, *, support=math.inf, smooth="smooth", flat=None,
           kinks=(), note=""):
    f = Evaluator(id_, dict(params), fn, support, smooth, flat, tuple(kinks))
    df = None
    if dfn is not None:
        df = Evaluator(id_ + "'", dict(params), dfn, support, "smooth"
                       if smooth == "smooth" else "lipschitz", flat, tuple(kinks))
    return CatalogEntry(id_, dict(params), f, df, note)


def _affine(a=1.0, b=0.0):
    return _entry("affine", dict(a=a, b=b), lambda x: a * x + b,
                  lambda x: np.full_like(x, a, dtype=float),
                  note="affine map; every difference quotient equals the slope")


def _quadratic(c=1.0):
    return _entry("quadratic", dict(c=c), lambda x: c * x * x, lambda x: 2 * c * x,
                  note="x^2; difference-quotient differences are exactly s - t")


def _gaussian(center=0.0, width=1.0, amp=1.0):
    if width <= 0:
        raise ValueError("gaussian: width must be positive")

    def f(x):
        return amp * np.exp(-((x - center) / width) ** 2)

    def df(x):
        y = (x - center) / width
        return -2.0 * amp * y / width * np.exp(-y * y)

    return _entry("gaussian", dict(center=center, width=width, amp=amp), f, df,
                  note="Gaussian")


def _smooth_bump(center=0.0, radius=1.0, amp=1.0):
    if radius <= 0:
        raise ValueError("smooth_bump: radius must be positive")

    def f(x):
        return amp * _bump((x - center) / radius)

    def df(x):
        return amp * _bump_d((x - center) / radius) / radius

    sup = abs(center) + radius
    return _entry("smooth_bump", dict(center=center, radius=radius, amp=amp), f, df,
                  support=sup, note="C^7 bump built from the order-7 smoothstep")


def _corrected(base, dbase, aux, daux, lo, hi, breaks, orders):
    """Subtract auxiliary bumps so that the listed moments vanish."""
    mb = moments(base, lo, hi, orders, breaks)
    A = np.column_stack([moments(a, lo, hi, orders, breaks) for a in aux])
    coef = np.linalg.solve(A, mb)

    def f(x):
        return base(x) - sum(c * a(x) for c, a in zip(coef, aux))

    def df(x):
        return dbase(x) - sum(c * a(x) for c, a in zip(coef, daux))

    return f, df, coef


def _vanishing_moment_bump(order=2):
    if order != 2:
        raise ValueError("vanishing_moment_bump: only order=2 is catalogued")
    ramp = 0.4
    breaks = (-1.5, -0.4, 0.0, 1.0, 1.4, 1.5)

    def base(x):
        return _plateau(x, 0.0, 1.0, ramp, ramp)

    def dbase(x):
        return _plateau_d(x, 0.0, 1.0, ramp, ramp)

    centers, radii = (-1.05, -0.5, 1.25), (0.4, 0.45, 0.2)
    aux = [lambda x, c=c, r=r: _bump((x - c) / r) for c, r in zip(centers, radii)]
    daux = [lambda x, c=c, r=r: _bump_d((x - c) / r) / r for c, r in zip(centers, radii)]
    f, df, _ = _corrected(base, dbase, aux, daux, -1.5, 1.5,
                          breaks + tuple(centers), (0, 1, 2))
    e = _entry("vanishing_moment_bump", dict(order=order), f, df, support=1.5,
               note="equals 1 on [0,1], support in (-3/2, 3/2), moments 0..2 vanish")
    x01 = np.linspace(0.0, 1.0, 101)
    if np.max(np.abs(e.f(x01) - 1.0)) > 1e-12:
        raise ValueError("vanishing_moment_bump: plateau constraint violated")
    m = moments(e.f, -1.5, 1.5, (0, 1, 2), breaks + tuple(centers))
    if np.max(np.abs(m)) > 1e-8:
        raise ValueError(f"vanishing_moment_bump: moments {m} not below 1e-8")
    return e


def _quadratic_cap(cap=4.0):
    if cap <= 0:
        raise ValueError("quadratic_cap: cap must be positive")
    ramp = 1.0
    c1, r1, c2, r2 = cap + 1.5, 0.4, cap + 2.5, 0.5
    sup = c2 + r2
    breaks = (-sup, -c2, -c1, -cap - ramp, -cap, cap, cap + ramp, c1, c2, sup)

    def base(x):
        return x * x * _plateau(x, -cap, cap, ramp, ramp)

    def dbase(x):
        return 2 * x * _plateau(x, -cap, cap, ramp, ramp) + x * x * _plateau_d(
            x, -cap, cap, ramp, ramp)

    def pair(c, r):
        return lambda x: _bump((x - c) / r) + _bump((x + c) / r)

    def dpair(c, r):
        return lambda x: (_bump_d((x - c) / r) + _bump_d((x + c) / r)) / r

    f, df, _ = _corrected(base, dbase, [pair(c1, r1), pair(c2, r2)],
                          [dpair(c1, r1), dpair(c2, r2)], -sup, sup, breaks, (0, 2))
    e = _entry("quadratic_cap", dict(cap=cap), f, df, support=sup,
               note="equals x^2 on |x| <= cap, compact support, moments 0..2 vanish")
    xs = np.linspace(-cap, cap, 201)
    if np.max(np.abs(e.f(xs) - xs**2)) > 1e-12:
        raise ValueError("quadratic_cap: x^2 constraint violated")
    m = moments(e.f, -sup, sup, (0, 1, 2), breaks)
    if np.max(np.abs(m)) > 1e-8 * max(1.0, cap**3):
        raise ValueError(f"quadratic_cap: moments {m} not below tolerance")
    return e


def _odd_bump():
    def h(y):
        return _plateau(y, 0.5, 1.0, 0.4, 0.9)

    def dh(y):
        return _plateau_d(y, 0.5, 1.0, 0.4, 0.9)

    def f(x):
        return h(x) - h(-x)

    def df(x):
        return dh(x) + dh(-x)

    e = _entry("odd_bump", {}, f, df, support=2.0,
               note="odd, support in (-2, 2), equals 1 on [1/2, 1]")
    y = np.linspace(0.5, 1.0, 51)
    if np.max(np.abs(e.f(y) - 1.0)) > 1e-12:
        raise ValueError("odd_bump: plateau constraint violated")
    xs = np.linspace(-2.5, 2.5, 1001)
    if np.max(np.abs(e.f(xs) + e.f(-xs))) > 0:
        raise ValueError("odd_bump: parity violated")
    return e


def _heaviside_reg(j=10.0):
    if not j >= 1:
        raise ValueError("heaviside_reg: j must be >= 1")
    j = float(j)

    def f(x):
        return np.clip(j * x, 0.0, 1.0)

    def df(x):
        return np.where((x >= 0) & (x <= 1.0 / j), j, 0.0)

    e = _entry("heaviside_reg", dict(j=j), f, df, smooth="lipschitz", flat=1.0 / j,
               kinks=(0.0, 1.0 / j),
               note="0 for x <= 0, j x on [0, 1/j], 1 afterwards; ||f'||_1 = 1")
    return e


def _weierstrass_terms(b, scale=1.0):
    # tail bound b^-N / (1 - 1/b) below 1e-12 * scale
    return int(math.ceil(math.log(1e12 / (scale * (1 - 1 / b))) / math.log(b)))


def _weierstrass(b=2.0, terms=None):
    if not b > 1:
        raise ValueError("weierstrass: b must exceed 1")
    if terms is None:
        terms = _weierstrass_terms(b)
    terms = int(terms)
    if terms < 1:
        raise ValueError("weierstrass: need at least one term")
    freqs = b ** np.arange(1, terms + 1, dtype=float)

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for fr in freqs[::-1]:
            out += np.cos(fr * x) / fr
        return out

    return _entry("weierstrass", dict(b=b, terms=terms), f, None, smooth="zygmund",
                  note="lacunary cosine series; Zygmund class, nowhere differentiable "
                       "above the truncation scale b^-terms")


def _bandlimited_random(seed=0, modes=8, period=16.0):
    rng = np.random.default_rng(seed)
    n = np.arange(1, modes + 1)
    a = rng.standard_normal(modes) / n
    b = rng.standard_normal(modes) / n
    w = 2.0 * np.pi * n / period

    def f(x):
        x = np.asarray(x, dtype=float)[..., None]
        return np.sum(a * np.cos(w * x) + b * np.sin(w * x), axis=-1)

    def df(x):
        x = np.asarray(x, dtype=float)[..., None]
        return np.sum(w * (-a * np.sin(w * x) + b * np.cos(w * x)), axis=-1)

    e = _entry("bandlimited_random", dict(seed=seed, modes=modes, period=period), f,
               df, note="random trigonometric polynomial, frequencies 2 pi n / period")
    return e


def _zygmund_mix(corner=0.3):
    def f(x):
        return 0.5 * np.sin(2 * x) + np.abs(x - corner) * _bump((x - corner) / 2.0)

    def df(x):
        y = x - corner
        return (np.cos(2 * x) + np.sign(y) * _bump(y / 2.0)
                + np.abs(y) * _bump_d(y / 2.0) / 2.0)

    return _entry("zygmund_mix", dict(corner=corner), f, df, smooth="lipschitz",
                  kinks=(corner,),
                  note="smooth part plus one |x - corner| type corner")


CATALOGUE: dict[str, Callable[..., CatalogEntry]] = {
    "affine": _affine,
    "quadratic": _quadratic,
    "gaussian": _gaussian,
    "smooth_bump": _smooth_bump,
    "vanishing_moment_bump": _vanishing_moment_bump,
    "quadratic_cap": _quadratic_cap,
    "odd_bump": _odd_bump,
    "heaviside_reg": _heaviside_reg,
    "weierstrass": _weierstrass,
    "bandlimited_random": _bandlimited_random,
    "zygmund_mix": _zygmund_mix,
}


def make_function(id: str, params: Optional[dict] = None, **kw) -> CatalogEntry:
    """Build catalogue entry ``id`` with ``params`` (or keyword overrides)."""
    if id not in CATALOGUE:
        raise KeyError(f"unknown catalogue id {id!r}; known: {sorted(CATALOGUE)}")
    p = dict(params or {})
    p.update(kw)
    return CATALOGUE[id](**p)
