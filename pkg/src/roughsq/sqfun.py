"""Square functions built from differences of difference quotients.

With ``q(u) = (g(x+u) - g(x)) / u`` the module evaluates

* ``s_alpha``: ``(∬ |q(s) - q(t)|^2 |s-t|^(-2 alpha) ds dt)^(1/2)`` over the
  box ``|s|, |t| <= R``;
* ``g_alpha``: the second-difference square function
  ``(∫_0^R |g(x+2t) - 2 g(x+t) + g(x)|^2 t^(-1-2 alpha) dt)^(1/2)``;
* ``g_alpha_m``: ``(∫_{|t|<=R} |q(mt) - q(t)|^2 |t|^(1-2 alpha) dt)^(1/2)``;
* ``s_alpha_via_m``: ``s_alpha`` rebuilt from ``g_alpha_m`` by ``s = m t``;
* ``q_square``: the companion square function with the
  ``(g(x+mt) - g(x+t)) / ((m-1) t)`` quotient over ``1 < |m| <= 2``;
* ``s_local``: the ``alpha = 1`` integral over the diamond ``|s|+|t| < delta``.

Region bookkeeping for the ``m`` form.  The integrand of ``s_alpha`` is
symmetric under ``s <-> t``, so the box integral is twice the integral over
``|s| > |t|``.  There, put ``s = m t`` with ``|m| > 1`` (``ds = |t| dm``):
``|s - t|^(-2 alpha) = |m-1|^(-2 alpha) |t|^(-2 alpha)`` and the box
constraint ``|s| <= R`` becomes ``|t| <= R/|m|``.  Hence

    S^2 = 2 ∫_{|m|>1} G_m(R/|m|)^2 |m-1|^(-2 alpha) dm,

where ``G_m(T)`` is ``g_alpha_m`` truncated at ``|t| <= T``.  The identity
is exact for every finite ``R``, which is what the mode-equivalence checks
rely on.

Quadrature.  All rules are composite Gauss-Legendre on panels.  Near the
diagonal (or near ``t = 0``) panels shrink dyadically ("rings") and the
innermost gap is closed with the analytic power-law remainder of a smooth
integrand.  Away from the region where ``g`` varies, panels grow
geometrically, so compactly supported inputs admit very large ``R`` at
logarithmic cost.  Every result is a :class:`SqResult`, a ``float`` carrying
an error estimate from a second pass at doubled resolution.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from ._quad import clean_edges, graded_edges, panel_rule
from .fnspace import Evaluator, GridFunction

__all__ = [
    "SqParams",
    "SqResult",
    "s_alpha",
    "g_alpha",
    "g_alpha_m",
    "s_alpha_via_m",
    "q_square",
    "quotient_forms",
    "s_local",
    "majorization_constant",
    "marcinkiewicz_constant",
    "fails_to_stabilize",
    "refinement_values",
    "evaluate_many",
]

_POLICIES = ("rings", "midpoint")
_MODES = ("st", "m")


@dataclass(frozen=True)
class SqParams:
    """Quadrature parameters shared by all square functions.

    Parameters
    ----------
    alpha : float
        Smoothness exponent.
    R : float
        Truncation radius (box ``|s|,|t| <= R``, or ``|t| <= R``).
    policy : {"rings", "midpoint"}
        Diagonal treatment.  ``"rings"`` uses dyadic ring refinement with an
        analytic inner remainder; ``"midpoint"`` is the plain offset tensor
        midpoint rule with the diagonal cells left out.
    resolution : int
        Nodes per unit length in the bulk of the rule.
    mode : {"st", "m"}
        Parametrisation used by :func:`s_alpha`.
    n_rings : int
        Number of dyadic rings below the unit scale.
    order : int
        Gauss-Legendre order per panel.
    eps_cut : float, optional
        If given, the diagonal band ``|s-t| < eps_cut`` is excluded and no
        remainder is added.  Needed for ``alpha >= 3/2``.
    estimate_error : bool
        Also evaluate at ``2 * resolution``, return that finer value and
        attach the difference of the two passes as the error estimate.
    estimate_tail : bool or "fit"
        Attach ``value(2R) - value(R)``; ``"fit"`` also evaluates at ``4R``
        and records the fitted power of the tail of the squared integral.
    """

    alpha: float = 1.0
    R: float = 8.0
    policy: str = "rings"
    resolution: int = 32
    mode: str = "st"
    n_rings: int = 12
    order: int = 8
    eps_cut: Optional[float] = None
    estimate_error: bool = True
    estimate_tail: object = False

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError(f"truncation radius must be positive and finite, got {self.R}")
        if self.resolution < 4:
            raise ValueError(f"resolution must be at least 4, got {self.resolution}")
        if self.policy not in _POLICIES:
            raise ValueError(f"unknown diagonal policy {self.policy!r}")
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n_rings < 1 or self.order < 1:
            raise ValueError("n_rings and order must be positive")
        if self.eps_cut is not None and not self.eps_cut > 0:
            raise ValueError("eps_cut must be positive")


class SqResult(float):
    """A float with ``err``, ``tail``, ``tail_exponent`` and ``remainder``."""

    def __new__(cls, value, err=float("nan"), tail=float("nan"),
                tail_exponent=float("nan"), remainder=0.0):
        obj = super().__new__(cls, value)
        obj.err = float(err)
        obj.tail = float(tail)
        obj.tail_exponent = float(tail_exponent)
        obj.remainder = float(remainder)
        return obj

    @property
    def value(self) -> float:
        return float(self)

    def __repr__(self):
        return f"SqResult({float(self)!r}, err={self.err:.3g}, tail={self.tail:.3g})"


# --------------------------------------------------------------------------
# input handling


class _Input:
    """Uniform view of an Evaluator or GridFunction around a base point."""

    def __init__(self, g, x: float, reach: float):
        self.x = float(x)
        if isinstance(g, GridFunction):
            grid = g.grid
            tol = 1e-9 * grid.h
            if x - reach < grid.x0 - tol or x + reach > grid.right + tol:
                raise ValueError(
                    f"evaluation at x={x} with reach {reach} needs samples outside "
                    f"the grid [{grid.x0}, {grid.right}]"
                )
            self.grid = g
            self.f = g
            self.zone = None
            self.kinks = ()
        elif isinstance(g, Evaluator):
            self.grid = None
            self.f = g
            rho = g.flat_radius
            self.zone = (-rho - x, rho - x) if math.isfinite(rho) else None
            self.kinks = tuple(float(k) - x for k in g.kinks)
        elif callable(g):
            self.grid = None
            self.f = g
            self.zone = None
            self.kinks = ()
        else:
            raise TypeError(f"cannot evaluate object of type {type(g).__name__}")
        self.gx = float(np.asarray(self.f(np.array([self.x])))[0])

    def q(self, u):
        u = np.asarray(u, dtype=float)
        return (np.asarray(self.f(self.x + u)) - self.gx) / u

    def zone_or(self, lo, hi):
        """Variation zone (relative to x), or the whole interval if unknown."""
        if self.zone is None:
            return (lo, hi)
        return self.zone


def _width(p_res: int, order: int) -> float:
    return order / p_res


def _edges(a, b, zones_widths, breaks=(), grade=1.5):
    """Union of graded edge sets, one per ``(zone, width)`` pair."""
    if not b > a:
        return np.array([a, b], dtype=float)
    parts = []
    br = [v for v in breaks if a < v < b]
    for zone, w in zones_widths:
        z0, z1 = max(zone[0], a), min(zone[1], b)
        if z1 < z0:
            # zone lies outside: anchor the grading at the nearest end
            z0 = z1 = a if zone[1] < a else b
        parts.append(graded_edges(a, b, [(z0, z1)], w, grade=grade, breaks=br))
    if not parts:
        parts.append(np.array([a, b]))
    return clean_edges(np.concatenate(parts), a, b)


def _ring_edges(top, n_rings, width, bottom=None):
    """Dyadic rings on ``(0, top]`` subdivided so no panel exceeds ``width``."""
    if bottom is None:
        e = top * 2.0 ** -np.arange(n_rings, -1, -1, dtype=float)
    else:
        n = max(1, int(math.ceil(math.log2(top / bottom) - 1e-12)))
        e = top * 2.0 ** -np.arange(n, -1, -1, dtype=float)
        e[0] = bottom
    out = [e[:1]]
    for a, b in zip(e[:-1], e[1:]):
        k = max(1, int(math.ceil((b - a) / width - 1e-9)))
        out.append(np.linspace(a, b, k + 1)[1:])
    return np.concatenate(out)


def _with_breaks(edges, breaks):
    """Insert the ``breaks`` that fall strictly inside ``edges``."""
    lo, hi = edges[0], edges[-1]
    inner = [b for b in breaks if lo < b < hi]
    if not inner:
        return edges
    return clean_edges(np.concatenate([edges, inner]), lo, hi)


def _power_remainder(phi1, t1, eps, beta):
    """``∫_0^eps phi1 (t/t1)^beta dt``; ``inf`` when the power is not integrable."""
    if eps <= 0 or phi1 == 0:
        return 0.0
    if beta <= -1:
        return math.inf
    return phi1 * eps ** (beta + 1) / ((beta + 1) * t1 ** beta)


def _half_line(T, zones_widths, breaks, width, order, n_rings, ring_top):
    """Rule on ``(0, T]``: rings below ``ring_top``, graded panels above.

    Returns ``(nodes, weights, eps)`` where ``eps`` is the bottom ring edge.
    """
    top = min(ring_top, T)
    rings = _with_breaks(_ring_edges(top, n_rings, width), breaks)
    if T > top:
        above = _edges(top, T, zones_widths, breaks)
        edges = np.concatenate([rings, above[1:]])
    else:
        edges = rings
    t, w = panel_rule(edges, order)
    return t, w, rings[0]


def _finish(compute: Callable, p: SqParams) -> SqResult:
    """Run ``compute(R, res, n_rings) -> (integral, remainder)`` with diagnostics.

    With ``p.estimate_error`` the rule is also run at doubled resolution (and
    one more ring); the finer value is returned and the difference of the
    two passes, plus half the modelled inner remainder, is the error.
    """
    I, rem = compute(p.R, p.resolution, p.n_rings)
    if not math.isfinite(I):
        return SqResult(math.inf, math.inf, remainder=rem)
    val = math.sqrt(max(I, 0.0))
    I1, val1 = I, val
    err = float("nan")
    if p.estimate_error:
        I2, rem2 = compute(p.R, 2 * p.resolution, p.n_rings + 1)
        v2 = math.sqrt(max(I2, 0.0))
        # remainder terms are model estimates: charge half of them
        rem_unc = 0.5 * abs(rem2) / (2.0 * v2) if v2 > 0 else math.sqrt(0.5 * abs(rem2))
        err = abs(val - v2) + rem_unc + 4e-15 * v2
        I, val, rem = I2, v2, rem2
    tail = tail_exp = float("nan")
    if p.estimate_tail:
        I_2R, _ = compute(2 * p.R, p.resolution, p.n_rings)
        tail = math.sqrt(max(I_2R, 0.0)) - val1
        if p.estimate_tail == "fit":
            I_4R, _ = compute(4 * p.R, p.resolution, p.n_rings)
            d1, d2 = I_2R - I1, I_4R - I_2R
            if d1 > 0 and d2 > 0:
                tail_exp = math.log2(d2 / d1)
    return SqResult(val, err, tail, tail_exp, rem)


# --------------------------------------------------------------------------
# S_alpha in the (s, t) plane


def _st_rings(inp: _Input, R, alpha, res, order, n_rings, eps_cut):
    """Rings rule in coordinates ``(s, d = s - t)``.

    ``S^2 = 2 ∫_0^{2R} d^(-2 alpha) F(d) dd`` with
    ``F(d) = ∫_{d-R}^{R} |q(s) - q(s-d)|^2 ds``.
    """
    w = _width(res, order)
    D0 = min(1.0, 2 * R)
    zone = inp.zone_or(-R, R)
    hull = (min(zone[0], 0.0), max(zone[1], 0.0))
    pts = [0.0] + list(inp.kinks)
    if inp.zone is not None:
        pts += list(zone)
    dbreaks = sorted({abs(a - b) for a in pts for b in pts if a != b})
    rings = _with_breaks(_ring_edges(D0, n_rings, w, bottom=eps_cut), dbreaks)
    eps = rings[0]
    d_hi = min(2 * R, hull[1] - hull[0])
    # the box edges meet the variation zone when d - R or R - d lies in it
    dzones = [((D0, max(D0, d_hi)), w)]
    if inp.zone is not None:
        dzones += [((R + zone[0], R + zone[1]), w), ((R - zone[1], R - zone[0]), w)]
        dbreaks += [R + k for k in inp.kinks] + [R - k for k in inp.kinks]
    if 2 * R > D0:
        above = _edges(D0, 2 * R, dzones, dbreaks)
        dedges = np.concatenate([rings, above[1:]])
    else:
        dedges = rings
    dn, dw = panel_rule(dedges, order)

    S_all, W_all, blocks = [], [], []
    for d, wd in zip(dn, dw):
        a, b = d - R, R
        zw = [(zone, w), ((zone[0] + d, zone[1] + d), w)]
        br = [0.0, d] + [k for k in inp.kinks] + [k + d for k in inp.kinks]
        e = _edges(a, b, zw, br)
        s, ws = panel_rule(e, order)
        S_all.append(s)
        W_all.append(ws * (2.0 * wd * d ** (-2.0 * alpha)))
        blocks.append((s, ws))
    S = np.concatenate(S_all)
    W = np.concatenate(W_all)
    Tn = S - np.repeat(dn, [len(s) for s in S_all])

    total = _pair_sum(inp, S, Tn, W)
    rem = 0.0
    if eps_cut is None:
        s1, w1 = blocks[0]
        F1 = _pair_sum(inp, s1, s1 - dn[0], w1)
        rem = 2.0 * _power_remainder(F1 * dn[0] ** (-2 * alpha), dn[0], eps, 2 - 2 * alpha)
    return total + rem, rem


def _pair_sum(inp: _Input, s, t, w) -> float:
    if inp.grid is not None:
        gf = inp.grid
        return kernels.interp_pair_sum(
            np.ascontiguousarray(gf.values, dtype=float), gf.grid.x0, gf.grid.h, inp.x,
            np.ascontiguousarray(s), np.ascontiguousarray(t), np.ascontiguousarray(w),
        )
    d = inp.q(s) - inp.q(t)
    return float(np.sum(w * d * d))


def _st_midpoint(inp: _Input, R, alpha, res):
    """Offset tensor midpoint rule; diagonal cells are left out."""
    h = 1.0 / res
    n = int(math.ceil(2 * R / h))
    h = 2 * R / n
    c = -R + (np.arange(n) + 0.5) * h
    qc = inp.q(c)
    total = 0.0
    for i in range(n):
        diff = qc[i] - qc
        dist = np.abs(c[i] - c)
        dist[i] = 1.0
        row = diff * diff * dist ** (-2.0 * alpha)
        row[i] = 0.0
        total += float(np.sum(row))
    return total * h * h, 0.0


def s_alpha(g, x: float, p: SqParams = SqParams()) -> SqResult:
    """Truncated square function ``S_alpha g(x)``.

    With ``p.mode == "m"`` the value is computed by :func:`s_alpha_via_m`.
    """
    if p.mode == "m":
        return s_alpha_via_m(g, x, p)

    def compute(R, res, n_rings):
        inp = _Input(g, x, R)
        if p.policy == "midpoint":
            return _st_midpoint(inp, R, p.alpha, res)
        eps_cut = p.eps_cut
        if eps_cut is None and p.alpha >= 1.5:
            # the smooth-case remainder is not integrable: cut at the bottom ring
            eps_cut = min(1.0, 2 * R) * 2.0 ** -n_rings
        return _st_rings(inp, R, p.alpha, res, p.order, n_rings, eps_cut)

    return _finish(compute, p)


# --------------------------------------------------------------------------
# one-dimensional square functions


def _side_integral(phi, T, zones_widths, breaks, res, order, n_rings, ring_top, beta):
    """``∫_0^T phi(t) dt`` with rings at 0 and a power-law remainder."""
    if T <= 0:
        return 0.0, 0.0
    t, w, eps = _half_line(T, zones_widths, breaks, _width(res, order), order,
                           n_rings, ring_top)
    v = phi(t)
    rem = _power_remainder(float(v[0]), float(t[0]), eps, beta)
    return float(np.sum(w * v)), rem


def _reflect(zw):
    return [((-z[1], -z[0]), w) for z, w in zw]


def g_alpha(g, x: float, p: SqParams = SqParams(), two_sided: bool = False) -> SqResult:
    """Second-difference square function truncated at ``t <= R``.

    ``two_sided=True`` integrates over ``0 < |t| <= R`` instead, which is the
    quantity equal to ``2 * g_alpha_m(g, x, 2, p)``.
    """
    alpha = p.alpha

    def compute(R, res, n_rings):
        inp = _Input(g, x, 2 * R)
        f, gx = inp.f, inp.gx
        w = _width(res, order=p.order)
        Z = inp.zone_or(-2 * R, 2 * R)
        zw = [(Z, w), ((Z[0] / 2, Z[1] / 2), w / 2)]
        br = list(inp.kinks) + [k / 2 for k in inp.kinks]

        def phi(t):
            d2 = np.asarray(f(x + 2 * t)) - 2 * np.asarray(f(x + t)) + gx
            return d2 * d2 * np.abs(t) ** (-1.0 - 2 * alpha)

        I, rem = _side_integral(phi, R, zw, br, res, p.order, n_rings, 1.0, 3 - 2 * alpha)
        if two_sided:
            I2, rem2 = _side_integral(lambda t: phi(-t), R, _reflect(zw),
                                      [-b for b in br], res, p.order, n_rings, 1.0,
                                      3 - 2 * alpha)
            I, rem = I + I2, rem + rem2
        return I + rem, rem

    return _finish(compute, p)


def _gm_integral(inp: _Input, m, T, alpha, res, order, n_rings):
    """``∫_{|t|<=T} |q(mt) - q(t)|^2 |t|^(1-2 alpha) dt`` and its remainder."""
    am = abs(m)
    w = _width(res, order)
    Z = inp.zone_or(-T * max(am, 1.0), T * max(am, 1.0))
    Zm = sorted((Z[0] / m, Z[1] / m))
    zw = [(Z, w), (tuple(Zm), w / am)]
    br = list(inp.kinks) + [k / m for k in inp.kinks]
    top = min(1.0, 1.0 / am)

    def phi(t):
        d = inp.q(m * t) - inp.q(t)
        return d * d * np.abs(t) ** (1.0 - 2 * alpha)

    Ip, rp = _side_integral(phi, T, zw, br, res, order, n_rings, top, 3 - 2 * alpha)
    In, rn = _side_integral(lambda t: phi(-t), T, _reflect(zw), [-b for b in br],
                            res, order, n_rings, top, 3 - 2 * alpha)
    return Ip + In + rp + rn, rp + rn


def g_alpha_m(g, x: float, m: float, p: SqParams = SqParams()) -> SqResult:
    """``(∫_{|t|<=R} |q(mt) - q(t)|^2 |t|^(1-2 alpha) dt)^(1/2)``."""
    if m == 0 or m == 1:
        raise ValueError(f"m must differ from 0 and 1, got {m}")

    def compute(R, res, n_rings):
        inp = _Input(g, x, R * max(abs(m), 1.0))
        return _gm_integral(inp, m, R, p.alpha, res, p.order, n_rings)

    return _finish(compute, p)


def s_alpha_via_m(g, x: float, p: SqParams = SqParams(), m_max: Optional[float] = None
                  ) -> SqResult:
    """``S_alpha`` from ``S^2 = 2 ∫_{|m|>1} G_m(R/|m|)^2 |m-1|^(-2 alpha) dm``.

    The ``m`` integral is cut at ``|m| <= m_max`` (default ``1e4 * max(R, 1)``)
    and the rest is closed with the ``|m|^(-2)`` decay of the integrand.
    """
    alpha = p.alpha

    def compute(R, res, n_rings):
        inp = _Input(g, x, R)
        M = m_max if m_max is not None else 1e4 * max(R, 1.0)
        w = _width(res, p.order)
        ratio = 1.0 + 8.0 / res

        def density(ms):
            out = np.empty(len(ms))
            for i, m in enumerate(ms):
                I, _ = _gm_integral(inp, m, R / abs(m), alpha, res, p.order, n_rings)
                out[i] = I * abs(m - 1) ** (-2 * alpha)
            return out

        # m = 1 + u, rings in u near the singular point
        rings = _ring_edges(1.0, n_rings, w)
        geo = [2.0]
        while geo[-1] < M:
            geo.append(min(geo[-1] * ratio, M))
        u_edges = np.concatenate([rings, np.asarray(geo[1:]) - 1.0])
        u, wu = panel_rule(u_edges, p.order)
        dens_p = density(1.0 + u)
        Ip = float(np.sum(wu * dens_p))
        rem = _power_remainder(dens_p[0], u[0], rings[0], 2 - 2 * alpha)
        # m = -v, v > 1: no singularity at v = 1
        v_edges = np.concatenate([np.linspace(1.0, 2.0, max(2, int(math.ceil(1.0 / w))) + 1),
                                  np.asarray(geo[1:])])
        v, wv = panel_rule(v_edges, p.order)
        dens_n = density(-v)
        In = float(np.sum(wv * dens_n))
        # tails beyond M: density ~ K m^-2
        tail = dens_p[-1] * (1.0 + u[-1]) ** 2 / M + dens_n[-1] * v[-1] ** 2 / M
        rem += tail
        return 2.0 * (Ip + In + rem), 2.0 * rem

    return _finish(compute, p)


def quotient_forms(g, x, m, t):
    """Both sides of the quotient identity at ``(x, m, t)``.

    Returns ``(lhs, qform)`` with ``lhs = q(mt) - q(t)`` and
    ``qform = (g(x+mt) - g(x+t)) / ((m-1) t) - q(t)``; the identity states
    ``lhs = (m-1)/m * qform``.
    """
    f = g
    x = np.asarray(x, dtype=float)
    m = np.asarray(m, dtype=float)
    t = np.asarray(t, dtype=float)
    fx, fmt, ft = f(x), f(x + m * t), f(x + t)
    qt = (ft - fx) / t
    lhs = (fmt - fx) / (m * t) - qt
    qform = (fmt - ft) / ((m - 1) * t) - qt
    return lhs, qform


def q_square(g, x: float, p: SqParams = SqParams()) -> SqResult:
    """Companion square function over ``1 < |m| <= 2`` and ``|t| <= R``.

    The weight is ``dt/|t| dm`` (the ``alpha = 1`` case).
    """

    def compute(R, res, n_rings):
        inp = _Input(g, x, 2 * R)
        f, gx = inp.f, inp.gx
        w = _width(res, p.order)
        Z = inp.zone_or(-2 * R, 2 * R)
        npan = max(2, res // 8)
        total = rem_total = 0.0
        for sign in (1.0, -1.0):
            mu, wm = panel_rule(np.linspace(1.0, 2.0, npan + 1), p.order)
            for mm, wmm in zip(sign * mu, wm):
                Zm = sorted((Z[0] / mm, Z[1] / mm))
                zw = [(Z, w), (tuple(Zm), w / abs(mm))]
                br = list(inp.kinks) + [k / mm for k in inp.kinks]

                def phi(t, mm=mm):
                    fmt = np.asarray(f(x + mm * t))
                    ft = np.asarray(f(x + t))
                    d = (fmt - ft) / ((mm - 1) * t) - (ft - gx) / t
                    return d * d / np.abs(t)

                Ip, rp = _side_integral(phi, R, zw, br, res, p.order, n_rings, 0.5, 1.0)
                In, rn = _side_integral(lambda t: phi(-t), R, _reflect(zw),
                                        [-b for b in br], res, p.order, n_rings, 0.5, 1.0)
                total += wmm * (Ip + In + rp + rn)
                rem_total += wmm * (rp + rn)
        return total, rem_total

    return _finish(compute, p)


# --------------------------------------------------------------------------
# local square function


_THETA_PANELS = 16
_CELLS_PER_OCTAVE = 16


def _diamond_rule(order):
    """Nodes ``(a, b)`` on ``|a| + |b| = 1`` with weights in the edge parameter.

    Edges through the diagonal points ``a = b`` are split there.
    """
    verts = np.array([(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)])
    npan = _THETA_PANELS
    th, wt = panel_rule(np.linspace(0.0, 1.0, npan + 1), order)
    A, B, W = [], [], []
    for k in range(4):
        v0, v1 = verts[k], verts[k + 1]
        A.append(v0[0] + th * (v1[0] - v0[0]))
        B.append(v0[1] + th * (v1[1] - v0[1]))
        W.append(wt)
    return np.concatenate(A), np.concatenate(B), np.concatenate(W)


def s_local(g, x: float, delta: float, p: SqParams = SqParams()) -> SqResult:
    """Local square function over ``|s| + |t| < delta`` (``alpha = 1`` only).

    In coordinates ``s = r a``, ``t = r b`` with ``|a| + |b| = 1`` the area
    element is ``r dr dtheta`` and

        S_loc^2 = ∫_0^delta h(r) dr / r,
        h(r) = ∫ |q(ra) - q(rb)|^2 / (a - b)^2 dtheta.

    The radial axis is cut into a fixed logarithmic lattice (16 cells per
    octave) starting at ``r_min = 1/(8 res)``; doubling the resolution only
    extends the lattice downwards, leaving the existing cells untouched.  On each cell ``h`` is modelled as ``c r^2`` with
    ``c`` fixed by the cell's log-midpoint, and ``(0, r_min)`` uses the same
    model.  Every contribution is nonnegative and grows with ``delta``, so
    the result is nondecreasing in ``delta`` at a fixed resolution.
    """
    if p.alpha != 1:
        raise ValueError("the local square function is defined for alpha = 1 only")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")

    def h_of(inp, r, A, B, W):
        ra = np.outer(r, A)
        rb = np.outer(r, B)
        d = inp.q(ra) - inp.q(rb)
        return (d * d / (A - B) ** 2) @ W

    def compute(R, res, n_rings):
        inp = _Input(g, x, delta)
        A, B, W = _diamond_rule(p.order)
        r_min = 1.0 / (8.0 * res)
        ratio = 2.0 ** (1.0 / _CELLS_PER_OCTAVE)
        h_min = float(h_of(inp, np.array([r_min]), A, B, W)[0])
        rem = 0.5 * h_min * min(delta / r_min, 1.0) ** 2
        if delta <= r_min:
            return rem, rem
        n_cells = int(math.ceil(math.log(delta / r_min) / math.log(ratio) - 1e-12))
        lo = r_min * ratio ** np.arange(n_cells)
        hi = np.minimum(lo * ratio, delta)
        mid = lo * math.sqrt(ratio)
        c = h_of(inp, mid, A, B, W) / mid**2
        total = float(np.sum(0.5 * c * (hi**2 - lo**2)))
        return total + rem, rem

    return _finish(compute, p)


# --------------------------------------------------------------------------
# constants and predicates


def _golden_max(fun, a, b, tol=1e-10, scan=2049):
    """Maximum of ``fun`` on ``[a, b]``: grid scan, then golden section."""
    xs = np.linspace(a, b, scan)
    vals = fun(xs)
    i = int(np.argmax(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, scan - 1)]
    invphi = (math.sqrt(5) - 1) / 2
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = float(fun(np.array([c]))[0]), float(fun(np.array([d]))[0])
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = float(fun(np.array([c]))[0])
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = float(fun(np.array([d]))[0])
    return max(float(vals[i]), fc, fd, float(fun(np.array([lo, hi])).max()))


def majorization_constant(alpha: float, m: float) -> float:
    """Constant ``C`` with ``G_m g(x) <= C S_alpha g(x)`` for ``m > 1``.

    ``C = (A / log m)^(1/2)`` where ``A`` is the maximum over ``1 <= s <= m``
    of ``((s/m)^(2-2 alpha) + 1) (s-1)^(2 alpha) / s``.
    """
    if not m > 1:
        raise ValueError(f"m must exceed 1, got {m}")
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")

    def fun(s):
        s = np.asarray(s, dtype=float)
        return ((s / m) ** (2 - 2 * alpha) + 1.0) * (s - 1.0) ** (2 * alpha) / s

    A = _golden_max(fun, 1.0, float(m))
    return math.sqrt(A / math.log(m))


def marcinkiewicz_constant(alpha: float) -> float:
    """``2 * majorization_constant(alpha, 2)``: bounds ``g_alpha`` by ``s_alpha``."""
    return 2.0 * majorization_constant(alpha, 2.0)


def fails_to_stabilize(values: Sequence[float], rtol: float = 0.02) -> bool:
    """True if some successive relative change exceeds ``rtol``."""
    v = [float(a) for a in values]
    if len(v) < 2:
        raise ValueError("need at least two values")
    for a, b in zip(v[:-1], v[1:]):
        if not (math.isfinite(a) and math.isfinite(b)):
            return True
        if abs(b - a) > rtol * max(abs(a), 1e-300):
            return True
    return False


def refinement_values(evaluate: Callable[[SqParams], float], p: SqParams,
                      doublings: int = 2):
    """Values of ``evaluate(p')`` at ``resolution * 2^k``, ``k = 0..doublings``.

    The ring count grows by one per doubling so the diagonal cut shrinks too.
    """
    out = []
    for k in range(doublings + 1):
        pk = replace(p, resolution=p.resolution * 2**k, n_rings=p.n_rings + k,
                     estimate_error=False, estimate_tail=False)
        out.append(float(evaluate(pk)))
    return out


def evaluate_many(fun: Callable, g, xs, p: SqParams, threads: Optional[int] = None,
                  **kw):
    """Evaluate ``fun(g, x, p, **kw)`` at each ``x`` using a thread pool.

    ``threads`` defaults to the ``ROUGHSQ_THREADS`` environment variable (1).
    """
    if threads is None:
        threads = int(os.environ.get("ROUGHSQ_THREADS", "1") or 1)
    xs = list(np.asarray(xs, dtype=float))
    if threads <= 1:
        return [fun(g, x, p, **kw) for x in xs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda x: fun(g, x, p, **kw), xs))
