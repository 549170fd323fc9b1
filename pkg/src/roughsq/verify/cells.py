"""Multiplier cell integrals and the Plancherel constant.

Notation.  ``rho(u) = (e^{iu} - 1)/u`` and, for a real-valued bump ``psi``,
``m(xi, s) = psi_hat(xi) s^-1 (e^{i s xi} - 1) = psi_hat(xi) xi rho(s xi)``.
Scaling ``sigma = s |xi|`` turns every cell integral into

    |xi|^(2 alpha) |psi_hat(xi)|^2 J(|xi| cell),
    J(Omega) = ∬_Omega |rho(sigma) - rho(tau)|^2 |sigma - tau|^(-2 alpha),

(or the one-term variants with ``|rho(sigma)|^2`` or ``|rho(tau)|^2``).
Both the integrand and every cell are invariant under
``(sigma, tau) -> (-sigma, -tau)``, so only ``sigma > 0`` is integrated.

Inner integral in closed form.  In coordinates ``(sigma, d = sigma - tau)``
the weight depends on ``d`` only and

    |rho(sigma) - rho(sigma - d)|^2 = A(sigma) + A(sigma - d) - 2 B,
    A(u) = (2 - 2 cos u)/u^2,
    B = (1 + cos d - cos sigma - cos(sigma - d)) / (sigma (sigma - d)).

With ``u = sigma - d`` an antiderivative in ``sigma`` is

    G = P(sigma) + P(u)
        - (2/d) [(1 + cos d)(Cin(u) - Cin(sigma)) + sin d (Si(u) + Si(sigma))],
    P(v) = 2 (Si(v) - (1 - cos v)/v),

where ``Cin(v) = ∫_0^v (1 - cos w)/w dw`` is entire.  The ``sigma``
integral over each admissible interval is therefore exact, and only the
``d`` integral (oscillating with unit frequency) is done by Gauss panels.
Over the whole line the same formula gives ``∫ H dsigma = 4 pi (1 - sin d/d)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import sici

from .._quad import panel_rule
from ..fractional import BumpSpec, default_bump
from .report import ExperimentReport, by_tier, spearman, timed

__all__ = [
    "CellIndex",
    "MultiplierProbe",
    "rho",
    "cin",
    "sigma_antiderivative",
    "cell_integral",
    "cell_bound",
    "xi_grid",
    "cell_sup",
    "lemma_region_integral",
    "lemma_bound",
    "plancherel_integral",
    "plancherel_constant",
    "PlancherelResult",
    "averaged_multiplier",
    "averaged_multiplier_leading",
    "multiplier_cell_bound",
    "cell_sweep",
    "sigma_tau_lemma_check",
]

_EULER = 0.57721566490153286061
_PANEL = 8.0          # radians per Gauss panel in d
_ORDER = 16


@dataclass(frozen=True)
class CellIndex:
    """Cell of the ``(s, t)`` decomposition.

    ``kind = "V"``: ``2^{n-k} < |s| <= 2^{n-k+1}``, ``2^{n-k-2} < |t| <= |s|``,
    ``2^{l-k-1} < |s - t| <= 2^{l-k}``; empty unless ``l <= n + 2``.
    ``kind = "W"``: ``2^{n-k} < |s| <= 2^{n-k+1}``,
    ``2^{l-k-1} < |t| <= 2^{l-k}`` with ``l <= n - 2``.
    ``part`` selects the integrand for W cells: ``"first"`` (``|m(s)|^2``),
    ``"second"`` (``|m(t)|^2``) or ``"full"`` (``|m(s) - m(t)|^2``).
    """

    kind: str
    n: int
    l: int
    k: int = 0
    part: str = "full"

    def __post_init__(self):
        if self.kind not in ("V", "W"):
            raise ValueError(f"cell kind must be 'V' or 'W', got {self.kind!r}")
        if self.kind == "V" and self.l > self.n + 2:
            raise ValueError(f"V cell with l={self.l} > n+2={self.n + 2} is empty")
        if self.kind == "W" and self.l > self.n - 2:
            raise ValueError(f"W cell needs l <= n-2, got l={self.l}, n={self.n}")
        if self.part not in ("full", "first", "second"):
            raise ValueError(f"unknown part {self.part!r}")
        if self.kind == "V" and self.part != "full":
            raise ValueError("V cells only carry the full integrand")

    def scale(self) -> float:
        return 2.0 ** (-self.k)


def rho(u):
    """``(e^{iu} - 1)/u`` for ``u != 0``; ``|rho(u)| <= min(1, 2/|u|)``."""
    u = np.asarray(u, dtype=float)
    if np.any(u == 0):
        raise ValueError("rho is evaluated only at u != 0")
    return np.expm1(1j * u) / u


def _rho_any(u):
    # quadrature nodes may land on u = 0 only through round-off; use the limit
    u = np.asarray(u, dtype=float)
    safe = np.where(u == 0, 1.0, u)
    return np.where(u == 0, 1j, np.expm1(1j * safe) / safe)


def cin(x):
    """Entire cosine integral ``∫_0^x (1 - cos w)/w dw`` (even in ``x``)."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x < 2.0
    xs = x[small]
    if xs.size:
        # alternating series sum_{k>=1} (-1)^{k+1} x^{2k} / (2k (2k)!)
        term = xs * xs / 2.0
        acc = term / 2.0
        for k in range(2, 16):
            term = -term * xs * xs / ((2 * k) * (2 * k - 1))
            acc = acc + term / (2 * k)
        out[small] = acc
    xl = x[~small]
    if xl.size:
        out[~small] = _EULER + np.log(xl) - sici(xl)[1]
    return out


def _P(v):
    v = np.asarray(v, dtype=float)
    si = sici(v)[0]
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(v != 0, 2.0 * np.sin(0.5 * v) ** 2 / np.where(v != 0, v, 1.0), 0.0)
    return 2.0 * (si - frac)


def sigma_antiderivative(sig, d):
    """``G(sigma; d)`` with ``dG/dsigma = |rho(sigma) - rho(sigma - d)|^2``."""
    sig, d = np.broadcast_arrays(np.asarray(sig, float), np.asarray(d, float))
    u = sig - d
    si_u, si_s = sici(u)[0], sici(sig)[0]
    br = (1.0 + np.cos(d)) * (cin(u) - cin(sig)) + np.sin(d) * (si_u + si_s)
    return _P(sig) + _P(u) - 2.0 * br / d


def _d_rule(lo, hi, breaks):
    if not hi > lo:
        return np.empty(0), np.empty(0)
    pts = [lo, hi] + [b for b in breaks if lo < b < hi]
    pts = np.unique(pts)
    edges = [pts[:1]]
    for a, b in zip(pts[:-1], pts[1:]):
        k = max(1, int(math.ceil((b - a) / _PANEL)))
        edges.append(np.linspace(a, b, k + 1)[1:])
    return panel_rule(np.concatenate(edges), _ORDER)


def _interval_sum(d, intervals):
    """Sum of ``G(hi) - G(lo)`` over per-node interval lists."""
    total = np.zeros_like(d)
    for lo, hi in intervals:
        ok = hi > lo
        if np.any(ok):
            dd = d[ok]
            total[ok] += sigma_antiderivative(hi[ok], dd) - sigma_antiderivative(lo[ok], dd)
    return total


def _v_geometry(lam, n, l):
    a = lam * 2.0**n
    c = a / 4.0
    d_lo, d_hi = lam * 2.0 ** (l - 1), min(lam * 2.0**l, 4.0 * a)
    breaks = [2 * a, a - c, a + c, 2 * a - c, 2 * a + c, 2 * c]

    def intervals(d):
        base = np.maximum(a, d / 2.0)
        top = np.full_like(d, 2 * a)
        i1 = (base, np.minimum(top, d - c))
        i2 = (np.maximum(base, d + c), top)
        return [i1, i2]

    return d_lo, d_hi, breaks, intervals


def _w_full_geometry(lam, n, l):
    a, b = lam * 2.0**n, lam * 2.0**l
    d_lo, d_hi = a - b, 2 * a + b
    breaks = [a - b / 2, a, a + b / 2, a + b, 2 * a - b, 2 * a - b / 2, 2 * a,
              2 * a + b / 2]

    def intervals(d):
        lo, hi = np.full_like(d, a), np.full_like(d, 2 * a)
        # tau = sigma - d in (b/2, b]  or  in [-b, -b/2)
        i1 = (np.maximum(lo, d + b / 2), np.minimum(hi, d + b))
        i2 = (np.maximum(lo, d - b), np.minimum(hi, d - b / 2))
        return [i1, i2]

    return d_lo, d_hi, breaks, intervals


def _two_term(lam, geometry, alphas):
    d_lo, d_hi, breaks, intervals = geometry
    d, w = _d_rule(d_lo, d_hi, breaks)
    if d.size == 0:
        return np.zeros(len(alphas))
    inner = _interval_sum(d, intervals(d))
    return np.array([2.0 * float(np.sum(w * d ** (-2.0 * al) * inner)) for al in alphas])


def _power_int(x_lo, x_hi, alpha):
    """``∫_{x_lo}^{x_hi} x^(-2 alpha) dx`` for ``0 < x_lo < x_hi``."""
    e = 1.0 - 2.0 * alpha
    if abs(e) < 1e-12:
        return np.log(x_hi / x_lo)
    return (x_hi**e - x_lo**e) / e


def _A(v):
    return 4.0 * np.sin(0.5 * v) ** 2 / (v * v)


def _one_term(lam, n, l, part, alphas):
    a, b = lam * 2.0**n, lam * 2.0**l
    if part == "first":
        # integrate |rho(sigma)|^2 over sigma in (a, 2a], tau over +-(b/2, b]
        sig, w = _d_rule(a, 2 * a, [])
        out = []
        for al in alphas:
            K = (_power_int(sig - b, sig - b / 2, al) + _power_int(sig + b / 2, sig + b, al))
            out.append(2.0 * float(np.sum(w * _A(sig) * K)))
        return np.array(out)
    tau, w = _d_rule(b / 2, b, [])
    out = []
    for al in alphas:
        K = _power_int(a - tau, 2 * a - tau, al) + _power_int(a + tau, 2 * a + tau, al)
        # both signs of tau and both signs of sigma: factor 2 for tau < 0
        out.append(2.0 * float(np.sum(w * _A(tau) * K)))
    return np.array(out)


def cell_integral(cell: CellIndex, lam: float, alphas) -> np.ndarray:
    """``J`` of the scaled cell ``lam * 2^k * cell`` for each ``alpha``.

    The ``k`` dependence cancels exactly against the ``2^{-k alpha}`` factor
    and the rescaled multiplier, so ``lam`` here is ``|2^{-k} xi|``.
    """
    alphas = np.atleast_1d(np.asarray(alphas, float))
    if cell.kind == "V":
        return _two_term(lam, _v_geometry(lam, cell.n, cell.l), alphas)
    if cell.part == "full":
        return _two_term(lam, _w_full_geometry(lam, cell.n, cell.l), alphas)
    return _one_term(lam, cell.n, cell.l, cell.part, alphas)


def cell_bound(cell: CellIndex, alpha: float) -> float:
    """Comparison quantity for the sup over ``xi`` of the cell integral.

    V cells: ``2^{n/2} 2^{l(3/2-alpha)}`` for ``n <= 0``; for ``n >= 0``,
    ``2^{-n/2} 2^{l(3/2-alpha)}`` when ``l <= 2`` and
    ``2^{-n/2} 2^{-l(alpha-1/2)}`` when ``0 <= l``; where both of the
    ``n >= 0`` cases apply the smaller is used.
    W cells: ``2^{l/2} 2^{-n alpha} min(2^{-n/2}, 2^{n/2})`` (first part),
    ``2^{-n(alpha-1/2)} min(2^{-l/2}, 2^{l/2})`` (second part),
    ``2^{n(3/2-alpha)} 2^{l/2}`` (full, ``n <= 0``).
    """
    n, l = cell.n, cell.l
    if cell.kind == "V":
        if l > n + 2:
            return 0.0
        if n <= 0:
            return 2.0 ** (n / 2) * 2.0 ** (l * (1.5 - alpha))
        cands = []
        if l <= 2:
            cands.append(2.0 ** (-n / 2) * 2.0 ** (l * (1.5 - alpha)))
        if l >= 0:
            cands.append(2.0 ** (-n / 2) * 2.0 ** (-l * (alpha - 0.5)))
        return min(cands)
    if cell.part == "first":
        return 2.0 ** (l / 2) * 2.0 ** (-n * alpha) * min(2.0 ** (-n / 2), 2.0 ** (n / 2))
    if cell.part == "second":
        return 2.0 ** (-n * (alpha - 0.5)) * min(2.0 ** (-l / 2), 2.0 ** (l / 2))
    if n > 0:
        raise ValueError("the full W-cell bound is stated for n <= 0")
    return 2.0 ** (n * (1.5 - alpha)) * 2.0 ** (l / 2)


def xi_grid(lo_oct: int, hi_oct: int, per_octave: int) -> np.ndarray:
    """Log-spaced ``xi`` values ``2^j``, ``j`` in ``[lo_oct, hi_oct]``."""
    m = (hi_oct - lo_oct) * per_octave
    return 2.0 ** (lo_oct + np.arange(m + 1) / per_octave)


@dataclass
class MultiplierProbe:
    """Tabulations of ``rho`` and of ``m(xi, s)`` used by the cell checks.

    ``rho`` is evaluated only at ``u != 0`` and the elementary bound
    ``|rho(u)| <= min(1, 2/|u|)`` is enforced on construction.
    """

    u: np.ndarray
    rho_values: np.ndarray
    bump: BumpSpec

    @classmethod
    def build(cls, bump: Optional[BumpSpec] = None, u_max: float = 1e3, n: int = 4001):
        bump = bump or default_bump()
        u = np.concatenate([-np.geomspace(u_max, 1e-6, n), np.geomspace(1e-6, u_max, n)])
        r = rho(u)
        if np.any(np.abs(r) > np.minimum(1.0, 2.0 / np.abs(u)) * (1 + 1e-12)):
            raise ValueError("|rho(u)| <= min(1, 2/|u|) violated")
        return cls(u, r, bump)

    def m(self, xi, s):
        xi, s = np.asarray(xi, float), np.asarray(s, float)
        return self.bump.psihat(xi) * np.expm1(1j * s * xi) / s


def _integral_upper(cell: CellIndex, lam: float, alpha: float) -> float:
    """Crude upper bound of :func:`cell_integral` (area times sup of the
    integrand), used only to skip ``xi`` values that cannot reach the sup."""
    n, l = cell.n, cell.l
    a, b = lam * 2.0**n, lam * 2.0**l
    if cell.kind == "V":
        d_min, area = b / 2, 4.0 * a * b / 2
        amp = 2.0 * min(1.0, 8.0 / a)
    else:
        d_min, area = a - b, 4.0 * a * b / 2
        amp = {"first": min(1.0, 2.0 / a), "second": min(1.0, 4.0 / b),
               "full": min(1.0, 2.0 / a) + min(1.0, 4.0 / b)}[cell.part]
    return area * amp * amp * d_min ** (-2.0 * alpha)


def cell_sup(cell: CellIndex, alphas, bump: Optional[BumpSpec] = None,
             per_octave: int = 64, octaves=(-3, 9), widen: bool = True,
             coarse: int = 8):
    """``sup_xi`` of ``|xi|^(2 alpha) |psi_hat(xi)|^2 J(|xi| cell)`` per ``alpha``.

    The sup is taken over ``xi = 2^j``, ``per_octave`` points per octave on
    ``[2^lo, 2^hi]``.  A first pass on ``coarse`` points per octave gives a
    floor; the fine pass skips ``xi`` whose upper bound cannot reach it.
    The integrand only depends on ``|xi|`` and the ``k`` index cancels
    (see :func:`cell_integral`), so positive ``xi`` on the ``k = 0`` cell
    suffice.  If a maximum sits at an end of the grid, the grid is widened
    by two octaves on that side once; a second boundary hit raises
    ``RuntimeError``.

    Returns ``(sups, argmax_xi, widened)`` with ``sups`` square-rooted, i.e.
    on the scale of :func:`cell_bound`.
    """
    bump = bump or default_bump()
    alphas = np.atleast_1d(np.asarray(alphas, float))
    lo, hi = octaves
    widened = False
    for attempt in range(2):
        xi = xi_grid(lo, hi, per_octave)
        pre = np.abs(bump.psihat(xi))[:, None] ** 2 * xi[:, None] ** (2 * alphas[None, :])
        vals = np.zeros((len(xi), len(alphas)))
        done = np.zeros(len(xi), bool)
        step = max(1, per_octave // coarse)
        for i in range(0, len(xi), step):
            if np.any(pre[i] > 0):
                vals[i] = pre[i] * cell_integral(cell, xi[i], alphas)
            done[i] = True
        floor = vals.max(axis=0)
        for i in np.flatnonzero(~done):
            if not np.any(pre[i] > 0):
                continue
            ub = pre[i] * np.array([_integral_upper(cell, xi[i], a) for a in alphas])
            if np.all(ub < floor):
                continue
            vals[i] = pre[i] * cell_integral(cell, xi[i], alphas)
        idx = np.argmax(vals, axis=0)
        at_lo = bool(np.any(idx == 0))
        at_hi = bool(np.any(idx == len(xi) - 1))
        if not (at_lo or at_hi):
            break
        if not widen or attempt == 1:
            raise RuntimeError(f"xi grid [2^{lo}, 2^{hi}] does not bracket the sup for {cell}")
        widened = True
        lo, hi = lo - 2 * at_lo, hi + 2 * at_hi
    sups = np.sqrt(vals[idx, np.arange(len(alphas))])
    return sups, xi[idx], widened


def lemma_region_integral(a: float, b: float, alpha: float) -> float:
    """``(∬ |rho(sigma) - rho(tau)|^2 |sigma-tau|^(-2 alpha))^(1/2)`` over
    ``a < |sigma| <= 2a``, ``a/4 < |tau| <= |sigma|``, ``b/2 < |sigma - tau| <= b``.
    """
    if not a >= b > 0:
        raise ValueError("need a >= b > 0")
    n, l = math.log2(a), math.log2(b)
    geom = _v_geometry(1.0, n, l)
    return math.sqrt(_two_term(1.0, geom, [alpha])[0])


def lemma_bound(a: float, b: float, alpha: float) -> float:
    """Three-case comparison quantity for :func:`lemma_region_integral`."""
    if a <= 1:
        return a**0.5 * b ** (1.5 - alpha)
    if b <= 1:
        return a**-0.5 * b ** (1.5 - alpha)
    return a**-0.5 * b ** (0.5 - alpha)


# --------------------------------------------------------------------------
# Plancherel constant


@dataclass(frozen=True)
class PlancherelResult:
    """``c`` with the truncated values it was extrapolated from."""

    c: float
    c_squared: float
    radii: tuple
    truncated: tuple
    tail_exponent: float
    tail_coefficient: float

    def __float__(self):
        return self.c


def plancherel_integral(R: float, resolution: int = 1, order: int = 16,
                        d_min: float = 2.0**-40) -> float:
    """``∬ |rho(sigma) - rho(tau)|^2 |sigma - tau|^-2`` over
    ``|sigma| <= R``, ``d_min < |sigma - tau| <= R`` by tensor Gauss rules.

    Coordinates ``(sigma, d = sigma - tau)``; the integrand is invariant
    under ``(sigma, d) -> (-sigma, -d)`` so only ``d > 0`` is integrated.
    The ``d`` axis is refined dyadically towards the diagonal ``d = 0``,
    where the integrand tends to ``|rho'(sigma)|^2``.  Panels elsewhere have
    width ``1/resolution`` radians in both variables.
    """
    if not R > 1:
        raise ValueError("truncation radius must exceed 1")
    rings = 2.0 ** -np.arange(0, int(math.ceil(-math.log2(d_min))) + 1)[::-1]
    step = 1.0 / resolution
    d_edges = np.concatenate([rings, np.linspace(1.0, R, int(math.ceil((R - 1) / step)) + 1)[1:]])
    d, wd = panel_rule(d_edges, order)
    s_edges = np.linspace(-R, R, int(math.ceil(2 * R / step)) + 1)
    sig, ws = panel_rule(s_edges, order)
    rs = _rho_any(sig)
    total = 0.0
    for i in range(0, d.size, 64):
        dd = d[i:i + 64, None]
        diff = rs[None, :] - _rho_any(sig[None, :] - dd)
        vals = (diff.real**2 + diff.imag**2) @ ws
        total += float(np.sum(wd[i:i + 64] * vals / (d[i:i + 64] ** 2)))
    return 2.0 * total


def plancherel_constant(radii=(32, 64, 128, 256), resolution: int = 1,
                        order: int = 16) -> PlancherelResult:
    """``c = (∬_{R^2} |rho(sigma) - rho(tau)|^2 |sigma - tau|^-2)^(1/2)``.

    Derivation.  With ``q(u) = (f(x+u) - f(x))/u``, Plancherel in ``x``
    gives ``(q(s) - q(t))^ (xi) = f_hat(xi) (rho(s xi) - rho(t xi)) xi``.
    Integrating ``|.|^2 |s - t|^-2`` over ``(s, t)`` and substituting
    ``sigma = s |xi|``, ``tau = t |xi|`` (Jacobian ``|xi|^-2``, weight
    ``|xi|^2 |sigma - tau|^-2``) yields ``||S_1 f||_2^2 = c^2 ||f'||_2^2``.

    The truncated integral is computed at each radius of ``radii``; its
    defect behaves like ``a R^-p``.  ``p`` is fitted from the last three
    values and the limit extrapolated.  A non-decaying tail
    (``p <= 0`` or non-monotone increments) raises ``RuntimeError``.
    """
    radii = tuple(float(r) for r in radii)
    if len(radii) < 3:
        raise ValueError("need at least three truncation radii")
    vals = [plancherel_integral(R, resolution, order) for R in radii]
    d1, d2 = vals[-2] - vals[-3], vals[-1] - vals[-2]
    ratio = radii[-1] / radii[-2]
    if not (d1 > 0 and d2 > 0 and d2 < d1):
        raise RuntimeError(f"tail of the Plancherel integral does not decay: {vals}")
    p = math.log(d1 / d2) / math.log(ratio)
    if not p > 0:
        raise RuntimeError(f"fitted tail exponent {p} is not positive")
    # v(R) = C - a R^-p  =>  C = v_last + d2 / (ratio^p - 1)
    C = vals[-1] + d2 / (ratio**p - 1.0)
    a = (C - vals[-1]) * radii[-1] ** p
    return PlancherelResult(math.sqrt(C), C, radii, tuple(vals), p, a)


# --------------------------------------------------------------------------
# averaged multiplier of the converse estimate


def averaged_multiplier(xi, eps: float, alpha: float, order: int = 16) -> np.ndarray:
    """Mean over ``R_eps`` of ``(q_xi(s) - q_xi(t)) |s - t|^-alpha`` where
    ``q_xi(u) = (e^{i u xi} - 1)/u``.

    ``R_eps = {eps < s < 2 eps, eps/10 < |s - t| < eps/5}`` is the product
    of ``s`` and ``d = t - s`` ranges, so a tensor Gauss rule in ``(s, d)``
    is exact up to the smoothness of the integrand.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    xi = np.atleast_1d(np.asarray(xi, float))
    s, ws = panel_rule(np.array([eps, 2 * eps]), order)
    dp, wp = panel_rule(np.array([eps / 10, eps / 5]), order)
    d = np.concatenate([-dp[::-1], dp])
    wd = np.concatenate([wp[::-1], wp])
    S, D = np.meshgrid(s, d, indexing="ij")
    W = np.outer(ws, wd)
    T = S + D
    area = float(W.sum())
    wk = W * np.abs(D) ** (-alpha) / area
    out = np.empty(xi.shape, dtype=complex)
    for i, x in enumerate(xi):
        diff = np.expm1(1j * S * x) / S - np.expm1(1j * T * x) / T
        out[i] = np.sum(wk * diff)
    return out


def averaged_multiplier_leading(xi, eps: float, alpha: float) -> np.ndarray:
    """Leading small-``eps`` behaviour of :func:`averaged_multiplier`.

    Expanding ``(e^{iu xi} - 1)/u = i xi - u xi^2/2 - i u^2 xi^3/6 + ...``,
    the ``xi^2`` term is proportional to ``t - s`` and averages to zero over
    the symmetric ``d`` range; the first surviving term is
    ``(i xi^3 / 6) mean(d (2s + d) |d|^-alpha) = (i xi^3/6) mean |d|^(2-alpha)``.
    """
    xi = np.asarray(xi, float)
    lo, hi = eps / 10, eps / 5
    e = 3.0 - alpha
    mean = (hi**e - lo**e) / (e * (hi - lo))
    return 1j * xi**3 / 6.0 * mean


# --------------------------------------------------------------------------
# experiments


def multiplier_cell_bound(cell: CellIndex, alpha: float, per_octave: int = 64,
                          bump: Optional[BumpSpec] = None) -> ExperimentReport:
    """Measured ``sup_xi`` of one cell integral divided by :func:`cell_bound`."""
    if not 0.5 < alpha < 1.5:
        raise ValueError(f"alpha must lie in (1/2, 3/2), got {alpha}")
    rep = ExperimentReport("multiplier-cell", dict(kind=cell.kind, n=cell.n, l=cell.l,
                                                   k=cell.k, part=cell.part, alpha=alpha,
                                                   per_octave=per_octave))
    with timed(rep):
        sups, at, widened = cell_sup(cell, [alpha], bump, per_octave)
        bound = cell_bound(cell, alpha)
        rep.outputs.update(sup=float(sups[0]), argmax_xi=float(at[0]), bound=bound,
                           ratio=float(sups[0]) / bound, widened=widened)
        rep.check("ratio is finite", rep.outputs["ratio"], math.inf, "<")
    return rep


def _sweep_cells(n_range, l_min):
    for n in range(n_range[0], n_range[1] + 1):
        for l in range(l_min, n + 3):
            yield CellIndex("V", n, l)
        for l in range(l_min, n - 1):
            for part in ("first", "second") + (("full",) if n <= 0 else ()):
                yield CellIndex("W", n, l, part=part)


def cell_sweep(alphas=(0.75, 1.0, 1.25), n_range=None, l_min=None,
               per_octave: int | None = None, spearman_max: float = 0.5,
               tier: str = "standard") -> ExperimentReport:
    """Ratio of measured cell sups to the stated bounds over an ``(n, l)`` sweep.

    Families: V cells, and the first, second and full W-cell integrals (the
    full one for ``n <= 0`` only).  Verdicts per ``alpha``:

    * one fitted constant, the largest ratio over all families, is finite
      (its size relative to the largest V-cell ratio is reported);
    * ``|spearman(ratio, n)|`` and ``|spearman(ratio, l)|`` below
      ``spearman_max`` in each family (no monotone trend).

    The signed correlations and the growth between the two lowest ``n``
    rows are reported as well.
    """
    n_range = n_range or by_tier(tier, (-2, 2), (-6, 6), (-6, 6))
    l_min = l_min if l_min is not None else by_tier(tier, -2, -6, -6)
    per_octave = per_octave or by_tier(tier, 16, 64, 512)
    alphas = list(alphas)
    rep = ExperimentReport("cell-bounds", dict(alphas=alphas, n_range=list(n_range),
                                               l_min=l_min, per_octave=per_octave,
                                               spearman_max=spearman_max))
    with timed(rep):
        rows = []
        for cell in _sweep_cells(n_range, l_min):
            sups, at, widened = cell_sup(cell, alphas, per_octave=per_octave)
            ratios = [float(s) / cell_bound(cell, a) for s, a in zip(sups, alphas)]
            fam = cell.kind if cell.kind == "V" else f"W-{cell.part}"
            rows.append((fam, cell.n, cell.l, float(at[0]), bool(widened), *ratios))
        cols = ["family", "n", "l", "argmax_xi", "widened"] + [f"ratio_alpha={a:g}" for a in alphas]
        rep.table = {c: [r[i] for r in rows] for i, c in enumerate(cols)}
        fams = sorted(set(r[0] for r in rows))
        for j, a in enumerate(alphas):
            key = f"alpha={a:g}"
            allr = [r[5 + j] for r in rows]
            C = max(allr)
            rep.outputs[f"constant.{key}"] = C
            rep.outputs[f"constant_over_V_max.{key}"] = C / max(
                r[5 + j] for r in rows if r[0] == "V")
            rep.flag(f"fitted constant is finite and positive ({key})",
                     math.isfinite(C) and min(allr) > 0)
            for fam in fams:
                sub = [r for r in rows if r[0] == fam]
                rat = [r[5 + j] for r in sub]
                rn = spearman([r[1] for r in sub], rat)
                rl = spearman([r[2] for r in sub], rat)
                rep.outputs[f"spearman_n.{fam}.{key}"] = rn
                rep.outputs[f"spearman_l.{fam}.{key}"] = rl
                rep.outputs[f"max_over_min.{fam}.{key}"] = max(rat) / min(rat)
                nmin = min(r[1] for r in sub)
                low = max(r[5 + j] for r in sub if r[1] == nmin)
                nxt = [r[5 + j] for r in sub if r[1] == nmin + 1]
                if nxt:
                    rep.outputs[f"lowest_row_growth.{fam}.{key}"] = low / max(nxt)
                rep.check(f"|spearman(ratio, n)| {fam} ({key})", abs(rn), spearman_max, "<")
                rep.check(f"|spearman(ratio, l)| {fam} ({key})", abs(rl), spearman_max, "<")
        rep.outputs["cells"] = len(rows)
        rep.outputs["widened"] = int(sum(r[4] for r in rows))
    return rep


def sigma_tau_lemma_check(alpha: float = 1.0, fit_at=(4.0, 1.0), slack: float = 4.0,
                          values=(1.0, 4.0, 16.0)) -> ExperimentReport:
    """Region integral of the elementary lemma against its three-case bound.

    ``C`` is fitted at ``fit_at`` and reused for all ``(a, b)`` in
    ``values^2`` with ``a >= b``; the verdict allows ``slack * C``.
    """
    rep = ExperimentReport("sigma-tau-lemma", dict(alpha=alpha, fit_at=list(fit_at),
                                                   slack=slack, values=list(values)))
    with timed(rep):
        C = lemma_region_integral(*fit_at, alpha) / lemma_bound(*fit_at, alpha)
        rows = []
        for a in values:
            for b in values:
                if a < b:
                    continue
                r = lemma_region_integral(a, b, alpha) / lemma_bound(a, b, alpha)
                rows.append((a, b, r, r / C))
        rep.table = dict(zip(("a", "b", "ratio", "ratio_over_C"), map(list, zip(*rows))))
        rep.outputs["C"] = C
        worst = max(r[3] for r in rows)
        rep.outputs["max_ratio_over_C"] = worst
        rep.check("all (a, b): integral <= slack * C * bound", worst, slack)
    return rep
