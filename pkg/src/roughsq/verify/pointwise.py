"""Pointwise differentiability experiments.

Every "limit is finite" condition is replaced by a refinement predicate:
a quantity evaluated at three successively finer scales must change by
less than ``rtol`` between them (see :func:`roughsq.sqfun.fails_to_stabilize`).

The second-difference quotient used throughout is

    D(x, h) = (g(x+2h) - g(x)) / (2h) - (g(x+h) - g(x)) / h,

and the quotient difference of the ``m``-parametrisation is
``q(mt) - q(t)`` with ``q(t) = (g(x+t) - g(x)) / t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .._quad import panel_rule
from ..fnspace import Evaluator, Grid1D, sample, zygmund_seminorm
from ..sqfun import SqParams, fails_to_stabilize, q_square, refinement_values, s_alpha, s_local
from ..zoo import make_function
from .report import ExperimentReport, by_tier, timed

__all__ = [
    "IntervalSet",
    "marcinkiewicz_integral",
    "second_quotient",
    "stein_zygmund_test",
    "eq6_modulus",
    "PointClass",
    "classify_point",
    "differentiability_classify",
    "zygmund_lemma_check",
    "q_equivalence",
]


# --------------------------------------------------------------------------
# Marcinkiewicz integral


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of closed intervals, or its closed complement.

    ``intervals`` holds ``(a, b)`` pairs with ``a <= b`` (``±inf`` allowed).
    With ``complement=True`` the set is the closure of the complement of the
    union, i.e. the complement of the open intervals ``(a, b)``.
    """

    intervals: tuple = ()
    complement: bool = False

    def __post_init__(self):
        iv = tuple(sorted((float(a), float(b)) for a, b in self.intervals))
        for a, b in iv:
            if not a <= b:
                raise ValueError(f"bad interval ({a}, {b})")
        object.__setattr__(self, "intervals", iv)

    def _pieces(self):
        """Closed intervals forming the set."""
        if not self.complement:
            return list(self.intervals)
        out, left = [], -math.inf
        for a, b in self.intervals:
            if a > left or left == -math.inf and a > -math.inf:
                out.append((left, a))
            left = max(left, b)
        if left < math.inf:
            out.append((left, math.inf))
        return out

    def dist(self, y):
        """Distance from ``y`` to the set (``inf`` for the empty set)."""
        y = np.asarray(y, dtype=float)
        d = np.full(y.shape, np.inf)
        for a, b in self._pieces():
            d = np.minimum(d, np.maximum(np.maximum(a - y, y - b), 0.0))
        return d

    def breakpoints(self):
        """Endpoints and gap midpoints, where ``dist`` has kinks."""
        pts = []
        pieces = self._pieces()
        for a, b in pieces:
            pts += [p for p in (a, b) if math.isfinite(p)]
        for (_, b0), (a1, _) in zip(pieces[:-1], pieces[1:]):
            if math.isfinite(b0) and math.isfinite(a1):
                pts.append(0.5 * (b0 + a1))
        return pts


def marcinkiewicz_integral(F: IntervalSet, lam: float, x: float, depth: int = 40,
                           order: int = 16, rtol: float = 1e-3) -> float:
    """``∫_{x-1}^{x+1} dist(y, F)^lam / |x-y|^(1+lam) dy``.

    The window is split at the kinks of ``dist``, graded geometrically
    towards them, and refined dyadically towards ``y = x`` (rings ``2^-k <= |y-x| <= 2^(1-k)``, ``k <= depth``).
    The part below the deepest ring is bounded by the last ring's value; if
    the last ring still carries more than ``rtol`` of the total, or
    ``x`` lies outside ``F``, the integral is reported as ``inf``.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if float(F.dist(x)) > 0:
        return math.inf
    edges = [x - 1.0, x + 1.0, x] + [x + s * 2.0**-k for k in range(1, depth + 1)
                                      for s in (-1.0, 1.0)]
    # dist^lam is only Hoelder at the ends of F: grade the panels towards them
    for p in F.breakpoints():
        edges += [p + s * 2.0**-k for k in range(0, depth // 2 + 1) for s in (-1.0, 1.0)]
    edges = [e for e in edges if x - 1.0 <= e <= x + 1.0]
    edges = np.unique(np.asarray(edges))
    y, w = panel_rule(edges, order)
    r = np.abs(y - x)
    vals = F.dist(y) ** lam / r ** (1.0 + lam)
    total = float(np.sum(w * vals))
    inner = r <= 2.0 ** (1 - depth)
    last = float(np.sum(w[inner] * vals[inner]))
    if total > 0 and last > rtol * total:
        return math.inf
    return total


# --------------------------------------------------------------------------
# Stein-Zygmund quantities


def second_quotient(g, x: float, h):
    """``D(x, h) = (g(x+2h) - g(x)) / (2h) - (g(x+h) - g(x)) / h``."""
    h = np.asarray(h, dtype=float)
    gx = float(np.asarray(g(np.array([x])))[0])
    return (g(x + 2 * h) - gx) / (2 * h) - (g(x + h) - gx) / h


def _log_rule(delta, octaves, per_octave=2, order=8):
    """Nodes ``|t|`` in ``[delta 2^-octaves, delta]`` with weights for ``dt/t``."""
    u, w = panel_rule(np.linspace(-octaves, 0.0, octaves * per_octave + 1), order)
    return delta * 2.0**u, w * math.log(2.0)


def stein_zygmund_test(g, x: float, delta: float, cap: float = 100.0,
                       octaves: Sequence[int] = (12, 16, 20), rtol: float = 0.02):
    """Finite surrogates of the two Stein-Zygmund conditions at ``x``.

    Returns ``(bounded, finite)``.  ``bounded``: ``max |D(x, t)|`` over
    ``0 < |t| < delta`` (log grid down to ``delta 2^-max(octaves)``) is at
    most ``cap``.  ``finite``: ``∫_{|t|<delta} D^2 dt/|t|`` truncated at
    ``delta 2^-o`` for each ``o`` in ``octaves`` passes the stabilisation
    predicate with ``rtol``.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    t, w = _log_rule(delta, max(octaves))
    D = np.concatenate([second_quotient(g, x, t), second_quotient(g, x, -t)])
    W = np.concatenate([w, w])
    T = np.concatenate([t, t])
    bounded = bool(np.max(np.abs(D)) <= cap)
    vals = [float(np.sum((W * D * D)[T >= delta * 2.0**-o])) for o in octaves]
    finite = not fails_to_stabilize(np.sqrt(vals), rtol) if vals[-1] > 0 else True
    return bounded, finite


def eq6_modulus(g, x: float, t, m):
    """``|q(mt) - q(t)| / (|m-1| (1 + |log(1/|m-1|)|))``, elementwise."""
    t = np.asarray(t, dtype=float)
    m = np.asarray(m, dtype=float)
    gx = float(np.asarray(g(np.array([x])))[0])
    diff = (g(x + m * t) - gx) / (m * t) - (g(x + t) - gx) / t
    am = np.abs(m - 1.0)
    return np.abs(diff) / (am * (1.0 + np.abs(np.log(1.0 / am))))


# --------------------------------------------------------------------------
# classifier


@dataclass
class PointClass:
    """Per-point outputs of :func:`classify_point`."""

    x: float
    eq4: float
    s_local: list
    eq6: float
    quotient_spread: float
    eq4_ok: bool
    s_local_ok: bool
    eq6_ok: bool
    differentiable: bool

    @property
    def s_side(self) -> bool:
        """Both conditions of part (a) hold."""
        return self.eq4_ok and self.s_local_ok


_M_SAMPLES = np.concatenate([1.0 + 2.0 ** -np.arange(1.0, 11.0), -1.0 - np.linspace(0, 1, 5)])


def classify_point(g, x: float, delta: float, p: SqParams, h_min: float, cap: float = 100.0,
                   rtol: float = 0.02, diff_tol: float = 1e-2) -> PointClass:
    """Evaluate the four per-point quantities.

    (i) ``max |D(x, ±h)|`` over the three smallest dyadic scales
    ``h = h_min 2^j`` (``j = 0, 1, 2``), at most ``cap``;
    (ii) ``s_local(g, x, delta)`` at ``p.resolution`` and two doublings,
    stable within ``rtol``;
    (iii) :func:`eq6_modulus` maximised over the same scales and a fixed
    set of ``m`` in ``1 < |m| <= 2``, at most ``cap``;
    (iv) difference quotients ``q(±h)`` over the same scales all within
    ``diff_tol`` of each other.
    """
    h = h_min * 2.0 ** np.arange(3)
    hh = np.concatenate([h, -h])
    eq4 = float(np.max(np.abs(second_quotient(g, x, hh))))
    vals = refinement_values(lambda q: s_local(g, x, delta, q), p)
    s_ok = not fails_to_stabilize(vals, rtol)
    T, M = np.meshgrid(hh, _M_SAMPLES)
    eq6 = float(np.max(eq6_modulus(g, x, T.ravel(), M.ravel())))
    gx = float(np.asarray(g(np.array([x])))[0])
    q = (g(x + hh) - gx) / hh
    spread = float(np.max(q) - np.min(q))
    return PointClass(float(x), eq4, vals, eq6, spread, eq4 <= cap, s_ok, eq6 <= cap,
                      spread <= diff_tol)


def _contingency(points: Sequence[PointClass]) -> dict:
    a = np.array([pt.s_side for pt in points])
    b = np.array([pt.differentiable for pt in points])
    return {"s_yes.diff_yes": int(np.sum(a & b)), "s_yes.diff_no": int(np.sum(a & ~b)),
            "s_no.diff_yes": int(np.sum(~a & b)), "s_no.diff_no": int(np.sum(~a & ~b))}


_CLASSIFY_TARGETS = {
    "smooth_bump": dict(params=dict(radius=2.0), lo=-2.5, hi=2.5),
    "gaussian": dict(params={}, lo=-3.0, hi=3.0),
    "bandlimited_random": dict(params=dict(seed=3), lo=-4.0, hi=4.0),
    "weierstrass": dict(params=dict(b=2.0), lo=0.0, hi=2.0 * math.pi),
    "zygmund_mix": dict(params=dict(corner=0.3), lo=-1.7, hi=2.3),
}


def differentiability_classify(f_id: str = "weierstrass", params: dict | None = None,
                               n_points: int | None = None, delta: float = 0.25,
                               seed: int = 20240611, rtol: float = 0.02, cap: float = 100.0,
                               diff_tol: float = 1e-2, h_min: float = 2.0**-16,
                               tier: str = "standard") -> ExperimentReport:
    """Classify sampled points by the square-function criterion and by
    difference quotients, and compare.

    Points are uniform random on a per-function window (the corner of
    ``zygmund_mix`` is always added).  Verdicts: smooth entries agree on at
    least 95% of points; Weierstrass has at most 10% of points passing
    either side and agreement at least 90%; for ``zygmund_mix`` the corner is
    flagged by both sides and at least 90% of the other points are cleared.
    """
    if f_id not in _CLASSIFY_TARGETS:
        raise ValueError(f"no classification window for {f_id!r}; known: "
                         f"{sorted(_CLASSIFY_TARGETS)}")
    tgt = _CLASSIFY_TARGETS[f_id]
    prm = dict(tgt["params"])
    prm.update(params or {})
    g = make_function(f_id, prm).f
    n_points = int(n_points or by_tier(tier, 20, 200, 400))
    res = by_tier(tier, 16, 32, 64)
    p = SqParams(alpha=1.0, resolution=res, order=4, estimate_error=False)
    rep = ExperimentReport("diff-classify", dict(function=f_id, params=prm, n_points=n_points,
                                                 delta=delta, seed=seed, rtol=rtol, cap=cap,
                                                 diff_tol=diff_tol, h_min=h_min,
                                                 resolution=res))
    with timed(rep):
        rng = np.random.default_rng(seed)
        xs = np.sort(rng.uniform(tgt["lo"], tgt["hi"], n_points))
        corner = prm.get("corner") if f_id == "zygmund_mix" else None
        if corner is not None:
            xs = np.append(xs, corner)
        pts = [classify_point(g, float(x), delta, p, h_min, cap, rtol, diff_tol) for x in xs]
        s_side = np.array([pt.s_side for pt in pts])
        diff = np.array([pt.differentiable for pt in pts])
        agree = float(np.mean(s_side == diff))
        rep.outputs.update(agreement=agree, s_side_fraction=float(np.mean(s_side)),
                           differentiable_fraction=float(np.mean(diff)),
                           s_local_finite_fraction=float(np.mean([pt.s_local_ok for pt in pts])),
                           eq4_fraction=float(np.mean([pt.eq4_ok for pt in pts])),
                           eq6_fraction=float(np.mean([pt.eq6_ok for pt in pts])),
                           max_eq6=max(pt.eq6 for pt in pts))
        for k, v in _contingency(pts).items():
            rep.outputs[f"contingency.{k}"] = v
        rep.table = dict(x=[pt.x for pt in pts], eq4=[pt.eq4 for pt in pts],
                         s_local=[pt.s_local[-1] for pt in pts], eq6=[pt.eq6 for pt in pts],
                         quotient_spread=[pt.quotient_spread for pt in pts],
                         s_side=[int(pt.s_side) for pt in pts],
                         differentiable=[int(pt.differentiable) for pt in pts])
        if f_id == "weierstrass":
            rep.check("differentiable-proxy fraction", float(np.mean(diff)), 0.1)
            rep.check("s_local-finite fraction",
                      rep.outputs["s_local_finite_fraction"], 0.1)
            rep.check("agreement of the two failure sets", agree, 0.9, ">=")
        elif corner is not None:
            c = pts[-1]
            rep.flag("corner flagged by the square-function side", not c.s_side)
            rep.flag("corner flagged by difference quotients", not c.differentiable)
            rest = pts[:-1]
            cleared = float(np.mean([pt.s_side and pt.differentiable for pt in rest]))
            rep.outputs["cleared_fraction"] = cleared
            rep.check("cleared fraction away from the corner", cleared, 0.9, ">=")
        else:
            rep.check("agreement fraction", agree, 0.95, ">=")
            consistent = float(np.mean([(not pt.s_local_ok) or pt.differentiable
                                        for pt in pts]))
            rep.outputs["finite_implies_differentiable"] = consistent
            rep.check("s_local finite implies differentiable", consistent, 0.99, ">=")
    return rep


# --------------------------------------------------------------------------
# Zygmund lemma


_ZYGMUND_ENTRIES = (("weierstrass", dict(b=2.0)), ("weierstrass", dict(b=3.0)),
                    ("weierstrass", dict(b=5.0)))


def zygmund_lemma_check(entries=_ZYGMUND_ENTRIES, n_samples: int | None = None,
                        seed: int = 20240611, t_octaves: int = 20, growth_max: float = 2.0,
                        tier: str = "standard") -> ExperimentReport:
    """Weighted modulus of Zygmund-class entries against their seminorm.

    Samples ``x ~ U(-pi, pi)``, ``|t| = 2^-u`` with ``u ~ U(0, t_octaves)``
    and random sign, and ``m`` in ``1 < |m| <= 2`` (half with
    ``m - 1 = 2^-v``, ``v ~ U(0, 20)``, half with ``m ~ U(-2, -1)``).  The
    ratio ``eq6_modulus / zygmund_seminorm`` is fitted by one constant
    ``C`` (its maximum).  Verdict: the maximum over the finest third of the
    ``t`` range and over the smallest third of ``m - 1`` each stay within
    ``growth_max`` of the maximum over the coarsest third.
    """
    n_samples = int(n_samples or by_tier(tier, 200, 1000, 10000))
    rep = ExperimentReport("zygmund-lemma", dict(entries=[[e, p] for e, p in entries],
                                                 n_samples=n_samples, seed=seed,
                                                 t_octaves=t_octaves, growth_max=growth_max))
    with timed(rep):
        rng = np.random.default_rng(seed)
        grid = Grid1D.over(-2 * math.pi, 2 * math.pi, 1 << 16)
        rows = []
        for fid, prm in entries:
            g = make_function(fid, prm).f
            zs = zygmund_seminorm(sample(g, grid), 1.0)
            x = rng.uniform(-math.pi, math.pi, n_samples)
            u = rng.uniform(0.0, t_octaves, n_samples)
            t = 2.0**-u * rng.choice([-1.0, 1.0], n_samples)
            half = n_samples // 2
            v = rng.uniform(0.0, 20.0, half)
            m = np.concatenate([1.0 + 2.0**-v, rng.uniform(-2.0, -1.0, n_samples - half)])
            perm = rng.permutation(n_samples)
            m, v_all = m[perm], np.concatenate([v, np.full(n_samples - half, np.nan)])[perm]
            ratio = np.array([float(eq6_modulus(g, xi, ti, mi)) for xi, ti, mi in zip(x, t, m)])
            ratio /= zs
            rows.append((fid, prm, zs, ratio, u, v_all))
        C = max(float(r.max()) for *_, r, _, _ in rows)
        rep.outputs["fitted_C"] = C
        t_growth, m_growth = [], []
        for fid, prm, zs, ratio, u, v in rows:
            tag = f"{fid}(b={prm.get('b')})"
            rep.outputs[f"seminorm.{tag}"] = zs
            rep.outputs[f"max_ratio.{tag}"] = float(ratio.max())
            fine = ratio[u > 2 * t_octaves / 3].max()
            coarse = ratio[u < t_octaves / 3].max()
            t_growth.append(float(fine / coarse))
            pos = np.isfinite(v)
            mfine = ratio[pos & (v > 40 / 3)].max()
            mcoarse = ratio[pos & (v < 20 / 3)].max()
            m_growth.append(float(mfine / mcoarse))
        rep.outputs.update(t_growth=t_growth, m_growth=m_growth)
        rep.table = dict(entry=[f"{r[0]}(b={r[1].get('b')})" for r in rows],
                         seminorm=[r[2] for r in rows],
                         max_ratio=[float(r[3].max()) for r in rows],
                         t_growth=t_growth, m_growth=m_growth)
        rep.check("fitted C is finite", C, math.inf, "<")
        rep.check("growth of the ratio towards small t", max(t_growth), growth_max)
        rep.check("growth of the ratio towards m -> 1", max(m_growth), growth_max)
    return rep


# --------------------------------------------------------------------------
# Q vs S


_Q_MATRIX = (("smooth_bump", {}), ("gaussian", {}), ("odd_bump", {}),
             ("bandlimited_random", dict(seed=1)), ("zygmund_mix", {}))


def q_equivalence(functions=_Q_MATRIX, xs: Sequence[float] = (-0.7, 0.1, 0.45, 1.3),
                  R: float = 8.0, C_max: float = 20.0, tier: str = "standard"
                  ) -> ExperimentReport:
    """One constant ``C`` with ``Q/C <= S_1 <= C Q`` over a ``(g, x)`` matrix.

    ``S_1`` and ``Q`` are both truncated at ``R``.  ``C`` is the largest of
    ``S/Q`` and ``Q/S`` over the matrix; verdict ``C <= C_max``.
    """
    res = by_tier(tier, 8, 16, 32)
    rep = ExperimentReport("q-equivalence", dict(functions=[[f, p] for f, p in functions],
                                                 xs=list(xs), R=R, C_max=C_max, resolution=res))
    with timed(rep):
        p = SqParams(alpha=1.0, R=R, resolution=res)
        rows = []
        for fid, prm in functions:
            g = make_function(fid, prm).f
            for x in xs:
                s = s_alpha(g, float(x), p)
                q = q_square(g, float(x), p)
                rows.append((fid, float(x), float(s), float(q), float(s) / float(q)))
        r = np.array([row[4] for row in rows])
        C = float(max(r.max(), (1.0 / r).max()))
        rep.table = dict(zip(("function", "x", "S", "Q", "S_over_Q"), map(list, zip(*rows))))
        rep.outputs.update(fitted_C=C, min_S_over_Q=float(r.min()), max_S_over_Q=float(r.max()))
        rep.check("fitted two-sided constant C", C, C_max)
    return rep
