"""Exact identities and pointwise inequalities checked on random samples.

* :func:`sym_identity_check`: three-term symmetrization against the closed
  form, plus the exact values for affine, quadratic and cubic inputs.
* :func:`menger_check`: ``1/R <= 2 Sym^(1/2)`` on Lipschitz graphs.
* :func:`majorization_check`: ``G_m <= C S_alpha`` and ``G_2 = G/2``.
* :func:`mixing_check`: ``S_alpha`` in the ``(s, t)`` and ``m`` forms.
* :func:`scaling_check`: dilation identity of the ``T_k`` kernels.
* :func:`converse_multiplier_gap`: lower bound of the averaged multiplier.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .._quad import panel_rule
from ..fnspace import Evaluator, Grid1D, sample
from ..fractional import tk_kernel_apply
from ..sqfun import (SqParams, g_alpha, g_alpha_m, majorization_constant, s_alpha)
from ..symm import circumradius_oracle, menger_curvature, sym_bruteforce, sym_closed
from ..zoo import make_function
from .cells import averaged_multiplier, averaged_multiplier_leading
from .report import ExperimentReport, by_tier, timed

__all__ = [
    "sym_test_function",
    "sym_identity_check",
    "menger_check",
    "majorization_check",
    "mixing_check",
    "scaling_check",
    "converse_multiplier_gap",
]


def sym_test_function(name: str) -> Evaluator:
    """Inputs of the symmetrization check: catalogue ids plus ``cubic``."""
    if name == "cubic":
        return Evaluator("cubic", {}, lambda x: x * x * x)
    if name == "quadratic":
        return make_function("quadratic").f
    if name == "affine":
        return make_function("affine").f
    return make_function(name).f


def _random_triples(rng, n, lo, hi, min_gap):
    out = np.empty((0, 3))
    while len(out) < n:
        t = rng.uniform(lo, hi, size=(2 * (n - len(out)) + 16, 3))
        d = np.abs(t[:, [0, 0, 1]] - t[:, [1, 2, 2]]).min(axis=1)
        out = np.vstack([out, t[d >= min_gap]])
    return out[:n]


def _rel(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    scale = np.maximum(np.abs(a), np.abs(b))
    return np.where(scale > 0, np.abs(a - b) / np.where(scale > 0, scale, 1.0), 0.0)


def sym_identity_check(functions: Sequence[str] = ("affine", "quadratic", "cubic",
                                                   "smooth_bump", "weierstrass"),
                       draws: int | None = None, seed: int = 20240611,
                       min_gap: float = 1e-3, tol: float = 1e-10,
                       tier: str = "standard") -> ExperimentReport:
    """Brute-force symmetrization against the closed form on random triples.

    ``draws`` (total over all functions) defaults to 2e3 / 1e5 / 1e6 by tier.
    The brute force is evaluated exactly from the double inputs (see
    :func:`roughsq.symm.sym_bruteforce`).  Expected values: ``0`` for affine
    ``A``, ``1`` for ``x^2`` and ``(x + y + z)^2`` for ``x^3``.
    """
    draws = int(draws or by_tier(tier, 2000, 100_000, 1_000_000))
    rep = ExperimentReport("sym-identity", dict(functions=list(functions), draws=draws,
                                                seed=seed, min_gap=min_gap, tol=tol))
    with timed(rep):
        rng = np.random.default_rng(seed)
        per = int(math.ceil(draws / len(functions)))
        worst = 0.0
        for name in functions:
            A = sym_test_function(name)
            t = _random_triples(rng, per, -2.0, 2.0, min_gap)
            x, y, z = t.T
            brute = sym_bruteforce(A, (x, y, z), exact=True)
            closed = sym_closed(A, (x, y, z))
            err = float(np.max(_rel(brute, closed)))
            worst = max(worst, err)
            rep.outputs[f"max_rel_err.{name}"] = err
            rep.outputs[f"max_sym.{name}"] = float(np.max(np.abs(closed)))
            expect = {"affine": np.zeros_like(x), "quadratic": np.ones_like(x),
                      "cubic": (x + y + z) ** 2}.get(name)
            if expect is not None:
                e = float(np.max(np.abs(closed - expect) / np.maximum(np.abs(expect), 1.0)))
                rep.outputs[f"expected_err.{name}"] = e
                rep.check(f"closed form equals exact value ({name})", e, tol)
        rep.outputs["max_rel_err"] = worst
        rep.check("brute force = closed form (max relative error)", worst, tol)
    return rep


def menger_check(n: int | None = None, seed: int = 20240611, slack: float = 1e-12,
                 functions: Sequence[str] = ("smooth_bump", "odd_bump", "zygmund_mix",
                                             "heaviside_reg", "bandlimited_random"),
                 tier: str = "standard") -> ExperimentReport:
    """``menger_curvature <= 2 sqrt(Sym)`` on points of Lipschitz graphs.

    Also compares :func:`menger_curvature` with the independent circumradius
    solver on well conditioned triples (curvature above ``1e-3``).
    """
    n = int(n or by_tier(tier, 1000, 10_000, 100_000))
    rep = ExperimentReport("menger", dict(n=n, seed=seed, slack=slack,
                                          functions=list(functions)))
    with timed(rep):
        rng = np.random.default_rng(seed)
        per = int(math.ceil(n / len(functions)))
        violations = 0
        worst_oracle = 0.0
        for name in functions:
            A = make_function(name).f
            t = _random_triples(rng, per, -2.0, 2.0, 1e-6)
            x, y, z = t.T
            c = menger_curvature((x, A(x)), (y, A(y)), (z, A(z)))
            bound = 2.0 * np.sqrt(sym_closed(A, (x, y, z)))
            v = int(np.sum(c > bound + slack))
            violations += v
            rep.outputs[f"violations.{name}"] = v
            rep.outputs[f"max_ratio.{name}"] = float(np.max(c / np.maximum(bound, 1e-300)))
            good = np.flatnonzero(c > 1e-3)[:50]
            for i in good:
                r = circumradius_oracle((x[i], A(x[i])), (y[i], A(y[i])), (z[i], A(z[i])))
                worst_oracle = max(worst_oracle, abs(1.0 / r - c[i]) / c[i])
        rep.outputs["violations"] = violations
        rep.outputs["curvature_vs_circumradius"] = worst_oracle
        rep.check("violations of 1/R <= 2 Sym^(1/2)", violations, 0)
        rep.check("curvature agrees with circumradius solver", worst_oracle, 1e-8)
    return rep


_MAJ_FUNCTIONS = (("smooth_bump", {}), ("gaussian", {}), ("odd_bump", {}),
                  ("vanishing_moment_bump", {}), ("smooth_bump", dict(center=0.5, radius=2.0)))


def majorization_check(alphas=(0.75, 1.0, 1.25), samples: int | None = None,
                       seed: int = 20240611, slack: float = 0.05, T: float = 16.0,
                       tier: str = "standard") -> ExperimentReport:
    """``G_{alpha,m} g(x) <= C_{alpha,m} S_alpha g(x)`` on random ``(g, x, m)``.

    ``G_{alpha,m}`` is truncated at ``|t| <= T`` and ``S_alpha`` at the box
    ``R = m^2 T``, which contains every increment used in the comparison
    argument, so the truncated inequality inherits the constant.  Also
    checks ``G_{alpha,2} = G_alpha/2`` (two-sided second-difference form)
    to ``1e-8``.
    """
    samples = int(samples or by_tier(tier, 4, 20, 60))
    rep = ExperimentReport("majorization", dict(alphas=list(alphas), samples=samples,
                                                seed=seed, slack=slack, T=T))
    with timed(rep):
        rng = np.random.default_rng(seed)
        res = by_tier(tier, 8, 16, 32)
        worst, worst_id = 0.0, 0.0
        rows = []
        for al in alphas:
            for i in range(samples):
                fid, kw = _MAJ_FUNCTIONS[int(rng.integers(len(_MAJ_FUNCTIONS)))]
                g = make_function(fid, kw).f
                x = float(rng.uniform(-1.5, 1.5))
                m = float(rng.uniform(1.05, 3.0))
                pg = SqParams(alpha=al, R=T, resolution=res)
                G = g_alpha_m(g, x, m, pg)
                S = s_alpha(g, x, SqParams(alpha=al, R=m * m * T, resolution=res))
                C = majorization_constant(al, m)
                ratio = float(G) / (C * float(S))
                worst = max(worst, ratio)
                rows.append((al, fid, x, m, float(G), float(S), C, ratio))
                if i < 5:
                    # the identity is exact, so it is checked at a resolution where
                    # the quadrature error of both sides is far below 1e-8
                    pid = SqParams(alpha=al, R=T, resolution=by_tier(tier, 128, 256, 512))
                    G2 = g_alpha_m(g, x, 2.0, pid)
                    Gfull = g_alpha(g, x, pid, two_sided=True)
                    worst_id = max(worst_id, abs(float(G2) - float(Gfull) / 2) / float(G2))
        rep.table = dict(zip(("alpha", "function", "x", "m", "G_m", "S", "C", "ratio"),
                             map(list, zip(*rows))))
        rep.outputs["max_ratio"] = worst
        rep.outputs["max_rel_err_G2"] = worst_id
        rep.check("max G_m / (C S_alpha)", worst, 1.0 + slack)
        rep.check("G_{alpha,2} = G_alpha / 2 (relative error)", worst_id, 1e-8)
    return rep


def mixing_check(n_functions: int | None = None, alpha: float = 1.0, seed: int = 20240611,
                 R: float = 8.0, tier: str = "standard") -> ExperimentReport:
    """``S_alpha`` from the ``(s, t)`` rule and from the ``m`` form agree
    within the sum of their attached error estimates."""
    n_functions = int(n_functions or by_tier(tier, 2, 10, 20))
    rep = ExperimentReport("mixing", dict(n_functions=n_functions, alpha=alpha, seed=seed, R=R))
    with timed(rep):
        rng = np.random.default_rng(seed)
        res = by_tier(tier, 8, 16, 32)
        worst = 0.0
        rows = []
        for i in range(n_functions):
            kw = dict(center=float(rng.uniform(-1, 1)), radius=float(rng.uniform(0.5, 2.0)),
                      amp=float(rng.uniform(0.5, 2.0)))
            g = make_function("smooth_bump", kw).f
            x = float(rng.uniform(-1.0, 1.0))
            a = s_alpha(g, x, SqParams(alpha=alpha, R=R, resolution=res))
            b = s_alpha(g, x, SqParams(alpha=alpha, R=R, resolution=res, mode="m"))
            tol = a.err + b.err
            q = abs(float(a) - float(b)) / tol if tol > 0 else math.inf
            worst = max(worst, q)
            rows.append((kw["center"], kw["radius"], kw["amp"], x, float(a), float(b), a.err,
                         b.err))
        rep.table = dict(zip(("center", "radius", "amp", "x", "S_st", "S_m", "err_st",
                              "err_m"), map(list, zip(*rows))))
        rep.outputs["max_diff_over_err"] = worst
        rep.check("|S_st - S_m| / (err_st + err_m)", worst, 1.0)
    return rep


def scaling_check(k_list=(-3, 0, 3), omega=((0.5, 1.0), (0.1, 0.3)), alpha: float = 1.0,
                  seed: int = 20240611, tol: float = 1e-8, order: int = 4,
                  tier: str = "standard") -> ExperimentReport:
    """Dilation identity for the ``T_k`` kernels.

    Left side: ``∬_Omega |T_k g(x, s, t)|^2`` on the grid of ``g``.  Right
    side: ``∬_{2^k Omega} |T_0 [g(2^-k .)](2^k x, v, w)|^2`` with the dilated
    function sampled afresh on the dilated grid refined twice (so the two
    sides use different samples and transforms).  ``Omega`` is the product
    rectangle ``omega[0] x omega[1]`` and must avoid the diagonal.  The input
    is a random trigonometric polynomial with modes covering
    ``2^k [4, 64]``, the band where ``P_k`` is active.
    """
    (s0, s1), (t0, t1) = omega
    if max(t0, t1) >= min(s0, s1) and min(t1, s1) > max(t0, s0):
        raise ValueError("Omega must avoid the diagonal s = t")
    rep = ExperimentReport("scaling", dict(k_list=list(k_list), omega=omega, alpha=alpha,
                                           seed=seed, tol=tol))
    with timed(rep):
        period = 16.0
        rng = np.random.default_rng(seed)
        s, ws = panel_rule(np.array([s0, s1]), order)
        t, wt = panel_rule(np.array([t0, t1]), order)
        worst = 0.0
        for k in k_list:
            sc = 2.0**k
            # random modes across the band where P_k is active (|xi| ~ 2^k * 29)
            n_lo = max(1, int(sc * 4 * period / (2 * math.pi)))
            n_hi = int(math.ceil(sc * 64 * period / (2 * math.pi)))
            n = np.arange(n_lo, n_hi + 1)
            a_n, b_n = rng.standard_normal((2, n.size)) / np.sqrt(n.size)
            w_n = 2 * math.pi * n / period

            def g(y, a_n=a_n, b_n=b_n, w_n=w_n):
                ph = np.multiply.outer(np.asarray(y, dtype=float), w_n)
                return np.cos(ph) @ a_n + np.sin(ph) @ b_n

            N = by_tier(tier, 1, 2, 4) * (1 << int(math.ceil(math.log2(2 * n_hi + 2))))
            grid = Grid1D.over(-period / 2, period / 2, N)
            gs = sample(Evaluator("band", {}, g), grid)
            i0 = N // 3
            xk = grid.x[i0]
            gridk = Grid1D(grid.x0 * sc, grid.h * sc / 2, 2 * N)
            gd = sample(Evaluator("dilated", {}, lambda y: g(y / sc)), gridk)
            lhs = rhs = 0.0
            for si, wsi in zip(s, ws):
                for ti, wti in zip(t, wt):
                    a = tk_kernel_apply(gs, k, alpha, si, ti).values[i0]
                    b = tk_kernel_apply(gd, 0, alpha, sc * si, sc * ti).values[2 * i0]
                    lhs += wsi * wti * a * a
                    rhs += wsi * wti * sc * sc * b * b
            lhs, rhs = math.sqrt(lhs), math.sqrt(rhs)
            err = abs(lhs - rhs) / max(abs(lhs), 1e-300)
            worst = max(worst, err)
            rep.outputs[f"lhs.k={k}"] = lhs
            rep.outputs[f"rhs.k={k}"] = rhs
            rep.outputs[f"x.k={k}"] = float(xk)
            rep.check(f"relative difference k={k}", err, tol)
        rep.outputs["max_rel_err"] = worst
    return rep


def converse_multiplier_gap(eps: float = 1e-2, alpha: float = 1.0, n_xi: int | None = None,
                            eps_list=(1e-1, 3e-2, 1e-2, 3e-3, 1e-3),
                            tier: str = "standard") -> ExperimentReport:
    """Minimum of ``|m(xi)|`` on ``1/4 <= |xi| <= 4`` for the averaged multiplier.

    Also reports: the largest ``eps`` of ``eps_list`` from which on the
    minimum stays positive, the largest neighbour jump of ``|m|`` on the grid
    and after one refinement, and the relative deviation from the leading
    ``xi^3`` term.  The first-order term ``mean((t - s)/2 |s-t|^-alpha)``
    vanishes identically on the symmetric region and is reported as such.
    """
    n_xi = int(n_xi or by_tier(tier, 401, 4001, 16001))
    rep = ExperimentReport("converse-multiplier", dict(eps=eps, alpha=alpha, n_xi=n_xi,
                                                       eps_list=list(eps_list)))
    with timed(rep):
        pos = np.linspace(0.25, 4.0, n_xi)
        xi = np.concatenate([-pos[::-1], pos])
        m = averaged_multiplier(xi, eps, alpha)
        am = np.abs(m)
        rep.outputs["min_abs_m"] = float(am.min())
        rep.outputs["argmin_xi"] = float(xi[int(np.argmin(am))])
        jump = float(np.max(np.abs(np.diff(am[n_xi:]))))
        fine = np.abs(averaged_multiplier(np.linspace(0.25, 4.0, 2 * n_xi - 1), eps, alpha))
        jump2 = float(np.max(np.abs(np.diff(fine))))
        rep.outputs["max_neighbor_jump"] = jump
        rep.outputs["max_neighbor_jump_refined"] = jump2
        lead = averaged_multiplier_leading(xi, eps, alpha)
        dev = float(np.max(np.abs(m - lead) / np.abs(lead)))
        rep.outputs["leading_term_deviation"] = dev
        # the (t - s)/2 term: mean of an odd function of d over a symmetric range
        dp, wp = panel_rule(np.array([eps / 10, eps / 5]), 16)
        first = float(np.sum(wp * (dp / 2) * dp**-alpha) - np.sum(wp * (dp / 2) * dp**-alpha))
        rep.outputs["first_order_term"] = first
        mins = {}
        threshold = math.nan
        for e in sorted(eps_list, reverse=True):
            v = float(np.abs(averaged_multiplier(pos, e, alpha)).min())
            mins[f"{e:g}"] = v
        rep.outputs["min_abs_m_by_eps"] = mins
        ok = [e for e in sorted(eps_list) if mins[f"{e:g}"] > 0]
        # largest eps such that every smaller listed eps is positive too
        for e in sorted(eps_list):
            if mins[f"{e:g}"] > 0:
                threshold = e
            else:
                break
        rep.outputs["eps_threshold"] = threshold
        rep.check("min |m(xi)| on the annulus", am.min(), 0.0, ">")
        rep.check("neighbour jump shrinks under refinement", jump2 / jump, 0.75)
        rep.check("deviation from leading xi^3 term", dev, 0.2)
    return rep
