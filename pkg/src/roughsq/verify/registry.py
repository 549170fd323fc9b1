"""Experiment registry used by the CLI and the acceptance suite.

Each entry maps an id to a runner ``runner(cfg) -> ExperimentReport``.
``cfg`` carries the user overrides ``alpha``, ``p``, ``function``,
``seed`` (``None`` when not given) and ``tier``.  Entries with a
``criterion`` number reproduce one acceptance criterion at their default
settings.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .cells import cell_sweep, sigma_tau_lemma_check
from .identities import (converse_multiplier_gap, majorization_check, menger_check,
                         mixing_check, scaling_check, sym_identity_check)
from .pointwise import differentiability_classify, q_equivalence, zygmund_lemma_check
from .report import ExperimentReport, combine
from .scans import (SOBOLEV_FUNCTIONS, blowup_scan, hardy_consistency,
                    hardy_counterexample_scan, sobolev_band, sobolev_ratio,
                    weak_type_open_problem, weaktype_growth)

__all__ = ["Experiment", "REGISTRY", "DEFAULT_SEED", "get", "experiment_ids"]

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class Experiment:
    id: str
    claim: str
    params: str
    runner: Callable[[dict], ExperimentReport]
    criterion: Optional[int] = None


def _seed(cfg):
    return DEFAULT_SEED if cfg.get("seed") is None else int(cfg["seed"])


def _alphas(cfg, default):
    return (float(cfg["alpha"]),) if cfg.get("alpha") is not None else default


def _functions(cfg, default):
    f = cfg.get("function")
    return default if f is None else ((f, {}),)


# criterion 3 uses the four functions that resolve within a standard-tier budget
PLANCHEREL_FUNCTIONS = tuple(e for e in SOBOLEV_FUNCTIONS if e[0] != "quadratic_cap")


def _sym(cfg):
    fns = ("affine", "quadratic", "cubic", "smooth_bump", "weierstrass")
    if cfg.get("function"):
        fns = (cfg["function"],)
    return sym_identity_check(fns, seed=_seed(cfg), tier=cfg["tier"])


def _plancherel(cfg):
    return sobolev_band(1.0, (2.0,), _functions(cfg, PLANCHEREL_FUNCTIONS), band=1.03,
                        tier=cfg["tier"])


def _sobolev_ratio(cfg):
    alpha = float(cfg.get("alpha") or 1.0)
    p = float(cfg.get("p") or 2.0)
    if cfg.get("function"):
        return sobolev_ratio(cfg["function"], alpha, p, tier=cfg["tier"])
    return sobolev_band(alpha, (p,), tier=cfg["tier"])


def _sobolev_general(cfg):
    ps = (float(cfg["p"]),) if cfg.get("p") is not None else (1.5, 3.0)
    fns = _functions(cfg, SOBOLEV_FUNCTIONS)
    return combine("sobolev-general", dict(ps=list(ps)),
                   {f"alpha={a:g}": sobolev_band(a, ps, fns, tier=cfg["tier"])
                    for a in _alphas(cfg, (0.75, 1.25))})


def _necessity(cfg):
    if cfg.get("alpha") is not None:
        return blowup_scan(float(cfg["alpha"]), f_id=cfg.get("function"), tier=cfg["tier"])
    return combine("blowup-scan", {}, {
        "alpha=0.5": blowup_scan(0.5, R_list=(8.0, 64.0, 512.0), tier=cfg["tier"]),
        "alpha=1.5": blowup_scan(1.5, eps_list=(1e-2, 1e-3, 1e-4, 1e-5), tier=cfg["tier"]),
        "alpha=1": blowup_scan(1.0, tier=cfg["tier"]),
    })


def _diff(cfg):
    if cfg.get("function"):
        return differentiability_classify(cfg["function"], seed=_seed(cfg), tier=cfg["tier"])
    parts = {f: differentiability_classify(f, seed=_seed(cfg), tier=cfg["tier"])
             for f in ("weierstrass", "smooth_bump", "gaussian", "bandlimited_random",
                       "zygmund_mix")}
    return combine("diff-classify", dict(seed=_seed(cfg)), parts)


def _weaktype(cfg):
    j = (1e2, 1e3, 1e4) if cfg["tier"] == "thorough" else None
    return weaktype_growth(j, tier=cfg["tier"])


_ENTRIES = [
    Experiment("sym-identity", "the three-term symmetrisation of the commutator kernel equals "
               "a squared divided-difference difference", "function, seed, tier", _sym, 1),
    Experiment("menger", "Menger curvature is bounded by twice the square root of the "
               "symmetrised kernel on Lipschitz graphs", "seed, tier",
               lambda c: menger_check(seed=_seed(c), tier=c["tier"]), 2),
    Experiment("plancherel", "||S_1 f||_2 = c ||f'||_2 with one universal constant c",
               "function, tier", _plancherel, 3),
    Experiment("majorization", "G_{alpha,m} f <= C_{alpha,m} S_alpha f pointwise; "
               "G_{alpha,2} = G_alpha / 2", "alpha, seed, tier",
               lambda c: majorization_check(_alphas(c, (0.75, 1.0, 1.25)), seed=_seed(c),
                                            tier=c["tier"]), 4),
    Experiment("mixing", "S_alpha in the (s, t) plane equals its m-parametrised form",
               "alpha, seed, tier",
               lambda c: mixing_check(alpha=float(c.get("alpha") or 1.0), seed=_seed(c),
                                      tier=c["tier"]), 5),
    Experiment("blowup-scan", "S_alpha f is infinite for alpha <= 1/2 and for alpha >= 3/2",
               "alpha, function, tier", _necessity, 6),
    Experiment("hardy-counterexample", "S_alpha f(x) >= 1/(2(x-1)) for the odd bump, so "
               "S_alpha f is not integrable", "alpha, tier",
               lambda c: hardy_counterexample_scan(float(c.get("alpha") or 1.0),
                                                   tier=c["tier"]), 7),
    Experiment("weaktype-growth", "||S_1 f_j||_{L^{1,inf}} / ||f_j'||_1 grows like "
               "sqrt(log j)", "tier", _weaktype, 8),
    Experiment("cell-bounds", "cell-restricted multiplier integrals obey the stated "
               "(n, l) bounds", "alpha, tier",
               lambda c: cell_sweep(_alphas(c, (0.75, 1.0, 1.25)), tier=c["tier"]), 9),
    Experiment("scaling", "dyadic dilation identity for the T_k kernels", "alpha, seed, tier",
               lambda c: scaling_check(alpha=float(c.get("alpha") or 1.0), seed=_seed(c),
                                       tier=c["tier"]), 10),
    Experiment("converse-multiplier", "the multiplier averaged over R_eps stays away from 0 "
               "on 1/4 <= |xi| <= 4", "alpha, tier",
               lambda c: converse_multiplier_gap(alpha=float(c.get("alpha") or 1.0),
                                                 tier=c["tier"]), 11),
    Experiment("q-equivalence", "the m-form square function Q is comparable to S_1",
               "tier", lambda c: q_equivalence(tier=c["tier"]), 12),
    Experiment("diff-classify", "S_loc finiteness and Zygmund control characterise "
               "differentiability a.e.", "function, seed, tier", _diff, 13),
    Experiment("zygmund-lemma", "Zygmund-class functions satisfy the weighted quotient "
               "modulus bound", "seed, tier",
               lambda c: zygmund_lemma_check(seed=_seed(c), tier=c["tier"]), 14),
    Experiment("hardy-consistency", "weak-type bound of S_alpha on Hardy-Sobolev inputs "
               "(consistency band)", "alpha, tier",
               lambda c: hardy_consistency(_alphas(c, (0.75, 1.0, 1.25)), tier=c["tier"]), 15),
    Experiment("sobolev-ratio", "||D^alpha f||_p and ||S_alpha f||_p are comparable",
               "alpha, p, function, tier", _sobolev_ratio),
    Experiment("sobolev-general", "comparability band at alpha in {0.75, 1.25}, "
               "p in {1.5, 3}", "alpha, p, function, tier", _sobolev_general),
    Experiment("sigma-tau-lemma", "elementary region integral obeys its three-case bound",
               "alpha", lambda c: sigma_tau_lemma_check(float(c.get("alpha") or 1.0))),
    Experiment("weak-type-open", "exploratory: weak (1,1) ratio on L^1-normalised inputs "
               "(no verdict)", "alpha, tier",
               lambda c: weak_type_open_problem(float(c.get("alpha") or 1.0),
                                                tier=c["tier"])),
]

REGISTRY = {e.id: e for e in _ENTRIES}


def experiment_ids() -> list:
    """Ids in registry order (criteria first, in criterion order)."""
    return [e.id for e in _ENTRIES]


def get(exp_id: str) -> Experiment:
    if exp_id not in REGISTRY:
        raise KeyError(f"unknown experiment {exp_id!r}; see `roughsq list`")
    return REGISTRY[exp_id]
