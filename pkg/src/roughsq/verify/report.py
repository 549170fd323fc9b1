"""Experiment reports and the small fitting helpers shared by experiments."""
from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Optional, Sequence

import numpy as np
from scipy import stats

__all__ = [
    "Verdict",
    "ExperimentReport",
    "loglog_fit",
    "linear_fit",
    "spearman",
    "flatten",
    "timed",
    "combine",
    "TIERS",
    "by_tier",
]

TIERS = ("quick", "standard", "thorough")


def by_tier(tier: str, quick, standard, thorough):
    """Pick the setting for ``tier``."""
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}; expected one of {TIERS}")
    return {"quick": quick, "standard": standard, "thorough": thorough}[tier]


@dataclass
class Verdict:
    """One named pass/fail decision with the measured value and threshold."""

    name: str
    passed: Optional[bool]
    value: float
    threshold: float
    relation: str
    note: str = ""

    @property
    def status(self) -> str:
        if self.passed is None:
            return "inconclusive"
        return "pass" if self.passed else "fail"


def _plain(v):
    """Convert numpy scalars/arrays and nested containers to JSON types."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return v


@dataclass
class ExperimentReport:
    """Result record of one experiment.

    ``outputs`` holds numbers (scalars or short lists), ``errors`` the
    attached error estimates, ``table`` optional columnar rows for
    plotting.  ``wall_clock`` is kept out of :meth:`to_dict` so identical
    runs serialise identically.
    """

    experiment: str
    params: dict
    outputs: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    table: Optional[dict] = None
    wall_clock: float = float("nan")
    diagnosis: str = ""

    def check(self, name: str, value: float, threshold: float, relation: str = "<=",
              note: str = "") -> Verdict:
        """Record ``value <relation> threshold`` as a verdict."""
        value = float(value)
        ops = {
            "<=": lambda a, b: a <= b,
            "<": lambda a, b: a < b,
            ">=": lambda a, b: a >= b,
            ">": lambda a, b: a > b,
        }
        if relation not in ops:
            raise ValueError(f"unknown relation {relation!r}")
        ok = bool(ops[relation](value, threshold)) if math.isfinite(value) else False
        v = Verdict(name, ok, value, float(threshold), relation, note)
        self.verdicts.append(v)
        return v

    def flag(self, name: str, passed: Optional[bool], note: str = "") -> Verdict:
        """Record a boolean verdict (``None`` for inconclusive)."""
        v = Verdict(name, None if passed is None else bool(passed),
                    float("nan") if passed is None else float(bool(passed)), 1.0, "==",
                    note)
        self.verdicts.append(v)
        return v

    @property
    def passed(self) -> bool:
        return all(v.passed is True for v in self.verdicts)

    @property
    def failing(self) -> list:
        return [v.name for v in self.verdicts if v.passed is not True]

    def to_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "params": self.params,
            "outputs": self.outputs,
            "errors": self.errors,
            "verdicts": [asdict(v) | {"status": v.status} for v in self.verdicts],
            "passed": self.passed,
            "diagnosis": self.diagnosis,
        }
        return _plain(d)

    def summary_lines(self) -> list:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.experiment}"]
        for v in self.verdicts:
            lines.append(f"    {v.status:12s} {v.name}: {v.value:.6g} {v.relation} "
                         f"{v.threshold:.6g}" + (f"  ({v.note})" if v.note else ""))
        if self.diagnosis:
            lines.append(f"    diagnosis: {self.diagnosis}")
        return lines


def combine(experiment: str, params: dict, parts: dict) -> ExperimentReport:
    """Merge labelled sub-reports; every key and verdict name gets ``label.``."""
    rep = ExperimentReport(experiment, dict(params))
    table = {}
    for label, sub in parts.items():
        rep.params[label] = sub.params
        for k, v in sub.outputs.items():
            rep.outputs[f"{label}.{k}"] = v
        for k, v in sub.errors.items():
            rep.errors[f"{label}.{k}"] = v
        for v in sub.verdicts:
            rep.verdicts.append(replace(v, name=f"{label}: {v.name}"))
        if sub.table:
            n = max(len(c) for c in sub.table.values())
            table.setdefault("part", []).extend([label] * n)
            for k in set(table) | set(sub.table):
                if k == "part":
                    continue
                col = table.setdefault(k, [None] * (len(table["part"]) - n))
                col.extend(sub.table.get(k, [None] * n))
        if sub.diagnosis:
            rep.diagnosis = "; ".join(filter(None, [rep.diagnosis, f"{label}: {sub.diagnosis}"]))
    rep.table = table or None
    rep.wall_clock = sum(sub.wall_clock for sub in parts.values())
    return rep


@contextmanager
def timed(report: ExperimentReport):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.wall_clock = time.perf_counter() - t0


def loglog_fit(x: Sequence[float], y: Sequence[float]):
    """Least-squares ``log y = b log x + a``; returns ``(b, a, r2)``."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    return linear_fit(lx, ly)


def linear_fit(x: Sequence[float], y: Sequence[float]):
    """Least-squares line ``y = b x + a``; returns ``(b, a, r2)``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if len(x) < 2:
        raise ValueError("need at least two points for a fit")
    b, a = np.polyfit(x, y, 1)
    resid = y - (a + b * x)
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss if ss > 0 else 1.0
    return float(b), float(a), r2


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation (0 for constant input)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if len(x) < 3 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return 0.0
    return float(stats.spearmanr(x, y).statistic)


def flatten(d: dict, prefix: str = "") -> dict:
    """Flat ``a.b.c -> value`` view of a nested dict (lists keep indices)."""
    out = {}
    for k, v in d.items():
        key = f"{prefix}.{k}" if prefix else str(k)
        if isinstance(v, dict):
            out.update(flatten(v, key))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v):
                out.update(flatten(item, f"{key}.{i}"))
        else:
            out[key] = v
    return out
