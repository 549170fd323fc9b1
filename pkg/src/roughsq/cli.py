"""Batch front end.

    roughsq list
    roughsq run <id>|all [--alpha A] [--p P] [--function F] [--tier T]
                         [--seed S] [--out DIR] [--config FILE]

Each run writes into ``DIR/<id>/``:

* ``report.txt``: human-readable verdict summary,
* ``report.json``: flat key-value tree (byte-identical for identical configs),
* ``table.csv``: columnar data with a one-line header (when the experiment
  has a table),
* ``metadata.json``: timestamps, wall clock, versions and kernel backend.

``run all`` additionally writes ``summary.txt`` and ``summary.csv`` with one
row per acceptance criterion.  The exit status is 0 iff every verdict passed;
configuration errors exit with status 2.

``--config`` reads a JSON object with any of the flag names as keys; flags
given on the command line win.  ``ROUGHSQ_THREADS`` sets the number of
worker threads used for point evaluations.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import os
import platform
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .kernels import BACKEND
from .verify.registry import DEFAULT_SEED, REGISTRY, experiment_ids, get
from .verify.report import TIERS, ExperimentReport, flatten

__all__ = ["RunConfig", "ConfigError", "load_config", "run", "list_experiments", "main"]

_KEYS = ("alpha", "p", "function", "tier", "seed", "out")


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    alpha: Optional[float] = None
    p: Optional[float] = None
    function: Optional[str] = None
    tier: str = "standard"
    seed: int = DEFAULT_SEED
    out: str = "roughsq_out"

    def __post_init__(self):
        if self.experiment != "all" and self.experiment not in REGISTRY:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"known: {', '.join(experiment_ids())}")
        if self.tier not in TIERS:
            raise ConfigError(f"unknown tier {self.tier!r}; choose from {', '.join(TIERS)}")

    def overrides(self) -> dict:
        return dict(alpha=self.alpha, p=self.p, function=self.function, seed=self.seed,
                    tier=self.tier)


def load_config(path: str) -> dict:
    """Read a JSON config; unknown keys are rejected."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - set(_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _coerce(d: dict) -> dict:
    out = {}
    try:
        for k, v in d.items():
            if v is None:
                continue
            if k in ("alpha", "p"):
                out[k] = float(v)
            elif k == "seed":
                out[k] = int(v)
            else:
                out[k] = str(v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {k!r}: {v!r}") from exc
    return out


def _json_dump(obj, path: Path):
    path.write_text(json.dumps(obj, indent=1, sort_keys=True, allow_nan=True) + "\n",
                    encoding="utf-8")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_artifacts(rep: ExperimentReport, outdir: Path, cfg: RunConfig, started: str):
    """Write the report, table and metadata files for one experiment."""
    outdir.mkdir(parents=True, exist_ok=True)
    structured = flatten(rep.to_dict())
    structured["config"] = json.dumps(cfg.overrides(), sort_keys=True)
    _json_dump(structured, outdir / "report.json")
    lines = rep.summary_lines()
    if rep.outputs:
        lines.append("outputs:")
        for k, v in flatten(rep.to_dict()["outputs"]).items():
            lines.append(f"    {k} = {v}")
    (outdir / "report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if rep.table:
        cols = list(rep.table)
        n = max(len(c) for c in rep.table.values())
        with open(outdir / "table.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for i in range(n):
                w.writerow([_cell(rep.table[c][i] if i < len(rep.table[c]) else None)
                            for c in cols])
    _json_dump(dict(started=started, finished=_dt.datetime.now(_dt.timezone.utc).isoformat(),
                    wall_clock_s=rep.wall_clock, version=__version__, backend=BACKEND,
                    python=platform.python_version(), numpy=np.__version__,
                    threads=os.environ.get("ROUGHSQ_THREADS", "1")),
               outdir / "metadata.json")


def _run_one(exp_id: str, cfg: RunConfig, out: Path, echo) -> ExperimentReport:
    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    try:
        rep = get(exp_id).runner(cfg.overrides())
    except (ValueError, KeyError) as exc:
        rep = ExperimentReport(exp_id, cfg.overrides())
        rep.diagnosis = f"{type(exc).__name__}: {exc}"
        rep.flag("experiment ran", False, rep.diagnosis)
    write_artifacts(rep, out / exp_id, cfg, started)
    for line in rep.summary_lines():
        echo(line)
    return rep


def run(cfg: RunConfig, echo=print) -> int:
    """Run ``cfg.experiment`` (or every criterion for ``all``); return the exit status."""
    out = Path(cfg.out)
    if cfg.experiment != "all":
        rep = _run_one(cfg.experiment, cfg, out, echo)
        if not rep.passed:
            echo(f"FAILED: {cfg.experiment}: {'; '.join(rep.failing)}")
            return 1
        return 0
    rows = []
    for exp in REGISTRY.values():
        if exp.criterion is None:
            continue
        rep = _run_one(exp.id, cfg, out, echo)
        rows.append((exp.criterion, exp.id, "PASS" if rep.passed else "FAIL",
                     f"{rep.wall_clock:.1f}", "; ".join(rep.failing)))
    header = ("criterion", "experiment", "status", "seconds", "failing")
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    width = max(len(r[1]) for r in rows)
    text = [f"{'#':>2}  {'experiment':<{width}}  status  seconds  failing"]
    text += [f"{c:>2}  {i:<{width}}  {s:<6}  {t:>7}  {f}" for c, i, s, t, f in rows]
    (out / "summary.txt").write_text("\n".join(text) + "\n", encoding="utf-8")
    echo("")
    for line in text:
        echo(line)
    return 0 if all(r[2] == "PASS" for r in rows) else 1


def list_experiments() -> str:
    """Ids, criterion numbers, parameters and claims in registry order."""
    lines = []
    for exp in REGISTRY.values():
        crit = f"[{exp.criterion}]" if exp.criterion else "[-]"
        lines.append(f"{exp.id:<22} {crit:<5} params: {exp.params}")
        lines.append(f"{'':<28} claim: {exp.claim}")
    return "\n".join(lines)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="roughsq", description="Run square-function experiments.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list experiments")
    r = sub.add_parser("run", help="run one experiment or all criteria")
    r.add_argument("experiment", help="experiment id or 'all'")
    r.add_argument("--alpha", type=float)
    r.add_argument("--p", type=float)
    r.add_argument("--function")
    r.add_argument("--tier", choices=TIERS)
    r.add_argument("--seed", type=int)
    r.add_argument("--out")
    r.add_argument("--config", help="JSON file with default values for the flags")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        print(list_experiments())
        return 0
    try:
        values = load_config(args.config) if args.config else {}
        values = _coerce(values)
        values.update(_coerce({k: getattr(args, k) for k in _KEYS}))
        cfg = RunConfig(args.experiment, **values)
    except ConfigError as exc:
        print(f"roughsq: configuration error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
