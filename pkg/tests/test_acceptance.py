"""Acceptance suite: one test per criterion, run at the standard tier.

Each test prints a single ``CRITERION n [id]: PASS|FAIL ...`` line (also
collected into the terminal summary) and asserts that every verdict of the
experiment passed.  The thresholds live in the experiments themselves and
are not relaxed here.
"""
import pytest

from roughsq.verify.registry import REGISTRY

RESULT_LINES = []

CRITERIA = sorted((e.criterion, e.id) for e in REGISTRY.values() if e.criterion)


def _describe(rep):
    if rep.passed:
        worst = rep.verdicts[-1] if rep.verdicts else None
        return f"{worst.name}: {worst.value:.4g}" if worst else ""
    return "; ".join(f"{v.name}: {v.value:.4g} {v.relation} {v.threshold:.4g}"
                     for v in rep.verdicts if v.passed is not True)[:400]


@pytest.mark.slow
@pytest.mark.parametrize("number,exp_id", CRITERIA, ids=[f"criterion_{n:02d}_{i}"
                                                        for n, i in CRITERIA])
def test_criterion(number, exp_id):
    rep = REGISTRY[exp_id].runner(dict(tier="standard"))
    status = "PASS" if rep.passed else "FAIL"
    line = (f"CRITERION {number:2d} [{exp_id}]: {status} ({rep.wall_clock:.1f} s) "
            f"{_describe(rep)}")
    RESULT_LINES.append(line)
    print(line)
    assert rep.passed, line
