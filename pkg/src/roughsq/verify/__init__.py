"""Experiments with pass/fail verdicts.

Every experiment returns an :class:`~roughsq.verify.report.ExperimentReport`;
:mod:`roughsq.verify.registry` maps experiment ids to runners.
"""
from .cells import *  # noqa: F401,F403
from .identities import *  # noqa: F401,F403
from .pointwise import *  # noqa: F401,F403
from .registry import REGISTRY, Experiment, experiment_ids, get
from .report import *  # noqa: F401,F403
from .scans import *  # noqa: F401,F403
from . import cells, identities, pointwise, registry, report, scans

__all__ = (cells.__all__ + identities.__all__ + pointwise.__all__ + report.__all__
           + scans.__all__ + ["REGISTRY", "Experiment", "experiment_ids", "get"])
