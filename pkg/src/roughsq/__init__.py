"""Rough square functions, fractional derivatives and their numerical checks.

Subpackages and modules:

* :mod:`roughsq.fnspace` - grids, sampled functions, norms.
* :mod:`roughsq.fractional` - Riesz derivatives and Littlewood-Paley pieces.
* :mod:`roughsq.sqfun` - the square functions ``S_alpha``, ``G_alpha`` and relatives.
* :mod:`roughsq.symm` - symmetrised commutator kernels and Menger curvature.
* :mod:`roughsq.zoo` - catalogue of test functions.
* :mod:`roughsq.verify` - experiments with pass/fail verdicts.
* :mod:`roughsq.cli` - batch front end.
"""
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
