"""Function representations, norms, seminorms and the Hilbert transform.

Everything downstream consumes two representations:

* :class:`GridFunction`, samples on a uniform :class:`Grid1D`;
* :class:`Evaluator`, an exact vectorised point rule for closed-form
  functions.

Fourier convention used across the package: the forward transform of a
grid function carries the factor ``h`` and the inverse carries
``1/(N h)``, so that the discrete Plancherel identity holds.  Multipliers
act on the periodised grid with angular frequencies
``xi = 2*pi*fftfreq(N, h)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "Grid1D",
    "GridFunction",
    "Evaluator",
    "NormSpec",
    "sample",
    "lp_norm",
    "weak_l1_quasinorm",
    "hilbert_transform",
    "h1_norm",
    "zygmund_seminorm",
    "frequencies",
    "apply_multiplier",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid ``x0 + i*h`` for ``i = 0..N-1``."""

    x0: float
    h: float
    N: int

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError(f"grid spacing must be positive, got {self.h}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.N}")
        if not math.isfinite(self.x0):
            raise ValueError("grid origin must be finite")

    @classmethod
    def over(cls, a: float, b: float, N: int) -> "Grid1D":
        """Grid of ``N`` points covering ``[a, b)`` (right end excluded)."""
        return cls(float(a), (b - a) / N, int(N))

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(self.N)

    @property
    def right(self) -> float:
        return self.x0 + (self.N - 1) * self.h

    @property
    def length(self) -> float:
        """Period length ``N h`` used by the periodised transforms."""
        return self.N * self.h


@dataclass(frozen=True)
class GridFunction:
    """Real or complex samples on a :class:`Grid1D`."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1 or v.shape[0] != self.grid.N:
            raise ValueError(
                f"expected {self.grid.N} samples, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            bad = int(np.flatnonzero(~np.isfinite(v))[0])
            raise ValueError(f"non-finite sample at index {bad}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.grid, np.asarray(values))

    def __call__(self, x):
        """Linear interpolation; raises outside the sampled interval."""
        x = np.asarray(x, dtype=float)
        g = self.grid
        u = (x - g.x0) / g.h
        tol = 1e-9
        if np.any(u < -tol) or np.any(u > g.N - 1 + tol):
            bad = x[(u < -tol) | (u > g.N - 1 + tol)].ravel()[0]
            raise ValueError(
                f"evaluation point {bad} outside grid [{g.x0}, {g.right}]"
            )
        u = np.clip(u, 0.0, g.N - 1)
        i = np.minimum(np.floor(u).astype(np.int64), g.N - 2)
        w = u - i
        v = self.values
        return (1.0 - w) * v[i] + w * v[i + 1]


@dataclass(frozen=True)
class Evaluator:
    """Deterministic closed-form point rule.

    Parameters
    ----------
    tag : str
        Identifier.
    params : dict
        Parameter record used to build the rule.
    fn : callable
        Vectorised map ``ndarray -> ndarray``.
    support_radius : float
        The rule returns 0 for ``|x| > support_radius`` (``inf`` if none).
    smoothness : str
        One of ``"smooth"``, ``"lipschitz"``, ``"zygmund"``.
    flat_radius : float
        The function is constant on ``(-inf, -r]`` and on ``[r, inf)``.
        Quadrature uses this to grade nodes geometrically far away.
        Defaults to ``support_radius``.
    kinks : tuple of float
        Points where derivatives jump; used as quadrature breakpoints.
    """

    tag: str
    params: dict
    fn: Callable[[np.ndarray], np.ndarray]
    support_radius: float = math.inf
    smoothness: str = "smooth"
    flat_radius: Optional[float] = None
    kinks: tuple = ()

    def __post_init__(self):
        if self.smoothness not in ("smooth", "lipschitz", "zygmund"):
            raise ValueError(f"unknown smoothness tag {self.smoothness!r}")
        if self.flat_radius is None:
            object.__setattr__(self, "flat_radius", float(self.support_radius))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = np.asarray(self.fn(x), dtype=float)
        if math.isfinite(self.support_radius):
            y = np.where(np.abs(x) > self.support_radius, 0.0, y)
        return y


@dataclass(frozen=True)
class NormSpec:
    """Exponent ``p`` in ``(0, inf]`` and the weak-type flag."""

    p: float = 2.0
    weak: bool = False

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"exponent must be positive, got {self.p}")
        if self.weak and self.p != 1:
            raise ValueError("weak quasinorm is only defined for p = 1")


def sample(ev: Evaluator, grid: Grid1D) -> GridFunction:
    """Sample ``ev`` at the grid nodes."""
    x = grid.x
    v = np.asarray(ev(x))
    if not np.all(np.isfinite(v)):
        i = int(np.flatnonzero(~np.isfinite(v))[0])
        raise ValueError(f"non-finite value of {ev.tag} at node x={x[i]!r}")
    return GridFunction(grid, v)


def lp_norm(g: GridFunction, spec: NormSpec | float = 2.0) -> float:
    """Left Riemann sum estimate of the L^p norm."""
    if not isinstance(spec, NormSpec):
        spec = NormSpec(float(spec))
    if spec.weak:
        return weak_l1_quasinorm(g)
    a = np.abs(g.values)
    if math.isinf(spec.p):
        return float(a.max())
    p = spec.p
    # numpy sums pairwise, so the reduction order is fixed
    return float((np.sum(a**p) * g.grid.h) ** (1.0 / p))


def weak_l1_quasinorm(g: GridFunction) -> float:
    """``sup_lambda lambda * |{|g| > lambda}|`` evaluated exactly on the grid.

    The supremum of the step function is attained at one of the sample
    magnitudes (approached from below), so those are the only candidates.
    """
    a = np.sort(np.abs(np.asarray(g.values)))[::-1]
    if a.size == 0 or a[0] == 0:
        return 0.0
    # level a[i] (from below) is exceeded by the i+1 largest samples
    counts = np.arange(1, a.size + 1)
    return float(np.max(a * counts) * g.grid.h)


def frequencies(grid: Grid1D) -> np.ndarray:
    """Angular frequencies of the periodised grid."""
    return 2.0 * np.pi * np.fft.fftfreq(grid.N, grid.h)


def apply_multiplier(g: GridFunction, mult, real_output: Optional[bool] = None
                     ) -> GridFunction:
    """Apply a Fourier multiplier on the periodised grid.

    ``mult`` is either an array over :func:`frequencies` or a callable of
    the frequency array.
    """
    xi = frequencies(g.grid)
    m = mult(xi) if callable(mult) else np.asarray(mult)
    out = np.fft.ifft(m * np.fft.fft(g.values))
    if real_output is None:
        real_output = not np.iscomplexobj(g.values) and np.allclose(
            m, np.conj(m[_neg_index(g.grid.N)]), rtol=1e-13, atol=1e-300
        )
    if real_output:
        out = out.real
    return g.with_values(out)


def _neg_index(N: int) -> np.ndarray:
    return (-np.arange(N)) % N


def hilbert_transform(g: GridFunction) -> GridFunction:
    """Multiplier ``-i sgn(xi)`` on the periodised grid.

    The mean mode and (for even ``N``) the Nyquist mode are mapped to 0.
    Callers wanting the transform on the line should embed the function in
    an interval at least 8 times longer than its support.
    """
    N = g.grid.N
    if N % 2:
        raise ValueError(f"hilbert_transform needs an even sample count, got {N}")
    xi = frequencies(g.grid)
    m = -1j * np.sign(xi)
    m[N // 2] = 0.0
    return apply_multiplier(g, m, real_output=not np.iscomplexobj(g.values))


def h1_norm(g: GridFunction, boundary_tol: float = 1e-8, report: Optional[list] = None
            ) -> float:
    """``||g||_1 + ||H g||_1`` on the periodised grid.

    If the boundary samples exceed ``boundary_tol`` relative to the peak a
    warning string is appended to ``report`` (when given).
    """
    v = np.abs(np.asarray(g.values))
    peak = v.max() if v.size else 0.0
    if peak > 0 and max(v[0], v[-1]) > boundary_tol * peak and report is not None:
        report.append(
            f"h1_norm: boundary mass {max(v[0], v[-1]):.3e} above tolerance"
        )
    return lp_norm(g, NormSpec(1.0)) + lp_norm(hilbert_transform(g), NormSpec(1.0))


def zygmund_seminorm(g: GridFunction, hmax: float) -> float:
    """``max |g(x+h) + g(x-h) - 2 g(x)| / |h|`` over grid-aligned ``h <= hmax``."""
    grid = g.grid
    if not (0 < hmax <= 0.5 * (grid.N - 1) * grid.h + 1e-12):
        raise ValueError("hmax must lie in (0, half the interval length]")
    v = np.asarray(g.values)
    kmax = int(math.floor(hmax / grid.h + 1e-9))
    best = 0.0
    for k in range(1, kmax + 1):
        d2 = v[2 * k:] + v[: -2 * k] - 2.0 * v[k:-k]
        if d2.size:
            best = max(best, float(np.max(np.abs(d2))) / (k * grid.h))
    return best
