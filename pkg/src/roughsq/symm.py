"""Commutator kernel, quadratic symmetrization and Menger curvature.

The first Calderon commutator has kernel ``K_A(x, y) = (A(y) - A(x)) / (x - y)^2``.
Its three-term symmetrization

    Sym(x, y, z) = K(x,y) K(x,z) + K(y,z) K(y,x) + K(z,x) K(z,y)

collapses to a single square,

    Sym(x, y, z) = (A[x, y] - A[x, z])^2 / (z - y)^2,

where ``A[a, b]`` is the divided difference.  Equivalently ``Sym = A[x,y,z]^2``
with the second divided difference.

Cancellation.  The brute-force sum adds three products of size
``|A[a,b]|^2 / gap^2`` to produce ``A[x,y,z]^2``, so its absolute round-off
is about ``eps * |A'|^2 / gap^2`` whatever the size of the result; near a
zero of ``A[x,y,z]`` the relative error is unbounded.  The closed form
forms one difference of divided differences and squares it, so its
relative error is about ``eps * |A[x,y]| / |A[x,y] - A[x,z]|``.  It is the
production path; the brute force exists for testing and has an exact
rational mode.

Integrating ``Sym`` over ``x, y, z`` gives ``int (S_1 A)(x)^2 dx`` (put
``y = x + s``, ``z = x + t``), so the ratio against ``||A'||_2^2`` is the
square of the constant relating ``S_1`` to ``A'``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fnspace import Evaluator

__all__ = [
    "Triple",
    "PlanarPoint",
    "commutator_kernel",
    "sym_bruteforce",
    "sym_closed",
    "menger_curvature",
    "circumradius_oracle",
    "sym_l2_identity",
    "SymL2Result",
]


@dataclass(frozen=True)
class Triple:
    """Three pairwise distinct reals."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        x, y, z = self.x, self.y, self.z
        if not all(math.isfinite(v) for v in (x, y, z)):
            raise ValueError("triple entries must be finite")
        if x == y or x == z or y == z:
            raise ValueError(f"degenerate triple ({x}, {y}, {z})")

    @property
    def min_gap(self) -> float:
        return min(abs(self.x - self.y), abs(self.x - self.z), abs(self.y - self.z))


@dataclass(frozen=True)
class PlanarPoint:
    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError("planar point must be finite")


def _distinct(x, y, z):
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    if np.any(x == y) or np.any(x == z) or np.any(y == z):
        raise ValueError("degenerate triple: entries must be pairwise distinct")
    return x, y, z


def commutator_kernel(A: Evaluator, x, y):
    """``(A(y) - A(x)) / (x - y)^2`` for ``x != y`` (no principal value)."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(x == y):
        raise ValueError("commutator kernel is undefined on the diagonal x = y")
    out = (A(y) - A(x)) / (x - y) ** 2
    return out[()] if out.ndim == 0 else out


def _unpack(t):
    if isinstance(t, Triple):
        return t.x, t.y, t.z
    return t


def _sym_terms(x, y, z, Ax, Ay, Az):
    K = lambda a, fa, b, fb: (fb - fa) / ((a - b) * (a - b))
    return (K(x, Ax, y, Ay) * K(x, Ax, z, Az) + K(y, Ay, z, Az) * K(y, Ay, x, Ax)
            + K(z, Az, x, Ax) * K(z, Az, y, Ay))


def sym_bruteforce(A: Evaluator, t, exact: bool = False):
    """Three-term product symmetrization, evaluated literally.

    ``t`` is a :class:`Triple` or a tuple of equally shaped arrays.  With
    ``exact`` the sum is formed in rational arithmetic from the float
    values of ``x, y, z`` and ``A``, then rounded once; this removes the
    cancellation error of the double-precision sum, which is of order
    ``eps * K^2`` and dominates wherever ``Sym`` is near zero.
    """
    x, y, z = _distinct(*_unpack(t))
    Ax, Ay, Az = A(x), A(y), A(z)
    if not exact:
        out = _sym_terms(x, y, z, Ax, Ay, Az)
        return out[()] if np.ndim(out) == 0 else out
    cols = np.broadcast_arrays(x, y, z, Ax, Ay, Az)
    shape = cols[0].shape
    flat = [c.ravel().tolist() for c in cols]
    vals = [float(_sym_terms(*(Fraction(v) for v in row))) for row in zip(*flat)]
    out = np.array(vals, dtype=float).reshape(shape)
    return out[()] if out.ndim == 0 else out


def _closed_from_values(x, y, z, Ax, Ay, Az):
    q = (Ay - Ax) / (y - x) - (Az - Ax) / (z - x)
    return q * q / (z - y) ** 2


def sym_closed(A: Evaluator, t):
    """Squared difference of divided differences over ``(z - y)^2``.

    Formed in ``numpy.longdouble`` (80-bit on x86 Linux) and rounded once,
    which keeps the cancellation in the difference of divided differences
    below double round-off in all but extreme cases.
    """
    x, y, z = _distinct(*_unpack(t))
    L = np.longdouble
    v = [np.asarray(a, dtype=L) for a in (x, y, z, A(x), A(y), A(z))]
    out = np.asarray(_closed_from_values(*v), dtype=float)
    return out[()] if out.ndim == 0 else out


def _coords(p):
    if isinstance(p, PlanarPoint):
        return np.asarray(p.u, float), np.asarray(p.v, float)
    return np.asarray(p[0], float), np.asarray(p[1], float)


def menger_curvature(p1, p2, p3):
    """Reciprocal circumradius ``4 area / (product of side lengths)``.

    Points are :class:`PlanarPoint` or ``(u, v)`` pairs of arrays.  Collinear
    points give 0; coincident points raise.
    """
    (u1, v1), (u2, v2), (u3, v3) = _coords(p1), _coords(p2), _coords(p3)
    a = np.hypot(u2 - u1, v2 - v1)
    b = np.hypot(u3 - u2, v3 - v2)
    c = np.hypot(u1 - u3, v1 - v3)
    if np.any(a == 0) or np.any(b == 0) or np.any(c == 0):
        raise ValueError("menger curvature needs three distinct points")
    cross = (u2 - u1) * (v3 - v1) - (v2 - v1) * (u3 - u1)
    out = 2.0 * np.abs(cross) / (a * b * c)
    return out[()] if out.ndim == 0 else out


def circumradius_oracle(p1, p2, p3) -> float:
    """Circumradius from the circumcenter, found by solving the two
    perpendicular-bisector equations.  Independent of :func:`menger_curvature`.
    """
    P = np.array([_coords(p) for p in (p1, p2, p3)], dtype=float)
    M = 2.0 * (P[1:] - P[0])
    rhs = np.sum(P[1:] ** 2, axis=1) - np.sum(P[0] ** 2)
    center = np.linalg.solve(M, rhs)
    return float(np.mean(np.linalg.norm(P - center, axis=1)))


@dataclass(frozen=True)
class SymL2Result:
    """``lhs`` is the value used for ``rhs_ratio``; ``lhs_truncated`` is the
    plain quadrature over ``[-box, box]^3``."""

    lhs: float
    rhs_ratio: float
    grad_sq: float
    box: float
    resolution: int
    lhs_truncated: float
    extrapolated: bool = False

    def __iter__(self):
        return iter((self.lhs, self.rhs_ratio))


def _midpoints(box: float, n: int) -> tuple[np.ndarray, float]:
    h = 2.0 * box / n
    return -box + (np.arange(n) + 0.5) * h, h


def _triple_midpoint(A: Evaluator, box: float, n: int, chunk: int) -> float:
    (x, hx), (y, hy), (z, hz) = (_midpoints(box, m) for m in (n, n + 1, n + 2))
    Ax, Ay, Az = A(x), A(y), A(z)
    Y, Z = y[:, None], z[None, :]
    AY, AZ = Ay[:, None], Az[None, :]
    total = 0.0
    for i in range(0, n, chunk):
        xs, axs = x[i:i + chunk, None, None], Ax[i:i + chunk, None, None]
        total += float(np.sum(_closed_from_values(xs, Y, Z, axs, AY, AZ)))
    return total * hx * hy * hz


def sym_l2_identity(A: Evaluator, box: float, resolution: int = 128,
                    dA: Evaluator | None = None, extrapolate: bool = False,
                    chunk: int = 16) -> SymL2Result:
    """Truncated triple integral of ``Sym`` over ``[-box, box]^3``.

    Tensor midpoint rule with ``n``, ``n + 1`` and ``n + 2`` cells on the
    three axes (``n`` rounded up to a multiple of 4), so no node of one axis
    coincides with a node of another and no diagonal cell needs special
    treatment.  ``Sym`` is bounded for C^2 inputs, so the rule is second
    order in ``h = 2 box / n``.

    Truncation loses ``O(support / box)`` of the integral (the integrand
    decays like ``dist^-2`` in each variable).  With ``extrapolate`` the
    integral is also computed over ``[-2 box, 2 box]^3`` at the same ``h``
    and the ``1/box`` term is removed by Richardson extrapolation.

    ``rhs_ratio = lhs / ||A'||_2^2``; the gradient norm uses ``dA`` when
    supplied, otherwise centred differences.  ``A == 0`` gives
    ``rhs_ratio = nan``.
    """
    if not box > 0:
        raise ValueError("box must be positive")
    if not math.isfinite(A.support_radius) or A.support_radius > box:
        raise ValueError(f"support of {A.tag} (radius {A.support_radius}) escapes the "
                         f"box [-{box}, {box}]")
    n = int(resolution)
    n += (-n) % 4
    if n < 8:
        raise ValueError("resolution must be at least 8")
    trunc = _triple_midpoint(A, box, n, chunk)
    lhs = 2.0 * _triple_midpoint(A, 2.0 * box, 2 * n, chunk) - trunc if extrapolate else trunc

    t, w = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(-box, box, 4 * n + 1)
    a, b = edges[:-1, None], edges[1:, None]
    xg = 0.5 * (a + b) + 0.5 * (b - a) * t
    wg = 0.5 * (b - a) * w
    if dA is not None:
        d = dA(xg)
    else:
        eps = 1e-5 * box
        d = (A(xg + eps) - A(xg - eps)) / (2 * eps)
    grad_sq = float(np.sum(wg * d * d))
    ratio = lhs / grad_sq if grad_sq > 0 else float("nan")
    return SymL2Result(lhs, ratio, grad_sq, float(box), n, trunc, bool(extrapolate))
