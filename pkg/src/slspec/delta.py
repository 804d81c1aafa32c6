"""Boundary-condition index shifts delta_n and their trigonometric residuals.

For the zero potential the n-th eigenvalue square root is exactly n + delta_n
where delta_n in [-1, 1] solves

    delta = (1/pi) arccos( cos a / sqrt((n+delta)^2 sin^2 a + cos^2 a) )
          - (1/pi) arccos( cos b / sqrt((n+delta)^2 sin^2 b + cos^2 b) )

with (a, b) the boundary angles.  The map's derivative in delta is O(1/n^2)
(bounded by 1/(2(n-1)) always), so a damped fixed point converges for every
n >= 2; a bisection fallback guards the post-condition |delta - rhs| <= 1e-12.

For a Dirichlet left endpoint (a = pi) the shifts approach 1/2 at rate
cot(b)/(pi (n + 1/2)), and the residuals

    d_n = 1 + cos(2 pi delta_n)   (O(1/n^2))
    e_n = sin(2 pi delta_n)       (O(1/n))
    g_n = 2 e_n / (pi (2 pi m - e_n)),   m = n + delta_n

measure how far sin(m t) is from a half-integer sine; g_n is exactly the
correction turning 2/pi into 1 / int_0^pi sin^2(m t) dt.  These quantities
drive the series decompositions in :mod:`slspec.asymptotics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .potential import PI

__all__ = [
    "DeltaRecord",
    "solve_delta",
    "solve_delta_many",
    "delta_asymptotic",
    "trig_residuals",
    "trig_residuals_from_delta",
    "delta_record",
]

_FP_TOL = 1e-13
_POST_TOL = 1e-12
_MAX_ITER = 200


@dataclass(frozen=True)
class DeltaRecord:
    """delta_n plus its trig residuals (Dirichlet-left convention for d, e, g)."""

    n: int
    delta: float
    d: float
    e: float
    g: float


def _angle_parts(angle: float) -> tuple[float, float]:
    # exact Dirichlet semantics for the float pi, as in ivp.BoundaryParams
    if angle == PI:
        return -1.0, 0.0
    return math.cos(angle), math.sin(angle)


def _rhs(delta, n, alpha: float, beta: float):
    ca, sa = _angle_parts(alpha)
    cb, sb = _angle_parts(beta)
    m = n + delta
    ta = np.arccos(ca / np.sqrt(m * m * sa * sa + ca * ca))
    tb = np.arccos(cb / np.sqrt(m * m * sb * sb + cb * cb))
    return (ta - tb) / PI


def solve_delta_many(ns, alpha: float, beta: float) -> np.ndarray:
    """Vectorised :func:`solve_delta` over an array of indices (all >= 2)."""
    ns = np.asarray(ns, dtype=float)
    if np.any(ns < 2):
        raise ValueError("delta_n is defined for n >= 2")
    _check_angles(alpha, beta)
    d = np.zeros_like(ns)
    for _ in range(_MAX_ITER):
        r = _rhs(d, ns, alpha, beta)
        if np.all(np.abs(r - d) <= _FP_TOL):
            d = r
            break
        d = d + 0.5 * (r - d)
    for _ in range(3):  # undamped polish; contraction is O(1/n^2) here
        d = _rhs(d, ns, alpha, beta)
    bad = np.abs(d - _rhs(d, ns, alpha, beta)) > _POST_TOL
    for i in np.nonzero(bad)[0]:  # bisection fallback, rarely (never) taken
        d[i] = brentq(lambda t: t - float(_rhs(t, ns[i], alpha, beta)),
                      -1.0, 1.0, xtol=1e-14)
    if np.any(np.abs(d) > 1.0 + 1e-12):
        raise ArithmeticError("delta escaped [-1, 1]; inconsistent angles?")
    return d


def solve_delta(n: int, alpha: float, beta: float) -> float:
    """The shift delta_n(alpha, beta) in [-1, 1] for a single index n >= 2.

    Damped (factor 0.5) fixed-point iteration capped at 200 steps with a
    bisection fallback; the result satisfies |delta - rhs(delta)| <= 1e-12.

    Examples: (n, pi, pi/2) -> 1/2, (n, pi/2, pi/2) -> 0, (n, pi, 0) -> 1.
    """
    return float(solve_delta_many(np.array([n], dtype=float), alpha, beta)[0])


def _check_angles(alpha: float, beta: float) -> None:
    if not (0.0 < alpha <= PI):
        raise ValueError(f"alpha must lie in (0, pi], got {alpha!r}")
    if not (0.0 <= beta < PI):
        raise ValueError(f"beta must lie in [0, pi), got {beta!r}")


def delta_asymptotic(n, beta: float):
    """Large-n law for the Dirichlet-left shift: 1/2 + cot(beta)/(pi (n+1/2)).

    Valid for beta in (0, pi); the correction beyond it is O(cot(beta)/n^2),
    so the law degrades as beta approaches 0 or pi.
    """
    if not (0.0 < beta < PI):
        raise ValueError("the asymptotic law needs beta in (0, pi)")
    n = np.asarray(n, dtype=float)
    out = 0.5 + (math.cos(beta) / math.sin(beta)) / (PI * (n + 0.5))
    return float(out) if out.ndim == 0 else out


def trig_residuals_from_delta(n, delta):
    """(d, e, g) computed from a given shift; vectorised over n/delta."""
    n = np.asarray(n, dtype=float)
    delta = np.asarray(delta, dtype=float)
    m = n + delta
    d = 1.0 + np.cos(2.0 * PI * delta)
    e = np.sin(2.0 * PI * delta)
    g = 2.0 * e / (PI * (2.0 * PI * m - e))
    return d, e, g


def trig_residuals(n: int, beta: float) -> tuple[float, float, float]:
    """(d, e, g) for the Dirichlet-left problem at index n >= 2.

    ``d`` decays like 1/n^2, ``e`` like 1/n (both with cot(beta) prefactors).
    Before returning, the normalisation identity behind g is verified:
    1 / int_0^pi sin^2(m t) dt = 2/pi + g with the integral evaluated in the
    closed form pi/2 - e/(4m); a deviation beyond 1e-12 raises.
    """
    if not (0.0 < beta < PI):
        raise ValueError("trig residuals need beta in (0, pi)")
    delta = solve_delta(n, PI, beta)
    d, e, g = (float(v) for v in trig_residuals_from_delta(n, delta))
    m = n + delta
    gap = (PI / 2.0 - e / (4.0 * m)) * (2.0 / PI + g) - 1.0
    if abs(gap) > 1e-12:
        raise ArithmeticError(
            f"normalisation identity violated by {gap:.3e} at n={n}, beta={beta}")
    return d, e, g


def delta_record(n: int, beta: float) -> DeltaRecord:
    """Bundle delta and (d, e, g) for one index of the Dirichlet-left problem."""
    delta = solve_delta(n, PI, beta)
    d, e, g = (float(v) for v in trig_residuals_from_delta(n, delta))
    return DeltaRecord(n=int(n), delta=float(delta), d=d, e=e, g=g)
