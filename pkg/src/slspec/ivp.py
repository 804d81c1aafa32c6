"""Initial-value propagation for -y'' + q(x) y = mu y with piecewise-constant q.

On each constant piece the equation has the exact fundamental system built
from the entire functions

    c(z, t)  = cos(sqrt(z) t)              (cosh for z < 0)
    sn(z, t) = sin(sqrt(z) t) / sqrt(z)    (sinh(sqrt(-z) t)/sqrt(-z), or t)

with z = mu - q_i, so a whole piece of length h is crossed by the unimodular
transfer matrix  [[c, sn], [-z sn, c]].  No ODE stepping error is incurred;
the only approximation anywhere is a 4-term Taylor form of c and sn used when
|z| h^2 < 1e-8, which is exact to double precision there.

The module provides left solutions (data at 0 set by the angle alpha), right
solutions (data at pi set by beta, integrated through the reflected
potential), the characteristic function whose zeros are the eigenvalues, the
Wronskian with a constancy diagnostic, and a globally continuous Prüfer angle
Theta(pi, mu).  Theta increases strictly in mu and counts oscillation, which
is what makes gap-free eigenvalue bracketing possible: on trig pieces the
scaled phase (arctan of sqrt(z) y / y') advances linearly by sqrt(z) h so
zero counts come from an exact floor, and on hyperbolic/linear pieces a
solution can cross zero at most once, detected by a sign change.

All propagation routines broadcast over a vector of mu values; the loop runs
over potential pieces only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .potential import PI, Potential

__all__ = [
    "BoundaryParams",
    "SolutionTrace",
    "WronskianValue",
    "build_grid",
    "solve_phi",
    "solve_psi",
    "characteristic",
    "wronskian",
    "pruefer_angle",
]

#: Taylor fallback threshold: |mu - q_i| * h^2 below this uses the series forms.
DEGENERATE_CUT = 1e-8

#: Below this |z| h^2 the sn^2 integral uses its series (cancellation guard).
_SN2_SERIES_CUT = 1e-4


@dataclass(frozen=True)
class BoundaryParams:
    """Boundary-condition angles (alpha at x=0, beta at x=pi).

    The conditions are ``y(0) cos(alpha) + y'(0) sin(alpha) = 0`` with
    ``alpha in (0, pi]`` and ``y(pi) cos(beta) + y'(pi) sin(beta) = 0`` with
    ``beta in [0, pi)``.  ``alpha == math.pi`` means the Dirichlet condition
    at 0 exactly: the left initial data is snapped to (0, 1) rather than
    (sin(pi) ~ 1e-16, 1).
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= PI):
            raise ValueError(f"alpha must lie in (0, pi], got {self.alpha!r}")
        if not (0.0 <= self.beta < PI):
            raise ValueError(f"beta must lie in [0, pi), got {self.beta!r}")

    @property
    def dirichlet_left(self) -> bool:
        return self.alpha == PI

    @property
    def left_data(self) -> tuple[float, float]:
        """(y(0), y'(0)) for the left solution."""
        if self.dirichlet_left:
            return 0.0, 1.0
        return math.sin(self.alpha), -math.cos(self.alpha)

    @property
    def right_data(self) -> tuple[float, float]:
        """(u(0), u'(0)) for the reflected right solution u(t) = psi(pi - t)."""
        return math.sin(self.beta), math.cos(self.beta)


@dataclass
class SolutionTrace:
    """A solution sampled on a grid: values ``y`` and derivatives ``yprime``."""

    grid: np.ndarray
    y: np.ndarray
    yprime: np.ndarray
    mu: float


class WronskianValue(float):
    """W(0) as a plain real, with ``max_drift`` = max_j |W(x_j) - W(0)|.

    The drift is a constancy diagnostic: the true Wronskian is independent of
    x, so anything beyond rounding noise signals mismatched traces.
    """

    max_drift: float

    def __new__(cls, value: float, max_drift: float):
        obj = super().__new__(cls, value)
        obj.max_drift = float(max_drift)
        return obj

    @property
    def value(self) -> float:
        return float(self)


def _left_data(alpha) -> tuple[float, float]:
    """Initial data (phi, phi') at x = 0 from alpha or a BoundaryParams."""
    if isinstance(alpha, BoundaryParams):
        return alpha.left_data
    a = float(alpha)
    if not 0.0 < a <= PI:
        raise ValueError("alpha must lie in (0, pi]")
    if a == PI:
        return 0.0, 1.0
    return math.sin(a), -math.cos(a)


def _right_data(beta) -> tuple[float, float]:
    """Initial data for the reflected sweep u(t) = psi(pi - t)."""
    if isinstance(beta, BoundaryParams):
        return beta.right_data
    b = float(beta)
    if not 0.0 <= b < PI:
        raise ValueError("beta must lie in [0, pi)")
    return math.sin(b), math.cos(b)


# -- transfer-matrix entries -------------------------------------------------


def _c_sn(z, h):
    """Entries c(z, h), sn(z, h); broadcasts over z and h."""
    z = np.asarray(z, dtype=float)
    h = np.asarray(h, dtype=float)
    w = z * h * h
    small = np.abs(w) < DEGENERATE_CUT
    az = np.where(small, 1.0, np.abs(z))
    om = np.sqrt(az)
    th = om * h
    pos = z > 0.0
    c = np.where(pos, np.cos(np.where(pos, th, 0.0)), np.cosh(np.where(pos, 0.0, th)))
    sn = np.where(pos, np.sin(np.where(pos, th, 0.0)), np.sinh(np.where(pos, 0.0, th))) / om
    # 4-term Taylor in w = z h^2 for the near-degenerate band (covers z ~ 0)
    c_s = 1.0 - w / 2.0 + w * w / 24.0 - w ** 3 / 720.0
    sn_s = h * (1.0 - w / 6.0 + w * w / 120.0 - w ** 3 / 5040.0)
    return np.where(small, c_s, c), np.where(small, sn_s, sn)


def _int_sn_sq(z, h, c, sn):
    """Exact int_0^h sn(z,t)^2 dt = (h - c sn)/(2z), series near z = 0."""
    z = np.asarray(z, dtype=float)
    w = z * h * h
    small = np.abs(w) < _SN2_SERIES_CUT
    series = h ** 3 / 3.0 - z * h ** 5 / 15.0 + 2.0 * z * z * h ** 7 / 315.0
    denom = np.where(small, 1.0, 2.0 * z)
    exact = (h - c * sn) / denom
    return np.where(small, series, exact)


# -- Prüfer band bookkeeping --------------------------------------------------


def _normalize_band(Z, y, yp):
    """Repair the band index so that parity * y >= 0 holds at an interval start.

    Returns (Z, parity).  An exact zero with the derivative pointing backwards
    means the phase sits exactly on a multiple of pi and is counted here; a
    sign inconsistency from boundary rounding is resolved toward whichever
    adjacent band puts the fractional phase nearest its interior.
    """
    parity = 1.0 - 2.0 * (Z & 1)
    at_zero = y == 0.0
    flip = at_zero & (parity * yp < 0.0)
    Z = Z + flip
    parity = np.where(flip, -parity, parity)
    bad = (~at_zero) & (parity * y < 0.0)
    if np.any(bad):
        phi_plus = np.arctan2(-parity * y, -parity * yp)
        phi_plus = np.where(phi_plus < 0.0, phi_plus + np.pi, phi_plus)
        step = np.where(phi_plus < 0.5 * np.pi, 1, -1)
        Z = Z + np.where(bad, step, 0)
        parity = np.where(bad, -parity, parity)
    return Z, parity


def _zeros_in_interval(z, h, y, yp, y_new, Z, parity):
    """Number of zeros of the solution inside one constant-q interval."""
    count = np.zeros_like(Z)
    tr = z > 0.0
    if np.any(tr):
        om = np.sqrt(np.where(tr, z, 1.0))
        phi = np.arctan2(parity * om * y, parity * yp)
        phi = np.where(phi < 0.0, phi + np.pi, phi)
        dz = np.floor((phi + om * h) / np.pi).astype(count.dtype)
        count = np.where(tr, dz, count)
    # z <= 0: at most one (simple) zero, visible as a sign change
    crossed = (~tr) & (parity * y_new < 0.0)
    return count + crossed


# -- core sweeps ---------------------------------------------------------------


def _sweep(q: Potential, mu, y0: float, yp0: float, *, phase: bool = False,
           iy2: bool = False):
    """Propagate (y, y') across all pieces of q for a vector of mu.

    Returns a dict with final ``y``, ``yp`` and optionally the continuous
    Prüfer angle ``theta`` at pi and the accumulated integral ``iy2`` of y^2.
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    y = np.full_like(mu, y0)
    yp = np.full_like(mu, yp0)
    Z = np.zeros(mu.shape, dtype=np.int64) if phase else None
    acc = np.zeros_like(mu) if iy2 else None

    widths = q.widths
    for qi, h in zip(q.values, widths):
        z = mu - qi
        c, sn = _c_sn(z, h)
        y_new = c * y + sn * yp
        yp_new = -z * sn * y + c * yp
        if iy2:
            icc = 0.5 * (h + c * sn)
            ics = 0.5 * sn * sn
            iss = _int_sn_sq(z, h, c, sn)
            acc += icc * y * y + 2.0 * ics * y * yp + iss * yp * yp
        if phase:
            Z, parity = _normalize_band(Z, y, yp)
            Z = Z + _zeros_in_interval(z, h, y, yp, y_new, Z, parity)
        y, yp = y_new, yp_new

    out = {"y": y, "yp": yp}
    if phase:
        Z, parity = _normalize_band(Z, y, yp)
        frac = np.arctan2(parity * y, parity * yp)
        frac = np.where(frac < 0.0, frac + np.pi, frac)
        out["theta"] = Z * np.pi + frac
    if iy2:
        out["iy2"] = acc
    return out


def _sweep_trace(q: Potential, mu, y0: float, yp0: float, grid: np.ndarray):
    """Values and derivatives along ``grid`` for a vector of mu.

    ``grid`` must start at 0, end at pi, increase strictly and contain every
    breakpoint of q so that each grid interval sees a single piece value.
    Returns arrays of shape (len(mu), len(grid)).
    """
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    G = len(grid)
    Y = np.empty((len(mu), G))
    YP = np.empty((len(mu), G))
    Y[:, 0] = y0
    YP[:, 0] = yp0
    qmid = q(0.5 * (grid[:-1] + grid[1:]))
    hs = np.diff(grid)
    y = Y[:, 0].copy()
    yp = YP[:, 0].copy()
    for j in range(G - 1):
        z = mu - qmid[j]
        c, sn = _c_sn(z, hs[j])
        y, yp = c * y + sn * yp, -z * sn * y + c * yp
        Y[:, j + 1] = y
        YP[:, j + 1] = yp
    return Y, YP


def build_grid(q: Potential, n_min: int = 1024, lam_max: float = 0.0,
               points_per_wavelength: int = 8, extra=()) -> np.ndarray:
    """Breakpoint-aligned grid: uniform inside each piece, even interval counts.

    The target spacing is pi/n_min, tightened so that a solution oscillating
    at frequency ``lam_max`` is sampled with at least ``points_per_wavelength``
    points per wavelength.  ``extra`` points (e.g. evaluation abscissae) are
    merged in afterwards.
    """
    h_max = PI / max(int(n_min), 1)
    if lam_max > 0 and points_per_wavelength > 0:
        h_max = min(h_max, 2.0 * PI / (lam_max * points_per_wavelength))
    parts = []
    for a, b in zip(q.breakpoints[:-1], q.breakpoints[1:]):
        n = max(2, int(math.ceil((b - a) / h_max)))
        n += n % 2
        parts.append(np.linspace(a, b, n + 1)[:-1])
    parts.append(np.array([PI]))
    grid = np.concatenate(parts)
    if len(extra):
        pts = np.asarray(extra, dtype=float)
        if np.any(pts < 0) or np.any(pts > PI):
            raise ValueError("extra grid points must lie in [0, pi]")
        grid = np.union1d(grid, pts)
    return grid


def _check_grid(q: Potential, grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("grid must be a 1-d array with at least two points")
    if grid[0] != 0.0 or grid[-1] != PI:
        raise ValueError("grid must run from 0 to pi")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must increase strictly")
    interior = q.breakpoints[1:-1]
    if len(interior) and not np.all(np.isin(interior, grid)):
        raise ValueError("grid missing a potential breakpoint")
    return grid


# -- public operations ---------------------------------------------------------


def solve_phi(q: Potential, mu: float, alpha,
              grid: np.ndarray | None = None) -> SolutionTrace:
    """Left solution phi(x, mu): y(0) = sin(alpha), y'(0) = -cos(alpha).

    ``alpha`` is the left boundary angle (a BoundaryParams is accepted too).
    Exact up to rounding on each piece.  ``grid`` defaults to a
    breakpoint-aligned refinement with at least 1024 intervals.
    """
    if grid is None:
        grid = build_grid(q)
    grid = _check_grid(q, grid)
    y0, yp0 = _left_data(alpha)
    Y, YP = _sweep_trace(q, float(mu), y0, yp0, grid)
    return SolutionTrace(grid=grid, y=Y[0], yprime=YP[0], mu=float(mu))


def solve_psi(q: Potential, mu: float, beta,
              grid: np.ndarray | None = None) -> SolutionTrace:
    """Right solution psi(x, mu): y(pi) = sin(beta), y'(pi) = -cos(beta).

    ``beta`` is the right boundary angle (a BoundaryParams is accepted too).
    Computed by propagating u(t) = psi(pi - t) through the reflected
    potential, which keeps the per-piece exactness.
    """
    if grid is None:
        grid = build_grid(q)
    grid = _check_grid(q, grid)
    u0, up0 = _right_data(beta)
    q_rev = q.reversed()
    grid_rev = np.ascontiguousarray(PI - grid[::-1])
    grid_rev[0] = 0.0
    grid_rev[-1] = PI
    U, UP = _sweep_trace(q_rev, float(mu), u0, up0, grid_rev)
    return SolutionTrace(grid=grid, y=U[0][::-1].copy(),
                         yprime=-UP[0][::-1], mu=float(mu))


def characteristic(q: Potential, mu, bp: BoundaryParams):
    """phi(pi, mu) cos(beta) + phi'(pi, mu) sin(beta); zero exactly at eigenvalues.

    Accepts scalar or array mu.  The Wronskian of the left and right solutions
    equals minus this quantity.
    """
    y0, yp0 = bp.left_data
    res = _sweep(q, mu, y0, yp0)
    out = res["y"] * math.cos(bp.beta) + res["yp"] * math.sin(bp.beta)
    return float(out[0]) if np.ndim(mu) == 0 else out


def wronskian(phi: SolutionTrace, psi: SolutionTrace) -> WronskianValue:
    """W(x) = phi psi' - phi' psi evaluated on the shared grid.

    Returns the value at x = 0 as a real; its ``max_drift`` attribute holds
    max_j |W(x_j) - W(0)| as a constancy diagnostic (nonzero drift indicates
    mismatched traces).
    """
    if not np.array_equal(phi.grid, psi.grid):
        raise ValueError("traces must share a grid")
    w = phi.y * psi.yprime - phi.yprime * psi.y
    return WronskianValue(float(w[0]), float(np.max(np.abs(w - w[0]))))


def pruefer_angle(q: Potential, mu, alpha):
    """Continuous Prüfer angle Theta(pi, mu) of the left solution.

    ``alpha`` is the left boundary angle (a BoundaryParams is accepted too).
    Theta(0) = pi - alpha, Theta increases strictly in mu, and
    Theta(pi, mu_n) = (n+1) pi - beta characterises the n-th eigenvalue.
    Accepts scalar or array mu.
    """
    y0, yp0 = _left_data(alpha)
    res = _sweep(q, mu, y0, yp0, phase=True)
    out = res["theta"]
    return float(out[0]) if np.ndim(mu) == 0 else out
