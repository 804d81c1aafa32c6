"""Resolvent machinery: two-point boundary value solves for -y'' + q y = mu y.

The left endpoint is held Dirichlet (y(0) = 0) and the right condition is
y(pi) cos(beta) + y'(pi) sin(beta) = 0.  For mu off the spectrum the unique
solution with forcing f is assembled by variation of parameters from the two
one-sided solutions phi (normalised at 0) and psi (normalised at pi):

    y(x) = [ psi(x) int_0^x f phi  +  phi(x) int_x^pi f psi ] / W(mu),

where W = phi psi' - phi' psi is constant in x and equals -psi(0, mu).  The
derivative has the same shape with phi', psi' outside the integrals (the
cross terms cancel), so y' needs no numerical differentiation.

Three diagnostics quantify the resolvent's analytic structure:

* ``residue_check`` recovers the residue of mu -> y(x, mu, f) at an
  eigenvalue, which must equal phi_n(x) (int f phi_n) / a_n, by Richardson
  extrapolation of the symmetric difference h (y(mu_n+h) - y(mu_n-h)) / 2.
* ``zone_bound_check`` samples the modulus bounds
  |sin(pi lam)| >= e^{pi |Im lam|} / 7 and |cos(pi lam)| >= e^{pi |Im lam|} / 7
  on the region of the complex lam-plane at distance >= 1/6 from every
  half-integer; these bounds drive resolvent decay estimates.
* ``bvp_decay_check`` fits sup_x |y(x, lam^2, f)| against lam and reports the
  log-log slope, which should be close to -1 (decay like C / lam).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .ivp import BoundaryParams, build_grid, _sweep, _sweep_trace
from .potential import PI, Potential

__all__ = [
    "BvpSolution",
    "ResidueCheck",
    "ZoneCheck",
    "DecayCheck",
    "greens_wronskian",
    "solve_bvp",
    "residue_check",
    "residue_detail",
    "in_zone",
    "zone_bound_check",
    "zone_bound_detail",
    "bvp_decay_check",
    "bvp_decay_detail",
]

_W_FLOOR = 1e-8
_ZONE_MARGIN = 1.0 / 6.0
_ZONE_CONSTANT = 1.0 / 7.0


@dataclass
class BvpSolution:
    """Forced solution on a grid, with its exact derivative trace."""

    grid: np.ndarray
    y: np.ndarray
    yprime: np.ndarray
    mu: float
    f: object
    w: float

    def at(self, x) -> np.ndarray:
        """Values at points that are nodes of ``grid`` (no interpolation)."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        pos = np.searchsorted(self.grid, xs)
        if not np.allclose(self.grid[np.minimum(pos, len(self.grid) - 1)], xs,
                           rtol=0.0, atol=1e-12):
            raise ValueError("requested points are not grid nodes; pass them "
                             "via the grid argument of solve_bvp")
        out = self.y[pos]
        return float(out[0]) if np.ndim(x) == 0 else out


def _bp(beta: float) -> BoundaryParams:
    return BoundaryParams(PI, beta)


def greens_wronskian(q: Potential, beta: float, mu) -> float | np.ndarray:
    """W(mu) = -psi(0, mu) for the Dirichlet-left problem; vectorised in mu."""
    mus = np.atleast_1d(np.asarray(mu, dtype=float))
    u0, up0 = _bp(beta).right_data
    end = _sweep(q.reversed(), mus, float(u0), float(up0))
    vals = -end["y"]
    return float(vals[0]) if np.ndim(mu) == 0 else vals


def solve_bvp(q: Potential, beta: float, mu: float, f,
              grid: np.ndarray | None = None) -> BvpSolution:
    """Solve -y'' + q y = mu y + ... with forcing f; y(0) = 0 and the beta
    condition at pi.  ``f`` is any callable on [0, pi].

    Raises
    ------
    ArithmeticError
        If |W(mu)| < 1e-8, i.e. mu is numerically an eigenvalue and the
        problem has no (unique) solution.
    """
    bp = _bp(beta)
    if grid is None:
        grid = build_grid(q, n_min=2048, lam_max=math.sqrt(max(abs(mu), 1.0)))
    else:
        grid = np.asarray(grid, dtype=float)

    mus = np.array([float(mu)])
    y0, yp0 = bp.left_data
    PHI, PHIP = _sweep_trace(q, mus, y0, yp0, grid)
    phi, phip = PHI[0], PHIP[0]

    u0, up0 = bp.right_data
    grid_rev = np.ascontiguousarray(PI - grid[::-1])
    grid_rev[0], grid_rev[-1] = 0.0, PI
    U, UP = _sweep_trace(q.reversed(), mus, u0, up0, grid_rev)
    psi, psip = U[0][::-1], -UP[0][::-1]

    w = phi[0] * psip[0] - phip[0] * psi[0]
    if abs(w) < _W_FLOOR:
        raise ArithmeticError(
            f"mu = {mu:.12g} is numerically an eigenvalue (|W| = {abs(w):.3e})")

    fvals = np.asarray(f(grid), dtype=float)
    ph_int = cumulative_simpson(fvals * phi, x=grid, initial=0.0)
    ps_cum = cumulative_simpson(fvals * psi, x=grid, initial=0.0)
    ps_int = ps_cum[-1] - ps_cum
    y = (psi * ph_int + phi * ps_int) / w
    yprime = (psip * ph_int + phip * ps_int) / w
    return BvpSolution(grid=grid, y=y, yprime=yprime, mu=float(mu), f=f,
                       w=float(w))


@dataclass
class ResidueCheck:
    n: int
    x: float
    estimate: float
    exact: float
    rel_err: float


def residue_detail(q: Potential, beta: float, eig, f, x: float,
                   steps: tuple[float, float] = (1e-3, 1e-4)) -> ResidueCheck:
    """Recover the residue of y(x, mu, f) at mu_n and compare with
    phi_n(x) (int f phi_n) / a_n.

    ``eig`` is an eigenpair for the (pi, beta) problem; its stored norming
    constant is used when present, otherwise recomputed.  The pole is simple,
    so est(h) = h (y(mu_n + h) - y(mu_n - h)) / 2 equals the residue up to
    even powers of h; Richardson extrapolation over the two ``steps`` removes
    the h^2 term.
    """
    bp = _bp(beta)
    mu_n = float(eig.mu)
    if eig.a is not None:
        a_n = float(eig.a)
    else:
        from .spectrum import norming_constants
        a_n, _ = norming_constants(q, bp, eig)

    grid = build_grid(q, n_min=2048, lam_max=math.sqrt(max(abs(mu_n), 1.0)) + 1.0,
                      extra=(x,))
    y0, yp0 = bp.left_data
    PHI, _ = _sweep_trace(q, np.array([mu_n]), y0, yp0, grid)
    phin = PHI[0]
    proj = simpson(np.asarray(f(grid), dtype=float) * phin, x=grid)
    pos = int(np.searchsorted(grid, x))
    exact = phin[pos] * proj / a_n

    def est(h: float) -> float:
        yp = solve_bvp(q, beta, mu_n + h, f, grid=grid).y[pos]
        ym = solve_bvp(q, beta, mu_n - h, f, grid=grid).y[pos]
        return h * (yp - ym) / 2.0

    h1, h2 = steps
    e1, e2 = est(h1), est(h2)
    r = (h1 * h1 * e2 - h2 * h2 * e1) / (h1 * h1 - h2 * h2)
    rel = abs(r - exact) / max(abs(exact), 1e-300)
    return ResidueCheck(n=int(eig.n), x=float(x), estimate=float(r),
                        exact=float(exact), rel_err=float(rel))


def residue_check(q: Potential, beta: float, eig, f, x: float) -> float:
    """Relative error of the extrapolated residue against the eigenpair value."""
    return residue_detail(q, beta, eig, f, x).rel_err


def in_zone(lam, margin: float = _ZONE_MARGIN):
    """True where the complex lam keeps distance >= margin from every n/2."""
    lam = np.asarray(lam, dtype=complex)
    u, v = lam.real, lam.imag
    nearest = np.round(2.0 * u) / 2.0
    dist = np.hypot(u - nearest, v)
    out = dist >= margin
    return bool(out) if np.ndim(lam) == 0 else out


@dataclass
class ZoneCheck:
    tested: int
    violations: int
    min_ratio_sin: float
    min_ratio_cos: float
    box: float
    sample_count: int


def zone_bound_detail(sample_count: int = 400, box: float = 20.0,
                      margin: float = _ZONE_MARGIN) -> ZoneCheck:
    """Sample |sin(pi lam)| e^{-pi |Im lam|} and the cosine analogue over the
    zone inside [-box, box]^2 and count points falling below 1/7."""
    u = np.linspace(-box, box, sample_count)
    v = np.linspace(-box, box, sample_count)
    U, V = np.meshgrid(u, v)
    lam = U + 1j * V
    mask = in_zone(lam, margin) & (np.abs(lam) <= box)
    lam_in = lam[mask]
    scale = np.exp(-PI * np.abs(lam_in.imag))
    ratio_sin = np.abs(np.sin(PI * lam_in)) * scale
    ratio_cos = np.abs(np.cos(PI * lam_in)) * scale
    bad = np.count_nonzero((ratio_sin < _ZONE_CONSTANT) |
                           (ratio_cos < _ZONE_CONSTANT))
    return ZoneCheck(tested=int(lam_in.size), violations=int(bad),
                     min_ratio_sin=float(np.min(ratio_sin)),
                     min_ratio_cos=float(np.min(ratio_cos)),
                     box=box, sample_count=sample_count)


def zone_bound_check(sample_count: int = 400) -> int:
    """Violation count for the modulus bounds on the default zone box."""
    return zone_bound_detail(sample_count=sample_count).violations


@dataclass
class DecayCheck:
    lams: np.ndarray
    sup_abs: np.ndarray
    slope: float
    c_hat: float
    degenerate: bool = False


def bvp_decay_detail(q: Potential, beta: float, f, lams) -> DecayCheck:
    """sup_x |y(x, lam^2, f)| for each lam, with the fitted log-log slope.

    Callers should pick lam values inside the half-integer-avoiding zone
    (e.g. integers plus 1/4) so no eigenvalue is approached.  A forcing that
    vanishes identically gives y = 0 everywhere; the fit is then meaningless
    and the check is marked degenerate with a NaN slope.
    """
    lams = np.asarray(lams, dtype=float)
    sups = np.empty_like(lams)
    for i, lam in enumerate(lams):
        sol = solve_bvp(q, beta, float(lam * lam), f)
        sups[i] = np.max(np.abs(sol.y))
    if np.max(sups) < 1e-300:
        return DecayCheck(lams=lams, sup_abs=sups, slope=float("nan"),
                          c_hat=0.0, degenerate=True)
    slope = float(np.polyfit(np.log(lams), np.log(sups), 1)[0])
    c_hat = float(np.max(sups * lams))
    return DecayCheck(lams=lams, sup_abs=sups, slope=slope, c_hat=c_hat)


def bvp_decay_check(q: Potential, beta: float, f, lams) -> float:
    """Fitted log-log decay exponent of sup |y| against lam (NaN if f = 0)."""
    return bvp_decay_detail(q, beta, f, lams).slope
