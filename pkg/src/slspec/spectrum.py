"""Eigenvalues and norming constants of -y'' + q y = mu y on [0, pi].

Eigenvalues are located by the continuous Prüfer angle: the n-th eigenvalue is
the unique mu with Theta(pi, mu) = (n+1) pi - beta, and since Theta is
strictly increasing in mu this brackets every index with no skips or
duplicates.  Bisection runs in the variable nu with mu = nu |nu| (a signed
square root), so "bracket width" is meaningful in lambda units even when the
lowest eigenvalue is negative; brackets are tightened to 1e-10 in nu and then
polished by a vectorised secant iteration on the characteristic function.

Norming constants a_n = int phi_n^2 and b_n = int psi_n^2 come from the same
piecewise-exact accumulation used by the propagator, so they carry no
quadrature error.  The ratio beta_n with psi_n = beta_n phi_n is estimated by
least squares over traces, with a proportionality residual guard.  The
derivative of the Wronskian at an eigenvalue equals beta_n a_n; a central
finite difference of the Wronskian provides an independent check of the
computed spectrum, normalisation and ratio at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .ivp import BoundaryParams, SolutionTrace, _sweep, build_grid, _sweep_trace
from .potential import PI, Potential

__all__ = [
    "Eigenpair",
    "ConvergenceError",
    "WdotCheck",
    "find_eigenvalues",
    "norming_constants",
    "beta_ratio",
    "wdot_identity_check",
    "wdot_identity_detail",
    "spectrum_table",
]

#: Prüfer brackets are bisected to this width in nu (= lambda for mu > 0).
BRACKET_TOL = 1e-10

_SECANT_MAX_ITER = 40
_BETA_RESIDUAL_TOL = 1e-6


class ConvergenceError(RuntimeError):
    """Root refinement failed; carries the offending eigenvalue indices."""

    def __init__(self, message: str, indices: Sequence[int] = ()):  # pragma: no cover - trivial
        super().__init__(message)
        self.indices = tuple(indices)


@dataclass
class Eigenpair:
    """One spectral record.

    ``lam`` is the principal square root of ``mu`` with the sign of ``mu``
    (negative ground states are reported as sign-flagged sqrt(|mu|)).  The
    norming constants and ratio are filled by :func:`spectrum_table` /
    :func:`norming_constants`; ``wdot_relerr`` by the identity check.
    """

    n: int
    lam: float
    mu: float
    a: float | None = None
    b: float | None = None
    beta_ratio: float | None = None
    wdot_relerr: float | None = None


class WdotCheck(NamedTuple):
    wdot: float          # d/dmu of the Wronskian at mu_n (central difference)
    beta_times_a: float  # beta_n * a_n
    rel_err: float


def _theta(q: Potential, bp: BoundaryParams, nu: np.ndarray) -> np.ndarray:
    mu = nu * np.abs(nu)
    y0, yp0 = bp.left_data
    return _sweep(q, mu, y0, yp0, phase=True)["theta"]


def _char(q: Potential, bp: BoundaryParams, nu: np.ndarray) -> np.ndarray:
    mu = nu * np.abs(nu)
    y0, yp0 = bp.left_data
    res = _sweep(q, mu, y0, yp0)
    return res["y"] * math.cos(bp.beta) + res["yp"] * math.sin(bp.beta)


def find_eigenvalues(q: Potential, bp: BoundaryParams, n_max: int) -> list[Eigenpair]:
    """First ``n_max + 1`` eigenvalues, indices 0..n_max.

    Prüfer bisection in nu (mu = nu |nu|) down to bracket width 1e-10, then a
    secant polish on the characteristic function, clamped to the bracket.  All
    indices are processed as one vector, so the cost is one propagation sweep
    per bisection step regardless of n_max.

    Raises
    ------
    ConvergenceError
        If the initial bracket cannot be established or the secant stage does
        not settle within its iteration cap.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    n = np.arange(n_max + 1)
    targets = (n + 1) * PI - bp.beta

    qmax = float(np.max(q.values)) if q.n_pieces else 0.0
    qabs = q.max_abs()

    # establish a global bracket in nu
    nu_lo = -2.0 - math.sqrt(max(qabs, 1.0))
    while _theta(q, bp, np.array([nu_lo]))[0] >= targets[0]:
        nu_lo *= 2.0
        if nu_lo < -60.0:
            raise ConvergenceError("could not bracket the lowest eigenvalue", (0,))
    nu_hi = n_max + 2.0 + math.sqrt(max(qmax, 0.0))
    while _theta(q, bp, np.array([nu_hi]))[0] <= targets[-1]:
        nu_hi += 0.5 * nu_hi
        if nu_hi > 1e4:
            raise ConvergenceError("could not bracket the highest eigenvalue", (n_max,))

    lo = np.full(n_max + 1, nu_lo)
    hi = np.full(n_max + 1, nu_hi)
    n_iter = int(math.ceil(math.log2((nu_hi - nu_lo) / BRACKET_TOL))) + 1
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        below = _theta(q, bp, mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)

    # secant polish on the characteristic, kept inside the Prüfer bracket
    x0, x1 = lo.copy(), hi.copy()
    f0 = _char(q, bp, x0)
    f1 = _char(q, bp, x1)
    done = np.zeros(n_max + 1, dtype=bool)
    for _ in range(_SECANT_MAX_ITER):
        df = f1 - f0
        safe = np.abs(df) > 0.0
        step = np.where(safe, f1 * (x1 - x0) / np.where(safe, df, 1.0), 0.0)
        x2 = np.clip(x1 - step, lo, hi)
        done |= np.abs(x2 - x1) <= 1e-13 * (1.0 + np.abs(x2))
        x0, f0 = x1, f1
        x1 = np.where(done, x1, x2)
        if np.all(done):
            break
        f1 = _char(q, bp, x1)
    if not np.all(done):
        raise ConvergenceError("secant refinement did not converge",
                               tuple(int(i) for i in np.nonzero(~done)[0]))

    mu = x1 * np.abs(x1)
    if np.any(np.diff(mu) <= 0):
        raise ConvergenceError("eigenvalues not strictly increasing",
                               tuple(int(i) for i in np.nonzero(np.diff(mu) <= 0)[0]))
    return [Eigenpair(n=int(i), lam=float(x1[i]), mu=float(mu[i])) for i in n]


def _norming_batch(q: Potential, bp: BoundaryParams, mus: np.ndarray):
    y0, yp0 = bp.left_data
    a = _sweep(q, mus, y0, yp0, iy2=True)["iy2"]
    u0, up0 = bp.right_data
    b = _sweep(q.reversed(), mus, u0, up0, iy2=True)["iy2"]
    return a, b


def norming_constants(q: Potential, bp: BoundaryParams, eig: Eigenpair) -> tuple[float, float]:
    """(a_n, b_n) = (int_0^pi phi_n^2, int_0^pi psi_n^2), piecewise exact."""
    a, b = _norming_batch(q, bp, np.array([eig.mu]))
    return float(a[0]), float(b[0])


def beta_ratio(phi: SolutionTrace, psi: SolutionTrace) -> float:
    """Least-squares ratio beta with psi ~= beta phi over the shared trace grid.

    Raises :class:`ConvergenceError` if the traces are not proportional to
    within 1e-6 of max|psi| -- the usual cause is mu off an eigenvalue.
    """
    if not np.array_equal(phi.grid, psi.grid):
        raise ValueError("traces must share a grid")
    den = float(np.dot(phi.y, phi.y))
    if den == 0.0:
        raise ValueError("left trace vanishes identically")
    ratio = float(np.dot(psi.y, phi.y)) / den
    scale = float(np.max(np.abs(psi.y)))
    resid = float(np.max(np.abs(psi.y - ratio * phi.y)))
    if resid > _BETA_RESIDUAL_TOL * max(scale, 1e-300):
        raise ConvergenceError(
            f"traces not proportional (residual {resid:.3e} vs scale {scale:.3e}); "
            "mu is probably not a converged eigenvalue")
    return ratio


def wdot_identity_detail(q: Potential, bp: BoundaryParams, eig: Eigenpair) -> WdotCheck:
    """Both sides of d/dmu W(mu_n) = beta_n a_n, plus their relative gap.

    W = -characteristic is differenced centrally with h = 1e-5 * max(1, |mu_n|).
    ``eig.a`` and ``eig.beta_ratio`` are used when filled, computed otherwise.
    """
    mu = eig.mu
    a_n = eig.a
    if a_n is None:
        a_n, _ = norming_constants(q, bp, eig)
    beta_n = eig.beta_ratio
    if beta_n is None:
        grid = build_grid(q)
        from .ivp import solve_phi, solve_psi  # local import avoids cycle at module load
        beta_n = beta_ratio(solve_phi(q, mu, bp, grid), solve_psi(q, mu, bp, grid))
    h = 1e-5 * max(1.0, abs(mu))
    y0, yp0 = bp.left_data
    res = _sweep(q, np.array([mu + h, mu - h]), y0, yp0)
    char = res["y"] * math.cos(bp.beta) + res["yp"] * math.sin(bp.beta)
    wdot = -(char[0] - char[1]) / (2.0 * h)
    ba = beta_n * a_n
    rel = abs(wdot - ba) / max(abs(ba), 1e-300)
    return WdotCheck(wdot=float(wdot), beta_times_a=float(ba), rel_err=float(rel))


def wdot_identity_check(q: Potential, bp: BoundaryParams, eig: Eigenpair) -> float:
    """Relative discrepancy between d/dmu W(mu_n) and beta_n a_n."""
    return wdot_identity_detail(q, bp, eig).rel_err


def spectrum_table(q: Potential, bp: BoundaryParams, n_max: int) -> list[Eigenpair]:
    """Full spectral table for n = 0..n_max.

    Populates lam, mu, a, b, beta_ratio and wdot_relerr on every record.  All
    stages run batched over the index vector (one propagation sweep each), so
    the table costs little more than :func:`find_eigenvalues` alone.
    """
    pairs = find_eigenvalues(q, bp, n_max)
    mus = np.array([p.mu for p in pairs])

    a, b = _norming_batch(q, bp, mus)

    lam_max = math.sqrt(max(abs(mus[-1]), 1.0))
    grid = build_grid(q, lam_max=lam_max)
    y0, yp0 = bp.left_data
    PHI, _ = _sweep_trace(q, mus, y0, yp0, grid)
    u0, up0 = bp.right_data
    grid_rev = np.ascontiguousarray(PI - grid[::-1])
    grid_rev[0], grid_rev[-1] = 0.0, PI
    PSI_rev, _ = _sweep_trace(q.reversed(), mus, u0, up0, grid_rev)
    PSI = PSI_rev[:, ::-1]

    den = np.einsum("ij,ij->i", PHI, PHI)
    num = np.einsum("ij,ij->i", PSI, PHI)
    ratios = num / den
    resid = np.max(np.abs(PSI - ratios[:, None] * PHI), axis=1)
    scale = np.maximum(np.max(np.abs(PSI), axis=1), 1e-300)
    bad = resid > _BETA_RESIDUAL_TOL * scale
    if np.any(bad):
        raise ConvergenceError("trace proportionality residual too large",
                               tuple(int(i) for i in np.nonzero(bad)[0]))

    h = 1e-5 * np.maximum(1.0, np.abs(mus))
    res = _sweep(q, np.concatenate([mus + h, mus - h]), y0, yp0)
    char = res["y"] * math.cos(bp.beta) + res["yp"] * math.sin(bp.beta)
    m = len(mus)
    wdot = -(char[:m] - char[m:]) / (2.0 * h)
    ba = ratios * a
    rel = np.abs(wdot - ba) / np.maximum(np.abs(ba), 1e-300)

    for i, p in enumerate(pairs):
        p.a = float(a[i])
        p.b = float(b[i])
        p.beta_ratio = float(ratios[i])
        p.wdot_relerr = float(rel[i])
    return pairs
