"""High-index asymptotics of eigenvalues and norming constants.

With m = n + delta_n(alpha, beta) the eigenvalue square roots satisfy

    lambda_n = m + [q]/(2m) + l_n + O(1/n^2),      [q] = mean of q,

where l_n is an oscillatory moment of q at frequency 2m whose sign depends on
the left endpoint: +(1/(2 pi m)) int q cos(2mt) dt for alpha in (0, pi) and
the opposite sign for the Dirichlet case alpha = pi.  The norming constants
obey

    a_n = (pi/2) F_n sin^2(alpha) + (pi/(2 m^2)) F_n cos^2(alpha) + remainder,
    b_n = same with beta,        F_n = 1 + 2 s_n/(pi m),
    s_n = -(1/2) int_0^pi (pi - t) q(t) sin(2mt) dt,

with remainders O(1/n^2) relative to the leading weight.  All moments here
are evaluated in closed form (piecewise-constant q, piecewise-linear
weights), so the residuals reported against computed spectra measure the
genuine remainder terms; their decay exponents are estimated by log-log
least squares over an index window.

For alpha = pi the series l(x) = sum l_n sin(m x) splits into three parts
driven by the cumulative integral sigma(x) = int_0^x q and the trig
residuals (d_n, e_n, g_n) of the shifts:

    l_n = sigma(pi) (1 - d_n)/(2 pi m) - f_n/(2 pi),
    f_n = int_0^pi (sigma(t/2) + sigma(pi - t/2)) sin(mt) dt
          - d_n int_0^pi sigma(pi - t/2) sin(mt) dt
          + e_n int_0^pi sigma(pi - t/2) cos(mt) dt,

an exact identity at every index.  The slowly decaying part of l_3 has the
closed form (1/4)(sigma2(x) - sigma(x/2) - sigma(pi - x/2)) plus three
absolutely convergent correction series, where sigma2 collects the two
low-index modes of the zero-potential problem that the shift sequence does
not cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .delta import solve_delta_many, trig_residuals_from_delta
from .ivp import BoundaryParams, _c_sn, _int_sn_sq
from .potential import (PI, PiecewiseLinear, Potential, linear_trig_moment,
                        mean, oscillatory_moment, sigma, zero_potential)

__all__ = [
    "AsymptoticRow",
    "AsymptoticReport",
    "l_term",
    "l_term_many",
    "s_term",
    "s_term_many",
    "predict_lambda",
    "predict_norming",
    "norming_scales",
    "series_eval",
    "SeriesDiagnosticsRow",
    "series_diagnostics",
    "fit_decay",
    "asymptotic_report",
    "decomposition_terms",
    "decompose_l",
    "sigma2",
    "l3_closed_form",
    "l3_mirror_gap",
]


# -- per-index terms ----------------------------------------------------------


def _shifts(bp: BoundaryParams, ns: np.ndarray) -> np.ndarray:
    return solve_delta_many(ns, bp.alpha, bp.beta)


def l_term_many(q: Potential, bp: BoundaryParams, ns) -> np.ndarray:
    """l_n for an array of indices n >= 2 (closed-form moments)."""
    ns = np.asarray(ns, dtype=float)
    m = ns + _shifts(bp, ns)
    mom = oscillatory_moment(q, m, "cos")
    sign = -1.0 if bp.dirichlet_left else 1.0
    return sign * mom / (2.0 * PI * m)


def l_term(q: Potential, bp: BoundaryParams, n: int) -> float:
    """Oscillatory eigenvalue correction l_n (sign set by the left endpoint)."""
    return float(l_term_many(q, bp, np.array([n]))[0])


def s_term_many(q: Potential, bp: BoundaryParams, ns) -> np.ndarray:
    """s_n = -(1/2) int (pi - t) q(t) sin(2 m t) dt for an index array."""
    ns = np.asarray(ns, dtype=float)
    m = ns + _shifts(bp, ns)
    freq = 2.0 * m
    total = np.zeros_like(m)
    for a, b, v in zip(q.breakpoints[:-1], q.breakpoints[1:], q.values):
        total += linear_trig_moment(v * (PI - a), -v, a, b, freq, "sin")
    return -0.5 * total


def s_term(q: Potential, bp: BoundaryParams, n: int) -> float:
    return float(s_term_many(q, bp, np.array([n]))[0])


def predict_lambda(q: Potential, bp: BoundaryParams, n) -> np.ndarray | float:
    """Three-term prediction m + [q]/(2m) + l_n for n >= 2 (scalar or array)."""
    ns = np.asarray(n, dtype=float)
    m = ns + _shifts(bp, np.atleast_1d(ns))
    out = m + mean(q) / (2.0 * m) + l_term_many(q, bp, np.atleast_1d(ns))
    return float(out[0]) if np.ndim(n) == 0 else out


def _angle_weights(angle: float) -> tuple[float, float]:
    if angle == PI:
        return 0.0, 1.0  # sin^2, cos^2 with exact Dirichlet semantics
    s, c = math.sin(angle), math.cos(angle)
    return s * s, c * c


def predict_norming(q: Potential, bp: BoundaryParams, ns) -> tuple[np.ndarray, np.ndarray]:
    """Leading-plus-oscillatory predictions (a_n, b_n); vectorised over n >= 2."""
    ns = np.asarray(ns, dtype=float)
    m = ns + _shifts(bp, ns)
    factor = 1.0 + 2.0 * s_term_many(q, bp, ns) / (PI * m)
    sa2, ca2 = _angle_weights(bp.alpha)
    sb2, cb2 = _angle_weights(bp.beta)
    a_pred = 0.5 * PI * factor * sa2 + 0.5 * PI / (m * m) * factor * ca2
    b_pred = 0.5 * PI * factor * sb2 + 0.5 * PI / (m * m) * factor * cb2
    return a_pred, b_pred


def norming_scales(bp: BoundaryParams, ns) -> tuple[np.ndarray, np.ndarray]:
    """Leading weights used to normalise norming-constant residuals.

    (pi/2) sin^2 of the angle when that does not vanish, else the
    pi/(2 m^2) Dirichlet weight.
    """
    ns = np.asarray(ns, dtype=float)
    m = ns + _shifts(bp, ns)
    sa2, _ = _angle_weights(bp.alpha)
    sb2, _ = _angle_weights(bp.beta)
    scale_a = np.where(sa2 > 1e-24, 0.5 * PI * sa2, 0.5 * PI / (m * m))
    scale_b = np.where(sb2 > 1e-24, 0.5 * PI * sb2, 0.5 * PI / (m * m))
    return scale_a, scale_b


# -- series -------------------------------------------------------------------


def series_eval(kind: str, q: Potential, bp: BoundaryParams, x,
                n_terms: int) -> np.ndarray | float:
    """Partial sum of the l or s series at x (scalar or array), terms 2..n_terms.

    kind "l": l(x) = sum l_n sin(m x);  kind "s": s(x) = sum (s_n / m) cos(m x).
    Both live naturally on [0, 2 pi].
    """
    if n_terms < 2:
        raise ValueError("need n_terms >= 2")
    ns = np.arange(2, n_terms + 1, dtype=float)
    m = ns + _shifts(bp, ns)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if kind == "l":
        coef = l_term_many(q, bp, ns)
        out = np.sin(np.outer(xs, m)) @ coef
    elif kind == "s":
        coef = s_term_many(q, bp, ns) / m
        out = np.cos(np.outer(xs, m)) @ coef
    else:
        raise ValueError("kind must be 'l' or 's'")
    return float(out[0]) if np.ndim(x) == 0 else out


@dataclass
class SeriesDiagnosticsRow:
    """Uniform-convergence probes for one truncation level N."""

    N: int
    cauchy_sup: float        # sup over the window of |S_{2N} - S_N|
    total_variation: float   # discrete TV of S_N over the window


def series_diagnostics(kind: str, q: Potential, bp: BoundaryParams, n_list,
                       window: tuple[float, float] = (0.5, 2.0 * PI - 0.5),
                       samples: int = 1024) -> list[SeriesDiagnosticsRow]:
    """Cauchy sup-differences and total variation of partial sums on a window.

    The window must sit strictly inside (0, 2 pi), away from the endpoints
    where the l series may lose uniformity.  Shrinking Cauchy gaps together
    with stable total variation are the observable counterparts of uniform
    convergence to a function of bounded variation.
    """
    if not (0.0 < window[0] < window[1] < 2.0 * PI):
        raise ValueError("window must satisfy 0 < a < b < 2 pi")
    n_list = sorted(int(N) for N in n_list)
    if n_list[0] < 2:
        raise ValueError("need truncation levels N >= 2")
    ns = np.arange(2, 2 * n_list[-1] + 1, dtype=float)
    m = ns + _shifts(bp, ns)
    xs = np.linspace(window[0], window[1], samples)
    if kind == "l":
        terms = l_term_many(q, bp, ns)[:, None] * np.sin(np.outer(m, xs))
    elif kind == "s":
        terms = (s_term_many(q, bp, ns) / m)[:, None] * np.cos(np.outer(m, xs))
    else:
        raise ValueError("kind must be 'l' or 's'")
    sums = np.cumsum(terms, axis=0)  # row k holds S_{k+2}
    rows = []
    for N in n_list:
        s_n, s_2n = sums[N - 2], sums[2 * N - 2]
        rows.append(SeriesDiagnosticsRow(
            N=N,
            cauchy_sup=float(np.max(np.abs(s_2n - s_n))),
            total_variation=float(np.sum(np.abs(np.diff(s_n))))))
    return rows


def fit_decay(ns, residuals, window: tuple[float, float] = (10, 100)) -> tuple[float, float]:
    """Least-squares slope/intercept of log|residual| against log n.

    Points outside ``window`` or with |residual| < 1e-14 (pure rounding) are
    dropped; at least five points must remain.
    """
    ns = np.asarray(ns, dtype=float)
    r = np.abs(np.asarray(residuals, dtype=float))
    keep = (ns >= window[0]) & (ns <= window[1]) & (r > 1e-14)
    if int(keep.sum()) < 5:
        raise ValueError("too few usable points in the fit window")
    slope, intercept = np.polyfit(np.log(ns[keep]), np.log(r[keep]), 1)
    return float(slope), float(intercept)


# -- report -------------------------------------------------------------------


@dataclass
class AsymptoticRow:
    n: int
    lambda_computed: float
    lambda_predicted: float
    residual: float          # raw lambda difference
    a_computed: float
    a_predicted: float
    a_residual: float        # relative to the leading weight
    b_computed: float
    b_predicted: float
    b_residual: float


@dataclass
class AsymptoticReport:
    alpha: float
    beta: float
    q_mean: float
    fit_window: tuple[float, float]
    slope_lambda: float
    slope_a: float
    slope_b: float
    dirichlet_dirichlet_sign_convention: bool
    rows: list[AsymptoticRow] = field(default_factory=list)


def asymptotic_report(q: Potential, bp: BoundaryParams, n_max: int = 100,
                      fit_window: tuple[float, float] = (10, 100),
                      pairs=None) -> AsymptoticReport:
    """Computed-versus-predicted table for n = 2..n_max with decay-fit slopes.

    Norming residuals are reported relative to their leading weight (see
    :func:`norming_scales`); eigenvalue residuals are raw differences.  A
    pre-computed spectrum table may be passed to avoid re-solving.

    The alpha = pi, beta = 0 corner uses the Dirichlet-left sign for l_n and
    is flagged in the report.
    """
    if n_max < max(2, math.ceil(fit_window[0])):
        raise ValueError("n_max too small for the requested fit window")
    from .spectrum import spectrum_table
    if pairs is None:
        pairs = spectrum_table(q, bp, n_max)
    ns = np.arange(2, n_max + 1)
    lam = np.array([pairs[n].lam for n in ns])
    a = np.array([pairs[n].a for n in ns])
    b = np.array([pairs[n].b for n in ns])

    lam_pred = predict_lambda(q, bp, ns)
    a_pred, b_pred = predict_norming(q, bp, ns)
    scale_a, scale_b = norming_scales(bp, ns)
    lam_resid = lam - lam_pred
    a_resid = (a - a_pred) / scale_a
    b_resid = (b - b_pred) / scale_b

    rows = [AsymptoticRow(n=int(n), lambda_computed=float(lam[i]),
                          lambda_predicted=float(lam_pred[i]),
                          residual=float(lam_resid[i]), a_computed=float(a[i]),
                          a_predicted=float(a_pred[i]), a_residual=float(a_resid[i]),
                          b_computed=float(b[i]), b_predicted=float(b_pred[i]),
                          b_residual=float(b_resid[i]))
            for i, n in enumerate(ns)]
    return AsymptoticReport(
        alpha=bp.alpha, beta=bp.beta, q_mean=mean(q), fit_window=fit_window,
        slope_lambda=fit_decay(ns, lam_resid, fit_window)[0],
        slope_a=fit_decay(ns, a_resid, fit_window)[0],
        slope_b=fit_decay(ns, b_resid, fit_window)[0],
        dirichlet_dirichlet_sign_convention=(bp.dirichlet_left and bp.beta == 0.0),
        rows=rows,
    )


# -- Dirichlet-left decomposition ---------------------------------------------


def _sigma_half(q: Potential) -> PiecewiseLinear:
    """sigma(t/2) on [0, pi] as a piecewise-linear function of t."""
    bps = q.breakpoints
    ts = np.unique(np.concatenate(([0.0, PI], 2.0 * bps[(bps > 0) & (2.0 * bps < PI)])))
    return PiecewiseLinear(ts, np.asarray(sigma(q, ts / 2.0)))


def _sigma_half_mirror(q: Potential) -> PiecewiseLinear:
    """sigma(pi - t/2) on [0, pi] as a piecewise-linear function of t."""
    bps = q.breakpoints
    cand = 2.0 * (PI - bps)
    ts = np.unique(np.concatenate(([0.0, PI], cand[(cand > 0) & (cand < PI)])))
    return PiecewiseLinear(ts, np.asarray(sigma(q, PI - ts / 2.0)))


def _sigma_doubled(q: Potential) -> PiecewiseLinear:
    """sigma(x/2) on [0, 2 pi] (the direct route to the f_n moments)."""
    return PiecewiseLinear(2.0 * q.breakpoints, np.asarray(sigma(q, q.breakpoints)))


@dataclass
class DecompositionTerms:
    """Per-index pieces of l_n = l1_n + l2_n + l3_n for a Dirichlet left end."""

    ns: np.ndarray
    m: np.ndarray
    d: np.ndarray
    e: np.ndarray
    g: np.ndarray
    f: np.ndarray          # f_n via the reflected-moment identity
    f_direct: np.ndarray   # f_n via the [0, 2 pi] definition (cross-check)
    l_direct: np.ndarray   # l_n from the oscillatory moment
    l1: np.ndarray         # sigma(pi) sin-series coefficient / m
    l2: np.ndarray
    l3: np.ndarray

    @property
    def l_decomposed(self) -> np.ndarray:
        return self.l1 + self.l2 + self.l3


def decomposition_terms(q: Potential, beta: float, ns) -> DecompositionTerms:
    """Exact coefficient-level decomposition for alpha = pi, indices n >= 2."""
    bp = BoundaryParams(PI, beta)
    ns = np.asarray(ns, dtype=float)
    delta = solve_delta_many(ns, PI, beta)
    m = ns + delta
    d, e, g = trig_residuals_from_delta(ns, delta)

    gs = _sigma_half(q) + _sigma_half_mirror(q)
    g2 = _sigma_half_mirror(q)
    f = gs.trig_moment(m, "sin") - d * g2.trig_moment(m, "sin") \
        + e * g2.trig_moment(m, "cos")
    f_direct = _sigma_doubled(q).trig_moment(m, "sin")

    sig_pi = float(sigma(q, PI))
    l1 = sig_pi / (2.0 * PI * m)
    l2 = -sig_pi * d / (2.0 * PI * m)
    l3 = -f / (2.0 * PI)
    l_direct = l_term_many(q, bp, ns)
    return DecompositionTerms(ns=ns.astype(int), m=m, d=d, e=e, g=g, f=f,
                              f_direct=f_direct, l_direct=l_direct,
                              l1=l1, l2=l2, l3=l3)


def decompose_l(q: Potential, beta: float, x, n_terms: int):
    """Partial sums (l1, l2, l3) at x (scalar or array), terms 2..n_terms."""
    ns = np.arange(2, n_terms + 1)
    t = decomposition_terms(q, beta, ns)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    S = np.sin(np.outer(xs, t.m))
    out = (S @ t.l1, S @ t.l2, S @ t.l3)
    if np.ndim(x) == 0:
        return float(out[0][0]), float(out[1][0]), float(out[2][0])
    return out


def _low_mode(mu: float, t: np.ndarray) -> np.ndarray:
    """Normalised-slope eigenfunction sn(mu, t) of the zero potential."""
    _, sn = _c_sn(np.full_like(t, mu), t)
    return sn


def sigma2(q: Potential, beta: float, x, grid_points: int = 4097):
    """The two low-index modes of sigma(x/2) + sigma(pi - x/2).

    Projects the (piecewise-linear) weight onto the n = 0, 1 eigenfunctions of
    the zero-potential problem with a Dirichlet left end and angle beta on the
    right, which exist below the shift-indexed part of the spectrum.  Works
    for negative low eigenvalues too (the mode is then a scaled sinh).
    """
    from .spectrum import find_eigenvalues
    eig = find_eigenvalues(zero_potential(), BoundaryParams(PI, beta), 1)
    gs = _sigma_half(q) + _sigma_half_mirror(q)
    tgrid = np.linspace(0.0, PI, grid_points)
    w = np.asarray(gs(tgrid))
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    from scipy.integrate import simpson
    for p in eig:
        u = _low_mode(p.mu, tgrid)
        num = simpson(w * u, x=tgrid)
        den = float(_int_sn_sq(np.array([p.mu]), PI, *_c_sn(np.array([p.mu]), PI))[0])
        out = out + (num / den) * _low_mode(p.mu, xs)
    return float(out[0]) if np.ndim(x) == 0 else out


def l3_closed_form(q: Potential, beta: float, x, n_terms: int = 400):
    """Limit form of l3: quarter-weight sigma terms plus three residual series.

    The series carry g_n, d_n and e_n weights and converge absolutely; the
    truncation at ``n_terms`` matters only through their O(1/n) tails.
    """
    ns = np.arange(2, n_terms + 1)
    t = decomposition_terms(q, beta, ns)
    gs = _sigma_half(q) + _sigma_half_mirror(q)
    g2 = _sigma_half_mirror(q)
    F = gs.trig_moment(t.m, "sin")
    A = g2.trig_moment(t.m, "sin")
    B = g2.trig_moment(t.m, "cos")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    S = np.sin(np.outer(xs, t.m))
    base = 0.25 * (sigma2(q, beta, xs) - gs(xs))
    out = base + S @ (0.25 * t.g * F) + S @ (t.d * A / (2.0 * PI)) \
        - S @ (t.e * B / (2.0 * PI))
    return float(out[0]) if np.ndim(x) == 0 else out


def l3_mirror_gap(q: Potential, beta: float, x, n_terms: int):
    """Difference l3(2 pi - x) - l3(x) predicted by the reflection identity.

    Returns (gap_from_sums, gap_from_identity); the two agree exactly at any
    truncation because sin(m (2 pi - x)) = e cos(mx) + (1 - d) sin(mx).
    """
    ns = np.arange(2, n_terms + 1)
    t = decomposition_terms(q, beta, ns)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    S = np.sin(np.outer(xs, t.m))
    C = np.cos(np.outer(xs, t.m))
    Sm = np.sin(np.outer(2.0 * PI - xs, t.m))
    coef = -t.f / (2.0 * PI)
    gap_sums = Sm @ coef - S @ coef
    gap_ident = S @ (t.d * t.f / (2.0 * PI)) - C @ (t.e * t.f / (2.0 * PI))
    if np.ndim(x) == 0:
        return float(gap_sums[0]), float(gap_ident[0])
    return gap_sums, gap_ident
