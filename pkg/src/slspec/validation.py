"""Self-contained validation suite: twelve numbered criteria, one line each.

Each criterion pins a quantitative claim about the solver to an explicit
tolerance: exactly solvable spectra, shift covariance, the decay order of the
large-n corrections for eigenvalues and norming constants, expansion
convergence with Dirichlet endpoint obstruction, resolvent residues and decay,
the half-integer-avoiding zone bounds, the exact decomposition of the
correction series, orthogonality, and an overall runtime budget.

``run_all`` executes the requested criteria, prints a PASS/FAIL line per
criterion, and returns the structured results.  Heavy spectra are computed
once and shared between criteria through a small cache.  Set SLSPEC_THREADS
to run independent criteria concurrently.
"""

from __future__ import annotations

import math
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .asymptotics import asymptotic_report, decomposition_terms, decompose_l, series_eval
from .delta import solve_delta_many
from .expansion import TargetFunction, convergence_report, partial_sum
from .greens import residue_check, residue_detail, zone_bound_detail
from .ivp import (BoundaryParams, build_grid, wronskian, solve_phi, solve_psi,
                  _sweep_trace)
from .potential import (PI, Potential, build_potential, sample_potential,
                        step_potential, zero_potential, constant_potential)
from .spectrum import find_eigenvalues, spectrum_table, wdot_identity_detail, _norming_batch

__all__ = ["CriterionResult", "run_all", "CRITERIA"]

TOTAL_BUDGET_SECONDS = 300.0
_ANGLE_GRID_LEFT = (PI, 3 * PI / 4, PI / 2, PI / 4)
_ANGLE_GRID_RIGHT = (0.0, PI / 4, PI / 2, 3 * PI / 4)
_DECAY_PAIRS = ((PI, PI / 4), (PI, PI / 2), (PI / 2, PI / 4))


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} criterion {self.index:2d} [{self.elapsed:6.2f}s] {self.name}: {self.detail}"


def _smooth_profile(x):
    return np.sin(3.0 * x) + 0.3 * np.cos(7.0 * x) + 1.0


class Corpus:
    """Named test potentials plus a lock-guarded cache of spectrum tables."""

    def __init__(self):
        self.potentials = {
            "zero": zero_potential(),
            "one": constant_potential(1.0),
            "step": step_potential(1.0, 0.0),
            "two-step": build_potential([(0.0, PI / 3, 2.0),
                                         (PI / 3, 2 * PI / 3, -1.0),
                                         (2 * PI / 3, PI, 0.5)]),
            "smooth": sample_potential(_smooth_profile, 2048),
        }
        self._tables: dict = {}
        self._lock = threading.Lock()

    def table(self, q_name: str, alpha: float, beta: float, n_max: int):
        key = (q_name, round(alpha, 12), round(beta, 12))
        with self._lock:
            hit = self._tables.get(key)
            if hit is not None and hit[0] >= n_max:
                return hit[1][: n_max + 1]
            busy = self._tables.setdefault(("busy", key), threading.Lock())
        with busy:
            with self._lock:
                hit = self._tables.get(key)
                if hit is not None and hit[0] >= n_max:
                    return hit[1][: n_max + 1]
            rows = spectrum_table(self.potentials[q_name],
                                  BoundaryParams(alpha, beta), n_max)
            with self._lock:
                self._tables[key] = (n_max, rows)
            return rows


def _criterion_1(corpus: Corpus) -> tuple[bool, str]:
    """Free spectrum equals the index shifts on a 16-point boundary grid."""
    q = corpus.potentials["zero"]
    ns = np.arange(2, 51)
    worst = 0.0
    t0 = time.perf_counter()
    for alpha in _ANGLE_GRID_LEFT:
        for beta in _ANGLE_GRID_RIGHT:
            pairs = find_eigenvalues(q, BoundaryParams(alpha, beta), 50)
            lams = np.array([p.lam for p in pairs[2:]])
            deltas = solve_delta_many(ns, alpha, beta)
            worst = max(worst, float(np.max(np.abs(lams - (ns + deltas)))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 30.0
    return ok, (f"max |lambda_n - (n + delta_n)| = {worst:.2e} (tol 1e-08) "
                f"over 16 boundary pairs, n = 2..50, in {elapsed:.2f}s (< 30s)")


def _criterion_2(corpus: Corpus) -> tuple[bool, str]:
    """Adding a constant to q shifts mu and leaves norming constants alone."""
    bp = BoundaryParams(3 * PI / 4, PI / 4)
    worst_mu = worst_a = 0.0
    for q_name in ("zero", "step"):
        q = corpus.potentials[q_name]
        base = find_eigenvalues(q, bp, 50)
        mus0 = np.array([p.mu for p in base])
        a0, _ = _norming_batch(q, bp, mus0)
        for c in (1.0, 2.0, -1.0):
            shifted = find_eigenvalues(q.shifted(c), bp, 50)
            mus1 = np.array([p.mu for p in shifted])
            a1, _ = _norming_batch(q.shifted(c), bp, mus1)
            worst_mu = max(worst_mu, float(np.max(np.abs(mus1 - mus0 - c))))
            worst_a = max(worst_a, float(np.max(np.abs(a1 / a0 - 1.0))))
    ok = worst_mu <= 1e-7 and worst_a <= 1e-7
    return ok, (f"max |mu_n(q+c) - mu_n(q) - c| = {worst_mu:.2e}, "
                f"max |a_n ratio - 1| = {worst_a:.2e} (tol 1e-07), "
                "c in {1, 2, -1}, n <= 50")


def _decay_reports(corpus: Corpus):
    reports = []
    for q_name in ("step", "two-step", "smooth"):
        for alpha, beta in _DECAY_PAIRS:
            rows = corpus.table(q_name, alpha, beta, 100)
            rep = asymptotic_report(corpus.potentials[q_name],
                                    BoundaryParams(alpha, beta),
                                    n_max=100, pairs=rows)
            reports.append((q_name, alpha, beta, rep))
    return reports


def _criterion_3(corpus: Corpus) -> tuple[bool, str]:
    """Eigenvalue residuals decay at second order; constant q matches the
    known next-order coefficient."""
    slopes = [rep.slope_lambda for *_key, rep in _decay_reports(corpus)]
    worst_slope = max(slopes)

    rep1 = asymptotic_report(corpus.potentials["one"],
                             BoundaryParams(PI, PI / 2), n_max=20)
    row10 = next(r for r in rep1.rows if r.n == 10)
    m = 10.5
    ratio = abs(row10.residual) * 8.0 * m ** 3
    ok = worst_slope <= -1.8 and abs(ratio - 1.0) <= 0.2
    return ok, (f"worst lambda-residual slope {worst_slope:.2f} (<= -1.8) over 9 "
                f"potential/boundary combos; constant-q residual x 8m^3 = {ratio:.3f} "
                "(within 20% of 1)")


def _criterion_4(corpus: Corpus) -> tuple[bool, str]:
    """Norming-constant residuals decay at second order; free case is exact."""
    worst_slope = -np.inf
    for *_key, rep in _decay_reports(corpus):
        worst_slope = max(worst_slope, rep.slope_a, rep.slope_b)

    rows = corpus.table("zero", PI, PI / 2, 50)
    ns = np.arange(51)
    m = ns + 0.5
    err_a = float(np.max(np.abs(np.array([r.a for r in rows]) - PI / (2 * m * m))))
    err_b = float(np.max(np.abs(np.array([r.b for r in rows]) - PI / 2)))
    ok = worst_slope <= -1.8 and err_a <= 1e-10 and err_b <= 1e-10
    return ok, (f"worst norming-residual slope {worst_slope:.2f} (<= -1.8); "
                f"free case max |a_n - pi/(2m^2)| = {err_a:.2e}, "
                f"max |b_n - pi/2| = {err_b:.2e} (tol 1e-10)")


def _criterion_5(corpus: Corpus) -> tuple[bool, str]:
    """Dirichlet-left expansion: uniform convergence away from 0, pinned at 0."""
    q = corpus.potentials["zero"]
    bp = BoundaryParams(PI, PI / 2)
    rep = convergence_report(q, bp, TargetFunction.constant(PI / 2),
                             [25, 50, 100, 200], a=0.5)
    mono = all(u > v for u, v in zip(rep.err_restricted, rep.err_restricted[1:]))
    full_dev = max(abs(e - PI / 2) for e in rep.err_full)
    repx = convergence_report(q, bp, TargetFunction.linear(0.0, 1.0), [200], a=0.5)
    ok = (rep.err_restricted[-1] <= 0.05 and mono and full_dev <= 1e-12
          and repx.err_full[0] <= 0.02)
    return ok, (f"const target: sup_[0.5,pi] = {rep.err_restricted[-1]:.3f} at N=200 "
                f"(<= 0.05, monotone {mono}), full sup = pi/2 +- {full_dev:.1e} "
                f"(tol 1e-12); vanishing target: full sup {repx.err_full[0]:.4f} (<= 0.02)")


def _criterion_6(corpus: Corpus) -> tuple[bool, str]:
    """Reflected problem: obstruction moves to x = pi."""
    q = corpus.potentials["zero"]
    bp = BoundaryParams(PI / 2, 0.0)
    f_lin = TargetFunction.linear(PI, -1.0)
    rep = convergence_report(q, bp, f_lin, [200], a=PI - 0.5)
    f_const = TargetFunction.constant(PI / 2)
    rep2 = convergence_report(q, bp, f_const, [200], a=PI - 0.5)
    s_pi = partial_sum(q, bp, f_const, 200, PI)
    ok = (rep.err_full[0] <= 0.02 and rep2.err_restricted[0] <= 0.05
          and abs(s_pi) <= 1e-8)
    return ok, (f"pi - x: full sup {rep.err_full[0]:.4f} (<= 0.02); const: "
                f"sup_[0,pi-0.5] = {rep2.err_restricted[0]:.3f} (<= 0.05) with "
                f"S_200(pi) = {s_pi:.1e} (pinned to 0, tol 1e-08)")


def _criterion_7(corpus: Corpus) -> tuple[bool, str]:
    """Residues of the resolvent at eigenvalues match phi_n <f, phi_n> / a_n."""
    q0 = corpus.potentials["zero"]
    eig0 = find_eigenvalues(q0, BoundaryParams(PI, PI / 2), 0)[0]
    exact_case = residue_detail(q0, PI / 2, eig0,
                                TargetFunction.constant(PI / 2), PI / 2)
    sqrt2_dev = abs(exact_case.estimate - math.sqrt(2.0))
    worst = 0.0
    for q_name, beta in (("zero", PI / 2), ("step", PI / 4)):
        q = corpus.potentials[q_name]
        pairs = find_eigenvalues(q, BoundaryParams(PI, beta), 10)
        for eig in pairs:
            worst = max(worst, residue_check(q, beta, eig,
                                             TargetFunction.constant(1.0), 1.1))
    ok = worst <= 1e-2 and sqrt2_dev <= 1e-6
    return ok, (f"max relative residue error {worst:.2e} (tol 1e-02) for n <= 10 "
                f"on two problems; exact case |estimate - sqrt(2)| = {sqrt2_dev:.2e} "
                "(tol 1e-06)")


def _criterion_8(corpus: Corpus) -> tuple[bool, str]:
    """d/dmu of the Wronskian at mu_n equals beta_n a_n."""
    worst = 0.0
    for q_name in ("step", "two-step", "smooth"):
        for alpha, beta in _DECAY_PAIRS:
            rows = corpus.table(q_name, alpha, beta, 100)
            worst = max(worst, max(r.wdot_relerr for r in rows[: 31]))
    q = corpus.potentials["zero"]
    bp = BoundaryParams(PI, PI / 2)
    eig = find_eigenvalues(q, bp, 10)
    dev = 0.0
    for n in range(11):
        chk = wdot_identity_detail(q, bp, eig[n])
        target = PI * (-1.0) ** n / (2.0 * (n + 0.5))
        dev = max(dev, abs(chk.wdot - target), abs(chk.beta_times_a - target))
    ok = worst <= 1e-3 and dev <= 1e-6
    return ok, (f"max relative deviation {worst:.2e} (tol 1e-03) for n <= 30 over 9 "
                f"combos; free case matches pi(-1)^n/(2m) within {dev:.2e} (tol 1e-06)")


def _criterion_9(corpus: Corpus) -> tuple[bool, str]:
    """Modulus bounds for sin and cos on the half-integer-avoiding zone."""
    t0 = time.perf_counter()
    zc = zone_bound_detail(sample_count=400, box=20.0)
    elapsed = time.perf_counter() - t0
    ok = zc.violations == 0 and elapsed < 5.0
    return ok, (f"{zc.violations} violations over {zc.tested} zone points "
                f"(min ratios sin {zc.min_ratio_sin:.3f}, cos {zc.min_ratio_cos:.3f} "
                f">= 1/7) in {elapsed:.2f}s (< 5s)")


def _criterion_10(corpus: Corpus) -> tuple[bool, str]:
    """Exact three-part split of the eigenvalue correction series."""
    q = corpus.potentials["step"]
    ns = np.arange(2, 201)
    worst_term = 0.0
    for beta in (PI / 4, PI / 2, 3 * PI / 4):
        terms = decomposition_terms(q, beta, ns)
        worst_term = max(worst_term, float(np.max(np.abs(
            terms.l_direct - terms.l_decomposed))))
    xs = np.array([0.5, PI / 2, PI, 2 * PI - 0.5])
    worst_sum = 0.0
    for beta in (PI / 4, PI / 2, 3 * PI / 4):
        direct = series_eval("l", q, BoundaryParams(PI, beta), xs, 200)
        l1, l2, l3 = decompose_l(q, beta, xs, 200)
        worst_sum = max(worst_sum, float(np.max(np.abs(direct - (l1 + l2 + l3)))))
    ok = worst_term <= 1e-10 and worst_sum <= 1e-8
    return ok, (f"max termwise defect {worst_term:.2e} (tol 1e-10) for n <= 200, "
                f"three boundary values; max partial-sum defect {worst_sum:.2e} "
                "(tol 1e-08) at four points")


def _criterion_11(corpus: Corpus) -> tuple[bool, str]:
    """Eigenfunctions are orthogonal; the Wronskian is constant in x."""
    worst_orth = 0.0
    worst_drift = 0.0
    for q_name, alpha, beta in (("step", PI, PI / 4), ("smooth", PI / 2, PI / 4)):
        q = corpus.potentials[q_name]
        bp = BoundaryParams(alpha, beta)
        rows = corpus.table(q_name, alpha, beta, 30)
        mus = np.array([r.mu for r in rows])
        grid = build_grid(q, n_min=4096, lam_max=math.sqrt(abs(mus[-1])) + 1.0)
        y0, yp0 = bp.left_data
        PHI, _ = _sweep_trace(q, mus, y0, yp0, grid)
        G = simpson(PHI[:, None, :] * PHI[None, :, :], x=grid, axis=2)
        a = np.array([r.a for r in rows])
        scale = np.sqrt(np.outer(a, a))
        off = np.abs(G - np.diag(np.diag(G))) / scale
        worst_orth = max(worst_orth, float(np.max(off)))
        # At mu_n the Wronskian is (near) zero by construction, so drift is
        # measured against the size of the products it cancels, not |W|.
        for mu in (mus[0], mus[7], mus[23], mus[23] + 0.37):
            phi = solve_phi(q, mu, bp, grid=grid)
            psi = solve_psi(q, mu, bp, grid=grid)
            w = wronskian(phi, psi)
            scale = float(np.max(np.abs(phi.y * psi.yprime)
                                 + np.abs(phi.yprime * psi.y)))
            worst_drift = max(worst_drift, abs(w.max_drift) / scale)
    ok = worst_orth <= 1e-6 and worst_drift <= 1e-9
    return ok, (f"max |<phi_n, phi_m>| / sqrt(a_n a_m) = {worst_orth:.2e} "
                f"(tol 1e-06) for n != m <= 30; max relative Wronskian drift "
                f"{worst_drift:.2e} (tol 1e-09)")


CRITERIA = {
    1: ("free spectrum matches the index-shift law", _criterion_1),
    2: ("spectral shift covariance", _criterion_2),
    3: ("eigenvalue correction decay", _criterion_3),
    4: ("norming-constant correction decay", _criterion_4),
    5: ("expansion convergence with Dirichlet obstruction", _criterion_5),
    6: ("mirrored expansion convergence", _criterion_6),
    7: ("resolvent residues at eigenvalues", _criterion_7),
    8: ("Wronskian mu-derivative identity", _criterion_8),
    9: ("zone modulus lower bounds", _criterion_9),
    10: ("correction-series decomposition", _criterion_10),
    11: ("orthogonality and Wronskian constancy", _criterion_11),
}


def _run_one(index: int, corpus: Corpus) -> CriterionResult:
    name, fn = CRITERIA[index]
    t0 = time.perf_counter()
    try:
        passed, detail = fn(corpus)
    except Exception as exc:  # a crash is a failure, not an abort
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(index=index, name=name, passed=passed,
                           detail=detail, elapsed=time.perf_counter() - t0)


def run_all(criteria=None, workers: int | None = None, echo=print) -> list[CriterionResult]:
    """Run the numbered criteria (all by default) and print one line each.

    Criterion 12 is the runtime budget: the wall time of everything above
    must stay under five minutes.  It is always evaluated last and cannot be
    requested on its own.
    """
    wanted = sorted(set(criteria) if criteria else set(CRITERIA))
    bad = [i for i in wanted if i not in CRITERIA and i != 12]
    if bad:
        raise ValueError(f"unknown criteria: {bad}; valid indices are 1-12")
    wanted = [i for i in wanted if i != 12]
    if workers is None:
        workers = int(os.environ.get("SLSPEC_THREADS", "1"))
    corpus = Corpus()
    t0 = time.perf_counter()
    if workers > 1 and len(wanted) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _run_one(i, corpus), wanted))
    else:
        results = [_run_one(i, corpus) for i in wanted]
    wall = time.perf_counter() - t0
    results.sort(key=lambda r: r.index)
    for r in results:
        echo(r.line())
    if criteria is None or 12 in set(criteria):
        r12 = CriterionResult(
            index=12, name="total runtime budget", passed=wall < TOTAL_BUDGET_SECONDS,
            detail=f"criteria 1-11 took {wall:.1f}s (< {TOTAL_BUDGET_SECONDS:.0f}s)",
            elapsed=wall)
        results.append(r12)
        echo(r12.line())
    return results
