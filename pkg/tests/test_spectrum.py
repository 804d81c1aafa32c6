"""Eigenvalues against bracketed roots of closed-form characteristics."""

import math

import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.optimize import brentq

from slspec import (
    PI,
    BoundaryParams,
    build_grid,
    constant_potential,
    find_eigenvalues,
    norming_constants,
    solve_phi,
    solve_psi,
    spectrum_table,
    wdot_identity_check,
    wdot_identity_detail,
    zero_potential,
)


def _free_characteristic(mu, alpha, beta):
    """phi(pi) cos(beta) + phi'(pi) sin(beta) for q = 0, any real mu."""
    if alpha == PI:
        y0, yp0 = 0.0, 1.0
    else:
        y0, yp0 = math.sin(alpha), -math.cos(alpha)
    if mu > 0:
        lam = math.sqrt(mu)
        c, s = math.cos(lam * PI), math.sin(lam * PI) / lam
        cp, sp = -lam * math.sin(lam * PI), math.cos(lam * PI)
    elif mu < 0:
        t = math.sqrt(-mu)
        c, s = math.cosh(t * PI), math.sinh(t * PI) / t
        cp, sp = t * math.sinh(t * PI), math.cosh(t * PI)
    else:
        c, s, cp, sp = 1.0, PI, 0.0, 1.0
    return (y0 * c + yp0 * s) * math.cos(beta) + (y0 * cp + yp0 * sp) * math.sin(beta)


def _free_roots(alpha, beta, n_max):
    """Bracket roots of the free characteristic by a dense scan in nu."""
    nus = np.linspace(-6.0, n_max + 3.0, 40 * (n_max + 10))
    vals = np.array([_free_characteristic(v * abs(v), alpha, beta) for v in nus])
    roots = []
    for a, b, fa, fb in zip(nus[:-1], nus[1:], vals[:-1], vals[1:]):
        if fa * fb < 0:
            nu = brentq(
                lambda t: _free_characteristic(t * abs(t), alpha, beta),
                a,
                b,
                xtol=1e-13,
            )
            roots.append(nu * abs(nu))
        elif fa == 0.0 and (not roots or abs(roots[-1] - a * abs(a)) > 1e-9):
            roots.append(a * abs(a))
    return roots[: n_max + 1]


@pytest.mark.parametrize(
    "alpha,beta",
    [
        (PI, PI / 2),
        (PI / 4, 3 * PI / 4),
        (3 * PI / 4, PI / 4),
        (PI / 2, 0.0),
    ],
)
def test_free_spectrum_matches_bracketed_roots(alpha, beta):
    pairs = find_eigenvalues(zero_potential(), BoundaryParams(alpha, beta), 8)
    ref = _free_roots(alpha, beta, 8)
    assert len(pairs) == 9
    assert [p.n for p in pairs] == list(range(9))
    for p, r in zip(pairs, ref):
        assert p.mu == pytest.approx(r, abs=1e-9)
    assert np.all(np.diff([p.mu for p in pairs]) > 0)


def test_ground_states_below_zero_are_found():
    # frozen from the hyperbolic closed form bracketed with brentq
    pairs = find_eigenvalues(zero_potential(), BoundaryParams(PI / 4, 3 * PI / 4), 1)
    assert pairs[0].mu == pytest.approx(-1.1481269644594245, abs=1e-8)
    assert pairs[1].mu == pytest.approx(-0.7783682729850404, abs=1e-8)


def test_constant_shift_with_dirichlet_ends_is_exact():
    pairs = find_eigenvalues(constant_potential(2.0), BoundaryParams(PI, 0.0), 2)
    for p, target in zip(pairs, (3.0, 6.0, 11.0)):
        assert p.mu == pytest.approx(target, abs=1e-9)


def test_free_dirichlet_neumann_table_closed_forms():
    table = spectrum_table(zero_potential(), BoundaryParams(PI, PI / 2), 12)
    for p in table:
        m = p.n + 0.5
        assert p.lam == pytest.approx(m, abs=1e-10)
        assert p.a == pytest.approx(PI / (2 * m * m), rel=1e-9)
        assert p.b == pytest.approx(PI / 2, rel=1e-9)
        assert p.beta_ratio == pytest.approx((-1.0) ** p.n * m, rel=1e-8)
        assert p.wdot_relerr < 1e-6


def test_free_neumann_neumann_table_closed_forms():
    table = spectrum_table(zero_potential(), BoundaryParams(PI / 2, PI / 2), 6)
    assert table[0].mu == pytest.approx(0.0, abs=1e-9)
    assert table[0].beta_ratio == pytest.approx(1.0, rel=1e-8)
    for p in table[1:]:
        assert p.lam == pytest.approx(p.n, abs=1e-10)
        assert p.a == pytest.approx(PI / 2, rel=1e-9)
        assert p.beta_ratio == pytest.approx((-1.0) ** p.n, rel=1e-8)


def test_b_is_beta_ratio_squared_times_a(make_potential):
    q = make_potential()
    table = spectrum_table(q, BoundaryParams(2 * PI / 3, PI / 5), 8)
    for p in table:
        assert p.b == pytest.approx(p.beta_ratio**2 * p.a, rel=1e-7)


def test_eigenfunctions_are_orthogonal(make_potential):
    q = make_potential()
    bp = BoundaryParams(PI, 2 * PI / 5)
    pairs = find_eigenvalues(q, bp, 10)
    grid = build_grid(q, n_min=4096, lam_max=pairs[-1].lam + 1.0)
    traces = np.stack([solve_phi(q, p.mu, bp, grid=grid).y for p in pairs])
    gram = simpson(traces[:, None, :] * traces[None, :, :], x=grid, axis=2)
    norms = np.sqrt(np.diag(gram))
    off = np.abs(gram / np.outer(norms, norms) - np.eye(len(pairs)))
    assert np.max(off) < 1e-7


def test_norming_constants_match_direct_quadrature(make_potential):
    q = make_potential()
    bp = BoundaryParams(PI / 3, PI / 4)
    pairs = find_eigenvalues(q, bp, 4)
    grid = build_grid(q, n_min=8192, lam_max=pairs[-1].lam + 1.0)
    for p in pairs:
        a, b = norming_constants(q, bp, p)
        phi = solve_phi(q, p.mu, bp, grid=grid)
        psi = solve_psi(q, p.mu, bp, grid=grid)
        assert a == pytest.approx(simpson(phi.y**2, x=grid), rel=1e-8)
        assert b == pytest.approx(simpson(psi.y**2, x=grid), rel=1e-8)


def test_wdot_identity_free_case_has_closed_form():
    q = zero_potential()
    bp = BoundaryParams(PI, PI / 2)
    for p in spectrum_table(q, bp, 6):
        detail = wdot_identity_detail(q, bp, p)
        target = PI * (-1.0) ** p.n / (2.0 * (p.n + 0.5))
        assert detail.beta_times_a == pytest.approx(target, rel=1e-9)
        assert detail.wdot == pytest.approx(target, rel=1e-6)
        assert wdot_identity_check(q, bp, p) < 1e-6


def test_wdot_identity_random_problem(make_potential):
    q = make_potential()
    bp = BoundaryParams(3 * PI / 5, PI / 6)
    for p in spectrum_table(q, bp, 6):
        assert p.wdot_relerr < 1e-4
        assert wdot_identity_check(q, bp, p) < 1e-4


def test_high_index_eigenvalues_track_the_index(make_potential):
    q = make_potential()
    pairs = find_eigenvalues(q, BoundaryParams(PI, PI / 4), 40)
    lams = np.array([p.lam for p in pairs])
    assert np.all(np.diff(lams) > 0)
    assert abs(lams[-1] - 40.0) < 1.5
