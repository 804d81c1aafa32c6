"""Shooting solutions checked against an adaptive integrator and closed forms."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from slspec import (
    PI,
    BoundaryParams,
    WronskianValue,
    build_grid,
    characteristic,
    constant_potential,
    pruefer_angle,
    solve_phi,
    solve_psi,
    step_potential,
    wronskian,
    zero_potential,
)
from slspec.ivp import _c_sn


def _march(q, mu, y0, yp0):
    """Chain DOP853 across the pieces; the ODE is smooth on each piece."""
    state = np.array([y0, yp0], dtype=float)
    for lo, hi, v in zip(q.breakpoints[:-1], q.breakpoints[1:], q.values):
        sol = solve_ivp(
            lambda t, s, v=v: [s[1], (v - mu) * s[0]],
            (lo, hi),
            state,
            method="DOP853",
            rtol=1e-12,
            atol=1e-13,
        )
        state = sol.y[:, -1]
    return state


@pytest.mark.parametrize("mu", [17.3, 2.7, -1.5])
def test_phi_endpoint_matches_adaptive_integrator(make_potential, mu):
    q = make_potential()
    alpha = 3 * PI / 4
    phi = solve_phi(q, mu, alpha)
    ref = _march(q, mu, math.sin(alpha), -math.cos(alpha))
    scale = max(abs(ref[0]), abs(ref[1]), 1.0)
    assert abs(phi.y[-1] - ref[0]) <= 1e-9 * scale
    assert abs(phi.yprime[-1] - ref[1]) <= 1e-9 * scale


def test_psi_solves_the_same_equation_forwards(make_potential):
    q = make_potential()
    beta = PI / 3
    psi = solve_psi(q, 7.7, beta)
    assert psi.y[-1] == pytest.approx(math.sin(beta), abs=1e-13)
    assert psi.yprime[-1] == pytest.approx(-math.cos(beta), abs=1e-13)
    # integrating forwards from its own left data must land on the right data
    ref = _march(q, 7.7, psi.y[0], psi.yprime[0])
    assert ref[0] == pytest.approx(math.sin(beta), abs=1e-8)
    assert ref[1] == pytest.approx(-math.cos(beta), abs=1e-8)


def test_free_dirichlet_solution_is_a_sine():
    lam = 6.125
    phi = solve_phi(zero_potential(), lam**2, PI)
    assert np.max(np.abs(phi.y - np.sin(lam * phi.grid) / lam)) < 1e-12
    assert np.max(np.abs(phi.yprime - np.cos(lam * phi.grid))) < 1e-12


def test_constant_potential_covers_all_propagation_branches():
    q = constant_potential(4.0)
    grid = build_grid(q)
    osc = solve_phi(q, 13.0, PI, grid=grid)  # mu - q = 9
    assert np.max(np.abs(osc.y - np.sin(3 * grid) / 3)) < 1e-12
    hyp = solve_phi(q, 0.0, PI, grid=grid)  # mu - q = -4
    ref = np.sinh(2 * grid) / 2
    assert np.max(np.abs(hyp.y - ref)) < 1e-10 * np.max(ref)
    deg = solve_phi(q, 4.0, PI, grid=grid)  # mu = q exactly
    assert np.max(np.abs(deg.y - grid)) < 1e-12


def test_transfer_matrix_determinant_is_one():
    z = np.array([-50.0, -1.0, -1e-6, 0.0, 1e-12, 1e-5, 3.0, 480.0])
    for h in (PI, 0.37, 1e-3):
        c, sn = _c_sn(z, h)
        scale = np.maximum(1.0, c * c + np.abs(z) * sn * sn)
        assert np.max(np.abs(c * c + z * sn * sn - 1.0) / scale) < 1e-12


def test_wronskian_is_constant_and_equals_minus_characteristic(make_potential):
    q = make_potential()
    bp = BoundaryParams(2 * PI / 5, PI / 3)
    grid = build_grid(q)
    for mu in (-2.0, 0.9, 12.345, 88.8):
        phi = solve_phi(q, mu, bp, grid=grid)
        psi = solve_psi(q, mu, bp, grid=grid)
        w = wronskian(phi, psi)
        assert isinstance(w, float)
        assert isinstance(w, WronskianValue)
        assert w.max_drift <= 1e-9 * (1.0 + abs(w))
        assert abs(w.value + characteristic(q, mu, bp)) <= 1e-10 * (1.0 + abs(w))


def test_wronskian_requires_a_shared_grid():
    q = zero_potential()
    phi = solve_phi(q, 2.0, PI, grid=build_grid(q, n_min=64))
    psi = solve_psi(q, 2.0, PI / 2, grid=build_grid(q, n_min=128))
    with pytest.raises(ValueError):
        wronskian(phi, psi)


def test_free_characteristic_closed_forms():
    q = zero_potential()
    lams = np.array([0.5, 1.3, 2.25, 7.75])
    mus = lams**2
    w_neumann = characteristic(q, mus, BoundaryParams(PI, PI / 2))
    assert np.allclose(w_neumann, np.cos(lams * PI), atol=1e-12)
    w_dirichlet = characteristic(q, mus, BoundaryParams(PI, 0.0))
    assert np.allclose(w_dirichlet, np.sin(lams * PI) / lams, atol=1e-12)


def test_deviation_from_free_solution_decays_like_mu_inverse():
    q = step_potential(2.0, -1.0)
    lams = np.arange(10.0, 101.0, 10.0)
    sups = []
    for lam in lams:
        grid = build_grid(q, lam_max=lam)
        phi = solve_phi(q, lam**2, PI, grid=grid)
        sups.append(np.max(np.abs(phi.y - np.sin(lam * grid) / lam)))
    slope = np.polyfit(np.log(lams), np.log(sups), 1)[0]
    assert slope <= -1.8


def test_pruefer_angle_monotone_in_mu_and_anchored_at_eigenvalues():
    q = step_potential(1.0, -0.5)
    mus = np.linspace(-4.0, 90.0, 60)
    theta = pruefer_angle(q, mus, PI)
    assert np.all(np.diff(theta) > 0)
    for n in (0, 3, 11):
        th = pruefer_angle(zero_potential(), (n + 0.5) ** 2, PI)
        assert th == pytest.approx((n + 1) * PI - PI / 2, abs=1e-9)


def test_dirichlet_left_end_is_exact_only_at_float_pi():
    phi = solve_phi(zero_potential(), 4.0, PI)
    assert phi.y[0] == 0.0 and phi.yprime[0] == 1.0
    near = solve_phi(zero_potential(), 4.0, np.nextafter(PI, 0.0))
    assert near.y[0] != 0.0


def test_boundary_params_validation():
    with pytest.raises(ValueError):
        BoundaryParams(0.0, 0.0)  # alpha = 0 excluded
    with pytest.raises(ValueError):
        BoundaryParams(PI, PI)  # beta = pi excluded
    with pytest.raises(ValueError):
        solve_phi(zero_potential(), 1.0, 0.0)
    with pytest.raises(ValueError):
        solve_psi(zero_potential(), 1.0, PI)


def test_bare_angles_and_boundary_params_agree(make_potential):
    q = make_potential()
    bp = BoundaryParams(PI / 3, PI / 5)
    grid = build_grid(q)
    a = solve_phi(q, 5.5, bp, grid=grid)
    b = solve_phi(q, 5.5, PI / 3, grid=grid)
    assert np.array_equal(a.y, b.y)
    c = solve_psi(q, 5.5, bp, grid=grid)
    d = solve_psi(q, 5.5, PI / 5, grid=grid)
    assert np.array_equal(c.y, d.y)


def test_grid_validation():
    q = step_potential(1.0, 2.0, split=1.0)
    bad = np.linspace(0.0, PI, 100)  # misses the breakpoint at 1.0
    with pytest.raises(ValueError):
        solve_phi(q, 5.0, PI, grid=bad)
    good = build_grid(q, extra=(1.234,))
    assert 1.0 in good and 1.234 in good
    with pytest.raises(ValueError):
        build_grid(q, extra=(-0.5,))


def test_trace_fields_are_consistent(make_potential):
    q = make_potential()
    phi = solve_phi(q, 3.3, PI)
    assert phi.grid.shape == phi.y.shape == phi.yprime.shape
    assert phi.mu == 3.3
    assert phi.grid[0] == 0.0 and phi.grid[-1] == PI
