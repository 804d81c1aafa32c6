"""Index-shift equation: exact values, uniqueness, large-n laws, residuals."""

import math

import numpy as np
import pytest

from slspec import (
    PI,
    delta_asymptotic,
    delta_record,
    solve_delta,
    solve_delta_many,
    trig_residuals,
    trig_residuals_from_delta,
)


def _rhs_reference(delta, n, alpha, beta):
    """Independent arccos form of the fixed-point right-hand side."""
    m = n + delta

    def term(angle):
        if angle == PI:
            ca, sa = -1.0, 0.0
        else:
            ca, sa = math.cos(angle), math.sin(angle)
        return math.acos(ca / math.hypot(m * sa, ca)) / PI

    return term(alpha) - term(beta)


@pytest.mark.parametrize(
    "alpha,beta,value",
    [
        (PI, PI / 2, 0.5),
        (PI / 2, PI / 2, 0.0),
        (PI, 0.0, 1.0),
        (PI / 2, 0.0, 0.5),
    ],
)
def test_exact_shift_values(alpha, beta, value):
    for n in (2, 7, 40):
        assert solve_delta(n, alpha, beta) == pytest.approx(value, abs=1e-12)


def test_root_is_unique_on_the_unit_interval(rng):
    for _ in range(12):
        n = int(rng.integers(2, 40))
        alpha = float(rng.uniform(0.05, PI))
        beta = float(rng.uniform(0.0, PI - 0.05))
        grid = np.linspace(-1.0, 1.0, 4001)
        h = np.array([d - _rhs_reference(d, n, alpha, beta) for d in grid])
        signs = np.sign(h[h != 0.0])
        assert np.count_nonzero(np.diff(signs) != 0) == 1
        root = solve_delta(n, alpha, beta)
        assert -1.0 <= root <= 1.0
        assert abs(root - _rhs_reference(root, n, alpha, beta)) < 1e-11


def test_vectorised_solver_matches_scalar():
    ns = np.array([2, 3, 10, 57])
    batch = solve_delta_many(ns, 2 * PI / 3, PI / 5)
    singles = [solve_delta(int(n), 2 * PI / 3, PI / 5) for n in ns]
    assert np.allclose(batch, singles, atol=1e-14)


def test_large_n_law_with_cotangent_weight():
    ns = np.arange(10, 201)
    for beta in (PI / 8, PI / 3, 2 * PI / 3, 7 * PI / 8):
        cot = math.cos(beta) / math.sin(beta)
        deltas = solve_delta_many(ns, PI, beta)
        law = delta_asymptotic(ns, beta)
        assert np.allclose(law, 0.5 + cot / (PI * (ns + 0.5)), atol=1e-14)
        scaled = np.abs(deltas - law) * ns.astype(float) ** 2 / abs(cot)
        assert np.max(scaled) < 0.5


def test_law_is_exact_when_cotangent_vanishes():
    ns = np.arange(10, 101)
    deltas = solve_delta_many(ns, PI, PI / 2)
    assert np.max(np.abs(deltas - 0.5)) < 1e-12


def test_trig_residual_decay_rates():
    ns = np.arange(10, 201)
    for beta in (PI / 8, PI / 4, 3 * PI / 4):
        deltas = solve_delta_many(ns, PI, beta)
        d, e, g = trig_residuals_from_delta(ns, deltas)
        fl = ns.astype(float)
        assert np.max(np.abs(d) * fl**2) < 20.0
        assert np.max(np.abs(e) * fl) < 10.0
        assert np.max(np.abs(g) * fl) < 0.5


def test_trig_residuals_closed_forms_and_identity():
    for n in (2, 5, 50):
        for beta in (PI / 6, PI / 2, 4 * PI / 5):
            d, e, g = trig_residuals(n, beta)
            delta = solve_delta(n, PI, beta)
            m = n + delta
            assert d == pytest.approx(1.0 + math.cos(2 * PI * delta), abs=1e-12)
            assert e == pytest.approx(math.sin(2 * PI * delta), abs=1e-12)
            assert g == pytest.approx(2 * e / (PI * (2 * PI * m - e)), abs=1e-13)
            lhs = (PI / 2 - e / (4 * m)) * (2 / PI + g)
            assert lhs == pytest.approx(1.0, abs=1e-12)


def test_delta_record_bundles_matching_fields():
    rec = delta_record(7, PI / 3)
    assert rec.n == 7
    assert rec.delta == pytest.approx(solve_delta(7, PI, PI / 3), abs=1e-14)
    d, e, g = trig_residuals(7, PI / 3)
    assert (rec.d, rec.e, rec.g) == pytest.approx((d, e, g), abs=1e-14)


def test_validation_errors():
    with pytest.raises(ValueError):
        solve_delta(1, PI, PI / 2)  # indices start at 2
    with pytest.raises(ValueError):
        solve_delta(5, 0.0, PI / 2)  # alpha out of range
    with pytest.raises(ValueError):
        solve_delta(5, PI, PI)  # beta out of range
    with pytest.raises(ValueError):
        delta_asymptotic(5, 0.0)  # law needs beta in (0, pi)
    with pytest.raises(ValueError):
        trig_residuals(5, 0.0)
