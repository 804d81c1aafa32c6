"""Dispersion corrections, series decompositions, and decay-rate fits."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from slspec import (
    PI,
    BoundaryParams,
    asymptotic_report,
    constant_potential,
    decompose_l,
    decomposition_terms,
    fit_decay,
    l3_closed_form,
    l3_mirror_gap,
    l_term,
    predict_lambda,
    predict_norming,
    s_term,
    series_diagnostics,
    series_eval,
    sigma,
    sigma2,
    solve_delta,
    step_potential,
    zero_potential,
)


def _interior(points):
    return [p for p in points if 0.0 < p < PI]


def test_l_term_matches_quadrature(make_potential):
    q = make_potential()
    for alpha, beta in ((PI, PI / 3), (PI / 4, 2 * PI / 3)):
        bp = BoundaryParams(alpha, beta)
        sign = -1.0 if alpha == PI else 1.0
        for n in (2, 5, 23):
            m = n + solve_delta(n, alpha, beta)
            ref, _ = quad(
                lambda t: q(t) * math.cos(2 * m * t),
                0.0,
                PI,
                points=_interior(q.breakpoints),
                limit=400,
            )
            assert l_term(q, bp, n) == pytest.approx(
                sign * ref / (2 * PI * m), abs=1e-12
            )


def test_s_term_matches_quadrature(make_potential):
    q = make_potential()
    bp = BoundaryParams(PI, PI / 5)
    for n in (2, 9, 31):
        m = n + solve_delta(n, PI, PI / 5)
        ref, _ = quad(
            lambda t: (PI - t) * q(t) * math.sin(2 * m * t),
            0.0,
            PI,
            points=_interior(q.breakpoints),
            limit=400,
        )
        assert s_term(q, bp, n) == pytest.approx(-0.5 * ref, abs=1e-12)


def test_s_term_of_unit_potential_has_closed_form():
    bp = BoundaryParams(PI, PI / 2)  # half-integer m exactly
    for n in (2, 7, 30):
        m = n + 0.5
        assert s_term(constant_potential(1.0), bp, n) == pytest.approx(
            -PI / (4 * m), abs=1e-13
        )


def test_constant_potential_prediction_error_has_exact_cube_rate():
    # with q = c the eigenvalues are sqrt(m^2 + c), so the three-term
    # prediction m + c/(2m) errs by c^2/(8 m^3) up to O(1/m^2) corrections
    c = 1.0
    bp = BoundaryParams(PI, PI / 2)
    for n in (5, 10, 20):
        m = n + 0.5
        pred = predict_lambda(constant_potential(c), bp, n)
        assert pred == pytest.approx(m + c / (2 * m), abs=1e-12)
        ratio = abs(math.sqrt(m * m + c) - pred) * 8.0 * m**3 / c**2
        assert 0.97 < ratio < 1.0


def test_predict_lambda_scalar_and_array_agree():
    q = step_potential(2.0, -1.0)
    bp = BoundaryParams(PI, PI / 3)
    ns = np.array([2, 3, 8])
    batch = predict_lambda(q, bp, ns)
    assert isinstance(batch, np.ndarray)
    for n, v in zip(ns, batch):
        out = predict_lambda(q, bp, int(n))
        assert isinstance(out, float)
        assert out == pytest.approx(v, abs=1e-14)


def test_predict_norming_free_case_is_exact():
    ns = np.arange(2, 12)
    m = ns + 0.5
    a_pred, b_pred = predict_norming(zero_potential(), BoundaryParams(PI, PI / 2), ns)
    assert np.allclose(a_pred, PI / (2 * m**2), atol=1e-14)
    assert np.allclose(b_pred, PI / 2, atol=1e-14)


def test_decomposition_identities_hold_termwise():
    q = step_potential(1.0, 3.0)
    t = decomposition_terms(q, PI / 3, np.arange(2, 201))
    assert np.max(np.abs(t.l_direct - t.l_decomposed)) < 1e-12
    assert np.max(np.abs(t.f - t.f_direct)) < 1e-12


def test_l2_coefficients_decay_cubically():
    q = step_potential(1.0, 3.0)
    t = decomposition_terms(q, PI / 3, np.arange(2, 2001))
    mags = np.abs(t.l2)
    ns = t.ns.astype(float)
    assert np.max(mags * ns**3) < 2.0
    ratio = mags[t.ns > 100].sum() / mags[t.ns > 200].sum()
    assert 3.5 < ratio < 4.5


def test_series_sum_matches_decomposed_parts():
    q = step_potential(1.0, 3.0)
    xs = np.linspace(0.2, 2 * PI - 0.2, 23)
    for beta in (PI / 4, PI / 2, 3 * PI / 4):
        direct = series_eval("l", q, BoundaryParams(PI, beta), xs, 200)
        l1, l2, l3 = decompose_l(q, beta, xs, 200)
        assert np.max(np.abs(direct - (l1 + l2 + l3))) < 1e-13


def test_l3_partial_sums_converge_to_the_closed_form():
    q = step_potential(1.0, 3.0)
    beta = PI / 3
    xs = np.array([0.4, 1.3, 1.9, 2.6, PI - 0.2])
    limit = l3_closed_form(q, beta, xs, n_terms=2000)
    gap_small = np.max(np.abs(decompose_l(q, beta, xs, 100)[2] - limit))
    gap_large = np.max(np.abs(decompose_l(q, beta, xs, 1600)[2] - limit))
    assert gap_large < 2e-3
    assert gap_large < gap_small / 8.0


def test_mirror_gap_identity_is_exact_at_any_truncation():
    q = step_potential(1.0, 3.0)
    xs = np.linspace(0.3, PI - 0.3, 11)
    for n_terms in (50, 300):
        gap_sums, gap_ident = l3_mirror_gap(q, PI / 3, xs, n_terms)
        assert np.max(np.abs(gap_sums - gap_ident)) < 1e-12


def test_sigma2_matches_a_direct_projection():
    # for beta = pi/2 the two low modes are sin(t/2) and sin(3t/2)
    q = step_potential(1.0, 3.0)

    def weight(t):
        return sigma(q, t / 2) + sigma(q, PI - t / 2)

    for x0 in (0.9, 2.2):
        ref = 0.0
        for k in (0, 1):
            num, _ = quad(lambda t: weight(t) * np.sin((k + 0.5) * t), 0, PI, limit=400)
            den, _ = quad(lambda t: np.sin((k + 0.5) * t) ** 2, 0, PI, limit=400)
            ref += num / den * np.sin((k + 0.5) * x0)
        assert sigma2(q, PI / 2, x0) == pytest.approx(ref, abs=1e-9)
    vec = sigma2(q, PI / 2, np.array([0.9, 2.2]))
    assert vec.shape == (2,)


def test_series_vanish_for_the_zero_potential():
    xs = np.linspace(0.1, 2 * PI - 0.1, 17)
    bp = BoundaryParams(PI, PI / 3)
    assert np.max(np.abs(series_eval("l", zero_potential(), bp, xs, 150))) < 1e-14
    assert np.max(np.abs(series_eval("s", zero_potential(), bp, xs, 150))) < 1e-14


def test_series_eval_validates_kind_and_truncation():
    bp = BoundaryParams(PI, PI / 3)
    with pytest.raises(ValueError):
        series_eval("w", zero_potential(), bp, 1.0, 50)
    with pytest.raises(ValueError):
        series_eval("l", zero_potential(), bp, 1.0, 1)


def test_series_diagnostics_show_cauchy_contraction():
    q = step_potential(2.0, -1.0)
    bp = BoundaryParams(PI, PI / 3)
    rows = series_diagnostics("l", q, bp, [25, 50, 100])
    assert [r.N for r in rows] == [25, 50, 100]
    assert rows[0].cauchy_sup > rows[1].cauchy_sup > rows[2].cauchy_sup
    tvs = [r.total_variation for r in rows]
    assert max(tvs) < 2.0 * min(tvs)  # bounded variation, not blow-up
    with pytest.raises(ValueError):
        series_diagnostics("l", q, bp, [25], window=(0.5, 7.0))
    with pytest.raises(ValueError):
        series_diagnostics("l", q, bp, [1])


def test_fit_decay_recovers_a_synthetic_power_law():
    ns = np.arange(5, 120)
    slope, intercept = fit_decay(ns, 3.0 * ns**-2.5, window=(10, 100))
    assert slope == pytest.approx(-2.5, abs=1e-10)
    assert intercept == pytest.approx(math.log(3.0), abs=1e-10)
    with pytest.raises(ValueError):
        fit_decay(ns, 3.0 * ns**-2.5, window=(200, 300))


def test_asymptotic_report_fits_the_expected_rates():
    q = step_potential(2.0, -1.0)
    report = asymptotic_report(q, BoundaryParams(PI, PI / 3), n_max=40, fit_window=(10, 40))
    assert report.alpha == PI and report.beta == PI / 3
    assert report.slope_lambda <= -1.8
    assert report.slope_a <= -0.9
    rows = report.rows
    assert rows[0].n == 2 and rows[-1].n == 40
    r = rows[8]
    assert r.residual == pytest.approx(r.lambda_computed - r.lambda_predicted, abs=1e-14)
    assert abs(r.a_computed - r.a_predicted) > 0  # fields are actually filled
    with pytest.raises(ValueError):
        asymptotic_report(q, BoundaryParams(PI, PI / 3), n_max=8, fit_window=(10, 40))
