"""End-to-end gate: the twelve validation criteria, one pass/fail line each.

The suite is executed once per test session; each test asserts one criterion
and carries its PASS/FAIL line (with the measured detail) as the message.
"""

import pytest

from slspec import run_all


@pytest.fixture(scope="module")
def results():
    out = run_all(echo=lambda *_: None)
    return {r.index: r for r in out}


def _check(results, index):
    r = results[index]
    print(r.line())
    assert r.passed, r.line()


def test_criterion_01_free_spectrum_matches_index_shift_law(results):
    _check(results, 1)


def test_criterion_02_spectral_shift_covariance(results):
    _check(results, 2)


def test_criterion_03_eigenvalue_correction_decay(results):
    _check(results, 3)


def test_criterion_04_norming_constant_correction_decay(results):
    _check(results, 4)


def test_criterion_05_expansion_convergence_with_dirichlet_obstruction(results):
    _check(results, 5)


def test_criterion_06_mirrored_expansion_convergence(results):
    _check(results, 6)


def test_criterion_07_resolvent_residues_at_eigenvalues(results):
    _check(results, 7)


def test_criterion_08_wronskian_mu_derivative_identity(results):
    _check(results, 8)


def test_criterion_09_zone_modulus_lower_bounds(results):
    _check(results, 9)


def test_criterion_10_correction_series_decomposition(results):
    _check(results, 10)


def test_criterion_11_orthogonality_and_wronskian_constancy(results):
    _check(results, 11)


def test_criterion_12_total_runtime_budget(results):
    _check(results, 12)
