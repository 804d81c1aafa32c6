"""Piecewise-constant potentials: construction rules, exact integrals, I/O."""

import json

import numpy as np
import pytest
from scipy.integrate import quad

from slspec import (
    PI,
    build_potential,
    constant_potential,
    load_potential,
    mean,
    sample_potential,
    save_potential,
    sigma,
    step_potential,
    zero_potential,
)
from slspec.potential import (
    PiecewiseLinear,
    linear_trig_moment,
    oscillatory_moment,
    sigma_linear,
)


def _interior(points, lo=0.0, hi=PI):
    return [p for p in points if lo < p < hi]


def test_build_potential_sorts_and_merges_equal_neighbours():
    q = build_potential([(PI / 2, PI, 2.0), (0.0, PI / 4, 1.0), (PI / 4, PI / 2, 1.0)])
    assert q.breakpoints[0] == 0.0 and q.breakpoints[-1] == PI
    assert len(q.values) == 2  # the two value-1 pieces merge
    assert q(0.1) == 1.0 and q(2.0) == 2.0


def test_call_is_right_continuous_and_defined_at_pi():
    q = step_potential(-1.0, 4.0)
    assert q(PI / 2) == 4.0
    assert q(PI / 2 - 1e-12) == -1.0
    assert q(0.0) == -1.0
    assert q(PI) == 4.0


def test_mapping_pieces_are_accepted():
    q = build_potential(
        [
            {"from": 0.0, "to": 1.0, "value": 2.0},
            {"from": 1.0, "to": PI, "value": -3.0},
        ]
    )
    assert q(0.5) == 2.0 and q(2.0) == -3.0
    assert q.max_abs() == 3.0


@pytest.mark.parametrize(
    "pieces",
    [
        [],
        [(0.0, 1.0, 5.0)],  # stops short of pi
        [(0.3, PI, 1.0)],  # starts late
        [(0.0, 2.0, 1.0), (1.5, PI, 2.0)],  # overlap
        [(0.0, 1.0, 1.0), (1.5, PI, 2.0)],  # gap
        [(0.0, 0.0, 1.0), (0.0, PI, 2.0)],  # empty piece
    ],
)
def test_build_potential_rejects_bad_tilings(pieces):
    with pytest.raises(ValueError):
        build_potential(pieces)


def test_mean_and_sigma_match_quadrature(make_potential):
    q = make_potential()
    pts = _interior(q.breakpoints)
    total, _ = quad(q, 0.0, PI, points=pts, limit=200)
    assert mean(q) == pytest.approx(total / PI, abs=1e-12)
    for x in (0.0, 0.7, PI / 2, 2.9, PI):
        ref, _ = quad(q, 0.0, x, points=_interior(pts, 0.0, x), limit=200)
        assert sigma(q, x) == pytest.approx(ref, abs=1e-11)


def test_sigma_is_vectorised_and_piecewise_linear(make_potential):
    q = make_potential()
    xs = np.linspace(0.0, PI, 257)
    vals = sigma(q, xs)
    assert vals.shape == xs.shape
    assert vals[0] == 0.0
    # slope between consecutive samples inside one piece equals the value there
    mids = 0.5 * (xs[:-1] + xs[1:])
    inside = np.ones(mids.size, dtype=bool)
    for b in q.breakpoints[1:-1]:
        inside &= ~((xs[:-1] < b) & (b < xs[1:]))
    slopes = np.diff(vals) / np.diff(xs)
    assert np.allclose(slopes[inside], q(mids[inside]), atol=1e-9)


def test_shifted_and_reversed():
    q = step_potential(1.0, -2.0, split=1.0)
    assert q.shifted(3.0)(0.5) == 4.0
    assert mean(q.shifted(3.0)) == pytest.approx(mean(q) + 3.0, abs=1e-13)
    qr = q.reversed()
    xs = np.linspace(0.001, PI - 0.001, 17)
    assert np.allclose(qr(xs), q(PI - xs))


def test_equality_and_constants():
    assert zero_potential() == constant_potential(0.0)
    assert constant_potential(2.0) != constant_potential(3.0)
    assert mean(constant_potential(2.5)) == pytest.approx(2.5, abs=1e-15)


def test_oscillatory_moment_matches_quadrature(make_potential):
    q = make_potential()
    pts = _interior(q.breakpoints)
    for m in (2.5, 7.25, 31.5):
        for kind, trig in (("cos", np.cos), ("sin", np.sin)):
            ref, _ = quad(
                lambda t: q(t) * trig(2 * m * t), 0.0, PI, points=pts, limit=400
            )
            assert oscillatory_moment(q, m, kind) == pytest.approx(ref, abs=1e-10)


def test_oscillatory_moment_rejects_nonpositive_frequency():
    with pytest.raises(ValueError):
        oscillatory_moment(zero_potential(), 0.0, "cos")


def test_linear_trig_moment_matches_quadrature():
    cases = [
        (1.0, 0.5, 0.2, 1.9, 3.0, "sin"),
        (-2.0, 1.7, 0.0, PI, 11.5, "cos"),
        (0.3, 0.0, 1.0, 2.0, 0.7, "sin"),
    ]
    for a0, slope, t0, t1, freq, kind in cases:
        trig = np.sin if kind == "sin" else np.cos
        ref, _ = quad(
            lambda t: (a0 + slope * (t - t0)) * trig(freq * t), t0, t1, limit=200
        )
        assert linear_trig_moment(a0, slope, t0, t1, freq, kind) == pytest.approx(
            ref, abs=1e-12
        )


def test_piecewise_linear_algebra_and_moment(make_potential):
    q = make_potential()
    g = sigma_linear(q)
    xs = np.linspace(0.0, PI, 101)
    assert np.allclose(g(xs), sigma(q, xs), atol=1e-13)
    h = g + g.scaled(-0.5)
    assert np.allclose(h(xs), 0.5 * sigma(q, xs), atol=1e-13)
    ref, _ = quad(
        lambda t: g(t) * np.sin(4.5 * t),
        0.0,
        PI,
        points=_interior(q.breakpoints),
        limit=400,
    )
    assert g.trig_moment(4.5, "sin") == pytest.approx(ref, abs=1e-10)


def test_piecewise_linear_moment_is_vectorised(make_potential):
    g = sigma_linear(make_potential())
    freqs = np.array([1.0, 4.5, 9.25])
    batch = g.trig_moment(freqs, "cos")
    singles = [g.trig_moment(float(f), "cos") for f in freqs]
    assert np.allclose(batch, singles, atol=1e-13)


def test_sample_potential_reproduces_a_constant():
    q = sample_potential(lambda x: np.full_like(x, 2.5), n_pieces=64)
    assert len(q.values) == 64
    assert q(1.0) == 2.5
    assert q.max_abs() == 2.5
    assert mean(q) == pytest.approx(2.5, abs=1e-14)


def test_sample_potential_tracks_a_smooth_profile():
    q = sample_potential(lambda x: np.sin(x), n_pieces=2048)
    ref, _ = quad(np.sin, 0.0, PI)
    assert mean(q) == pytest.approx(ref / PI, abs=1e-6)


def test_json_round_trip(tmp_path, make_potential):
    q = make_potential()
    path = tmp_path / "q.json"
    save_potential(q, path)
    assert load_potential(path) == q
    doc = json.loads(path.read_text())
    assert set(doc["pieces"][0]) == {"from", "to", "value"}


def test_load_potential_rejects_non_document(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2, 3]\n")
    with pytest.raises((ValueError, TypeError, KeyError)):
        load_potential(path)
