"""Piecewise-constant potentials on [0, pi] and their exact integral primitives.

The whole solver stack works with real integrable potentials represented as
finitely many constant pieces tiling [0, pi].  Downstream code (transfer-matrix
propagation, oscillatory moments, cumulative integrals) exploits that the
representation is exact, so this module is the single place where it is
validated and where the closed-form integral helpers live:

* exact cumulative integral  sigma(x) = int_0^x q(t) dt  (piecewise linear),
* exact oscillatory moments  int_0^pi q(t) trig(2 m t) dt,
* exact moments of continuous piecewise-linear weights against trig(c t),
* midpoint sampling of a smooth q onto a uniform K-piece grid,
* JSON round-tripping of the piece list.

Smooth potentials enter the toolkit only through :func:`sample_potential`;
everything after that sees steps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

PI = math.pi

#: Tiling slack: pieces must abut and cover [0, pi] within this tolerance.
TILE_TOL = 1e-12

__all__ = [
    "PI",
    "TILE_TOL",
    "Piece",
    "Potential",
    "PiecewiseLinear",
    "build_potential",
    "constant_potential",
    "zero_potential",
    "step_potential",
    "sample_potential",
    "mean",
    "sigma",
    "sigma_linear",
    "oscillatory_moment",
    "linear_trig_moment",
    "load_potential",
    "save_potential",
]


@dataclass(frozen=True)
class Piece:
    """One constant piece ``q(x) = value`` for ``lo <= x < hi``."""

    lo: float
    hi: float
    value: float


class Potential:
    """Piecewise-constant q on [0, pi].

    Parameters
    ----------
    breakpoints : array_like, shape (K+1,)
        Strictly increasing, ``breakpoints[0] == 0`` and
        ``breakpoints[-1] == pi`` exactly (construction snaps them).
    values : array_like, shape (K,)
        Piece values; ``q(x) = values[i]`` on ``[breakpoints[i],
        breakpoints[i+1])`` (right-continuous, last piece closed).

    Use :func:`build_potential` / :func:`sample_potential` rather than the
    constructor; they validate the tiling.
    """

    __slots__ = ("breakpoints", "values")

    def __init__(self, breakpoints: np.ndarray, values: np.ndarray):
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.breakpoints.ndim != 1 or self.values.ndim != 1:
            raise ValueError("breakpoints and values must be 1-d")
        if len(self.breakpoints) != len(self.values) + 1:
            raise ValueError("need exactly one more breakpoint than values")

    # -- basic queries ----------------------------------------------------

    @property
    def n_pieces(self) -> int:
        return len(self.values)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def pieces(self) -> list[Piece]:
        return [
            Piece(float(a), float(b), float(v))
            for a, b, v in zip(self.breakpoints[:-1], self.breakpoints[1:], self.values)
        ]

    def __call__(self, x):
        """Pointwise evaluation (right-continuous; q(pi) = last value)."""
        x = np.asarray(x, dtype=float)
        idx = np.clip(
            np.searchsorted(self.breakpoints, x, side="right") - 1,
            0,
            self.n_pieces - 1,
        )
        out = self.values[idx]
        return float(out) if out.ndim == 0 else out

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.n_pieces else 0.0

    def shifted(self, c: float) -> "Potential":
        """Potential q + c (same tiling)."""
        return Potential(self.breakpoints.copy(), self.values + float(c))

    def reversed(self) -> "Potential":
        """Potential q(pi - x), used when integrating from the right endpoint."""
        return Potential(PI - self.breakpoints[::-1], self.values[::-1].copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Potential)
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"Potential({self.n_pieces} pieces, mean={mean(self):.6g})"


def build_potential(pieces: Iterable) -> Potential:
    """Validate and normalise a piece list into a :class:`Potential`.

    Accepts ``Piece`` objects, ``(lo, hi, value)`` tuples, or mappings with
    keys ``from``/``to``/``value`` (the JSON spelling).  Pieces are sorted,
    required to tile [0, pi] within ``TILE_TOL`` (no gaps, no overlaps,
    endpoints at 0 and pi), and adjacent pieces with equal values are merged.

    Raises
    ------
    ValueError
        On an empty list, a gap or overlap in the tiling, or endpoints that
        are not 0 and pi.
    """
    norm: list[Piece] = []
    for p in pieces:
        if isinstance(p, Piece):
            norm.append(p)
        elif isinstance(p, Mapping):
            norm.append(Piece(float(p["from"]), float(p["to"]), float(p["value"])))
        else:
            lo, hi, v = p
            norm.append(Piece(float(lo), float(hi), float(v)))
    if not norm:
        raise ValueError("potential needs at least one piece")
    norm.sort(key=lambda p: p.lo)

    if abs(norm[0].lo) > TILE_TOL:
        raise ValueError(f"first piece starts at {norm[0].lo!r}, expected 0")
    if abs(norm[-1].hi - PI) > TILE_TOL:
        raise ValueError(f"last piece ends at {norm[-1].hi!r}, expected pi")
    for a, b in zip(norm[:-1], norm[1:]):
        if abs(b.lo - a.hi) > TILE_TOL:
            kind = "overlap" if b.lo < a.hi else "gap"
            raise ValueError(f"{kind} in tiling between {a.hi!r} and {b.lo!r}")
    for p in norm:
        if p.hi - p.lo <= TILE_TOL:
            raise ValueError(f"piece [{p.lo!r}, {p.hi!r}] has nonpositive width")

    bps = [0.0]
    vals: list[float] = []
    for p in norm:
        if vals and p.value == vals[-1]:
            bps[-1] = p.hi  # merge equal-value neighbours
        else:
            vals.append(p.value)
            bps.append(p.hi)
    bps[-1] = PI
    return Potential(np.array(bps), np.array(vals))


def constant_potential(value: float) -> Potential:
    return Potential(np.array([0.0, PI]), np.array([float(value)]))


def zero_potential() -> Potential:
    return constant_potential(0.0)


def step_potential(left: float, right: float, split: float = PI / 2) -> Potential:
    """Two-piece potential: ``left`` on [0, split), ``right`` on [split, pi]."""
    return build_potential([(0.0, split, left), (split, PI, right)])


def sample_potential(fn: Callable[[np.ndarray], np.ndarray], n_pieces: int = 2048) -> Potential:
    """Sample a smooth q at piece midpoints onto a uniform ``n_pieces`` grid."""
    if n_pieces < 1:
        raise ValueError("n_pieces must be positive")
    bps = np.linspace(0.0, PI, n_pieces + 1)
    mids = 0.5 * (bps[:-1] + bps[1:])
    vals = np.asarray(fn(mids), dtype=float)
    if vals.shape != mids.shape:
        raise ValueError("sampling function must be vectorised over x")
    return Potential(bps, vals)


# -- integral primitives ---------------------------------------------------


def mean(q: Potential) -> float:
    """Mean value (1/pi) * int_0^pi q(t) dt, exact."""
    return float(np.dot(q.values, q.widths) / PI)


def sigma(q: Potential, x) -> float | np.ndarray:
    """Cumulative integral sigma(x) = int_0^x q(t) dt, exact for x in [0, pi]."""
    cum = np.concatenate(([0.0], np.cumsum(q.values * q.widths)))
    out = np.interp(np.asarray(x, dtype=float), q.breakpoints, cum)
    return float(out) if out.ndim == 0 else out


def sigma_linear(q: Potential) -> "PiecewiseLinear":
    """sigma as a :class:`PiecewiseLinear` object on [0, pi]."""
    cum = np.concatenate(([0.0], np.cumsum(q.values * q.widths)))
    return PiecewiseLinear(q.breakpoints.copy(), cum)


def oscillatory_moment(q: Potential, m, kind: str = "cos"):
    """Exact ``int_0^pi q(t) * trig(2 m t) dt`` with trig = cos or sin.

    ``m`` may be a scalar or an array of frequencies (all > 0); the piecewise
    antiderivative is summed in closed form, so there is no quadrature error.
    """
    if kind not in ("cos", "sin"):
        raise ValueError("kind must be 'cos' or 'sin'")
    m_arr = np.atleast_1d(np.asarray(m, dtype=float))
    if np.any(m_arr <= 0):
        raise ValueError("frequencies m must be positive")
    c = 2.0 * m_arr[:, None]  # (M, 1) against (K,) piece axes
    a = q.breakpoints[:-1][None, :]
    b = q.breakpoints[1:][None, :]
    if kind == "cos":
        per_piece = (np.sin(c * b) - np.sin(c * a)) / c
    else:
        per_piece = (np.cos(c * a) - np.cos(c * b)) / c
    out = per_piece @ q.values
    return float(out[0]) if np.isscalar(m) or np.ndim(m) == 0 else out


def linear_trig_moment(a0, slope, t0: float, t1: float, freq, kind: str = "sin"):
    """Exact ``int_{t0}^{t1} (a0 + slope*(t - t0)) * trig(freq * t) dt``.

    Vectorised over ``freq`` (scalar or array, entries > 1e-9).  This is the
    building block for moments of piecewise-linear weights such as cumulative
    integrals of step potentials.
    """
    c = np.asarray(freq, dtype=float)
    if np.any(np.abs(c) <= 1e-9):
        raise ValueError("frequency too small for the closed-form moment")
    h = t1 - t0
    aL = a0 + slope * h
    s0, s1 = np.sin(c * t0), np.sin(c * t1)
    c0, c1 = np.cos(c * t0), np.cos(c * t1)
    if kind == "sin":
        out = (a0 * c0 - aL * c1) / c + slope * (s1 - s0) / (c * c)
    elif kind == "cos":
        out = (aL * s1 - a0 * s0) / c + slope * (c1 - c0) / (c * c)
    else:
        raise ValueError("kind must be 'cos' or 'sin'")
    return out


class PiecewiseLinear:
    """Continuous piecewise-linear function given by nodes ``(xs, ys)``.

    Supports pointwise evaluation, addition (on the merged node set) and exact
    trig moments against sin/cos of arbitrary positive frequency.  Used for
    cumulative integrals of potentials and their half-scale rearrangements.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, xs: np.ndarray, ys: np.ndarray):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ValueError("need matching xs/ys with at least two nodes")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("xs must be strictly increasing")

    def __call__(self, x):
        out = np.interp(np.asarray(x, dtype=float), self.xs, self.ys)
        return float(out) if out.ndim == 0 else out

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        if abs(self.xs[0] - other.xs[0]) > 1e-12 or abs(self.xs[-1] - other.xs[-1]) > 1e-12:
            raise ValueError("can only add piecewise-linear functions on the same interval")
        xs = np.union1d(self.xs, other.xs)
        return PiecewiseLinear(xs, self(xs) + other(xs))

    def scaled(self, factor: float) -> "PiecewiseLinear":
        return PiecewiseLinear(self.xs.copy(), factor * self.ys)

    def trig_moment(self, freq, kind: str = "sin"):
        """Exact ``int g(t) * trig(freq t) dt`` over the full node range."""
        c = np.atleast_1d(np.asarray(freq, dtype=float))
        total = np.zeros_like(c)
        for i in range(len(self.xs) - 1):
            t0, t1 = self.xs[i], self.xs[i + 1]
            slope = (self.ys[i + 1] - self.ys[i]) / (t1 - t0)
            total += linear_trig_moment(self.ys[i], slope, t0, t1, c, kind)
        if np.ndim(freq) == 0:
            return float(total[0])
        return total


# -- JSON I/O ---------------------------------------------------------------


def save_potential(q: Potential, path) -> None:
    """Write the piece list as JSON: {"pieces": [{"from", "to", "value"}, ...]}."""
    doc = {
        "pieces": [{"from": p.lo, "to": p.hi, "value": p.value} for p in q.pieces]
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_potential(path) -> Potential:
    """Read a potential from the JSON piece-list format (validates tiling)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, Mapping) or "pieces" not in doc:
        raise ValueError(f"{path}: expected an object with a 'pieces' array")
    return build_potential(doc["pieces"])
