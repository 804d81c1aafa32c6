"""Shared fixtures: one seeded generator and a random-potential factory."""

import numpy as np
import pytest

from slspec import PI, build_potential


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)


@pytest.fixture
def make_potential(rng):
    """Build random piecewise-constant potentials on [0, pi]."""

    def make(n_pieces: int = 6, scale: float = 3.0):
        cuts = np.sort(rng.uniform(0.15, PI - 0.15, size=n_pieces - 1))
        values = rng.uniform(-scale, scale, size=n_pieces)
        edges = np.concatenate(([0.0], cuts, [PI]))
        return build_potential(
            [(edges[i], edges[i + 1], float(values[i])) for i in range(n_pieces)]
        )

    return make
