import itertools

import numpy as np
import pytest

from funcward import CurveSet, Grid

_ids = itertools.count()


@pytest.fixture
def unit_grid():
    return Grid.uniform(201)


def make_set(grid, rows, ids=None):
    rows = np.asarray(rows, dtype=float)
    if ids is None:
        ids = [f"u{next(_ids)}" for _ in range(np.atleast_2d(rows).shape[0])]
    return CurveSet.from_matrix(grid, rows, ids)


def constant_set(grid, levels, ids=None):
    rows = [np.full(grid.size, float(v)) for v in levels]
    return make_set(grid, rows, ids)


def random_set(rng, grid, n, scale=1.0, offset=0.0, ids=None):
    return make_set(
        grid, offset + scale * rng.standard_normal((n, grid.size)), ids
    )
