"""Inter-cluster distances for agglomerative clustering of curves.

Four squared distances are provided: the conventional Ward linkage on raw
sample vectors, its functional analog based on band widths, and two robust
variants that compute band widths only over the most central curves of
each cluster (selected per MS-plot spatial depth or modified band depth).
Robust variants fall back to the conventional Ward linkage whenever a
cluster is too small for its selector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curves import CurveSet, Grid, check_shared_grid
from .depth import (
    BD_MIN_CURVES,
    MS_MIN_CURVES,
    _bd_central_indices,
    _ms_central_indices,
)

__all__ = [
    "DEFAULT_TAU",
    "LINKAGE_METHODS",
    "LinkageKind",
    "DistanceMatrix",
    "ward_classic",
    "functional_ward",
    "ms_linkage",
    "bd_linkage",
    "pair_distance",
    "distance_matrix",
]

DEFAULT_TAU = 0.5

# Merged clusters of at most this many curves use the Ward fallback under
# the MS linkage.
MS_FALLBACK_UNION_SIZE = 12

LINKAGE_METHODS = ("ward", "fward", "ms", "bd")


@dataclass(frozen=True)
class LinkageKind:
    """A linkage method plus, for the robust variants, its quantile level."""

    method: str
    tau: float | None = None

    def __post_init__(self):
        if self.method not in LINKAGE_METHODS:
            raise ValueError(
                f"unknown linkage {self.method!r}; expected one of {LINKAGE_METHODS}"
            )
        if self.method in ("ms", "bd"):
            tau = DEFAULT_TAU if self.tau is None else float(self.tau)
            if not 0.0 < tau < 1.0:
                raise ValueError(f"tau must lie in (0, 1), got {tau}")
            object.__setattr__(self, "tau", tau)
        elif self.tau is not None:
            raise ValueError(f"linkage {self.method!r} does not take tau")


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric matrix of squared inter-cluster distances, zero diagonal."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float, copy=True)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.all(np.isfinite(vals)):
            raise ValueError("distance matrix entries must be finite")
        if not np.allclose(vals, vals.T, rtol=0.0, atol=0.0):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(vals) != 0.0):
            raise ValueError("distance matrix diagonal must be zero")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return self.values.shape[0]


def _band_width_of(values: np.ndarray, grid: Grid) -> float:
    return float(grid.mean_integrate(values.max(axis=0) - values.min(axis=0)))


def _canonical_stack(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Stacking order chosen by content, so that D(a, b) and D(b, a) run the
    # identical computation and symmetry holds exactly (ulp for ulp).
    if a.tobytes() <= b.tobytes():
        return np.vstack([a, b])
    return np.vstack([b, a])


def ward_classic(a: CurveSet, b: CurveSet) -> float:
    """Conventional Ward linkage: SSE increase when the clusters merge.

    Each curve is treated as the plain vector of its grid values; SSE is
    the sum of squared Euclidean distances to the cluster centroid.  The
    increase is evaluated through the exactly equivalent centroid form
    ``|a| |b| / (|a| + |b|) * ||mean(a) - mean(b)||^2``, which is symmetric
    to the last bit.
    """
    check_shared_grid(a, b)
    diff = a.values.mean(axis=0) - b.values.mean(axis=0)
    n_a, n_b = len(a), len(b)
    return n_a * n_b / (n_a + n_b) * float(diff @ diff)


def functional_ward(a: CurveSet, b: CurveSet) -> float:
    """Functional Ward linkage: increase in size-weighted band width.

    ``|a ∪ b| W(B(a ∪ b)) - |a| W(B(a)) - |b| W(B(b))``; non-negative
    because the merged band contains each cluster's band.
    """
    check_shared_grid(a, b)
    grid = a.grid
    merged = np.vstack([a.values, b.values])
    return len(merged) * _band_width_of(merged, grid) - (
        len(a) * _band_width_of(a.values, grid)
        + len(b) * _band_width_of(b.values, grid)
    )


def ms_linkage(a: CurveSet, b: CurveSet, tau: float = DEFAULT_TAU) -> float:
    """MS linkage: functional Ward over MS-selected central curves.

    Every band is computed only over the most central curves of its
    cluster, ranked by spatial depth on the symmetrized MO/VO cloud (the
    merged cluster's selection is computed afresh on the union).  Falls
    back to the conventional Ward linkage when the merged cluster has at
    most 12 curves, or when either cluster is too small to select from.
    """
    check_shared_grid(a, b)
    n_a, n_b = len(a), len(b)
    if (
        n_a + n_b <= MS_FALLBACK_UNION_SIZE
        or n_a < MS_MIN_CURVES
        or n_b < MS_MIN_CURVES
    ):
        return ward_classic(a, b)
    grid = a.grid
    merged = _canonical_stack(a.values, b.values)
    w_ab = _selected_width(merged, grid, tau, _ms_central_indices)
    w_a = _selected_width(a.values, grid, tau, _ms_central_indices)
    w_b = _selected_width(b.values, grid, tau, _ms_central_indices)
    return (n_a + n_b) * w_ab - (n_a * w_a + n_b * w_b)


def bd_linkage(a: CurveSet, b: CurveSet, tau: float = DEFAULT_TAU) -> float:
    """BD linkage: functional Ward over MBD-selected central curves.

    Bands keep only curves whose modified band depth reaches the cluster's
    tau-quantile.  Falls back to the conventional Ward linkage when either
    cluster has fewer than 4 curves.
    """
    check_shared_grid(a, b)
    n_a, n_b = len(a), len(b)
    if n_a < BD_MIN_CURVES or n_b < BD_MIN_CURVES:
        return ward_classic(a, b)
    grid = a.grid
    merged = _canonical_stack(a.values, b.values)
    w_ab = _selected_width(merged, grid, tau, _bd_central_indices)
    w_a = _selected_width(a.values, grid, tau, _bd_central_indices)
    w_b = _selected_width(b.values, grid, tau, _bd_central_indices)
    return (n_a + n_b) * w_ab - (n_a * w_a + n_b * w_b)


def _selected_width(values, grid, tau, select) -> float:
    indices = select(values, grid, tau)
    return _band_width_of(values[list(indices)], grid)


def pair_distance(a: CurveSet, b: CurveSet, kind: LinkageKind) -> float:
    """Squared distance between two clusters under the given linkage."""
    if kind.method == "ward":
        return ward_classic(a, b)
    if kind.method == "fward":
        return functional_ward(a, b)
    if kind.method == "ms":
        return ms_linkage(a, b, kind.tau)
    return bd_linkage(a, b, kind.tau)


def distance_matrix(clusters: Sequence[CurveSet], kind: LinkageKind) -> DistanceMatrix:
    """Pairwise squared distances between clusters under one linkage."""
    m = len(clusters)
    if m < 2:
        raise ValueError("need at least 2 clusters for a distance matrix")
    values = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            d = pair_distance(clusters[i], clusters[j], kind)
            values[i, j] = values[j, i] = d
    return DistanceMatrix(values)
