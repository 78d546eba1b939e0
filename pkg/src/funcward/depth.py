"""Center-outward ranking of curves.

Provides modified band depth (pairwise bands, J=2), directional
outlyingness with its integrated magnitude/shape summaries (MO, VO), and
the two central-curve selectors used by the robust linkages: spatial-depth
ranking on the symmetrized MO/VO cloud, and an MBD quantile cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .curves import CurveSet, Grid

__all__ = [
    "TooFewCurvesError",
    "OutlyingnessPoint",
    "CentralSelection",
    "MS_MIN_CURVES",
    "BD_MIN_CURVES",
    "MAD_SCALE",
    "mbd",
    "directional_outlyingness",
    "mo_vo",
    "spatial_depth",
    "central_by_ms",
    "central_by_bd",
]

# Consistency factor making the MAD estimate the Gaussian sigma.
MAD_SCALE = 1.4826

# Smallest cluster sizes for which the central-curve selectors are reliable.
MS_MIN_CURVES = 12
BD_MIN_CURVES = 4


class TooFewCurvesError(ValueError):
    """Raised when a selector has too few curves; callers should fall back
    to the conventional Ward linkage."""


class OutlyingnessPoint(NamedTuple):
    mo: float
    vo: float


@dataclass(frozen=True)
class CentralSelection:
    """Indices of the most central curves of a set, at quantile level tau."""

    indices: tuple[int, ...]
    tau: float

    def __post_init__(self):
        if not self.indices:
            raise ValueError("central selection must be non-empty")
        if not 0.0 < self.tau < 1.0:
            raise ValueError("tau must lie strictly between 0 and 1")


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    return tau


def mbd(curve_set: CurveSet) -> np.ndarray:
    """Modified band depth of each curve with pairwise (J=2) bands.

    For curve i, the depth is the average over all unordered pairs of
    curves of the fraction of the domain where the curve lies inside the
    pair's envelope (boundary contact counts as inside).  The fraction is
    the trapezoid-weighted measure of the containment indicator.

    Returns
    -------
    numpy.ndarray
        One depth per curve, in ``[0, 1]``, aligned to the set's order.
    """
    if len(curve_set) < 2:
        raise TooFewCurvesError("modified band depth needs at least 2 curves")
    return _mbd_matrix(curve_set.values, curve_set.grid)


def _mbd_matrix(values: np.ndarray, grid: Grid) -> np.ndarray:
    n, T = values.shape
    pairs = n * (n - 1) // 2
    # A pair fails to contain curve i at t iff both members are strictly
    # above, or both strictly below, y_i(t).
    contained = np.empty((n, T))
    for j in range(T):
        col = values[:, j]
        order = np.sort(col)
        below = np.searchsorted(order, col, side="left")
        above = n - np.searchsorted(order, col, side="right")
        contained[:, j] = (
            pairs - below * (below - 1) // 2 - above * (above - 1) // 2
        )
    frac = grid.mean_integrate(contained)
    return frac / pairs


def directional_outlyingness(curve_set: CurveSet) -> np.ndarray:
    """Pointwise signed outlyingness of each curve.

    At each grid point the cross-sectional median and the consistency-scaled
    MAD standardize the curve values; a degenerate (zero-MAD) column yields
    zero outlyingness for every curve.

    Returns
    -------
    numpy.ndarray
        Matrix of shape ``(n_curves, T)``.
    """
    if len(curve_set) < 2:
        raise TooFewCurvesError("directional outlyingness needs at least 2 curves")
    return _outlyingness_matrix(curve_set.values)


def _outlyingness_matrix(values: np.ndarray) -> np.ndarray:
    med = np.median(values, axis=0)
    dev = values - med
    mad = MAD_SCALE * np.median(np.abs(dev), axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(mad > 0.0, dev / mad, 0.0)
    return out


def mo_vo(curve_set: CurveSet) -> list[OutlyingnessPoint]:
    """Magnitude (MO) and shape (VO) outlyingness of each curve.

    MO is the domain average of the directional outlyingness; VO is the
    domain average of its squared deviation from MO.
    """
    mo, vo = _mo_vo_arrays(curve_set.values, curve_set.grid)
    return [OutlyingnessPoint(float(m), float(v)) for m, v in zip(mo, vo)]


def _mo_vo_arrays(values: np.ndarray, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    out = _outlyingness_matrix(values)
    mo = grid.mean_integrate(out)
    vo = grid.mean_integrate((out - mo[:, None]) ** 2)
    return mo, np.maximum(vo, 0.0)


def spatial_depth(points: np.ndarray, cloud: np.ndarray) -> np.ndarray:
    """Bivariate spatial depth of query `points` within `cloud`.

    Depth of x is ``1 - || mean over cloud of (x - p)/||x - p|| ||``;
    cloud points coinciding with x contribute a zero vector.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    cloud = np.atleast_2d(np.asarray(cloud, dtype=float))
    diff = points[:, None, :] - cloud[None, :, :]
    norms = np.linalg.norm(diff, axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = np.where(norms[:, :, None] > 0.0, diff / norms[:, :, None], 0.0)
    return 1.0 - np.linalg.norm(unit.mean(axis=1), axis=1)


def central_by_ms(curve_set: CurveSet, tau: float) -> CentralSelection:
    """Most central curves by spatial depth on the symmetrized MO/VO cloud.

    The cloud is the union of the (MO, VO) points and their reflections
    (MO, -VO); a curve's centrality is the spatial depth of its own point
    within that cloud.  The ``ceil(tau * n)`` deepest curves are returned,
    ties broken toward lower indices.
    """
    tau = _check_tau(tau)
    n = len(curve_set)
    if n < MS_MIN_CURVES:
        raise TooFewCurvesError(
            f"MS selection needs at least {MS_MIN_CURVES} curves (got {n}); "
            "use the conventional Ward fallback"
        )
    indices = _ms_central_indices(curve_set.values, curve_set.grid, tau)
    return CentralSelection(indices, tau)


def _ms_central_indices(
    values: np.ndarray, grid: Grid, tau: float
) -> tuple[int, ...]:
    mo, vo = _mo_vo_arrays(values, grid)
    pts = np.column_stack([mo, vo])
    cloud = np.vstack([pts, np.column_stack([mo, -vo])])
    depth = spatial_depth(pts, cloud)
    k = math.ceil(tau * len(values))
    order = np.lexsort((np.arange(len(values)), -depth))
    return tuple(sorted(int(i) for i in order[:k]))


def central_by_bd(curve_set: CurveSet, tau: float) -> CentralSelection:
    """Most central curves by modified band depth.

    Keeps every curve whose MBD reaches the empirical tau-quantile
    (linear interpolation between order statistics) of the depth values.
    """
    tau = _check_tau(tau)
    n = len(curve_set)
    if n < BD_MIN_CURVES:
        raise TooFewCurvesError(
            f"BD selection needs at least {BD_MIN_CURVES} curves (got {n}); "
            "use the conventional Ward fallback"
        )
    indices = _bd_central_indices(curve_set.values, curve_set.grid, tau)
    return CentralSelection(indices, tau)


def _bd_central_indices(
    values: np.ndarray, grid: Grid, tau: float
) -> tuple[int, ...]:
    depths = _mbd_matrix(values, grid)
    cutoff = np.quantile(depths, tau)
    return tuple(int(i) for i in np.flatnonzero(depths >= cutoff))
