"""Sampled functional data: grids, curves, curve sets, and band statistics.

All curves live on a shared sampling grid.  Integrals over the domain are
approximated by the trapezoidal rule on that grid, which is exact for the
piecewise-linear interpolant of the integrand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Grid",
    "Curve",
    "CurveSet",
    "Band",
    "band",
    "band_width",
    "functional_mean",
    "within_cluster_ss",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Grid:
    """Strictly increasing time points on an interval.

    Parameters
    ----------
    points : array-like
        Time points ``t_1 < ... < t_T`` with ``T >= 2``.
    interval_length : float, optional
        Length of the domain interval.  Defaults to ``t_T - t_1``; stored
        explicitly so non-unit domains keep a meaningful normalization.
    """

    points: np.ndarray
    interval_length: float = None  # type: ignore[assignment]

    def __post_init__(self):
        pts = _readonly(np.atleast_1d(self.points))
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)
        length = self.interval_length
        if length is None:
            length = float(pts[-1] - pts[0])
        length = float(length)
        if length <= 0:
            raise ValueError("interval_length must be positive")
        object.__setattr__(self, "interval_length", length)

    @property
    def size(self) -> int:
        return self.points.size

    @cached_property
    def trapezoid_weights(self) -> np.ndarray:
        """Quadrature weights such that ``w @ f`` equals the trapezoid rule."""
        t = self.points
        w = np.empty_like(t)
        w[0] = (t[1] - t[0]) / 2.0
        w[-1] = (t[-1] - t[-2]) / 2.0
        w[1:-1] = (t[2:] - t[:-2]) / 2.0
        w.setflags(write=False)
        return w

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Trapezoidal integral of `values` (last axis aligned to the grid)."""
        return values @ self.trapezoid_weights

    def mean_integrate(self, values: np.ndarray) -> np.ndarray:
        """Integral divided by the interval length (domain average)."""
        return self.integrate(values) / self.interval_length

    @classmethod
    def uniform(cls, T: int, start: float = 0.0, stop: float = 1.0) -> "Grid":
        return cls(np.linspace(start, stop, T))


@dataclass(frozen=True)
class Curve:
    """A single functional observation sampled on a grid."""

    id: str
    values: np.ndarray

    def __post_init__(self):
        vals = _readonly(np.atleast_1d(self.values))
        if vals.ndim != 1:
            raise ValueError("curve values must be one-dimensional")
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"curve {self.id!r} has non-finite values")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class CurveSet:
    """An ordered collection of curves on a shared grid."""

    grid: Grid
    curves: tuple[Curve, ...]

    def __post_init__(self):
        curves = tuple(self.curves)
        if not curves:
            raise ValueError("curve set must contain at least one curve")
        T = self.grid.size
        for c in curves:
            if c.values.size != T:
                raise ValueError(
                    f"curve {c.id!r} has {c.values.size} samples, grid has {T}"
                )
        ids = [c.id for c in curves]
        if len(set(ids)) != len(ids):
            raise ValueError("curve ids must be unique within a set")
        object.__setattr__(self, "curves", curves)

    def __len__(self) -> int:
        return len(self.curves)

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.curves]

    @cached_property
    def values(self) -> np.ndarray:
        """Stacked (n_curves, T) value matrix."""
        out = np.vstack([c.values for c in self.curves])
        out.setflags(write=False)
        return out

    def subset(self, indices: Sequence[int]) -> "CurveSet":
        return CurveSet(self.grid, tuple(self.curves[i] for i in indices))

    @classmethod
    def from_matrix(
        cls, grid: Grid, values: np.ndarray, ids: Iterable[str] | None = None
    ) -> "CurveSet":
        values = np.atleast_2d(np.asarray(values, dtype=float))
        if ids is None:
            ids = [str(i) for i in range(values.shape[0])]
        return cls(grid, tuple(Curve(i, row) for i, row in zip(ids, values)))


def merge_sets(a: CurveSet, b: CurveSet) -> CurveSet:
    """Concatenate two curve sets on the same grid."""
    check_shared_grid(a, b)
    return CurveSet(a.grid, a.curves + b.curves)


def check_shared_grid(a: CurveSet, b: CurveSet) -> None:
    if a.grid.size != b.grid.size or not np.array_equal(a.grid.points, b.grid.points):
        raise ValueError("curve sets are sampled on different grids")


@dataclass(frozen=True)
class Band:
    """Pointwise lower/upper envelope of a set of curves."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = _readonly(np.atleast_1d(self.lower))
        up = _readonly(np.atleast_1d(self.upper))
        if lo.shape != up.shape or lo.ndim != 1:
            raise ValueError("band envelopes must be 1-d arrays of equal length")
        if np.any(lo > up):
            raise ValueError("band lower envelope exceeds upper envelope")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)


def band(curve_set: CurveSet) -> Band:
    """Envelope band of a curve set: pointwise min and max over curves."""
    values = curve_set.values
    return Band(values.min(axis=0), values.max(axis=0))


def band_width(b: Band, grid: Grid) -> float:
    """Average width of a band: its area divided by the interval length."""
    if b.lower.size != grid.size:
        raise ValueError("band length does not match grid")
    return float(grid.mean_integrate(b.upper - b.lower))


def functional_mean(curve_set: CurveSet) -> Curve:
    """Pointwise mean curve of a set."""
    return Curve("mean", curve_set.values.mean(axis=0))


def within_cluster_ss(clusters: Sequence[CurveSet]) -> float:
    """Total within-cluster sum of squares of a partition of curve sets.

    Each cluster contributes the sum over its curves of the domain-averaged
    squared deviation from the cluster's pointwise mean.
    """
    if not clusters:
        raise ValueError("partition must contain at least one cluster")
    total = 0.0
    for cs in clusters:
        dev = cs.values - cs.values.mean(axis=0)
        total += float(cs.grid.mean_integrate(dev**2).sum())
    return total
