"""Seeded generators for the two simulation experiments.

Experiment 1 draws four groups of trending curves with optional outlier
contamination (magnitude shifts, shape bumps, or a rough covariance swap).
Experiment 2 synthesizes EEG-like series as square-root-weighted mixtures
of latent AR(2) sources, optionally contaminated with eye-blink or
eye-movement artifacts.

Every draw comes from a substream derived deterministically from the seed
and the (cluster, curve) position, so replays are bit-identical and any
curve can be regenerated in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import lfilter
from scipy.stats import gamma as gamma_dist

from .curves import Curve, CurveSet, Grid
from .spectral import (
    TimeSeries,
    assert_stationary_ar2,
    restrict_frequencies,
    spectral_curve_set,
)

__all__ = [
    "ExperimentConfig",
    "Ar2Source",
    "ArtifactSpec",
    "SimulatedCurves",
    "SimulatedSeries",
    "DEFAULT_SOURCES",
    "CLUSTER_WEIGHTS",
    "EEG_SAMPLING_RATE",
    "generate_model",
    "gp_covariance_root",
    "ar2_coeffs",
    "simulate_ar2",
    "generate_eeg_clusters",
    "apply_artifact",
    "eeg_spectral_sets",
]

EEG_SAMPLING_RATE = 1000.0

# Top of the gamma band; spectral clustering curves stop here by default.
EEG_MAX_FREQUENCY = 50.0

# Default artifact shapes (time units are seconds).
BLINK_SHAPE_RISE = 4.0
BLINK_SCALE_RISE = 0.015
BLINK_SHAPE_FALL = 8.0
BLINK_SCALE_FALL = 0.02
BLINK_AMPLITUDE_SDS = 6.0
MOVEMENT_WIDTH = 0.4
MOVEMENT_AMPLITUDE_SDS = 4.0

_AR_BURN_IN = 500

# Substream tags keeping experiment-1 and experiment-2 draws disjoint.
_EXP2_TAG = 20


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared layout of both experiments: m initial clusters of equal size
    drawn from p_true ground-truth groups, with per-curve contamination
    probability c."""

    m: int = 20
    curves_per_cluster: int = 30
    p_true: int = 4
    c: float = 0.0
    T: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.curves_per_cluster < 1:
            raise ValueError("cluster counts must be positive")
        if self.p_true < 1 or self.m % self.p_true != 0:
            raise ValueError("m must be a positive multiple of p_true")
        if not 0.0 <= self.c < 1.0:
            raise ValueError("contamination rate must lie in [0, 1)")
        if self.T < 2:
            raise ValueError("grid needs at least 2 points")

    def true_label(self, cluster_index: int) -> int:
        return cluster_index // (self.m // self.p_true) + 1


@dataclass(frozen=True)
class Ar2Source:
    """A stationary AR(2) latent source with a named frequency band."""

    phi1: float
    phi2: float
    sigma2: float = 1.0
    band: str = ""

    def __post_init__(self):
        assert_stationary_ar2(self.phi1, self.phi2)
        if self.sigma2 <= 0:
            raise ValueError("innovation variance must be positive")


# The five latent sources, one per clinical EEG band, using the literal
# coefficient pairs of the reference design.
DEFAULT_SOURCES = (
    Ar2Source(0.8, 0.1, band="delta"),
    Ar2Source(0.9, -0.9, band="theta"),
    Ar2Source(-0.1, -0.9, band="alpha"),
    Ar2Source(-0.9, -0.9, band="beta"),
    Ar2Source(-0.8, -0.1, band="gamma"),
)

# Mixture weights of the four ground-truth EEG clusters over the sources.
CLUSTER_WEIGHTS = (
    (4 / 5, 1 / 10, 0.0, 0.0, 0.0),
    (3 / 5, 0.0, 1 / 10, 0.0, 0.0),
    (2 / 5, 0.0, 0.0, 1 / 10, 0.0),
    (1 / 5, 0.0, 0.0, 0.0, 1 / 10),
)


@dataclass(frozen=True)
class ArtifactSpec:
    """One additive artifact: a biphasic blink wave or a wide bump.

    `onset` is the blink start (or bump center) in seconds from the start
    of the series; amplitude 0 is a no-op.
    """

    kind: str
    amplitude: float
    onset: float
    blink_shapes: tuple[float, float, float, float] = (
        BLINK_SHAPE_RISE,
        BLINK_SCALE_RISE,
        BLINK_SHAPE_FALL,
        BLINK_SCALE_FALL,
    )
    movement_width: float = MOVEMENT_WIDTH

    def __post_init__(self):
        if self.kind not in ("eye_blink", "eye_movement"):
            raise ValueError(f"unknown artifact kind {self.kind!r}")
        if self.amplitude < 0:
            raise ValueError("artifact amplitude must be non-negative")
        if self.movement_width <= 0:
            raise ValueError("movement width must be positive")


@dataclass(frozen=True)
class SimulatedCurves:
    """Experiment-1 output: initial clusters, their ground-truth labels,
    and per-curve contamination flags keyed by curve id."""

    sets: tuple[CurveSet, ...]
    true_labels: tuple[int, ...]
    contaminated: dict[str, bool]

    @property
    def grid(self) -> Grid:
        return self.sets[0].grid


@dataclass(frozen=True)
class SimulatedSeries:
    """Experiment-2 output: groups of series with labels and flags."""

    groups: tuple[tuple[TimeSeries, ...], ...]
    ids: tuple[tuple[str, ...], ...]
    true_labels: tuple[int, ...]
    contaminated: dict[str, bool]


def _curve_rng(seed: int, tag: int, cluster: int, curve: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, tag, cluster, curve]))


def gp_covariance_root(cov: np.ndarray) -> np.ndarray:
    """Symmetric square root of a covariance matrix.

    Uses the eigendecomposition with negative eigenvalues clipped at zero,
    which tolerates the numerically near-singular covariances of very
    smooth processes.
    """
    w, v = np.linalg.eigh(np.asarray(cov, dtype=float))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def _shape_bump(t: np.ndarray) -> np.ndarray:
    return 30.0 * t**1.5 * (1.0 - t)


def generate_model(model: int, cfg: ExperimentConfig) -> SimulatedCurves:
    """Draw the experiment-1 layout for outlier model 1, 2, or 3.

    Every curve follows the trend ``k + 2kt`` of its ground-truth group k
    plus a Gaussian process with covariance ``exp(-|s-t|)``.  With
    probability ``cfg.c`` a curve is contaminated:

    * model 1 adds a level shift of ±8,
    * model 2 adds ``±30 t^1.5 (1-t)``,
    * model 3 swaps the noise for a Gaussian process with covariance
      ``8 exp(-|s-t|^0.2)`` (same trend, different roughness).
    """
    if model not in (1, 2, 3):
        raise ValueError(f"unknown outlier model {model}")
    grid = Grid.uniform(cfg.T)
    t = grid.points
    lags = np.abs(np.subtract.outer(t, t))
    root_base = gp_covariance_root(np.exp(-lags))
    root_rough = gp_covariance_root(8.0 * np.exp(-(lags**0.2))) if model == 3 else None

    sets = []
    labels = []
    contaminated: dict[str, bool] = {}
    for i in range(cfg.m):
        k = cfg.true_label(i)
        trend = k + 2.0 * k * t
        curves = []
        for j in range(cfg.curves_per_cluster):
            rng = _curve_rng(cfg.seed, model, i, j)
            is_contaminated = bool(rng.uniform() < cfg.c)
            z = rng.standard_normal(cfg.T)
            if model == 3 and is_contaminated:
                y = trend + root_rough @ z
            else:
                y = trend + root_base @ z
                if is_contaminated:
                    u = rng.choice((-1.0, 1.0))
                    y = y + (8.0 * u if model == 1 else u * _shape_bump(t))
            cid = f"{i:02d}-{j:02d}"
            contaminated[cid] = is_contaminated
            curves.append(Curve(cid, y))
        sets.append(CurveSet(grid, tuple(curves)))
        labels.append(k)
    return SimulatedCurves(tuple(sets), tuple(labels), contaminated)


def ar2_coeffs(omega0: float, M: float, F: float) -> tuple[float, float]:
    """AR(2) coefficients with spectral peak near `omega0` Hz.

    ``phi1 = 2 cos(2π omega0 / F) / M`` and ``phi2 = -1 / M²``; the peak
    sharpens as M decreases toward 1.  Requires ``M > 1`` so the roots of
    the characteristic polynomial stay outside the unit circle.
    """
    if M <= 1.0:
        raise ValueError("M must exceed 1 for a causal process")
    if not 0.0 <= omega0 < F / 2.0:
        raise ValueError("peak frequency must lie in [0, F/2)")
    return 2.0 * np.cos(2.0 * np.pi * omega0 / F) / M, -1.0 / M**2


def simulate_ar2(
    src: Ar2Source,
    n_t: int,
    seed,
    sampling_rate: float = EEG_SAMPLING_RATE,
    burn_in: int = _AR_BURN_IN,
) -> TimeSeries:
    """Simulate an AR(2) series with Gaussian innovations.

    The recursion is started from zeros and the first `burn_in` samples
    are discarded.  `seed` may be an int, a SeedSequence, or a Generator.
    """
    rng = np.random.default_rng(seed)
    innovations = np.sqrt(src.sigma2) * rng.standard_normal(n_t + burn_in)
    y = lfilter([1.0], [1.0, -src.phi1, -src.phi2], innovations)
    return TimeSeries(y[burn_in:], sampling_rate)


def _mixture_signal(
    rng: np.random.Generator,
    weights: Sequence[float],
    sources: Sequence[Ar2Source],
    n_t: int,
) -> np.ndarray:
    signal = np.zeros(n_t)
    for w, src in zip(weights, sources):
        if w == 0.0:
            continue
        innovations = np.sqrt(src.sigma2) * rng.standard_normal(n_t + _AR_BURN_IN)
        x = lfilter([1.0], [1.0, -src.phi1, -src.phi2], innovations)[_AR_BURN_IN:]
        signal += np.sqrt(w) * x
    return signal


def generate_eeg_clusters(
    cfg: ExperimentConfig,
    sources: Sequence[Ar2Source] = DEFAULT_SOURCES,
    n_t: int = 1000,
    sampling_rate: float = EEG_SAMPLING_RATE,
    artifact: str | None = None,
) -> SimulatedSeries:
    """Draw the experiment-2 layout of AR(2)-mixture EEG series.

    Each series in ground-truth group k is a sum of independent source
    realizations scaled by the square roots of the group's mixture
    weights, so its spectral density is the intended weighted mixture of
    the source densities.  With probability ``cfg.c`` a series receives
    one artifact of the given kind ("eye_blink" or "eye_movement") at a
    uniform random onset; amplitudes scale with the series' standard
    deviation.
    """
    if len(sources) != len(CLUSTER_WEIGHTS[0]):
        raise ValueError(f"expected {len(CLUSTER_WEIGHTS[0])} sources")
    if artifact is not None and artifact not in ("eye_blink", "eye_movement"):
        raise ValueError(f"unknown artifact kind {artifact!r}")
    duration = n_t / sampling_rate
    groups = []
    group_ids = []
    labels = []
    contaminated: dict[str, bool] = {}
    for i in range(cfg.m):
        k = cfg.true_label(i)
        weights = CLUSTER_WEIGHTS[(k - 1) % len(CLUSTER_WEIGHTS)]
        series_list = []
        id_list = []
        for j in range(cfg.curves_per_cluster):
            rng = _curve_rng(cfg.seed, _EXP2_TAG, i, j)
            is_contaminated = bool(rng.uniform() < cfg.c)
            signal = _mixture_signal(rng, weights, sources, n_t)
            ts = TimeSeries(signal, sampling_rate)
            if is_contaminated and artifact is not None:
                ts = apply_artifact(ts, _random_artifact(rng, artifact, ts, duration))
            sid = f"{i:02d}-{j:02d}"
            contaminated[sid] = is_contaminated
            series_list.append(ts)
            id_list.append(sid)
        groups.append(tuple(series_list))
        group_ids.append(tuple(id_list))
        labels.append(k)
    return SimulatedSeries(
        tuple(groups), tuple(group_ids), tuple(labels), contaminated
    )


def _random_artifact(
    rng: np.random.Generator, kind: str, ts: TimeSeries, duration: float
) -> ArtifactSpec:
    sd = float(np.std(ts.values))
    if kind == "eye_blink":
        onset = rng.uniform(0.0, max(duration - 0.5, 0.0))
        return ArtifactSpec(kind, BLINK_AMPLITUDE_SDS * sd, onset)
    center = rng.uniform(0.25 * duration, 0.75 * duration)
    return ArtifactSpec(kind, MOVEMENT_AMPLITUDE_SDS * sd, center)


def apply_artifact(x: TimeSeries, spec: ArtifactSpec) -> TimeSeries:
    """Add one artifact waveform to a series.

    Eye blinks are a difference of two gamma densities normalized to unit
    peak before scaling; eye movements are a Gaussian bump of the given
    width.  The onset (or center) must fall inside the series.
    """
    t = np.arange(len(x)) / x.sampling_rate
    if not t[0] <= spec.onset <= t[-1]:
        raise ValueError(
            f"artifact onset {spec.onset} s falls outside the series [0, {t[-1]:.3f}] s"
        )
    if spec.kind == "eye_blink":
        s = t - spec.onset
        k1, th1, k2, th2 = spec.blink_shapes
        wave = gamma_dist.pdf(s, k1, scale=th1) - gamma_dist.pdf(s, k2, scale=th2)
        peak = np.abs(wave).max()
        if peak > 0:
            wave = wave / peak
    else:
        wave = np.exp(-((t - spec.onset) ** 2) / (2.0 * spec.movement_width**2))
    return TimeSeries(x.values + spec.amplitude * wave, x.sampling_rate)


def eeg_spectral_sets(
    sim: SimulatedSeries, max_frequency: float | None = EEG_MAX_FREQUENCY
) -> list[CurveSet]:
    """Smoothed log-periodogram curve sets of the experiment-2 groups.

    By default the curves are restricted to the clinically relevant EEG
    range (up to the top of the gamma band); pass ``max_frequency=None``
    to keep the full Fourier range.
    """
    sets = [
        spectral_curve_set(list(series), list(ids))
        for series, ids in zip(sim.groups, sim.ids)
    ]
    if max_frequency is not None:
        sets = [restrict_frequencies(cs, max_frequency) for cs in sets]
    return sets
