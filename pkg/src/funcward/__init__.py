"""Robust band-based Ward linkages for functional data clustering.

The package clusters curves sampled on a shared grid with agglomerative
hierarchical clustering, where the inter-cluster distance is the increase
in size-weighted band width upon merging.  Two robust variants compute
band widths only over each cluster's most central curves, ranked either by
spatial depth on the magnitude/shape outlyingness plane (MS linkage) or by
modified band depth (BD linkage).
"""

from .curves import (
    Band,
    Curve,
    CurveSet,
    Grid,
    band,
    band_width,
    functional_mean,
    within_cluster_ss,
)
from .depth import (
    CentralSelection,
    OutlyingnessPoint,
    TooFewCurvesError,
    central_by_bd,
    central_by_ms,
    directional_outlyingness,
    mbd,
    mo_vo,
    spatial_depth,
)
from .hclust import (
    MergeHistory,
    MergeStep,
    Partition,
    agglomerate,
    curve_labels,
    cut_history,
    ward_curve_baseline,
)
from .linkage import (
    DEFAULT_TAU,
    DistanceMatrix,
    LinkageKind,
    bd_linkage,
    distance_matrix,
    functional_ward,
    ms_linkage,
    pair_distance,
    ward_classic,
)
from .metrics import ari, repeat_labels, sim
from .simgen import (
    Ar2Source,
    ArtifactSpec,
    ExperimentConfig,
    SimulatedCurves,
    SimulatedSeries,
    apply_artifact,
    ar2_coeffs,
    eeg_spectral_sets,
    generate_eeg_clusters,
    generate_model,
    simulate_ar2,
)
from .spectral import (
    RawPeriodogram,
    SpectralEstimate,
    TimeSeries,
    ar2_true_log_sdf,
    log_spectra_sets,
    periodogram,
    restrict_frequencies,
    smooth_log_periodogram,
    spectral_curve_set,
)

__version__ = "0.1.0"

__all__ = [
    "Band",
    "Curve",
    "CurveSet",
    "Grid",
    "band",
    "band_width",
    "functional_mean",
    "within_cluster_ss",
    "CentralSelection",
    "OutlyingnessPoint",
    "TooFewCurvesError",
    "central_by_bd",
    "central_by_ms",
    "directional_outlyingness",
    "mbd",
    "mo_vo",
    "spatial_depth",
    "MergeHistory",
    "MergeStep",
    "Partition",
    "agglomerate",
    "curve_labels",
    "cut_history",
    "ward_curve_baseline",
    "DEFAULT_TAU",
    "DistanceMatrix",
    "LinkageKind",
    "bd_linkage",
    "distance_matrix",
    "functional_ward",
    "ms_linkage",
    "pair_distance",
    "ward_classic",
    "ari",
    "repeat_labels",
    "sim",
    "Ar2Source",
    "ArtifactSpec",
    "ExperimentConfig",
    "SimulatedCurves",
    "SimulatedSeries",
    "apply_artifact",
    "ar2_coeffs",
    "eeg_spectral_sets",
    "generate_eeg_clusters",
    "generate_model",
    "simulate_ar2",
    "RawPeriodogram",
    "SpectralEstimate",
    "TimeSeries",
    "ar2_true_log_sdf",
    "log_spectra_sets",
    "periodogram",
    "restrict_frequencies",
    "smooth_log_periodogram",
    "spectral_curve_set",
]
