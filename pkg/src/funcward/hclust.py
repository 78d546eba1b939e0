"""Agglomerative clustering engine with full distance recomputation.

Merging proceeds greedily on the smallest current inter-cluster distance;
after each merge the new cluster's distances to all survivors are computed
afresh with the chosen linkage (no Lance-Williams shortcut, since the
robust linkages are not expressible as centroid updates).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.cluster.hierarchy import fcluster
from scipy.cluster.hierarchy import linkage as _scipy_linkage

from .curves import CurveSet, check_shared_grid, merge_sets
from .linkage import LinkageKind, pair_distance

__all__ = [
    "MergeStep",
    "MergeHistory",
    "Partition",
    "agglomerate",
    "cut_history",
    "curve_labels",
    "ward_curve_baseline",
]


@dataclass(frozen=True)
class MergeStep:
    """One merge: the two cluster ids joined, the new id, and the distance."""

    step: int
    left: int
    right: int
    merged: int
    d2: float


@dataclass(frozen=True)
class MergeHistory:
    initial_ids: tuple[int, ...]
    steps: tuple[MergeStep, ...]

    def __post_init__(self):
        if len(self.steps) > len(self.initial_ids) - 1 and self.initial_ids:
            raise ValueError("more merges than initial clusters allow")


@dataclass(frozen=True)
class Partition:
    """Flat cluster labels (1..p) for the initial cluster ids."""

    labels: dict[int, int]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("partition must label at least one unit")
        found = sorted(set(self.labels.values()))
        if found != list(range(1, len(found) + 1)):
            raise ValueError("labels must be contiguous starting at 1")

    @property
    def n_clusters(self) -> int:
        return max(self.labels.values())

    def label_vector(self, ids: Sequence[int] | None = None) -> np.ndarray:
        """Labels as an array, by default in sorted initial-id order."""
        if ids is None:
            ids = sorted(self.labels)
        return np.array([self.labels[i] for i in ids], dtype=int)


def _labels_from_components(components: Sequence[set[int]]) -> Partition:
    # Deterministic label order: by smallest member id.
    ordered = sorted(components, key=min)
    labels: dict[int, int] = {}
    for lab, members in enumerate(ordered, start=1):
        for i in members:
            labels[i] = lab
    return Partition(labels)


def agglomerate(
    initial: Sequence[CurveSet],
    kind: LinkageKind,
    p: int | None = None,
) -> tuple[MergeHistory, Partition]:
    """Merge the initial clusters until `p` clusters remain (1 if omitted).

    Returns the merge record and the flat partition at the stopping point.
    Initial clusters are identified by their positions ``0..m-1``; the
    cluster created at merge step ``s`` gets id ``m + s``.  Ties on the
    minimal distance break toward the lexicographically first index pair
    in the current cluster ordering (merged clusters are appended last).
    """
    m = len(initial)
    if m < 1:
        raise ValueError("need at least one initial cluster")
    target = 1 if p is None else int(p)
    if not 1 <= target <= m:
        raise ValueError(f"target cluster count {target} not in [1, {m}]")
    for cs in initial[1:]:
        check_shared_grid(initial[0], cs)

    live_sets = list(initial)
    live_ids = list(range(m))
    members = [{i} for i in range(m)]
    steps: list[MergeStep] = []

    if len(live_sets) > target:
        dist = _full_matrix(live_sets, kind)

    while len(live_sets) > target:
        i, j = _argmin_pair(dist)
        merged = merge_sets(live_sets[i], live_sets[j])
        new_id = m + len(steps)
        steps.append(
            MergeStep(
                step=len(steps),
                left=live_ids[i],
                right=live_ids[j],
                merged=new_id,
                d2=float(dist[i, j]),
            )
        )
        new_members = members[i] | members[j]
        # Drop rows/columns j then i (j > i), append the merged cluster.
        dist = np.delete(np.delete(dist, (i, j), axis=0), (i, j), axis=1)
        for seq in (live_sets, live_ids, members):
            del seq[j], seq[i]
        new_row = np.array(
            [pair_distance(merged, cs, kind) for cs in live_sets]
        )
        dist = np.block(
            [[dist, new_row[:, None]], [new_row[None, :], np.zeros((1, 1))]]
        )
        live_sets.append(merged)
        live_ids.append(new_id)
        members.append(new_members)

    history = MergeHistory(tuple(range(m)), tuple(steps))
    return history, _labels_from_components(members)


def _full_matrix(clusters: Sequence[CurveSet], kind: LinkageKind) -> np.ndarray:
    m = len(clusters)
    dist = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            dist[i, j] = dist[j, i] = pair_distance(clusters[i], clusters[j], kind)
    return dist


def _argmin_pair(dist: np.ndarray) -> tuple[int, int]:
    iu = np.triu_indices(dist.shape[0], k=1)
    flat = np.argmin(dist[iu])  # first minimum = lexicographic tie-break
    return int(iu[0][flat]), int(iu[1][flat])


def cut_history(history: MergeHistory, p: int) -> Partition:
    """Partition obtained by stopping the recorded merge sequence at `p`.

    Equivalent to rerunning the agglomeration with target `p`, since the
    greedy merge order does not depend on the stopping point.
    """
    m = len(history.initial_ids)
    if not 1 <= p <= m:
        raise ValueError(f"cut level {p} not in [1, {m}]")
    needed = m - p
    if needed > len(history.steps):
        raise ValueError(
            f"history holds {len(history.steps)} merges; cutting at {p} needs {needed}"
        )
    components: dict[int, set[int]] = {i: {i} for i in history.initial_ids}
    for step in history.steps[:needed]:
        components[step.merged] = components.pop(step.left) | components.pop(step.right)
    return _labels_from_components(list(components.values()))


def curve_labels(
    initial: Sequence[CurveSet], partition: Partition
) -> dict[str, int]:
    """Expand a unit-level partition to per-curve labels by curve id."""
    out: dict[str, int] = {}
    for idx, cs in enumerate(initial):
        lab = partition.labels[idx]
        for curve in cs.curves:
            out[curve.id] = lab
    return out


def ward_curve_baseline(sets: Sequence[CurveSet], p: int) -> np.ndarray:
    """Conventional Ward clustering of the individual curves.

    The reference protocol against which the robust linkages are compared:
    every curve starts as its own cluster and the standard Ward criterion
    drives the merges, so contaminated curves are free to group by
    themselves.  Equivalent to ``agglomerate`` on singleton curve sets with
    the ``ward`` linkage (the Ward update rule makes the same merges),
    but scales to hundreds of curves.

    Returns one label per curve, in concatenation order, labeled 1..p by
    order of smallest member index.
    """
    for cs in sets[1:]:
        check_shared_grid(sets[0], cs)
    X = np.vstack([cs.values for cs in sets])
    if not 1 <= p <= X.shape[0]:
        raise ValueError(f"target cluster count {p} not in [1, {X.shape[0]}]")
    raw = fcluster(_scipy_linkage(X, method="ward"), t=p, criterion="maxclust")
    relabel: dict[int, int] = {}
    for lab in raw:  # first occurrence = smallest member index
        if lab not in relabel:
            relabel[lab] = len(relabel) + 1
    return np.array([relabel[lab] for lab in raw], dtype=int)
