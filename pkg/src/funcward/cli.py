"""Command-line surface: generate, cluster, evaluate, and reproduce.

File formats
------------
curves.csv / spectra.csv   header ``id,cluster,v1..vT``; one curve per row
grid.json / spectra_grid.json   ``{"points": [...], "interval_length": x}``
truth.csv / labels.csv     header ``cluster,label``; one initial cluster per row
contamination.csv          header ``id,contaminated`` with 0/1 flags
merges.json                ``{"initial": [...], "steps": [{step,left,right,new,d2}]}``

Floats are written with ``repr`` (shortest round-trip), so re-reading a
file reproduces the in-memory values bit-exactly and equal-seed runs are
byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import click
import numpy as np

from .curves import Curve, CurveSet, Grid, within_cluster_ss
from .hclust import MergeHistory, agglomerate, cut_history, ward_curve_baseline
from .linkage import DEFAULT_TAU, LINKAGE_METHODS, LinkageKind, distance_matrix
from .metrics import ari, repeat_labels, sim
from .simgen import (
    ExperimentConfig,
    eeg_spectral_sets,
    generate_eeg_clusters,
    generate_model,
)
from .spectral import log_spectra_sets

EXPERIMENTS = (
    "exp1-model1",
    "exp1-model2",
    "exp1-model3",
    "exp2-blink",
    "exp2-movement",
)

# Published mean scores for side-by-side display in reproduction reports
# (never asserted): (experiment, measure, c) -> (ms, bd, ward).
PAPER_REFERENCE = {
    ("exp1-model1", "sim", 0.1): (0.95, 0.98, 0.70),
    ("exp1-model1", "sim", 0.15): (0.90, 0.97, 0.65),
    ("exp1-model1", "sim", 0.2): (0.82, 0.90, 0.62),
    ("exp1-model2", "sim", 0.1): (0.98, 0.98, 0.79),
    ("exp1-model2", "sim", 0.15): (0.97, 0.96, 0.69),
    ("exp1-model2", "sim", 0.2): (0.97, 0.90, 0.65),
    ("exp1-model3", "sim", 0.1): (0.82, 0.86, 0.77),
    ("exp1-model3", "sim", 0.15): (0.81, 0.82, 0.72),
    ("exp1-model3", "sim", 0.2): (0.81, 0.78, 0.68),
    ("exp1-model1", "ari", 0.1): (0.89, 0.94, 0.43),
    ("exp1-model1", "ari", 0.15): (0.81, 0.93, 0.33),
    ("exp1-model1", "ari", 0.2): (0.67, 0.77, 0.26),
    ("exp1-model2", "ari", 0.1): (0.96, 0.96, 0.79),
    ("exp1-model2", "ari", 0.15): (0.94, 0.92, 0.40),
    ("exp1-model2", "ari", 0.2): (0.95, 0.77, 0.31),
    ("exp1-model3", "ari", 0.1): (0.64, 0.70, 0.55),
    ("exp1-model3", "ari", 0.15): (0.64, 0.63, 0.45),
    ("exp1-model3", "ari", 0.2): (0.64, 0.58, 0.39),
    ("exp2-blink", "sim", 0.1): (0.92, 0.92, 0.91),
    ("exp2-blink", "sim", 0.15): (0.94, 0.85, 0.84),
    ("exp2-blink", "sim", 0.2): (0.90, 0.86, 0.81),
    ("exp2-movement", "sim", 0.1): (0.94, 0.92, 0.91),
    ("exp2-movement", "sim", 0.15): (0.94, 0.89, 0.85),
    ("exp2-movement", "sim", 0.2): (0.93, 0.87, 0.82),
    ("exp2-blink", "ari", 0.1): (0.88, 0.83, 0.82),
    ("exp2-blink", "ari", 0.15): (0.88, 0.71, 0.70),
    ("exp2-blink", "ari", 0.2): (0.81, 0.70, 0.63),
    ("exp2-movement", "ari", 0.1): (0.88, 0.84, 0.85),
    ("exp2-movement", "ari", 0.15): (0.87, 0.76, 0.71),
    ("exp2-movement", "ari", 0.2): (0.87, 0.73, 0.67),
}


# ---------------------------------------------------------------------------
# File helpers


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_grid_json(path: Path, grid: Grid) -> None:
    payload = {
        "points": [float(p) for p in grid.points],
        "interval_length": float(grid.interval_length),
    }
    path.write_text(json.dumps(payload, sort_keys=True) + "\n")


def _read_grid_json(path: Path) -> Grid:
    payload = json.loads(path.read_text())
    return Grid(np.array(payload["points"]), payload["interval_length"])


def _write_curves_csv(path: Path, sets, cluster_ids) -> None:
    T = sets[0].grid.size
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "cluster"] + [f"v{j + 1}" for j in range(T)])
        for cid, cs in zip(cluster_ids, sets):
            for curve in cs.curves:
                writer.writerow([curve.id, cid] + [_fmt(v) for v in curve.values])


def _read_curves_csv(path: Path, grid: Grid) -> tuple[list[CurveSet], list[str]]:
    by_cluster: dict[str, list[Curve]] = {}
    order: list[str] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[:2] != ["id", "cluster"]:
            raise ValueError(f"{path}: expected header starting with id,cluster")
        for row in reader:
            cid = row[1]
            if cid not in by_cluster:
                by_cluster[cid] = []
                order.append(cid)
            by_cluster[cid].append(
                Curve(row[0], np.array([float(v) for v in row[2:]]))
            )
    if not order:
        raise ValueError(f"{path}: no curves found")
    sets = [CurveSet(grid, tuple(by_cluster[cid])) for cid in order]
    return sets, order


def _write_labels_csv(path: Path, labels: dict[str, int]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["unit", "label"])
        for cid, lab in labels.items():
            writer.writerow([cid, lab])


def _read_labels_csv(path: Path) -> dict[str, int]:
    out: dict[str, int] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header != ["unit", "label"]:
            raise ValueError(f"{path}: expected header unit,label")
        for row in reader:
            out[row[0]] = int(row[1])
    if not out:
        raise ValueError(f"{path}: no labels found")
    return out


def _write_flags_csv(path: Path, flags: dict[str, bool]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "contaminated"])
        for cid, flag in flags.items():
            writer.writerow([cid, int(flag)])


def _write_merges_json(path: Path, history: MergeHistory) -> None:
    payload = {
        "initial": list(history.initial_ids),
        "steps": [
            {
                "step": s.step,
                "left": s.left,
                "right": s.right,
                "new": s.merged,
                "d2": float(s.d2),
            }
            for s in history.steps
        ],
    }
    path.write_text(json.dumps(payload, sort_keys=True) + "\n")


def _write_config_json(path: Path, config: dict) -> None:
    path.write_text(json.dumps(config, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Dataset generation shared by `simulate` and `reproduce`


def _generate_dataset(experiment: str, cfg: ExperimentConfig, n_t: int):
    """Returns (time_sets, cluster_ids, flags, spectral_sets_or_None)."""
    if experiment.startswith("exp1"):
        model = int(experiment[-1])
        sim_data = generate_model(model, cfg)
        cluster_ids = [f"{i:02d}" for i in range(cfg.m)]
        spectra = None
        if model == 3:
            rate = (cfg.T - 1) / sim_data.grid.interval_length
            spectra = log_spectra_sets(sim_data.sets, rate)
        return list(sim_data.sets), cluster_ids, sim_data.contaminated, spectra
    artifact = "eye_blink" if experiment == "exp2-blink" else "eye_movement"
    sim_data = generate_eeg_clusters(cfg, n_t=n_t, artifact=artifact)
    cluster_ids = [f"{i:02d}" for i in range(cfg.m)]
    rate = sim_data.groups[0][0].sampling_rate
    time_grid = Grid(np.arange(n_t) / rate, n_t / rate)
    time_sets = [
        CurveSet(
            time_grid,
            tuple(Curve(sid, ts.values) for sid, ts in zip(ids, series)),
        )
        for ids, series in zip(sim_data.ids, sim_data.groups)
    ]
    spectra = eeg_spectral_sets(sim_data)
    return time_sets, cluster_ids, sim_data.contaminated, spectra


def _truth_labels(cfg: ExperimentConfig) -> dict[str, int]:
    return {f"{i:02d}": cfg.true_label(i) for i in range(cfg.m)}


# ---------------------------------------------------------------------------
# Commands


@click.group()
def main():
    """Robust functional Ward linkages: simulate, cluster, evaluate."""


@main.command()
@click.option("--experiment", type=click.Choice(EXPERIMENTS), default=None)
@click.option("--model", type=click.IntRange(1, 3), default=None,
              help="Shorthand for exp1-modelN.")
@click.option("--c", type=click.FloatRange(0.0, 1.0, max_open=True), default=0.0,
              help="Per-curve contamination probability.")
@click.option("--seed", type=int, required=True)
@click.option("--m", type=int, default=20, help="Number of initial clusters.")
@click.option("--curves-per-cluster", type=int, default=30)
@click.option("--p-true", type=int, default=4)
@click.option("--grid-size", type=int, default=200, help="Grid size T (experiment 1).")
@click.option("--n-t", type=int, default=1000, help="Series length (experiment 2).")
@click.option("--out", type=click.Path(path_type=Path), envvar="FUNCWARD_OUT",
              required=True)
def simulate(experiment, model, c, seed, m, curves_per_cluster, p_true,
             grid_size, n_t, out):
    """Generate a simulated dataset and write it as CSV/JSON files."""
    if (experiment is None) == (model is None):
        raise click.UsageError("give exactly one of --experiment or --model")
    if model is not None:
        experiment = f"exp1-model{model}"
    try:
        cfg = ExperimentConfig(m, curves_per_cluster, p_true, c, grid_size, seed)
        time_sets, cluster_ids, flags, spectra = _generate_dataset(
            experiment, cfg, n_t
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    out.mkdir(parents=True, exist_ok=True)
    _write_config_json(
        out / "config.json",
        {
            "command": "simulate",
            "experiment": experiment,
            "c": c,
            "seed": seed,
            "m": m,
            "curves_per_cluster": curves_per_cluster,
            "p_true": p_true,
            "grid_size": grid_size,
            "n_t": n_t,
        },
    )
    _write_curves_csv(out / "curves.csv", time_sets, cluster_ids)
    _write_grid_json(out / "grid.json", time_sets[0].grid)
    _write_labels_csv(out / "truth.csv", _truth_labels(cfg))
    _write_flags_csv(out / "contamination.csv", flags)
    if spectra is not None:
        _write_curves_csv(out / "spectra.csv", spectra, cluster_ids)
        _write_grid_json(out / "spectra_grid.json", spectra[0].grid)
    click.echo(f"wrote {sum(len(s) for s in time_sets)} curves to {out}")


@main.command()
@click.option("--data", type=click.Path(exists=True, file_okay=False, path_type=Path),
              required=True, help="Directory written by `simulate`.")
@click.option("--linkage", "method", type=click.Choice(LINKAGE_METHODS), required=True)
@click.option("--tau", type=float, default=None,
              help=f"Quantile level for ms/bd (default {DEFAULT_TAU}).")
@click.option("--p", type=int, default=None, help="Target number of clusters.")
@click.option("--scree", is_flag=True, help="Emit a WSS scree table instead of labels.")
@click.option("--pmax", type=int, default=12, help="Largest cut in scree mode.")
@click.option("--spectra", "use_spectra", is_flag=True,
              help="Cluster spectra.csv instead of curves.csv.")
@click.option("--save-distance", is_flag=True,
              help="Also write the initial distance matrix.")
@click.option("--out", type=click.Path(path_type=Path), envvar="FUNCWARD_OUT",
              required=True)
def cluster(data, method, tau, p, scree, pmax, use_spectra, save_distance, out):
    """Agglomeratively cluster a simulated dataset."""
    if (p is None) == (not scree):
        raise click.UsageError("give exactly one of --p or --scree")
    if method not in ("ms", "bd") and tau is not None:
        raise click.UsageError(f"--tau does not apply to linkage {method!r}")
    stem = "spectra" if use_spectra else "curves"
    grid_name = "spectra_grid.json" if use_spectra else "grid.json"
    try:
        grid = _read_grid_json(data / grid_name)
        sets, cluster_ids = _read_curves_csv(data / f"{stem}.csv", grid)
        kind = LinkageKind(method, tau)
        out.mkdir(parents=True, exist_ok=True)
        if save_distance:
            dm = distance_matrix(sets, kind)
            _write_distance_csv(out / "distance.csv", dm.values, cluster_ids)
        history, partition = agglomerate(sets, kind, None if scree else p)
        _write_merges_json(out / "merges.json", history)
        if scree:
            if not 1 <= pmax <= len(sets):
                raise ValueError(f"--pmax must lie in [1, {len(sets)}]")
            _write_scree_csv(out / "scree.csv", history, sets, pmax)
        else:
            labels = {
                cid: int(lab)
                for cid, lab in zip(cluster_ids, partition.label_vector())
            }
            _write_labels_csv(out / "labels.csv", labels)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"clustered {len(sets)} units with {method} -> {out}")


def _write_distance_csv(path: Path, values: np.ndarray, cluster_ids) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cluster"] + list(cluster_ids))
        for cid, row in zip(cluster_ids, values):
            writer.writerow([cid] + [_fmt(v) for v in row])


def _write_scree_csv(path: Path, history, sets, pmax: int) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p", "wss"])
        for p in range(1, pmax + 1):
            partition = cut_history(history, p)
            merged = _partition_sets(sets, partition.label_vector())
            writer.writerow([p, _fmt(within_cluster_ss(merged))])


def _partition_sets(sets, labels) -> list[CurveSet]:
    grouped: dict[int, list] = {}
    for cs, lab in zip(sets, labels):
        grouped.setdefault(int(lab), []).extend(cs.curves)
    return [CurveSet(sets[0].grid, tuple(curves))
            for _, curves in sorted(grouped.items())]


@main.command()
@click.option("--truth", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None)
@click.option("--pred", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None)
@click.option("--batch", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="Directory of replicate subdirectories.")
@click.option("--truth-name", default="truth.csv", show_default=True)
@click.option("--pred-name", default="labels.csv", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), envvar="FUNCWARD_OUT",
              required=True)
def evaluate(truth, pred, batch, truth_name, pred_name, out):
    """Score predicted labels against ground truth (ARI and SIM)."""
    if batch is None and (truth is None or pred is None):
        raise click.UsageError("give --truth and --pred, or --batch")
    if batch is not None and (truth is not None or pred is not None):
        raise click.UsageError("--batch excludes --truth/--pred")
    try:
        if batch is None:
            pairs = [("single", truth, pred)]
        else:
            reps = sorted(d for d in batch.iterdir() if d.is_dir())
            pairs = [(d.name, d / truth_name, d / pred_name) for d in reps]
            if not pairs:
                raise ValueError(f"{batch}: no replicate subdirectories")
        rows = []
        for name, tpath, ppath in pairs:
            t = _read_labels_csv(tpath)
            q = _read_labels_csv(ppath)
            if sorted(t) != sorted(q):
                raise ValueError(
                    f"{tpath} and {ppath} label different units"
                )
            ids = sorted(t)
            rows.append(
                (name,
                 ari([t[i] for i in ids], [q[i] for i in ids]),
                 sim([t[i] for i in ids], [q[i] for i in ids]))
            )
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["replicate", "ari", "sim"])
            for name, a, s in rows:
                writer.writerow([name, f"{a:.4g}", f"{s:.4g}"])
            writer.writerow([
                "mean",
                f"{np.mean([r[1] for r in rows]):.4g}",
                f"{np.mean([r[2] for r in rows]):.4g}",
            ])
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote metrics for {len(rows)} replicate(s) to {out}")


@main.command()
@click.option("--experiment", type=click.Choice(EXPERIMENTS), required=True)
@click.option("--c", type=click.FloatRange(0.0, 1.0, max_open=True), default=0.1,
              show_default=True)
@click.option("--reps", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--tau", type=float, default=DEFAULT_TAU, show_default=True)
@click.option("--m", type=int, default=20)
@click.option("--curves-per-cluster", type=int, default=30)
@click.option("--p-true", type=int, default=4)
@click.option("--grid-size", type=int, default=200)
@click.option("--n-t", type=int, default=1000)
@click.option("--out", type=click.Path(path_type=Path), envvar="FUNCWARD_OUT",
              required=True)
def reproduce(experiment, c, reps, seed, tau, m, curves_per_cluster, p_true,
              grid_size, n_t, out):
    """Run the full pipeline over replicate seeds and report mean scores.

    The ms, bd, and fward columns cluster the initial groups with the
    band-width linkages; the ward column is the conventional reference
    protocol, Ward's hierarchical clustering of the individual curves.
    All scores are computed at curve level.
    """
    unit_linkages = [
        ("ms", LinkageKind("ms", tau)),
        ("bd", LinkageKind("bd", tau)),
        ("fward", LinkageKind("fward")),
    ]
    try:
        out.mkdir(parents=True, exist_ok=True)
        scores = {name: {"ari": [], "sim": []}
                  for name in ("ms", "bd", "ward", "fward")}
        run_rows = []
        for r in range(reps):
            cfg = ExperimentConfig(
                m, curves_per_cluster, p_true, c, grid_size, seed + r
            )
            time_sets, cluster_ids, flags, spectra = _generate_dataset(
                experiment, cfg, n_t
            )
            cluster_input = spectra if spectra is not None else time_sets
            truth = _truth_labels(cfg)
            truth_units = [truth[cid] for cid in cluster_ids]
            truth_curves = repeat_labels(truth_units, [len(s) for s in cluster_input])
            rep_dir = out / "reps" / f"rep{r:03d}"
            rep_dir.mkdir(parents=True, exist_ok=True)
            _write_labels_csv(rep_dir / "truth.csv", truth)
            curve_ids = [cid for cs in cluster_input for cid in cs.ids]
            _write_labels_csv(
                rep_dir / "curve_truth.csv",
                {cid: int(lab) for cid, lab in zip(curve_ids, truth_curves)},
            )
            for name, kind in unit_linkages:
                _, partition = agglomerate(cluster_input, kind, p_true)
                pred_units = partition.label_vector()
                _write_labels_csv(
                    rep_dir / f"labels_{name}.csv",
                    {cid: int(l) for cid, l in zip(cluster_ids, pred_units)},
                )
                pred_curves = repeat_labels(
                    pred_units, [len(s) for s in cluster_input]
                )
                _record(scores[name], run_rows, r, seed + r, name,
                        truth_curves, pred_curves)
            pred_curves = ward_curve_baseline(cluster_input, p_true)
            _write_labels_csv(
                rep_dir / "labels_ward.csv",
                {cid: int(l) for cid, l in zip(curve_ids, pred_curves)},
            )
            _record(scores["ward"], run_rows, r, seed + r, "ward",
                    truth_curves, pred_curves)
        run_rows.sort(key=lambda row: (row[0], row[2]))
        _write_runs_csv(out / "runs.csv", run_rows)
        _write_report(out, experiment, c, reps, seed, scores)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"report for {experiment} (c={c}, reps={reps}) -> {out}")


def _record(bucket, run_rows, rep, rep_seed, name, truth_curves, pred_curves):
    a = ari(truth_curves, pred_curves)
    s = sim(truth_curves, pred_curves)
    bucket["ari"].append(a)
    bucket["sim"].append(s)
    run_rows.append((rep, rep_seed, name, a, s))


def _write_runs_csv(path: Path, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rep", "seed", "linkage", "ari", "sim"])
        for rep, rep_seed, name, a, s in rows:
            writer.writerow([rep, rep_seed, name, f"{a:.4g}", f"{s:.4g}"])


def _write_report(out: Path, experiment: str, c: float, reps: int, seed: int,
                  scores) -> None:
    method_names = ("ms", "bd", "ward", "fward")
    with (out / "report.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["experiment", "c", "reps", "seed", "measure"]
            + list(method_names)
            + ["paper_ms", "paper_bd", "paper_ward"]
        )
        for measure in ("ari", "sim"):
            ref = PAPER_REFERENCE.get((experiment, measure, c))
            paper_cols = [f"{v:.2f}" for v in ref] if ref else ["", "", ""]
            writer.writerow(
                [experiment, c, reps, seed, measure]
                + [f"{np.mean(scores[nm][measure]):.2f}" for nm in method_names]
                + paper_cols
            )
    lines = [
        f"experiment={experiment} c={c} reps={reps} seed={seed}",
        f"{'measure':<10}" + "".join(f"{nm:>8}" for nm in method_names)
        + "".join(f"{'paper_' + nm:>12}" for nm in ("ms", "bd", "ward")),
    ]
    for measure in ("ari", "sim"):
        ref = PAPER_REFERENCE.get((experiment, measure, c))
        paper_cols = (
            [f"{v:12.2f}" for v in ref] if ref else [f"{'-':>12}"] * 3
        )
        lines.append(
            f"{measure:<10}"
            + "".join(f"{np.mean(scores[nm][measure]):8.2f}" for nm in method_names)
            + "".join(paper_cols)
        )
    (out / "report.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
