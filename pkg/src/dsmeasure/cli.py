"""Command-line interface.

Subcommands: synth, ds, features, train, eval, importance, project, report.
Exit codes: 0 success, 1 runtime failure, 2 usage or config error. All JSON
artifacts embed the effective configuration and a format version; one global
seed makes every artifact byte-reproducible.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import FORMAT_VERSION, __version__, dsmetric, ingest, mlharness, projection, synthsig
from .config import ConfigError, RunConfig, derive_seed, resolve_config
from .errors import DsmeasureError, MissingPairing
from .kernels import BACKEND


class UsageError(Exception):
    """Maps to exit code 2."""


# ---------------------------------------------------------------------------
# artifact helpers
# ---------------------------------------------------------------------------

def _artifact(cfg: RunConfig, payload: dict) -> dict:
    return {"format_version": FORMAT_VERSION,
            "tool_version": __version__,
            "kernel_backend": BACKEND,
            "config": cfg.as_dict(),
            **payload}


def _write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                          encoding="utf-8")


def write_features_csv(path, matrix: mlharness.FeatureMatrix, labels) -> None:
    """subject_id,label,<feature...> with shortest-round-trip floats."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subject_id", "label", *matrix.feature_names])
        for i, sid in enumerate(matrix.subject_ids):
            writer.writerow([sid, labels[i],
                             *[repr(float(v)) for v in matrix.values[i]]])


def read_features_csv(path) -> tuple[mlharness.FeatureMatrix, np.ndarray]:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"features file not found: {p}")
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["subject_id", "label"] or len(header) < 3:
            raise UsageError(f"{p}: header must start subject_id,label,<features>")
        names = tuple(header[2:])
        sids, labels, rows = [], [], []
        for row in reader:
            if not row:
                continue
            sids.append(row[0])
            labels.append(row[1])
            rows.append([float(c) for c in row[2:]])
    label_map = {"HC": 0, "AD": 1, "0": 0, "1": 1}
    try:
        y = np.asarray([label_map[l] for l in labels], dtype=np.int64)
    except KeyError as exc:
        raise UsageError(f"{p}: unknown label {exc.args[0]!r}") from None
    fm = mlharness.FeatureMatrix(feature_names=names,
                                 values=np.asarray(rows, dtype=np.float64),
                                 subject_ids=tuple(sids))
    return fm, y


def _model_spec(cfg: RunConfig, kind: str | None = None) -> mlharness.ModelSpec:
    k = kind or cfg.model_kind
    if k not in mlharness.KINDS:
        raise UsageError(f"unknown model kind {k!r}; choose from {mlharness.KINDS}")
    return mlharness.ModelSpec.for_kind(
        k, seed=derive_seed(cfg.seed, "model"), **cfg.model_overrides())


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------

def _generator_spec(kind: str, length: int, seed: int,
                    args: argparse.Namespace) -> synthsig.GeneratorSpec:
    if kind not in synthsig.KINDS:
        raise UsageError(f"--kind must be one of {synthsig.KINDS}, got {kind!r}")
    return synthsig.GeneratorSpec(
        kind=kind, length=length, seed=seed,
        phi=args.phi, frequency=args.freq, amplitude=args.amplitude,
        phase=args.phase, r=args.r_param, x0=args.x0, snr_db=args.snr_db)


def cmd_synth(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.cohort:
        if not args.out_dir:
            raise UsageError("--cohort requires --out-dir")
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        roi_names = [f"roi{r:02d}" for r in range(args.rois)]
        manifest_rows = []
        for cls, kind, label in (("a", args.kind_a, "HC"), ("b", args.kind_b, "AD")):
            for i in range(args.n_per_class):
                sid = f"{cls}{i:03d}"
                cols = []
                for r in range(args.rois):
                    spec = _generator_spec(
                        kind, args.length, derive_seed(cfg.seed, "synth", cls, i, r),
                        args)
                    cols.append(synthsig.generate(spec))
                table = ingest.RoiTimeSeriesTable(
                    subject_id=sid, roi_names=tuple(roi_names),
                    data=np.column_stack(cols))
                ingest.write_roi_csv(table, out_dir / f"{sid}.csv")
                manifest_rows.append((sid, label, f"{sid}.csv"))
        with (out_dir / "manifest.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["subject_id", "label", "path"])
            writer.writerows(manifest_rows)
        print(f"wrote {2 * args.n_per_class} subject tables to {out_dir}")
        return 0

    if not args.out:
        raise UsageError("--out is required")
    spec = _generator_spec(args.kind, args.length,
                           args.seed if args.seed is not None else cfg.seed, args)
    series = synthsig.generate(spec)
    table = ingest.RoiTimeSeriesTable(subject_id="series",
                                      roi_names=("series",),
                                      data=series.reshape(-1, 1))
    ingest.write_roi_csv(table, args.out)
    print(f"wrote {series.shape[0]} samples to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# ds
# ---------------------------------------------------------------------------

def _ds_record_for_table(table: ingest.RoiTimeSeriesTable, cfg: RunConfig,
                         keep_going: bool) -> dict:
    rois = {}
    for roi in table.roi_names:
        try:
            result = dsmetric.compute_ds(
                table.series(roi), windowing=cfg.windowing(),
                ae=cfg.ae(derive_seed(cfg.seed, "ds", table.subject_id, roi)),
                grid=cfg.grid(), threshold=cfg.threshold)
            rois[roi] = {
                "cv1": result.cv1,
                "cv2": result.cv2,
                "ds": result.ds,
                "label": result.label,
                "kl_by_scale": {str(k): v for k, v in result.kl_series.items()},
                "skipped_kl_scales": list(result.skipped_kl_scales),
                "n_peaks": result.diagnostics.get("n_peaks"),
                "n_cov_values": int(result.prominence_cov.cov_values.shape[0]),
            }
        except DsmeasureError as exc:
            if not keep_going:
                raise
            rois[roi] = {"error": {"code": type(exc).__name__,
                                   "message": str(exc)}}
    return {"subject_id": table.subject_id, "rois": rois}


def cmd_ds(args: argparse.Namespace, cfg: RunConfig) -> int:
    if not args.out:
        raise UsageError("--out is required")
    sources = [s for s in (args.series, args.table, args.manifest, args.nifti) if s]
    if len(sources) != 1:
        raise UsageError("provide exactly one of --series / --table / --manifest / --nifti")

    tables: list[ingest.RoiTimeSeriesTable] = []
    if args.series or args.table:
        tables.append(ingest.parse_roi_csv(args.series or args.table))
    elif args.manifest:
        manifest = ingest.parse_manifest(args.manifest)
        for entry in manifest.entries:
            tables.append(ingest.parse_roi_csv(entry.path,
                                               subject_id=entry.subject_id))
    else:
        if not args.mask:
            raise UsageError("--nifti requires at least one --mask NAME=PATH")
        vol = ingest.read_nifti(args.nifti)
        masks = []
        for spec in args.mask:
            if "=" not in spec:
                raise UsageError(f"--mask must be NAME=PATH, got {spec!r}")
            name, _, mpath = spec.partition("=")
            masks.append(ingest.mask_from_volume(name, ingest.read_nifti(mpath)))
        tables.append(ingest.extract_roi_means(vol, masks,
                                               subject_id=args.subject_id))

    records = [_ds_record_for_table(t, cfg, args.keep_going)
               for t in sorted(tables, key=lambda t: t.subject_id)]
    _write_json(args.out, _artifact(cfg, {"records": records}))
    n_series = sum(len(r["rois"]) for r in records)
    n_err = sum(1 for r in records for v in r["rois"].values() if "error" in v)
    print(f"wrote {len(records)} records ({n_series} series, {n_err} errors) to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# features
# ---------------------------------------------------------------------------

def _load_ds_records(path) -> list[dict]:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"DS records file not found: {p}")
    payload = json.loads(p.read_text(encoding="utf-8"))
    if "records" not in payload:
        raise UsageError(f"{p}: not a DS records artifact")
    return payload["records"]


def cmd_features(args: argparse.Namespace, cfg: RunConfig) -> int:
    records = _load_ds_records(args.ds_records)
    labels_by_sid = ingest.parse_manifest(args.manifest).labels()
    if args.ablation:
        cv_map = {}
        for rec in records:
            sid = rec["subject_id"]
            rois = rec["rois"]
            if args.roi is not None:
                if args.roi not in rois:
                    raise UsageError(f"subject {sid!r} has no ROI {args.roi!r}")
                cell = rois[args.roi]
            elif len(rois) == 1:
                cell = next(iter(rois.values()))
            else:
                raise UsageError("--ablation needs --roi when records hold several ROIs")
            if "error" in cell:
                continue
            cv_map[sid] = (cell["cv1"], cell["cv2"])
        matrix = mlharness.ablation_features(cv_map)
    else:
        ds_map: dict[str, dict[str, float]] = {}
        for rec in records:
            per_roi = {roi: cell["ds"] for roi, cell in rec["rois"].items()
                       if "error" not in cell}
            if per_roi:
                ds_map[rec["subject_id"]] = per_roi
        matrix = mlharness.build_feature_matrix(
            ds_map, roi_order=tuple(sorted(next(iter(ds_map.values())))))
    labels = []
    for sid in matrix.subject_ids:
        if sid not in labels_by_sid:
            raise UsageError(f"subject {sid!r} missing from manifest")
        labels.append(labels_by_sid[sid])
    write_features_csv(args.out, matrix, labels)
    print(f"wrote {matrix.n_rows}x{len(matrix.feature_names)} features to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# train / eval
# ---------------------------------------------------------------------------

def cmd_train(args: argparse.Namespace, cfg: RunConfig) -> int:
    matrix, y = read_features_csv(args.features)
    spec = _model_spec(cfg, args.model_kind)
    model = mlharness.train(spec, matrix, y)
    _write_json(args.out, _artifact(cfg, {"model": mlharness.model_to_dict(model),
                                          "spec": spec.__dict__}))
    print(f"trained {spec.kind} on {matrix.n_rows} subjects -> {args.out}")
    return 0


def _load_model(path) -> mlharness.TrainedModel:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"model file not found: {p}")
    payload = json.loads(p.read_text(encoding="utf-8"))
    if "model" not in payload:
        raise UsageError(f"{p}: not a model artifact")
    return mlharness.model_from_dict(payload["model"])


def _report_dict(rep: mlharness.EvalReport) -> dict:
    return {"accuracy": rep.accuracy, "auc": rep.auc,
            "confusion": {"tp": rep.tp, "fp": rep.fp, "tn": rep.tn, "fn": rep.fn}}


def _write_roc_csv(path, points: np.ndarray) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in points:
            writer.writerow([repr(float(fpr)), repr(float(tpr))])


def cmd_eval(args: argparse.Namespace, cfg: RunConfig) -> int:
    matrix, y = read_features_csv(args.features)
    if args.model:
        model = _load_model(args.model)
        rep = mlharness.evaluate(model, matrix, y, threshold=args.score_threshold)
        payload = {"mode": "holdout", "report": _report_dict(rep)}
        points = rep.roc_points
    else:
        spec = _model_spec(cfg, args.model_kind)
        cv = mlharness.cross_validate(spec, matrix, y, k=cfg.folds,
                                      seed=derive_seed(cfg.seed, "cv"))
        payload = {
            "mode": f"stratified_{cfg.folds}_fold",
            "model_kind": spec.kind,
            "fold_accuracies": list(cv.fold_accuracies),
            "fold_aucs": list(cv.fold_aucs),
            "accuracy_mean": cv.accuracy_mean,
            "accuracy_std": cv.accuracy_std,
            "auc_mean": cv.auc_mean,
            "pooled": _report_dict(cv.pooled),
        }
        points = cv.pooled.roc_points
    _write_json(args.out, _artifact(cfg, payload))
    if args.roc_out:
        _write_roc_csv(args.roc_out, points)
    summary = payload.get("report") or payload.get("pooled")
    print(f"eval -> {args.out} (accuracy={summary['accuracy']:.4f}, "
          f"auc={summary['auc']:.4f})")
    return 0


# ---------------------------------------------------------------------------
# importance / project
# ---------------------------------------------------------------------------

def cmd_importance(args: argparse.Namespace, cfg: RunConfig) -> int:
    matrix, y = read_features_csv(args.features)
    model = _load_model(args.model)
    report = mlharness.permutation_importance(
        model, matrix, y, repeats=cfg.repeats,
        seed=derive_seed(cfg.seed, "importance"))
    entries = [{"feature": f, "importance": v}
               for f, v in zip(report.feature_names, report.importances)]
    ranked = sorted(entries, key=lambda e: (-e["importance"], e["feature"]))
    _write_json(args.out, _artifact(cfg, {
        "method": "permutation_importance",
        "baseline_accuracy": report.baseline_accuracy,
        "repeats": report.repeats,
        "importances": entries,
        "ranked": ranked,
    }))
    print(f"wrote importance for {len(entries)} features to {args.out}")
    return 0


def cmd_project(args: argparse.Namespace, cfg: RunConfig) -> int:
    matrix, y = read_features_csv(args.features)
    method = args.method or cfg.method
    if method == "pca":
        emb = projection.pca_2d(matrix)
    elif method == "tsne":
        emb = projection.tsne_2d(matrix, perplexity=cfg.perplexity,
                                 iterations=cfg.iterations,
                                 seed=derive_seed(cfg.seed, "tsne"))
    else:
        raise UsageError(f"--method must be pca or tsne, got {method!r}")
    with Path(args.out).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "label", "subject_id"])
        for i, sid in enumerate(emb.subject_ids):
            writer.writerow([repr(float(emb.points[i, 0])),
                             repr(float(emb.points[i, 1])),
                             "AD" if y[i] == 1 else "HC", sid])
    print(f"wrote {emb.points.shape[0]}-point {method} embedding to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def _summary(values: list[float]) -> dict:
    arr = np.asarray(values, dtype=np.float64)
    return {"mean": float(arr.mean()), "std": float(arr.std()),
            "median": float(np.median(arr)), "count": int(arr.shape[0])}


def cmd_report(args: argparse.Namespace, cfg: RunConfig) -> int:
    records = _load_ds_records(args.ds_records)
    labels = ingest.parse_manifest(args.manifest).labels()
    catalog = (ingest.parse_roi_catalog(args.catalog) if args.catalog
               else ingest.default_roi_catalog())

    ds_values: dict[str, dict[str, float]] = {}
    for rec in records:
        sid = rec["subject_id"]
        ds_values[sid] = {roi: cell["ds"] for roi, cell in rec["rois"].items()
                          if "error" not in cell}

    all_rois = sorted({roi for per in ds_values.values() for roi in per})
    per_roi = {}
    for roi in all_rois:
        by_label = {"HC": [], "AD": []}
        for sid, per in ds_values.items():
            if roi in per and labels.get(sid) in by_label:
                by_label[labels[sid]].append(per[roi])
        entry = {}
        for lab, vals in by_label.items():
            if vals:
                entry[lab] = _summary(vals)
        if "HC" in entry and "AD" in entry:
            entry["contrast_hc_minus_ad"] = entry["HC"]["mean"] - entry["AD"]["mean"]
        per_roi[roi] = entry

    pairs = [(a, b) for a, b in catalog.pairs() if a in all_rois and b in all_rois]
    if not pairs:
        raise MissingPairing(
            "the catalog defines no ROI pair present in these records")
    paired_deltas = []
    for roi_a, roi_b in pairs:
        for sid in sorted(ds_values):
            per = ds_values[sid]
            if roi_a in per and roi_b in per:
                paired_deltas.append({
                    "subject_id": sid,
                    "label": labels.get(sid, "?"),
                    "roi_a": roi_a,
                    "roi_b": roi_b,
                    "delta": per[roi_a] - per[roi_b],
                })

    payload = {
        "views": {
            "within_hc": {roi: e["HC"] for roi, e in per_roi.items() if "HC" in e},
            "within_ad": {roi: e["AD"] for roi, e in per_roi.items() if "AD" in e},
            "hc_vs_ad": {roi: e["contrast_hc_minus_ad"]
                         for roi, e in per_roi.items()
                         if "contrast_hc_minus_ad" in e},
            "paired_roi_deltas": paired_deltas,
        },
        "per_roi": per_roi,
        "n_subjects": len(ds_values),
    }
    _write_json(args.out, _artifact(cfg, payload))
    print(f"wrote group report ({len(all_rois)} ROIs, {len(paired_deltas)} "
          f"paired deltas) to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_config_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="config file (flat key = value)")
    sp.add_argument("--seed", type=int, default=None, help="global seed")
    sp.add_argument("--window-len", type=int, default=None, dest="window_len")
    sp.add_argument("--stride", type=int, default=None)
    sp.add_argument("--crop-len", type=int, default=None, dest="crop_len")
    sp.add_argument("--hidden-dim", type=int, default=None, dest="hidden_dim")
    sp.add_argument("--latent-dim", type=int, default=None, dest="latent_dim")
    sp.add_argument("--ae-lr", type=float, default=None, dest="learning_rate")
    sp.add_argument("--epochs", type=int, default=None)
    sp.add_argument("--invariance-weight", type=float, default=None,
                    dest="invariance_weight")
    sp.add_argument("--scale-min", type=int, default=None, dest="scale_min")
    sp.add_argument("--scale-step", type=int, default=None, dest="scale_step")
    sp.add_argument("--scale-max", type=int, default=None, dest="scale_max")
    sp.add_argument("--threshold", type=float, default=None)
    sp.add_argument("--folds", type=int, default=None)
    sp.add_argument("--repeats", type=int, default=None)
    sp.add_argument("--perplexity", type=float, default=None)
    sp.add_argument("--iterations", type=int, default=None)
    sp.add_argument("--model-trees", type=int, default=None, dest="model_trees")
    sp.add_argument("--model-depth", type=int, default=None, dest="model_depth")
    sp.add_argument("--model-lr", type=float, default=None, dest="model_learning_rate")
    sp.add_argument("--model-epochs", type=int, default=None, dest="model_epochs")
    sp.add_argument("--model-l2", type=float, default=None, dest="model_l2")
    sp.add_argument("--model-subsample", type=float, default=None,
                    dest="model_subsample")


_CONFIG_FIELDS = (
    "seed window_len stride crop_len hidden_dim latent_dim learning_rate epochs "
    "invariance_weight scale_min scale_step scale_max threshold folds repeats "
    "perplexity iterations model_trees model_depth model_learning_rate "
    "model_epochs model_l2 model_subsample").split()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsmeasure",
        description="Deviation-from-stochasticity analysis and cohort classification")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="generate synthetic series or cohorts")
    sp.add_argument("--kind", default="white_noise")
    sp.add_argument("--length", type=int, default=200)
    sp.add_argument("--out")
    sp.add_argument("--cohort", action="store_true")
    sp.add_argument("--out-dir", dest="out_dir")
    sp.add_argument("--n-per-class", type=int, default=50, dest="n_per_class")
    sp.add_argument("--rois", type=int, default=34)
    sp.add_argument("--kind-a", default="white_noise", dest="kind_a")
    sp.add_argument("--kind-b", default="sine", dest="kind_b")
    sp.add_argument("--phi", type=float, default=None)
    sp.add_argument("--freq", type=float, default=None)
    sp.add_argument("--amplitude", type=float, default=None)
    sp.add_argument("--phase", type=float, default=None)
    sp.add_argument("--r-param", type=float, default=None, dest="r_param")
    sp.add_argument("--x0", type=float, default=None)
    sp.add_argument("--snr-db", type=float, default=None, dest="snr_db")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("ds", help="compute DS for series, tables or cohorts")
    sp.add_argument("--series", help="single-series CSV")
    sp.add_argument("--table", help="ROI table CSV for one subject")
    sp.add_argument("--manifest", help="cohort manifest CSV")
    sp.add_argument("--nifti", help="4D NIfTI-1 volume")
    sp.add_argument("--mask", action="append", default=[],
                    help="NAME=PATH of a 3D NIfTI mask (repeatable)")
    sp.add_argument("--subject-id", default="subject", dest="subject_id")
    sp.add_argument("--out")
    sp.add_argument("--keep-going", action=argparse.BooleanOptionalAction,
                    default=True, dest="keep_going")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_ds)

    sp = sub.add_parser("features", help="assemble a feature matrix from DS records")
    sp.add_argument("--ds-records", required=True, dest="ds_records")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--ablation", action="store_true",
                    help="emit per-subject cv1/cv2 instead of per-ROI DS")
    sp.add_argument("--roi", default=None,
                    help="ROI to take cv1/cv2 from in --ablation mode")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_features)

    sp = sub.add_parser("train", help="train a classifier on a feature matrix")
    sp.add_argument("--features", required=True)
    sp.add_argument("--model-kind", default=None, dest="model_kind",
                    help=f"one of {', '.join(mlharness.KINDS)}")
    sp.add_argument("--out", required=True)
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("eval", help="evaluate a model or run cross-validation")
    sp.add_argument("--features", required=True)
    sp.add_argument("--model", default=None, help="model JSON (holdout mode)")
    sp.add_argument("--model-kind", default=None, dest="model_kind",
                    help="model kind for cross-validation mode")
    sp.add_argument("--score-threshold", type=float, default=None,
                    dest="score_threshold")
    sp.add_argument("--out", required=True)
    sp.add_argument("--roc-out", default=None, dest="roc_out")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("importance", help="permutation feature importance")
    sp.add_argument("--features", required=True)
    sp.add_argument("--model", required=True)
    sp.add_argument("--out", required=True)
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_importance)

    sp = sub.add_parser("project", help="2-D embedding of a feature matrix")
    sp.add_argument("--features", required=True)
    sp.add_argument("--method", default=None, choices=("pca", "tsne"))
    sp.add_argument("--out", required=True)
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("report", help="group and paired-ROI DS report")
    sp.add_argument("--ds-records", required=True, dest="ds_records")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--catalog", default=None, help="ROI catalog CSV")
    sp.add_argument("--out", required=True)
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(getattr(args, "config", None),
                             {k: getattr(args, k) for k in _CONFIG_FIELDS
                              if hasattr(args, k)})
        return args.func(args, cfg)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DsmeasureError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
