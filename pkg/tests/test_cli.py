import csv
import json
from pathlib import Path

import numpy as np
import pytest

from dsmeasure import cli
from dsmeasure.ingest import RoiTimeSeriesTable, write_roi_csv


def run(*argv):
    return cli.main([str(a) for a in argv])


def make_cohort(tmp_path, n_per_class=2, rois=3, length=120, seed=5):
    out = tmp_path / "cohort"
    rc = run("synth", "--cohort", "--n-per-class", n_per_class, "--rois", rois,
             "--length", length, "--out-dir", out, "--seed", seed,
             "--kind-a", "white_noise", "--kind-b", "sine")
    assert rc == 0
    return out


def ds_and_features(tmp_path, **kw):
    coh = make_cohort(tmp_path, **kw)
    records = tmp_path / "ds.json"
    assert run("ds", "--manifest", coh / "manifest.csv", "--out", records,
               "--seed", 5, "--epochs", 100) == 0
    feats = tmp_path / "features.csv"
    assert run("features", "--ds-records", records, "--manifest",
               coh / "manifest.csv", "--out", feats) == 0
    return coh, records, feats


class TestSynth:
    def test_series_row_count(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run("synth", "--kind", "sine", "--length", 200, "--seed", 7,
                   "--out", out) == 0
        rows = out.read_text().strip().splitlines()
        assert len(rows) == 201  # header + 200 samples

    def test_invalid_kind_is_usage_error(self, tmp_path, capsys):
        rc = run("synth", "--kind", "sawtooth", "--out", tmp_path / "x.csv")
        assert rc == 2
        assert "--kind" in capsys.readouterr().err

    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert run("synth", "--kind", "ar1", "--phi", 0.6, "--length", 64,
                       "--seed", 3, "--out", out) == 0
        assert a.read_bytes() == b.read_bytes()


class TestDs:
    def test_noise_labelled_stochastic(self, tmp_path):
        src = tmp_path / "n.csv"
        assert run("synth", "--kind", "white_noise", "--length", 200,
                   "--seed", 21, "--out", src) == 0
        out = tmp_path / "ds.json"
        assert run("ds", "--series", src, "--out", out, "--seed", 4) == 0
        payload = json.loads(out.read_text())
        assert payload["format_version"] == "1"
        assert "config" in payload
        cell = payload["records"][0]["rois"]["series"]
        assert cell["label"] == "stochastic"
        assert cell["ds"] == pytest.approx(cell["cv1"] * cell["cv2"] / 100.0)

    def test_batch_isolates_bad_subject(self, tmp_path):
        coh = make_cohort(tmp_path)
        # corrupt one subject file with a constant series
        bad = RoiTimeSeriesTable(subject_id="a000",
                                 roi_names=("roi00", "roi01", "roi02"),
                                 data=np.ones((120, 3)))
        write_roi_csv(bad, coh / "a000.csv")
        out = tmp_path / "ds.json"
        assert run("ds", "--manifest", coh / "manifest.csv", "--out", out,
                   "--seed", 5, "--epochs", 50) == 0
        payload = json.loads(out.read_text())
        rois = {r["subject_id"]: r["rois"] for r in payload["records"]}
        assert all("error" in cell for cell in rois["a000"].values())
        assert rois["a000"]["roi00"]["error"]["code"] == "ConstantInput"
        assert all("error" not in cell for cell in rois["b000"].values())

    def test_no_keep_going_fails_fast(self, tmp_path):
        coh = make_cohort(tmp_path)
        bad = RoiTimeSeriesTable(subject_id="a000",
                                 roi_names=("roi00", "roi01", "roi02"),
                                 data=np.ones((120, 3)))
        write_roi_csv(bad, coh / "a000.csv")
        rc = run("ds", "--manifest", coh / "manifest.csv",
                 "--out", tmp_path / "ds.json", "--seed", 5,
                 "--epochs", 50, "--no-keep-going")
        assert rc == 1

    def test_requires_exactly_one_source(self, tmp_path):
        rc = run("ds", "--out", tmp_path / "x.json")
        assert rc == 2

    def test_nifti_mask_pipeline(self, tmp_path):
        from oracles import write_nifti

        rng = np.random.default_rng(12)
        vol = rng.normal(size=(3, 3, 3, 150)).astype(np.float32)
        write_nifti(tmp_path / "vol.nii", vol, "float32")
        mask = np.zeros((3, 3, 3, 1), dtype=np.float32)
        mask[0, 0, 0, 0] = 1.0
        mask[1, 1, 1, 0] = 1.0
        write_nifti(tmp_path / "m.nii", mask, "float32")
        out = tmp_path / "ds.json"
        rc = run("ds", "--nifti", tmp_path / "vol.nii",
                 "--mask", f"m={tmp_path / 'm.nii'}",
                 "--subject-id", "sub1", "--out", out, "--seed", 3,
                 "--epochs", 50)
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["records"][0]["subject_id"] == "sub1"
        assert "m" in payload["records"][0]["rois"]


class TestFeaturesTrainEval:
    def test_feature_table_shape(self, tmp_path):
        _, _, feats = ds_and_features(tmp_path)
        with feats.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["subject_id", "label", "roi00", "roi01", "roi02"]
        assert len(rows) == 5  # header + 4 subjects

    def test_train_eval_importance_project(self, tmp_path):
        _, _, feats = ds_and_features(tmp_path, n_per_class=4)
        model = tmp_path / "model.json"
        assert run("train", "--features", feats, "--model-kind",
                   "random_forest", "--out", model, "--seed", 9,
                   "--model-trees", 30) == 0
        payload = json.loads(model.read_text())
        assert payload["model"]["kind"] == "random_forest"

        report = tmp_path / "eval.json"
        roc = tmp_path / "roc.csv"
        assert run("eval", "--features", feats, "--model", model,
                   "--out", report, "--roc-out", roc) == 0
        rep = json.loads(report.read_text())
        assert 0.0 <= rep["report"]["accuracy"] <= 1.0
        assert rep["report"]["auc"] >= 0.9  # separable synthetic classes
        conf = rep["report"]["confusion"]
        assert sum(conf.values()) == 8
        assert roc.read_text().startswith("fpr,tpr")

        imp = tmp_path / "imp.json"
        assert run("importance", "--features", feats, "--model", model,
                   "--out", imp, "--seed", 9, "--repeats", 2) == 0
        entries = json.loads(imp.read_text())["importances"]
        assert len(entries) == 3

        emb = tmp_path / "emb.csv"
        assert run("project", "--features", feats, "--method", "pca",
                   "--out", emb) == 0
        lines = emb.read_text().strip().splitlines()
        assert lines[0] == "x,y,label,subject_id"
        assert len(lines) == 9

    def test_cv_eval_mode(self, tmp_path):
        _, _, feats = ds_and_features(tmp_path, n_per_class=5)
        report = tmp_path / "cv.json"
        assert run("eval", "--features", feats, "--model-kind", "logistic",
                   "--out", report, "--folds", 5, "--seed", 2) == 0
        rep = json.loads(report.read_text())
        assert rep["mode"] == "stratified_5_fold"
        assert len(rep["fold_accuracies"]) == 5
        assert "pooled" in rep

    def test_logistic_report_always_written(self, tmp_path):
        # linear model may underperform; the report must exist regardless
        _, _, feats = ds_and_features(tmp_path, n_per_class=4)
        report = tmp_path / "lr.json"
        assert run("eval", "--features", feats, "--model-kind", "logistic",
                   "--out", report, "--folds", 2, "--seed", 2) == 0
        assert report.exists()

    def test_ablation_features(self, tmp_path):
        coh = make_cohort(tmp_path)
        records = tmp_path / "ds.json"
        assert run("ds", "--manifest", coh / "manifest.csv", "--out", records,
                   "--seed", 5, "--epochs", 80) == 0
        feats = tmp_path / "ablation.csv"
        assert run("features", "--ds-records", records, "--manifest",
                   coh / "manifest.csv", "--out", feats, "--ablation",
                   "--roi", "roi01") == 0
        with feats.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["subject_id", "label", "cv1", "cv2"]
        # bit-for-bit equality with the DS record
        payload = json.loads(records.read_text())
        rec = {r["subject_id"]: r["rois"]["roi01"] for r in payload["records"]}
        for row in rows[1:]:
            assert float(row[2]) == rec[row[0]]["cv1"]
            assert float(row[3]) == rec[row[0]]["cv2"]


class TestReport:
    def test_group_report_views(self, tmp_path):
        coh = make_cohort(tmp_path, n_per_class=3)
        records = tmp_path / "ds.json"
        assert run("ds", "--manifest", coh / "manifest.csv", "--out", records,
                   "--seed", 5, "--epochs", 100) == 0
        catalog = tmp_path / "catalog.csv"
        catalog.write_text(
            "roi_name,paired_with\nroi00,roi01\nroi01,roi00\nroi02,\n")
        out = tmp_path / "group.json"
        assert run("report", "--ds-records", records, "--manifest",
                   coh / "manifest.csv", "--catalog", catalog,
                   "--out", out) == 0
        rep = json.loads(out.read_text())
        views = rep["views"]
        assert set(views["within_hc"]) == {"roi00", "roi01", "roi02"}
        for roi, contrast in views["hc_vs_ad"].items():
            assert contrast != 0.0
        deltas = views["paired_roi_deltas"]
        assert len(deltas) == 6  # 6 subjects x 1 pair
        counts = rep["per_roi"]["roi00"]
        assert counts["HC"]["count"] == 3 and counts["AD"]["count"] == 3

    def test_identical_paired_series_delta_zero(self, tmp_path):
        # build a table where both paired ROIs hold the same series
        rng = np.random.default_rng(3)
        series = rng.normal(size=150)
        table = RoiTimeSeriesTable(subject_id="s1",
                                   roi_names=("left", "right"),
                                   data=np.column_stack([series, series]))
        write_roi_csv(table, tmp_path / "s1.csv")
        (tmp_path / "manifest.csv").write_text(
            "subject_id,label,path\ns1,HC,s1.csv\n")
        records = tmp_path / "ds.json"
        assert run("ds", "--manifest", tmp_path / "manifest.csv",
                   "--out", records, "--seed", 8, "--epochs", 80) == 0
        catalog = tmp_path / "catalog.csv"
        catalog.write_text("roi_name,paired_with\nleft,right\nright,left\n")
        out = tmp_path / "group.json"
        assert run("report", "--ds-records", records, "--manifest",
                   tmp_path / "manifest.csv", "--catalog", catalog,
                   "--out", out) == 0
        deltas = json.loads(out.read_text())["views"]["paired_roi_deltas"]
        assert deltas[0]["delta"] == 0.0

    def test_missing_pairing(self, tmp_path):
        coh = make_cohort(tmp_path)
        records = tmp_path / "ds.json"
        assert run("ds", "--manifest", coh / "manifest.csv", "--out", records,
                   "--seed", 5, "--epochs", 50) == 0
        rc = run("report", "--ds-records", records, "--manifest",
                 coh / "manifest.csv", "--out", tmp_path / "g.json")
        assert rc == 1  # default catalog has no roiNN pairings


class TestConfigFile:
    def test_file_values_and_flag_precedence(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("ae.epochs = 60\nseed = 11\n# comment\n")
        src = tmp_path / "n.csv"
        assert run("synth", "--kind", "white_noise", "--length", 150,
                   "--seed", 2, "--out", src) == 0
        out = tmp_path / "ds.json"
        assert run("ds", "--series", src, "--config", cfgfile,
                   "--out", out) == 0
        payload = json.loads(out.read_text())
        assert payload["config"]["epochs"] == 60
        assert payload["config"]["seed"] == 11
        out2 = tmp_path / "ds2.json"
        assert run("ds", "--series", src, "--config", cfgfile, "--seed", 99,
                   "--out", out2) == 0
        assert json.loads(out2.read_text())["config"]["seed"] == 99

    def test_unknown_key_is_usage_error(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("nonsense.key = 1\n")
        rc = run("ds", "--series", "whatever.csv", "--config", cfgfile,
                 "--out", tmp_path / "x.json")
        assert rc == 2

    def test_env_var_default_config(self, tmp_path, monkeypatch):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("ae.epochs = 42\n")
        monkeypatch.setenv("DSMEASURE_CONFIG", str(cfgfile))
        src = tmp_path / "n.csv"
        assert run("synth", "--kind", "white_noise", "--length", 150,
                   "--seed", 2, "--out", src) == 0
        out = tmp_path / "ds.json"
        assert run("ds", "--series", src, "--out", out) == 0
        assert json.loads(out.read_text())["config"]["epochs"] == 42


class TestEndToEndDeterminism:
    def test_repeat_run_byte_identical(self, tmp_path):
        results = []
        for tag in ("one", "two"):
            base = tmp_path / tag
            base.mkdir()
            coh = base / "cohort"
            assert run("synth", "--cohort", "--n-per-class", 2, "--rois", 2,
                       "--length", 120, "--out-dir", coh, "--seed", 7) == 0
            records = base / "ds.json"
            assert run("ds", "--manifest", coh / "manifest.csv",
                       "--out", records, "--seed", 7, "--epochs", 80) == 0
            feats = base / "features.csv"
            assert run("features", "--ds-records", records, "--manifest",
                       coh / "manifest.csv", "--out", feats) == 0
            model = base / "model.json"
            assert run("train", "--features", feats, "--model-kind",
                       "gradient_boosting", "--model-trees", 20,
                       "--out", model, "--seed", 7) == 0
            catalog = base / "catalog.csv"
            catalog.write_text("roi_name,paired_with\nroi00,roi01\nroi01,roi00\n")
            group = base / "group.json"
            assert run("report", "--ds-records", records, "--manifest",
                       coh / "manifest.csv", "--catalog", catalog,
                       "--out", group, "--seed", 7) == 0
            results.append((records.read_bytes(), feats.read_bytes(),
                            model.read_bytes(), group.read_bytes()))
        assert results[0] == results[1]
