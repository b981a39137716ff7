"""Classification harness over DS feature vectors.

Four classifiers built from first principles on numpy: logistic regression
and a linear SVM (full-batch (sub)gradient descent), a random forest (Gini
splits, bootstrap, sqrt-d feature subsampling) and stochastic gradient
boosting (depth-limited regression trees on logistic-loss gradients with
Newton leaf values and shrinkage). Everything is deterministic given the
spec seed; features are standardised with training-set statistics stored in
the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    EmptyEvaluation,
    InconsistentRoiSets,
    MissingDs,
    MissingValue,
    NonFiniteLoss,
    SingleClassTraining,
    TooFewPerClass,
)

KIND_LOGISTIC = "logistic"
KIND_SVM = "linear_svm"
KIND_FOREST = "random_forest"
KIND_BOOSTING = "gradient_boosting"
KINDS = (KIND_LOGISTIC, KIND_SVM, KIND_FOREST, KIND_BOOSTING)

LEAF_VALUE_CLIP = 10.0


# ---------------------------------------------------------------------------
# data containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureMatrix:
    feature_names: tuple[str, ...]
    values: np.ndarray  # (n_subjects, n_features) float64
    subject_ids: tuple[str, ...]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] < 1:
            raise DimensionMismatch("feature matrix must be 2-D with >= 1 column")
        if len(self.feature_names) != v.shape[1]:
            raise DimensionMismatch("feature_names length != column count")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DimensionMismatch("feature names must be unique")
        if len(self.subject_ids) != v.shape[0]:
            raise DimensionMismatch("subject_ids length != row count")
        if not np.all(np.isfinite(v)):
            raise MissingValue("feature matrix contains NaN/Inf")
        object.__setattr__(self, "values", v)

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])


def build_feature_matrix(ds_by_subject: dict[str, dict[str, float]],
                         roi_order: tuple[str, ...] | None = None) -> FeatureMatrix:
    """One row per subject, one column per ROI, cell = DS value.

    All subjects must cover the same ROI set; column order follows roi_order
    when given, otherwise the first subject's ROI order. Rows are sorted by
    subject id.
    """
    if not ds_by_subject:
        raise MissingDs("no subjects")
    subjects = sorted(ds_by_subject)
    first_rois = tuple(ds_by_subject[subjects[0]])
    ref = set(first_rois)
    order = tuple(roi_order) if roi_order is not None else first_rois
    if set(order) != ref:
        raise InconsistentRoiSets("roi_order does not match the subjects' ROI set")
    rows = []
    for sid in subjects:
        per_roi = ds_by_subject[sid]
        if set(per_roi) != ref:
            raise InconsistentRoiSets(f"subject {sid!r} covers a different ROI set")
        vals = []
        for roi in order:
            v = per_roi[roi]
            if v is None or not np.isfinite(v):
                raise MissingDs(f"subject {sid!r}, ROI {roi!r} has no DS value")
            vals.append(float(v))
        rows.append(vals)
    return FeatureMatrix(feature_names=order,
                         values=np.asarray(rows, dtype=np.float64),
                         subject_ids=tuple(subjects))


def ablation_features(cv_by_subject: dict[str, tuple[float, float]]) -> FeatureMatrix:
    """Two-column matrix of per-subject (cv1, cv2) values."""
    if not cv_by_subject:
        raise MissingValue("no subjects")
    subjects = sorted(cv_by_subject)
    rows = []
    for sid in subjects:
        pair = cv_by_subject[sid]
        if pair is None or len(pair) != 2 or not all(np.isfinite(v) for v in pair):
            raise MissingValue(f"subject {sid!r} lacks cv1/cv2 values")
        rows.append([float(pair[0]), float(pair[1])])
    return FeatureMatrix(feature_names=("cv1", "cv2"),
                         values=np.asarray(rows, dtype=np.float64),
                         subject_ids=tuple(subjects))


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    learning_rate: float = 0.1
    epochs: int = 2000
    l2: float = 1e-3
    n_trees: int = 200
    max_depth: int = 6
    subsample: float = 0.8
    seed: int = 0

    @staticmethod
    def for_kind(kind: str, **overrides) -> "ModelSpec":
        if kind not in KINDS:
            raise DimensionMismatch(f"unknown model kind {kind!r}")
        defaults = {
            KIND_LOGISTIC: dict(learning_rate=0.1, epochs=2000, l2=1e-3),
            KIND_SVM: dict(learning_rate=0.05, epochs=2000, l2=1e-3),
            KIND_FOREST: dict(n_trees=200, max_depth=6),
            KIND_BOOSTING: dict(n_trees=200, max_depth=3, learning_rate=0.1,
                                subsample=0.8),
        }[kind]
        defaults.update(overrides)
        return ModelSpec(kind=kind, **defaults)


@dataclass(frozen=True)
class Tree:
    """Flat array representation; feature -1 marks a leaf."""

    feature: np.ndarray    # int64 per node
    threshold: np.ndarray  # float64 per node
    left: np.ndarray       # int64 child index
    right: np.ndarray
    value: np.ndarray      # float64 leaf payload (vote fraction or step)


@dataclass(frozen=True)
class TrainedModel:
    kind: str
    feature_names: tuple[str, ...]
    standardize_mean: np.ndarray
    standardize_std: np.ndarray
    weights: np.ndarray | None = None      # logistic / svm
    intercept: float = 0.0
    trees: tuple[Tree, ...] = ()
    base_score: float = 0.0                # boosting prior log-odds
    shrinkage: float = 0.1

    @property
    def n_features(self) -> int:
        return int(self.standardize_mean.shape[0])

    def default_threshold(self) -> float:
        return 0.0 if self.kind == KIND_SVM else 0.5


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    tp: int
    fp: int
    tn: int
    fn: int
    roc_points: np.ndarray  # (m, 2) of (fpr, tpr)
    auc: float


@dataclass(frozen=True)
class CvReport:
    fold_accuracies: tuple[float, ...]
    fold_aucs: tuple[float, ...]
    accuracy_mean: float
    accuracy_std: float
    auc_mean: float
    pooled: EvalReport


@dataclass(frozen=True)
class ImportanceReport:
    feature_names: tuple[str, ...]
    importances: tuple[float, ...]  # mean accuracy drop per permuted column
    baseline_accuracy: float
    repeats: int
    seed: int


# ---------------------------------------------------------------------------
# shared pieces
# ---------------------------------------------------------------------------

def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _validate_training_data(X: FeatureMatrix, y: np.ndarray) -> np.ndarray:
    yv = np.asarray(y, dtype=np.int64).reshape(-1)
    if yv.shape[0] != X.n_rows:
        raise DimensionMismatch("label count != row count")
    if not set(np.unique(yv)) <= {0, 1}:
        raise SingleClassTraining("labels must be 0 (HC) or 1 (AD)")
    if np.sum(yv == 0) < 2 or np.sum(yv == 1) < 2:
        raise SingleClassTraining("need >= 2 samples per class")
    return yv


def _standardizer(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = values.mean(axis=0)
    std = np.sqrt(np.mean((values - mean) ** 2, axis=0))
    std = np.maximum(std, 1e-12)
    return mean, std


def logistic_loss_and_grad(w: np.ndarray, b: float, Xs: np.ndarray,
                           y: np.ndarray, l2: float):
    """Mean log-loss + (l2/2)||w||^2 with its analytic gradient."""
    n = Xs.shape[0]
    p = _sigmoid(Xs @ w + b)
    pc = np.clip(p, 1e-15, 1.0 - 1e-15)
    loss = float(-np.mean(y * np.log(pc) + (1 - y) * np.log(1 - pc))
                 + 0.5 * l2 * float(w @ w))
    gw = Xs.T @ (p - y) / n + l2 * w
    gb = float(np.mean(p - y))
    return loss, gw, gb


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------

def train(spec: ModelSpec, X: FeatureMatrix, y) -> TrainedModel:
    yv = _validate_training_data(X, y)
    mean, std = _standardizer(X.values)
    Xs = (X.values - mean) / std
    common = dict(feature_names=X.feature_names,
                  standardize_mean=mean, standardize_std=std)

    if spec.kind == KIND_LOGISTIC:
        w = np.zeros(Xs.shape[1])
        b = 0.0
        yf = yv.astype(np.float64)
        for _ in range(spec.epochs):
            loss, gw, gb = logistic_loss_and_grad(w, b, Xs, yf, spec.l2)
            if not math.isfinite(loss):
                raise NonFiniteLoss("logistic loss became non-finite")
            w -= spec.learning_rate * gw
            b -= spec.learning_rate * gb
        return TrainedModel(kind=spec.kind, weights=w, intercept=b, **common)

    if spec.kind == KIND_SVM:
        w = np.zeros(Xs.shape[1])
        b = 0.0
        ypm = 2.0 * yv - 1.0
        n = Xs.shape[0]
        for _ in range(spec.epochs):
            margins = ypm * (Xs @ w + b)
            viol = margins < 1.0
            gw = -(Xs[viol].T @ ypm[viol]) / n + spec.l2 * w
            gb = -float(np.sum(ypm[viol])) / n
            if not np.all(np.isfinite(gw)):
                raise NonFiniteLoss("svm subgradient became non-finite")
            w -= spec.learning_rate * gw
            b -= spec.learning_rate * gb
        return TrainedModel(kind=spec.kind, weights=w, intercept=b, **common)

    if spec.kind == KIND_FOREST:
        seeds = np.random.SeedSequence(spec.seed).spawn(spec.n_trees)
        trees = []
        n, d = Xs.shape
        n_sub = max(1, int(math.ceil(math.sqrt(d))))
        yf = yv.astype(np.float64)
        for t in range(spec.n_trees):
            rng = np.random.default_rng(seeds[t])
            rows = np.sort(rng.integers(0, n, size=n)).astype(np.int64)
            trees.append(_grow_tree(Xs, yf, rows, rng, spec.max_depth,
                                    n_sub, mode=0, hessian=None))
        return TrainedModel(kind=spec.kind, trees=tuple(trees), **common)

    if spec.kind == KIND_BOOSTING:
        n, d = Xs.shape
        yf = yv.astype(np.float64)
        base_rate = min(max(float(yf.mean()), 1e-6), 1.0 - 1e-6)
        f0 = math.log(base_rate / (1.0 - base_rate))
        F = np.full(n, f0)
        seeds = np.random.SeedSequence(spec.seed).spawn(spec.n_trees)
        trees = []
        k = max(2, int(round(spec.subsample * n)))
        for t in range(spec.n_trees):
            rng = np.random.default_rng(seeds[t])
            rows = (np.sort(rng.permutation(n)[:k]).astype(np.int64)
                    if k < n else np.arange(n, dtype=np.int64))
            p = _sigmoid(F)
            if not np.all(np.isfinite(p)):
                raise NonFiniteLoss("boosting scores became non-finite")
            residual = yf - p
            hessian = p * (1.0 - p)
            tree = _grow_tree(Xs, residual, rows, rng, spec.max_depth,
                              d, mode=1, hessian=hessian)
            trees.append(tree)
            F += spec.learning_rate * _tree_predict(tree, Xs)
        return TrainedModel(kind=spec.kind, trees=tuple(trees),
                            base_score=f0, shrinkage=spec.learning_rate, **common)

    raise DimensionMismatch(f"unknown model kind {spec.kind!r}")


def _grow_tree(Xs: np.ndarray, target: np.ndarray, rows: np.ndarray,
               rng: np.random.Generator, max_depth: int, n_feats: int,
               mode: int, hessian: np.ndarray | None) -> Tree:
    """Depth-first recursive growth into flat arrays.

    mode 0: classification (target is 0/1, leaf = class-1 fraction).
    mode 1: regression on gradients (leaf = clipped Newton step using the
    hessian).
    """
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []
    d = Xs.shape[1]
    all_feats = np.arange(d, dtype=np.int64)

    def leaf_value(rr: np.ndarray) -> float:
        if mode == 0:
            return float(target[rr].mean())
        num = float(target[rr].sum())
        den = float(hessian[rr].sum()) + 1e-12
        return float(np.clip(num / den, -LEAF_VALUE_CLIP, LEAF_VALUE_CLIP))

    def add_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    def grow(rr: np.ndarray, depth: int) -> int:
        node = add_node()
        tgt = target[rr]
        if depth >= max_depth or rr.shape[0] < 2 or np.all(tgt == tgt[0]):
            value[node] = leaf_value(rr)
            return node
        if n_feats >= d:
            feats = all_feats
        else:
            feats = np.sort(rng.choice(d, size=n_feats, replace=False)).astype(np.int64)
        f, thr, gain = kernels.best_split(Xs, target, rr, feats, mode)
        if f < 0:
            value[node] = leaf_value(rr)
            return node
        go_left = Xs[rr, f] <= thr
        rl = rr[go_left]
        rrt = rr[~go_left]
        if rl.shape[0] == 0 or rrt.shape[0] == 0:
            value[node] = leaf_value(rr)
            return node
        feature[node] = int(f)
        threshold[node] = float(thr)
        left[node] = grow(rl, depth + 1)
        right[node] = grow(rrt, depth + 1)
        return node

    grow(rows, 0)
    return Tree(feature=np.asarray(feature, dtype=np.int64),
                threshold=np.asarray(threshold, dtype=np.float64),
                left=np.asarray(left, dtype=np.int64),
                right=np.asarray(right, dtype=np.int64),
                value=np.asarray(value, dtype=np.float64))


def _tree_predict(tree: Tree, Xs: np.ndarray) -> np.ndarray:
    """Vectorised root-to-leaf routing."""
    idx = np.zeros(Xs.shape[0], dtype=np.int64)
    while True:
        feats = tree.feature[idx]
        active = feats >= 0
        if not active.any():
            return tree.value[idx]
        rows = np.nonzero(active)[0]
        f = feats[rows]
        goes_left = Xs[rows, f] <= tree.threshold[idx[rows]]
        nxt = np.where(goes_left, tree.left[idx[rows]], tree.right[idx[rows]])
        idx[rows] = nxt


# ---------------------------------------------------------------------------
# prediction and evaluation
# ---------------------------------------------------------------------------

def predict_score(model: TrainedModel, X: FeatureMatrix) -> np.ndarray:
    """Probability of class AD (logistic, boosting), signed margin (SVM) or
    fraction of trees voting AD (forest)."""
    if X.values.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"feature count {X.values.shape[1]} != model {model.n_features}")
    Xs = (X.values - model.standardize_mean) / model.standardize_std
    if model.kind in (KIND_LOGISTIC, KIND_SVM):
        raw = Xs @ model.weights + model.intercept
        return _sigmoid(raw) if model.kind == KIND_LOGISTIC else raw
    if model.kind == KIND_FOREST:
        votes = np.zeros(Xs.shape[0])
        for tree in model.trees:
            votes += (_tree_predict(tree, Xs) > 0.5).astype(np.float64)
        return votes / len(model.trees)
    if model.kind == KIND_BOOSTING:
        F = np.full(Xs.shape[0], model.base_score)
        for tree in model.trees:
            F += model.shrinkage * _tree_predict(tree, Xs)
        return _sigmoid(F)
    raise DimensionMismatch(f"unknown model kind {model.kind!r}")


def boosting_train_losses(spec: ModelSpec, X: FeatureMatrix, y) -> np.ndarray:
    """Training logistic loss after the prior and after every stage.

    Retrains from scratch; used by the stagewise-monotonicity property test.
    """
    yv = _validate_training_data(X, y).astype(np.float64)
    model = train(replace(spec, kind=KIND_BOOSTING), X, yv.astype(int))
    Xs = (X.values - model.standardize_mean) / model.standardize_std
    F = np.full(Xs.shape[0], model.base_score)
    losses = [_logloss(yv, F)]
    for tree in model.trees:
        F += model.shrinkage * _tree_predict(tree, Xs)
        losses.append(_logloss(yv, F))
    return np.asarray(losses)


def _logloss(y: np.ndarray, F: np.ndarray) -> float:
    p = np.clip(_sigmoid(F), 1e-15, 1.0 - 1e-15)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


def roc_curve(scores: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """ROC points by sweeping all distinct score thresholds, AUC by the
    trapezoidal rule (equals the tie-averaged rank statistic)."""
    yv = np.asarray(y, dtype=np.int64).reshape(-1)
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    if s.shape[0] == 0:
        raise EmptyEvaluation("no scores")
    pos = int(np.sum(yv == 1))
    neg = int(np.sum(yv == 0))
    if pos == 0 or neg == 0:
        raise EmptyEvaluation("ROC needs both classes")
    order = np.argsort(-s, kind="mergesort")
    ss = s[order]
    ys = yv[order]
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    n = ss.shape[0]
    while i < n:
        j = i
        while j < n and ss[j] == ss[i]:
            tp += int(ys[j] == 1)
            fp += int(ys[j] == 0)
            j += 1
        points.append((fp / neg, tp / pos))
        i = j
    pts = np.asarray(points)
    auc = float(np.trapezoid(pts[:, 1], pts[:, 0]))
    return pts, auc


def evaluate(model: TrainedModel, X: FeatureMatrix, y,
             threshold: float | None = None) -> EvalReport:
    yv = np.asarray(y, dtype=np.int64).reshape(-1)
    if yv.shape[0] != X.n_rows:
        raise DimensionMismatch("label count != row count")
    if yv.shape[0] == 0:
        raise EmptyEvaluation("nothing to evaluate")
    scores = predict_score(model, X)
    thr = model.default_threshold() if threshold is None else threshold
    pred = (scores >= thr).astype(np.int64)
    tp = int(np.sum((pred == 1) & (yv == 1)))
    fp = int(np.sum((pred == 1) & (yv == 0)))
    tn = int(np.sum((pred == 0) & (yv == 0)))
    fn = int(np.sum((pred == 0) & (yv == 1)))
    pts, auc = roc_curve(scores, yv)
    return EvalReport(accuracy=(tp + tn) / yv.shape[0], tp=tp, fp=fp, tn=tn,
                      fn=fn, roc_points=pts, auc=auc)


def stratified_kfold(y, k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """k folds preserving class proportions within one sample."""
    yv = np.asarray(y, dtype=np.int64).reshape(-1)
    rng = np.random.default_rng(seed)
    chunks: list[list[np.ndarray]] = []
    for cls in (0, 1):
        idx = np.nonzero(yv == cls)[0]
        if idx.shape[0] < k:
            raise TooFewPerClass(f"class {cls} has {idx.shape[0]} members, need >= {k}")
        rng.shuffle(idx)
        chunks.append(np.array_split(idx, k))
    folds = []
    all_idx = np.arange(yv.shape[0])
    for i in range(k):
        test = np.sort(np.concatenate([chunks[0][i], chunks[1][i]]))
        mask = np.ones(yv.shape[0], dtype=bool)
        mask[test] = False
        folds.append((all_idx[mask], test))
    return folds


def cross_validate(spec: ModelSpec, X: FeatureMatrix, y, k: int = 5,
                   seed: int = 0) -> CvReport:
    """Stratified k-fold CV; the pooled report concatenates out-of-fold
    scores before thresholding and the ROC sweep."""
    yv = _validate_training_data(X, y)
    folds = stratified_kfold(yv, k, seed)
    accs, aucs = [], []
    pooled_scores = np.empty(yv.shape[0])
    thr = None
    for train_idx, test_idx in folds:
        sub_train = FeatureMatrix(
            feature_names=X.feature_names, values=X.values[train_idx],
            subject_ids=tuple(X.subject_ids[i] for i in train_idx))
        sub_test = FeatureMatrix(
            feature_names=X.feature_names, values=X.values[test_idx],
            subject_ids=tuple(X.subject_ids[i] for i in test_idx))
        model = train(spec, sub_train, yv[train_idx])
        rep = evaluate(model, sub_test, yv[test_idx])
        accs.append(rep.accuracy)
        aucs.append(rep.auc)
        pooled_scores[test_idx] = predict_score(model, sub_test)
        thr = model.default_threshold()
    pred = (pooled_scores >= thr).astype(np.int64)
    tp = int(np.sum((pred == 1) & (yv == 1)))
    fp = int(np.sum((pred == 1) & (yv == 0)))
    tn = int(np.sum((pred == 0) & (yv == 0)))
    fn = int(np.sum((pred == 0) & (yv == 1)))
    pts, auc = roc_curve(pooled_scores, yv)
    pooled = EvalReport(accuracy=(tp + tn) / yv.shape[0], tp=tp, fp=fp,
                        tn=tn, fn=fn, roc_points=pts, auc=auc)
    accs_arr = np.asarray(accs)
    return CvReport(fold_accuracies=tuple(accs), fold_aucs=tuple(aucs),
                    accuracy_mean=float(accs_arr.mean()),
                    accuracy_std=float(accs_arr.std()),
                    auc_mean=float(np.mean(aucs)), pooled=pooled)


def permutation_importance(model: TrainedModel, X: FeatureMatrix, y,
                           repeats: int = 10, seed: int = 0) -> ImportanceReport:
    """Mean accuracy drop when one feature column is permuted (label-free
    shuffles, seeded). This is the permutation proxy for per-feature
    attribution: it ranks features by how much the trained model relies on
    them."""
    yv = np.asarray(y, dtype=np.int64).reshape(-1)
    baseline = evaluate(model, X, yv).accuracy
    rng = np.random.default_rng(seed)
    n, d = X.values.shape
    drops = np.zeros(d)
    for f in range(d):
        acc_sum = 0.0
        for _ in range(repeats):
            perm = rng.permutation(n)
            values = X.values.copy()
            values[:, f] = values[perm, f]
            Xp = FeatureMatrix(feature_names=X.feature_names, values=values,
                               subject_ids=X.subject_ids)
            acc_sum += evaluate(model, Xp, yv).accuracy
        drops[f] = baseline - acc_sum / repeats
    return ImportanceReport(feature_names=X.feature_names,
                            importances=tuple(float(v) for v in drops),
                            baseline_accuracy=baseline, repeats=repeats,
                            seed=seed)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def model_to_dict(model: TrainedModel) -> dict:
    out = {
        "kind": model.kind,
        "feature_names": list(model.feature_names),
        "standardize_mean": model.standardize_mean.tolist(),
        "standardize_std": model.standardize_std.tolist(),
    }
    if model.kind in (KIND_LOGISTIC, KIND_SVM):
        out["weights"] = model.weights.tolist()
        out["intercept"] = model.intercept
    else:
        out["trees"] = [{
            "feature": t.feature.tolist(),
            "threshold": t.threshold.tolist(),
            "left": t.left.tolist(),
            "right": t.right.tolist(),
            "value": t.value.tolist(),
        } for t in model.trees]
        if model.kind == KIND_BOOSTING:
            out["base_score"] = model.base_score
            out["shrinkage"] = model.shrinkage
    return out


def model_from_dict(payload: dict) -> TrainedModel:
    kind = payload["kind"]
    if kind not in KINDS:
        raise DimensionMismatch(f"unknown model kind {kind!r}")
    common = dict(
        kind=kind,
        feature_names=tuple(payload["feature_names"]),
        standardize_mean=np.asarray(payload["standardize_mean"], dtype=np.float64),
        standardize_std=np.asarray(payload["standardize_std"], dtype=np.float64),
    )
    if kind in (KIND_LOGISTIC, KIND_SVM):
        return TrainedModel(weights=np.asarray(payload["weights"], dtype=np.float64),
                            intercept=float(payload["intercept"]), **common)
    trees = tuple(
        Tree(feature=np.asarray(t["feature"], dtype=np.int64),
             threshold=np.asarray(t["threshold"], dtype=np.float64),
             left=np.asarray(t["left"], dtype=np.int64),
             right=np.asarray(t["right"], dtype=np.int64),
             value=np.asarray(t["value"], dtype=np.float64))
        for t in payload["trees"])
    return TrainedModel(trees=trees,
                        base_score=float(payload.get("base_score", 0.0)),
                        shrinkage=float(payload.get("shrinkage", 0.1)), **common)
