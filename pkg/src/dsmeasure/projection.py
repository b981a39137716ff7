"""2-D embeddings of feature matrices for report figures: PCA and exact
t-SNE, plus scatter export for the two-column ablation plot."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DegenerateCovariance,
    InsufficientData,
    PerplexityTooLarge,
    WrongColumnCount,
)
from .mlharness import FeatureMatrix


@dataclass(frozen=True)
class Embedding2D:
    points: np.ndarray  # (n, 2)
    subject_ids: tuple[str, ...]
    method: str
    params: dict


def pca_2d(X: FeatureMatrix) -> Embedding2D:
    """Project onto the top-2 eigenvectors of the feature covariance.

    Sign convention: the loading with the largest magnitude in each
    component is made positive, so the embedding is unique.
    """
    v = X.values
    if v.shape[0] < 3:
        raise InsufficientData("PCA needs >= 3 rows")
    if v.shape[1] < 2:
        raise WrongColumnCount("PCA needs >= 2 columns")
    centered = v - v.mean(axis=0)
    cov = centered.T @ centered / (v.shape[0] - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    if not np.isfinite(evals).all() or float(evals[order[0]]) <= 0.0:
        raise DegenerateCovariance("covariance has no positive variance direction")
    comps = evecs[:, order[:2]]
    for c in range(2):
        j = int(np.argmax(np.abs(comps[:, c])))
        if comps[j, c] < 0:
            comps[:, c] = -comps[:, c]
    pts = centered @ comps
    return Embedding2D(points=pts, subject_ids=X.subject_ids, method="pca",
                       params={"explained_variance":
                               [float(evals[order[0]]), float(evals[order[1]])]})


def tsne_2d(X: FeatureMatrix, perplexity: float = 15.0, iterations: int = 1000,
            seed: int = 0, learning_rate: float = 200.0) -> Embedding2D:
    """Exact O(n^2) t-SNE.

    Per-point Gaussian bandwidths are calibrated to the target perplexity by
    bisection (tolerance 1e-5 on the entropy, <= 50 steps); P is symmetrised
    and normalised; the embedding starts from seeded Gaussian noise * 1e-4
    and is optimised with momentum 0.5 (0.8 after iteration 250) under x12
    early exaggeration for the first 250 iterations.
    """
    v = X.values
    n = v.shape[0]
    if n < 3 * perplexity:
        raise PerplexityTooLarge(
            f"{n} rows cannot support perplexity {perplexity} (need >= 3x)")
    dsq = kernels.pairwise_sq_dists(np.ascontiguousarray(v))
    cond, betas = kernels.perplexity_calibration(dsq, float(np.log(perplexity)),
                                                 1e-5, 50)
    P = (cond + cond.T) / (2.0 * n)
    rng = np.random.default_rng(seed)
    y0 = rng.normal(size=(n, 2)) * 1e-4
    switch = min(250, iterations)
    y_final, kl_curve = kernels.tsne_optimize(
        P, y0, iterations, learning_rate, 0.5, 0.8, switch, 12.0, switch)
    return Embedding2D(points=y_final, subject_ids=X.subject_ids, method="tsne",
                       params={"perplexity": perplexity,
                               "iterations": iterations,
                               "seed": seed,
                               "learning_rate": learning_rate,
                               "kl_curve": kl_curve,
                               "betas": betas})


def scatter_export(X: FeatureMatrix, labels) -> list[tuple[float, float, str, str]]:
    """(x, y, label, subject_id) tuples from a 2-column feature matrix."""
    if X.values.shape[1] != 2:
        raise WrongColumnCount(f"expected 2 columns, got {X.values.shape[1]}")
    lv = list(labels)
    if len(lv) != X.n_rows:
        raise InsufficientData("label count != row count")
    return [(float(X.values[i, 0]), float(X.values[i, 1]), str(lv[i]),
             X.subject_ids[i]) for i in range(X.n_rows)]
