"""Windowed spectral features and the small dense autoencoder that turns
them into a dissimilarity curve.

The network is input -> hidden (tanh) -> latent (linear) -> hidden (tanh)
-> output (linear), trained by full-batch gradient descent on

    L = mean_t ||x_t - xhat_t||^2 + lam * mean_t ||f_t - f_{t-1}||^2

where f_t is the latent code of window t. The second term pushes codes of
consecutive windows together, so the per-step distance between them (the
dissimilarity curve) stays near zero wherever the signal's local spectral
content does not change.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    DivergedTraining,
    InsufficientData,
    SeriesTooShort,
)
from .numkernel import as_series


@dataclass(frozen=True)
class WindowingConfig:
    window_len: int = 20
    stride: int = 1
    crop_len: int | None = None  # None -> window_len // 2 + 1

    def resolved_crop(self) -> int:
        return self.crop_len if self.crop_len is not None else self.window_len // 2 + 1

    def validate(self) -> None:
        if self.window_len < 1 or self.stride < 1:
            raise SeriesTooShort("window_len and stride must be positive")
        crop = self.resolved_crop()
        if not 1 <= crop <= self.window_len:
            raise DimensionMismatch(
                f"crop_len {crop} outside [1, window_len={self.window_len}]")
        if self.stride > self.window_len:
            raise DimensionMismatch("stride must not exceed window_len")


@dataclass(frozen=True)
class AeConfig:
    hidden_dim: int = 16
    latent_dim: int = 4
    learning_rate: float = 0.01
    epochs: int = 500
    invariance_weight: float = 0.1
    seed: int = 0

    def validate(self, input_dim: int) -> None:
        if min(self.hidden_dim, self.latent_dim, self.epochs) < 1:
            raise DimensionMismatch("dims and epochs must be positive")
        if self.learning_rate < 0:
            raise DimensionMismatch("learning_rate must be non-negative")
        if self.invariance_weight < 0:
            raise DimensionMismatch("invariance_weight must be non-negative")
        if self.latent_dim >= input_dim:
            raise DimensionMismatch(
                f"latent_dim {self.latent_dim} must compress input_dim {input_dim}")


@dataclass(frozen=True)
class SpectralWindowSet:
    features: np.ndarray        # (n_windows, crop_len) float64
    source_offsets: np.ndarray  # (n_windows,) int64, start sample per window

    @property
    def n_windows(self) -> int:
        return int(self.features.shape[0])

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])


@dataclass
class AeModel:
    """Dense autoencoder weights; treat as immutable once trained."""

    w_enc_in: np.ndarray   # (input, hidden)
    b_enc_in: np.ndarray
    w_enc_out: np.ndarray  # (hidden, latent)
    b_enc_out: np.ndarray
    w_dec_in: np.ndarray   # (latent, hidden)
    b_dec_in: np.ndarray
    w_dec_out: np.ndarray  # (hidden, output)
    b_dec_out: np.ndarray

    @property
    def input_dim(self) -> int:
        return int(self.w_enc_in.shape[0])

    @property
    def latent_dim(self) -> int:
        return int(self.w_enc_out.shape[1])

    def weights(self) -> tuple[np.ndarray, ...]:
        return (self.w_enc_in, self.b_enc_in, self.w_enc_out, self.b_enc_out,
                self.w_dec_in, self.b_dec_in, self.w_dec_out, self.b_dec_out)

    def copy(self) -> "AeModel":
        return AeModel(*(w.copy() for w in self.weights()))


@dataclass(frozen=True)
class TrainLog:
    total: np.ndarray
    reconstruction: np.ndarray
    invariance: np.ndarray

    @property
    def epochs(self) -> int:
        return int(self.total.shape[0])


def make_spectral_windows(x, cfg: WindowingConfig = WindowingConfig()) -> SpectralWindowSet:
    """Slide windows at the configured stride and keep the cropped DFT moduli."""
    cfg.validate()
    xs = as_series(x, "x")
    if xs.shape[0] < cfg.window_len + cfg.stride:
        raise SeriesTooShort(
            f"need >= {cfg.window_len + cfg.stride} samples for two windows, "
            f"got {xs.shape[0]}")
    crop = cfg.resolved_crop()
    feats = kernels.window_spectral_features(xs, cfg.window_len, cfg.stride, crop)
    offsets = np.arange(feats.shape[0], dtype=np.int64) * cfg.stride
    return SpectralWindowSet(features=feats, source_offsets=offsets)


def center_windows(windows: SpectralWindowSet) -> SpectralWindowSet:
    """Subtract the per-feature mean across windows.

    Centering removes the static spectral profile so the autoencoder models
    only window-to-window variation; feature variances are left untouched so
    a signal whose windows barely differ keeps a near-zero feature matrix.
    """
    centered = windows.features - windows.features.mean(axis=0)
    return SpectralWindowSet(features=centered, source_offsets=windows.source_offsets)


def init_model(cfg: AeConfig, input_dim: int) -> AeModel:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases."""
    cfg.validate(input_dim)
    rng = np.random.default_rng(cfg.seed)

    def layer(fan_in: int, fan_out: int) -> np.ndarray:
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=(fan_in, fan_out))

    h, k = cfg.hidden_dim, cfg.latent_dim
    return AeModel(
        w_enc_in=layer(input_dim, h), b_enc_in=np.zeros(h),
        w_enc_out=layer(h, k), b_enc_out=np.zeros(k),
        w_dec_in=layer(k, h), b_dec_in=np.zeros(h),
        w_dec_out=layer(h, input_dim), b_dec_out=np.zeros(input_dim),
    )


def train(model: AeModel, windows: SpectralWindowSet,
          cfg: AeConfig) -> tuple[AeModel, TrainLog]:
    """Run full-batch gradient descent; returns the trained copy and the log."""
    X = np.ascontiguousarray(windows.features)
    if X.shape[0] < 2:
        raise InsufficientData("training needs at least two windows")
    if X.shape[1] != model.input_dim:
        raise DimensionMismatch(
            f"feature dim {X.shape[1]} != model input {model.input_dim}")
    out = model.copy()
    log, diverged = kernels.ae_train_loop(
        X, *out.weights(), cfg.learning_rate, cfg.epochs, cfg.invariance_weight)
    if diverged >= 0:
        raise DivergedTraining(f"non-finite loss at epoch {diverged}")
    return out, TrainLog(total=np.asarray(log[:, 0]).copy(),
                         reconstruction=np.asarray(log[:, 1]).copy(),
                         invariance=np.asarray(log[:, 2]).copy())


def encode(model: AeModel, windows: SpectralWindowSet) -> np.ndarray:
    """Latent code per window, shape (n_windows, latent_dim)."""
    X = np.ascontiguousarray(windows.features)
    if X.shape[1] != model.input_dim:
        raise DimensionMismatch(
            f"feature dim {X.shape[1]} != model input {model.input_dim}")
    return kernels.ae_encode(X, model.w_enc_in, model.b_enc_in,
                             model.w_enc_out, model.b_enc_out)


def reconstruct(model: AeModel,
                windows: SpectralWindowSet) -> tuple[SpectralWindowSet, np.ndarray]:
    """Decoder(encoder(x)) per window plus the squared error per window."""
    Z = encode(model, windows)
    Y = kernels.ae_decode(Z, model.w_dec_in, model.b_dec_in,
                          model.w_dec_out, model.b_dec_out)
    errors = np.sum((windows.features - Y) ** 2, axis=1)
    return (SpectralWindowSet(features=Y, source_offsets=windows.source_offsets),
            errors)


def dissimilarity_curve(latents: np.ndarray) -> np.ndarray:
    """Euclidean distance between consecutive latent codes."""
    Z = np.asarray(latents, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[0] < 2:
        raise InsufficientData("need >= 2 latent vectors")
    diffs = Z[1:] - Z[:-1]
    return np.sqrt(np.sum(diffs * diffs, axis=1))


def loss_and_grads(model: AeModel, X: np.ndarray,
                   lam: float) -> tuple[float, tuple[np.ndarray, ...]]:
    """One forward/backward pass; used by the finite-difference gradient test.

    Returns (loss, grads) with grads ordered like AeModel.weights().
    """
    W1, b1, W2, b2, W3, b3, W4, b4 = model.weights()
    T = X.shape[0]
    inv_norm = 1.0 / (T - 1) if T > 1 else 1.0
    H1 = np.tanh(X @ W1 + b1)
    Z = H1 @ W2 + b2
    H2 = np.tanh(Z @ W3 + b3)
    Y = H2 @ W4 + b4
    R = Y - X
    Dz = Z[1:] - Z[:-1]
    loss = float(np.sum(R * R) / T + lam * np.sum(Dz * Dz) * inv_norm)
    gY = (2.0 / T) * R
    gW4 = H2.T @ gY
    gb4 = gY.sum(axis=0)
    gH2 = (gY @ W4.T) * (1.0 - H2 * H2)
    gW3 = Z.T @ gH2
    gb3 = gH2.sum(axis=0)
    gZ = gH2 @ W3.T
    scale = 2.0 * lam * inv_norm
    gZ[1:] += scale * Dz
    gZ[:-1] -= scale * Dz
    gW2 = H1.T @ gZ
    gb2 = gZ.sum(axis=0)
    gH1 = (gZ @ W2.T) * (1.0 - H1 * H1)
    gW1 = X.T @ gH1
    gb1 = gH1.sum(axis=0)
    return loss, (gW1, gb1, gW2, gb2, gW3, gb3, gW4, gb4)
