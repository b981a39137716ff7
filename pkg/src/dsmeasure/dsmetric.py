"""Multi-scale deviation-from-stochasticity measure.

Pipeline for one series x:

1. normalise x to [0, 1] by min-max (the measure is amplitude- and
   offset-free by construction);
2. spectral windows -> centred features -> autoencoder -> dissimilarity
   curve D (see :mod:`dsmeasure.autoenc`);
3. for every window size w in the scale grid, shift D block-wise by the
   local mean of the aligned input and take the KL divergence between the
   value/sum distributions of the aligned input and the shifted curve;
   CV1 = coefficient of variation of those per-scale divergences;
4. build the sparse prominence curve of x (prominence at peak positions,
   zero elsewhere), window it at every scale, take the per-window
   coefficient of variation (windows without peaks are skipped), and pool
   all values; CV2 = coefficient of variation of the pool;
5. DS = CV1 * CV2 / 100; values below the threshold (default 1.5) are
   labelled stochastic.

A stochastic signal keeps both branches flat: the divergences barely move
with scale and the prominence dispersion looks the same everywhere. Any
persistent structure makes the block means scale-dependent and the peak
layout non-uniform, inflating one or both factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import autoenc, kernels
from .autoenc import AeConfig, WindowingConfig
from .errors import (
    ConstantInput,
    CurveShorterThanScale,
    DegenerateStatistics,
    EmptyGrid,
    InsufficientData,
    InsufficientScales,
    LengthMismatch,
    NoUsableScales,
    NonFiniteInput,
    WindowOutOfRange,
    ZeroSupport,
)
from .numkernel import PeakList, as_series, coefficient_of_variation, find_peaks

STOCHASTIC = "stochastic"
NON_STOCHASTIC = "non-stochastic"
DEFAULT_THRESHOLD = 1.5
KL_EPS = 1e-8
CONSTANT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ScaleGrid:
    """Strictly increasing window sizes, all >= 2."""

    sizes: np.ndarray  # int64

    def __post_init__(self):
        s = np.asarray(self.sizes, dtype=np.int64)
        if s.size == 0:
            raise EmptyGrid("no scales")
        if s[0] < 2 or np.any(np.diff(s) <= 0):
            raise EmptyGrid("scales must be >= 2 and strictly increasing")
        object.__setattr__(self, "sizes", s)

    def __iter__(self):
        return iter(self.sizes.tolist())

    def __len__(self) -> int:
        return int(self.sizes.shape[0])


def scale_grid(start: int = 5, step: int = 2, stop: int = 50) -> ScaleGrid:
    """Arithmetic scale sequence start, start+step, ... not exceeding stop."""
    if start < 2 or step < 1 or stop < start:
        raise EmptyGrid(f"invalid grid spec ({start}, {step}, {stop})")
    return ScaleGrid(sizes=np.arange(start, stop + 1, step, dtype=np.int64))


DEFAULT_GRID = scale_grid()


@dataclass(frozen=True)
class BiasCorrectedCurve:
    values: np.ndarray
    scale: int


@dataclass(frozen=True)
class ProminenceCov:
    """Pooled per-window prominence CVs with per-scale provenance."""

    cov_values: np.ndarray
    # scale -> (start offset into cov_values, windows kept, windows skipped)
    per_scale: dict[int, tuple[int, int, int]] = field(default_factory=dict)

    def values_for_scale(self, scale: int) -> np.ndarray:
        start, count, _ = self.per_scale[scale]
        return self.cov_values[start:start + count]


@dataclass(frozen=True)
class DsResult:
    cv1: float
    cv2: float
    ds: float
    label: str
    kl_series: dict[int, float]          # scale -> divergence, ascending
    prominence_cov: ProminenceCov
    scales_used: ScaleGrid
    skipped_kl_scales: tuple[int, ...]   # wider than the curve
    threshold: float
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# single-scale operations
# ---------------------------------------------------------------------------

def window_bias(x, t: int, w: int) -> float:
    """Mean of x over the trailing window [t-w+1, t]."""
    xs = as_series(x, "x")
    if w < 1 or t - w + 1 < 0 or t >= xs.shape[0]:
        raise WindowOutOfRange(f"window [t-w+1, t]=[{t - w + 1}, {t}] outside series")
    return float(xs[t - w + 1:t + 1].mean())


def bias_correct(d, x_aligned, w: int) -> BiasCorrectedCurve:
    """Add the local mean of the aligned input to each block of the curve.

    Blocks are consecutive, non-overlapping runs of w steps; the final block
    keeps its remainder length so the corrected curve always spans the full
    input. Output length equals len(d).
    """
    dv = as_series(d, "d")
    xa = as_series(x_aligned, "x_aligned")
    if xa.shape[0] != dv.shape[0]:
        raise LengthMismatch(
            f"curve length {dv.shape[0]} != aligned series length {xa.shape[0]}")
    if w < 1 or w > dv.shape[0]:
        raise CurveShorterThanScale(f"scale {w} exceeds curve length {dv.shape[0]}")
    out = dv.copy()
    for lo in range(0, dv.shape[0], w):
        hi = min(lo + w, dv.shape[0])
        out[lo:hi] += xa[lo:hi].mean()
    return BiasCorrectedCurve(values=out, scale=int(w))


def to_value_distribution(values, eps: float = KL_EPS) -> np.ndarray:
    """Embed a non-negative series as a probability vector value/sum.

    Values below eps are floored at eps so the support is strictly positive.
    Unlike a min-max rescale this keeps the relative levels of the series,
    which is what makes the bias correction meaningful to the divergence.
    """
    v = as_series(values, "values")
    if np.any(v < 0.0):
        raise ZeroSupport("negative values cannot form a value/sum distribution")
    v = np.maximum(v, eps)
    return v / v.sum()


def kl_per_scale(x_aligned, d_tilde) -> float:
    """KL divergence between the value/sum embeddings of input and curve."""
    xa = as_series(x_aligned, "x_aligned")
    dt = np.asarray(d_tilde.values if isinstance(d_tilde, BiasCorrectedCurve)
                    else d_tilde, dtype=np.float64)
    if xa.shape[0] != dt.shape[0]:
        raise LengthMismatch(
            f"lengths differ: {xa.shape[0]} vs {dt.shape[0]}")
    if np.any(xa < 0.0) or np.any(dt < 0.0):
        raise ZeroSupport("operands must be non-negative")
    return float(kernels.kl_ratio_embedding(xa, dt, KL_EPS))


def cv1(kl_series: dict[int, float]) -> float:
    """Coefficient of variation of the per-scale divergences."""
    if len(kl_series) < 2:
        raise InsufficientScales(f"need >= 2 scales, got {len(kl_series)}")
    zs = np.asarray([kl_series[w] for w in sorted(kl_series)], dtype=np.float64)
    return coefficient_of_variation(zs)


def prominence_curve(peaks: PeakList, series_len: int) -> np.ndarray:
    """Sparse prominence curve: P[i] = prominence at peak positions, else 0."""
    curve = np.zeros(int(series_len), np.float64)
    curve[peaks.indices] = peaks.prominences
    return curve


def prominence_cov(peaks: PeakList, series_len: int,
                   grid: ScaleGrid = DEFAULT_GRID) -> ProminenceCov:
    """Per-window CV of the sparse prominence curve, pooled over all scales.

    Each scale w tiles the series with non-overlapping w-step windows;
    windows containing no peak are skipped. Scales contributing no window at
    all are recorded with zero counts.
    """
    if len(peaks) == 0:
        raise NoUsableScales("series has no strict local maxima")
    curve = prominence_curve(peaks, series_len)
    covs, starts, counts, skipped = kernels.prominence_cov_profile(
        curve, grid.sizes)
    per_scale = {int(w): (int(starts[i]), int(counts[i]), int(skipped[i]))
                 for i, w in enumerate(grid.sizes)}
    if covs.shape[0] == 0:
        raise NoUsableScales("no window of any scale contained a peak")
    return ProminenceCov(cov_values=covs, per_scale=per_scale)


def cv2(pc: ProminenceCov) -> float:
    """Coefficient of variation of the pooled prominence CVs."""
    if pc.cov_values.shape[0] < 2:
        raise InsufficientData(
            f"need >= 2 pooled COV values, got {pc.cov_values.shape[0]}")
    return coefficient_of_variation(pc.cov_values)


def classify_stochastic(ds: float, threshold: float = DEFAULT_THRESHOLD) -> str:
    """stochastic iff ds < threshold (the boundary value is non-stochastic)."""
    if not np.isfinite(ds):
        raise NonFiniteInput(f"ds value {ds!r} is not finite")
    return STOCHASTIC if ds < threshold else NON_STOCHASTIC


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

def normalize_series(x) -> np.ndarray:
    """Min-max normalise to [0, 1]; constant series are rejected."""
    xs = as_series(x, "x")
    lo = float(xs.min())
    hi = float(xs.max())
    if hi - lo < CONSTANT_TOLERANCE:
        raise ConstantInput("series is constant")
    return (xs - lo) / (hi - lo)


def ds_profile(x_norm: np.ndarray, d: np.ndarray,
               grid: ScaleGrid = DEFAULT_GRID,
               threshold: float = DEFAULT_THRESHOLD,
               window_len: int = 20) -> DsResult:
    """Deviation-from-stochasticity of a normalised series given its
    dissimilarity curve (steps 3-5 of the module pipeline)."""
    nd = d.shape[0]
    offset = window_len - 1
    if offset + nd > x_norm.shape[0]:
        raise LengthMismatch(
            f"curve of length {nd} does not fit series of length "
            f"{x_norm.shape[0]} at offset {offset}")
    x_al = np.ascontiguousarray(x_norm[offset:offset + nd])

    z, status = kernels.kl_profile(x_al, np.ascontiguousarray(d),
                                   grid.sizes, KL_EPS)
    kl_series = {int(w): float(z[i]) for i, w in enumerate(grid.sizes)
                 if status[i] == 0}
    skipped = tuple(int(w) for i, w in enumerate(grid.sizes) if status[i] != 0)
    if len(kl_series) < 2:
        raise InsufficientScales(
            f"only {len(kl_series)} scales fit a curve of length {nd}")
    if not all(np.isfinite(v) for v in kl_series.values()):
        raise NonFiniteInput("non-finite KL divergence in the scale profile")
    cv1_value = cv1(kl_series)

    peaks = find_peaks(x_norm)
    pc = prominence_cov(peaks, x_norm.shape[0], grid)
    cv2_value = cv2(pc)

    ds = cv1_value * cv2_value / 100.0
    return DsResult(
        cv1=cv1_value, cv2=cv2_value, ds=ds,
        label=classify_stochastic(ds, threshold),
        kl_series=kl_series, prominence_cov=pc, scales_used=grid,
        skipped_kl_scales=skipped, threshold=threshold,
        diagnostics={"curve_len": int(nd), "n_peaks": len(peaks)},
    )


def compute_ds(x, windowing: WindowingConfig = WindowingConfig(),
               ae: AeConfig = AeConfig(),
               grid: ScaleGrid = DEFAULT_GRID,
               threshold: float = DEFAULT_THRESHOLD) -> DsResult:
    """Full measure for one raw series: autoencoder front end + ds_profile."""
    x_norm = normalize_series(x)
    windows = autoenc.center_windows(
        autoenc.make_spectral_windows(x_norm, windowing))
    model = autoenc.init_model(ae, windows.feature_dim)
    model, log = autoenc.train(model, windows, ae)
    latents = autoenc.encode(model, windows)
    d = autoenc.dissimilarity_curve(latents)
    result = ds_profile(x_norm, d, grid, threshold, windowing.window_len)
    result.diagnostics.update(
        n_windows=windows.n_windows,
        loss_first=float(log.total[0]),
        loss_last=float(log.total[-1]),
    )
    return result
