"""Deterministic numeric primitives: DFT, descriptive statistics, KL
divergence, peak detection and topographic prominence.

All functions are pure, operate on float64 numpy arrays and raise typed
errors from :mod:`dsmeasure.errors` on contract violations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    ConstantSeries,
    CropOutOfRange,
    DegenerateStatistics,
    EmptyInput,
    InsufficientData,
    LengthMismatch,
    NotAPeak,
    NonFiniteInput,
    ZeroSupport,
)

MEAN_TOLERANCE = 1e-12


def as_series(values, name: str = "series") -> np.ndarray:
    """Coerce to a 1-D float64 array and reject NaN/Inf."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        x = x.reshape(-1)
    if x.size == 0:
        raise EmptyInput(f"{name} is empty")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return x


@dataclass(frozen=True)
class PeakList:
    """Strict local maxima of a series with their topographic prominences."""

    indices: np.ndarray      # int64, strictly increasing
    prominences: np.ndarray  # float64, parallel to indices, all > 0

    def __len__(self) -> int:
        return int(self.indices.shape[0])


# ---------------------------------------------------------------------------
# Fourier transforms
# ---------------------------------------------------------------------------

def dft(window) -> np.ndarray:
    """Discrete Fourier transform by the O(n^2) definition.

    bin[j] = sum_k x[k] * exp(-2*pi*i*j*k/n). Returns complex128 bins.
    """
    x = as_series(window, "window")
    return kernels.dft_direct(x)


def idft(spectrum) -> np.ndarray:
    """Inverse DFT; recovers the input of :func:`dft` within 1e-9."""
    spec = np.asarray(spectrum, dtype=np.complex128)
    if spec.size == 0:
        raise EmptyInput("spectrum is empty")
    return kernels.idft_direct(spec)


def fft(window) -> np.ndarray:
    """Radix-2 fast path; requires a power-of-two length.

    Agrees with :func:`dft` within 1e-9 on shared lengths.
    """
    x = as_series(window, "window")
    n = x.shape[0]
    if n & (n - 1) != 0:
        raise CropOutOfRange(f"radix-2 FFT needs a power-of-two length, got {n}")
    return kernels.fft_radix2(x)


def crop_modulus(spectrum, crop_len: int) -> np.ndarray:
    """Moduli of the first crop_len spectrum bins."""
    spec = np.asarray(spectrum, dtype=np.complex128)
    if not 1 <= crop_len <= spec.shape[0]:
        raise CropOutOfRange(
            f"crop_len {crop_len} outside [1, {spec.shape[0]}]")
    return np.abs(spec[:crop_len])


# ---------------------------------------------------------------------------
# descriptive statistics
# ---------------------------------------------------------------------------

def population_std(xs) -> float:
    """Standard deviation with the 1/N normalisation."""
    x = as_series(xs, "xs")
    return float(np.sqrt(np.mean((x - x.mean()) ** 2)))


def coefficient_of_variation(xs) -> float:
    """population_std(xs) / mean(xs) * 100.

    Raises DegenerateStatistics when |mean| < 1e-12 and InsufficientData for
    fewer than two values.
    """
    x = as_series(xs, "xs")
    if x.shape[0] < 2:
        raise InsufficientData("coefficient of variation needs >= 2 values")
    m = float(x.mean())
    if abs(m) < MEAN_TOLERANCE:
        raise DegenerateStatistics(f"mean magnitude {m!r} below {MEAN_TOLERANCE}")
    return float(np.sqrt(np.mean((x - m) ** 2)) / m * 100.0)


# ---------------------------------------------------------------------------
# discrete distributions and KL divergence
# ---------------------------------------------------------------------------

def normalize_to_distribution(xs, epsilon: float = 1e-8) -> np.ndarray:
    """Min-max rescale to [epsilon, 1], then divide by the sum.

    The result is a strictly positive probability vector preserving the
    shape of the input up to the affine rescale.
    """
    x = as_series(xs, "xs")
    if x.shape[0] < 2:
        raise InsufficientData("need >= 2 values to form a distribution")
    lo = float(x.min())
    hi = float(x.max())
    if hi - lo < 1e-12:
        raise ConstantSeries("all values equal; no distribution shape")
    y = epsilon + (1.0 - epsilon) * (x - lo) / (hi - lo)
    return y / y.sum()


def kl_divergence(p, q) -> float:
    """sum p_i * ln(p_i / q_i) in nats.

    Zero p entries contribute zero; any non-positive q entry raises
    ZeroSupport. Lengths must match.
    """
    pa = np.asarray(p, dtype=np.float64)
    qa = np.asarray(q, dtype=np.float64)
    if pa.shape != qa.shape:
        raise LengthMismatch(f"shapes {pa.shape} and {qa.shape} differ")
    if pa.size == 0:
        raise EmptyInput("empty distributions")
    if np.any(qa <= 0.0):
        raise ZeroSupport("q has non-positive entries")
    mask = pa > 0.0
    return float(np.sum(pa[mask] * np.log(pa[mask] / qa[mask])))


# ---------------------------------------------------------------------------
# peaks
# ---------------------------------------------------------------------------

def find_peaks(xs) -> PeakList:
    """All strict local maxima with their prominences.

    A peak is an index i with xs[i-1] < xs[i] > xs[i+1]; plateau edges do not
    qualify. Prominences follow :func:`peak_prominence`.
    """
    x = as_series(xs, "xs")
    if x.shape[0] < 3:
        raise InsufficientData("peak detection needs >= 3 samples")
    idx = kernels.find_peaks_strict(x)
    proms = kernels.peak_prominences_topographic(x, idx)
    return PeakList(indices=idx, prominences=proms)


def peak_prominence(xs, peak_index: int) -> float:
    """Topographic prominence of one strict local maximum.

    prominence = xs[peak] - max(left_base, right_base), each base being the
    minimum of xs between the peak and the nearest strictly higher sample on
    that side (or the series end).
    """
    x = as_series(xs, "xs")
    i = int(peak_index)
    if not (0 < i < x.shape[0] - 1) or not (x[i - 1] < x[i] > x[i + 1]):
        raise NotAPeak(f"index {peak_index} is not a strict local maximum")
    out = kernels.peak_prominences_topographic(x, np.asarray([i], dtype=np.int64))
    return float(out[0])
