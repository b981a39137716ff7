"""Seeded synthetic signal generators for validation and desk-scale cohorts.

Gaussian variates come from an explicit Box-Muller transform of the seeded
PCG64 uniform stream, so any reimplementation that follows the same recipe
matches these generators statistically; bit-level equality is only promised
within this implementation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParameter

KIND_WHITE_NOISE = "white_noise"
KIND_AR1 = "ar1"
KIND_FLICKER = "flicker"
KIND_SINE = "sine"
KIND_LOGISTIC = "logistic_map"
KIND_MIX = "mix"
KINDS = (KIND_WHITE_NOISE, KIND_AR1, KIND_FLICKER, KIND_SINE,
         KIND_LOGISTIC, KIND_MIX)

# When sine parameters are left unset they are drawn per seed from these
# ranges. Periods of 14-18 samples sit inside the multi-scale analysis band
# (well above the smallest scale, below the spectral window length), where
# the measure resolves periodic structure most reliably.
SINE_FREQ_RANGE = (1.0 / 18.0, 1.0 / 14.0)
SINE_AMP_RANGE = (0.5, 2.0)

MIN_LENGTH = 10


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    length: int
    seed: int
    phi: float | None = None          # ar1
    frequency: float | None = None    # sine / mix
    amplitude: float | None = None    # sine / mix
    phase: float | None = None        # sine / mix
    r: float | None = None            # logistic_map
    x0: float | None = None           # logistic_map
    snr_db: float | None = None       # mix

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown generator kind {self.kind!r}")
        if self.length < MIN_LENGTH:
            raise InvalidParameter(f"length must be >= {MIN_LENGTH}")
        if self.kind == KIND_AR1 and self.phi is not None and not abs(self.phi) < 1:
            raise InvalidParameter(f"ar1 needs |phi| < 1, got {self.phi}")
        if self.frequency is not None and not 0 < self.frequency <= 0.5:
            raise InvalidParameter(f"frequency must be in (0, 0.5], got {self.frequency}")
        if self.amplitude is not None and self.amplitude <= 0:
            raise InvalidParameter(f"amplitude must be positive, got {self.amplitude}")
        if self.kind == KIND_LOGISTIC:
            if self.r is not None and not 0 < self.r <= 4:
                raise InvalidParameter(f"logistic r must be in (0, 4], got {self.r}")
            if self.x0 is not None and not 0 < self.x0 < 1:
                raise InvalidParameter(f"logistic x0 must be in (0, 1), got {self.x0}")
        if self.snr_db is not None and not np.isfinite(self.snr_db):
            raise InvalidParameter("snr_db must be finite")


def gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    """n standard normal variates via Box-Muller on the uniform stream.

    Pairs (z0, z1) = sqrt(-2 ln(1-u1)) * (cos, sin)(2 pi u2) are interleaved
    in draw order; the final z1 is dropped for odd n.
    """
    m = (n + 1) // 2
    u1 = rng.random(m)
    u2 = rng.random(m)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    z = np.empty(2 * m)
    z[0::2] = radius * np.cos(2.0 * np.pi * u2)
    z[1::2] = radius * np.sin(2.0 * np.pi * u2)
    return z[:n]


def _resolve_sine_params(spec: GeneratorSpec,
                         rng: np.random.Generator) -> tuple[float, float, float]:
    """Explicit sine parameters win; unset ones are drawn from the family
    ranges (frequency, then amplitude, then phase, in that order)."""
    f = spec.frequency if spec.frequency is not None else rng.uniform(*SINE_FREQ_RANGE)
    a = spec.amplitude if spec.amplitude is not None else rng.uniform(*SINE_AMP_RANGE)
    ph = spec.phase if spec.phase is not None else rng.uniform(0.0, 2.0 * np.pi)
    return float(f), float(a), float(ph)


def _variance(x: np.ndarray) -> float:
    return float(np.mean((x - x.mean()) ** 2))


def generate(spec: GeneratorSpec) -> np.ndarray:
    """Deterministic series for the spec; same spec, same bytes."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n = spec.length

    if spec.kind == KIND_WHITE_NOISE:
        return gaussian(rng, n)

    if spec.kind == KIND_AR1:
        phi = spec.phi if spec.phi is not None else 0.5
        eps = gaussian(rng, n)
        x = np.empty(n)
        x[0] = eps[0]
        for t in range(1, n):
            x[t] = phi * x[t - 1] + eps[t]
        return x

    if spec.kind == KIND_FLICKER:
        white = gaussian(rng, n)
        spectrum = np.fft.rfft(white)
        freqs = np.fft.rfftfreq(n)
        spectrum[1:] /= np.sqrt(freqs[1:])
        spectrum[0] = 0.0
        return np.fft.irfft(spectrum, n)

    if spec.kind == KIND_SINE:
        f, a, ph = _resolve_sine_params(spec, rng)
        t = np.arange(n, dtype=np.float64)
        return a * np.sin(2.0 * np.pi * f * t + ph)

    if spec.kind == KIND_LOGISTIC:
        r = spec.r if spec.r is not None else 4.0
        x0 = spec.x0 if spec.x0 is not None else 0.2
        x = np.empty(n)
        x[0] = x0
        for t in range(1, n):
            x[t] = r * x[t - 1] * (1.0 - x[t - 1])
        return x

    if spec.kind == KIND_MIX:
        f, a, ph = _resolve_sine_params(spec, rng)
        t = np.arange(n, dtype=np.float64)
        signal = a * np.sin(2.0 * np.pi * f * t + ph)
        noise = gaussian(rng, n)
        snr_db = spec.snr_db if spec.snr_db is not None else 6.0
        # SNR is the measured power ratio on the finite components
        target_noise_var = _variance(signal) / (10.0 ** (snr_db / 10.0))
        noise_var = _variance(noise)
        if noise_var <= 0.0:
            raise InvalidParameter("degenerate noise component")
        return signal + noise * np.sqrt(target_noise_var / noise_var)

    raise InvalidParameter(f"unknown generator kind {spec.kind!r}")


@dataclass(frozen=True)
class CohortSeries:
    subject_id: str
    label: int  # 0 for class A, 1 for class B
    values: np.ndarray


def cohort(spec_a: GeneratorSpec, spec_b: GeneratorSpec, n_per_class: int,
           base_seed: int) -> list[CohortSeries]:
    """n labelled series per class; class A uses seeds base_seed+i, class B
    continues at base_seed+n_per_class+i."""
    if n_per_class < 1:
        raise InvalidParameter("n_per_class must be >= 1")
    members: list[CohortSeries] = []
    for i in range(n_per_class):
        members.append(CohortSeries(
            subject_id=f"a{i:03d}", label=0,
            values=generate(replace(spec_a, seed=base_seed + i))))
    for i in range(n_per_class):
        members.append(CohortSeries(
            subject_id=f"b{i:03d}", label=1,
            values=generate(replace(spec_b, seed=base_seed + n_per_class + i))))
    return members
