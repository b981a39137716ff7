"""Run configuration: flat key-value config files, CLI flag merging and
deterministic per-stage seed derivation from one global seed."""

from __future__ import annotations

import os
import zlib
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .autoenc import AeConfig, WindowingConfig
from .dsmetric import ScaleGrid, scale_grid
from .errors import InputError

ENV_CONFIG_PATH = "DSMEASURE_CONFIG"


class ConfigError(InputError):
    """Invalid config file or flag value (maps to exit code 2)."""


def derive_seed(base: int, *keys) -> int:
    """Stable 64-bit seed for a named stage.

    String keys hash via crc32, so (base, "ds", subject, roi) gives every
    series its own reproducible stream regardless of evaluation order.
    """
    ints = []
    for k in keys:
        if isinstance(k, (int, np.integer)):
            ints.append(int(k) & 0xFFFFFFFF)
        else:
            ints.append(zlib.crc32(str(k).encode("utf-8")))
    ss = np.random.SeedSequence(entropy=int(base), spawn_key=tuple(ints))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class RunConfig:
    """Every knob of the pipeline; field names match the config-file keys
    with the section prefix dropped (e.g. ``ae.latent_dim``)."""

    # windowing.*
    window_len: int = 20
    stride: int = 1
    crop_len: int | None = None
    # ae.*
    hidden_dim: int = 16
    latent_dim: int = 4
    learning_rate: float = 0.01
    epochs: int = 500
    invariance_weight: float = 0.1
    # grid.*
    scale_min: int = 5
    scale_step: int = 2
    scale_max: int = 50
    # ds.*
    threshold: float = 1.5
    # model.*
    model_kind: str = "random_forest"
    model_learning_rate: float | None = None
    model_epochs: int | None = None
    model_l2: float | None = None
    model_trees: int | None = None
    model_depth: int | None = None
    model_subsample: float | None = None
    # eval.*
    folds: int = 5
    # importance.*
    repeats: int = 10
    # project.*
    method: str = "pca"
    perplexity: float = 15.0
    iterations: int = 1000
    # global
    seed: int = 0

    def windowing(self) -> WindowingConfig:
        return WindowingConfig(window_len=self.window_len, stride=self.stride,
                               crop_len=self.crop_len)

    def ae(self, seed: int) -> AeConfig:
        return AeConfig(hidden_dim=self.hidden_dim, latent_dim=self.latent_dim,
                        learning_rate=self.learning_rate, epochs=self.epochs,
                        invariance_weight=self.invariance_weight, seed=seed)

    def grid(self) -> ScaleGrid:
        return scale_grid(self.scale_min, self.scale_step, self.scale_max)

    def model_overrides(self) -> dict:
        pairs = {
            "learning_rate": self.model_learning_rate,
            "epochs": self.model_epochs,
            "l2": self.model_l2,
            "n_trees": self.model_trees,
            "max_depth": self.model_depth,
            "subsample": self.model_subsample,
        }
        return {k: v for k, v in pairs.items() if v is not None}

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# config-file key -> (RunConfig field, converter)
_KEYMAP = {
    "windowing.window_len": ("window_len", int),
    "windowing.stride": ("stride", int),
    "windowing.crop_len": ("crop_len", int),
    "ae.hidden_dim": ("hidden_dim", int),
    "ae.latent_dim": ("latent_dim", int),
    "ae.learning_rate": ("learning_rate", float),
    "ae.epochs": ("epochs", int),
    "ae.invariance_weight": ("invariance_weight", float),
    "grid.min": ("scale_min", int),
    "grid.step": ("scale_step", int),
    "grid.max": ("scale_max", int),
    "ds.threshold": ("threshold", float),
    "model.kind": ("model_kind", str),
    "model.learning_rate": ("model_learning_rate", float),
    "model.epochs": ("model_epochs", int),
    "model.l2": ("model_l2", float),
    "model.trees": ("model_trees", int),
    "model.depth": ("model_depth", int),
    "model.subsample": ("model_subsample", float),
    "eval.folds": ("folds", int),
    "importance.repeats": ("repeats", int),
    "project.method": ("method", str),
    "project.perplexity": ("perplexity", float),
    "project.iterations": ("iterations", int),
    "seed": ("seed", int),
}


def load_config_file(path) -> dict:
    """Parse ``section.key = value`` lines; '#' starts a comment."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    out = {}
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{p}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYMAP:
            raise ConfigError(f"{p}:{lineno}: unknown key {key!r}")
        field_name, conv = _KEYMAP[key]
        try:
            out[field_name] = conv(value)
        except ValueError:
            raise ConfigError(f"{p}:{lineno}: bad value for {key!r}: {value!r}") from None
    return out


def resolve_config(config_path: str | None, flag_overrides: dict) -> RunConfig:
    """Defaults < config file (explicit or $DSMEASURE_CONFIG) < CLI flags."""
    cfg = RunConfig()
    path = config_path or os.environ.get(ENV_CONFIG_PATH) or None
    if path:
        for key, value in load_config_file(path).items():
            setattr(cfg, key, value)
    for key, value in flag_overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg
