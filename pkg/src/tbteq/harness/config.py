"""Experiment configuration and the flat ``key=value`` file format.

A config file holds one ``section.key = value`` pair per line; ``#`` starts a
comment.  Lists are comma separated.  Unknown keys raise
:class:`~tbteq.errors.ConfigError`.  Example::

    channel.snr_db = 20
    channel.saturation = 0.9
    equalizer.variant = TBT
    equalizer.zeta = 0.7, 4.1
    experiment.trials = 10
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..channel import DESK_TAPS, ChannelConfig, RandomWalk, Saturating, Sinusoidal, Static
from ..equalizers.variants import KINDS
from ..errors import ConfigError

SEED_ENV = "TBT_SEED"


@dataclass(frozen=True)
class ExperimentConfig:
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    variant: str = "TBT"
    depth: int = 2
    h: int = 8
    h_f: int = 0
    mu: float = 0.01
    #: combination step; with ``eta_scale = "models"`` the equalizer uses
    #: ``eta / alpha(depth)``, keeping the effective step depth independent
    eta: float = 0.05
    eta_scale: str = "models"
    #: separator step per internal depth (one value is broadcast)
    zeta: tuple = (0.015,)
    init: str = "axis"
    axis_offset: int = 1
    axis_gain: tuple = (1.0,)
    #: None means 10% of ``total_symbols``
    train_length: int | None = None
    total_symbols: int = 28000
    snr_sweep: tuple = (20.0, 30.0)
    variants: tuple = ("TBT", "FBT", "FF", "FT", "LINEAR")
    depths: tuple = (2,)
    trials: int = 10
    seed: int = 0
    output_path: str = "out.csv"
    training: str = "pseudo_random"
    training_file: str | None = None
    snapshot_every: int = 100
    backend: str = "numba"

    def __post_init__(self):
        if self.train_length is None:
            object.__setattr__(self, "train_length", self.total_symbols // 10)
        if self.total_symbols < 1:
            raise ConfigError("total_symbols must be positive")
        if not 0 <= self.train_length < self.total_symbols:
            raise ConfigError(
                f"train_length must lie in [0, total_symbols), got {self.train_length}"
            )
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        for kind in (self.variant, *self.variants):
            if kind not in KINDS:
                raise ConfigError(f"unknown variant {kind!r}; expected one of {KINDS}")
        if self.depth < 0 or any(d < 0 for d in self.depths):
            raise ConfigError("depths must be non-negative")
        if self.h < 1 or self.h_f < 0:
            raise ConfigError("need h >= 1 and h_f >= 0")
        if min(self.mu, self.eta, *self.zeta) < 0:
            raise ConfigError("step sizes must be non-negative")
        if self.training not in ("pseudo_random", "file"):
            raise ConfigError(f"unknown training kind {self.training!r}")
        if self.training == "file" and not self.training_file:
            raise ConfigError("training = file needs experiment.training_file")
        if self.backend not in ("numba", "python"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.eta_scale not in ("models", "none"):
            raise ConfigError(f"unknown eta_scale {self.eta_scale!r}")
        if self.init not in ("axis", "random"):
            raise ConfigError(f"unknown init policy {self.init!r}")


def paper_scale(config: ExperimentConfig) -> ExperimentConfig:
    """Restore the published experiment size on top of ``config``."""
    return replace(config, h=362, depth=2, depths=(2,), mu=0.01, total_symbols=28000,
                   train_length=2800, trials=10)


def _floats(text: str) -> tuple:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _words(text: str) -> tuple:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt(conv):
    return lambda text: None if text.strip().lower() in ("", "none") else conv(text)


_CHANNEL_KEYS = {
    "snr_db": float,
    "taps": _floats,
    "causal_taps": int,
    "anticausal_taps": int,
    "variation": str,
    "amplitude": float,
    "frequency": _floats,
    "phase": _floats,
    "step_std": float,
    "saturation": _opt(float),
    "noiseless": _bool,
}

_EXPERIMENT_KEYS = {
    "equalizer.variant": ("variant", str),
    "equalizer.depth": ("depth", int),
    "equalizer.h": ("h", int),
    "equalizer.h_f": ("h_f", int),
    "equalizer.mu": ("mu", float),
    "equalizer.eta": ("eta", float),
    "equalizer.eta_scale": ("eta_scale", str),
    "equalizer.zeta": ("zeta", _floats),
    "equalizer.init": ("init", str),
    "equalizer.axis_offset": ("axis_offset", int),
    "equalizer.axis_gain": ("axis_gain", _floats),
    "equalizer.backend": ("backend", str),
    "experiment.train_length": ("train_length", _opt(int)),
    "experiment.total_symbols": ("total_symbols", int),
    "experiment.snr_sweep": ("snr_sweep", _floats),
    "experiment.variants": ("variants", _words),
    "experiment.depths": ("depths", _ints),
    "experiment.trials": ("trials", int),
    "experiment.seed": ("seed", int),
    "experiment.output_path": ("output_path", str),
    "experiment.training": ("training", str),
    "experiment.training_file": ("training_file", _opt(str)),
    "experiment.snapshot_every": ("snapshot_every", int),
}


def _one(values: tuple):
    return values[0] if len(values) == 1 else values


def _build_channel(raw: dict) -> ChannelConfig:
    base = ChannelConfig()
    taps = raw.get("taps", DESK_TAPS)
    causal = raw.get("causal_taps", base.causal_taps)
    anticausal = raw.get("anticausal_taps", base.anticausal_taps)
    variation = raw.get("variation", "sinusoidal")
    if variation == "static":
        tv = Static()
    elif variation == "sinusoidal":
        tv = Sinusoidal(
            raw.get("amplitude", 0.3),
            _one(raw.get("frequency", (1e-4,))),
            _one(raw.get("phase", (0.0,))),
        )
    elif variation == "random_walk":
        tv = RandomWalk(raw.get("step_std", 1e-3))
    else:
        raise ConfigError(f"unknown channel.variation {variation!r}")
    sat = raw.get("saturation")
    return ChannelConfig(
        base_taps=tuple(taps),
        causal_taps=causal,
        anticausal_taps=anticausal,
        time_variation=tv,
        snr_db=raw.get("snr_db", base.snr_db),
        nonlinearity=None if sat is None else Saturating(sat),
        noiseless=raw.get("noiseless", False),
    )


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    channel_raw: dict = {}
    kwargs: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key.startswith("channel.") and key[8:] in _CHANNEL_KEYS:
                channel_raw[key[8:]] = _CHANNEL_KEYS[key[8:]](value)
            elif key in _EXPERIMENT_KEYS:
                name, conv = _EXPERIMENT_KEYS[key]
                kwargs[name] = conv(value)
            else:
                raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from exc
    try:
        kwargs["channel"] = _build_channel(channel_raw)
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path, env=None) -> ExperimentConfig:
    """Read a config file; ``TBT_SEED`` in ``env`` (default ``os.environ``)
    overrides ``experiment.seed``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    config = parse_config_text(text, str(path))
    return apply_seed_override(config, os.environ if env is None else env)


def apply_seed_override(config: ExperimentConfig, env) -> ExperimentConfig:
    if SEED_ENV in env and env[SEED_ENV].strip():
        try:
            return replace(config, seed=int(env[SEED_ENV]))
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env[SEED_ENV]!r}") from exc
    return config


def config_keys() -> list[str]:
    return sorted([f"channel.{k}" for k in _CHANNEL_KEYS] + list(_EXPERIMENT_KEYS))

