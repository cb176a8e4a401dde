"""Discrete-time ISI channel with time-varying taps and AWGN.

The received sample is

    r(t) = sum_{k=-N2}^{N1} b(t - k) g_k(t) + nu(t)

optionally followed by a memoryless saturating nonlinearity.  Symbols outside
the transmitted block are zero.  ``base_taps`` is ordered from the most
anticausal tap ``g(-N2)`` to the last causal tap ``g(N1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ConfigError, DomainError, ParseError


@dataclass(frozen=True)
class Static:
    pass


@dataclass(frozen=True)
class Sinusoidal:
    """Each tap is scaled by ``1 + amplitude * sin(2 pi f_k t + phase_k)``.

    ``frequency`` and ``phase`` may be scalars or per-tap sequences.
    """

    amplitude: float = 0.3
    frequency: Union[float, tuple] = 1e-4
    phase: Union[float, tuple] = 0.0


@dataclass(frozen=True)
class RandomWalk:
    step_std: float = 1e-3


@dataclass(frozen=True)
class Saturating:
    scale: float = 1.0


TimeVariation = Union[Static, Sinusoidal, RandomWalk]

DESK_TAPS = (0.2, 1.0, 0.5, -0.3, 0.1)


@dataclass(frozen=True)
class ChannelConfig:
    base_taps: tuple = DESK_TAPS
    causal_taps: int = 3
    anticausal_taps: int = 1
    time_variation: TimeVariation = field(default_factory=lambda: Sinusoidal(0.3, 1e-4))
    snr_db: float = 30.0
    nonlinearity: Saturating | None = None
    seed: int = 0
    noiseless: bool = False

    def __post_init__(self):
        object.__setattr__(self, "base_taps", tuple(float(g) for g in self.base_taps))
        if self.causal_taps < 0 or self.anticausal_taps < 0:
            raise ConfigError("tap counts must be non-negative")
        if len(self.base_taps) != self.causal_taps + self.anticausal_taps + 1:
            raise ConfigError(
                f"expected {self.causal_taps + self.anticausal_taps + 1} base taps, "
                f"got {len(self.base_taps)}"
            )
        if not math.isfinite(self.snr_db):
            raise ConfigError("snr_db must be finite; use noiseless=True to disable noise")
        tv = self.time_variation
        if isinstance(tv, Sinusoidal) and not 0.0 <= tv.amplitude < 1.0:
            raise ConfigError(f"sinusoidal amplitude must lie in [0, 1), got {tv.amplitude}")
        if isinstance(tv, RandomWalk) and tv.step_std < 0:
            raise ConfigError("random-walk step_std must be non-negative")
        if self.nonlinearity is not None and self.nonlinearity.scale <= 0:
            raise ConfigError("saturation scale must be positive")

    @property
    def n_taps(self) -> int:
        return len(self.base_taps)

    @property
    def lags(self) -> np.ndarray:
        """Delay ``k`` of each entry of ``base_taps``."""
        return np.arange(-self.anticausal_taps, self.causal_taps + 1)


def _streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    walk, noise = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(walk), np.random.default_rng(noise)


@dataclass
class ChannelState:
    """Running state of a random-walk tap process."""

    current_taps: np.ndarray
    time_index: int
    rng: np.random.Generator

    @classmethod
    def start(cls, config: ChannelConfig) -> "ChannelState":
        rng, _ = _streams(config.seed)
        return cls(np.array(config.base_taps), 0, rng)

    def advance(self, step_std: float) -> np.ndarray:
        self.current_taps = self.current_taps + self.rng.normal(0.0, step_std, self.current_taps.shape)
        self.time_index += 1
        return self.current_taps


def noise_variance_from_snr(config: ChannelConfig) -> float:
    """Noise variance for unit-power BPSK through the base taps."""
    power = float(np.sum(np.square(config.base_taps)))
    if power == 0.0:
        raise DomainError("base taps are all zero")
    return power * 10.0 ** (-config.snr_db / 10.0)


def tap_trajectory(config: ChannelConfig, length: int) -> np.ndarray:
    """Tap vectors for ``t = 0..length-1`` as a ``(length, n_taps)`` array."""
    base = np.asarray(config.base_taps)
    tv = config.time_variation
    if isinstance(tv, Static) or length == 0:
        return np.tile(base, (length, 1))
    if isinstance(tv, Sinusoidal):
        n = config.n_taps
        freq = np.broadcast_to(np.asarray(tv.frequency, dtype=float), (n,))
        phase = np.broadcast_to(np.asarray(tv.phase, dtype=float), (n,))
        t = np.arange(length)[:, None]
        return base * (1.0 + tv.amplitude * np.sin(2.0 * np.pi * freq * t + phase))
    if isinstance(tv, RandomWalk):
        state = ChannelState.start(config)
        out = np.empty((length, config.n_taps))
        out[0] = state.current_taps
        for t in range(1, length):
            out[t] = state.advance(tv.step_std)
        return out
    raise ConfigError(f"unknown time variation {tv!r}")


def taps_at(config: ChannelConfig, t: int) -> np.ndarray:
    if t < 0:
        raise DomainError(f"time index must be non-negative, got {t}")
    return tap_trajectory(config, t + 1)[t]


def saturate(r: np.ndarray, scale: float) -> np.ndarray:
    return r / (1.0 + np.abs(r) / scale)


def propagate(config: ChannelConfig, bits) -> np.ndarray:
    """Send ``bits`` through the channel; the output has the same length."""
    b = np.asarray(bits, dtype=float)
    if b.ndim != 1 or b.size == 0:
        raise DomainError("bits must be a nonempty 1-D sequence")
    length = b.size
    taps = tap_trajectory(config, length)
    r = np.zeros(length)
    for i, k in enumerate(config.lags):
        shifted = np.zeros(length)
        if k >= 0:
            shifted[k:] = b[: length - k]
        else:
            shifted[:k] = b[-k:]
        r += taps[:, i] * shifted
    if not config.noiseless:
        _, rng = _streams(config.seed)
        r += rng.normal(0.0, math.sqrt(noise_variance_from_snr(config)), length)
    if config.nonlinearity is not None:
        r = saturate(r, config.nonlinearity.scale)
    return r


_SYMBOLS = {"+1": 1.0, "1": 1.0, "-1": -1.0, "−1": -1.0}


def read_sequence_file(path) -> np.ndarray:
    """Parse whitespace-separated ``+1`` / ``-1`` tokens."""
    tokens = Path(path).read_text(encoding="utf-8").split()
    if not tokens:
        raise ParseError(f"{path}: empty sequence file")
    out = []
    for pos, tok in enumerate(tokens):
        if tok not in _SYMBOLS:
            raise ParseError(f"{path}: token {pos} is {tok!r}, expected +1 or -1")
        out.append(_SYMBOLS[tok])
    return np.array(out)


def training_sequence(kind: str, length: int, seed: int = 0, path=None) -> np.ndarray:
    """A +-1 training sequence.

    ``kind="file"`` returns at most ``length`` symbols read from ``path``;
    ``kind="pseudo_random"`` draws ``length`` seeded symbols.
    """
    if length <= 0:
        raise DomainError("length must be positive")
    if kind == "file":
        if path is None:
            raise ConfigError("file training sequence requires a path")
        return read_sequence_file(path)[:length]
    if kind == "pseudo_random":
        rng = np.random.default_rng(seed)
        return rng.choice(np.array([-1.0, 1.0]), size=length)
    raise ConfigError(f"unknown training sequence kind {kind!r}")


def repeat_to_length(seq: np.ndarray, length: int) -> np.ndarray:
    reps = -(-length // len(seq))
    return np.tile(seq, reps)[:length]
