"""Plain LMS linear (affine) equalizer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


def linear_lms_step(w, r, reference, mu: float = 0.01):
    """One LMS iteration; returns ``(estimate, error, new_w)``."""
    w = np.asarray(w, dtype=float)
    r = np.asarray(r, dtype=float)
    if w.shape != r.shape:
        raise DomainError(f"filter length {w.shape} does not match regressor {r.shape}")
    estimate = float(w @ r)
    error = float(reference) - estimate
    return estimate, error, w + mu * error * r


@dataclass
class LinearState:
    filter: np.ndarray
    step: float = 0.01
    mode: str = "train"
    kind: str = "LINEAR"

    @classmethod
    def zeros(cls, h: int, h_f: int = 0, mu: float = 0.01, mode: str = "train") -> "LinearState":
        return cls(np.zeros(h + h_f + 1), mu, mode)

    @property
    def regressor_length(self) -> int:
        return self.filter.size
