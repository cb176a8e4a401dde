"""Regressor construction, including decision feedback."""

from __future__ import annotations

from collections import deque

import numpy as np

from ..errors import DomainError


def dfe_extend(window, decisions) -> np.ndarray:
    """``[received window, past decisions, 1]``."""
    decisions = np.asarray(decisions, dtype=float).ravel()
    if not np.all(np.isin(decisions, (-1.0, 1.0))):
        raise DomainError("decisions must be +1 or -1")
    return np.concatenate([np.asarray(window, dtype=float).ravel(), decisions, [1.0]])


def regressor(window) -> np.ndarray:
    return dfe_extend(window, ())


class RegressorBuffer:
    """Sliding ``[r(t), ..., r(t-h+1), b(t-1), ..., b(t-h_f), 1]`` builder.

    Received samples before the first one are zero; fed-back symbols before
    the first decision are +1.
    """

    def __init__(self, h: int, h_f: int = 0):
        self.h, self.h_f = h, h_f
        self._window = deque([0.0] * h, maxlen=h)
        self._past = deque([1.0] * h_f, maxlen=max(h_f, 1))

    def push(self, sample: float) -> np.ndarray:
        self._window.appendleft(float(sample))
        past = list(self._past)[: self.h_f]
        return dfe_extend(list(self._window), past)

    def feed_back(self, symbol: float) -> None:
        if self.h_f:
            self._past.appendleft(float(symbol))
