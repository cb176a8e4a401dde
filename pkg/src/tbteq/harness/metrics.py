"""Error-rate, learning-curve and regret measurements on trial records."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

RIDGE = 1e-9


@dataclass
class MetricsSummary:
    ber: float
    nmse_curve: np.ndarray
    #: ``(checkpoints, regret)``; None when the record has no features
    regret_curve: tuple | None
    final_node_weights: np.ndarray | None


def ber(record, skip: int | None = None) -> float:
    """Fraction of wrong decisions over samples ``skip + 1 .. L`` (1-based).

    ``skip`` defaults to the training length of the record.
    """
    skip = record.train_length if skip is None else skip
    n = record.decisions.size
    if not 0 <= skip < n:
        raise DomainError(f"skip must lie in [0, {n}), got {skip}")
    return float(np.mean(record.decisions[skip:] != record.true_bits[skip:]))


def nmse_curve(record_or_errors) -> np.ndarray:
    """Running mean of the squared soft error, ``(1/t) sum_{tau<=t} e^2``."""
    e = np.asarray(getattr(record_or_errors, "errors", record_or_errors), dtype=float)
    if e.size == 0:
        raise DomainError("no errors to accumulate")
    return np.cumsum(e * e) / np.arange(1, e.size + 1)


def _solve(gram: np.ndarray, cross: np.ndarray) -> np.ndarray:
    return np.linalg.solve(gram + RIDGE * np.eye(gram.shape[0]), cross)


def offline_best_weights(features, references) -> tuple[np.ndarray, float]:
    """Fixed weight vector minimising ``sum_t (ref(t) - z . phi(t))^2`` and
    its cumulative loss (ridge ``1e-9`` on the normal equations)."""
    phi = np.atleast_2d(np.asarray(features, dtype=float))
    ref = np.asarray(references, dtype=float)
    if phi.shape[0] != ref.size:
        raise DomainError(f"{phi.shape[0]} feature rows but {ref.size} references")
    z = _solve(phi.T @ phi, phi.T @ ref)
    resid = ref - phi @ z
    return z, float(resid @ resid)


def log_checkpoints(length: int, count: int = 24, start: int = 10) -> np.ndarray:
    if length < 1:
        raise DomainError("length must be positive")
    pts = np.unique(np.round(np.geomspace(min(start, length), length, count)).astype(np.int64))
    return pts


def regret_curve(record, checkpoints=None) -> tuple[np.ndarray, np.ndarray]:
    """Online cumulative squared error minus that of the best fixed
    combination of the features, both over the first ``T`` samples, at each
    checkpoint ``T``."""
    if record.features is None:
        raise DomainError("record carries no combination features")
    phi, ref, e = record.features, record.references, record.errors
    pts = log_checkpoints(e.size) if checkpoints is None else np.asarray(checkpoints, dtype=np.int64)
    if pts.size and (pts.min() < 1 or pts.max() > e.size or np.any(np.diff(pts) <= 0)):
        raise DomainError("checkpoints must be increasing and lie in 1..L")
    n = phi.shape[1]
    gram, cross, y2 = np.zeros((n, n)), np.zeros(n), 0.0
    online = np.cumsum(e * e)
    out = np.empty(pts.size)
    lo = 0
    for i, hi in enumerate(pts):
        seg, rseg = phi[lo:hi], ref[lo:hi]
        gram += seg.T @ seg
        cross += seg.T @ rseg
        y2 += float(rseg @ rseg)
        z = _solve(gram, cross)
        # loss of z expanded through the accumulated moments
        loss = y2 - 2.0 * z @ cross + z @ gram @ z
        out[i] = online[hi - 1] - max(loss, 0.0)
        lo = hi
    return pts, out


def summarize(record) -> MetricsSummary:
    curve = regret_curve(record) if record.features is not None else None
    return MetricsSummary(ber(record), nmse_curve(record), curve, record.final_node_weights)
