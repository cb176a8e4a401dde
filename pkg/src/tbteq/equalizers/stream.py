"""Run an equalizer over a whole received block.

Two backends produce the same trajectory: ``"python"`` calls the per-step
functions of :mod:`tbt` / :mod:`variants`, ``"numba"`` runs a compiled loop.
Samples with index ``t < train_length`` (0-based) are processed in train
mode, the rest decision directed.  Either way ``state`` is left holding the
final parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from ..errors import UsageError
from .dfe import RegressorBuffer
from .linear import LinearState
from .tbt import TbtState
from .variants import variant_step


@dataclass
class StreamResult:
    soft: np.ndarray
    decisions: np.ndarray
    errors: np.ndarray
    references: np.ndarray
    #: ``z_k(t) = id_k(t) * b_hat_k(t)`` per sample; None for LINEAR
    node_outputs: np.ndarray | None
    #: node weights after samples ``snapshot_times`` (1-based counts)
    weight_snapshots: np.ndarray | None
    snapshot_times: np.ndarray


def _snapshot_times(length: int, every: int) -> np.ndarray:
    if every <= 0:
        return np.zeros(0, dtype=np.int64)
    return np.arange(every, length + 1, every, dtype=np.int64)


def stream_python(state, received, bits, train_length: int, h: int, h_f: int = 0,
                  snapshot_every: int = 100) -> StreamResult:
    received = np.asarray(received, dtype=float)
    length = received.size
    is_tree = isinstance(state, TbtState)
    n = state.topology.node_count if is_tree else 0
    out = {name: np.empty(length) for name in ("soft", "dec", "err", "ref")}
    z = np.empty((length, n)) if is_tree else None
    times = _snapshot_times(length, snapshot_every)
    snaps = np.empty((times.size, n)) if is_tree else None
    buf = RegressorBuffer(h, h_f)
    s = 0
    for t in range(length):
        state.mode = "train" if t < train_length else "decision_directed"
        r = buf.push(received[t])
        if r.size != state.regressor_length:
            raise UsageError(f"regressor length {r.size} != equalizer length {state.regressor_length}")
        step = variant_step(state.kind, state, r, bits[t] if t < train_length else None)
        ref = float(bits[t]) if t < train_length else step.decision
        out["soft"][t], out["dec"][t], out["err"][t], out["ref"][t] = (
            step.soft_estimate, step.decision, step.soft_error, ref)
        if is_tree:
            z[t] = step.indicators * step.node_estimates
        buf.feed_back(ref)
        if s < times.size and times[s] == t + 1:
            if is_tree:
                snaps[s] = state.node_weights
            s += 1
    return StreamResult(out["soft"], out["dec"], out["err"], out["ref"], z, snaps, times)


@nb.njit(cache=True)
def _stream_kernel(received, bits, train_length, h, h_f, W, u, D, mu, eta, zeta, rho,
                   finest, adapt, eps, snap_times,
                   soft_out, dec_out, err_out, ref_out, z_out, snap_out):
    length = received.shape[0]
    n, width = W.shape
    n_int = D.shape[0]
    reg = np.zeros(width)
    past = np.ones(max(h_f, 1))
    sig = np.zeros(max(n_int, 1))
    ids = np.zeros(n)
    est = np.zeros(n)
    beta = np.zeros(n)
    z = np.zeros(n)
    sub = np.zeros(n)
    coef = np.zeros(max(n_int, 1))
    leaf_start = n_int
    s = 0
    for t in range(length):
        for m in range(h):
            reg[m] = received[t - m] if t - m >= 0 else 0.0
        for m in range(h_f):
            reg[h + m] = past[m]
        reg[width - 1] = 1.0

        for j in range(n_int):
            x = 0.0
            for c in range(width):
                x += D[j, c] * reg[c]
            ex = np.exp(-abs(x))
            sj = ex / (1.0 + ex) if x > 0 else 1.0 / (1.0 + ex)
            sig[j] = min(max(sj, eps), 1.0 - eps)
        ids[0] = 1.0
        for j in range(n_int):
            ids[2 * j + 1] = sig[j] * ids[j]
            ids[2 * j + 2] = (1.0 - sig[j]) * ids[j]
        for k in range(n):
            x = 0.0
            for c in range(width):
                x += W[k, c] * reg[c]
            est[k] = x
            z[k] = ids[k] * x
        for k in range(n):
            if finest:
                beta[k] = 1.0 if k >= leaf_start else 0.0
            else:
                acc = 0.0
                for j in range(n):
                    acc += rho[k, j] * u[j]
                beta[k] = acc
        soft = 0.0
        for k in range(n):
            soft += z[k] * beta[k]
        dec = 1.0 if soft >= 0.0 else -1.0
        ref = bits[t] if t < train_length else dec
        e = ref - soft

        if adapt:
            for k in range(n):
                sub[k] = beta[k] * est[k] * ids[k]
            for k in range(n // 2, 0, -1):
                sub[k - 1] += sub[2 * k - 1] + sub[2 * k]
            for j in range(n_int):
                sj = sig[j]
                sj_term = sub[2 * j + 1] / sj - sub[2 * j + 2] / (1.0 - sj)
                coef[j] = zeta[j] * e * (-sj * (1.0 - sj) * sj_term)
        for k in range(n):
            if finest and k < leaf_start:
                continue
            g = mu[k] * e * ids[k]
            for c in range(width):
                W[k, c] += g * reg[c]
        if not finest:
            for k in range(n):
                u[k] += eta * e * z[k]
        if adapt:
            for j in range(n_int):
                for c in range(width):
                    D[j, c] += coef[j] * reg[c]

        soft_out[t] = soft
        dec_out[t] = dec
        err_out[t] = e
        ref_out[t] = ref
        for k in range(n):
            z_out[t, k] = z[k]
        for m in range(h_f - 1, 0, -1):
            past[m] = past[m - 1]
        if h_f > 0:
            past[0] = ref
        if s < snap_times.shape[0] and snap_times[s] == t + 1:
            for k in range(n):
                snap_out[s, k] = u[k]
            s += 1


def stream_numba(state, received, bits, train_length: int, h: int, h_f: int = 0,
                 snapshot_every: int = 100) -> StreamResult:
    received = np.ascontiguousarray(received, dtype=float)
    bits = np.ascontiguousarray(bits, dtype=float)
    length = received.size
    times = _snapshot_times(length, snapshot_every)
    is_tree = isinstance(state, TbtState)
    if is_tree:
        W, u, D = state.filters, state.node_weights, state.directions
        mu, eta, zeta = state.filter_step, state.weight_step, state.separator_step
        rho, finest, adapt = state.rho, state.finest, state.adapts_boundaries
        eps = state.sigma_floor
    elif isinstance(state, LinearState):
        # a depth-0 finest partition is exactly the linear LMS equalizer
        W, u, D = state.filter[None, :], np.zeros(1), np.zeros((0, state.filter.size))
        mu, eta, zeta = np.array([state.step]), 0.0, np.zeros(0)
        rho, finest, adapt, eps = np.ones((1, 1)), True, False, 1e-12
    else:
        raise UsageError(f"cannot stream a {type(state).__name__}")
    if W.shape[1] != h + h_f + 1:
        raise UsageError(f"regressor length {h + h_f + 1} != equalizer length {W.shape[1]}")
    n = W.shape[0]
    soft, dec, err, ref = (np.empty(length) for _ in range(4))
    z = np.empty((length, n))
    snaps = np.empty((times.size, n))
    W = np.ascontiguousarray(W)
    _stream_kernel(received, bits, int(train_length), int(h), int(h_f), W, u, D,
                   np.asarray(mu, dtype=float), float(eta), np.asarray(zeta, dtype=float),
                   np.ascontiguousarray(rho, dtype=float), bool(finest), bool(adapt), float(eps),
                   times, soft, dec, err, ref, z, snaps)
    if isinstance(state, LinearState):
        state.filter = W[0].copy()
        return StreamResult(soft, dec, err, ref, None, None, times)
    state.mode = "train" if length <= train_length else "decision_directed"
    return StreamResult(soft, dec, err, ref, z, snaps, times)


def stream(state, received, bits, train_length: int, h: int, h_f: int = 0,
           snapshot_every: int = 100, backend: str = "numba") -> StreamResult:
    if backend == "numba":
        return stream_numba(state, received, bits, train_length, h, h_f, snapshot_every)
    if backend == "python":
        return stream_python(state, received, bits, train_length, h, h_f, snapshot_every)
    raise UsageError(f"unknown backend {backend!r}")
