"""Per-sample arithmetic operation counts of the tree equalizer.

:func:`counted_step` is a scalar transcription of one TBT iteration in which
every floating-point add, subtract, multiply, divide, exponential and
comparison is tallied.  It updates the state exactly like
:func:`~tbteq.equalizers.tbt_step`, which the test-suite checks, so the
count describes the algorithm that is actually run.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..equalizers import TbtState, init_state
from ..errors import UsageError


class OpCounter(Counter):
    @property
    def total(self) -> int:
        return sum(self.values())


def _dot(a, b, ops: OpCounter) -> float:
    acc = 0.0
    for x, y in zip(a, b):
        acc += x * y
    ops["mul"] += len(a)
    ops["add"] += len(a)
    return acc


def counted_step(state: TbtState, r, true_bit=None, ops: OpCounter | None = None):
    """One TBT / FBT iteration with operation tallies; returns
    ``(soft_estimate, ops)`` and updates ``state`` in place."""
    if state.finest:
        raise UsageError("counted_step covers the combined (TBT / FBT) equalizers")
    ops = OpCounter() if ops is None else ops
    r = [float(x) for x in r]
    n, n_int, eps = state.topology.node_count, state.topology.internal_count, state.sigma_floor
    W, D, u, rho = state.filters, state.directions, state.node_weights, state.rho

    sig = []
    for j in range(n_int):
        x = _dot(D[j], r, ops)
        ex = math.exp(-abs(x))
        s = ex / (1.0 + ex) if x > 0 else 1.0 / (1.0 + ex)
        ops.update(exp=1, add=1, div=1, cmp=3)
        sig.append(min(max(s, eps), 1.0 - eps))
        ops["add"] += 1
    ids = [1.0] + [0.0] * (n - 1)
    for j in range(n_int):
        ids[2 * j + 1] = sig[j] * ids[j]
        ids[2 * j + 2] = (1.0 - sig[j]) * ids[j]
        ops.update(mul=2, add=1)
    est = [_dot(W[k], r, ops) for k in range(n)]
    z = [ids[k] * est[k] for k in range(n)]
    ops["mul"] += n
    beta = [_dot(rho[k], u, ops) for k in range(n)]
    soft = _dot(z, beta, ops)
    ops["cmp"] += 1
    ref = float(true_bit) if state.mode == "train" else (1.0 if soft >= 0.0 else -1.0)
    e = ref - soft
    ops["add"] += 1

    coef = []
    if state.adapts_boundaries:
        sub = [beta[k] * est[k] * ids[k] for k in range(n)]
        ops["mul"] += 2 * n
        for k in range(n // 2, 0, -1):
            sub[k - 1] += sub[2 * k - 1] + sub[2 * k]
            ops["add"] += 2
        for j in range(n_int):
            sj = sig[j]
            term = sub[2 * j + 1] / sj - sub[2 * j + 2] / (1.0 - sj)
            coef.append(state.separator_step[j] * e * (-sj * (1.0 - sj) * term))
            ops.update(div=2, add=3, mul=5)
    for k in range(n):
        g = state.filter_step[k] * e * ids[k]
        ops["mul"] += 2
        for c in range(len(r)):
            W[k, c] += g * r[c]
        ops["mul"] += len(r)
        ops["add"] += len(r)
    for k in range(n):
        u[k] += state.weight_step * e * z[k]
    ops.update(mul=2 * n, add=n)
    for j, cj in enumerate(coef):
        for c in range(len(r)):
            D[j, c] += cj * r[c]
        ops["mul"] += len(r)
        ops["add"] += len(r)
    return soft, ops


@dataclass(frozen=True)
class ComplexityRow:
    depth: int
    nodes: int
    h: int
    ops_per_sample: float
    #: ratio to the previous depth's count (None for the first row)
    ratio: float | None


def measure_ops(depth: int, h: int = 8, samples: int = 4, seed: int = 0) -> float:
    """Mean operation count per sample of a TBT state on random inputs."""
    rng = np.random.default_rng(seed)
    state = init_state(depth, h, eta=0.01, zeta=0.01, init="random", seed=seed)
    total = 0
    for _ in range(samples):
        r = np.append(rng.standard_normal(h), 1.0)
        total += counted_step(state, r, rng.choice([-1.0, 1.0]))[1].total
    return total / samples


def complexity_table(depths=(0, 1, 2, 3, 4, 5), h: int = 8) -> list[ComplexityRow]:
    rows, prev = [], None
    for d in depths:
        ops = measure_ops(d, h)
        rows.append(ComplexityRow(d, 2 ** (d + 1) - 1, h, ops, None if prev is None else ops / prev))
        prev = ops
    return rows
