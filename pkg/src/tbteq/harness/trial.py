"""A single seeded trial: bits -> channel -> equalizer -> record."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

import numpy as np

from ..channel import propagate, repeat_to_length, training_sequence
from ..equalizers import LinearState, init_state, per_depth, stream
from ..tree import alpha
from .config import ExperimentConfig

#: transmitted bits use seed ``trial_seed + BITS_SEED_OFFSET``, the channel
#: uses ``trial_seed`` itself
BITS_SEED_OFFSET = 1000


@dataclass
class ExperimentRecord:
    variant: str
    depth: int
    seed: int
    train_length: int
    errors: np.ndarray
    soft: np.ndarray
    decisions: np.ndarray
    true_bits: np.ndarray
    references: np.ndarray
    #: ``u`` after every ``snapshot_every`` samples; rows match ``snapshot_times``
    weight_snapshots: np.ndarray | None
    snapshot_times: np.ndarray
    #: ``phi(t) = rho @ z(t)``, so the soft estimate is ``u(t) . phi(t)``
    features: np.ndarray | None
    final_node_weights: np.ndarray | None

    @property
    def length(self) -> int:
        return self.errors.size


def transmitted_bits(config: ExperimentConfig, seed: int) -> np.ndarray:
    if config.training == "file":
        seq = training_sequence("file", 10**9, path=config.training_file)
        return repeat_to_length(seq, config.total_symbols)
    return training_sequence("pseudo_random", config.total_symbols, seed=seed + BITS_SEED_OFFSET)


def fit_per_depth(values, depth: int) -> tuple:
    """Trim or pad (with the last entry) a per-depth list to ``depth`` items."""
    values = tuple(values)
    if depth == 0:
        return values[:1]
    return values[:depth] + values[-1:] * max(0, depth - len(values))


def applied_eta(config: ExperimentConfig, depth: int) -> float:
    """Combination step handed to the equalizer.

    The weight update moves the estimate by ``eta * sum_m b_m^2`` over the
    ``alpha(depth)`` models, so a fixed ``eta`` becomes unstable as the tree
    deepens; ``eta_scale = "models"`` divides it by ``alpha(depth)``.
    """
    if config.eta_scale == "models":
        return config.eta / alpha(depth)
    return config.eta


def build_equalizer(config: ExperimentConfig, variant: str, depth: int, seed: int):
    if variant == "LINEAR":
        return LinearState.zeros(config.h, config.h_f, config.mu)
    return init_state(
        depth,
        config.h,
        config.h_f,
        mu=config.mu,
        eta=applied_eta(config, depth),
        zeta=per_depth(fit_per_depth(config.zeta, depth), depth) if depth > 0 else 0.0,
        init=config.init,
        axis_offset=config.axis_offset,
        axis_gain=fit_per_depth(config.axis_gain, depth),
        seed=seed,
        kind=variant,
    )


def run_trial(config: ExperimentConfig, seed: int, variant: str | None = None,
              depth: int | None = None, snr_db: float | None = None) -> ExperimentRecord:
    """Run one trial.  ``variant``, ``depth`` and ``snr_db`` override the
    config (the sweep uses them to visit its grid)."""
    variant = config.variant if variant is None else variant
    depth = config.depth if depth is None else depth
    channel = replace(config.channel, seed=seed)
    if snr_db is not None:
        channel = replace(channel, snr_db=float(snr_db))
    bits = transmitted_bits(config, seed)
    received = propagate(channel, bits)
    state = build_equalizer(config, variant, depth, seed)
    res = stream(state, received, bits, config.train_length, config.h, config.h_f,
                 config.snapshot_every, backend=config.backend)
    if variant == "LINEAR":
        features, final_u = None, None
    else:
        features = res.node_outputs @ state.rho
        final_u = state.node_weights.copy()
    return ExperimentRecord(
        variant=variant,
        depth=depth if variant != "LINEAR" else 0,
        seed=seed,
        train_length=config.train_length,
        errors=res.errors,
        soft=res.soft,
        decisions=res.decisions,
        true_bits=bits,
        references=res.references,
        weight_snapshots=res.weight_snapshots,
        snapshot_times=res.snapshot_times,
        features=features,
        final_node_weights=final_u,
    )


def fmt(x: float) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def record_csv(record: ExperimentRecord) -> str:
    """Per-sample CSV: ``t,e,nmse,decision,true_bit`` plus node weights on
    snapshot rows."""
    from .metrics import nmse_curve

    nmse = nmse_curve(record)
    snaps = record.weight_snapshots
    n = 0 if snaps is None else snaps.shape[1]
    header = ["t", "e", "nmse", "decision", "true_bit"] + [f"u_{k}" for k in range(1, n + 1)]
    at = {int(t): i for i, t in enumerate(record.snapshot_times)} if n else {}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for t in range(record.length):
        row = [t + 1, fmt(record.errors[t]), fmt(nmse[t]), int(record.decisions[t]),
               int(record.true_bits[t])]
        if n:
            i = at.get(t + 1)
            row += [fmt(v) for v in snaps[i]] if i is not None else [""] * n
        writer.writerow(row)
    return buf.getvalue()


def write_record_csv(record: ExperimentRecord, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(record_csv(record))
