"""Cartesian sweeps over SNR, variant, depth and trial."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import ExperimentConfig
from .metrics import ber, nmse_curve
from .trial import fmt, run_trial

SWEEP_HEADER = ("variant", "depth", "h", "snr_db", "trial", "seed", "ber", "final_nmse")


@dataclass(frozen=True)
class SweepRow:
    variant: str
    depth: int
    h: int
    snr_db: float
    trial: int
    seed: int
    ber: float
    final_nmse: float

    def cells(self) -> list[str]:
        return [self.variant, str(self.depth), str(self.h), fmt(self.snr_db), str(self.trial),
                str(self.seed), fmt(self.ber), fmt(self.final_nmse)]


def sweep_cells(config: ExperimentConfig) -> list[tuple]:
    """``(snr_db, variant, depth, trial)`` for every row.  LINEAR has no
    tree, so it is visited once per SNR and trial with depth 0."""
    cells = []
    for snr in config.snr_sweep:
        for variant in config.variants:
            depths = (0,) if variant == "LINEAR" else config.depths
            for depth in depths:
                for trial in range(config.trials):
                    cells.append((snr, variant, depth, trial))
    return cells


def _run_cell(args) -> SweepRow:
    config, (snr, variant, depth, trial) = args
    seed = config.seed + trial
    rec = run_trial(config, seed, variant=variant, depth=depth, snr_db=snr)
    return SweepRow(variant, depth, config.h, float(snr), trial, seed, ber(rec),
                    float(nmse_curve(rec)[-1]))


def run_sweep(config: ExperimentConfig, out=None, jobs: int = 1) -> list[SweepRow]:
    """Run every cell and write the CSV to ``out`` (default
    ``config.output_path``; pass ``False`` to skip writing).  Trials are
    independent, so ``jobs > 1`` runs them in worker processes; row order is
    the same either way."""
    work = [(config, cell) for cell in sweep_cells(config)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell, work))
    else:
        rows = [_run_cell(w) for w in work]
    path = config.output_path if out is None else out
    if path is not False:
        write_sweep_csv(rows, path)
    return rows


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow(row.cells())


def mean_by_cell(rows) -> dict:
    """Average BER and final NMSE over trials, keyed by ``(variant, depth, snr_db)``."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row.variant, row.depth, row.snr_db), []).append(row)
    return {
        key: (sum(r.ber for r in rs) / len(rs), sum(r.final_nmse for r in rs) / len(rs))
        for key, rs in groups.items()
    }
