"""Soft hyperplane separators and the hierarchical indicator recursion."""

from __future__ import annotations

import numpy as np

#: Default clamp keeping sigma inside [eps, 1 - eps].
SIGMA_FLOOR = 1e-12


def _logistic_of_negative(x):
    """``1 / (1 + exp(x))`` without overflow for large ``|x|``."""
    x = np.asarray(x, dtype=float)
    ex = np.exp(-np.abs(x))
    return np.where(x > 0, ex / (1.0 + ex), 1.0 / (1.0 + ex))


def soft_separator(r, n, eps: float = SIGMA_FLOOR):
    """Soft membership of ``r`` in the first child region of a boundary
    with direction ``n`` (bias absorbed as the last entry of both)."""
    r = np.asarray(r, dtype=float)
    n = np.asarray(n, dtype=float)
    if r.shape[-1] != n.shape[-1]:
        raise ValueError(f"length mismatch: regressor {r.shape[-1]}, direction {n.shape[-1]}")
    return np.clip(_logistic_of_negative(n @ r), eps, 1.0 - eps)


def soft_separator_complex(r_re, r_im, n_re, n_im, eps: float = SIGMA_FLOOR):
    """Separator for complex regressors, using real and imaginary parts."""
    arrs = [np.asarray(a, dtype=float) for a in (r_re, r_im, n_re, n_im)]
    if len({a.shape[-1] for a in arrs}) != 1:
        raise ValueError("all four vectors must have the same length")
    r_re, r_im, n_re, n_im = arrs
    return np.clip(_logistic_of_negative(n_re @ r_re + n_im @ r_im), eps, 1.0 - eps)


def separator_gradient(r, sigma):
    """Derivative of the separator output with respect to its direction."""
    return -np.asarray(r, dtype=float) * sigma * (1.0 - sigma)


def compute_indicators(sigmas) -> np.ndarray:
    """Indicator of every node from the separator outputs of the internal
    nodes.

    ``sigmas[j-1]`` belongs to internal node ``j``; the result has
    ``2 * len(sigmas) + 1`` entries with ``id[k-1]`` for node ``k``.
    """
    sigmas = np.asarray(sigmas, dtype=float)
    n_internal = sigmas.size
    ids = np.empty(2 * n_internal + 1)
    ids[0] = 1.0
    lo = 1
    while lo <= n_internal:
        # nodes lo..2lo-1 form one level; their children are 2lo..4lo-1
        parents = ids[lo - 1 : 2 * lo - 1]
        s = sigmas[lo - 1 : 2 * lo - 1]
        ids[2 * lo - 1 : 4 * lo - 1 : 2] = s * parents
        ids[2 * lo : 4 * lo - 1 : 2] = (1.0 - s) * parents
        lo *= 2
    return ids
