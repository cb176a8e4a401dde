"""Turning boundaries tree equalizer and its tree-structured relatives.

Every node ``k`` of a depth-``d`` tree carries an affine filter ``w_k`` and a
combination weight ``u_k``; every internal node ``j`` carries a separator
direction ``n_j``.  The combined estimate over all embedded models is formed
directly from the node estimates:

    b_hat = sum_k id_k * (w_k . r) * beta_k,    beta = rho @ u

Arrays are 0-based: row ``k - 1`` belongs to node ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CapacityError, DomainError, UsageError
from ..tree import MAX_ENUM_DEPTH, RhoTable, TreeTopology, _models, cached_rho_table
from .separator import SIGMA_FLOOR, compute_indicators, soft_separator

TREE_KINDS = ("TBT", "FBT", "FF", "FT")
MODES = ("train", "decision_directed")


def quantize(x: float) -> float:
    """BPSK decision; a zero soft estimate maps to +1."""
    return 1.0 if x >= 0.0 else -1.0


@dataclass
class SeparatorState:
    direction: np.ndarray
    step_size: float


@dataclass
class StepOutput:
    soft_estimate: float
    decision: float
    soft_error: float
    node_estimates: np.ndarray
    indicators: np.ndarray
    betas: np.ndarray


@dataclass
class TbtState:
    """Mutable state of a tree equalizer.

    ``kind`` selects the variant: ``TBT`` adapts filters, node weights and
    boundaries; ``FBT`` freezes the boundaries; ``FF`` / ``FT`` use only the
    finest partition (all leaves), with frozen / adapting boundaries.
    """

    topology: TreeTopology
    rho_table: RhoTable
    filters: np.ndarray
    node_weights: np.ndarray
    directions: np.ndarray
    filter_step: np.ndarray
    weight_step: float
    separator_step: np.ndarray
    mode: str = "train"
    sigma_floor: float = SIGMA_FLOOR
    kind: str = "TBT"
    _rho: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, n_int = self.topology.node_count, self.topology.internal_count
        if self.kind not in TREE_KINDS:
            raise UsageError(f"unknown tree equalizer kind {self.kind!r}")
        if self.mode not in MODES:
            raise UsageError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 < self.sigma_floor <= 1e-6:
            raise DomainError("sigma_floor must lie in (0, 1e-6]")
        if self.filters.shape[0] != n or self.node_weights.shape != (n,):
            raise DomainError("filters / node weights do not match the node count")
        if self.directions.shape != (n_int, self.filters.shape[1]):
            raise DomainError("separator directions do not match the tree / regressor length")
        self.filter_step = np.broadcast_to(np.asarray(self.filter_step, dtype=float), (n,)).copy()
        self.separator_step = np.broadcast_to(
            np.asarray(self.separator_step, dtype=float), (n_int,)
        ).copy()
        self._rho = self.rho_table.as_float()

    @property
    def depth(self) -> int:
        return self.topology.depth

    @property
    def regressor_length(self) -> int:
        return self.filters.shape[1]

    @property
    def rho(self) -> np.ndarray:
        return self._rho

    @property
    def finest(self) -> bool:
        return self.kind in ("FF", "FT")

    @property
    def adapts_boundaries(self) -> bool:
        return self.kind in ("TBT", "FT")

    def separator(self, j: int) -> SeparatorState:
        return SeparatorState(self.directions[j - 1], float(self.separator_step[j - 1]))

    def leaf_mask(self) -> np.ndarray:
        mask = np.zeros(self.topology.node_count)
        mask[2**self.depth - 1 :] = 1.0
        return mask

    def copy(self) -> "TbtState":
        return TbtState(
            self.topology,
            self.rho_table,
            self.filters.copy(),
            self.node_weights.copy(),
            self.directions.copy(),
            self.filter_step.copy(),
            self.weight_step,
            self.separator_step.copy(),
            self.mode,
            self.sigma_floor,
            self.kind,
        )


def initial_node_weight(depth: int) -> float:
    """Uniform starting weight giving every leaf ``beta = 1``.

    A leaf's beta under uniform weights ``c`` is ``c`` times the total leaf
    count of the models containing it; for depth 2 this is ``1 / N``.
    """
    return 1.0 / float(cached_rho_table(depth).values[-1].sum())


def per_depth(values, depth: int) -> np.ndarray:
    """Expand one value per internal depth to one value per internal node."""
    v = np.atleast_1d(np.asarray(values, dtype=float))
    n_int = 2**depth - 1
    if v.size == 1:
        return np.full(n_int, v[0])
    if v.size != depth:
        raise DomainError(f"expected 1 or {depth} per-depth values, got {v.size}")
    return np.array([v[int(j).bit_length() - 1] for j in range(1, n_int + 1)])


def init_state(
    depth: int,
    h: int,
    h_f: int = 0,
    mu=0.01,
    eta: float = 0.01,
    zeta=0.01,
    init: str = "axis",
    axis_offset: int = 1,
    axis_gain=1.0,
    seed: int = 0,
    kind: str = "TBT",
    mode: str = "train",
    sigma_floor: float = SIGMA_FLOOR,
) -> TbtState:
    """Fresh equalizer state.

    Filters start at zero and node weights at :func:`initial_node_weight`.  With
    ``init="axis"`` the boundary of a node at depth ``d_j`` points along
    received-sample coordinate ``(d_j + axis_offset) mod h`` with zero bias and
    length ``axis_gain`` (a scalar or one value per internal depth).  The
    default offset of one splits the root on the previous sample, whose sign
    carries most of the residual ISI.  ``init="random"`` draws seeded
    unit-norm directions.  ``FBT`` and ``FF`` states get zero separator steps.
    """
    if h < 1 or h_f < 0:
        raise DomainError("need h >= 1 and h_f >= 0")
    topo = TreeTopology(depth)
    n, n_int, width = topo.node_count, topo.internal_count, h + h_f + 1
    directions = np.zeros((n_int, width))
    if init == "axis":
        gains = np.atleast_1d(np.asarray(axis_gain, dtype=float))
        if gains.size == 1:
            gains = np.full(max(depth, 1), gains[0])
        elif gains.size != depth:
            raise DomainError(f"axis_gain needs 1 or {depth} entries, got {gains.size}")
        for j in topo.internal_nodes:
            dj = int(j).bit_length() - 1
            directions[j - 1, (dj + axis_offset) % h] = gains[dj]
    elif init == "random":
        rng = np.random.default_rng(seed)
        directions = rng.standard_normal((n_int, width))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    else:
        raise UsageError(f"unknown init policy {init!r}")
    if kind in ("FBT", "FF"):
        zeta = 0.0
    return TbtState(
        topology=topo,
        rho_table=cached_rho_table(depth),
        filters=np.zeros((n, width)),
        node_weights=np.full(n, initial_node_weight(depth)),
        directions=directions,
        filter_step=mu,
        weight_step=float(eta),
        separator_step=zeta,
        mode=mode,
        sigma_floor=sigma_floor,
        kind=kind,
    )


def separator_outputs(state: TbtState, r) -> np.ndarray:
    return soft_separator(r, state.directions, state.sigma_floor)


def node_estimates(state: TbtState, r) -> np.ndarray:
    return state.filters @ np.asarray(r, dtype=float)


def compute_betas(u, rho_table) -> np.ndarray:
    rho = rho_table.as_float() if isinstance(rho_table, RhoTable) else np.asarray(rho_table)
    u = np.asarray(u, dtype=float)
    if rho.shape != (u.size, u.size):
        raise DomainError(f"node weights of length {u.size} do not match a {rho.shape} table")
    return rho @ u


def combine_direct(ids, estimates, betas) -> float:
    return float(np.sum(np.asarray(ids) * np.asarray(estimates) * np.asarray(betas)))


def combine_via_models_oracle(state: TbtState, r) -> float:
    """Combined estimate computed by running every embedded model."""
    if state.depth > MAX_ENUM_DEPTH:
        raise CapacityError(f"model enumeration is limited to depth {MAX_ENUM_DEPTH}")
    ids = compute_indicators(separator_outputs(state, r))
    est = node_estimates(state, r)
    total = 0.0
    for model in _models(state.depth):
        leaves = np.asarray(model.leaf_set) - 1
        model_estimate = np.sum(ids[leaves] * est[leaves])
        model_weight = np.sum(state.node_weights[leaves])
        total += model_estimate * model_weight
    return float(total)


def _subtree_sums(q: np.ndarray) -> np.ndarray:
    """``out[k-1]`` is the sum of ``q`` over the subtree rooted at node k."""
    out = q.copy()
    for k in range(out.size // 2, 0, -1):
        out[k - 1] += out[2 * k - 1] + out[2 * k]
    return out


def boundary_gradient(state: TbtState, r, ids, estimates, betas, sigmas=None) -> np.ndarray:
    """Derivative of the combined estimate with respect to every separator
    direction; row ``j - 1`` belongs to internal node ``j``.

    Nodes in the left subtree of ``j`` carry the factor ``sigma_j`` in their
    indicator and nodes in the right subtree carry ``1 - sigma_j``.
    """
    r = np.asarray(r, dtype=float)
    n_int = state.topology.internal_count
    if n_int == 0:
        return np.zeros((0, r.size))
    if sigmas is None:
        sigmas = separator_outputs(state, r)
    sub = _subtree_sums(np.asarray(betas) * np.asarray(estimates) * np.asarray(ids))
    j = np.arange(1, n_int + 1)
    s = sub[2 * j - 1] / sigmas - sub[2 * j] / (1.0 - sigmas)
    return (-sigmas * (1.0 - sigmas) * s)[:, None] * r[None, :]


def _reference(state: TbtState, soft: float, true_bit) -> float:
    if state.mode == "train":
        if true_bit is None:
            raise UsageError("train mode requires the true bit")
        return float(true_bit)
    return quantize(soft)


def tbt_step(state: TbtState, r, true_bit=None) -> StepOutput:
    """One iteration of the tree equalizer; updates ``state`` in place.

    All three update families use quantities computed before any of them is
    applied.
    """
    if state.finest:
        return finest_step(state, r, true_bit)
    r = np.asarray(r, dtype=float)
    sig = separator_outputs(state, r)
    ids = compute_indicators(sig)
    est = node_estimates(state, r)
    betas = state.rho @ state.node_weights
    z = ids * est
    soft = float(np.sum(z * betas))
    ref = _reference(state, soft, true_bit)
    e = ref - soft

    grad = boundary_gradient(state, r, ids, est, betas, sig) if state.adapts_boundaries else None
    state.filters += (state.filter_step * e * ids)[:, None] * r[None, :]
    state.node_weights += state.weight_step * e * z
    if grad is not None:
        state.directions += (state.separator_step * e)[:, None] * grad
    return StepOutput(soft, quantize(soft), e, est, ids, betas)


def finest_step(state: TbtState, r, true_bit=None) -> StepOutput:
    """FF / FT step: only the leaves of the finest partition contribute."""
    if not state.finest:
        raise UsageError(f"finest_step needs an FF or FT state, got {state.kind}")
    r = np.asarray(r, dtype=float)
    sig = separator_outputs(state, r)
    ids = compute_indicators(sig)
    est = node_estimates(state, r)
    mask = state.leaf_mask()
    soft = float(np.sum(mask * ids * est))
    ref = _reference(state, soft, true_bit)
    e = ref - soft

    grad = boundary_gradient(state, r, ids, est, mask, sig) if state.adapts_boundaries else None
    state.filters += (mask * state.filter_step * e * ids)[:, None] * r[None, :]
    if grad is not None:
        state.directions += (state.separator_step * e)[:, None] * grad
    return StepOutput(soft, quantize(soft), e, est, ids, mask)
