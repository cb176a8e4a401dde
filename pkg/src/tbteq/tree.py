"""Counting and indexing machinery for the models embedded in a complete
binary tree.

Nodes are heap indexed from 1: the children of node ``j`` are ``2j`` and
``2j + 1`` and the depth of ``j`` is ``floor(log2 j)``.  A *model* is a
pruned subtree rooted at node 1; it is represented by its leaf set, and the
leaves of a model tile the whole received-signal space.

Two routes are provided for the pair counts used by the direct node
combination: :func:`rho` (closed form) and :func:`rho_oracle` (brute-force
enumeration).  They must agree, and :func:`build_rho_table` cross-checks them
whenever the enumeration is affordable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import CapacityError, DomainError

#: Largest depth for which ``alpha`` is evaluated.
MAX_ALPHA_DEPTH = 5
#: Largest depth for which the models are enumerated explicitly.
MAX_ENUM_DEPTH = 4


def node_depth(j: int) -> int:
    """Depth of heap index ``j`` (the root has depth 0)."""
    if j < 1:
        raise DomainError(f"node index must be >= 1, got {j}")
    return int(j).bit_length() - 1


def node_count(depth: int) -> int:
    return 2 ** (depth + 1) - 1


@dataclass(frozen=True)
class TreeTopology:
    """Complete binary tree of a given depth, heap indexed from 1."""

    depth: int
    node_count: int = field(init=False)

    def __post_init__(self):
        if self.depth < 0:
            raise DomainError(f"depth must be non-negative, got {self.depth}")
        object.__setattr__(self, "node_count", node_count(self.depth))

    @property
    def internal_count(self) -> int:
        return 2**self.depth - 1

    @property
    def leaves(self) -> range:
        return range(2**self.depth, self.node_count + 1)

    @property
    def internal_nodes(self) -> range:
        return range(1, self.internal_count + 1)

    def check(self, j: int) -> None:
        if not 1 <= j <= self.node_count:
            raise DomainError(f"node {j} outside 1..{self.node_count}")

    def parent(self, j: int) -> int:
        self.check(j)
        if j == 1:
            raise DomainError("the root has no parent")
        return j // 2

    def children(self, j: int) -> tuple[int, int]:
        self.check(j)
        if j > self.internal_count:
            raise DomainError(f"node {j} is a leaf")
        return 2 * j, 2 * j + 1

    def node_depth(self, j: int) -> int:
        self.check(j)
        return node_depth(j)

    def is_ancestor(self, j: int, k: int) -> bool:
        """True if ``j`` is a strict ancestor of ``k``."""
        self.check(j)
        self.check(k)
        shift = node_depth(k) - node_depth(j)
        return shift > 0 and (k >> shift) == j

    def subtree(self, j: int) -> list[int]:
        """All nodes of the subtree rooted at ``j``, breadth first."""
        self.check(j)
        out, level = [], [j]
        while level and level[0] <= self.node_count:
            out.extend(level)
            level = [c for k in level for c in (2 * k, 2 * k + 1)]
        return out


@dataclass(frozen=True)
class SubtreeModel:
    """A pruned subtree given by its (sorted) leaf set."""

    leaf_set: tuple[int, ...]

    def tiles_root(self) -> bool:
        """Collapse sibling pairs into their parent until nothing changes."""
        leaves = set(self.leaf_set)
        if len(leaves) != len(self.leaf_set):
            return False
        changed = True
        while changed:
            changed = False
            for j in sorted(leaves, reverse=True):
                if j % 2 == 0 and j + 1 in leaves:
                    leaves -= {j, j + 1}
                    leaves.add(j // 2)
                    changed = True
                    break
        return leaves == {1}

    def __contains__(self, j: int) -> bool:
        return j in self.leaf_set

    def __len__(self) -> int:
        return len(self.leaf_set)


@lru_cache(maxsize=None)
def alpha(d: int) -> int:
    """Number of models embedded in a depth-``d`` tree."""
    if d < 0:
        raise DomainError(f"depth must be non-negative, got {d}")
    if d > MAX_ALPHA_DEPTH:
        raise CapacityError(f"alpha is only evaluated up to depth {MAX_ALPHA_DEPTH}")
    if d == 0:
        return 1
    return alpha(d - 1) ** 2 + 1


def theta(d: int, depth_of_node: int) -> int:
    """Number of models of a depth-``d`` tree in which a node at
    ``depth_of_node`` is a leaf (product of ``alpha(d - l)`` for
    ``l = 1..depth_of_node``)."""
    if not 0 <= depth_of_node <= d:
        raise DomainError(f"node depth {depth_of_node} outside 0..{d}")
    out = 1
    for level in range(1, depth_of_node + 1):
        out *= alpha(d - level)
    return out


def nearest_common_ancestor(j: int, k: int, depth: int | None = None) -> tuple[int, int]:
    """Deepest common ancestor of ``j`` and ``k`` (a node counts as its own
    ancestor) and its depth.

    Uses repeated halving of the deeper index.  If ``depth`` is given, the
    indices are range checked against a tree of that depth.
    """
    if depth is not None:
        topo = TreeTopology(depth)
        topo.check(j)
        topo.check(k)
    elif j < 1 or k < 1:
        raise DomainError(f"node indices must be >= 1, got {(j, k)}")
    while j != k:
        if j > k:
            j //= 2
        else:
            k //= 2
    return j, node_depth(j)


def enumerate_models(d: int) -> list[SubtreeModel]:
    """All ``alpha(d)`` models of a depth-``d`` tree."""
    if d < 0:
        raise DomainError(f"depth must be non-negative, got {d}")
    if d > MAX_ENUM_DEPTH:
        raise CapacityError(f"model enumeration is limited to depth {MAX_ENUM_DEPTH}")

    def below(j: int, remaining: int) -> list[tuple[int, ...]]:
        out = [(j,)]
        if remaining > 0:
            for left, right in product(below(2 * j, remaining - 1), below(2 * j + 1, remaining - 1)):
                out.append(left + right)
        return out

    return [SubtreeModel(tuple(sorted(leaves))) for leaves in below(1, d)]


@lru_cache(maxsize=None)
def _models(d: int) -> tuple[SubtreeModel, ...]:
    return tuple(enumerate_models(d))


def rho_oracle(j: int, k: int, d: int) -> int:
    """Count the enumerated models having both ``j`` and ``k`` as leaves."""
    topo = TreeTopology(d)
    topo.check(j)
    topo.check(k)
    return sum(1 for model in _models(d) if j in model and k in model)


def rho(j: int, k: int, d: int) -> int:
    """Closed-form number of models in which ``j`` and ``k`` are both leaves."""
    topo = TreeTopology(d)
    topo.check(j)
    topo.check(k)
    dj, dk = node_depth(j), node_depth(k)
    if j == k:
        return theta(d, dj)
    if topo.is_ancestor(j, k) or topo.is_ancestor(k, j):
        return 0
    if dj > dk:
        j, k, dj, dk = k, j, dk, dj
    _, level = nearest_common_ancestor(j, k)
    num = theta(d - level - 1, dk - level - 1) * theta(d, dj)
    den = alpha(d - level - 1)
    quotient, remainder = divmod(num, den)
    assert remainder == 0, f"inexact rho division for ({j}, {k}, {d})"
    return quotient


@dataclass(frozen=True)
class RhoTable:
    """Symmetric ``N x N`` table of pair counts; entry ``[j-1, k-1]`` is
    ``rho(j, k)``."""

    depth: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    def __getitem__(self, jk: tuple[int, int]) -> int:
        j, k = jk
        return int(self.values[j - 1, k - 1])

    def as_float(self) -> np.ndarray:
        return self.values.astype(np.float64)


def build_rho_table(d: int, validate: bool | None = None) -> RhoTable:
    """Fill the pair-count table from the closed form.

    When ``validate`` is true (the default for ``d <= 4``), every entry is
    compared against the enumeration oracle.
    """
    topo = TreeTopology(d)
    n = topo.node_count
    values = np.zeros((n, n), dtype=np.int64)
    for j in range(1, n + 1):
        for k in range(j, n + 1):
            values[j - 1, k - 1] = values[k - 1, j - 1] = rho(j, k, d)
    if validate is None:
        validate = d <= MAX_ENUM_DEPTH
    if validate:
        expected = oracle_rho_matrix(d)
        bad = np.argwhere(values != expected)
        if bad.size:
            j, k = bad[0] + 1
            raise AssertionError(
                f"rho({j}, {k}, {d}) = {values[j - 1, k - 1]}, enumeration gives {expected[j - 1, k - 1]}"
            )
    return RhoTable(d, values)


def oracle_rho_matrix(d: int) -> np.ndarray:
    """Pair counts accumulated over one pass of the model enumeration."""
    n = node_count(d)
    counts = np.zeros((n, n), dtype=np.int64)
    for model in _models(d):
        idx = np.asarray(model.leaf_set) - 1
        counts[np.ix_(idx, idx)] += 1
    return counts


@lru_cache(maxsize=None)
def cached_rho_table(d: int) -> RhoTable:
    return build_rho_table(d)
