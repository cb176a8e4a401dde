"""Tree indexing and model-counting tests."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tbteq.errors import CapacityError, DomainError
from tbteq.tree import (
    RhoTable,
    SubtreeModel,
    TreeTopology,
    alpha,
    build_rho_table,
    cached_rho_table,
    enumerate_models,
    nearest_common_ancestor,
    node_depth,
    oracle_rho_matrix,
    rho,
    rho_oracle,
    theta,
)


def _path(j):
    """Nodes from the root down to ``j``, read off the binary expansion."""
    bits = bin(j)[2:]
    return [int(bits[: i + 1], 2) for i in range(len(bits))]


def _brute_models(d):
    """Models as leaf sets, by recursively splitting any leaf above depth d."""
    seen, frontier = set(), {frozenset([1])}
    while frontier:
        seen |= frontier
        nxt = set()
        for leaves in frontier:
            for j in leaves:
                if node_depth(j) < d:
                    nxt.add((leaves - {j}) | {2 * j, 2 * j + 1})
        frontier = nxt - seen
    return seen


class TestTopology:
    def test_counts(self):
        topo = TreeTopology(3)
        assert topo.node_count == 15
        assert topo.internal_count == 7
        assert list(topo.leaves) == list(range(8, 16))

    @pytest.mark.parametrize("j,depth", [(1, 0), (2, 1), (3, 1), (4, 2), (7, 2), (8, 3), (31, 4)])
    def test_node_depth(self, j, depth):
        assert node_depth(j) == depth

    def test_parent_children(self):
        topo = TreeTopology(2)
        assert topo.children(3) == (6, 7)
        assert topo.parent(7) == 3
        with pytest.raises(DomainError):
            topo.parent(1)
        with pytest.raises(DomainError):
            topo.children(4)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            TreeTopology(2).check(8)
        with pytest.raises(DomainError):
            TreeTopology(-1)
        with pytest.raises(DomainError):
            node_depth(0)

    def test_subtree(self):
        assert TreeTopology(3).subtree(3) == [3, 6, 7, 12, 13, 14, 15]

    @given(st.integers(1, 63), st.integers(1, 63))
    def test_is_ancestor_matches_paths(self, j, k):
        topo = TreeTopology(5)
        assert topo.is_ancestor(j, k) == (j != k and j in _path(k))


class TestAlphaTheta:
    def test_alpha_sequence(self):
        # alpha(d+1) = alpha(d)^2 + 1 from alpha(0) = 1
        assert [alpha(d) for d in range(6)] == [1, 2, 5, 26, 677, 458330]

    def test_alpha_two_is_five(self):
        assert alpha(2) == 5

    def test_alpha_capacity(self):
        with pytest.raises(CapacityError):
            alpha(6)
        with pytest.raises(DomainError):
            alpha(-1)

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_theta_counts_models_with_leaf(self, d):
        models = _brute_models(d)
        for dj in range(d + 1):
            j = 2**dj
            assert theta(d, dj) == sum(1 for m in models if j in m)

    def test_theta_domain(self):
        with pytest.raises(DomainError):
            theta(2, 3)


class TestEnumeration:
    @pytest.mark.parametrize("d", [0, 1, 2, 3, 4])
    def test_count_is_alpha(self, d):
        assert len(enumerate_models(d)) == alpha(d)

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_matches_brute_force(self, d):
        got = {frozenset(m.leaf_set) for m in enumerate_models(d)}
        assert got == _brute_models(d)

    def test_depth_two_models(self):
        got = sorted(m.leaf_set for m in enumerate_models(2))
        assert got == sorted([(1,), (2, 3), (2, 6, 7), (3, 4, 5), (4, 5, 6, 7)])

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_every_model_tiles(self, d):
        assert all(m.tiles_root() for m in enumerate_models(d))

    def test_tiles_rejects_gaps_and_overlaps(self):
        assert not SubtreeModel((2,)).tiles_root()
        assert not SubtreeModel((2, 3, 6)).tiles_root()
        assert not SubtreeModel((2, 2, 3)).tiles_root()

    def test_capacity(self):
        with pytest.raises(CapacityError):
            enumerate_models(5)


class TestNearestCommonAncestor:
    @given(st.integers(1, 127), st.integers(1, 127))
    def test_matches_path_intersection(self, j, k):
        common = [a for a in _path(j) if a in _path(k)]
        assert nearest_common_ancestor(j, k) == (common[-1], node_depth(common[-1]))

    def test_examples(self):
        assert nearest_common_ancestor(4, 5) == (2, 1)
        assert nearest_common_ancestor(4, 7) == (1, 0)
        assert nearest_common_ancestor(6, 3) == (3, 1)

    def test_range_check(self):
        with pytest.raises(DomainError):
            nearest_common_ancestor(1, 8, depth=2)
        with pytest.raises(DomainError):
            nearest_common_ancestor(0, 3)


class TestRho:
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_closed_form_matches_enumeration(self, d):
        n = 2 ** (d + 1) - 1
        expected = oracle_rho_matrix(d)
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                assert rho(j, k, d) == expected[j - 1, k - 1]

    @pytest.mark.parametrize("d,j,k", [(2, 4, 6), (3, 2, 13), (3, 8, 8), (4, 17, 30)])
    def test_single_pairs(self, d, j, k):
        assert rho(j, k, d) == rho_oracle(j, k, d)

    def test_depth_two_table(self):
        # hand count over the five depth-2 models
        expected = np.array([
            [1, 0, 0, 0, 0, 0, 0],
            [0, 2, 1, 0, 0, 1, 1],
            [0, 1, 2, 1, 1, 0, 0],
            [0, 0, 1, 2, 2, 1, 1],
            [0, 0, 1, 2, 2, 1, 1],
            [0, 1, 0, 1, 1, 2, 2],
            [0, 1, 0, 1, 1, 2, 2],
        ])
        np.testing.assert_array_equal(build_rho_table(2).values, expected)

    @given(st.integers(1, 4).flatmap(lambda d: st.tuples(
        st.just(d), st.integers(1, 2 ** (d + 1) - 1), st.integers(1, 2 ** (d + 1) - 1))))
    def test_symmetric_and_ancestor_zero(self, djk):
        d, j, k = djk
        topo = TreeTopology(d)
        assert rho(j, k, d) == rho(k, j, d)
        if topo.is_ancestor(j, k):
            assert rho(j, k, d) == 0
        if j == k:
            assert rho(j, k, d) == theta(d, node_depth(j))

    def test_depth_five_without_enumeration(self):
        table = build_rho_table(5)
        assert table[1, 1] == 1
        assert np.array_equal(table.values, table.values.T)

    def test_table_is_read_only(self):
        table = cached_rho_table(2)
        assert isinstance(table, RhoTable)
        with pytest.raises(ValueError):
            table.values[0, 0] = 3
        assert table[4, 5] == 2
        assert table.as_float().dtype == np.float64

    def test_validation_catches_bad_table(self, monkeypatch):
        import tbteq.tree as tree

        monkeypatch.setattr(tree, "rho", lambda j, k, d: 1)
        with pytest.raises(AssertionError):
            tree.build_rho_table(2, validate=True)
