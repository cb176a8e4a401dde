"""The compiled and per-step streaming backends must agree."""

import numpy as np
import pytest

from tbteq.channel import ChannelConfig, Saturating, propagate, training_sequence
from tbteq.equalizers import LinearState, TbtState, init_state, stream
from tbteq.errors import UsageError


def _data(length=1500, seed=0):
    bits = training_sequence("pseudo_random", length, seed=seed)
    return bits, propagate(ChannelConfig(seed=seed, snr_db=20, nonlinearity=Saturating(1.0)), bits)


def _make(kind, h, h_f):
    if kind == "LINEAR":
        return LinearState.zeros(h, h_f)
    return init_state(2, h, h_f, eta=0.01, zeta=0.2, kind=kind, axis_gain=3.0)


@pytest.mark.parametrize("kind", ["TBT", "FBT", "FF", "FT", "LINEAR"])
@pytest.mark.parametrize("h_f", [0, 2])
def test_backends_agree(kind, h_f):
    bits, r = _data()
    a, b = _make(kind, 5, h_f), _make(kind, 5, h_f)
    ra = stream(a, r, bits, 300, 5, h_f, snapshot_every=50, backend="python")
    rb = stream(b, r, bits, 300, 5, h_f, snapshot_every=50, backend="numba")
    np.testing.assert_allclose(ra.soft, rb.soft, atol=1e-10)
    np.testing.assert_array_equal(ra.decisions, rb.decisions)
    np.testing.assert_array_equal(ra.references, rb.references)
    if isinstance(a, TbtState):
        np.testing.assert_allclose(ra.node_outputs, rb.node_outputs, atol=1e-10)
        np.testing.assert_allclose(ra.weight_snapshots, rb.weight_snapshots, atol=1e-10)
        np.testing.assert_allclose(a.directions, b.directions, atol=1e-9)
        np.testing.assert_allclose(a.filters, b.filters, atol=1e-10)
    else:
        np.testing.assert_allclose(a.filter, b.filter, atol=1e-10)


def test_training_references_are_true_bits():
    bits, r = _data(600)
    res = stream(_make("TBT", 4, 0), r, bits, 200, 4)
    np.testing.assert_array_equal(res.references[:200], bits[:200])
    np.testing.assert_array_equal(res.references[200:], res.decisions[200:])


def test_snapshot_times():
    bits, r = _data(450)
    res = stream(_make("TBT", 4, 0), r, bits, 100, 4, snapshot_every=100)
    np.testing.assert_array_equal(res.snapshot_times, [100, 200, 300, 400])
    assert res.weight_snapshots.shape == (4, 7)


def test_deterministic():
    bits, r = _data(800)
    a = stream(_make("TBT", 4, 1), r, bits, 100, 4, 1)
    b = stream(_make("TBT", 4, 1), r, bits, 100, 4, 1)
    np.testing.assert_array_equal(a.soft, b.soft)


def test_length_mismatch_and_backend():
    bits, r = _data(50)
    with pytest.raises(UsageError):
        stream(_make("TBT", 4, 0), r, bits, 10, 5)
    with pytest.raises(UsageError):
        stream(_make("TBT", 4, 0), r, bits, 10, 5, backend="python")
    with pytest.raises(UsageError):
        stream(_make("TBT", 4, 0), r, bits, 10, 4, backend="gpu")
