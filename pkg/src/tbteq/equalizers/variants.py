"""Uniform entry point over all equalizer kinds."""

from __future__ import annotations

from ..errors import UsageError
from .linear import LinearState, linear_lms_step
from .tbt import StepOutput, TbtState, _reference, quantize, tbt_step

KINDS = ("TBT", "FBT", "FF", "FT", "LINEAR")


def linear_step(state: LinearState, r, true_bit=None) -> StepOutput:
    soft = float(state.filter @ r)
    ref = _reference(state, soft, true_bit)
    soft, e, state.filter = linear_lms_step(state.filter, r, ref, state.step)
    return StepOutput(soft, quantize(soft), e, None, None, None)


def variant_step(kind: str, state, r, true_bit=None) -> StepOutput:
    if kind not in KINDS:
        raise UsageError(f"unknown equalizer kind {kind!r}")
    if getattr(state, "kind", None) != kind:
        raise UsageError(f"{kind} step given a {getattr(state, 'kind', type(state).__name__)} state")
    if kind == "LINEAR":
        return linear_step(state, r, true_bit)
    assert isinstance(state, TbtState)
    return tbt_step(state, r, true_bit)
