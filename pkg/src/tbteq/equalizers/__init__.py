"""Equalizer algorithms."""

from .dfe import RegressorBuffer, dfe_extend, regressor
from .linear import LinearState, linear_lms_step
from .separator import (
    SIGMA_FLOOR,
    compute_indicators,
    separator_gradient,
    soft_separator,
    soft_separator_complex,
)
from .tbt import (
    SeparatorState,
    StepOutput,
    TbtState,
    boundary_gradient,
    combine_direct,
    combine_via_models_oracle,
    compute_betas,
    finest_step,
    init_state,
    node_estimates,
    per_depth,
    quantize,
    separator_outputs,
    tbt_step,
)
from .stream import StreamResult, stream, stream_numba, stream_python
from .variants import KINDS, linear_step, variant_step

__all__ = [
    "KINDS",
    "SIGMA_FLOOR",
    "LinearState",
    "RegressorBuffer",
    "SeparatorState",
    "StepOutput",
    "StreamResult",
    "TbtState",
    "boundary_gradient",
    "combine_direct",
    "combine_via_models_oracle",
    "compute_betas",
    "compute_indicators",
    "dfe_extend",
    "finest_step",
    "init_state",
    "linear_lms_step",
    "linear_step",
    "node_estimates",
    "per_depth",
    "quantize",
    "regressor",
    "separator_gradient",
    "separator_outputs",
    "soft_separator",
    "soft_separator_complex",
    "stream",
    "stream_numba",
    "stream_python",
    "tbt_step",
    "variant_step",
]
