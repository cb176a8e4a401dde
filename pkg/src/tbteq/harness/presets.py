"""Named experiment settings; ``configs/*.cfg`` mirror them."""

from __future__ import annotations

from ..channel import ChannelConfig, Saturating
from .config import ExperimentConfig

DESK = ExperimentConfig()

#: soft-clipping receiver; sharper and faster-turning boundaries pay off here
DESK_SATURATED = ExperimentConfig(
    channel=ChannelConfig(nonlinearity=Saturating(0.9)),
    eta=0.015,
    zeta=(0.7, 4.1),
    axis_gain=(3.5, 15.2),
    variants=("TBT", "FBT", "LINEAR"),
    output_path="desk_saturated.csv",
)

PRESETS = {"desk": DESK, "desk_saturated": DESK_SATURATED}
