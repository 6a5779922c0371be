from dataclasses import dataclass

import torch

from config.config import DEFAULT_ALPHA_RAMP, DEFAULT_ALPHA_START
from objects.errors import ParameterError, ShapeMismatchError


@dataclass(frozen=True)
class AlphaSchedule:
    """Linear ramp from start_value to 1.0, reached at ramp_fraction of progress and held"""

    start_value: float = DEFAULT_ALPHA_START
    ramp_fraction: float = DEFAULT_ALPHA_RAMP
    kind: str = "linear"
    end_value: float = 1.0

    def __post_init__(self) -> None:
        if self.kind != "linear":
            raise ParameterError(f"Only linear alpha schedules are supported, got {self.kind!r}")
        if not 0.0 <= self.start_value <= 1.0:
            raise ParameterError(f"start_value must lie in [0, 1], got {self.start_value}")
        if not 0.0 < self.ramp_fraction <= 1.0:
            raise ParameterError(f"ramp_fraction must lie in (0, 1], got {self.ramp_fraction}")
        if self.end_value != 1.0:
            raise ParameterError(f"end_value is fixed at 1.0, got {self.end_value}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "start_value": self.start_value, "end_value": self.end_value, "ramp_fraction": self.ramp_fraction}

    @classmethod
    def from_dict(cls, data: dict) -> "AlphaSchedule":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


@dataclass
class MaskState:
    """
    Wearing-mask state of one denoising trajectory.
    current_mask: (B, 1, H, W) in [0, 1]; box_mask: same shape, binary.
    """

    current_mask: torch.Tensor
    box_mask: torch.Tensor
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.current_mask.shape != self.box_mask.shape:
            raise ShapeMismatchError(
                f"current_mask {tuple(self.current_mask.shape)} != box_mask {tuple(self.box_mask.shape)}"
            )
        if not 0.0 <= self.alpha <= 1.0:
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha}")

    @classmethod
    def initial(cls, box_mask: torch.Tensor) -> "MaskState":
        """Refinement starts from the coarse box"""
        return cls(current_mask=box_mask.clone(), box_mask=box_mask, alpha=0.0)
