from dataclasses import dataclass, field
from typing import List

import torch

from objects.MaskState import MaskState


@dataclass
class SampleResult:
    image: torch.Tensor # (B, 3, R, R) in [0, 1]
    mask_state: MaskState
    trajectory: List[torch.Tensor] = field(default_factory=list) # current_mask after every step

    @property
    def predicted_mask(self) -> torch.Tensor:
        return self.mask_state.current_mask
