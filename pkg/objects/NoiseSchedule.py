from dataclasses import dataclass

import torch

from enums.ScheduleShape import ScheduleShape


@dataclass
class NoiseSchedule:
    """beta / alpha-bar tables, float64, indexed by timestep 0..T-1"""

    betas: torch.Tensor
    alpha_bars: torch.Tensor
    shape: ScheduleShape = ScheduleShape.LINEAR

    @property
    def T(self) -> int:
        return int(self.betas.shape[0])

    def alpha_bar(self, t: torch.Tensor) -> torch.Tensor:
        """alpha_bar gathered at integer timesteps t (any shape), on t's device"""
        return self.alpha_bars.to(t.device)[t.long()]
