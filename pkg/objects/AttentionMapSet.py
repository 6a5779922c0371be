import math
from dataclasses import dataclass, field
from typing import Dict, List

import torch

from enums.AttentionTap import AttentionTap
from objects.errors import InjectionError


@dataclass
class AttentionMapSet:
    """
    Recorded latent-rows x ornament-columns sub-blocks of the injected attention,
    one (B, d_i, d_i) tensor per tap. Filled by a single forward call.
    """

    maps: Dict[AttentionTap, torch.Tensor] = field(default_factory=dict)

    def record(self, tap: AttentionTap, attention: torch.Tensor) -> None:
        d = attention.shape[-1]
        side = math.isqrt(d)
        if attention.shape[-2] != d or side * side != d:
            raise InjectionError(f"Attention map for {tap} has shape {tuple(attention.shape)}, expected square d x d with d a square")
        self.maps[tap] = attention

    @property
    def taps(self) -> List[AttentionTap]:
        return list(self.maps.keys())

    def values(self) -> List[torch.Tensor]:
        return [self.maps[tap] for tap in AttentionTap if tap in self.maps]

    def __len__(self) -> int:
        return len(self.maps)
