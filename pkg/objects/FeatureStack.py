from dataclasses import dataclass
from typing import List, Tuple

import torch

from objects.errors import InjectionError


@dataclass
class FeatureStack:
    """
    Reference-branch features, one (resolution, map) pair per level, highest resolution first.
    Each map is (B, C, r, 2r): the ornament half is columns [0, r), the model half [r, 2r).
    """

    levels: List[Tuple[int, torch.Tensor]]
    split_index: int # width split of level 0

    def __post_init__(self) -> None:
        if len(self.levels) < 2:
            raise InjectionError(f"A feature stack needs at least 2 levels, got {len(self.levels)}")
        for resolution, feature in self.levels:
            if feature.shape[-1] % 2 or feature.shape[-1] != 2 * feature.shape[-2]:
                raise InjectionError(f"Level {resolution} has width {feature.shape[-1]}, expected 2 x {feature.shape[-2]}")

    def at(self, resolution: int) -> torch.Tensor:
        for level_resolution, feature in self.levels:
            if level_resolution == resolution:
                return feature
        raise InjectionError(f"No reference level at resolution {resolution}; have {self.resolutions}")

    @property
    def resolutions(self) -> List[int]:
        return [r for r, _ in self.levels]

    def halves(self, level: int = 0) -> Tuple[torch.Tensor, torch.Tensor]:
        """(f_o, f_m) of a level"""
        feature = self.levels[level][1]
        split = feature.shape[-1] // 2
        return feature[..., :split], feature[..., split:]
