import math

import torch
import torch.nn as nn

from objects.errors import ParameterError


class OrnamentEncoder(nn.Module):
    """Four strided convolutions pooled to a fixed grid of ornament tokens (stands in for a CLIP image encoder)"""

    def __init__(self, token_count: int = 16, token_dim: int = 128) -> None:
        super().__init__()
        side = math.isqrt(token_count)
        if side * side != token_count:
            raise ParameterError(f"token_count must be a perfect square, got {token_count}")
        self.token_count = token_count
        self.convs = nn.Sequential(
            nn.Conv2d(3, 32, 3, stride=2, padding=1), nn.SiLU(),
            nn.Conv2d(32, 64, 3, stride=2, padding=1), nn.SiLU(),
            nn.Conv2d(64, 128, 3, stride=2, padding=1), nn.SiLU(),
            nn.Conv2d(128, token_dim, 3, stride=2, padding=1),
        )
        self.pool = nn.AdaptiveAvgPool2d(side)
        self.position = nn.Parameter(torch.zeros(1, token_count, token_dim))
        self.norm = nn.LayerNorm(token_dim)

    def forward(self, ornament_image: torch.Tensor) -> torch.Tensor:
        """(B, 3, H, W) in [0, 1] -> (B, token_count, token_dim)"""
        h = self.pool(self.convs(ornament_image * 2.0 - 1.0))
        tokens = h.flatten(2).transpose(1, 2)
        return self.norm(tokens + self.position)
