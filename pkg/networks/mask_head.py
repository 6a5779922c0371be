import torch
import torch.nn as nn


class MaskHead(nn.Module):
    """Per-pixel linear projection of [gated model features, ornament features] to a mask logit"""

    def __init__(self, channels: int) -> None:
        super().__init__()
        self.channels = channels
        self.proj = nn.Conv2d(2 * channels, 1, kernel_size=1)

    def forward(self, head_input: torch.Tensor) -> torch.Tensor:
        return self.proj(head_input)
