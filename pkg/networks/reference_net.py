from typing import Sequence

import torch
import torch.nn as nn

from networks.blocks import Downsample, ResBlock
from objects.FeatureStack import FeatureStack
from objects.errors import ShapeMismatchError


def side_by_side(ornament_image: torch.Tensor, masked_model_image: torch.Tensor, current_mask: torch.Tensor) -> torch.Tensor:
    """
    Reference-branch input (B, 4, H, 2W): the two images scaled to [-1, 1] next to each other,
    plus a mask plane that is zero over the ornament half and the current wearing mask over the model half.
    """
    if ornament_image.shape != masked_model_image.shape:
        raise ShapeMismatchError(
            f"Ornament image {tuple(ornament_image.shape)} and model image {tuple(masked_model_image.shape)} differ"
        )
    if current_mask.shape[-2:] != masked_model_image.shape[-2:]:
        raise ShapeMismatchError(f"Mask {tuple(current_mask.shape)} does not match image {tuple(masked_model_image.shape)}")
    images = torch.cat([ornament_image, masked_model_image], dim=-1) * 2.0 - 1.0
    mask_plane = torch.cat([torch.zeros_like(current_mask), current_mask], dim=-1)
    return torch.cat([images, mask_plane], dim=1)


class ReferenceNet(nn.Module):
    """
    Encoder-only copy of the denoiser layout. Levels come out at 1/2, 1/4 and 1/8 of the
    image resolution with the denoiser's channel widths at those resolutions.
    """

    def __init__(self, widths: Sequence[int], temb_dim: int, in_channels: int = 4) -> None:
        super().__init__()
        w0, w1, w2 = widths
        self.stem = nn.Conv2d(in_channels, w0, 3, padding=1)
        self.block0 = ResBlock(w0, w0, temb_dim)
        self.down0 = Downsample(w0)
        self.block1 = ResBlock(w0, w1, temb_dim)
        self.down1 = Downsample(w1)
        self.block2 = ResBlock(w1, w2, temb_dim)
        self.down2 = Downsample(w2)
        self.block3 = ResBlock(w2, w2, temb_dim)

    def forward(self, x: torch.Tensor, temb: torch.Tensor) -> FeatureStack:
        h = self.block0(self.stem(x), temb)
        f0 = self.block1(self.down0(h), temb)
        f1 = self.block2(self.down1(f0), temb)
        f2 = self.block3(self.down2(f1), temb)
        levels = [(int(f.shape[-2]), f) for f in (f0, f1, f2)]
        return FeatureStack(levels=levels, split_index=int(f0.shape[-1]) // 2)
