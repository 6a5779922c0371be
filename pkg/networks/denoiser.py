from typing import Optional, Sequence, Tuple

import torch
import torch.nn as nn
import torch.nn.functional as F

from enums.AttentionTap import AttentionTap
from networks.attention import CrossAttention, InjectedAttention
from networks.blocks import Downsample, ResBlock, Upsample, group_norm
from objects.AttentionMapSet import AttentionMapSet
from objects.FeatureStack import FeatureStack


class TinyUNet(nn.Module):
    """
    Three-level UNet predicting noise in pixel space.
    Input channels: noisy image (3), masked model image (3), wearing mask (1).
    Injected self-attention runs at 1/4 resolution on both sides and at the 1/8 bottleneck;
    only the two 1/4 taps are recorded.
    """

    def __init__(self, widths: Sequence[int], temb_dim: int, token_dim: int, heads: int = 4) -> None:
        super().__init__()
        w0, w1, w2 = widths
        self.stem = nn.Conv2d(7, w0, 3, padding=1)
        self.enc0 = ResBlock(w0, w0, temb_dim)
        self.down0 = Downsample(w0)
        self.enc1 = ResBlock(w0, w1, temb_dim)
        self.down1 = Downsample(w1)
        self.enc2 = ResBlock(w1, w2, temb_dim)
        self.enc2_attn = InjectedAttention(w2, heads)
        self.enc2_cross = CrossAttention(w2, token_dim, heads)
        self.down2 = Downsample(w2)

        self.mid1 = ResBlock(w2, w2, temb_dim)
        self.mid_attn = InjectedAttention(w2, heads)
        self.mid_cross = CrossAttention(w2, token_dim, heads)
        self.mid2 = ResBlock(w2, w2, temb_dim)

        self.up2 = Upsample(w2)
        self.dec2 = ResBlock(w2 + w2, w2, temb_dim)
        self.dec2_attn = InjectedAttention(w2, heads)
        self.dec2_cross = CrossAttention(w2, token_dim, heads)
        self.up1 = Upsample(w2)
        self.dec1 = ResBlock(w2 + w1, w1, temb_dim)
        self.up0 = Upsample(w1)
        self.dec0 = ResBlock(w1 + w0, w0, temb_dim)

        self.out_norm = group_norm(w0)
        self.out = nn.Conv2d(w0, 3, 3, padding=1)

    def forward(
        self,
        z_t: torch.Tensor,
        temb: torch.Tensor,
        masked_model_image: torch.Tensor,
        mask: torch.Tensor,
        ornament_tokens: torch.Tensor,
        features: Optional[FeatureStack] = None,
        record: bool = False,
    ) -> Tuple[torch.Tensor, AttentionMapSet]:
        maps = AttentionMapSet()

        def reference(resolution: int) -> Optional[torch.Tensor]:
            return None if features is None else features.at(resolution)

        x = torch.cat([z_t, masked_model_image * 2.0 - 1.0, mask], dim=1)
        s0 = self.enc0(self.stem(x), temb)
        s1 = self.enc1(self.down0(s0), temb)
        h = self.enc2(self.down1(s1), temb)
        h, recorded = self.enc2_attn(h, reference(h.shape[-2]), record)
        if recorded is not None:
            maps.record(AttentionTap.ENCODER_HIGHRES, recorded)
        s2 = self.enc2_cross(h, ornament_tokens)

        h = self.mid1(self.down2(s2), temb)
        h, _ = self.mid_attn(h, reference(h.shape[-2]), False)
        h = self.mid2(self.mid_cross(h, ornament_tokens), temb)

        h = self.dec2(torch.cat([self.up2(h), s2], dim=1), temb)
        h, recorded = self.dec2_attn(h, reference(h.shape[-2]), record)
        if recorded is not None:
            maps.record(AttentionTap.DECODER_HIGHRES, recorded)
        h = self.dec2_cross(h, ornament_tokens)
        h = self.dec1(torch.cat([self.up1(h), s1], dim=1), temb)
        h = self.dec0(torch.cat([self.up0(h), s0], dim=1), temb)
        return self.out(F.silu(self.out_norm(h))), maps
