from typing import Optional, Tuple

import torch
import torch.nn as nn

from networks.blocks import TimeEmbedding
from networks.denoiser import TinyUNet
from networks.mask_head import MaskHead
from networks.ornament_encoder import OrnamentEncoder
from networks.reference_net import ReferenceNet, side_by_side
from objects.AttentionMapSet import AttentionMapSet
from objects.FeatureStack import FeatureStack
from objects.TrainConfig import TrainConfig
from objects.errors import ShapeMismatchError


class OrnamentTryonModel(nn.Module):
    """
    Denoiser, reference branch, ornament encoder and (when mask refinement is on) the mask head.
    Images enter in [0, 1]; the noisy image lives in [-1, 1].
    """

    def __init__(
        self,
        widths: Tuple[int, int, int],
        heads: int,
        token_count: int,
        resolution: int,
        mask_refinement: bool = True,
        mask_guided_attention: bool = True,
    ) -> None:
        super().__init__()
        w0, w1, w2 = widths
        temb_dim = 4 * w0
        self.widths = tuple(widths)
        self.resolution = resolution
        self.mask_refinement = mask_refinement
        self.mask_guided_attention = mask_guided_attention

        self.time_embed = TimeEmbedding(w0, temb_dim)
        self.refnet = ReferenceNet(widths, temb_dim)
        self.denoiser = TinyUNet(widths, temb_dim, token_dim=w2, heads=heads)
        self.ornament_encoder = OrnamentEncoder(token_count, token_dim=w2)
        self.mask_head = MaskHead(w1) if mask_refinement else None

    @classmethod
    def from_config(cls, config: TrainConfig) -> "OrnamentTryonModel":
        return cls(
            widths=config.model_widths,
            heads=config.attention_heads,
            token_count=config.ornament_tokens,
            resolution=config.resolution,
            mask_refinement=config.mask_refinement,
            mask_guided_attention=config.mask_guided_attention,
        )

    def _check_resolution(self, image: torch.Tensor) -> None:
        if tuple(image.shape[-2:]) != (self.resolution, self.resolution):
            raise ShapeMismatchError(f"Expected {self.resolution}x{self.resolution} input, got {tuple(image.shape[-2:])}")

    def encode_reference(
        self,
        ornament_image: torch.Tensor,
        masked_model_image: torch.Tensor,
        current_mask: torch.Tensor,
        t: torch.Tensor,
    ) -> FeatureStack:
        self._check_resolution(masked_model_image)
        return self.refnet(side_by_side(ornament_image, masked_model_image, current_mask), self.time_embed(t))

    def ornament_embed(self, ornament_image: torch.Tensor) -> torch.Tensor:
        self._check_resolution(ornament_image)
        return self.ornament_encoder(ornament_image)

    def denoise(
        self,
        z_t: torch.Tensor,
        t: torch.Tensor,
        masked_model_image: torch.Tensor,
        mask: torch.Tensor,
        ornament_tokens: torch.Tensor,
        features: Optional[FeatureStack] = None,
        record: bool = False,
    ) -> Tuple[torch.Tensor, AttentionMapSet]:
        """Noise prediction; records attention maps only when asked and mask-guided attention is on"""
        if z_t.shape != masked_model_image.shape:
            raise ShapeMismatchError(f"z_t {tuple(z_t.shape)} != conditioning image {tuple(masked_model_image.shape)}")
        return self.denoiser(
            z_t,
            self.time_embed(t),
            masked_model_image,
            mask,
            ornament_tokens,
            features,
            record and self.mask_guided_attention,
        )
