from dataclasses import dataclass

import torch

from objects.errors import ShapeMismatchError


@dataclass
class Conditioning:
    """Sampler inputs, all in [0, 1]: ornament (B, 3, R, R), masked model image (B, 3, R, R), box mask (B, 1, R, R)"""

    ornament_image: torch.Tensor
    masked_model_image: torch.Tensor
    box_mask: torch.Tensor

    def __post_init__(self) -> None:
        if self.ornament_image.shape != self.masked_model_image.shape:
            raise ShapeMismatchError(
                f"ornament {tuple(self.ornament_image.shape)} != masked model {tuple(self.masked_model_image.shape)}"
            )
        expected = (self.masked_model_image.shape[0], 1) + tuple(self.masked_model_image.shape[-2:])
        if tuple(self.box_mask.shape) != expected:
            raise ShapeMismatchError(f"box mask {tuple(self.box_mask.shape)} != {expected}")

    @property
    def batch_size(self) -> int:
        return int(self.masked_model_image.shape[0])

    def to(self, device: torch.device) -> "Conditioning":
        return Conditioning(
            self.ornament_image.to(device), self.masked_model_image.to(device), self.box_mask.to(device)
        )
