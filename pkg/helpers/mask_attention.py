import math
from typing import Sequence

import torch
import torch.nn.functional as F

from helpers.diffusion import checked_mse
from objects.AttentionMapSet import AttentionMapSet
from objects.TransformedMask import ReducedMask, TransformedMask
from objects.errors import ParameterError, ShapeMismatchError


def downflat_mask(mask: torch.Tensor, d_i: int) -> ReducedMask:
    """(..., d0, d0) mask -> area average to sqrt(d_i) per side -> (..., d_i)"""
    side = math.isqrt(d_i)
    if side * side != d_i:
        raise ParameterError(f"d_i must be a perfect square, got {d_i}")
    d0 = int(mask.shape[-1])
    if mask.shape[-2] != d0:
        raise ShapeMismatchError(f"Reference mask must be square, got {tuple(mask.shape[-2:])}")
    if side > d0:
        raise ParameterError(f"Cannot downsample a {d0}x{d0} mask to {side}x{side}")

    lead = mask.shape[:-2]
    grid = mask.reshape(-1, 1, d0, d0).float()
    if side != d0:
        grid = F.adaptive_avg_pool2d(grid, side)
    return ReducedMask(values=grid.reshape(*lead, d_i), source_dim=d0)


def mask_and_marginalize(attention: torch.Tensor, reduced: ReducedMask) -> TransformedMask:
    """
    Each attention row times the reduced mask, summed over the reference columns,
    reshaped to the latent grid and bilinearly upsampled to the reference mask size.
    attention: (..., d_i, d_i) with rows = latent tokens, columns = ornament tokens.
    """
    d_i = reduced.dim
    if attention.shape[-2:] != (d_i, d_i):
        raise ShapeMismatchError(f"Attention {tuple(attention.shape[-2:])} does not match reduced mask length {d_i}")
    if reduced.values.dim() > 1 and attention.shape[:-2] != reduced.values.shape[:-1]:
        raise ShapeMismatchError(
            f"Attention batch {tuple(attention.shape[:-2])} != mask batch {tuple(reduced.values.shape[:-1])}"
        )

    mass = (attention * reduced.values.unsqueeze(-2)).sum(dim=-1)
    side = reduced.side
    lead = attention.shape[:-2]
    grid = mass.reshape(-1, 1, side, side)
    if side != reduced.source_dim:
        grid = F.interpolate(grid, size=(reduced.source_dim, reduced.source_dim), mode="bilinear", align_corners=False)
    return TransformedMask(map=grid.reshape(*lead, reduced.source_dim, reduced.source_dim))


def aggregate(maps: Sequence[TransformedMask]) -> TransformedMask:
    if not maps:
        raise ParameterError("aggregate needs at least one transformed mask")
    shape = maps[0].map.shape
    for item in maps[1:]:
        if item.map.shape != shape:
            raise ShapeMismatchError(f"Transformed masks disagree: {tuple(shape)} vs {tuple(item.map.shape)}")
    if len(maps) == 1:
        return maps[0]
    return TransformedMask(map=torch.stack([m.map for m in maps]).mean(dim=0))


def transform_reference_mask(attention_maps: AttentionMapSet, reference_mask: torch.Tensor) -> TransformedMask:
    """Reference mask (B, 1, d0, d0) through every recorded tap, averaged; result (B, 1, d0, d0)"""
    if len(attention_maps) == 0:
        raise ParameterError("No attention maps were recorded")
    transformed = []
    for attention in attention_maps.values():
        reduced = downflat_mask(reference_mask[:, 0], int(attention.shape[-1]))
        transformed.append(mask_and_marginalize(attention, reduced))
    result = aggregate(transformed)
    return TransformedMask(map=result.map.unsqueeze(1))


def attn_mask_loss(transformed: torch.Tensor, gt_mask: torch.Tensor) -> torch.Tensor:
    return checked_mse(transformed, gt_mask, "attn_mask_loss")
