from typing import Optional, Tuple

import torch
import torch.nn as nn

from networks.blocks import group_norm
from objects.errors import InjectionError


def _split_heads(x: torch.Tensor, heads: int) -> torch.Tensor:
    batch, tokens, channels = x.shape
    return x.reshape(batch, tokens, heads, channels // heads).transpose(1, 2)


def attention(q: torch.Tensor, k: torch.Tensor, v: torch.Tensor, heads: int = 1) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Multi-head softmax attention on (B, tokens, C) inputs.
    Returns the merged output (B, Nq, C) and the weights (B, heads, Nq, Nk).
    """
    if q.shape[-1] % heads:
        raise InjectionError(f"{q.shape[-1]} channels do not split into {heads} heads")
    qh, kh, vh = (_split_heads(x, heads) for x in (q, k, v))
    scale = qh.shape[-1] ** -0.5
    weights = torch.softmax((qh @ kh.transpose(-1, -2)) * scale, dim=-1)
    out = (weights @ vh).transpose(1, 2).reshape(q.shape[0], q.shape[1], q.shape[2])
    return out, weights


def inject(
    query: torch.Tensor,
    key: torch.Tensor,
    value: torch.Tensor,
    ref_key: Optional[torch.Tensor] = None,
    ref_value: Optional[torch.Tensor] = None,
    heads: int = 1,
) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Self-attention whose keys/values are extended with reference tokens.
    The softmax runs over the union; columns [N, N + M) of the weights belong to the reference.
    """
    if ref_key is None:
        return attention(query, key, value, heads)
    if ref_key.shape[-1] != key.shape[-1] or ref_value.shape[:2] != ref_key.shape[:2]:
        raise InjectionError(f"Reference tokens {tuple(ref_key.shape)} do not match denoiser tokens {tuple(key.shape)}")
    return attention(query, torch.cat([key, ref_key], dim=1), torch.cat([value, ref_value], dim=1), heads)


def ornament_subblock(weights: torch.Tensor, latent_tokens: int, ref_height: int, ref_width: int) -> torch.Tensor:
    """
    Latent rows x ornament-half columns of joint attention weights, averaged over heads.
    (B, heads, N, N + Hr*Wr) -> (B, N, Hr*Wr/2), ornament tokens in row-major order of their grid.
    """
    batch, heads, rows, _ = weights.shape
    ref = weights[..., latent_tokens:].reshape(batch, heads, rows, ref_height, ref_width)
    ornament = ref[..., : ref_width // 2].reshape(batch, heads, rows, ref_height * (ref_width // 2))
    return ornament.mean(dim=1)


class InjectedAttention(nn.Module):
    """Residual self-attention over denoiser tokens plus reference tokens of the same resolution"""

    def __init__(self, channels: int, heads: int = 4) -> None:
        super().__init__()
        self.heads = heads
        self.norm = group_norm(channels)
        self.ref_norm = group_norm(channels)
        self.to_q = nn.Linear(channels, channels, bias=False)
        self.to_k = nn.Linear(channels, channels, bias=False)
        self.to_v = nn.Linear(channels, channels, bias=False)
        self.to_out = nn.Linear(channels, channels)

    def forward(
        self,
        x: torch.Tensor,
        reference: Optional[torch.Tensor] = None,
        record: bool = False,
    ) -> Tuple[torch.Tensor, Optional[torch.Tensor]]:
        batch, channels, height, width = x.shape
        tokens = self.norm(x).flatten(2).transpose(1, 2)
        q, k, v = self.to_q(tokens), self.to_k(tokens), self.to_v(tokens)

        ref_k = ref_v = None
        if reference is not None:
            if reference.shape[:3] != (batch, channels, height) or reference.shape[-1] != 2 * width:
                raise InjectionError(
                    f"Reference level {tuple(reference.shape)} does not match denoiser level {tuple(x.shape)}"
                )
            ref_tokens = self.ref_norm(reference).flatten(2).transpose(1, 2)
            ref_k, ref_v = self.to_k(ref_tokens), self.to_v(ref_tokens)

        out, weights = inject(q, k, v, ref_k, ref_v, self.heads)
        out = self.to_out(out).transpose(1, 2).reshape(batch, channels, height, width)

        recorded = None
        if record and reference is not None:
            recorded = ornament_subblock(weights, height * width, reference.shape[-2], reference.shape[-1])
        return x + out, recorded


class CrossAttention(nn.Module):
    """Residual cross-attention from denoiser tokens to the ornament token sequence"""

    def __init__(self, channels: int, token_dim: int, heads: int = 4) -> None:
        super().__init__()
        self.heads = heads
        self.norm = group_norm(channels)
        self.to_q = nn.Linear(channels, channels, bias=False)
        self.to_k = nn.Linear(token_dim, channels, bias=False)
        self.to_v = nn.Linear(token_dim, channels, bias=False)
        self.to_out = nn.Linear(channels, channels)

    def forward(self, x: torch.Tensor, ornament_tokens: torch.Tensor) -> torch.Tensor:
        batch, channels, height, width = x.shape
        tokens = self.norm(x).flatten(2).transpose(1, 2)
        out, _ = attention(self.to_q(tokens), self.to_k(ornament_tokens), self.to_v(ornament_tokens), self.heads)
        return x + self.to_out(out).transpose(1, 2).reshape(batch, channels, height, width)
