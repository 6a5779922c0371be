import math
from typing import Union

import torch
import torch.nn.functional as F

from enums.ScheduleShape import ScheduleShape
from objects.NoiseSchedule import NoiseSchedule
from objects.errors import ParameterError, ShapeMismatchError


def make_schedule(
    T: int,
    beta_min: float,
    beta_max: float,
    shape: Union[ScheduleShape, str] = ScheduleShape.LINEAR,
) -> NoiseSchedule:
    """
    Nondecreasing betas in [beta_min, beta_max] and their cumulative products.

    linear: evenly spaced betas.
    cosine: betas implied by alpha_bar(t) = cos^2(((t / T) + s) / (1 + s) * pi / 2), clipped to the range.
    """
    shape = ScheduleShape(shape)
    if T < 2:
        raise ParameterError(f"T must be >= 2, got {T}")
    if not 0.0 < beta_min < beta_max < 1.0:
        raise ParameterError(f"Need 0 < beta_min < beta_max < 1, got ({beta_min}, {beta_max})")

    if shape is ScheduleShape.LINEAR:
        betas = torch.linspace(beta_min, beta_max, T, dtype=torch.float64)
    else:
        s = 0.008
        steps = torch.arange(T + 1, dtype=torch.float64) / T
        f = torch.cos((steps + s) / (1 + s) * math.pi / 2) ** 2
        betas = 1.0 - f[1:] / f[:-1]
        betas = torch.clamp(betas, beta_min, beta_max)
        betas = torch.cummax(betas, dim=0).values

    alpha_bars = torch.cumprod(1.0 - betas, dim=0)
    return NoiseSchedule(betas=betas, alpha_bars=alpha_bars, shape=shape)


def _broadcast(values: torch.Tensor, like: torch.Tensor) -> torch.Tensor:
    return values.reshape(values.shape + (1,) * (like.dim() - values.dim())).to(like.dtype)


def q_sample(z0: torch.Tensor, t: Union[int, torch.Tensor], eps: torch.Tensor, schedule: NoiseSchedule) -> torch.Tensor:
    """z_t = sqrt(alpha_bar_t) * z0 + sqrt(1 - alpha_bar_t) * eps; t is a scalar or one index per batch row"""
    if eps.shape != z0.shape:
        raise ShapeMismatchError(f"eps shape {tuple(eps.shape)} != z0 shape {tuple(z0.shape)}")
    t = torch.as_tensor(t, device=z0.device)
    if (t < 0).any() or (t >= schedule.T).any():
        raise IndexError(f"timestep out of range [0, {schedule.T}): {t.tolist()}")
    alpha_bar = schedule.alpha_bar(t)
    return _broadcast(alpha_bar.sqrt(), z0) * z0 + _broadcast((1.0 - alpha_bar).sqrt(), z0) * eps


def checked_mse(prediction: torch.Tensor, target: torch.Tensor, name: str = "loss") -> torch.Tensor:
    if prediction.shape != target.shape:
        raise ShapeMismatchError(f"{name}: shape {tuple(prediction.shape)} != {tuple(target.shape)}")
    return F.mse_loss(prediction, target, reduction="mean")


def denoise_loss(eps_pred: torch.Tensor, eps: torch.Tensor) -> torch.Tensor:
    return checked_mse(eps_pred, eps, "denoise_loss")
