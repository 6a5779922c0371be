import logging
from typing import Optional

import torch
from tqdm import tqdm

from helpers.mask_refine import refine_step
from networks.tryon_model import OrnamentTryonModel
from objects.Conditioning import Conditioning
from objects.MaskState import AlphaSchedule, MaskState
from objects.NoiseSchedule import NoiseSchedule
from objects.SampleResult import SampleResult
from objects.errors import ParameterError, SamplingDivergenceError

logger = logging.getLogger("Sampler")


def ddim_timesteps(T: int, steps: int) -> torch.Tensor:
    """Evenly spaced, descending, starting at T - 1 and ending at 0"""
    if not 1 <= steps <= T:
        raise ParameterError(f"steps must lie in [1, {T}], got {steps}")
    return torch.linspace(T - 1, 0, steps).round().long()


@torch.no_grad()
def sample(
    model: OrnamentTryonModel,
    conditioning: Conditioning,
    schedule: NoiseSchedule,
    steps: int,
    seed: int,
    alpha_schedule: Optional[AlphaSchedule] = None,
    progress_bar: bool = False,
) -> SampleResult:
    """
    Deterministic DDIM (eta = 0). The reference branch re-runs at every step on the
    current wearing mask; after each step the mask head refines that mask, with alpha
    following denoising progress (0 at the noisiest step, 1 at the last).
    Without a mask head the conditioning mask stays at the box.
    """
    alpha_schedule = alpha_schedule or AlphaSchedule()
    device = next(model.parameters()).device
    conditioning = conditioning.to(device)
    timesteps = ddim_timesteps(schedule.T, steps)
    alpha_bars = schedule.alpha_bars.to(device=device, dtype=torch.float32)

    generator = torch.Generator(device="cpu").manual_seed(seed)
    z = torch.randn(conditioning.masked_model_image.shape, generator=generator).to(device)
    tokens = model.ornament_embed(conditioning.ornament_image)
    state = MaskState.initial(conditioning.box_mask)
    trajectory = []

    iterator = tqdm(enumerate(timesteps.tolist()), total=steps, desc="sampling", disable=not progress_bar)
    for i, t in iterator:
        t_batch = torch.full((conditioning.batch_size,), t, device=device, dtype=torch.long)
        features = model.encode_reference(
            conditioning.ornament_image, conditioning.masked_model_image, state.current_mask, t_batch
        )
        eps, _ = model.denoise(z, t_batch, conditioning.masked_model_image, state.current_mask, tokens, features)

        alpha_bar = alpha_bars[t]
        alpha_bar_prev = alpha_bars[timesteps[i + 1]] if i + 1 < steps else torch.ones((), device=device)
        x0 = ((z - (1.0 - alpha_bar).sqrt() * eps) / alpha_bar.sqrt()).clamp(-1.0, 1.0)
        eps = (z - alpha_bar.sqrt() * x0) / (1.0 - alpha_bar).sqrt()
        z = alpha_bar_prev.sqrt() * x0 + (1.0 - alpha_bar_prev).sqrt() * eps
        if not torch.isfinite(z).all():
            logger.error("non-finite latent at step %d (t=%d)", i, t)
            raise SamplingDivergenceError(i)

        if model.mask_head is not None:
            progress = i / (steps - 1) if steps > 1 else 1.0
            state = refine_step(state, features, progress, alpha_schedule, model.mask_head)
        trajectory.append(state.current_mask.clone())

    image = ((z + 1.0) / 2.0).clamp(0.0, 1.0)
    return SampleResult(image=image, mask_state=state, trajectory=trajectory)
