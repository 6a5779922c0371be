import torch
import torch.nn.functional as F

from helpers.diffusion import checked_mse
from networks.mask_head import MaskHead
from objects.FeatureStack import FeatureStack
from objects.MaskState import AlphaSchedule, MaskState
from objects.errors import ParameterError, ShapeMismatchError


def alpha_at(progress: float, schedule: AlphaSchedule) -> float:
    if not 0.0 <= progress <= 1.0:
        raise ParameterError(f"progress must lie in [0, 1], got {progress}")
    if progress >= schedule.ramp_fraction:
        return schedule.end_value
    return schedule.start_value + (schedule.end_value - schedule.start_value) * progress / schedule.ramp_fraction


def blend_mask(pred_mask: torch.Tensor, box_mask: torch.Tensor, alpha: float) -> torch.Tensor:
    """alpha * pred + (1 - alpha) * box"""
    if pred_mask.shape != box_mask.shape:
        raise ShapeMismatchError(f"pred_mask {tuple(pred_mask.shape)} != box_mask {tuple(box_mask.shape)}")
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha * pred_mask + (1.0 - alpha) * box_mask


def predict_mask(
    head: MaskHead,
    f_m: torch.Tensor,
    f_o: torch.Tensor,
    prev_mask: torch.Tensor,
    out_size: int,
) -> torch.Tensor:
    """
    sigmoid(head([f_m * prev_mask, f_o])) bilinearly upsampled to out_size.
    prev_mask is (B, 1, H, W) at image resolution; it is area-averaged down to the feature grid.
    """
    if f_m.shape != f_o.shape:
        raise ShapeMismatchError(f"f_m {tuple(f_m.shape)} != f_o {tuple(f_o.shape)}")
    if f_m.shape[1] != head.channels:
        raise ShapeMismatchError(f"Mask head expects {head.channels} channels, got {f_m.shape[1]}")
    if prev_mask.dim() != 4 or prev_mask.shape[0] != f_m.shape[0]:
        raise ShapeMismatchError(f"prev_mask {tuple(prev_mask.shape)} does not match features {tuple(f_m.shape)}")
    gate = F.adaptive_avg_pool2d(prev_mask, f_m.shape[-2:])
    logits = head(torch.cat([f_m * gate, f_o], dim=1))
    prob = torch.sigmoid(logits)
    if prob.shape[-1] != out_size:
        prob = F.interpolate(prob, size=(out_size, out_size), mode="bilinear", align_corners=False)
    return prob


def refine_step(
    state: MaskState,
    features: FeatureStack,
    progress: float,
    schedule: AlphaSchedule,
    head: MaskHead,
) -> MaskState:
    """Predict from the highest-resolution level gated by the current mask, then blend with the box"""
    f_o, f_m = features.halves(0)
    pred = predict_mask(head, f_m, f_o, state.current_mask, state.box_mask.shape[-1])
    alpha = alpha_at(progress, schedule)
    return MaskState(current_mask=blend_mask(pred, state.box_mask, alpha), box_mask=state.box_mask, alpha=alpha)


def mask_loss(pred_mask: torch.Tensor, gt_mask: torch.Tensor) -> torch.Tensor:
    return checked_mse(pred_mask, gt_mask, "mask_loss")
