import math
from typing import Optional, Tuple, Union

import torch

from objects.TrainConfig import LossWeights
from objects.errors import ParameterError, TrainingError

Number = Union[float, torch.Tensor]


def lambda_at(step: int, total_steps: int, weights: LossWeights) -> Tuple[float, float]:
    """Both weights fall linearly from their initial values to floor_fraction of them at total_steps"""
    if total_steps < 1 or not 0 <= step <= total_steps:
        raise ParameterError(f"Need 0 <= step <= total_steps and total_steps >= 1, got {step}/{total_steps}")
    scale = 1.0 - (1.0 - weights.floor_fraction) * step / total_steps
    return weights.lambda1_0 * scale, weights.lambda2_0 * scale


def _check_finite(name: str, value: Optional[Number]) -> None:
    if value is None:
        return
    scalar = float(value.detach()) if isinstance(value, torch.Tensor) else float(value)
    if not math.isfinite(scalar):
        raise TrainingError(f"Loss term {name} is not finite ({scalar})", term=name)


def total_loss(
    l1: Number,
    l2: Optional[Number],
    l3: Optional[Number],
    step: int,
    total_steps: int,
    weights: LossWeights,
) -> Number:
    """
    L1 + lambda1 * L2 + lambda2 * L3. A term passed as None belongs to a switched-off
    module and is left out of the sum entirely.
    """
    for name, value in (("l1", l1), ("l2", l2), ("l3", l3)):
        _check_finite(name, value)
    lambda1, lambda2 = lambda_at(step, total_steps, weights)
    total = l1
    if l2 is not None:
        total = total + lambda1 * l2
    if l3 is not None:
        total = total + lambda2 * l3
    return total
