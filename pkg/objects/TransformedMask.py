import math
from dataclasses import dataclass

import torch

from objects.errors import ParameterError


@dataclass
class ReducedMask:
    """Reference mask area-averaged to a side x side grid and flattened row-major: (..., side * side)"""

    values: torch.Tensor
    source_dim: int

    def __post_init__(self) -> None:
        d = int(self.values.shape[-1])
        if math.isqrt(d) ** 2 != d:
            raise ParameterError(f"Reduced mask length {d} is not a perfect square")

    @property
    def dim(self) -> int:
        return int(self.values.shape[-1])

    @property
    def side(self) -> int:
        return math.isqrt(self.dim)


@dataclass
class TransformedMask:
    """Reference mask carried through attention onto the latent grid: (..., d0, d0)"""

    map: torch.Tensor

    @property
    def source_dim(self) -> int:
        return int(self.map.shape[-1])
