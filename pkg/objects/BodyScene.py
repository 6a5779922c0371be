from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass
class BodyScene:
    """A rendered model image: background clutter plus a capsule-shaped body part"""

    image: np.ndarray # uint8 (H, W, 3)
    body_mask: np.ndarray # uint8 (H, W) in {0, 1}
    axis_angle: float # degrees, direction of the capsule axis
    axis_center: Tuple[float, float]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.body_mask.shape[:2]

    def contains(self, point: Tuple[float, float]) -> bool:
        x, y = int(round(point[0])), int(round(point[1]))
        height, width = self.shape
        if not (0 <= x < width and 0 <= y < height):
            return False
        return bool(self.body_mask[y, x])
