from dataclasses import asdict, dataclass
from typing import Tuple

from config.config import CROP_SCALE_FACTOR


@dataclass(frozen=True)
class CropRegion:
    """Square window (x, y, side) of the full model image; image_size is (height, width)"""

    x: int
    y: int
    side: int
    image_size: Tuple[int, int]
    scale_factor: float = CROP_SCALE_FACTOR

    @property
    def slices(self) -> Tuple[slice, slice]:
        return slice(self.y, self.y + self.side), slice(self.x, self.x + self.side)

    def fits(self, image_size: Tuple[int, int]) -> bool:
        height, width = image_size
        return self.x >= 0 and self.y >= 0 and self.x + self.side <= width and self.y + self.side <= height

    def to_dict(self) -> dict:
        data = asdict(self)
        data["image_size"] = list(self.image_size)
        return data
