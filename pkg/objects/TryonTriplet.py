from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Union

import numpy as np

from helpers.image_io import read_mask, read_rgb, write_mask, write_rgb

# file name of every array inside a sample directory
TRIPLET_FILES = {
    "reference_image": "reference.png",
    "reference_mask": "reference_mask.png",
    "masked_model_image": "masked_model.png",
    "target_image": "target.png",
    "wearing_mask": "wearing_mask.png",
    "input_mask": "input_mask.png",
}


@dataclass
class TryonTriplet:
    """
    One training/eval sample. Images are uint8 RGB (H, W, 3), masks uint8 (H, W) in {0, 1};
    the 8-bit form is what lands on disk, so equality checks are exact.
    """

    reference_image: np.ndarray
    reference_mask: np.ndarray
    masked_model_image: np.ndarray
    target_image: np.ndarray
    wearing_mask: np.ndarray
    input_mask: np.ndarray
    meta: dict = field(default_factory=dict)

    def check_invariants(self) -> None:
        wearing = self.wearing_mask.astype(bool)
        inside = self.input_mask.astype(bool)
        if (wearing & ~inside).any():
            raise ValueError("wearing_mask is not contained in input_mask")
        if not np.array_equal(self.target_image[~inside], self.masked_model_image[~inside]):
            raise ValueError("masked_model_image differs from target_image outside input_mask")
        if not self.reference_mask.any() or not self.wearing_mask.any():
            raise ValueError("Empty ornament mask")

    def save(self, sample_dir: Union[str, Path]) -> Dict[str, str]:
        """Write every array as PNG; returns file names relative to sample_dir"""
        sample_dir = Path(sample_dir)
        sample_dir.mkdir(parents=True, exist_ok=True)
        for name, file_name in TRIPLET_FILES.items():
            value = getattr(self, name)
            if name.endswith("_mask"):
                write_mask(sample_dir / file_name, value)
            else:
                write_rgb(sample_dir / file_name, value)
        return dict(TRIPLET_FILES)

    @classmethod
    def load(cls, root: Union[str, Path], files: Dict[str, str], meta: dict) -> "TryonTriplet":
        root = Path(root)
        arrays = {}
        for name in TRIPLET_FILES:
            path = root / files[name]
            if not path.is_file():
                raise FileNotFoundError(f"Triplet file not found: {path}")
            arrays[name] = read_mask(path) if name.endswith("_mask") else read_rgb(path)
        return cls(meta=meta, **arrays)
