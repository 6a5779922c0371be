import math
from typing import Tuple

import cv2
import numpy as np

from config.config import CROP_SCALE_FACTOR
from objects.CropRegion import CropRegion
from objects.errors import InputMaskError, ShapeMismatchError


def _resize(array: np.ndarray, side: int, interpolation: int) -> np.ndarray:
    if array.shape[0] == side and array.shape[1] == side:
        return array.copy()
    return cv2.resize(array, (side, side), interpolation=interpolation)


def crop_region_for(
    bbox: Tuple[int, int, int, int],
    image_size: Tuple[int, int],
    scale_factor: float = CROP_SCALE_FACTOR,
) -> CropRegion:
    """Square of side scale_factor * max(w, h) centred on the box, shifted (and if needed shrunk) to stay inside"""
    x, y, w, h = (int(v) for v in bbox)
    height, width = image_size
    if w < 1 or h < 1:
        raise InputMaskError(f"Bounding box {bbox} is empty")
    if x < 0 or y < 0 or x + w > width or y + h > height:
        raise InputMaskError(f"Bounding box {bbox} lies outside the {width}x{height} image")

    side = min(int(round(scale_factor * max(w, h))), height, width)
    cx, cy = x + w / 2.0, y + h / 2.0
    x0 = min(max(int(math.floor(cx - side / 2.0 + 0.5)), 0), width - side)
    y0 = min(max(int(math.floor(cy - side / 2.0 + 0.5)), 0), height - side)
    return CropRegion(x=x0, y=y0, side=side, image_size=(height, width), scale_factor=scale_factor)


def prepare_crop(
    model_image: np.ndarray,
    bbox: Tuple[int, int, int, int],
    resolution: int,
    scale_factor: float = CROP_SCALE_FACTOR,
) -> Tuple[np.ndarray, CropRegion]:
    region = crop_region_for(bbox, model_image.shape[:2], scale_factor)
    crop = model_image[region.slices]
    interpolation = cv2.INTER_AREA if region.side > resolution else cv2.INTER_LINEAR
    return _resize(crop, resolution, interpolation), region


def crop_mask(mask: np.ndarray, region: CropRegion, resolution: int) -> np.ndarray:
    """Binary mask cropped like the image, resampled with nearest neighbour"""
    return _resize(np.ascontiguousarray(mask[region.slices]).astype(np.uint8), resolution, cv2.INTER_NEAREST)


def paste_back(generated: np.ndarray, original: np.ndarray, region: CropRegion) -> np.ndarray:
    """Resampled crop written into region; every other pixel is copied from original"""
    if not region.fits(original.shape[:2]) or tuple(region.image_size) != tuple(original.shape[:2]):
        raise ShapeMismatchError(f"Region {region} does not fit an image of shape {original.shape[:2]}")
    if generated.shape[0] != generated.shape[1] or generated.shape[2:] != original.shape[2:]:
        raise ShapeMismatchError(f"Generated crop {generated.shape} cannot go into {original.shape}")
    final = original.copy()
    final[region.slices] = _resize(generated.astype(original.dtype), region.side, cv2.INTER_LINEAR)
    return final


def paste_mask_back(mask: np.ndarray, region: CropRegion) -> np.ndarray:
    """Float mask from crop coordinates to full-image coordinates, zero outside region"""
    full = np.zeros(region.image_size, dtype=np.float32)
    full[region.slices] = _resize(mask.astype(np.float32), region.side, cv2.INTER_LINEAR)
    return full
