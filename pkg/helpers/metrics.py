"""
Desk-scale try-on metrics on uint8 RGB images and {0, 1} masks.
"""

from typing import Optional

import cv2
import numpy as np

from config.config import COLOR_DISTANCE_SCALE, COLOR_HISTOGRAM_BINS, MASK_THRESHOLD, MIN_COMPONENT_AREA_PX
from helpers.ornament_render import count_components
from objects.errors import ShapeMismatchError


def binarize(mask: np.ndarray, threshold: float = MASK_THRESHOLD) -> np.ndarray:
    mask = np.asarray(mask, dtype=np.float64)
    return mask >= threshold if mask.max(initial=0.0) <= 1.0 else mask >= threshold * 255.0


def mask_iou(pred: np.ndarray, gt: np.ndarray, threshold: float = MASK_THRESHOLD) -> float:
    """IoU of the binarized prediction; two empty masks count as a perfect match"""
    if np.shape(pred) != np.shape(gt):
        raise ShapeMismatchError(f"pred {np.shape(pred)} != gt {np.shape(gt)}")
    p, g = binarize(pred, threshold), np.asarray(gt) > 0
    union = np.logical_or(p, g).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(p, g).sum() / union)


def soft_iou(pred: np.ndarray, gt: np.ndarray) -> float:
    if np.shape(pred) != np.shape(gt):
        raise ShapeMismatchError(f"pred {np.shape(pred)} != gt {np.shape(gt)}")
    p = np.clip(np.asarray(pred, dtype=np.float64), 0.0, 1.0)
    g = (np.asarray(gt) > 0).astype(np.float64)
    union = (p + g - p * g).sum()
    if union == 0:
        return 1.0
    return float((p * g).sum() / union)


def local_background(image: np.ndarray, region: np.ndarray, ring_px: int = 2) -> np.ndarray:
    """Median colour of the band just outside region"""
    region = np.asarray(region) > 0
    kernel = np.ones((2 * ring_px + 1, 2 * ring_px + 1), dtype=np.uint8)
    ring = cv2.dilate(region.astype(np.uint8), kernel) > 0
    ring &= ~region
    if not ring.any():
        ring = ~region
    if not ring.any():
        return np.median(image.reshape(-1, 3), axis=0)
    return np.median(image[ring], axis=0)


def segment_ornament(image: np.ndarray, region: np.ndarray, threshold: float = MASK_THRESHOLD) -> np.ndarray:
    """
    Pixels of region whose colour is far from the local background.
    The RGB distance is scaled to a [0, 1] ornament score and thresholded.
    """
    if image.shape[:2] != np.shape(region):
        raise ShapeMismatchError(f"image {image.shape[:2]} != region {np.shape(region)}")
    region = np.asarray(region) > 0
    if not region.any():
        return np.zeros(region.shape, dtype=bool)
    background = local_background(image, region)
    distance = np.linalg.norm(image.astype(np.float64) - background[None, None, :], axis=-1)
    score = np.clip(distance / COLOR_DISTANCE_SCALE, 0.0, 1.0)
    return region & (score >= threshold)


def component_count_accuracy(
    image: np.ndarray,
    predicted_mask: np.ndarray,
    expected_count: int,
    threshold: float = MASK_THRESHOLD,
) -> float:
    segmented = segment_ornament(image, binarize(predicted_mask, threshold), threshold)
    return float(count_components(segmented, MIN_COMPONENT_AREA_PX) == expected_count)


def color_histogram(image: np.ndarray, region: np.ndarray, bins: int = COLOR_HISTOGRAM_BINS) -> Optional[np.ndarray]:
    """(3, bins) per-channel histograms normalised to sum 1; None for an empty region"""
    pixels = image[np.asarray(region) > 0]
    if len(pixels) == 0:
        return None
    hist = np.stack([np.histogram(pixels[:, c], bins=bins, range=(0, 256))[0] for c in range(3)]).astype(np.float64)
    return hist / hist.sum(axis=1, keepdims=True)


def color_identity(
    output_image: np.ndarray,
    output_region: np.ndarray,
    reference_image: np.ndarray,
    reference_region: np.ndarray,
    bins: int = COLOR_HISTOGRAM_BINS,
) -> float:
    """Histogram intersection averaged over the RGB channels, in [0, 1]"""
    h_out = color_histogram(output_image, output_region, bins)
    h_ref = color_histogram(reference_image, reference_region, bins)
    if h_out is None or h_ref is None:
        return 0.0
    return float(np.minimum(h_out, h_ref).sum(axis=1).mean())
