from typing import Optional, Tuple, Union

import cv2
import numpy as np

from enums.InputMaskKind import InputMaskKind
from objects.errors import InputMaskError


def mask_bbox(mask: np.ndarray) -> Tuple[int, int, int, int]:
    """(x, y, w, h) of the nonzero pixels"""
    ys, xs = np.nonzero(mask)
    if len(xs) == 0:
        raise InputMaskError("Mask is empty")
    x0, y0 = int(xs.min()), int(ys.min())
    return x0, y0, int(xs.max()) - x0 + 1, int(ys.max()) - y0 + 1


def _bbox_mask(mask: np.ndarray) -> np.ndarray:
    x, y, w, h = mask_bbox(mask)
    out = np.zeros_like(mask)
    out[y:y + h, x:x + w] = 1
    return out


def _hull_mask(mask: np.ndarray) -> np.ndarray:
    ys, xs = np.nonzero(mask)
    points = np.stack([xs, ys], axis=1).astype(np.int32)
    hull = cv2.convexHull(points)
    out = np.zeros_like(mask)
    cv2.fillPoly(out, [hull.reshape(-1, 2)], 1)
    # rasterised polygon may miss boundary pixels of the source
    return out | mask


def _obb_mask(mask: np.ndarray, hull: np.ndarray, bbox: np.ndarray) -> np.ndarray:
    ys, xs = np.nonzero(mask)
    points = np.stack([xs, ys], axis=1).astype(np.float32)
    corners = cv2.boxPoints(cv2.minAreaRect(points))
    out = np.zeros_like(mask)
    cv2.fillPoly(out, [np.round(corners).astype(np.int32)], 1)
    # keeps gt <= hull <= obb <= bbox after rasterisation
    return (out | hull) & bbox


def derive_input_mask(
    wearing_mask: np.ndarray,
    kind: Union[InputMaskKind, str],
    jitter: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """
    Enclosing region of the requested kind around a wearing mask.

    jitter expands the region by a margin of jitter * max(bbox width, height) pixels
    (a uniformly drawn fraction of it when an rng is given). Expansion is a square
    dilation for every kind, so the kinds stay nested for the same margin.
    """
    kind = InputMaskKind(kind)
    mask = (np.asarray(wearing_mask) > 0).astype(np.uint8)
    if not mask.any():
        raise InputMaskError("Cannot derive an input mask from an empty wearing mask")
    if jitter < 0:
        raise InputMaskError(f"jitter must be >= 0, got {jitter}")

    if kind is InputMaskKind.GT:
        region = mask.copy()
    else:
        bbox = _bbox_mask(mask)
        if kind is InputMaskKind.BBOX:
            region = bbox
        else:
            hull = _hull_mask(mask)
            region = hull if kind is InputMaskKind.HULL else _obb_mask(mask, hull, bbox)

    if jitter > 0:
        _, _, w, h = mask_bbox(mask)
        fraction = rng.uniform(0.0, 1.0) if rng is not None else 1.0
        margin = int(round(fraction * jitter * max(w, h)))
        if margin > 0:
            kernel = np.ones((2 * margin + 1, 2 * margin + 1), dtype=np.uint8)
            region = cv2.dilate(region, kernel)
    return region.astype(np.uint8)
