from typing import Optional, Sequence

import cv2
import numpy as np

from config.config import GRID_SCALE


def heatmap(values: np.ndarray, size: Optional[int] = None, normalize: bool = True) -> np.ndarray:
    """2-D float map -> uint8 RGB JET heatmap, optionally resized to size x size (nearest)"""
    values = np.asarray(values, dtype=np.float32)
    if normalize:
        low, high = float(values.min()), float(values.max())
        values = (values - low) / (high - low) if high > low else np.zeros_like(values)
    values = np.clip(values, 0.0, 1.0)
    colored = cv2.cvtColor(cv2.applyColorMap(np.uint8(255 * values), cv2.COLORMAP_JET), cv2.COLOR_BGR2RGB)
    if size is not None and colored.shape[0] != size:
        colored = cv2.resize(colored, (size, size), interpolation=cv2.INTER_NEAREST)
    return colored


def overlay(image: np.ndarray, values: np.ndarray, weight: float = 0.5) -> np.ndarray:
    """Heatmap of values blended over an RGB image of the same size"""
    colored = heatmap(cv2.resize(np.asarray(values, dtype=np.float32), image.shape[1::-1], interpolation=cv2.INTER_LINEAR))
    return cv2.addWeighted(image, 1.0 - weight, colored, weight, 0.0)


def as_panel(array: np.ndarray) -> np.ndarray:
    """uint8 RGB view of an image or a mask (bool, {0,1}, or float in [0, 1])"""
    array = np.asarray(array)
    if array.ndim == 2:
        if array.dtype != np.uint8 or array.max(initial=0) <= 1:
            array = np.uint8(np.clip(array.astype(np.float32), 0.0, 1.0) * 255)
        array = np.repeat(array[..., None], 3, axis=-1)
    return array.astype(np.uint8)


def make_grid(panels: Sequence[np.ndarray], scale: int = GRID_SCALE, gap: int = 2) -> np.ndarray:
    """Panels of equal height side by side, white gaps between, upscaled by an integer factor"""
    panels = [as_panel(p) for p in panels]
    height = panels[0].shape[0]
    spacer = np.full((height, gap, 3), 255, dtype=np.uint8)
    row = []
    for i, panel in enumerate(panels):
        if panel.shape[0] != height:
            panel = cv2.resize(panel, (panel.shape[1] * height // panel.shape[0], height), interpolation=cv2.INTER_NEAREST)
        if i:
            row.append(spacer)
        row.append(panel)
    grid = np.concatenate(row, axis=1)
    if scale > 1:
        grid = cv2.resize(grid, (grid.shape[1] * scale, grid.shape[0] * scale), interpolation=cv2.INTER_NEAREST)
    return grid
