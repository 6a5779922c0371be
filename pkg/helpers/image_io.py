import os
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image

PathLike = Union[str, Path]


def read_rgb(path: PathLike) -> np.ndarray:
    with Image.open(path) as image:
        return np.asarray(image.convert("RGB"), dtype=np.uint8).copy()


def read_mask(path: PathLike) -> np.ndarray:
    """Single-channel PNG (0/255) -> uint8 {0, 1}"""
    with Image.open(path) as image:
        return (np.asarray(image.convert("L")) > 127).astype(np.uint8)


def _write_atomic(image: Image.Image, path: PathLike) -> None:
    path = str(path)
    temp_path = f"{path}.tmp"
    image.save(temp_path, format="PNG")
    os.replace(temp_path, path)


def write_rgb(path: PathLike, array: np.ndarray) -> None:
    _write_atomic(Image.fromarray(to_uint8(array)), path)


def write_mask(path: PathLike, mask: np.ndarray) -> None:
    mask = np.asarray(mask)
    binary = mask > 0.5 if mask.dtype.kind == "f" else mask > 0
    _write_atomic(Image.fromarray(np.where(binary, 255, 0).astype(np.uint8)), path)


def to_uint8(array: np.ndarray) -> np.ndarray:
    """Float images in [0, 1] are rounded to bytes; uint8 passes through"""
    array = np.asarray(array)
    if array.dtype == np.uint8:
        return array
    return np.clip(np.round(array * 255.0), 0, 255).astype(np.uint8)


def to_float(array: np.ndarray) -> np.ndarray:
    array = np.asarray(array)
    if array.dtype == np.uint8:
        return array.astype(np.float32) / 255.0
    return array.astype(np.float32)
