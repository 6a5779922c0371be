"""
Procedural ornament sprites with exact silhouette masks.

Every primitive is drawn with OpenCV on a uint8 canvas, without anti-aliasing,
so the silhouette mask is exactly the set of painted pixels.
"""

import math
from typing import Tuple

import cv2
import numpy as np

from config.config import MIN_COMPONENT_GAP_PX, REFERENCE_BACKGROUND
from enums.OrnamentArchetype import OrnamentArchetype
from objects.OrnamentSpec import OrnamentSpec
from objects.errors import ParameterError


def _to_bytes(color) -> Tuple[int, int, int]:
    return tuple(int(round(c * 255)) for c in color)


def count_components(mask: np.ndarray, min_area: int = 1) -> int:
    """Number of 8-connected components with at least min_area pixels"""
    binary = (np.asarray(mask) > 0).astype(np.uint8)
    if not binary.any():
        return 0
    count, _, stats, _ = cv2.connectedComponentsWithStats(binary, connectivity=8)
    areas = stats[1:, cv2.CC_STAT_AREA]
    return int((areas >= min_area).sum())


def _draw_beaded_ring(canvas, mask, spec: OrnamentSpec, rng) -> None:
    n = spec.component_count
    center = (spec.size_px - 1) / 2.0
    outer = spec.size_px / 2.0 - 1.0
    bead_r = max(1, int(round(outer * 0.2)))
    chord = lambda ring_r: 2.0 * ring_r * math.sin(math.pi / n) if n > 1 else float("inf")
    # shrink beads until neighbours are separated by the minimum gap
    while bead_r >= 1 and chord(outer - bead_r) - 2 * bead_r - 1 < MIN_COMPONENT_GAP_PX:
        bead_r -= 1
    if bead_r < 1:
        raise ParameterError(f"size_px={spec.size_px} too small for {n} separated beads")

    ring_r = outer - bead_r
    phase = rng.uniform(0.0, 2.0 * math.pi)
    base, accent = _to_bytes(spec.base_color), _to_bytes(spec.accent_color)
    for k in range(n):
        angle = phase + 2.0 * math.pi * k / n
        cx = int(round(center + ring_r * math.cos(angle)))
        cy = int(round(center + ring_r * math.sin(angle)))
        cv2.circle(canvas, (cx, cy), bead_r, base, thickness=-1)
        cv2.circle(mask, (cx, cy), bead_r, 1, thickness=-1)
        if bead_r >= 2:
            # specular dot stays inside the bead
            cv2.circle(canvas, (cx, cy), bead_r // 2, accent, thickness=-1)


def _draw_chain(canvas, mask, spec: OrnamentSpec, rng) -> None:
    n = spec.component_count
    center = (spec.size_px - 1) / 2.0
    outer = spec.size_px / 2.0 - 1.0
    span = math.radians(160.0)
    start = math.radians(10.0)
    step = span / (n - 1) if n > 1 else 0.0
    link_a = max(1, int(outer * 0.3))

    def gap(a):
        radius = outer - a
        return 2.0 * radius * math.sin(step / 2.0) - 2 * a - 1 if n > 1 else float("inf")

    while link_a >= 1 and gap(link_a) < MIN_COMPONENT_GAP_PX:
        link_a -= 1
    if link_a < 1:
        raise ParameterError(f"size_px={spec.size_px} too small for {n} separated links")

    radius = outer - link_a
    link_b = max(1, link_a // 2)
    base, accent = _to_bytes(spec.base_color), _to_bytes(spec.accent_color)
    for k in range(n):
        angle = start + step * k
        cx = int(round(center + radius * math.cos(angle)))
        cy = int(round(center + radius * math.sin(angle)))
        tangent = math.degrees(angle) + 90.0
        color = base if k % 2 == 0 else accent
        cv2.ellipse(canvas, (cx, cy), (link_a, link_b), tangent, 0, 360, color, thickness=-1)
        cv2.ellipse(mask, (cx, cy), (link_a, link_b), tangent, 0, 360, 1, thickness=-1)


def _draw_pendant(canvas, mask, spec: OrnamentSpec, rng) -> None:
    c = (spec.size_px - 1) / 2.0
    outer = spec.size_px / 2.0 - 1.0
    gem_r = max(2, int(outer * 0.35))
    hook_r = max(2, int(outer - 2 * gem_r))
    hook_center = (int(round(c)), int(round(c - gem_r)))
    base, accent = _to_bytes(spec.base_color), _to_bytes(spec.accent_color)
    # hook arc, then a gem hanging from its lowest point
    cv2.ellipse(canvas, hook_center, (hook_r, hook_r), 0, 0, 180, base, thickness=2)
    cv2.ellipse(mask, hook_center, (hook_r, hook_r), 0, 0, 180, 1, thickness=2)
    gem_center = (hook_center[0], hook_center[1] + hook_r + gem_r - 1)
    diamond = np.array([
        (gem_center[0], gem_center[1] - gem_r),
        (gem_center[0] + gem_r, gem_center[1]),
        (gem_center[0], gem_center[1] + gem_r),
        (gem_center[0] - gem_r, gem_center[1]),
    ], dtype=np.int32)
    cv2.fillPoly(canvas, [diamond], accent)
    cv2.fillPoly(mask, [diamond], 1)


def _draw_stud(canvas, mask, spec: OrnamentSpec, rng) -> None:
    c = (spec.size_px - 1) / 2.0
    outer = spec.size_px / 2.0 - 1.0
    points = int(rng.integers(5, 9))
    inner = outer * rng.uniform(0.45, 0.65)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    star = []
    for k in range(2 * points):
        radius = outer if k % 2 == 0 else inner
        angle = phase + math.pi * k / points
        star.append((int(round(c + radius * math.cos(angle))), int(round(c + radius * math.sin(angle)))))
    star = np.array(star, dtype=np.int32)
    base, accent = _to_bytes(spec.base_color), _to_bytes(spec.accent_color)
    cv2.fillPoly(canvas, [star], base)
    cv2.fillPoly(mask, [star], 1)
    cv2.circle(canvas, (int(round(c)), int(round(c))), max(1, int(inner * 0.5)), accent, thickness=-1)


_DRAWERS = {
    OrnamentArchetype.BEADED_RING: _draw_beaded_ring,
    OrnamentArchetype.CHAIN: _draw_chain,
    OrnamentArchetype.PENDANT: _draw_pendant,
    OrnamentArchetype.STUD: _draw_stud,
}


def render_ornament(spec: OrnamentSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Render an ornament sprite on the neutral reference background.

    Returns:
        (image, mask): uint8 (size, size, 3) RGB sprite and uint8 (size, size) silhouette in {0, 1}.
        Both are fully determined by the OrnamentSpec (its seed drives the free shape parameters).
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    canvas = np.empty((spec.size_px, spec.size_px, 3), dtype=np.uint8)
    canvas[:] = REFERENCE_BACKGROUND
    mask = np.zeros((spec.size_px, spec.size_px), dtype=np.uint8)
    _DRAWERS[spec.archetype](canvas, mask, spec, rng)

    if not mask.any():
        raise ParameterError(f"Spec rendered an empty silhouette: {spec.to_dict()}")
    if spec.archetype.has_countable_parts:
        found = count_components(mask)
        if found != spec.component_count:
            raise ParameterError(
                f"{spec.archetype} with size_px={spec.size_px} rendered {found} parts, expected {spec.component_count}"
            )
    return canvas, mask


def warp_sprite(
    sprite: np.ndarray,
    sprite_mask: np.ndarray,
    center: Tuple[float, float],
    rotation: float,
    scale: float,
    frame_shape: Tuple[int, int],
    background=REFERENCE_BACKGROUND,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rotate/scale a sprite about its own center and place that center at `center` in a new frame.
    Nearest-neighbour resampling keeps colors flat and the mask binary.
    """
    height, width = frame_shape
    sprite_center = ((sprite.shape[1] - 1) / 2.0, (sprite.shape[0] - 1) / 2.0)
    matrix = cv2.getRotationMatrix2D(sprite_center, rotation, scale)
    matrix[0, 2] += center[0] - sprite_center[0]
    matrix[1, 2] += center[1] - sprite_center[1]
    image = cv2.warpAffine(
        sprite, matrix, (width, height),
        flags=cv2.INTER_NEAREST, borderMode=cv2.BORDER_CONSTANT, borderValue=tuple(int(v) for v in background),
    )
    mask = cv2.warpAffine(
        sprite_mask, matrix, (width, height),
        flags=cv2.INTER_NEAREST, borderMode=cv2.BORDER_CONSTANT, borderValue=0,
    )
    return image, (mask > 0).astype(np.uint8)
