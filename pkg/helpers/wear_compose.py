import colorsys
import math
from typing import Tuple

import cv2
import numpy as np

from helpers.ornament_render import warp_sprite
from objects.BodyScene import BodyScene
from objects.OrnamentSpec import WearPose
from objects.errors import CompositionError


def _hsv_bytes(h: float, s: float, v: float) -> Tuple[int, int, int]:
    return tuple(int(round(c * 255)) for c in colorsys.hsv_to_rgb(h % 1.0, s, v))


def render_body(resolution: int, rng: np.random.Generator) -> BodyScene:
    """
    Pale cluttered background with a textured capsule ("wrist") crossing the frame.
    Skin and background stay desaturated so saturated ornament colors remain separable.
    """
    image = np.empty((resolution, resolution, 3), dtype=np.uint8)
    image[:] = _hsv_bytes(rng.uniform(0.0, 1.0), rng.uniform(0.0, 0.12), rng.uniform(0.82, 0.95))

    for _ in range(int(rng.integers(3, 7))):
        color = _hsv_bytes(rng.uniform(0.0, 1.0), rng.uniform(0.0, 0.15), rng.uniform(0.7, 0.9))
        x0, y0 = (int(v) for v in rng.integers(0, resolution, size=2))
        extent = int(rng.integers(resolution // 10, resolution // 4))
        if rng.random() < 0.5:
            cv2.rectangle(image, (x0, y0), (x0 + extent, y0 + extent // 2), color, thickness=-1)
        else:
            cv2.circle(image, (x0, y0), extent // 2, color, thickness=-1)

    angle = rng.uniform(-30.0, 30.0)
    center = (
        resolution / 2.0 + rng.uniform(-0.06, 0.06) * resolution,
        resolution / 2.0 + rng.uniform(-0.06, 0.06) * resolution,
    )
    thickness = int(resolution * rng.uniform(0.32, 0.45))
    reach = resolution * 1.5
    dx, dy = math.cos(math.radians(angle)) * reach, math.sin(math.radians(angle)) * reach
    p0 = (int(round(center[0] - dx)), int(round(center[1] - dy)))
    p1 = (int(round(center[0] + dx)), int(round(center[1] + dy)))

    body_mask = np.zeros((resolution, resolution), dtype=np.uint8)
    cv2.line(body_mask, p0, p1, 1, thickness=thickness)
    skin = np.array(_hsv_bytes(rng.uniform(0.03, 0.1), rng.uniform(0.2, 0.4), rng.uniform(0.55, 0.85)), dtype=np.int16)

    # faint stripes across the body give it some texture
    ys, xs = np.mgrid[0:resolution, 0:resolution]
    along = xs * math.cos(math.radians(angle)) + ys * math.sin(math.radians(angle))
    shade = (6.0 * np.sin(along * rng.uniform(0.3, 0.6))).astype(np.int16)
    textured = np.clip(skin[None, None, :] + shade[..., None], 0, 255).astype(np.uint8)
    image[body_mask > 0] = textured[body_mask > 0]

    return BodyScene(image=image, body_mask=body_mask, axis_angle=angle, axis_center=center)


def compose_worn(
    ornament: Tuple[np.ndarray, np.ndarray],
    body: BodyScene,
    pose: WearPose,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Place the ornament on the body at `pose`.

    The part of the ornament on the far side of the body axis is hidden behind the body,
    exactly round(occlusion_fraction * N) of its N warped pixels. The wearing mask holds
    the visible pixels only.
    """
    sprite, sprite_mask = ornament
    if not body.contains(pose.center):
        raise CompositionError(f"Pose center {pose.center} is not on the body")

    warped, warped_mask = warp_sprite(sprite, sprite_mask, pose.center, pose.rotation, pose.scale, body.shape)
    total = int(warped_mask.sum())
    if total == 0:
        raise CompositionError("Warped ornament falls completely outside the frame")

    visible = warped_mask.astype(bool)
    hidden_count = int(round(pose.occlusion_fraction * total))
    if hidden_count > 0:
        ys, xs = np.nonzero(visible)
        # normal of the body axis pointing up the image is the far side
        normal = (math.sin(math.radians(body.axis_angle)), -math.cos(math.radians(body.axis_angle)))
        depth = (xs - pose.center[0]) * normal[0] + (ys - pose.center[1]) * normal[1]
        order = np.lexsort((xs, ys, -depth))
        hidden = order[:hidden_count]
        visible[ys[hidden], xs[hidden]] = False

    target = body.image.copy()
    target[visible] = warped[visible]
    return target, visible.astype(np.uint8)
