import colorsys
import logging

import numpy as np

from config.config import (
    MAX_SAMPLE_ATTEMPTS,
    MIN_COMPONENT_AREA_PX,
    MIN_POSE_ROTATION_MARGIN,
    MIN_POSE_SCALE_MARGIN,
    NEUTRAL_FILL,
)
from enums.OrnamentArchetype import OrnamentArchetype
from helpers.input_masks import derive_input_mask
from helpers.ornament_render import count_components, render_ornament, warp_sprite
from helpers.wear_compose import compose_worn, render_body
from objects.OrnamentSpec import OrnamentSpec, WearPose
from objects.SynthConfig import SynthConfig
from objects.TryonTriplet import TryonTriplet
from objects.errors import CompositionError, DatasetError, ParameterError

logger = logging.getLogger("TripletSynth")

COMPONENT_RANGES = {
    OrnamentArchetype.BEADED_RING: (5, 10),
    OrnamentArchetype.CHAIN: (3, 6),
    OrnamentArchetype.PENDANT: (1, 1),
    OrnamentArchetype.STUD: (1, 1),
}


def sample_rng(master_seed: int, index: int) -> np.random.Generator:
    """Per-sample stream; depends only on (master_seed, index)"""
    return np.random.default_rng([int(master_seed), int(index)])


def archetype_for_index(index: int, config: SynthConfig) -> OrnamentArchetype:
    return OrnamentArchetype(config.archetypes[index % len(config.archetypes)])


def split_for_index(index: int, config: SynthConfig) -> str:
    # separate stream so the split does not shift the sample content
    draw = np.random.default_rng([int(config.master_seed), int(index), 1]).random()
    return "val" if draw < config.val_fraction else "train"


def _saturated_color(rng: np.random.Generator, hue: float) -> tuple:
    return colorsys.hsv_to_rgb(hue % 1.0, rng.uniform(0.65, 1.0), rng.uniform(0.6, 1.0))


def sample_spec(archetype: OrnamentArchetype, config: SynthConfig, rng: np.random.Generator) -> OrnamentSpec:
    low, high = COMPONENT_RANGES[archetype]
    hue = rng.uniform(0.0, 1.0)
    return OrnamentSpec(
        archetype=archetype,
        component_count=int(rng.integers(low, high + 1)),
        base_color=_saturated_color(rng, hue),
        accent_color=_saturated_color(rng, hue + rng.uniform(0.25, 0.75)),
        size_px=int(round(config.resolution * rng.uniform(*config.size_fraction))),
        seed=int(rng.integers(0, 2**31 - 1)),
    )


def _sample_poses(spec: OrnamentSpec, body, config: SynthConfig, rng: np.random.Generator):
    scale = rng.uniform(*config.wear_scale)
    along = rng.uniform(-0.15, 0.15) * config.resolution
    direction = np.array([np.cos(np.radians(body.axis_angle)), np.sin(np.radians(body.axis_angle))])
    center = np.array(body.axis_center) + along * direction
    wear = WearPose(
        center=(float(center[0]), float(center[1])),
        rotation=rng.uniform(0.0, 360.0),
        scale=scale,
        occlusion_fraction=rng.uniform(*config.occlusion),
    )
    # offset in [margin, 360 - margin] keeps the circular rotation gap above the margin
    offset = rng.uniform(MIN_POSE_ROTATION_MARGIN, 360.0 - MIN_POSE_ROTATION_MARGIN)
    reference = WearPose(
        center=((config.resolution - 1) / 2.0, (config.resolution - 1) / 2.0),
        rotation=(wear.rotation + offset) % 360.0,
        scale=1.0,
    )
    if not wear.differs_from(reference, MIN_POSE_ROTATION_MARGIN, MIN_POSE_SCALE_MARGIN):
        raise CompositionError("Reference and wearing poses are too close")
    return wear, reference


def generate_triplet(index: int, config: SynthConfig) -> TryonTriplet:
    """
    Build sample `index` of a dataset. Retries draw from the same per-sample stream,
    so the result is a pure function of (config, index).
    """
    rng = sample_rng(config.master_seed, index)
    archetype = archetype_for_index(index, config)
    size = (config.resolution, config.resolution)

    last_error = None
    for attempt in range(MAX_SAMPLE_ATTEMPTS):
        try:
            spec = sample_spec(archetype, config, rng)
            sprite, sprite_mask = render_ornament(spec)
            body = render_body(config.resolution, rng)
            wear, reference = _sample_poses(spec, body, config, rng)

            reference_image, reference_mask = warp_sprite(
                sprite, sprite_mask, reference.center, reference.rotation, reference.scale, size
            )
            if archetype.has_countable_parts and count_components(reference_mask) != spec.component_count:
                raise CompositionError("Reference warp merged or split parts")

            target, wearing_mask = compose_worn((sprite, sprite_mask), body, wear)
            input_mask = derive_input_mask(wearing_mask, config.input_mask_kind, config.jitter, rng)

            masked = target.copy()
            masked[input_mask.astype(bool)] = NEUTRAL_FILL

            triplet = TryonTriplet(
                reference_image=reference_image,
                reference_mask=reference_mask,
                masked_model_image=masked,
                target_image=target,
                wearing_mask=wearing_mask,
                input_mask=input_mask,
                meta={
                    "index": int(index),
                    "archetype": archetype.value,
                    "category": archetype.category,
                    "split": split_for_index(index, config),
                    "attempt": attempt,
                    "spec": spec.to_dict(),
                    "wear_pose": wear.to_dict(),
                    "reference_pose": reference.to_dict(),
                    "body_axis_angle": float(body.axis_angle),
                    "visible_component_count": count_components(wearing_mask, MIN_COMPONENT_AREA_PX),
                    "input_mask_kind": config.mask_kind,
                },
            )
            triplet.check_invariants()
            return triplet
        except (CompositionError, ParameterError) as exc:
            last_error = exc
            logger.debug("sample %d attempt %d rejected: %s", index, attempt, exc)

    raise DatasetError(f"Sample {index} failed after {MAX_SAMPLE_ATTEMPTS} attempts: {last_error}")
