import numpy as np
import pytest

from enums.OrnamentArchetype import OrnamentArchetype
from helpers.metrics import mask_iou
from helpers.ornament_render import render_ornament, warp_sprite
from helpers.wear_compose import compose_worn, render_body
from objects.BodyScene import BodyScene
from objects.OrnamentSpec import OrnamentSpec, WearPose
from objects.errors import CompositionError, ParameterError

FRAME = 64


@pytest.fixture
def ornament():
    spec = OrnamentSpec(OrnamentArchetype.STUD, 1, (0.9, 0.1, 0.1), (0.1, 0.1, 0.9), size_px=25, seed=5)
    return render_ornament(spec)


@pytest.fixture
def body():
    image = np.full((FRAME, FRAME, 3), 200, dtype=np.uint8)
    body_mask = np.zeros((FRAME, FRAME), dtype=np.uint8)
    body_mask[16:48, :] = 1
    return BodyScene(image=image, body_mask=body_mask, axis_angle=0.0, axis_center=(31.5, 31.5))


def test_no_occlusion_keeps_every_warped_pixel(ornament, body):
    pose = WearPose(center=(32.0, 32.0), rotation=33.0, scale=1.2, occlusion_fraction=0.0)
    _, warped = warp_sprite(*ornament, pose.center, pose.rotation, pose.scale, body.shape)
    _, wearing = compose_worn(ornament, body, pose)
    assert abs(int(wearing.sum()) - int(warped.sum())) <= 0.01 * warped.sum()


def test_identity_pose_reproduces_translated_silhouette(ornament, body):
    sprite, sprite_mask = ornament
    _, wearing = compose_worn(ornament, body, WearPose(center=(32.0, 32.0), rotation=0.0, scale=1.0))
    expected = np.zeros((FRAME, FRAME), dtype=np.uint8)
    expected[20:45, 20:45] = sprite_mask
    assert mask_iou(wearing, expected) > 0.98


@pytest.mark.parametrize("fraction", [0.1, 0.25, 0.4])
def test_occlusion_hides_the_requested_fraction(ornament, body, fraction):
    pose = WearPose(center=(32.0, 32.0), rotation=10.0, scale=1.0, occlusion_fraction=fraction)
    _, warped = warp_sprite(*ornament, pose.center, pose.rotation, pose.scale, body.shape)
    _, wearing = compose_worn(ornament, body, pose)
    assert wearing.sum() / warped.sum() == pytest.approx(1.0 - fraction, abs=0.05)


def test_hidden_pixels_show_the_body(ornament, body):
    pose = WearPose(center=(32.0, 32.0), rotation=0.0, scale=1.0, occlusion_fraction=0.4)
    target, wearing = compose_worn(ornament, body, pose)
    outside = wearing == 0
    assert np.array_equal(target[outside], body.image[outside])


def test_center_off_the_body_is_rejected(ornament, body):
    with pytest.raises(CompositionError):
        compose_worn(ornament, body, WearPose(center=(32.0, 4.0), rotation=0.0))


def test_pose_validates_scale_and_occlusion():
    with pytest.raises(ParameterError):
        WearPose(center=(0, 0), rotation=0.0, scale=2.5)
    with pytest.raises(ParameterError):
        WearPose(center=(0, 0), rotation=0.0, occlusion_fraction=0.6)


def test_pose_margin_is_circular():
    a = WearPose(center=(0, 0), rotation=355.0)
    b = WearPose(center=(0, 0), rotation=5.0)
    assert not a.differs_from(b, rotation_margin=15.0, scale_margin=0.2)
    assert a.differs_from(WearPose(center=(0, 0), rotation=5.0, scale=1.3), 15.0, 0.2)


def test_rendered_body_is_deterministic():
    first = render_body(64, np.random.default_rng(4))
    second = render_body(64, np.random.default_rng(4))
    assert np.array_equal(first.image, second.image)
    assert first.body_mask.any()
    assert first.contains(first.axis_center)
