import numpy as np
import pytest

from helpers.metrics import (
    binarize,
    color_identity,
    component_count_accuracy,
    local_background,
    mask_iou,
    segment_ornament,
    soft_iou,
)
from objects.errors import ShapeMismatchError


def _scene():
    """Grey frame with two red blobs inside a 20 x 20 region"""
    image = np.full((32, 32, 3), 180, dtype=np.uint8)
    image[8:12, 8:12] = (220, 30, 30)
    image[18:22, 18:22] = (220, 30, 30)
    region = np.zeros((32, 32), dtype=np.uint8)
    region[5:25, 5:25] = 1
    return image, region


def test_mask_iou_cases():
    gt = np.zeros((8, 8), dtype=np.uint8)
    gt[:4] = 1
    assert mask_iou(gt.astype(float), gt) == 1.0
    assert mask_iou(1.0 - gt, gt) == 0.0
    half = gt.copy()
    half[:2] = 0
    assert mask_iou(half, gt) == pytest.approx(0.5)
    assert mask_iou(np.zeros((8, 8)), np.zeros((8, 8))) == 1.0


def test_mask_iou_rejects_mismatched_shapes():
    with pytest.raises(ShapeMismatchError):
        mask_iou(np.zeros((4, 4)), np.zeros((4, 5)))


def test_soft_iou_weights_by_probability():
    gt = np.array([[1, 1], [0, 0]])
    pred = np.array([[0.5, 1.0], [0.0, 0.0]])
    assert soft_iou(pred, gt) == pytest.approx(1.5 / 2.0)


def test_binarize_handles_byte_masks():
    assert binarize(np.array([0, 100, 200])).tolist() == [False, False, True]
    assert binarize(np.array([0.2, 0.5, 0.9])).tolist() == [False, True, True]


def test_background_is_taken_just_outside_the_region():
    image, region = _scene()
    assert local_background(image, region).tolist() == [180, 180, 180]


def test_segmentation_keeps_colours_far_from_the_background():
    image, region = _scene()
    segmented = segment_ornament(image, region)
    assert segmented.sum() == 32
    assert segmented[9, 9] and not segmented[15, 15]


def test_component_count_accuracy():
    image, region = _scene()
    assert component_count_accuracy(image, region, 2) == 1.0
    assert component_count_accuracy(image, region, 3) == 0.0
    assert component_count_accuracy(image, np.zeros_like(region), 0) == 1.0


def test_color_identity_of_an_image_with_itself_is_one():
    image, region = _scene()
    assert color_identity(image, region, image, region) == pytest.approx(1.0)


def test_color_identity_drops_for_other_colours():
    image, region = _scene()
    other = image.copy()
    other[8:12, 8:12] = (30, 30, 220)
    other[18:22, 18:22] = (30, 30, 220)
    mask = segment_ornament(image, region)
    assert color_identity(other, mask, image, mask) < 0.5


def test_empty_region_scores_zero_identity():
    image, region = _scene()
    assert color_identity(image, np.zeros_like(region), image, region) == 0.0
