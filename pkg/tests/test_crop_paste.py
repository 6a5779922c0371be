import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers.crop_paste import crop_mask, crop_region_for, paste_back, paste_mask_back, prepare_crop
from objects.CropRegion import CropRegion
from objects.errors import InputMaskError, ShapeMismatchError


def _image(height, width, seed=0):
    return np.random.default_rng(seed).integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def test_centered_box_gets_one_and_a_half_times_its_side():
    region = crop_region_for((40, 40, 20, 20), (100, 100))
    assert region.side == 30
    assert (region.x, region.y) == (35, 35)


def test_corner_box_is_clamped_and_stays_square():
    region = crop_region_for((0, 0, 20, 20), (100, 100))
    assert (region.x, region.y, region.side) == (0, 0, 30)
    region = crop_region_for((85, 90, 15, 10), (100, 100))
    assert region.side == 22
    assert region.fits((100, 100))


def test_window_never_exceeds_the_image():
    region = crop_region_for((0, 0, 60, 40), (50, 80))
    assert region.side == 50
    assert region.fits((50, 80))


@pytest.mark.parametrize("bbox", [(0, 0, 0, 5), (-1, 0, 5, 5), (96, 0, 10, 10)])
def test_invalid_boxes_are_rejected(bbox):
    with pytest.raises(InputMaskError):
        crop_region_for(bbox, (100, 100))


def test_full_frame_region_round_trips_exactly():
    image = _image(64, 64)
    crop, region = prepare_crop(image, (0, 0, 64, 64), 64)
    assert region.side == 64
    assert np.array_equal(crop, image)
    assert np.array_equal(paste_back(crop, image, region), image)


def test_unmodified_smooth_crop_round_trips_closely():
    ys, xs = np.mgrid[0:120, 0:160]
    image = np.stack([xs, ys, (xs + ys) // 2], axis=-1).astype(np.uint8)
    crop, region = prepare_crop(image, (60, 40, 30, 30), 64)
    final = paste_back(crop, image, region)
    inside = final[region.slices].astype(int) - image[region.slices].astype(int)
    assert np.abs(inside).max() <= 2


@settings(max_examples=50, deadline=None)
@given(
    st.integers(min_value=24, max_value=96),
    st.integers(min_value=24, max_value=96),
    st.data(),
)
def test_pixels_outside_the_region_are_untouched(height, width, data):
    w = data.draw(st.integers(min_value=1, max_value=width))
    h = data.draw(st.integers(min_value=1, max_value=height))
    x = data.draw(st.integers(min_value=0, max_value=width - w))
    y = data.draw(st.integers(min_value=0, max_value=height - h))
    original = _image(height, width, seed=height * width)
    crop, region = prepare_crop(original, (x, y, w, h), 32)
    final = paste_back(255 - crop, original, region)

    outside = np.ones((height, width), dtype=bool)
    outside[region.slices] = False
    assert np.array_equal(final[outside], original[outside])


def test_paste_back_checks_the_target_image():
    region = CropRegion(x=10, y=10, side=30, image_size=(50, 50))
    with pytest.raises(ShapeMismatchError):
        paste_back(np.zeros((32, 32, 3), np.uint8), np.zeros((60, 60, 3), np.uint8), region)
    with pytest.raises(ShapeMismatchError):
        paste_back(np.zeros((32, 16, 3), np.uint8), np.zeros((50, 50, 3), np.uint8), region)


def test_masks_follow_the_crop():
    mask = np.zeros((100, 100), dtype=np.uint8)
    mask[45:55, 45:55] = 1
    region = crop_region_for((40, 40, 20, 20), (100, 100))
    cropped = crop_mask(mask, region, 60)
    assert cropped.shape == (60, 60)
    assert set(np.unique(cropped)) == {0, 1}

    full = paste_mask_back(cropped.astype(np.float32), region)
    assert full.shape == (100, 100)
    outside = np.ones((100, 100), dtype=bool)
    outside[region.slices] = False
    assert (full[outside] == 0).all()
    assert full[50, 50] == pytest.approx(1.0)
