import cv2
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enums.InputMaskKind import InputMaskKind
from helpers.input_masks import derive_input_mask, mask_bbox
from objects.errors import InputMaskError

SIZE = 48

blobs = st.lists(
    st.tuples(
        st.integers(min_value=4, max_value=SIZE - 5),
        st.integers(min_value=4, max_value=SIZE - 5),
        st.integers(min_value=1, max_value=6),
    ),
    min_size=1,
    max_size=5,
)


def _mask_from(circles):
    mask = np.zeros((SIZE, SIZE), dtype=np.uint8)
    for x, y, r in circles:
        cv2.circle(mask, (x, y), r, 1, thickness=-1)
    return mask


def test_gt_without_jitter_is_identity():
    mask = _mask_from([(20, 20, 5), (30, 12, 3)])
    assert np.array_equal(derive_input_mask(mask, InputMaskKind.GT), mask)


def test_obb_of_axis_aligned_rectangle_equals_bbox():
    mask = np.zeros((SIZE, SIZE), dtype=np.uint8)
    mask[8:20, 5:15] = 1
    obb = derive_input_mask(mask, InputMaskKind.OBB)
    bbox = derive_input_mask(mask, InputMaskKind.BBOX)
    assert np.array_equal(obb, bbox)
    assert np.array_equal(bbox, mask)


@settings(max_examples=60, deadline=None)
@given(blobs)
def test_kinds_are_nested(circles):
    mask = _mask_from(circles)
    regions = [derive_input_mask(mask, kind) for kind in ("gt", "hull", "obb", "bbox")]
    for inner, outer in zip(regions, regions[1:]):
        assert not (inner.astype(bool) & ~outer.astype(bool)).any()
    areas = [int(r.sum()) for r in regions]
    assert areas == sorted(areas)


@settings(max_examples=40, deadline=None)
@given(blobs, st.floats(min_value=0.0, max_value=0.5), st.sampled_from(list(InputMaskKind)))
def test_jittered_region_contains_the_wearing_mask(circles, jitter, kind):
    mask = _mask_from(circles)
    region = derive_input_mask(mask, kind, jitter, np.random.default_rng(0))
    assert not (mask.astype(bool) & ~region.astype(bool)).any()


def test_full_jitter_expands_by_the_margin():
    mask = np.zeros((SIZE, SIZE), dtype=np.uint8)
    mask[20:30, 20:30] = 1
    region = derive_input_mask(mask, InputMaskKind.BBOX, jitter=0.2)
    # margin = round(0.2 * 10) = 2 pixels on every side
    assert mask_bbox(region) == (18, 18, 14, 14)


def test_empty_mask_is_rejected():
    with pytest.raises(InputMaskError):
        derive_input_mask(np.zeros((SIZE, SIZE), dtype=np.uint8), InputMaskKind.BBOX)


def test_negative_jitter_is_rejected():
    mask = _mask_from([(10, 10, 2)])
    with pytest.raises(InputMaskError):
        derive_input_mask(mask, InputMaskKind.HULL, jitter=-0.1)


def test_mask_bbox():
    mask = np.zeros((10, 12), dtype=np.uint8)
    mask[2:5, 3:9] = 1
    assert mask_bbox(mask) == (3, 2, 6, 3)
