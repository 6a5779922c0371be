import numpy as np
import pytest

from enums.OrnamentArchetype import OrnamentArchetype
from helpers.ornament_render import count_components, render_ornament, warp_sprite
from objects.OrnamentSpec import OrnamentSpec
from objects.errors import ParameterError


def _spec(archetype, count=1, size=40, seed=7):
    return OrnamentSpec(
        archetype=archetype,
        component_count=count,
        base_color=(0.9, 0.2, 0.1),
        accent_color=(0.1, 0.3, 0.9),
        size_px=size,
        seed=seed,
    )


def test_beaded_ring_has_one_component_per_bead():
    _, mask = render_ornament(_spec(OrnamentArchetype.BEADED_RING, count=8))
    assert count_components(mask) == 8


@pytest.mark.parametrize("count", [3, 4, 5, 6])
def test_chain_has_one_component_per_link(count):
    _, mask = render_ornament(_spec(OrnamentArchetype.CHAIN, count=count))
    assert count_components(mask) == count


def test_stud_is_a_single_component():
    _, mask = render_ornament(_spec(OrnamentArchetype.STUD))
    assert count_components(mask) == 1


@pytest.mark.parametrize("archetype", list(OrnamentArchetype))
def test_mask_is_binary_and_nonempty(archetype):
    count = 5 if archetype.has_countable_parts else 1
    image, mask = render_ornament(_spec(archetype, count=count))
    assert image.shape == (40, 40, 3) and image.dtype == np.uint8
    assert set(np.unique(mask)) == {0, 1}


def test_rendering_is_deterministic_given_seed():
    spec = _spec(OrnamentArchetype.STUD, seed=11)
    first = render_ornament(spec)
    second = render_ornament(spec)
    assert np.array_equal(first[0], second[0])
    assert np.array_equal(first[1], second[1])


def test_invalid_component_count_is_rejected():
    with pytest.raises(ParameterError):
        _spec(OrnamentArchetype.BEADED_RING, count=0)
    with pytest.raises(ParameterError):
        _spec(OrnamentArchetype.STUD, count=3)


def test_too_many_beads_for_the_size_is_rejected():
    with pytest.raises(ParameterError):
        render_ornament(_spec(OrnamentArchetype.BEADED_RING, count=40, size=12))


def test_colors_outside_unit_range_are_rejected():
    with pytest.raises(ParameterError):
        OrnamentSpec(OrnamentArchetype.STUD, 1, (1.5, 0.0, 0.0), (0.0, 0.0, 0.0), 20)


def test_identity_warp_is_a_translation():
    image, mask = render_ornament(_spec(OrnamentArchetype.STUD, size=21))
    _, warped = warp_sprite(image, mask, center=(30.0, 30.0), rotation=0.0, scale=1.0, frame_shape=(64, 64))
    expected = np.zeros((64, 64), dtype=np.uint8)
    expected[20:41, 20:41] = mask
    assert np.array_equal(warped, expected)
