import numpy as np
import pytest

from enums.InputMaskKind import InputMaskKind
from helpers.crop_paste import crop_region_for
from objects.EvalReport import EvalReport
from objects.errors import InputMaskError
from services.CheckpointService import CheckpointService
from services.DatasetService import TripletDataset
from services.TryonService import TryonService, compose_inside


@pytest.fixture
def service():
    return TryonService(CheckpointService(), device="cpu")


def _model_image():
    return np.random.default_rng(0).integers(0, 256, size=(100, 120, 3), dtype=np.uint8)


def _ornament():
    return np.random.default_rng(1).integers(0, 256, size=(80, 80, 3), dtype=np.uint8)


def test_compose_inside_only_replaces_masked_pixels():
    base = np.zeros((4, 4, 3), dtype=np.uint8)
    generated = np.full((4, 4, 3), 9, dtype=np.uint8)
    mask = np.zeros((4, 4), dtype=np.uint8)
    mask[1:3, 1:3] = 1
    out = compose_inside(generated, base, mask)
    assert out[mask > 0].min() == 9
    assert out[mask == 0].max() == 0


def test_tryon_leaves_everything_outside_the_box_untouched(service, tiny_checkpoint):
    image = _model_image()
    bbox = (40, 30, 24, 24)
    final, mask = service.tryon(image, _ornament(), bbox, tiny_checkpoint, steps=2, seed=3)
    assert final.shape == image.shape and final.dtype == np.uint8

    outside = np.ones(image.shape[:2], dtype=bool)
    outside[30:54, 40:64] = False
    assert np.array_equal(final[outside], image[outside])
    assert mask.shape == image.shape[:2]
    assert mask.min() >= 0.0 and mask.max() <= 1.0


def test_tryon_mask_is_not_clipped_to_the_box(service, tiny_checkpoint):
    image = _model_image()
    bbox = (40, 30, 24, 24)
    _, mask = service.tryon(image, _ornament(), bbox, tiny_checkpoint, steps=2, seed=3)
    window = np.zeros(image.shape[:2], dtype=bool)
    window[crop_region_for(bbox, image.shape[:2]).slices] = True
    box = np.zeros(image.shape[:2], dtype=bool)
    box[30:54, 40:64] = True
    assert (mask[~window] == 0).all()
    assert mask[window & ~box].sum() > 0


def test_tryon_is_deterministic_under_a_fixed_seed(service, tiny_checkpoint):
    first = service.tryon(_model_image(), _ornament(), (40, 30, 24, 24), tiny_checkpoint, steps=2, seed=7)
    second = service.tryon(_model_image(), _ornament(), (40, 30, 24, 24), tiny_checkpoint, steps=2, seed=7)
    assert np.array_equal(first[0], second[0])
    assert np.array_equal(first[1], second[1])


def test_tryon_rejects_a_box_outside_the_image(service, tiny_checkpoint):
    with pytest.raises(InputMaskError):
        service.tryon(_model_image(), _ornament(), (110, 30, 24, 24), tiny_checkpoint, steps=1)


def test_ground_truth_scores_perfectly(service, tiny_dataset):
    report = service.evaluate(tiny_dataset, None, InputMaskKind.BBOX, oracle=True, split=None)
    assert report.n_samples == 12
    assert report.means["mask_iou"] == 1.0
    assert report.means["component_count_accuracy"] == 1.0
    assert 0.0 < report.means["color_identity"] <= 1.0
    assert set(report.by_archetype) == set(tiny_dataset.histogram)


def test_generated_samples_are_scored(service, tiny_dataset, tiny_checkpoint, tmp_path):
    report = service.evaluate(
        tiny_dataset, tiny_checkpoint, InputMaskKind.HULL, steps=2, split=None, limit=3, batch_size=2,
        grids=1, out_dir=tmp_path,
    )
    assert report.n_samples == 3
    assert report.mask_kind == "hull"
    for record in report.samples:
        assert 0.0 <= record["mask_iou"] <= 1.0
        assert 0.0 <= record["color_identity"] <= 1.0
        assert isinstance(record["refinement_monotone"], bool)
    assert len(list((tmp_path / "grids").glob("*.png"))) == 1

    restored = EvalReport.from_dict(report.to_dict())
    assert restored.means == report.means
    flags = [r["refinement_monotone"] for r in report.samples]
    assert report.to_dict()["refinement_convergence"] == pytest.approx(sum(flags) / len(flags))


def test_refinement_convergence_counts_flagged_samples_only():
    records = [
        {"mask_iou": 0.5, "component_count_accuracy": 1.0, "color_identity": 0.5, "refinement_monotone": flag}
        for flag in (True, True, False)
    ]
    records.append({"mask_iou": 0.5, "component_count_accuracy": 1.0, "color_identity": 0.5})
    assert EvalReport(samples=records).refinement_convergence == pytest.approx(2 / 3)
    assert EvalReport(samples=records[3:]).to_dict()["refinement_convergence"] is None


def test_evaluation_is_reproducible(service, tiny_dataset, tiny_checkpoint):
    kwargs = dict(steps=2, split=None, limit=2, seed=4)
    first = service.evaluate(tiny_dataset, tiny_checkpoint, **kwargs)
    second = service.evaluate(tiny_dataset, tiny_checkpoint, **kwargs)
    assert first.to_dict() == second.to_dict()


def test_attention_heatmaps_are_written(service, tiny_dataset, tiny_checkpoint, tmp_path):
    triplet = TripletDataset(tiny_dataset, None).load_triplet(0)
    written = service.attention_maps(triplet, tiny_checkpoint, tmp_path, timestep=10)
    names = {path.name for path in written}
    assert {
        "encoder_highres_attention.png",
        "decoder_highres_transformed.png",
        "aggregated_transformed.png",
        "aggregated_overlay.png",
        "wearing_mask.png",
    } <= names
    assert all(path.is_file() for path in written)


def test_attention_timestep_must_be_in_range(service, tiny_dataset, tiny_checkpoint, tmp_path):
    triplet = TripletDataset(tiny_dataset, None).load_triplet(0)
    with pytest.raises(IndexError):
        service.attention_maps(triplet, tiny_checkpoint, tmp_path, timestep=50)
