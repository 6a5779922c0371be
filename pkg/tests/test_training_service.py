import dataclasses

import pytest
import torch

from helpers.diffusion import make_schedule
from networks.tryon_model import OrnamentTryonModel
from objects.errors import ParameterError, TrainingError
from services.CheckpointService import CheckpointService
from services.DatasetService import TripletDataset
from services.RunLogService import RunLogService
from services.TrainingService import TrainingService, seed_everything


@pytest.fixture
def service():
    return TrainingService(CheckpointService(), device="cpu")


def _batch(manifest, size=2):
    dataset = TripletDataset(manifest, None)
    items = [dataset[i] for i in range(size)]
    return {k: torch.stack([item[k] for item in items]) if k != "index" else [item[k] for item in items] for k in items[0]}


def test_one_epoch_smoke(service, tiny_dataset, tiny_config, tmp_path):
    checkpoint = service.fit(tiny_config, tiny_dataset, tmp_path / "run")
    assert checkpoint.path == tmp_path / "run" / "epoch_001.pt"
    assert (tmp_path / "run" / "last.pt").is_file()
    assert (tmp_path / "run" / "train_config.json").is_file()

    steps = RunLogService(tmp_path / "run").records("step")
    assert len(steps) == checkpoint.step > 0
    for record in steps:
        assert all(torch.isfinite(torch.tensor(record[k])) for k in ("l1", "l2", "l3", "total"))

    restored = CheckpointService().load(checkpoint.path)
    assert restored.step == checkpoint.step
    assert restored.train_config.to_dict() == tiny_config.to_dict()


def test_same_seed_gives_identical_losses(service, tiny_dataset, tiny_config, tmp_path):
    service.fit(tiny_config, tiny_dataset, tmp_path / "a")
    service.fit(tiny_config, tiny_dataset, tmp_path / "b")
    first = [r["total"] for r in RunLogService(tmp_path / "a").records("step")]
    second = [r["total"] for r in RunLogService(tmp_path / "b").records("step")]
    assert first == second


def test_refit_into_the_same_directory_starts_a_fresh_log(service, tiny_dataset, tiny_config, tmp_path):
    service.fit(tiny_config, tiny_dataset, tmp_path)
    first = RunLogService(tmp_path).records("step")
    checkpoint = service.fit(tiny_config, tiny_dataset, tmp_path)
    second = RunLogService(tmp_path).records("step")
    assert len(second) == len(first) == checkpoint.step
    assert [r["total"] for r in second] == [r["total"] for r in first]
    assert len(RunLogService(tmp_path).records("epoch")) == tiny_config.epochs


@pytest.mark.filterwarnings("error:Converting a tensor with requires_grad")
def test_logged_total_is_the_weighted_sum_of_its_terms(service, tiny_dataset, tiny_config, tmp_path):
    service.fit(tiny_config, tiny_dataset, tmp_path)
    steps = RunLogService(tmp_path).records("step")
    assert steps
    for record in steps:
        expected = record["l1"] + record["lambda1"] * record["l2"] + record["lambda2"] * record["l3"]
        assert record["total"] == pytest.approx(expected, rel=1e-5, abs=1e-6)


def test_switched_off_modules_leave_their_terms_out(service, tiny_dataset, tiny_config):
    config = tiny_config.for_variant("baseline")
    seed_everything(0)
    model = OrnamentTryonModel.from_config(config)
    schedule = make_schedule(config.train_timesteps, config.beta_min, config.beta_max)
    terms = service.train_step(model, _batch(tiny_dataset), schedule, 0, 10, config, torch.Generator().manual_seed(0))
    assert terms["l2"] is None and terms["l3"] is None
    assert torch.equal(terms["total"], terms["l1"])


def test_full_model_produces_every_term(service, tiny_dataset, tiny_config):
    seed_everything(0)
    model = OrnamentTryonModel.from_config(tiny_config)
    schedule = make_schedule(tiny_config.train_timesteps, tiny_config.beta_min, tiny_config.beta_max)
    terms = service.train_step(model, _batch(tiny_dataset), schedule, 0, 10, tiny_config, torch.Generator().manual_seed(0))
    assert all(terms[k] is not None for k in ("l1", "l2", "l3"))
    terms["total"].backward()
    assert model.mask_head.proj.weight.grad is not None


def test_validation_reports_mask_iou(service, tiny_dataset, tiny_config):
    model = OrnamentTryonModel.from_config(tiny_config)
    loader = torch.utils.data.DataLoader(TripletDataset(tiny_dataset, None), batch_size=4)
    metrics = service.validate(model, loader, make_schedule(50, 1e-4, 0.02))
    assert 0.0 <= metrics["val_mask_iou"] <= 1.0
    assert 0.0 <= metrics["val_soft_iou"] <= 1.0


def test_resolution_mismatch_is_rejected(service, tiny_dataset, tiny_config, tmp_path):
    with pytest.raises(ParameterError):
        service.fit(dataclasses.replace(tiny_config, resolution=32), tiny_dataset, tmp_path)


def test_divergence_reports_the_last_good_checkpoint(service, tiny_dataset, tiny_config, tmp_path, monkeypatch):
    run_dir = tmp_path / "run"
    real_step = service.train_step

    def failing_after_first_epoch(*args, **kwargs):
        if (run_dir / "epoch_001.pt").exists():
            raise TrainingError("Loss term l1 is not finite (nan)", term="l1")
        return real_step(*args, **kwargs)

    monkeypatch.setattr(service, "train_step", failing_after_first_epoch)
    with pytest.raises(TrainingError) as info:
        service.fit(dataclasses.replace(tiny_config, epochs=2), tiny_dataset, run_dir)
    assert info.value.term == "l1"
    assert info.value.last_checkpoint.endswith("epoch_001.pt")
