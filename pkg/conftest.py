import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from objects.SynthConfig import SynthConfig  # noqa: E402
from objects.TrainConfig import TrainConfig  # noqa: E402
from services.DatasetService import DatasetService  # noqa: E402

TINY_WIDTHS = (8, 16, 32)


@pytest.fixture(scope="session")
def tiny_dataset(tmp_path_factory):
    """Twelve 64px triplets with a validation split"""
    out_dir = tmp_path_factory.mktemp("tiny_dataset")
    config = SynthConfig(n=12, resolution=64, master_seed=3, val_fraction=0.25)
    return DatasetService().build_dataset(config, out_dir)


@pytest.fixture
def tiny_config():
    return TrainConfig(
        epochs=1,
        batch_size=4,
        resolution=64,
        model_widths=TINY_WIDTHS,
        attention_heads=2,
        ornament_tokens=4,
        train_timesteps=50,
        sampling_steps=3,
    )


@pytest.fixture
def tiny_checkpoint(tmp_path, tiny_config):
    """Untrained tiny model saved the way training saves it"""
    import torch

    from networks.tryon_model import OrnamentTryonModel
    from objects.Checkpoint import Checkpoint
    from services.CheckpointService import CheckpointService

    torch.manual_seed(0)
    model = OrnamentTryonModel.from_config(tiny_config)
    checkpoint = Checkpoint(model_state=model.state_dict(), optimizer_state=None, step=0, config=tiny_config.to_dict())
    return CheckpointService().save(checkpoint, tmp_path / "ckpt" / "last.pt")
