import logging
import os
from pathlib import Path
from typing import Optional, Union

import torch
from dateutil import parser as date_parser
from filelock import FileLock

from config.config import LAST_CHECKPOINT_NAME
from networks.tryon_model import OrnamentTryonModel
from objects.Checkpoint import Checkpoint
from objects.errors import CheckpointError

logger = logging.getLogger("CheckpointService")


class CheckpointService:
    """Versioned torch checkpoints written atomically under a per-file lock"""

    def __init__(self, last_name: str = LAST_CHECKPOINT_NAME) -> None:
        self.last_name = last_name

    def save(self, checkpoint: Checkpoint, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        temp_path = f"{path}.tmp"
        with FileLock(f"{path}.lock", timeout=30):
            with open(temp_path, "wb") as file_handle:
                torch.save(checkpoint.to_record(), file_handle)
                file_handle.flush()
                os.fsync(file_handle.fileno())
            os.replace(temp_path, path)
        checkpoint.path = path
        logger.info("saved step %d to %s", checkpoint.step, path)
        return path

    def load(self, path: Union[str, Path]) -> Checkpoint:
        """Accepts a checkpoint file or a run directory (newest checkpoint in it)"""
        path = Path(path)
        if path.is_dir():
            latest = self.latest(path)
            if latest is None:
                raise FileNotFoundError(f"No checkpoint in {path}")
            path = latest
        if not path.is_file():
            raise FileNotFoundError(f"Checkpoint not found: {path}")
        with FileLock(f"{path}.lock", timeout=30):
            try:
                record = torch.load(path, map_location="cpu", weights_only=True)
            except Exception as exc:
                raise CheckpointError(f"Cannot read checkpoint {path}: {exc}") from exc
        if not isinstance(record, dict):
            raise CheckpointError(f"Checkpoint {path} does not hold a record")
        return Checkpoint.from_record(record, path=path)

    def latest(self, run_dir: Union[str, Path]) -> Optional[Path]:
        """Newest checkpoint by its stored creation time; ties go to the higher step"""
        candidates = sorted(Path(run_dir).glob("*.pt"))
        best, best_key = None, None
        for candidate in candidates:
            try:
                record = torch.load(candidate, map_location="cpu", weights_only=True)
                key = (date_parser.isoparse(record["created_at"]), int(record["step"]))
            except Exception as exc:
                logger.warning("skipping unreadable checkpoint %s: %s", candidate, exc)
                continue
            if best_key is None or key > best_key:
                best, best_key = candidate, key
        return best

    def build_model(self, checkpoint: Checkpoint, device: Union[str, torch.device] = "cpu") -> OrnamentTryonModel:
        model = OrnamentTryonModel.from_config(checkpoint.train_config)
        try:
            model.load_state_dict(checkpoint.model_state)
        except RuntimeError as exc:
            raise CheckpointError(f"Checkpoint {checkpoint.path} does not fit its own config: {exc}") from exc
        return model.to(device).eval()

    def load_model(self, path: Union[str, Path], device: Union[str, torch.device] = "cpu") -> OrnamentTryonModel:
        return self.build_model(self.load(path), device)
