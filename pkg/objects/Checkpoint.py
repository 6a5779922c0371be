from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from config.config import CHECKPOINT_FORMAT_VERSION
from objects.TrainConfig import TrainConfig
from objects.errors import CheckpointError


@dataclass
class Checkpoint:
    model_state: Dict[str, Any]
    optimizer_state: Optional[Dict[str, Any]]
    step: int
    config: Dict[str, Any]
    epoch: int = 0
    format_version: int = CHECKPOINT_FORMAT_VERSION
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    path: Optional[Path] = None

    @property
    def train_config(self) -> TrainConfig:
        return TrainConfig.from_dict(self.config)

    def to_record(self) -> Dict[str, Any]:
        return {
            "format_version": self.format_version,
            "model_state": self.model_state,
            "optimizer_state": self.optimizer_state,
            "step": self.step,
            "epoch": self.epoch,
            "config": self.config,
            "created_at": self.created_at,
        }

    @classmethod
    def from_record(cls, record: Dict[str, Any], path: Optional[Path] = None) -> "Checkpoint":
        version = record.get("format_version")
        if version != CHECKPOINT_FORMAT_VERSION:
            raise CheckpointError(f"Unsupported checkpoint format {version!r} in {path}, expected {CHECKPOINT_FORMAT_VERSION}")
        missing = [k for k in ("model_state", "step", "config") if k not in record]
        if missing:
            raise CheckpointError(f"Checkpoint {path} is missing {missing}")
        return cls(
            model_state=record["model_state"],
            optimizer_state=record.get("optimizer_state"),
            step=int(record["step"]),
            config=record["config"],
            epoch=int(record.get("epoch", 0)),
            format_version=version,
            created_at=record.get("created_at", ""),
            path=path,
        )
