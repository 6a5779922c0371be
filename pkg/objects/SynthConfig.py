from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

from config.config import (
    DEFAULT_DATASET_SIZE,
    DEFAULT_INPUT_JITTER,
    DEFAULT_MASTER_SEED,
    DEFAULT_RESOLUTION,
    DEFAULT_VAL_FRACTION,
)
from enums.InputMaskKind import InputMaskKind
from helpers.json_io import read_json, write_json
from enums.OrnamentArchetype import OrnamentArchetype
from objects.errors import ParameterError


@dataclass
class SynthConfig:
    n: int = DEFAULT_DATASET_SIZE
    resolution: int = DEFAULT_RESOLUTION
    master_seed: int = DEFAULT_MASTER_SEED
    mask_kind: str = InputMaskKind.BBOX.value
    jitter: float = DEFAULT_INPUT_JITTER
    size_fraction: Tuple[float, float] = (0.38, 0.55) # ornament diameter / resolution
    wear_scale: Tuple[float, float] = (0.8, 1.25)
    occlusion: Tuple[float, float] = (0.0, 0.35)
    val_fraction: float = DEFAULT_VAL_FRACTION
    archetypes: List[str] = field(default_factory=lambda: [a.value for a in OrnamentArchetype])
    workers: int = 1

    def __post_init__(self) -> None:
        self.mask_kind = InputMaskKind(self.mask_kind).value
        self.archetypes = [OrnamentArchetype(a).value for a in self.archetypes]
        self.size_fraction = tuple(self.size_fraction)
        self.wear_scale = tuple(self.wear_scale)
        self.occlusion = tuple(self.occlusion)
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if self.resolution < 16:
            raise ParameterError(f"resolution must be >= 16, got {self.resolution}")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ParameterError(f"val_fraction must lie in [0, 1), got {self.val_fraction}")
        if not self.archetypes:
            raise ParameterError("At least one archetype is required")
        if not (0.5 <= self.wear_scale[0] <= self.wear_scale[1] <= 2.0):
            raise ParameterError(f"wear_scale must lie inside [0.5, 2.0], got {self.wear_scale}")
        if not (0.0 <= self.occlusion[0] <= self.occlusion[1] <= 0.5):
            raise ParameterError(f"occlusion must lie inside [0, 0.5], got {self.occlusion}")

    @property
    def input_mask_kind(self) -> InputMaskKind:
        return InputMaskKind(self.mask_kind)

    def to_dict(self) -> dict:
        data = asdict(self)
        for key in ("size_fraction", "wear_scale", "occlusion"):
            data[key] = list(data[key])
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SynthConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "SynthConfig":
        return cls.from_dict(read_json(path))

    def save(self, path: Union[str, Path]) -> None:
        write_json(path, self.to_dict())
