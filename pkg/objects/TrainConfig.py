from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple, Union

from config.config import (
    DEFAULT_ATTENTION_HEADS,
    DEFAULT_BATCH_SIZE,
    DEFAULT_BETA_MAX,
    DEFAULT_BETA_MIN,
    DEFAULT_EPOCHS,
    DEFAULT_GRAD_CLIP,
    DEFAULT_LAMBDA1,
    DEFAULT_LAMBDA2,
    DEFAULT_LAMBDA_FLOOR,
    DEFAULT_LEARNING_RATE,
    DEFAULT_MASTER_SEED,
    DEFAULT_MODEL_WIDTHS,
    DEFAULT_ORNAMENT_TOKENS,
    DEFAULT_RESOLUTION,
    DEFAULT_SAMPLING_STEPS,
    DEFAULT_TRAIN_TIMESTEPS,
)
from enums.AblationVariant import AblationVariant
from enums.ScheduleShape import ScheduleShape
from helpers.json_io import read_json, write_json
from objects.MaskState import AlphaSchedule
from objects.errors import ParameterError


@dataclass(frozen=True)
class LossWeights:
    """lambda1 weighs the mask-prediction loss, lambda2 the mask-guided attention loss"""

    lambda1_0: float = DEFAULT_LAMBDA1
    lambda2_0: float = DEFAULT_LAMBDA2
    floor_fraction: float = DEFAULT_LAMBDA_FLOOR

    def __post_init__(self) -> None:
        if self.lambda1_0 <= 0 or self.lambda2_0 <= 0:
            raise ParameterError(f"Initial loss weights must be positive, got ({self.lambda1_0}, {self.lambda2_0})")
        if not 0.0 <= self.floor_fraction <= 1.0:
            raise ParameterError(f"floor_fraction must lie in [0, 1], got {self.floor_fraction}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "LossWeights":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


@dataclass
class TrainConfig:
    epochs: int = DEFAULT_EPOCHS
    batch_size: int = DEFAULT_BATCH_SIZE
    learning_rate: float = DEFAULT_LEARNING_RATE
    grad_clip: float = DEFAULT_GRAD_CLIP
    seed: int = DEFAULT_MASTER_SEED
    resolution: int = DEFAULT_RESOLUTION
    mask_refinement: bool = True
    mask_guided_attention: bool = True
    alpha: AlphaSchedule = field(default_factory=AlphaSchedule)
    loss_weights: LossWeights = field(default_factory=LossWeights)
    train_timesteps: int = DEFAULT_TRAIN_TIMESTEPS
    beta_min: float = DEFAULT_BETA_MIN
    beta_max: float = DEFAULT_BETA_MAX
    schedule_shape: str = ScheduleShape.LINEAR.value
    sampling_steps: int = DEFAULT_SAMPLING_STEPS
    model_widths: Tuple[int, int, int] = DEFAULT_MODEL_WIDTHS
    attention_heads: int = DEFAULT_ATTENTION_HEADS
    ornament_tokens: int = DEFAULT_ORNAMENT_TOKENS
    workers: int = 0
    dataset: Optional[str] = None
    checkpoint_dir: Optional[str] = None
    variant: Optional[str] = None

    def __post_init__(self) -> None:
        if isinstance(self.alpha, dict):
            self.alpha = AlphaSchedule.from_dict(self.alpha)
        if isinstance(self.loss_weights, dict):
            self.loss_weights = LossWeights.from_dict(self.loss_weights)
        self.model_widths = tuple(int(w) for w in self.model_widths)
        self.schedule_shape = ScheduleShape(self.schedule_shape).value
        if self.variant is not None:
            self.variant = AblationVariant(self.variant).value

        for name in ("epochs", "batch_size", "train_timesteps", "sampling_steps", "attention_heads", "ornament_tokens"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("learning_rate", "grad_clip"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if self.workers < 0:
            raise ParameterError(f"workers must be >= 0, got {self.workers}")
        if len(self.model_widths) != 3 or min(self.model_widths) < 1:
            raise ParameterError(f"model_widths needs three positive widths, got {self.model_widths}")
        if any(w % self.attention_heads for w in self.model_widths[1:]):
            raise ParameterError(f"Attention widths {self.model_widths[1:]} must divide into {self.attention_heads} heads")
        if self.resolution % 8 or self.resolution < 16:
            raise ParameterError(f"resolution must be a multiple of 8 and >= 16, got {self.resolution}")
        if self.sampling_steps > self.train_timesteps:
            raise ParameterError(f"sampling_steps {self.sampling_steps} exceeds train_timesteps {self.train_timesteps}")

    @property
    def schedule(self) -> ScheduleShape:
        return ScheduleShape(self.schedule_shape)

    def for_variant(self, variant: Union[AblationVariant, str]) -> "TrainConfig":
        """Copy with the ablation flags of a comparison-table row"""
        variant = AblationVariant(variant)
        return replace(
            self,
            mask_refinement=variant.mask_refinement,
            mask_guided_attention=variant.mask_guided_attention,
            variant=variant.value,
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["alpha"] = self.alpha.to_dict()
        data["loss_weights"] = self.loss_weights.to_dict()
        data["model_widths"] = list(self.model_widths)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "TrainConfig":
        return cls.from_dict(read_json(path))

    def save(self, path: Union[str, Path]) -> None:
        write_json(path, self.to_dict())
