from dataclasses import dataclass
from typing import Tuple, Union

from enums.OrnamentArchetype import OrnamentArchetype
from objects.errors import ParameterError

Color = Tuple[float, float, float]


def _as_color(value, name: str) -> Color:
    color = tuple(float(c) for c in value)
    if len(color) != 3 or any(c < 0.0 or c > 1.0 for c in color):
        raise ParameterError(f"{name} must be an RGB triple in [0, 1], got {value}")
    return color


@dataclass
class OrnamentSpec:
    archetype: OrnamentArchetype
    component_count: int
    base_color: Color
    accent_color: Color
    size_px: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.archetype, OrnamentArchetype):
            self.archetype = OrnamentArchetype(self.archetype)
        self.base_color = _as_color(self.base_color, "base_color")
        self.accent_color = _as_color(self.accent_color, "accent_color")
        self.validate()

    def validate(self) -> None:
        if int(self.component_count) != self.component_count or self.component_count < 1:
            raise ParameterError(f"component_count must be an integer >= 1, got {self.component_count}")
        if not self.archetype.has_countable_parts and self.component_count != 1:
            raise ParameterError(f"{self.archetype} renders a single part, got component_count={self.component_count}")
        if int(self.size_px) != self.size_px or self.size_px < 8:
            raise ParameterError(f"size_px must be an integer >= 8, got {self.size_px}")

    def to_dict(self) -> dict:
        return {
            "archetype": self.archetype.value,
            "component_count": int(self.component_count),
            "base_color": list(self.base_color),
            "accent_color": list(self.accent_color),
            "size_px": int(self.size_px),
            "seed": int(self.seed),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OrnamentSpec":
        return cls(
            archetype=OrnamentArchetype(data["archetype"]),
            component_count=int(data["component_count"]),
            base_color=tuple(data["base_color"]),
            accent_color=tuple(data["accent_color"]),
            size_px=int(data["size_px"]),
            seed=int(data.get("seed", 0)),
        )


@dataclass
class WearPose:
    center: Tuple[float, float]
    rotation: float
    scale: float = 1.0
    occlusion_fraction: float = 0.0

    def __post_init__(self) -> None:
        self.center = (float(self.center[0]), float(self.center[1]))
        if not 0.5 <= self.scale <= 2.0:
            raise ParameterError(f"scale must lie in [0.5, 2.0], got {self.scale}")
        if not 0.0 <= self.occlusion_fraction <= 0.5:
            raise ParameterError(f"occlusion_fraction must lie in [0, 0.5], got {self.occlusion_fraction}")

    def differs_from(self, other: "WearPose", rotation_margin: float, scale_margin: float) -> bool:
        """True when the two poses are far enough apart that copy-paste cannot match them"""
        rotation_gap = abs((self.rotation - other.rotation + 180.0) % 360.0 - 180.0)
        scale_gap = abs(self.scale - other.scale) / min(self.scale, other.scale)
        return rotation_gap >= rotation_margin or scale_gap >= scale_margin

    def to_dict(self) -> dict:
        return {
            "center": list(self.center),
            "rotation": float(self.rotation),
            "scale": float(self.scale),
            "occlusion_fraction": float(self.occlusion_fraction),
        }

    @classmethod
    def from_dict(cls, data: Union[dict, "WearPose"]) -> "WearPose":
        if isinstance(data, WearPose):
            return data
        return cls(
            center=tuple(data["center"]),
            rotation=float(data["rotation"]),
            scale=float(data.get("scale", 1.0)),
            occlusion_fraction=float(data.get("occlusion_fraction", 0.0)),
        )
