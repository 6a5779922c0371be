import hashlib
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

METRIC_NAMES = ("mask_iou", "component_count_accuracy", "color_identity")


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode("utf-8")).hexdigest()[:16]


@dataclass
class EvalReport:
    """Per-sample metric records plus their means, overall and per archetype"""

    samples: List[dict] = field(default_factory=list)
    config_hash: str = ""
    mask_kind: str = "bbox"
    oracle: bool = False
    checkpoint: Optional[str] = None

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    def _means(self, records: List[dict]) -> Dict[str, float]:
        if not records:
            return {name: 0.0 for name in METRIC_NAMES}
        return {name: float(np.mean([r[name] for r in records])) for name in METRIC_NAMES}

    @property
    def means(self) -> Dict[str, float]:
        return self._means(self.samples)

    @property
    def refinement_convergence(self) -> Optional[float]:
        """Fraction of samples whose mask IoU never dropped over the last sampling steps"""
        flags = [bool(r["refinement_monotone"]) for r in self.samples if "refinement_monotone" in r]
        return float(np.mean(flags)) if flags else None

    @property
    def by_archetype(self) -> Dict[str, Dict[str, float]]:
        groups: Dict[str, List[dict]] = {}
        for record in self.samples:
            groups.setdefault(record.get("archetype", "unknown"), []).append(record)
        return {name: {**self._means(group), "n_samples": len(group)} for name, group in sorted(groups.items())}

    def to_dict(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "config_hash": self.config_hash,
            "mask_kind": self.mask_kind,
            "oracle": self.oracle,
            "checkpoint": self.checkpoint,
            "means": self.means,
            "refinement_convergence": self.refinement_convergence,
            "by_archetype": self.by_archetype,
            "samples": self.samples,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        return cls(
            samples=list(data.get("samples", [])),
            config_hash=data.get("config_hash", ""),
            mask_kind=data.get("mask_kind", "bbox"),
            oracle=bool(data.get("oracle", False)),
            checkpoint=data.get("checkpoint"),
        )
