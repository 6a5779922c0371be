from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from config.config import MANIFEST_SCHEMA_VERSION
from objects.errors import DatasetError


@dataclass
class DatasetManifest:

    """

    json stored as such:

    {
        "version" : "1",
        "resolution" : 64,
        "config" : {SynthConfig fields},
        "histogram" : {"beaded_ring" : 500, ...},
        "samples" : [
            {"index" : 0, "archetype" : "beaded_ring", "split" : "train",
             "files" : {"reference_image" : "samples/000000/reference.png", ...},
             "meta" : {...}},
        ]
    }

    """

    version: str
    resolution: int
    samples: List[dict]
    histogram: Dict[str, int]
    config: dict = field(default_factory=dict)
    root: Optional[Path] = None # directory the manifest was loaded from, not serialised

    def split(self, name: Optional[str]) -> List[dict]:
        if name is None:
            return list(self.samples)
        return [s for s in self.samples if s.get("split") == name]

    def validate(self) -> None:
        if self.version != MANIFEST_SCHEMA_VERSION:
            raise DatasetError(f"Unsupported manifest version {self.version!r}")
        counts = Counter(s["archetype"] for s in self.samples)
        if dict(counts) != {k: v for k, v in self.histogram.items() if v}:
            raise DatasetError(f"Manifest histogram {self.histogram} does not match samples {dict(counts)}")
        if self.root is not None:
            for sample in self.samples:
                for rel_path in sample["files"].values():
                    if not (self.root / rel_path).is_file():
                        raise DatasetError(f"Manifest references a missing file: {self.root / rel_path}")

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "resolution": self.resolution,
            "config": self.config,
            "histogram": dict(sorted(self.histogram.items())),
            "samples": self.samples,
        }

    @classmethod
    def from_dict(cls, data: dict, root: Optional[Union[str, Path]] = None) -> "DatasetManifest":
        return cls(
            version=str(data.get("version", "")),
            resolution=int(data["resolution"]),
            samples=list(data.get("samples", [])),
            histogram=dict(data.get("histogram", {})),
            config=dict(data.get("config", {})),
            root=Path(root) if root is not None else None,
        )
