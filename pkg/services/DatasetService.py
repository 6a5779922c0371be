import logging
import shutil
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import torch
from filelock import FileLock
from torch.utils.data import Dataset
from tqdm import tqdm

from config.config import MANIFEST_NAME, MANIFEST_SCHEMA_VERSION, NEUTRAL_FILL
from enums.InputMaskKind import InputMaskKind
from helpers.image_io import to_float
from helpers.json_io import read_json, write_json
from helpers.input_masks import derive_input_mask
from helpers.triplet_synth import generate_triplet, sample_rng
from objects.DatasetManifest import DatasetManifest
from objects.SynthConfig import SynthConfig
from objects.TryonTriplet import TryonTriplet
from objects.errors import DatasetError, ParameterError

logger = logging.getLogger("DatasetService")


def remask_triplet(triplet: TryonTriplet, kind: Union[InputMaskKind, str], jitter: float, seed: int) -> TryonTriplet:
    """Same sample with its input mask (and masked model image) rebuilt for another mask kind"""
    rng = sample_rng(seed, int(triplet.meta.get("index", 0)))
    input_mask = derive_input_mask(triplet.wearing_mask, kind, jitter, rng)
    masked = triplet.target_image.copy()
    masked[input_mask.astype(bool)] = NEUTRAL_FILL
    return TryonTriplet(
        reference_image=triplet.reference_image,
        reference_mask=triplet.reference_mask,
        masked_model_image=masked,
        target_image=triplet.target_image,
        wearing_mask=triplet.wearing_mask,
        input_mask=input_mask,
        meta={**triplet.meta, "input_mask_kind": InputMaskKind(kind).value},
    )


class TripletDataset(Dataset):
    """Float tensors in [0, 1], channel-first, for one manifest split"""

    def __init__(self, manifest: DatasetManifest, split: Optional[str] = "train") -> None:
        if manifest.root is None:
            raise DatasetError("Manifest has no root directory; load it through DatasetService")
        self.manifest = manifest
        self.records = manifest.split(split)
        if not self.records:
            raise DatasetError(f"Split {split!r} of {manifest.root} is empty")

    def __len__(self) -> int:
        return len(self.records)

    def load_triplet(self, idx: int) -> TryonTriplet:
        record = self.records[idx]
        return TryonTriplet.load(self.manifest.root, record["files"], record["meta"])

    def __getitem__(self, idx: int) -> dict:
        triplet = self.load_triplet(idx)

        def image(array):
            return torch.from_numpy(to_float(array)).permute(2, 0, 1).contiguous()

        def mask(array):
            return torch.from_numpy(array.astype(np.float32))[None]

        return {
            "reference_image": image(triplet.reference_image),
            "reference_mask": mask(triplet.reference_mask),
            "masked_model_image": image(triplet.masked_model_image),
            "target_image": image(triplet.target_image),
            "wearing_mask": mask(triplet.wearing_mask),
            "input_mask": mask(triplet.input_mask),
            "index": int(triplet.meta.get("index", idx)),
        }


class DatasetService:

    def __init__(self, manifest_name: str = MANIFEST_NAME) -> None:
        self.manifest_name = manifest_name

    def manifest_path(self, out_dir: Union[str, Path]) -> Path:
        return Path(out_dir) / self.manifest_name

    def build_dataset(self, config: SynthConfig, out_dir: Union[str, Path]) -> DatasetManifest:
        """
        Generate config.n triplets into out_dir/samples and write the manifest.

        Samples are independent given (master_seed, index), so the thread pool
        and the serial loop produce identical files. Only this call writes the manifest.
        On any failure every sample directory created by this call is removed.
        """
        if config.n < 1:
            raise ParameterError(f"n must be >= 1, got {config.n}")
        out_dir = Path(out_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise DatasetError(f"Cannot create dataset directory {out_dir}: {exc}") from exc

        created: List[Path] = []

        def work(index: int) -> dict:
            triplet = generate_triplet(index, config)
            rel_dir = Path("samples") / f"{index:06d}"
            sample_dir = out_dir / rel_dir
            existed = sample_dir.exists()
            files = triplet.save(sample_dir)
            if not existed:
                created.append(sample_dir)
            return {
                "index": index,
                "archetype": triplet.meta["archetype"],
                "split": triplet.meta["split"],
                "files": {name: (rel_dir / file_name).as_posix() for name, file_name in files.items()},
                "meta": triplet.meta,
            }

        logger.info("generating %d triplets at %dpx into %s", config.n, config.resolution, out_dir)
        try:
            if config.workers > 1:
                with ThreadPoolExecutor(max_workers=config.workers) as pool:
                    samples = list(tqdm(pool.map(work, range(config.n)), total=config.n, desc="gen-data"))
            else:
                samples = [work(index) for index in tqdm(range(config.n), desc="gen-data")]

            histogram = Counter(s["archetype"] for s in samples)
            manifest = DatasetManifest(
                version=MANIFEST_SCHEMA_VERSION,
                resolution=config.resolution,
                samples=samples,
                histogram={a: histogram.get(a, 0) for a in config.archetypes},
                config=config.to_dict(),
                root=out_dir,
            )
            manifest.validate()
            self._save_manifest(out_dir, manifest)
        except Exception as exc:
            for sample_dir in created:
                shutil.rmtree(sample_dir, ignore_errors=True)
            if isinstance(exc, DatasetError):
                raise
            raise DatasetError(f"Dataset generation failed: {exc}") from exc

        logger.info("histogram %s", dict(manifest.histogram))
        return manifest

    def load_manifest(self, path: Union[str, Path]) -> DatasetManifest:
        """Accepts the dataset directory or the manifest file itself"""
        path = Path(path)
        if path.is_dir():
            path = path / self.manifest_name
        if not path.is_file():
            raise FileNotFoundError(f"Manifest not found: {path}")
        with FileLock(f"{path}.lock", timeout=10):
            data = read_json(path)
        manifest = DatasetManifest.from_dict(data, root=path.parent)
        manifest.validate()
        return manifest

    def _save_manifest(self, out_dir: Path, manifest: DatasetManifest) -> None:
        path = self.manifest_path(out_dir)
        with FileLock(f"{path}.lock", timeout=10):
            write_json(path, manifest.to_dict())
