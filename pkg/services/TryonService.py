import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import cv2
import numpy as np
import torch
from tqdm import tqdm

from config.config import DEFAULT_INPUT_JITTER, DEFAULT_MASTER_SEED, NEUTRAL_FILL
from enums.AttentionTap import AttentionTap
from enums.InputMaskKind import InputMaskKind
from helpers.crop_paste import crop_mask, paste_back, paste_mask_back, prepare_crop
from helpers.diffusion import make_schedule, q_sample
from helpers.heatmaps import heatmap, make_grid, overlay
from helpers.image_io import to_float, to_uint8, write_rgb
from helpers.mask_attention import downflat_mask, mask_and_marginalize, transform_reference_mask
from helpers.metrics import binarize, color_identity, component_count_accuracy, mask_iou, segment_ornament, soft_iou
from helpers.sampler import sample
from networks.tryon_model import OrnamentTryonModel
from objects.Conditioning import Conditioning
from objects.DatasetManifest import DatasetManifest
from objects.EvalReport import EvalReport, config_hash
from objects.SampleResult import SampleResult
from objects.TrainConfig import TrainConfig
from objects.TryonTriplet import TryonTriplet
from objects.errors import DatasetError, InputMaskError
from services.CheckpointService import CheckpointService
from services.DatasetService import TripletDataset, remask_triplet

logger = logging.getLogger("TryonService")


def _image_tensor(images: List[np.ndarray]) -> torch.Tensor:
    return torch.from_numpy(np.stack([to_float(i) for i in images])).permute(0, 3, 1, 2).contiguous()


def _mask_tensor(masks: List[np.ndarray]) -> torch.Tensor:
    return torch.from_numpy(np.stack([m.astype(np.float32) for m in masks]))[:, None]


def compose_inside(generated: np.ndarray, masked_model_image: np.ndarray, input_mask: np.ndarray) -> np.ndarray:
    """Generated pixels inside the input mask, the given image everywhere else"""
    inside = np.asarray(input_mask) > 0
    out = masked_model_image.copy()
    out[inside] = generated[inside]
    return out


def refinement_monotone(trajectory: List[torch.Tensor], gt: np.ndarray, index: int, last: int = 10) -> bool:
    """Whether IoU(current mask, gt) never drops over the final steps of one sample's trajectory"""
    ious = [mask_iou(mask[index, 0].cpu().numpy(), gt) for mask in trajectory[-last:]]
    return all(b >= a for a, b in zip(ious, ious[1:]))


class TryonService:

    def __init__(self, checkpoint_service: CheckpointService, device: Optional[str] = None) -> None:
        self.checkpoint_service = checkpoint_service
        self.device = torch.device(device or ("cuda" if torch.cuda.is_available() else "cpu"))

    def load(self, checkpoint_path: Union[str, Path]) -> Tuple[OrnamentTryonModel, dict]:
        checkpoint = self.checkpoint_service.load(checkpoint_path)
        return self.checkpoint_service.build_model(checkpoint, self.device), checkpoint.config

    def generate(
        self,
        model: OrnamentTryonModel,
        config: dict,
        conditioning: Conditioning,
        steps: Optional[int] = None,
        seed: int = DEFAULT_MASTER_SEED,
        progress_bar: bool = False,
    ) -> SampleResult:
        train_config = TrainConfig.from_dict(config)
        schedule = make_schedule(
            train_config.train_timesteps, train_config.beta_min, train_config.beta_max, train_config.schedule
        )
        return sample(
            model,
            conditioning,
            schedule,
            steps or train_config.sampling_steps,
            seed,
            train_config.alpha,
            progress_bar,
        )

    def tryon(
        self,
        model_image: np.ndarray,
        ornament_image: np.ndarray,
        bbox: Tuple[int, int, int, int],
        checkpoint_path: Union[str, Path],
        steps: Optional[int] = None,
        seed: int = DEFAULT_MASTER_SEED,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Crop around the box, generate inside the box, paste back.
        Pixels outside the box are returned untouched. The mask is the prediction in model-image
        coordinates, not clipped to the box; it is zero outside the crop window.
        """
        model, config = self.load(checkpoint_path)
        resolution = model.resolution
        crop, region = prepare_crop(model_image, bbox, resolution)

        x, y, w, h = (int(v) for v in bbox)
        box_full = np.zeros(model_image.shape[:2], dtype=np.uint8)
        box_full[y : y + h, x : x + w] = 1
        box_crop = crop_mask(box_full, region, resolution)
        if not box_crop.any():
            raise InputMaskError(f"Bounding box {bbox} vanishes at {resolution}px")
        masked_crop = crop.copy()
        masked_crop[box_crop > 0] = NEUTRAL_FILL

        interpolation = cv2.INTER_AREA if ornament_image.shape[0] > resolution else cv2.INTER_LINEAR
        ornament = cv2.resize(ornament_image, (resolution, resolution), interpolation=interpolation)

        conditioning = Conditioning(_image_tensor([ornament]), _image_tensor([masked_crop]), _mask_tensor([box_crop]))
        result = self.generate(model, config, conditioning, steps, seed, progress_bar=True)

        generated = to_uint8(result.image[0].permute(1, 2, 0).cpu().numpy())
        composed = compose_inside(generated, crop, box_crop)
        pasted = paste_back(composed, model_image, region)
        final = compose_inside(pasted, model_image, box_full)
        predicted_mask = paste_mask_back(result.predicted_mask[0, 0].cpu().numpy(), region)
        return final, predicted_mask

    def _triplets(self, manifest: DatasetManifest, split: Optional[str], mask_kind: InputMaskKind, limit: Optional[int]):
        try:
            dataset = TripletDataset(manifest, split)
        except DatasetError:
            if split is None:
                raise
            logger.warning("split %r is empty, evaluating every sample", split)
            dataset = TripletDataset(manifest, None)
        jitter = float(manifest.config.get("jitter", DEFAULT_INPUT_JITTER))
        seed = int(manifest.config.get("master_seed", DEFAULT_MASTER_SEED))
        count = len(dataset) if limit is None else min(limit, len(dataset))
        for idx in range(count):
            triplet = dataset.load_triplet(idx)
            if triplet.meta.get("input_mask_kind") != mask_kind.value:
                triplet = remask_triplet(triplet, mask_kind, jitter, seed)
            yield triplet

    def evaluate(
        self,
        manifest: DatasetManifest,
        checkpoint_path: Optional[Union[str, Path]],
        mask_kind: Union[InputMaskKind, str] = InputMaskKind.BBOX,
        steps: Optional[int] = None,
        seed: int = DEFAULT_MASTER_SEED,
        oracle: bool = False,
        split: Optional[str] = "val",
        limit: Optional[int] = None,
        batch_size: int = 16,
        grids: int = 0,
        out_dir: Optional[Union[str, Path]] = None,
    ) -> EvalReport:
        """
        Per-sample mask IoU, component-count accuracy and colour identity.
        oracle scores the ground-truth images and wearing masks instead of generations.
        """
        mask_kind = InputMaskKind(mask_kind)
        model, config = (None, {}) if oracle else self.load(checkpoint_path)
        report = EvalReport(
            config_hash=config_hash({**config, "mask_kind": mask_kind.value, "steps": steps, "seed": seed, "oracle": oracle}),
            mask_kind=mask_kind.value,
            oracle=oracle,
            checkpoint=None if checkpoint_path is None else str(checkpoint_path),
        )
        grid_dir = Path(out_dir) / "grids" if out_dir is not None and grids else None

        triplets = list(self._triplets(manifest, split, mask_kind, limit))
        if not triplets:
            raise DatasetError(f"No samples to evaluate in {manifest.root}")
        for start in tqdm(range(0, len(triplets), batch_size), desc="evaluating"):
            chunk = triplets[start : start + batch_size]
            if oracle:
                outputs = [t.target_image for t in chunk]
                masks = [t.wearing_mask.astype(np.float32) for t in chunk]
                trajectory = None
            else:
                conditioning = Conditioning(
                    _image_tensor([t.reference_image for t in chunk]),
                    _image_tensor([t.masked_model_image for t in chunk]),
                    _mask_tensor([t.input_mask for t in chunk]),
                )
                result = self.generate(model, config, conditioning, steps, seed + start)
                images = result.image.permute(0, 2, 3, 1).cpu().numpy()
                outputs = [compose_inside(to_uint8(img), t.masked_model_image, t.input_mask) for img, t in zip(images, chunk)]
                masks = list(result.predicted_mask[:, 0].cpu().numpy())
                trajectory = result.trajectory if model.mask_head is not None else None

            for offset, (triplet, output, mask) in enumerate(zip(chunk, outputs, masks)):
                record = self._score(triplet, output, mask)
                if trajectory is not None:
                    record["refinement_monotone"] = refinement_monotone(trajectory, triplet.wearing_mask, offset)
                report.samples.append(record)
                if grid_dir is not None and start + offset < grids:
                    panels = [triplet.reference_image, triplet.masked_model_image, output, triplet.target_image, mask]
                    grid_dir.mkdir(parents=True, exist_ok=True)
                    write_rgb(grid_dir / f"{record['index']:06d}.png", make_grid(panels))

        logger.info(
            "evaluated %d samples (%s): %s, refinement convergence %s",
            report.n_samples, mask_kind.value, report.means, report.refinement_convergence,
        )
        return report

    def _score(self, triplet: TryonTriplet, output: np.ndarray, predicted_mask: np.ndarray) -> dict:
        expected = int(triplet.meta.get("visible_component_count", triplet.meta.get("spec", {}).get("component_count", 1)))
        region = segment_ornament(output, binarize(predicted_mask))
        return {
            "index": int(triplet.meta.get("index", -1)),
            "archetype": triplet.meta.get("archetype", "unknown"),
            "mask_iou": mask_iou(predicted_mask, triplet.wearing_mask),
            "soft_iou": soft_iou(predicted_mask, triplet.wearing_mask),
            "component_count_accuracy": component_count_accuracy(output, predicted_mask, expected),
            "expected_components": expected,
            "color_identity": color_identity(output, region, triplet.reference_image, triplet.reference_mask),
        }

    @torch.no_grad()
    def attention_maps(
        self,
        triplet: TryonTriplet,
        checkpoint_path: Union[str, Path],
        out_dir: Union[str, Path],
        timestep: Optional[int] = None,
        seed: int = DEFAULT_MASTER_SEED,
    ) -> List[Path]:
        """
        Heatmaps of every recorded attention map, the reduced reference mask fed to it,
        its transformed mask and the tap average, for one sample at one timestep.
        """
        model, config = self.load(checkpoint_path)
        train_config = TrainConfig.from_dict(config)
        schedule = make_schedule(
            train_config.train_timesteps, train_config.beta_min, train_config.beta_max, train_config.schedule
        )
        t_value = schedule.T // 2 if timestep is None else int(timestep)
        if not 0 <= t_value < schedule.T:
            raise IndexError(f"timestep out of range [0, {schedule.T}): {t_value}")

        ornament = _image_tensor([triplet.reference_image]).to(self.device)
        masked = _image_tensor([triplet.masked_model_image]).to(self.device)
        box = _mask_tensor([triplet.input_mask]).to(self.device)
        reference_mask = _mask_tensor([triplet.reference_mask]).to(self.device)
        target = _image_tensor([triplet.target_image]).to(self.device)
        t = torch.full((1,), t_value, dtype=torch.long, device=self.device)
        eps = torch.randn(target.shape, generator=torch.Generator().manual_seed(seed)).to(self.device)

        features = model.encode_reference(ornament, masked, box, t)
        tokens = model.ornament_embed(ornament)
        z_t = q_sample(target * 2.0 - 1.0, t, eps, schedule)
        _, maps = model.denoiser(z_t, model.time_embed(t), masked, box, tokens, features, True)

        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        size = triplet.target_image.shape[0]
        written: List[Path] = []

        def save(name: str, image: np.ndarray) -> None:
            path = out_dir / f"{name}.png"
            write_rgb(path, image)
            written.append(path)

        for tap in AttentionTap:
            if tap not in maps.maps:
                continue
            attention = maps.maps[tap]
            reduced = downflat_mask(reference_mask[:, 0], int(attention.shape[-1]))
            transformed = mask_and_marginalize(attention, reduced).map[0].cpu().numpy()
            save(f"{tap.id}_attention", heatmap(attention[0].cpu().numpy(), size=4 * size))
            save(f"{tap.id}_reference_mask", heatmap(reduced.values[0].reshape(reduced.side, reduced.side).cpu().numpy(), size=size, normalize=False))
            save(f"{tap.id}_transformed", heatmap(transformed, size=size, normalize=False))

        aggregated = transform_reference_mask(maps, reference_mask).map[0, 0].cpu().numpy()
        save("aggregated_transformed", heatmap(aggregated, size=size, normalize=False))
        save("aggregated_overlay", overlay(triplet.target_image, aggregated))
        save("wearing_mask", heatmap(triplet.wearing_mask.astype(np.float32), normalize=False))
        logger.info("wrote %d attention heatmaps to %s (t=%d)", len(written), out_dir, t_value)
        return written
