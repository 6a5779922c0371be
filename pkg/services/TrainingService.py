import logging
import random
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import torch
from torch.utils.data import DataLoader
from tqdm import tqdm

from config.config import LAST_CHECKPOINT_NAME
from helpers.diffusion import denoise_loss, make_schedule, q_sample
from helpers.mask_attention import attn_mask_loss, transform_reference_mask
from helpers.mask_refine import alpha_at, blend_mask, mask_loss, predict_mask
from helpers.metrics import mask_iou, soft_iou
from helpers.objective import lambda_at, total_loss
from networks.tryon_model import OrnamentTryonModel
from objects.Checkpoint import Checkpoint
from objects.DatasetManifest import DatasetManifest
from objects.NoiseSchedule import NoiseSchedule
from objects.TrainConfig import TrainConfig
from objects.errors import DatasetError, ParameterError, TrainingError
from services.CheckpointService import CheckpointService
from services.DatasetService import TripletDataset
from services.RunLogService import RunLogService

logger = logging.getLogger("TrainingService")


def seed_everything(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True, warn_only=True)


def _worker_init(worker_id: int) -> None:
    seed = torch.initial_seed() % 2**32
    np.random.seed(seed)
    random.seed(seed)


class TrainingService:

    def __init__(self, checkpoint_service: CheckpointService, device: Optional[str] = None) -> None:
        self.checkpoint_service = checkpoint_service
        self.device = torch.device(device or ("cuda" if torch.cuda.is_available() else "cpu"))

    def train_step(
        self,
        model: OrnamentTryonModel,
        batch: Dict[str, torch.Tensor],
        schedule: NoiseSchedule,
        step: int,
        total_steps: int,
        config: TrainConfig,
        generator: torch.Generator,
    ) -> Dict[str, Optional[torch.Tensor]]:
        """
        Loss terms of one batch. With mask refinement on, the reference branch runs twice:
        gated by the box, then by the blend of that first prediction with the box.
        Both predictions are supervised; the second pass conditions the denoiser.
        """
        batch = {k: v.to(self.device) if isinstance(v, torch.Tensor) else v for k, v in batch.items()}
        ornament, masked = batch["reference_image"], batch["masked_model_image"]
        box, gt = batch["input_mask"], batch["wearing_mask"]
        size = masked.shape[0]
        resolution = masked.shape[-1]

        t = torch.randint(0, schedule.T, (size,), generator=generator).to(self.device)
        eps = torch.randn(masked.shape, generator=generator).to(self.device)
        z_t = q_sample(batch["target_image"] * 2.0 - 1.0, t, eps, schedule)
        tokens = model.ornament_embed(ornament)

        l2 = None
        if model.mask_head is not None:
            first = model.encode_reference(ornament, masked, box, t)
            f_o, f_m = first.halves(0)
            pred_first = predict_mask(model.mask_head, f_m, f_o, box, resolution)
            condition_mask = blend_mask(pred_first.detach(), box, alpha_at(step / total_steps, config.alpha))
            features = model.encode_reference(ornament, masked, condition_mask, t)
            f_o, f_m = features.halves(0)
            pred_second = predict_mask(model.mask_head, f_m, f_o, condition_mask, resolution)
            l2 = 0.5 * (mask_loss(pred_first, gt) + mask_loss(pred_second, gt))
        else:
            condition_mask = box
            features = model.encode_reference(ornament, masked, box, t)

        eps_pred, maps = model.denoise(z_t, t, masked, condition_mask, tokens, features, record=True)
        l1 = denoise_loss(eps_pred, eps)
        l3 = None
        if model.mask_guided_attention:
            l3 = attn_mask_loss(transform_reference_mask(maps, batch["reference_mask"]).map, gt)
        total = total_loss(l1, l2, l3, step, total_steps, config.loss_weights)
        return {"l1": l1, "l2": l2, "l3": l3, "total": total}

    @torch.no_grad()
    def validate(self, model: OrnamentTryonModel, loader: DataLoader, schedule: NoiseSchedule) -> Dict[str, float]:
        """Single box-gated reference pass at the middle timestep; mean IoU of the predicted mask"""
        if model.mask_head is None:
            return {}
        model.eval()
        hard, soft = [], []
        for batch in loader:
            ornament = batch["reference_image"].to(self.device)
            masked = batch["masked_model_image"].to(self.device)
            box = batch["input_mask"].to(self.device)
            t = torch.full((masked.shape[0],), schedule.T // 2, dtype=torch.long, device=self.device)
            f_o, f_m = model.encode_reference(ornament, masked, box, t).halves(0)
            pred = predict_mask(model.mask_head, f_m, f_o, box, masked.shape[-1]).cpu().numpy()[:, 0]
            gt = batch["wearing_mask"].numpy()[:, 0]
            for p, g in zip(pred, gt):
                hard.append(mask_iou(p, g))
                soft.append(soft_iou(p, g))
        model.train()
        return {"val_mask_iou": float(np.mean(hard)), "val_soft_iou": float(np.mean(soft))}

    def _checkpoint(self, model, optimizer, step: int, epoch: int, config: TrainConfig) -> Checkpoint:
        return Checkpoint(
            model_state={k: v.detach().cpu() for k, v in model.state_dict().items()},
            optimizer_state=optimizer.state_dict(),
            step=step,
            config=config.to_dict(),
            epoch=epoch,
        )

    def fit(
        self,
        config: TrainConfig,
        manifest: DatasetManifest,
        run_dir: Optional[Union[str, Path]] = None,
    ) -> Checkpoint:
        run_dir = Path(run_dir or config.checkpoint_dir or "runs/default")
        if manifest.resolution != config.resolution:
            raise ParameterError(f"Dataset resolution {manifest.resolution} != config resolution {config.resolution}")
        run_dir.mkdir(parents=True, exist_ok=True)
        config.save(run_dir / "train_config.json")

        seed_everything(config.seed)
        model = OrnamentTryonModel.from_config(config).to(self.device)
        model.train()
        optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
        schedule = make_schedule(config.train_timesteps, config.beta_min, config.beta_max, config.schedule)
        generator = torch.Generator().manual_seed(config.seed)

        loader = DataLoader(
            TripletDataset(manifest, "train"),
            batch_size=config.batch_size,
            shuffle=True,
            num_workers=config.workers,
            generator=torch.Generator().manual_seed(config.seed),
            worker_init_fn=_worker_init if config.workers else None,
        )
        try:
            val_loader = DataLoader(TripletDataset(manifest, "val"), batch_size=config.batch_size, shuffle=False)
        except DatasetError:
            val_loader = None
            logger.warning("no validation split in %s; skipping validation", manifest.root)

        run_log = RunLogService(run_dir)
        run_log.reset()
        total_steps = config.epochs * len(loader)
        step = 0
        last_good: Optional[Path] = None
        checkpoint: Optional[Checkpoint] = None
        logger.info(
            "training %s for %d epochs (%d steps) on %s into %s",
            config.variant or "model", config.epochs, total_steps, self.device, run_dir,
        )

        for epoch in range(1, config.epochs + 1):
            progress = tqdm(loader, desc=f"epoch {epoch}/{config.epochs}", leave=False)
            for batch in progress:
                try:
                    terms = self.train_step(model, batch, schedule, step, total_steps, config, generator)
                except TrainingError as exc:
                    logger.error("aborting at step %d: %s", step, exc)
                    raise TrainingError(str(exc), term=exc.term, last_checkpoint=str(last_good) if last_good else None) from exc

                optimizer.zero_grad(set_to_none=True)
                terms["total"].backward()
                torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
                optimizer.step()

                lambda1, lambda2 = lambda_at(step, total_steps, config.loss_weights)
                record = {
                    "kind": "step",
                    "step": step,
                    "epoch": epoch,
                    "l1": terms["l1"].item(),
                    "l2": None if terms["l2"] is None else terms["l2"].item(),
                    "l3": None if terms["l3"] is None else terms["l3"].item(),
                    "lambda1": lambda1,
                    "lambda2": lambda2,
                    "total": terms["total"].item(),
                }
                run_log.append(record)
                progress.set_postfix(loss=f"{record['total']:.4f}")
                step += 1

            summary = {"kind": "epoch", "epoch": epoch, "step": step}
            if val_loader is not None:
                summary.update(self.validate(model, val_loader, schedule))
            run_log.append(summary)
            logger.info("epoch %d done: %s", epoch, {k: v for k, v in summary.items() if k.startswith("val")})

            checkpoint = self._checkpoint(model, optimizer, step, epoch, config)
            last_good = self.checkpoint_service.save(checkpoint, run_dir / f"epoch_{epoch:03d}.pt")
            self.checkpoint_service.save(checkpoint, run_dir / LAST_CHECKPOINT_NAME)
            checkpoint.path = last_good

        return checkpoint
