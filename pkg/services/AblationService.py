import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

from config.config import DEFAULT_MASTER_SEED
from enums.AblationVariant import AblationVariant
from enums.InputMaskKind import InputMaskKind
from helpers.json_io import write_json
from objects.DatasetManifest import DatasetManifest
from objects.EvalReport import METRIC_NAMES
from objects.TrainConfig import TrainConfig
from objects.errors import CheckpointError, ParameterError
from objects.variant_factory import create_variant_config
from services.CheckpointService import CheckpointService
from services.TrainingService import TrainingService
from services.TryonService import TryonService

logger = logging.getLogger("AblationService")

TABLE_JSON = "ablation.json"
TABLE_TEXT = "ablation.txt"

# fields that do not change what a run learns
RUN_ONLY_FIELDS = ("dataset", "checkpoint_dir", "workers")


def comparable_config(config: dict) -> dict:
    data = TrainConfig.from_dict(config).to_dict()
    for name in RUN_ONLY_FIELDS:
        data.pop(name, None)
    return data


def render_table(rows: List[dict]) -> str:
    """Aligned plain-text table; failed rows show FAILED in place of metrics"""
    header = ["row", "input", "n"] + list(METRIC_NAMES)
    lines = [header]
    for row in rows:
        if row["status"] != "ok":
            metrics = ["FAILED"] + [""] * (len(METRIC_NAMES) - 1)
            n = "-"
        else:
            metrics = [f"{row[name]:.4f}" for name in METRIC_NAMES]
            n = str(row["n_samples"])
        lines.append([row["row"], row["mask_kind"], n] + metrics)
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    rendered = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in lines]
    rendered.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(rendered) + "\n"


class AblationService:

    def __init__(
        self,
        training_service: TrainingService,
        tryon_service: TryonService,
        checkpoint_service: CheckpointService,
    ) -> None:
        self.training_service = training_service
        self.tryon_service = tryon_service
        self.checkpoint_service = checkpoint_service

    def finished_checkpoint(self, config: TrainConfig, run_dir: Path) -> Optional[Path]:
        """Newest checkpoint of run_dir if it finished training under the same config"""
        path = self.checkpoint_service.latest(run_dir) if run_dir.is_dir() else None
        if path is None:
            return None
        try:
            checkpoint = self.checkpoint_service.load(path)
            stored = comparable_config(checkpoint.config)
        except (CheckpointError, ValueError, TypeError) as exc:
            logger.warning("cannot reuse %s: %s", path, exc)
            return None
        if checkpoint.epoch != config.epochs:
            logger.info("%s stopped at epoch %d of %d; retraining", path, checkpoint.epoch, config.epochs)
            return None
        if stored != comparable_config(config.to_dict()):
            logger.info("%s was trained under another config; retraining", path)
            return None
        return path

    def checkpoint_for(self, config: TrainConfig, manifest: DatasetManifest, run_dir: Path) -> Path:
        """Reuse a finished checkpoint of run_dir trained under config, otherwise train one"""
        existing = self.finished_checkpoint(config, run_dir)
        if existing is not None:
            logger.info("reusing %s", existing)
            return existing
        return self.training_service.fit(config, manifest, run_dir).path

    def _evaluate_row(self, label: str, variant: Optional[str], mask_kind: InputMaskKind, run, **eval_kwargs) -> dict:
        row = {"row": label, "variant": variant, "mask_kind": mask_kind.value}
        try:
            checkpoint_path = run()
            report = self.tryon_service.evaluate(checkpoint_path=checkpoint_path, mask_kind=mask_kind, **eval_kwargs)
        except Exception as exc:
            logger.error("%s (%s) failed: %s", label, mask_kind.value, exc)
            return {**row, "status": "failed", "error": f"{type(exc).__name__}: {exc}"}
        return {
            **row,
            "status": "ok",
            "checkpoint": str(checkpoint_path),
            "n_samples": report.n_samples,
            "config_hash": report.config_hash,
            "refinement_convergence": report.refinement_convergence,
            **report.means,
        }

    def ablate(
        self,
        manifest: DatasetManifest,
        base_config: TrainConfig,
        variants: Sequence[Union[AblationVariant, str]],
        out_dir: Union[str, Path],
        mask_kinds: Sequence[Union[InputMaskKind, str]] = tuple(InputMaskKind),
        ladder_variant: Union[AblationVariant, str] = AblationVariant.FULL,
        ladder_checkpoint: Optional[Union[str, Path]] = None,
        steps: Optional[int] = None,
        seed: int = DEFAULT_MASTER_SEED,
        limit: Optional[int] = None,
    ) -> dict:
        """
        Module ablation rows (each variant trained or reused, evaluated on box inputs)
        followed by the input-mask ladder (one checkpoint evaluated under every mask kind).
        A failed sub-run becomes a row with status "failed"; the table is still written.
        """
        variants = [AblationVariant(v) for v in variants]
        mask_kinds = [InputMaskKind(k) for k in mask_kinds]
        if len(variants) + len(mask_kinds) < 2:
            raise ParameterError("An ablation needs at least two configurations")
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        eval_kwargs = {"manifest": manifest, "steps": steps, "seed": seed, "limit": limit}

        module_rows = []
        for variant in variants:
            config = create_variant_config(variant, base_config)
            run_dir = out_dir / variant.value
            module_rows.append(
                self._evaluate_row(
                    variant.name_display, variant.value, InputMaskKind.BBOX,
                    lambda config=config, run_dir=run_dir: self.checkpoint_for(config, manifest, run_dir),
                    **eval_kwargs,
                )
            )

        ladder_rows = []
        if mask_kinds:
            ladder_variant = AblationVariant(ladder_variant)

            def ladder_run() -> Path:
                if ladder_checkpoint is not None:
                    return Path(ladder_checkpoint)
                config = create_variant_config(ladder_variant, base_config)
                return self.checkpoint_for(config, manifest, out_dir / ladder_variant.value)

            for kind in mask_kinds:
                ladder_rows.append(
                    self._evaluate_row(f"{kind.name_display} input", ladder_variant.value, kind, ladder_run, **eval_kwargs)
                )

        table = {"modules": module_rows, "mask_ladder": ladder_rows, "seed": seed, "limit": limit}
        self._write(out_dir, table)
        return table

    def _write(self, out_dir: Path, table: dict) -> None:
        json_path = out_dir / TABLE_JSON
        write_json(json_path, table)
        text = render_table(table["modules"] + table["mask_ladder"])
        (out_dir / TABLE_TEXT).write_text(text, encoding="utf-8")
        logger.info("comparison table written to %s\n%s", out_dir, text)
