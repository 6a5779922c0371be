import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from enums.AblationVariant import AblationVariant
from enums.InputMaskKind import InputMaskKind
from helpers.image_io import read_mask, read_rgb, write_mask, write_rgb
from helpers.input_masks import mask_bbox
from helpers.json_io import write_json
from helpers.metrics import binarize
from objects.Context import Context
from objects.SynthConfig import SynthConfig
from objects.TrainConfig import TrainConfig
from objects.variant_factory import parse_variants
from services.DatasetService import TripletDataset

logger = logging.getLogger("ornatry")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; usage errors here exit with 1"""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _parse_bbox(text: str):
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 4:
        raise ValueError(f"--bbox needs x,y,w,h, got {text!r}")
    return tuple(int(p) for p in parts)


def _print(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _train_config(args) -> TrainConfig:
    config = TrainConfig.from_json(args.config) if args.config else TrainConfig()
    overrides = {
        "seed": args.seed,
        "epochs": getattr(args, "epochs", None),
        "batch_size": getattr(args, "batch_size", None),
        "learning_rate": getattr(args, "lr", None),
        "workers": getattr(args, "workers", None),
        "sampling_steps": getattr(args, "steps", None),
    }
    if getattr(args, "widths", None):
        overrides["model_widths"] = tuple(int(w) for w in args.widths.split(","))
    config = dataclasses.replace(config, **{k: v for k, v in overrides.items() if v is not None})
    if getattr(args, "variant", None):
        config = config.for_variant(args.variant)
    return config


def cmd_gen_data(args, context: Context) -> int:
    config = SynthConfig.from_json(args.config) if args.config else SynthConfig()
    overrides = {
        "n": args.n,
        "resolution": args.resolution,
        "master_seed": args.seed,
        "mask_kind": args.mask_kind,
        "jitter": args.jitter,
        "workers": args.workers,
    }
    config = dataclasses.replace(config, **{k: v for k, v in overrides.items() if v is not None})
    out_dir = Path(args.out or "data")
    manifest = context.dataset_service.build_dataset(config, out_dir)
    _print({"dataset": str(out_dir), "n_samples": len(manifest.samples), "histogram": manifest.histogram})
    return EXIT_OK


def cmd_train(args, context: Context) -> int:
    config = _train_config(args)
    data = args.data or config.dataset
    if not data:
        raise ValueError("train needs --data or a dataset path in the config")
    manifest = context.dataset_service.load_manifest(data)
    run_dir = Path(args.out or config.checkpoint_dir or f"runs/{config.variant or 'full'}")
    config = dataclasses.replace(config, dataset=str(data), checkpoint_dir=str(run_dir))
    checkpoint = context.training_service.fit(config, manifest, run_dir)
    _print({"checkpoint": str(checkpoint.path), "step": checkpoint.step, "epoch": checkpoint.epoch})
    return EXIT_OK


def cmd_tryon(args, context: Context) -> int:
    if bool(args.bbox) == bool(args.bbox_from_gt):
        raise ValueError("tryon needs exactly one of --bbox or --bbox-from-gt")
    bbox = _parse_bbox(args.bbox) if args.bbox else mask_bbox(read_mask(args.bbox_from_gt))
    model_image = read_rgb(args.model)
    ornament_image = read_rgb(args.ornament)
    seed = 0 if args.seed is None else args.seed
    final, mask = context.tryon_service.tryon(model_image, ornament_image, bbox, args.ckpt, args.steps, seed)

    out_dir = Path(args.out or "tryon_out")
    out_dir.mkdir(parents=True, exist_ok=True)
    write_rgb(out_dir / "tryon.png", final)
    write_mask(out_dir / "tryon_mask.png", binarize(mask))
    _print({"image": str(out_dir / "tryon.png"), "mask": str(out_dir / "tryon_mask.png"), "bbox": list(bbox)})
    return EXIT_OK


def cmd_eval(args, context: Context) -> int:
    if not args.oracle and not args.ckpt:
        raise ValueError("eval needs --ckpt unless --oracle is given")
    manifest = context.dataset_service.load_manifest(args.data)
    out_dir = Path(args.out or "eval_out")
    out_dir.mkdir(parents=True, exist_ok=True)
    report = context.tryon_service.evaluate(
        manifest,
        args.ckpt,
        mask_kind=args.mask_kind,
        steps=args.steps,
        seed=0 if args.seed is None else args.seed,
        oracle=args.oracle,
        split=None if args.split == "all" else args.split,
        limit=args.limit,
        batch_size=args.batch_size,
        grids=args.grids,
        out_dir=out_dir,
    )
    write_json(out_dir / "eval_report.json", report.to_dict())
    _print(
        {
            "report": str(out_dir / "eval_report.json"),
            "n_samples": report.n_samples,
            "means": report.means,
            "refinement_convergence": report.refinement_convergence,
        }
    )
    return EXIT_OK


def cmd_ablate(args, context: Context) -> int:
    manifest = context.dataset_service.load_manifest(args.data)
    base = _train_config(args)
    variants = parse_variants(args.variants)
    mask_kinds = [InputMaskKind(k.strip()) for k in args.mask_kinds.split(",") if k.strip()]
    out_dir = Path(args.out or "ablation_out")
    table = context.ablation_service.ablate(
        manifest,
        base,
        variants,
        out_dir,
        mask_kinds=mask_kinds,
        ladder_variant=args.ladder_variant,
        ladder_checkpoint=args.ladder_ckpt,
        steps=args.steps,
        seed=base.seed,
        limit=args.limit,
    )
    failed = [row["row"] for row in table["modules"] + table["mask_ladder"] if row["status"] != "ok"]
    _print({"table": str(out_dir / "ablation.json"), "failed_rows": failed})
    return EXIT_RUNTIME if failed else EXIT_OK


def cmd_attn_viz(args, context: Context) -> int:
    manifest = context.dataset_service.load_manifest(args.data)
    dataset = TripletDataset(manifest, None)
    if not 0 <= args.index < len(dataset):
        raise ValueError(f"--index must lie in [0, {len(dataset)}), got {args.index}")
    written = context.tryon_service.attention_maps(
        dataset.load_triplet(args.index),
        args.ckpt,
        Path(args.out or "attn_viz"),
        timestep=args.timestep,
        seed=0 if args.seed is None else args.seed,
    )
    _print({"written": [str(p) for p in written]})
    return EXIT_OK


COMMANDS: Dict[str, Callable] = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "tryon": cmd_tryon,
    "eval": cmd_eval,
    "ablate": cmd_ablate,
    "attn-viz": cmd_attn_viz,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON config file")
    shared.add_argument("--seed", type=int, help="overrides the seed of the config")
    shared.add_argument("--out", help="output directory")
    shared.add_argument("--verbose", action="store_true")

    parser = _Parser(prog="ornatry", description="Ornament virtual try-on with mask-aware diffusion")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen-data", parents=[shared], help="generate synthetic try-on triplets")
    gen.add_argument("--n", type=int)
    gen.add_argument("--resolution", type=int)
    gen.add_argument("--mask-kind", choices=[k.value for k in InputMaskKind])
    gen.add_argument("--jitter", type=float)
    gen.add_argument("--workers", type=int)

    train = sub.add_parser("train", parents=[shared], help="train a model")
    train.add_argument("--data", help="dataset directory")
    train.add_argument("--epochs", type=int)
    train.add_argument("--batch-size", type=int)
    train.add_argument("--lr", type=float)
    train.add_argument("--workers", type=int)
    train.add_argument("--widths", help="three channel widths, e.g. 32,64,128")
    train.add_argument("--variant", choices=[v.value for v in AblationVariant])

    tryon = sub.add_parser("tryon", parents=[shared], help="put an ornament on a model image")
    tryon.add_argument("--model", required=True, help="model image PNG")
    tryon.add_argument("--ornament", required=True, help="ornament image PNG")
    tryon.add_argument("--bbox", help="x,y,w,h")
    tryon.add_argument("--bbox-from-gt", help="mask PNG whose bounding box is used")
    tryon.add_argument("--ckpt", required=True)
    tryon.add_argument("--steps", type=int)

    evaluate = sub.add_parser("eval", parents=[shared], help="score a checkpoint on a dataset")
    evaluate.add_argument("--data", required=True)
    evaluate.add_argument("--ckpt")
    evaluate.add_argument("--mask-kind", default=InputMaskKind.BBOX.value, choices=[k.value for k in InputMaskKind])
    evaluate.add_argument("--steps", type=int)
    evaluate.add_argument("--oracle", action="store_true", help="score ground-truth images instead of generations")
    evaluate.add_argument("--split", default="val", choices=["train", "val", "all"])
    evaluate.add_argument("--limit", type=int)
    evaluate.add_argument("--batch-size", type=int, default=16)
    evaluate.add_argument("--grids", type=int, default=0, help="write comparison grids for the first N samples")

    ablate = sub.add_parser("ablate", parents=[shared], help="module ablations and the input-mask ladder")
    ablate.add_argument("--data", required=True)
    ablate.add_argument("--variants", default="all", help="comma separated variant ids or 'all'")
    ablate.add_argument("--mask-kinds", default=",".join(k.value for k in InputMaskKind))
    ablate.add_argument("--ladder-variant", default=AblationVariant.FULL.value, choices=[v.value for v in AblationVariant])
    ablate.add_argument("--ladder-ckpt")
    ablate.add_argument("--epochs", type=int)
    ablate.add_argument("--batch-size", type=int)
    ablate.add_argument("--steps", type=int)
    ablate.add_argument("--limit", type=int)

    viz = sub.add_parser("attn-viz", parents=[shared], help="dump attention heatmaps for one sample")
    viz.add_argument("--data", required=True)
    viz.add_argument("--ckpt", required=True)
    viz.add_argument("--index", type=int, default=0)
    viz.add_argument("--timestep", type=int)

    return parser


def main(argv: Optional[List[str]] = None, context: Optional[Context] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="[%(name)s] %(message)s",
    )
    context = context or Context.create()
    try:
        return COMMANDS[args.command](args, context)
    except (ValueError, FileNotFoundError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except Exception as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_RUNTIME


if __name__ == '__main__':
    sys.exit(main())
