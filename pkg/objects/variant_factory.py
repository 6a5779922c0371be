from typing import Callable, Dict, List

from enums.AblationVariant import AblationVariant
from objects.TrainConfig import TrainConfig


def _with_flags(variant: AblationVariant) -> Callable[[TrainConfig], TrainConfig]:
    def build(base: TrainConfig) -> TrainConfig:
        return base.for_variant(variant)

    return build


VARIANT_BUILDERS: Dict[str, Callable[[TrainConfig], TrainConfig]] = {
    variant.value: _with_flags(variant) for variant in AblationVariant
}


def parse_variants(names: str) -> List[AblationVariant]:
    """Comma separated variant ids, e.g. "baseline,full"; "all" expands to every row"""
    normalized = [n.strip().lower() for n in str(names or "").split(",") if n.strip()]
    if normalized == ["all"]:
        return list(AblationVariant)
    unknown = [n for n in normalized if n not in VARIANT_BUILDERS]
    if unknown:
        raise ValueError(f"Unsupported variant(s) {unknown}; choose from {sorted(VARIANT_BUILDERS)}")
    return [AblationVariant(n) for n in normalized]


def create_variant_config(variant, base: TrainConfig) -> TrainConfig:
    name = AblationVariant(variant).value
    builder = VARIANT_BUILDERS.get(name)
    if not builder:
        raise ValueError(f"Unsupported variant: {name}")
    return builder(base)
