from .variant_factory import VARIANT_BUILDERS, create_variant_config, parse_variants
