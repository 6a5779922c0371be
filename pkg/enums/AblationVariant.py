from enum import Enum

class AblationVariant(Enum):
    BASELINE = "baseline"
    NO_MASK_REFINEMENT = "no_mask_refinement"
    NO_MASK_GUIDED_ATTENTION = "no_mask_guided_attention"
    FULL = "full"

    def __str__(self) -> str:
        """Return the variant id as a string"""
        return self.value

    @property
    def id(self) -> str:
        return self.value

    @property
    def name_display(self) -> str:
        """Row label used in comparison tables"""
        return {
            AblationVariant.BASELINE: "Baseline",
            AblationVariant.NO_MASK_REFINEMENT: "w/o mask refinement",
            AblationVariant.NO_MASK_GUIDED_ATTENTION: "w/o mask-guided atten.",
            AblationVariant.FULL: "Full model",
        }[self]

    @property
    def mask_refinement(self) -> bool:
        return self in (AblationVariant.NO_MASK_GUIDED_ATTENTION, AblationVariant.FULL)

    @property
    def mask_guided_attention(self) -> bool:
        return self in (AblationVariant.NO_MASK_REFINEMENT, AblationVariant.FULL)
