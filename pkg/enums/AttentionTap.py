from enum import Enum

class AttentionTap(Enum):
    """Attention layers whose reference sub-block is recorded"""
    ENCODER_HIGHRES = "encoder_highres"
    DECODER_HIGHRES = "decoder_highres"

    def __str__(self) -> str:
        return self.value

    @property
    def id(self) -> str:
        return self.value

    @property
    def name_display(self) -> str:
        return self.name.replace('_', ' ').title()
