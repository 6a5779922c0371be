from enum import Enum

class OrnamentArchetype(Enum):
    BEADED_RING = "beaded_ring"
    CHAIN = "chain"
    PENDANT = "pendant"
    STUD = "stud"

    def __str__(self) -> str:
        """Return the archetype id as a string"""
        return self.value

    @property
    def id(self) -> str:
        """Get the archetype id"""
        return self.value

    @property
    def name_display(self) -> str:
        """Get a human-readable archetype name"""
        return self.name.replace('_', ' ').title()

    @property
    def category(self) -> str:
        """Real-world ornament category the archetype stands in for"""
        return {
            OrnamentArchetype.BEADED_RING: "bracelet",
            OrnamentArchetype.CHAIN: "necklace",
            OrnamentArchetype.PENDANT: "earring",
            OrnamentArchetype.STUD: "ring",
        }[self]

    @property
    def has_countable_parts(self) -> bool:
        return self in (OrnamentArchetype.BEADED_RING, OrnamentArchetype.CHAIN)
