from enum import Enum

class InputMaskKind(Enum):
    # ordered from coarsest to finest
    BBOX = "bbox"
    OBB = "obb"
    HULL = "hull"
    GT = "gt"

    def __str__(self) -> str:
        """Return the mask kind as a string"""
        return self.value

    @property
    def id(self) -> str:
        """Get the mask kind id"""
        return self.value

    @property
    def name_display(self) -> str:
        """Get a human-readable mask kind name"""
        return self.name.upper() if self is not InputMaskKind.HULL else "Convex Hull"
