from enum import Enum

class ScheduleShape(Enum):
    LINEAR = "linear"
    COSINE = "cosine"

    def __str__(self) -> str:
        return self.value

    @property
    def id(self) -> str:
        return self.value
