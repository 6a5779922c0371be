from .AblationService import AblationService
from .CheckpointService import CheckpointService
from .DatasetService import DatasetService
from .RunLogService import RunLogService
from .TrainingService import TrainingService
from .TryonService import TryonService
