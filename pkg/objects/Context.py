from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from services.AblationService import AblationService
    from services.CheckpointService import CheckpointService
    from services.DatasetService import DatasetService
    from services.TrainingService import TrainingService
    from services.TryonService import TryonService


class Context:

    def __init__(
        self,
        dataset_service: DatasetService,
        checkpoint_service: CheckpointService,
        training_service: TrainingService,
        tryon_service: TryonService,
        ablation_service: AblationService,
    ) -> None:

        # Save context
        self.dataset_service = dataset_service
        self.checkpoint_service = checkpoint_service
        self.training_service = training_service
        self.tryon_service = tryon_service
        self.ablation_service = ablation_service

    @classmethod
    def create(cls, device: Optional[str] = None) -> Context:
        """Wire the default services together"""
        from services.AblationService import AblationService
        from services.CheckpointService import CheckpointService
        from services.DatasetService import DatasetService
        from services.TrainingService import TrainingService
        from services.TryonService import TryonService

        checkpoint_service = CheckpointService()
        training_service = TrainingService(checkpoint_service, device)
        tryon_service = TryonService(checkpoint_service, device)
        return cls(
            DatasetService(),
            checkpoint_service,
            training_service,
            tryon_service,
            AblationService(training_service, tryon_service, checkpoint_service),
        )
