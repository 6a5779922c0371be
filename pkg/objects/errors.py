from typing import Optional


class ParameterError(ValueError):
    pass


class ShapeMismatchError(ValueError):
    pass


class CompositionError(ValueError):
    pass


class InputMaskError(ValueError):
    pass


class InjectionError(ValueError):
    pass


class DatasetError(RuntimeError):
    pass


class CheckpointError(RuntimeError):
    pass


class SamplingDivergenceError(RuntimeError):

    def __init__(self, step_index: int, message: Optional[str] = None) -> None:
        self.step_index = step_index
        super().__init__(message or f"Non-finite latent at sampling step {step_index}")


class TrainingError(RuntimeError):

    def __init__(self, message: str, term: Optional[str] = None, last_checkpoint: Optional[str] = None) -> None:
        self.term = term
        self.last_checkpoint = last_checkpoint
        if last_checkpoint:
            message = f"{message} (last good checkpoint: {last_checkpoint})"
        super().__init__(message)
