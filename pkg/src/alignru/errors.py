"""Exception types raised across the package.

Every error is a subclass of :class:`AlignRuError` so callers can catch the
whole family with one clause. Input-validation errors and backend faults are
kept distinct because the CLI maps them to different exit codes.
"""

from __future__ import annotations


class AlignRuError(Exception):
    """Base class for all errors raised by this package."""


class InputError(AlignRuError):
    """A problem with user-supplied data (CLI exit code 2)."""


class EmptyInput(InputError):
    """Context or claim is empty after trimming whitespace."""


class EmptyContext(InputError):
    """The context produced no sentences."""


class EmptyClaim(InputError):
    """The claim produced no sentences."""


class TokenizerNotLoaded(AlignRuError):
    """Token counting was requested without a loaded tokenizer."""


class BackendError(AlignRuError):
    """A backend-level fault (CLI exit code 3)."""


class ModelLoadFailure(BackendError):
    """The serialized model could not be loaded; message carries diagnostics."""


class InferenceFailure(BackendError):
    """The backend failed while producing predictions."""

    def __init__(self, message: str, cause: BaseException | None = None):
        super().__init__(message)
        self.cause = cause


class BatchItemError(AlignRuError):
    """Failure on one item of a batch, tagged with its input index."""

    def __init__(self, index: int, cause: BaseException):
        super().__init__(f"item {index}: {cause}")
        self.index = index
        self.cause = cause


class DatasetError(InputError):
    """A problem in a dataset file."""


class MalformedRecord(DatasetError):
    """A dataset line that does not parse or validate."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class LabelOutOfRange(DatasetError):
    """A regression label outside [0, 1] after normalization."""

    def __init__(self, line: int, value: float):
        super().__init__(f"line {line}: label {value!r} outside [0, 1]")
        self.line = line
        self.value = value


class LengthMismatch(InputError):
    """Predicted and gold sequences differ in length."""


class SingleClassAUC(InputError):
    """ROC AUC requested but gold labels contain a single class."""


class ZeroVariance(InputError):
    """R^2 requested but gold values have zero variance."""


class TaskMismatch(InputError):
    """Records of mixed task types passed to a single-task evaluation."""
