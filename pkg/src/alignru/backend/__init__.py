"""Alignment backends: a uniform three-head prediction interface.

The reference backend is a deterministic lexical-overlap formula used for
tests and plumbing; the neural backend runs a serialized trained model.
Both return :class:`HeadOutputs` and are shareable across threads.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

from alignru.errors import BatchItemError, EmptyInput, ModelLoadFailure

PROBS3_CLASSES = ("aligned", "neutral", "contradict")
BINARY_CLASSES = ("not_aligned", "aligned")


@dataclass(frozen=True, slots=True)
class HeadOutputs:
    """One prediction: 3-way probabilities, binary aligned probability, and
    a similarity regression, all in [0, 1]."""

    probs3: tuple[float, float, float]
    prob_bin: float
    regression: float

    def validate(self) -> None:
        total = sum(self.probs3)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"probs3 sums to {total}, expected 1 within 1e-6")
        for value in (*self.probs3, self.prob_bin, self.regression):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"head output {value} outside [0, 1]")

    @property
    def p_aligned(self) -> float:
        return self.probs3[0]


@dataclass(frozen=True, slots=True)
class BackendConfig:
    """How to construct a backend."""

    kind: str = "reference"
    model_path: str | Path | None = None
    batch_size: int = 32

    def __post_init__(self) -> None:
        if self.kind not in ("reference", "neural"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.kind == "neural" and self.model_path is None:
            raise ValueError("neural backend requires model_path")


class Backend(ABC):
    """Uniform prediction interface over (context, claim) text pairs."""

    kind: str = "?"
    batch_size: int = 32
    #: None means the backend accepts inputs of any length.
    max_input_tokens: int | None = None
    model_hash: str | None = None

    @abstractmethod
    def _predict_validated(self, pairs: list[tuple[str, str]]) -> list[HeadOutputs]:
        """Predict for pairs already known to be nonempty; order-preserving."""

    @property
    @abstractmethod
    def tokenizer(self):
        """The tokenizer whose counts the chunk budget is measured in."""

    def count_tokens(self, text: str) -> int:
        return self.tokenizer.count(text)

    def pair_fits(self, context: str, claim: str) -> bool:
        """Whether the encoded pair fits the model input without truncation."""
        if self.max_input_tokens is None:
            return True
        needed = self.count_tokens(context) + self.count_tokens(claim) + 3
        return needed <= self.max_input_tokens

    def predict(self, context_text: str, claim_text: str) -> HeadOutputs:
        _require_nonempty(context_text, claim_text)
        return self._predict_validated([(context_text, claim_text)])[0]

    def predict_batch(self, pairs: list[tuple[str, str]]) -> list[HeadOutputs]:
        for index, (context_text, claim_text) in enumerate(pairs):
            try:
                _require_nonempty(context_text, claim_text)
            except EmptyInput as exc:
                raise BatchItemError(index, exc) from exc
        outputs: list[HeadOutputs] = []
        for lo in range(0, len(pairs), self.batch_size):
            outputs.extend(self._predict_validated(pairs[lo : lo + self.batch_size]))
        return outputs


def _require_nonempty(context_text: str, claim_text: str) -> None:
    if not context_text.strip():
        raise EmptyInput("context is empty after trimming whitespace")
    if not claim_text.strip():
        raise EmptyInput("claim is empty after trimming whitespace")


def load_backend(config: BackendConfig) -> Backend:
    """Construct a ready backend from ``config``."""
    if config.kind == "reference":
        from alignru.backend.reference import ReferenceBackend

        return ReferenceBackend(batch_size=config.batch_size)
    if config.kind == "neural":
        from alignru.backend.neural import NeuralBackend

        assert config.model_path is not None
        return NeuralBackend.load(config.model_path, batch_size=config.batch_size)
    raise ModelLoadFailure(f"unknown backend kind {config.kind!r}")


__all__ = [
    "Backend",
    "BackendConfig",
    "HeadOutputs",
    "PROBS3_CLASSES",
    "BINARY_CLASSES",
    "load_backend",
]
