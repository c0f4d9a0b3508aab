"""Training configuration and encoder architecture descriptions."""

from __future__ import annotations

from dataclasses import dataclass, field

RUBERT_BASE_ID = "DeepPavlov/rubert-base-cased"


@dataclass(frozen=True)
class EncoderSpec:
    """Architecture dimensions of the shared encoder."""

    vocab_size: int
    hidden_size: int = 768
    num_layers: int = 12
    num_heads: int = 12
    intermediate_size: int = 3072
    max_position_embeddings: int = 512
    type_vocab_size: int = 2
    layer_norm_eps: float = 1e-12
    # weight init scale; 0.02 suits base-size dims, toy widths need more
    init_std: float = 0.02

    def __post_init__(self) -> None:
        if self.hidden_size % self.num_heads != 0:
            raise ValueError("hidden_size must be divisible by num_heads")

    @classmethod
    def rubert_base(cls) -> "EncoderSpec":
        return cls(vocab_size=119547)

    @classmethod
    def toy(
        cls,
        vocab_size: int,
        max_position_embeddings: int = 64,
        num_layers: int = 2,
    ) -> "EncoderSpec":
        return cls(
            vocab_size=vocab_size,
            hidden_size=32,
            num_layers=num_layers,
            num_heads=2,
            intermediate_size=64,
            max_position_embeddings=max_position_embeddings,
            init_std=0.2,
        )


HEAD_SIZES = {"nli3": 3, "binary": 2, "regression": 1}


def predicted_parameter_count(spec: EncoderSpec) -> int:
    """Parameter count implied by the dimensions, heads included."""
    h, inter = spec.hidden_size, spec.intermediate_size
    embeddings = (
        spec.vocab_size * h
        + spec.max_position_embeddings * h
        + spec.type_vocab_size * h
        + 2 * h  # embedding layer norm
    )
    per_layer = (
        4 * (h * h + h)          # q, k, v, attention output
        + 2 * h                  # attention layer norm
        + (h * inter + inter)    # ffn in
        + (inter * h + h)        # ffn out
        + 2 * h                  # ffn layer norm
    )
    heads = sum((h * h + h) + (h * k + k) for k in HEAD_SIZES.values())
    return embeddings + spec.num_layers * per_layer + heads


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters; the defaults are the published recipe."""

    backbone_id: str = RUBERT_BASE_ID
    batch_size: int = 12
    epochs: int = 3
    optimizer: str = "adamw"
    learning_rate: float = 1e-5
    weight_decay: float = 0.1
    adam_epsilon: float = 1e-6
    warmup_ratio: float = 0.06
    seed: int = 2025
    max_seq_len: int = 512
    encoder: EncoderSpec = field(default_factory=EncoderSpec.rubert_base)

    def __post_init__(self) -> None:
        if self.optimizer.lower() != "adamw":
            raise ValueError(f"unsupported optimizer {self.optimizer!r}")
        if self.max_seq_len < 8:
            raise ValueError("max_seq_len must be >= 8")
