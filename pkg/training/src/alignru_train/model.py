"""The multi-head alignment model: shared encoder, three task heads.

The forward pass mirrors the inference engine's numpy formulation
operation for operation (additive -1e9 attention mask, erf GELU,
first-token pooling, tanh-dense heads) so that exported weights
reproduce the same outputs.
"""

from __future__ import annotations

import math

import torch
from torch import nn

from alignru_train.config import HEAD_SIZES, EncoderSpec, TrainConfig

class SelfAttention(nn.Module):
    def __init__(self, spec: EncoderSpec):
        super().__init__()
        self.num_heads = spec.num_heads
        self.head_dim = spec.hidden_size // spec.num_heads
        self.query = nn.Linear(spec.hidden_size, spec.hidden_size)
        self.key = nn.Linear(spec.hidden_size, spec.hidden_size)
        self.value = nn.Linear(spec.hidden_size, spec.hidden_size)
        self.output = nn.Linear(spec.hidden_size, spec.hidden_size)

    def forward(self, x: torch.Tensor, attention_bias: torch.Tensor) -> torch.Tensor:
        batch, seq, hidden = x.shape

        def split(t: torch.Tensor) -> torch.Tensor:
            return t.view(batch, seq, self.num_heads, self.head_dim).transpose(1, 2)

        scores = split(self.query(x)) @ split(self.key(x)).transpose(-1, -2)
        scores = scores / math.sqrt(self.head_dim) + attention_bias
        mixed = (torch.softmax(scores, dim=-1) @ split(self.value(x)))
        mixed = mixed.transpose(1, 2).reshape(batch, seq, hidden)
        return self.output(mixed)


class EncoderLayer(nn.Module):
    def __init__(self, spec: EncoderSpec):
        super().__init__()
        self.attention = SelfAttention(spec)
        self.attention_norm = nn.LayerNorm(spec.hidden_size, eps=spec.layer_norm_eps)
        self.ffn_in = nn.Linear(spec.hidden_size, spec.intermediate_size)
        self.ffn_out = nn.Linear(spec.intermediate_size, spec.hidden_size)
        self.ffn_norm = nn.LayerNorm(spec.hidden_size, eps=spec.layer_norm_eps)

    def forward(self, x: torch.Tensor, attention_bias: torch.Tensor) -> torch.Tensor:
        x = self.attention_norm(x + self.attention(x, attention_bias))
        inner = torch.nn.functional.gelu(self.ffn_in(x))
        return self.ffn_norm(x + self.ffn_out(inner))


class Encoder(nn.Module):
    def __init__(self, spec: EncoderSpec):
        super().__init__()
        self.spec = spec
        self.word_embeddings = nn.Embedding(spec.vocab_size, spec.hidden_size)
        self.position_embeddings = nn.Embedding(spec.max_position_embeddings, spec.hidden_size)
        self.token_type_embeddings = nn.Embedding(spec.type_vocab_size, spec.hidden_size)
        self.embedding_norm = nn.LayerNorm(spec.hidden_size, eps=spec.layer_norm_eps)
        self.layers = nn.ModuleList(EncoderLayer(spec) for _ in range(spec.num_layers))

    def forward(
        self, ids: torch.Tensor, mask: torch.Tensor, segments: torch.Tensor
    ) -> torch.Tensor:
        seq = ids.shape[1]
        positions = torch.arange(seq, device=ids.device)
        x = (
            self.word_embeddings(ids)
            + self.position_embeddings(positions)[None, :, :]
            + self.token_type_embeddings(segments)
        )
        x = self.embedding_norm(x)
        bias = (1.0 - mask.to(x.dtype))[:, None, None, :] * -1e9
        for layer in self.layers:
            x = layer(x, bias)
        return x


class TaskHead(nn.Module):
    """Small feed-forward network on the pooled representation."""

    def __init__(self, hidden_size: int, out_size: int):
        super().__init__()
        self.dense = nn.Linear(hidden_size, hidden_size)
        self.out = nn.Linear(hidden_size, out_size)

    def forward(self, pooled: torch.Tensor) -> torch.Tensor:
        return self.out(torch.tanh(self.dense(pooled)))


class MultiHeadModel(nn.Module):
    def __init__(self, spec: EncoderSpec):
        super().__init__()
        self.spec = spec
        self.encoder = Encoder(spec)
        self.heads = nn.ModuleDict(
            {name: TaskHead(spec.hidden_size, size) for name, size in HEAD_SIZES.items()}
        )

    def forward(
        self, ids: torch.Tensor, mask: torch.Tensor, segments: torch.Tensor
    ) -> dict[str, torch.Tensor]:
        pooled = self.encoder(ids, mask, segments)[:, 0, :]
        return {
            "logits3": self.heads["nli3"](pooled),
            "logits_bin": self.heads["binary"](pooled),
            "regression": torch.sigmoid(self.heads["regression"](pooled)),
        }

    @torch.no_grad()
    def predict_heads(
        self, ids: torch.Tensor, mask: torch.Tensor, segments: torch.Tensor
    ) -> dict[str, torch.Tensor]:
        """Probability-space outputs matching the engine's head naming."""
        out = self.forward(ids, mask, segments)
        return {
            "probs3": torch.softmax(out["logits3"], dim=-1),
            "prob_bin": torch.softmax(out["logits_bin"], dim=-1)[:, 1],
            "regression": out["regression"][:, 0],
        }


def _init_weights(module: nn.Module, std: float) -> None:
    if isinstance(module, nn.Linear):
        nn.init.normal_(module.weight, mean=0.0, std=std)
        nn.init.zeros_(module.bias)
    elif isinstance(module, nn.Embedding):
        nn.init.normal_(module.weight, mean=0.0, std=std)
    elif isinstance(module, nn.LayerNorm):
        nn.init.ones_(module.weight)
        nn.init.zeros_(module.bias)


def build_model(config: TrainConfig) -> MultiHeadModel:
    """Construct the model with seed-determined initialization."""
    torch.manual_seed(config.seed)
    model = MultiHeadModel(config.encoder)
    model.apply(lambda module: _init_weights(module, config.encoder.init_std))
    return model


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
