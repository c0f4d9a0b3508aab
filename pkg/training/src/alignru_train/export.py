"""Export a trained model to the engine's interchange format:
``model.npz`` (float32 tensors, (input, output) weight orientation),
``model.json`` metadata sidecar, and the vocabulary file.

The metadata carries no timestamp, so re-exporting the same checkpoint is
byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch

from alignru_train.config import HEAD_SIZES, EncoderSpec
from alignru_train.model import MultiHeadModel
from alignru_train.vocab import write_vocab

FORMAT_VERSION = 1


class ExportError(Exception):
    """The checkpoint cannot be exported; message names what is missing."""


def _tensor_map(state: dict[str, torch.Tensor], num_layers: int) -> dict[str, np.ndarray]:
    """torch state-dict keys -> interchange tensor names, transposing
    Linear weights from (out, in) to (in, out)."""

    def linear(src: str, dst: str) -> dict[str, np.ndarray]:
        return {
            f"{dst}.weight": state[f"{src}.weight"].T.contiguous().numpy().astype(np.float32),
            f"{dst}.bias": state[f"{src}.bias"].numpy().astype(np.float32),
        }

    def norm(src: str, dst: str) -> dict[str, np.ndarray]:
        return {
            f"{dst}.weight": state[f"{src}.weight"].numpy().astype(np.float32),
            f"{dst}.bias": state[f"{src}.bias"].numpy().astype(np.float32),
        }

    tensors: dict[str, np.ndarray] = {
        "embeddings.word": state["encoder.word_embeddings.weight"].numpy().astype(np.float32),
        "embeddings.position": state["encoder.position_embeddings.weight"].numpy().astype(np.float32),
        "embeddings.token_type": state["encoder.token_type_embeddings.weight"].numpy().astype(np.float32),
    }
    tensors.update(norm("encoder.embedding_norm", "embeddings.norm"))
    for i in range(num_layers):
        src = f"encoder.layers.{i}"
        dst = f"layer{i}"
        for part in ("query", "key", "value", "output"):
            tensors.update(linear(f"{src}.attention.{part}", f"{dst}.attention.{part}"))
        tensors.update(norm(f"{src}.attention_norm", f"{dst}.attention.norm"))
        tensors.update(linear(f"{src}.ffn_in", f"{dst}.ffn.intermediate"))
        tensors.update(linear(f"{src}.ffn_out", f"{dst}.ffn.output"))
        tensors.update(norm(f"{src}.ffn_norm", f"{dst}.ffn.norm"))
    for head in HEAD_SIZES:
        tensors.update(linear(f"heads.{head}.dense", f"head.{head}.dense"))
        tensors.update(linear(f"heads.{head}.out", f"head.{head}.out"))
    return tensors


def _validate_state(state: dict[str, torch.Tensor]) -> None:
    for head in HEAD_SIZES:
        for suffix in ("dense.weight", "dense.bias", "out.weight", "out.bias"):
            key = f"heads.{head}.{suffix}"
            if key not in state:
                raise ExportError(f"checkpoint is missing head {head!r} ({key})")
    for key, tensor in state.items():
        if not torch.isfinite(tensor).all():
            raise ExportError(f"tensor {key} contains non-finite values")


def export_model(
    model: MultiHeadModel,
    out_dir: str | Path,
    vocab: list[str],
    max_input_tokens: int | None = None,
    lowercase: bool = False,
) -> Path:
    """Write the interchange files into ``out_dir``; returns that path."""
    spec: EncoderSpec = model.spec
    if len(vocab) != spec.vocab_size:
        raise ExportError(
            f"vocabulary has {len(vocab)} entries but the model embeds {spec.vocab_size}"
        )
    if max_input_tokens is None:
        max_input_tokens = spec.max_position_embeddings
    if max_input_tokens > spec.max_position_embeddings:
        raise ExportError(
            f"max_input_tokens {max_input_tokens} exceeds the position table "
            f"({spec.max_position_embeddings})"
        )

    state = {key: tensor.detach().cpu() for key, tensor in model.state_dict().items()}
    _validate_state(state)
    tensors = _tensor_map(state, spec.num_layers)

    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    np.savez(out_path / "model.npz", **tensors)
    write_vocab(vocab, out_path / "vocab.txt")
    meta = {
        "format_version": FORMAT_VERSION,
        "max_input_tokens": int(max_input_tokens),
        "vocab_file": "vocab.txt",
        "lowercase": lowercase,
        "architecture": {
            "vocab_size": spec.vocab_size,
            "hidden_size": spec.hidden_size,
            "num_layers": spec.num_layers,
            "num_heads": spec.num_heads,
            "intermediate_size": spec.intermediate_size,
            "max_position_embeddings": spec.max_position_embeddings,
            "type_vocab_size": spec.type_vocab_size,
            "layer_norm_eps": spec.layer_norm_eps,
        },
        "outputs": ["probs3", "prob_bin", "regression"],
    }
    (out_path / "model.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return out_path
