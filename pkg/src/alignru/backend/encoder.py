"""Numpy forward pass for the serialized alignment model.

The interchange format is a weights archive (``model.npz``) plus a JSON
sidecar (``model.json``) describing the architecture, the input limit and
the vocabulary file. The network is a BERT-family encoder: token/position/
segment embeddings with layer norm, stacked self-attention + GELU feed-
forward blocks, first-token pooling, and three small feed-forward heads
named ``probs3`` (aligned/neutral/contradict softmax), ``prob_bin``
(binary aligned probability) and ``regression`` (sigmoid-bounded scalar).

Weights are stored float32 in (input, output) orientation; the forward
pass upcasts to float64 so batched and single-pair evaluation agree to
near machine precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import erf

FORMAT_VERSION = 1
HEAD_SIZES = {"nli3": 3, "binary": 2, "regression": 1}

_ARCH_KEYS = (
    "vocab_size",
    "hidden_size",
    "num_layers",
    "num_heads",
    "intermediate_size",
    "max_position_embeddings",
    "type_vocab_size",
    "layer_norm_eps",
)


@dataclass(frozen=True)
class Architecture:
    vocab_size: int
    hidden_size: int
    num_layers: int
    num_heads: int
    intermediate_size: int
    max_position_embeddings: int
    type_vocab_size: int = 2
    layer_norm_eps: float = 1e-12


def tensor_names(arch: Architecture) -> list[str]:
    """Every tensor the interchange archive must contain."""
    names = [
        "embeddings.word",
        "embeddings.position",
        "embeddings.token_type",
        "embeddings.norm.weight",
        "embeddings.norm.bias",
    ]
    for i in range(arch.num_layers):
        for part in ("query", "key", "value", "output"):
            names += [f"layer{i}.attention.{part}.weight", f"layer{i}.attention.{part}.bias"]
        names += [f"layer{i}.attention.norm.weight", f"layer{i}.attention.norm.bias"]
        for part in ("intermediate", "output"):
            names += [f"layer{i}.ffn.{part}.weight", f"layer{i}.ffn.{part}.bias"]
        names += [f"layer{i}.ffn.norm.weight", f"layer{i}.ffn.norm.bias"]
    for head in HEAD_SIZES:
        names += [
            f"head.{head}.dense.weight",
            f"head.{head}.dense.bias",
            f"head.{head}.out.weight",
            f"head.{head}.out.bias",
        ]
    return names


def _layer_norm(x: np.ndarray, weight: np.ndarray, bias: np.ndarray, eps: float) -> np.ndarray:
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mean) / np.sqrt(var + eps) * weight + bias


def _gelu(x: np.ndarray) -> np.ndarray:
    return 0.5 * x * (1.0 + erf(x / np.sqrt(2.0)))


def _softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


class EncoderModel:
    """Holds float64 weights and runs the three-head forward pass."""

    def __init__(self, arch: Architecture, weights: dict[str, np.ndarray]):
        self.arch = arch
        self.w = {name: np.asarray(tensor, dtype=np.float64) for name, tensor in weights.items()}

    def forward(
        self, ids: np.ndarray, mask: np.ndarray, segments: np.ndarray
    ) -> dict[str, np.ndarray]:
        """Run a padded batch; returns probs3 (B,3), prob_bin (B,), regression (B,)."""
        arch, w = self.arch, self.w
        batch, seq = ids.shape
        positions = np.arange(seq)

        x = (
            w["embeddings.word"][ids]
            + w["embeddings.position"][positions][None, :, :]
            + w["embeddings.token_type"][segments]
        )
        x = _layer_norm(x, w["embeddings.norm.weight"], w["embeddings.norm.bias"], arch.layer_norm_eps)

        head_dim = arch.hidden_size // arch.num_heads
        att_bias = (1.0 - mask.astype(np.float64))[:, None, None, :] * -1e9

        for i in range(arch.num_layers):
            p = f"layer{i}"
            q = x @ w[f"{p}.attention.query.weight"] + w[f"{p}.attention.query.bias"]
            k = x @ w[f"{p}.attention.key.weight"] + w[f"{p}.attention.key.bias"]
            v = x @ w[f"{p}.attention.value.weight"] + w[f"{p}.attention.value.bias"]

            def heads(t: np.ndarray) -> np.ndarray:
                return t.reshape(batch, seq, arch.num_heads, head_dim).transpose(0, 2, 1, 3)

            scores = heads(q) @ heads(k).transpose(0, 1, 3, 2) / np.sqrt(head_dim)
            attn = _softmax(scores + att_bias)
            mixed = (attn @ heads(v)).transpose(0, 2, 1, 3).reshape(batch, seq, arch.hidden_size)
            attn_out = mixed @ w[f"{p}.attention.output.weight"] + w[f"{p}.attention.output.bias"]
            x = _layer_norm(
                x + attn_out, w[f"{p}.attention.norm.weight"], w[f"{p}.attention.norm.bias"],
                arch.layer_norm_eps,
            )

            inner = _gelu(x @ w[f"{p}.ffn.intermediate.weight"] + w[f"{p}.ffn.intermediate.bias"])
            ffn_out = inner @ w[f"{p}.ffn.output.weight"] + w[f"{p}.ffn.output.bias"]
            x = _layer_norm(
                x + ffn_out, w[f"{p}.ffn.norm.weight"], w[f"{p}.ffn.norm.bias"],
                arch.layer_norm_eps,
            )

        pooled = x[:, 0, :]

        def head_logits(name: str) -> np.ndarray:
            hidden = np.tanh(pooled @ w[f"head.{name}.dense.weight"] + w[f"head.{name}.dense.bias"])
            return hidden @ w[f"head.{name}.out.weight"] + w[f"head.{name}.out.bias"]

        probs3 = _softmax(head_logits("nli3"))
        prob_bin = _softmax(head_logits("binary"))[:, 1]
        regression = 1.0 / (1.0 + np.exp(-head_logits("regression")[:, 0]))
        return {"probs3": probs3, "prob_bin": prob_bin, "regression": regression}


def read_metadata(path: Path) -> dict:
    with path.open(encoding="utf-8") as fh:
        return json.load(fh)


def validate_model_files(meta: dict, weights: dict[str, np.ndarray]) -> Architecture:
    """Check metadata keys, tensor presence and shapes; raises ValueError."""
    version = meta.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {version!r}, expected {FORMAT_VERSION}")
    arch_raw = meta.get("architecture")
    if not isinstance(arch_raw, dict):
        raise ValueError("metadata is missing the architecture block")
    missing_keys = [key for key in _ARCH_KEYS if key not in arch_raw]
    if missing_keys:
        raise ValueError(f"architecture block is missing {', '.join(missing_keys)}")
    arch = Architecture(**{key: arch_raw[key] for key in _ARCH_KEYS})

    if not isinstance(meta.get("max_input_tokens"), int) or meta["max_input_tokens"] < 8:
        raise ValueError("max_input_tokens must be an integer >= 8")
    if not isinstance(meta.get("vocab_file"), str):
        raise ValueError("metadata is missing vocab_file")

    for head in HEAD_SIZES:
        if f"head.{head}.out.weight" not in weights:
            raise ValueError(f"serialized model is missing head {head!r}")
    missing = [name for name in tensor_names(arch) if name not in weights]
    if missing:
        raise ValueError(f"weights archive is missing tensors: {', '.join(missing[:5])}")

    expected_shapes = {
        "embeddings.word": (arch.vocab_size, arch.hidden_size),
        "embeddings.position": (arch.max_position_embeddings, arch.hidden_size),
        "embeddings.token_type": (arch.type_vocab_size, arch.hidden_size),
    }
    for head, size in HEAD_SIZES.items():
        expected_shapes[f"head.{head}.out.weight"] = (arch.hidden_size, size)
    for name, shape in expected_shapes.items():
        if weights[name].shape != shape:
            raise ValueError(
                f"tensor {name} has shape {weights[name].shape}, expected {shape}"
            )
    if arch.hidden_size % arch.num_heads != 0:
        raise ValueError("hidden_size must be divisible by num_heads")
    return arch
