"""Shared test helpers: random Russian/ASCII text generation, a stub
backend with injectable probabilities, and a toy serialized model."""

from __future__ import annotations

import json
import random

import numpy as np
import pytest

from alignru.backend import Backend, HeadOutputs
from alignru.backend.encoder import Architecture, tensor_names
from alignru.tokenization import WhitespaceTokenizer

CYRILLIC_WORDS = [
    "мама", "папа", "дом", "кошка", "собака", "москва", "город", "жил",
    "быстро", "ярко", "солнце", "светит", "утро", "вечер", "книга", "стол",
]
LATIN_WORDS = ["alpha", "beta", "gamma", "delta", "probe", "value", "unit"]
ABBREVIATIONS = ["г.", "т.е.", "т.д.", "др.", "им.", "ул."]
TERMINALS = [".", "!", "?", "…"]


def random_sentence(rng: random.Random) -> str:
    words = []
    for i in range(rng.randint(1, 10)):
        roll = rng.random()
        if roll < 0.55:
            word = rng.choice(CYRILLIC_WORDS)
        elif roll < 0.75:
            word = rng.choice(LATIN_WORDS)
        elif roll < 0.85:
            word = str(rng.randint(0, 9999))
        else:
            word = rng.choice(ABBREVIATIONS)
        if i == 0 and word[0].isalpha():
            word = word[0].upper() + word[1:]
        words.append(word)
    sentence = " ".join(words)
    return sentence + rng.choice(TERMINALS)


def random_text(rng: random.Random, max_sentences: int = 12) -> str:
    parts = []
    for _ in range(rng.randint(1, max_sentences)):
        parts.append(random_sentence(rng))
        parts.append(rng.choice([" ", "  ", "\n", " \n ", "\t"]))
    if rng.random() < 0.3:
        parts.insert(0, rng.choice([" ", "\n\n", "\t "]))
    return "".join(parts)


class StubBackend(Backend):
    """Backend returning injected aligned probabilities per (context, claim)."""

    kind = "stub"
    max_input_tokens = None
    model_hash = None

    def __init__(self, table: dict[tuple[str, str], float], batch_size: int = 8):
        self.table = table
        self.batch_size = batch_size
        self._tokenizer = WhitespaceTokenizer()

    @property
    def tokenizer(self) -> WhitespaceTokenizer:
        return self._tokenizer

    def _predict_validated(self, pairs):
        outputs = []
        for context, claim in pairs:
            p = self.table[(context, claim)]
            outputs.append(HeadOutputs(probs3=(p, 1.0 - p, 0.0), prob_bin=p, regression=p))
        return outputs


TOY_VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]",
    "мама", "папа", "дом", "кошка", "мыла", "раму", "##а", "##ы", "а", "и",
    "alpha", "beta", "un", "##it", ".", ",", "!", "?",
]


def write_toy_model(tmp_path, seed: int = 7, vocab: list[str] | None = None,
                    max_input_tokens: int = 64):
    """Write a small random interchange-format model; returns its directory."""
    vocab = vocab if vocab is not None else TOY_VOCAB
    arch = Architecture(
        vocab_size=len(vocab),
        hidden_size=16,
        num_layers=2,
        num_heads=2,
        intermediate_size=32,
        max_position_embeddings=max_input_tokens,
        type_vocab_size=2,
        layer_norm_eps=1e-12,
    )
    rng = np.random.default_rng(seed)
    weights = {}
    for name in tensor_names(arch):
        shape = _tensor_shape(name, arch)
        if name.endswith(".bias") or name.endswith("norm.weight"):
            tensor = np.zeros(shape, dtype=np.float32)
            if name.endswith("norm.weight"):
                tensor += 1.0
        else:
            tensor = rng.normal(0.0, 0.05, size=shape).astype(np.float32)
        weights[name] = tensor

    model_dir = tmp_path / "toy_model"
    model_dir.mkdir(exist_ok=True)
    np.savez(model_dir / "model.npz", **weights)
    (model_dir / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    meta = {
        "format_version": 1,
        "max_input_tokens": max_input_tokens,
        "vocab_file": "vocab.txt",
        "lowercase": False,
        "architecture": {
            "vocab_size": arch.vocab_size,
            "hidden_size": arch.hidden_size,
            "num_layers": arch.num_layers,
            "num_heads": arch.num_heads,
            "intermediate_size": arch.intermediate_size,
            "max_position_embeddings": arch.max_position_embeddings,
            "type_vocab_size": arch.type_vocab_size,
            "layer_norm_eps": arch.layer_norm_eps,
        },
        "outputs": ["probs3", "prob_bin", "regression"],
    }
    (model_dir / "model.json").write_text(json.dumps(meta, indent=2), encoding="utf-8")
    return model_dir


def _tensor_shape(name: str, arch: Architecture) -> tuple[int, ...]:
    h, inter = arch.hidden_size, arch.intermediate_size
    if name == "embeddings.word":
        return (arch.vocab_size, h)
    if name == "embeddings.position":
        return (arch.max_position_embeddings, h)
    if name == "embeddings.token_type":
        return (arch.type_vocab_size, h)
    if ".ffn.intermediate.weight" in name:
        return (h, inter)
    if ".ffn.intermediate.bias" in name:
        return (inter,)
    if ".ffn.output.weight" in name:
        return (inter, h)
    if ".out.weight" in name:
        head = name.split(".")[1]
        return (h, {"nli3": 3, "binary": 2, "regression": 1}[head])
    if ".out.bias" in name:
        head = name.split(".")[1]
        return ({"nli3": 3, "binary": 2, "regression": 1}[head],)
    if name.endswith(".weight") and "norm" not in name:
        return (h, h)
    return (h,)


@pytest.fixture
def toy_model_dir(tmp_path):
    return write_toy_model(tmp_path)
