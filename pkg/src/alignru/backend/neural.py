"""Backend that loads and runs a serialized alignment model.

Accepts either the model directory or the path of the JSON sidecar; the
weights archive and vocabulary file are resolved next to the sidecar.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from alignru.backend import Backend, HeadOutputs
from alignru.backend.encoder import EncoderModel, read_metadata, validate_model_files
from alignru.errors import InferenceFailure, ModelLoadFailure
from alignru.tokenization import WordPieceTokenizer


def _resolve_sidecar(path: Path) -> Path:
    if path.is_dir():
        sidecar = path / "model.json"
        if not sidecar.is_file():
            raise ModelLoadFailure(f"no model.json inside directory {path}")
        return sidecar
    if path.suffix == ".json" and path.is_file():
        return path
    raise ModelLoadFailure(f"model path {path} is neither a model directory nor a model.json")


class NeuralBackend(Backend):
    kind = "neural"

    def __init__(
        self,
        model: EncoderModel,
        tokenizer: WordPieceTokenizer,
        max_input_tokens: int,
        batch_size: int = 32,
        model_hash: str | None = None,
    ):
        self.model = model
        self._tokenizer = tokenizer
        self.max_input_tokens = max_input_tokens
        self.batch_size = batch_size
        self.model_hash = model_hash

    @property
    def tokenizer(self) -> WordPieceTokenizer:
        return self._tokenizer

    @classmethod
    def load(cls, path: str | Path, batch_size: int = 32) -> "NeuralBackend":
        path = Path(path)
        if not path.exists():
            raise ModelLoadFailure(f"model path does not exist: {path}")
        sidecar = _resolve_sidecar(path)
        try:
            meta = read_metadata(sidecar)
        except ValueError as exc:
            raise ModelLoadFailure(f"unreadable metadata {sidecar}: {exc}") from exc

        weights_file = sidecar.parent / meta.get("weights_file", "model.npz")
        if not weights_file.is_file():
            raise ModelLoadFailure(f"weights archive not found: {weights_file}")
        try:
            with np.load(weights_file) as archive:
                weights = {name: archive[name] for name in archive.files}
        except (OSError, ValueError) as exc:
            raise ModelLoadFailure(f"unreadable weights archive {weights_file}: {exc}") from exc

        try:
            arch = validate_model_files(meta, weights)
        except ValueError as exc:
            raise ModelLoadFailure(str(exc)) from exc

        vocab_file = sidecar.parent / meta["vocab_file"]
        tokenizer = WordPieceTokenizer.from_file(vocab_file, lowercase=bool(meta.get("lowercase", False)))
        top_id = max(tokenizer.vocab.values())
        if top_id >= arch.vocab_size:
            raise ModelLoadFailure(
                f"vocabulary mismatch: vocabulary ids reach {top_id} but the model "
                f"embeds only {arch.vocab_size} tokens"
            )

        model_hash = hashlib.sha256(weights_file.read_bytes()).hexdigest()
        return cls(
            model=EncoderModel(arch, weights),
            tokenizer=tokenizer,
            max_input_tokens=int(meta["max_input_tokens"]),
            batch_size=batch_size,
            model_hash=model_hash,
        )

    def _predict_validated(self, pairs: list[tuple[str, str]]) -> list[HeadOutputs]:
        if not pairs:
            return []
        encoded = [
            self._tokenizer.encode_pair(context, claim, self.max_input_tokens)
            for context, claim in pairs
        ]
        width = max(len(ids) for ids, _, _ in encoded)
        pad = self._tokenizer.pad_id
        ids = np.full((len(encoded), width), pad, dtype=np.int64)
        mask = np.zeros((len(encoded), width), dtype=np.int64)
        segments = np.zeros((len(encoded), width), dtype=np.int64)
        for row, (tok_ids, tok_mask, tok_seg) in enumerate(encoded):
            ids[row, : len(tok_ids)] = tok_ids
            mask[row, : len(tok_mask)] = tok_mask
            segments[row, : len(tok_seg)] = tok_seg

        try:
            out = self.model.forward(ids, mask, segments)
        except (ValueError, FloatingPointError, IndexError) as exc:
            raise InferenceFailure(f"model forward pass failed: {exc}", cause=exc) from exc

        results = []
        for row in range(len(encoded)):
            p3 = out["probs3"][row]
            results.append(
                HeadOutputs(
                    probs3=(float(p3[0]), float(p3[1]), float(p3[2])),
                    prob_bin=float(out["prob_bin"][row]),
                    regression=float(out["regression"][row]),
                )
            )
        return results
