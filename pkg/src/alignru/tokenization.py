"""Tokenizers used for budget counting and neural-model input encoding.

Two flavours: a whitespace tokenizer backing the reference backend, and a
WordPiece tokenizer reading the plain-text vocabulary file shipped with a
serialized model (one token per line, ``##`` marking continuation pieces).
"""

from __future__ import annotations

import unicodedata
from pathlib import Path

from alignru.errors import ModelLoadFailure
from alignru.kernels import count_ws_tokens

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"

_MAX_CHARS_PER_WORD = 100


class WhitespaceTokenizer:
    """Counts and yields whitespace-separated tokens."""

    def count(self, text: str) -> int:
        return count_ws_tokens(text)

    def tokens(self, text: str) -> list[str]:
        return text.split()


def _is_punctuation(ch: str) -> bool:
    cp = ord(ch)
    if (33 <= cp <= 47) or (58 <= cp <= 64) or (91 <= cp <= 96) or (123 <= cp <= 126):
        return True
    return unicodedata.category(ch).startswith("P")


def _split_words(text: str, lowercase: bool) -> list[str]:
    """Whitespace split, then split punctuation into single-char tokens."""
    if lowercase:
        text = text.lower()
    words: list[str] = []
    for blob in text.split():
        run: list[str] = []
        for ch in blob:
            if _is_punctuation(ch):
                if run:
                    words.append("".join(run))
                    run = []
                words.append(ch)
            else:
                run.append(ch)
        if run:
            words.append("".join(run))
    return words


def load_vocab(path: str | Path) -> dict[str, int]:
    """Read a one-token-per-line vocabulary file into a token -> id map."""
    path = Path(path)
    if not path.is_file():
        raise ModelLoadFailure(f"vocabulary file not found: {path}")
    vocab: dict[str, int] = {}
    with path.open(encoding="utf-8") as fh:
        for idx, line in enumerate(fh):
            token = line.rstrip("\n")
            if token and token not in vocab:
                vocab[token] = idx
    for required in (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN):
        if required not in vocab:
            raise ModelLoadFailure(f"vocabulary {path} is missing {required}")
    return vocab


class WordPieceTokenizer:
    """Greedy longest-match-first subword tokenizer over a fixed vocabulary."""

    def __init__(self, vocab: dict[str, int], lowercase: bool = False):
        self.vocab = vocab
        self.lowercase = lowercase
        self.pad_id = vocab[PAD_TOKEN]
        self.unk_id = vocab[UNK_TOKEN]
        self.cls_id = vocab[CLS_TOKEN]
        self.sep_id = vocab[SEP_TOKEN]

    @classmethod
    def from_file(cls, path: str | Path, lowercase: bool = False) -> "WordPieceTokenizer":
        return cls(load_vocab(path), lowercase=lowercase)

    def _wordpiece(self, word: str) -> list[str]:
        if len(word) > _MAX_CHARS_PER_WORD:
            return [UNK_TOKEN]
        pieces: list[str] = []
        pos = 0
        while pos < len(word):
            end = len(word)
            piece = None
            while end > pos:
                candidate = word[pos:end]
                if pos > 0:
                    candidate = "##" + candidate
                if candidate in self.vocab:
                    piece = candidate
                    break
                end -= 1
            if piece is None:
                return [UNK_TOKEN]
            pieces.append(piece)
            pos = end
        return pieces

    def tokenize(self, text: str) -> list[str]:
        tokens: list[str] = []
        for word in _split_words(text, self.lowercase):
            tokens.extend(self._wordpiece(word))
        return tokens

    def count(self, text: str) -> int:
        return len(self.tokenize(text))

    def token_ids(self, text: str) -> list[int]:
        return [self.vocab.get(tok, self.unk_id) for tok in self.tokenize(text)]

    def encode_pair(
        self, context: str, claim: str, max_len: int
    ) -> tuple[list[int], list[int], list[int]]:
        """Encode ``[CLS] context [SEP] claim [SEP]`` with segment ids 0/1.

        When the pair exceeds ``max_len`` the context side is truncated
        first (keeping its head); the claim is cut only if it cannot fit
        even with a single context token.
        """
        ctx_ids = self.token_ids(context)
        claim_ids = self.token_ids(claim)
        room = max_len - 3
        if len(ctx_ids) + len(claim_ids) > room:
            ctx_keep = max(1, room - len(claim_ids))
            ctx_ids = ctx_ids[:ctx_keep]
            claim_ids = claim_ids[: max(1, room - ctx_keep)]
        ids = [self.cls_id, *ctx_ids, self.sep_id, *claim_ids, self.sep_id]
        segments = [0] * (len(ctx_ids) + 2) + [1] * (len(claim_ids) + 1)
        mask = [1] * len(ids)
        return ids, mask, segments
