"""WordPiece vocabulary handling on the training side.

The vocabulary file format (one token per line, ``##`` continuations,
``[PAD]/[UNK]/[CLS]/[SEP]`` specials) and the pair encoding
(``[CLS] context [SEP] claim [SEP]``, segment ids 0/1, context truncated
first) are the interchange contract with the inference engine; the export
parity tests fail if the two sides ever disagree.
"""

from __future__ import annotations

import unicodedata
from pathlib import Path

PAD, UNK, CLS, SEP = "[PAD]", "[UNK]", "[CLS]", "[SEP]"
SPECIALS = (PAD, UNK, CLS, SEP)
_MAX_CHARS_PER_WORD = 100


def build_vocab(words: list[str]) -> list[str]:
    """Specials followed by unique words in first-seen order."""
    vocab = list(SPECIALS)
    seen = set(vocab)
    for word in words:
        if word not in seen:
            vocab.append(word)
            seen.add(word)
    return vocab


def write_vocab(vocab: list[str], path: str | Path) -> None:
    Path(path).write_text("\n".join(vocab) + "\n", encoding="utf-8")


def read_vocab(path: str | Path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _is_punctuation(ch: str) -> bool:
    cp = ord(ch)
    if (33 <= cp <= 47) or (58 <= cp <= 64) or (91 <= cp <= 96) or (123 <= cp <= 126):
        return True
    return unicodedata.category(ch).startswith("P")


class WordPieceEncoder:
    """Greedy longest-match-first subword encoder over a fixed vocabulary."""

    def __init__(self, vocab: list[str], lowercase: bool = False):
        self.vocab = vocab
        self.index = {token: i for i, token in enumerate(vocab) if token}
        self.lowercase = lowercase
        for token in SPECIALS:
            if token not in self.index:
                raise ValueError(f"vocabulary is missing {token}")
        self.pad_id = self.index[PAD]
        self.unk_id = self.index[UNK]
        self.cls_id = self.index[CLS]
        self.sep_id = self.index[SEP]

    def _words(self, text: str) -> list[str]:
        if self.lowercase:
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

    def _wordpiece(self, word: str) -> list[int]:
        if len(word) > _MAX_CHARS_PER_WORD:
            return [self.unk_id]
        ids: list[int] = []
        pos = 0
        while pos < len(word):
            end = len(word)
            match = None
            while end > pos:
                candidate = word[pos:end]
                if pos > 0:
                    candidate = "##" + candidate
                if candidate in self.index:
                    match = self.index[candidate]
                    break
                end -= 1
            if match is None:
                return [self.unk_id]
            ids.append(match)
            pos = end
        return ids

    def token_ids(self, text: str) -> list[int]:
        ids: list[int] = []
        for word in self._words(text):
            ids.extend(self._wordpiece(word))
        return ids

    def encode_pair(
        self, context: str, claim: str, max_len: int
    ) -> tuple[list[int], list[int], list[int]]:
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
