"""Sentence splitting and sentence-aligned context chunking.

Splitting is rule-based: a sentence ends at terminal punctuation
(``. ! ? …``) followed by whitespace and then an uppercase letter or a
digit, unless the dot closes a known abbreviation. Chunking greedily packs
whole sentences under a token budget, re-including the tail of the previous
chunk as overlap where the budget allows.

All functions are pure and safe to call from multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

from alignru.errors import EmptyContext, TokenizerNotLoaded
from alignru.kernels import boundary_candidates

# Common Russian abbreviations whose trailing dot never ends a sentence.
# Entries must contain no whitespace and end with a dot; matching is
# case-insensitive and requires a non-alphanumeric character (or start of
# text) before the abbreviation.
DEFAULT_ABBREVIATIONS: tuple[str, ...] = (
    "г.",
    "гг.",
    "т.е.",
    "т.д.",
    "т.п.",
    "др.",
    "им.",
    "ул.",
    "стр.",
    "см.",
    "напр.",
    "и.о.",
)


@dataclass(frozen=True, slots=True)
class SentenceSpan:
    """A sentence with half-open offsets into the source string."""

    text: str
    start: int
    end: int


@dataclass(frozen=True, slots=True)
class Chunk:
    """A contiguous run of sentences whose combined token count was packed
    under a budget (a single oversized sentence may exceed it)."""

    sentences: tuple[SentenceSpan, ...]
    token_count: int

    @property
    def start(self) -> int:
        return self.sentences[0].start

    @property
    def end(self) -> int:
        return self.sentences[-1].end


@dataclass(frozen=True, slots=True)
class TokenBudget:
    """Chunking parameters: token cap per chunk and sentence overlap."""

    budget: int = 350
    overlap_sentences: int = 1

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.overlap_sentences < 0:
            raise ValueError(
                f"overlap_sentences must be >= 0, got {self.overlap_sentences}"
            )


class Tokenizer(Protocol):
    """Anything that can count its own tokens for a piece of text."""

    def count(self, text: str) -> int: ...


def _validate_abbreviations(abbreviations: Sequence[str]) -> tuple[str, ...]:
    cleaned = []
    for abbr in abbreviations:
        low = abbr.lower()
        if not low.endswith("."):
            raise ValueError(f"abbreviation {abbr!r} must end with a dot")
        # Whitespace inside an entry would break split idempotence: spans
        # never contain the gap before their first character.
        if any(c.isspace() for c in low):
            raise ValueError(f"abbreviation {abbr!r} must not contain whitespace")
        cleaned.append(low)
    return tuple(cleaned)


_DEFAULT_CLEAN = _validate_abbreviations(DEFAULT_ABBREVIATIONS)


def _blocked_by_abbreviation(text: str, dot: int, abbreviations: tuple[str, ...]) -> bool:
    """True when the dot at ``dot`` closes a stop-listed abbreviation."""
    end = dot + 1
    for abbr in abbreviations:
        la = len(abbr)
        if end < la:
            continue
        if text[end - la : end].lower() != abbr:
            continue
        prev = end - la - 1
        if prev >= 0 and text[prev].isalnum():
            continue
        return True
    return False


def _skip_ws(text: str, pos: int) -> int:
    n = len(text)
    while pos < n and text[pos].isspace():
        pos += 1
    return pos


def split_sentences(
    text: str, abbreviations: Sequence[str] | None = None
) -> list[SentenceSpan]:
    """Split ``text`` into sentence spans.

    Every non-whitespace character lands in exactly one span; spans carry
    their source offsets and never start or end with whitespace. Empty or
    whitespace-only input yields an empty list.
    """
    if abbreviations is None:
        abbrevs = _DEFAULT_CLEAN
    else:
        abbrevs = _validate_abbreviations(abbreviations)

    spans: list[SentenceSpan] = []
    cur = _skip_ws(text, 0)
    for i in boundary_candidates(text):
        if text[i] == "." and _blocked_by_abbreviation(text, i, abbrevs):
            continue
        end = i + 1
        if end <= cur:
            continue
        spans.append(SentenceSpan(text[cur:end], cur, end))
        cur = _skip_ws(text, end)

    n = len(text)
    if cur < n:
        last = n
        while last > cur and text[last - 1].isspace():
            last -= 1
        if last > cur:
            spans.append(SentenceSpan(text[cur:last], cur, last))
    return spans


def count_tokens(text: str, tokenizer: Tokenizer | None) -> int:
    """Count tokens of ``text`` under ``tokenizer``; empty text counts 0."""
    if tokenizer is None:
        raise TokenizerNotLoaded("no tokenizer supplied for token counting")
    return tokenizer.count(text)


def chunk_context(
    sentences: Sequence[SentenceSpan],
    budget: TokenBudget,
    tokenizer: Tokenizer,
) -> list[Chunk]:
    """Pack sentences into overlapping chunks under ``budget``.

    Greedy fill: starting from the first uncovered sentence, sentences are
    appended while the running token count stays within the budget. The
    next chunk re-includes up to ``overlap_sentences`` trailing sentences
    of its predecessor, shrinking the overlap (possibly to zero) when
    re-inclusion together with the next uncovered sentence would break the
    budget. A single sentence longer than the budget becomes its own chunk.
    """
    if not sentences:
        raise EmptyContext("cannot chunk an empty sentence list")
    counts = [count_tokens(span.text, tokenizer) for span in sentences]
    cap = budget.budget
    n = len(sentences)

    chunks: list[Chunk] = []
    uncovered = 0
    while uncovered < n:
        overlap = min(budget.overlap_sentences, uncovered)
        while overlap > 0 and sum(counts[uncovered - overlap : uncovered + 1]) > cap:
            overlap -= 1
        start = uncovered - overlap
        total = sum(counts[start : uncovered + 1])
        end = uncovered + 1
        while end < n and total + counts[end] <= cap:
            total += counts[end]
            end += 1
        chunks.append(Chunk(tuple(sentences[start:end]), total))
        uncovered = end
    return chunks
