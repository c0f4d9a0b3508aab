"""The consistency score: chunk the context, split the claim, score every
(claim sentence, context chunk) pair, take per-sentence maxima, average.

Each claim sentence is scored by the 3-way head's aligned-class probability
against every chunk; the per-sentence maximum (lowest chunk index on ties)
captures the strongest support the context offers, and the final score is
the arithmetic mean of those maxima. Aggregation runs in double precision
with an exactly-rounded sum, so identical inputs reproduce bit-identical
reports with the reference backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from alignru.backend import Backend
from alignru.errors import BatchItemError, EmptyClaim, EmptyContext
from alignru.segmentation import SentenceSpan, TokenBudget, chunk_context, split_sentences


@dataclass(frozen=True, slots=True)
class SentenceScore:
    sentence: SentenceSpan
    best_chunk_index: int
    best_prob: float


@dataclass(frozen=True, slots=True)
class ScoreReport:
    score: float
    per_sentence: tuple[SentenceScore, ...]
    n_chunks: int
    n_claim_sentences: int

    def to_dict(self) -> dict:
        """Stable machine-readable form used by the CLI json/tsv writers."""
        return {
            "score": self.score,
            "n_chunks": self.n_chunks,
            "n_claim_sentences": self.n_claim_sentences,
            "per_sentence": [
                {
                    "sentence": {
                        "text": s.sentence.text,
                        "start": s.sentence.start,
                        "end": s.sentence.end,
                    },
                    "best_chunk_index": s.best_chunk_index,
                    "best_prob": s.best_prob,
                }
                for s in self.per_sentence
            ],
        }


def aggregate_grid(grid: Sequence[Sequence[float]]) -> tuple[float, list[tuple[int, float]]]:
    """Max over each row (lowest index wins ties), then mean of the maxima.

    ``grid[i][j]`` is the aligned probability of claim sentence ``i``
    against chunk ``j``. Kept separate from the text pipeline so the
    aggregation can be tested against a brute-force oracle on raw numbers.
    """
    best: list[tuple[int, float]] = []
    for row in grid:
        best_idx = 0
        best_prob = row[0]
        for j in range(1, len(row)):
            if row[j] > best_prob:
                best_prob = row[j]
                best_idx = j
        best.append((best_idx, best_prob))
    score = math.fsum(prob for _, prob in best) / len(best)
    return score, best


def align_score(
    context: str,
    claim: str,
    backend: Backend,
    budget: TokenBudget | None = None,
) -> ScoreReport:
    """Score ``claim`` against ``context``; see the module docstring."""
    budget = budget or TokenBudget()
    if not context.strip():
        raise EmptyContext("context is empty after trimming whitespace")
    if not claim.strip():
        raise EmptyClaim("claim is empty after trimming whitespace")

    context_sentences = split_sentences(context)
    if not context_sentences:
        raise EmptyContext("context contains no sentences")
    claim_sentences = split_sentences(claim)
    if not claim_sentences:
        raise EmptyClaim("claim contains no sentences")
    if not any(ch.isalnum() for span in claim_sentences for ch in span.text):
        # pure punctuation: erroring beats contributing silent zeros to
        # dataset-level means
        raise EmptyClaim("claim contains no word characters")

    chunks = chunk_context(context_sentences, budget, backend.tokenizer)
    chunk_texts = [context[chunk.start : chunk.end] for chunk in chunks]

    pairs = [
        (chunk_text, sentence.text)
        for sentence in claim_sentences
        for chunk_text in chunk_texts
    ]
    outputs = backend.predict_batch(pairs)

    n_chunks = len(chunks)
    grid = [
        [outputs[i * n_chunks + j].p_aligned for j in range(n_chunks)]
        for i in range(len(claim_sentences))
    ]
    score, best = aggregate_grid(grid)
    per_sentence = tuple(
        SentenceScore(sentence=sent, best_chunk_index=idx, best_prob=prob)
        for sent, (idx, prob) in zip(claim_sentences, best)
    )
    return ScoreReport(
        score=score,
        per_sentence=per_sentence,
        n_chunks=n_chunks,
        n_claim_sentences=len(claim_sentences),
    )


def align_score_batch(
    pairs: Sequence[tuple[str, str]],
    backend: Backend,
    budget: TokenBudget | None = None,
) -> list[ScoreReport]:
    """Score many (context, claim) pairs; order preserved, failures tagged
    with their input index."""
    reports = []
    for index, (context, claim) in enumerate(pairs):
        try:
            reports.append(align_score(context, claim, backend, budget))
        except Exception as exc:
            raise BatchItemError(index, exc) from exc
    return reports
