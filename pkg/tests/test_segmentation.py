"""Sentence splitting and chunking: frozen examples, invariants, and a
hand-simulated greedy oracle."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alignru.errors import EmptyContext, TokenizerNotLoaded
from alignru.segmentation import (
    Chunk,
    SentenceSpan,
    TokenBudget,
    chunk_context,
    count_tokens,
    split_sentences,
)
from alignru.tokenization import WhitespaceTokenizer

from conftest import random_text

WS = WhitespaceTokenizer()


class TableTokenizer:
    """Counts looked up per exact text; for controlled chunking scenarios."""

    def __init__(self, table: dict[str, int]):
        self.table = table

    def count(self, text: str) -> int:
        return self.table[text]


def spans_of(counts: list[int]) -> tuple[list[SentenceSpan], TableTokenizer]:
    spans = []
    pos = 0
    table = {}
    for i, count in enumerate(counts):
        text = f"s{i}"
        spans.append(SentenceSpan(text=text, start=pos, end=pos + len(text)))
        table[text] = count
        pos += len(text) + 1
    return spans, TableTokenizer(table)


# ---------------------------------------------------------------- splitting


def test_empty_text_yields_no_spans():
    assert split_sentences("") == []
    assert split_sentences("   \n\t ") == []


def test_two_sentence_russian_example():
    spans = split_sentences("Привет. Как дела?")
    assert [s.text for s in spans] == ["Привет.", "Как дела?"]
    assert (spans[0].start, spans[0].end) == (0, 7)
    assert spans[1].text == "Привет. Как дела?"[spans[1].start : spans[1].end]


def test_abbreviation_blocks_split():
    spans = split_sentences("Он жил в г. Москве.")
    assert len(spans) == 1
    assert spans[0].text == "Он жил в г. Москве."


@pytest.mark.parametrize(
    "text,expected",
    [
        ("Это т.е. Пример.", 1),  # stop-listed abbreviation
        ("Он смог. Потом ушел.", 2),  # 'г.' suffix inside a word still splits
        ("Один! Два? Три… Четыре.", 4),
        ("Число 5. 7 продолжает ряд.", 2),  # digit can open a sentence
        ("Нет разрыва. без заглавной", 1),  # lowercase continuation
        ("Многоточие... Вот так.", 2),
    ],
)
def test_boundary_rule_cases(text, expected):
    assert len(split_sentences(text)) == expected


def test_custom_abbreviations():
    text = "Проспект им. Ленина тянется на км. Вперед."
    default = split_sentences(text)
    custom = split_sentences(text, abbreviations=["им.", "км."])
    assert len(default) == 2
    assert len(custom) == 1


def test_abbreviation_validation():
    with pytest.raises(ValueError):
        split_sentences("x", abbreviations=["безточки"])
    with pytest.raises(ValueError):
        split_sentences("x", abbreviations=["с пробелом."])


def _assert_span_invariants(text: str, spans: list[SentenceSpan]) -> None:
    prev_end = -1
    for span in spans:
        assert span.start < span.end
        assert span.start >= prev_end
        assert span.text == text[span.start : span.end]
        assert not span.text[0].isspace() and not span.text[-1].isspace()
        prev_end = span.end
    # every non-whitespace character is covered exactly once
    covered = [False] * len(text)
    for span in spans:
        for i in range(span.start, span.end):
            assert not covered[i]
            covered[i] = True
    for i, ch in enumerate(text):
        if not ch.isspace():
            assert covered[i], f"char {i} ({ch!r}) not covered"


def test_span_invariants_on_random_texts():
    rng = random.Random(1234)
    for _ in range(300):
        text = random_text(rng)
        _assert_span_invariants(text, split_sentences(text))


@given(st.text(max_size=400))
@settings(max_examples=300, deadline=None)
def test_span_invariants_hold_for_arbitrary_text(text):
    _assert_span_invariants(text, split_sentences(text))


def test_split_is_idempotent_on_own_outputs():
    rng = random.Random(99)
    for _ in range(200):
        text = random_text(rng)
        for span in split_sentences(text):
            again = split_sentences(span.text)
            assert len(again) == 1
            assert again[0].text == span.text


@given(st.text(max_size=200))
@settings(max_examples=200, deadline=None)
def test_split_idempotent_for_arbitrary_text(text):
    for span in split_sentences(text):
        again = split_sentences(span.text)
        assert [s.text for s in again] == [span.text]


# ---------------------------------------------------------------- counting


def test_count_tokens_basics():
    assert count_tokens("", WS) == 0
    assert count_tokens("a b c", WS) == 3


@given(st.text(max_size=300))
@settings(max_examples=200, deadline=None)
def test_whitespace_count_matches_split(text):
    assert count_tokens(text, WS) == len(text.split())


def test_whitespace_count_additive_under_concatenation():
    rng = random.Random(5)
    for _ in range(50):
        a, b = random_text(rng), random_text(rng)
        assert count_tokens(a + " " + b, WS) == count_tokens(a, WS) + count_tokens(b, WS)


def test_count_tokens_requires_tokenizer():
    with pytest.raises(TokenizerNotLoaded):
        count_tokens("x", None)


# ---------------------------------------------------------------- chunking


def test_single_small_sentence_single_chunk():
    spans, tok = spans_of([10])
    chunks = chunk_context(spans, TokenBudget(budget=350), tok)
    assert len(chunks) == 1
    assert chunks[0].sentences == tuple(spans)
    assert chunks[0].token_count == 10


def test_overlap_suppressed_when_budget_would_break():
    # three 200-token sentences under a 350 budget: overlap re-inclusion
    # always exceeds the budget, so each sentence chunks alone
    spans, tok = spans_of([200, 200, 200])
    chunks = chunk_context(spans, TokenBudget(budget=350, overlap_sentences=1), tok)
    assert [[s.text for s in c.sentences] for c in chunks] == [["s0"], ["s1"], ["s2"]]
    assert [c.token_count for c in chunks] == [200, 200, 200]


def test_oversized_sentence_is_exempt():
    spans, tok = spans_of([500])
    chunks = chunk_context(spans, TokenBudget(budget=350), tok)
    assert len(chunks) == 1
    assert chunks[0].token_count == 500


def test_overlap_present_when_budget_allows():
    spans, tok = spans_of([100, 100, 100, 100])
    chunks = chunk_context(spans, TokenBudget(budget=250, overlap_sentences=1), tok)
    # chunk 1: s0,s1 (200); chunk 2 overlaps s1: s1,s2 (200); chunk 3: s2,s3
    assert [[s.text for s in c.sentences] for c in chunks] == [
        ["s0", "s1"],
        ["s1", "s2"],
        ["s2", "s3"],
    ]


def test_zero_overlap():
    spans, tok = spans_of([100, 100, 100, 100])
    chunks = chunk_context(spans, TokenBudget(budget=250, overlap_sentences=0), tok)
    assert [[s.text for s in c.sentences] for c in chunks] == [["s0", "s1"], ["s2", "s3"]]


def test_empty_context_raises():
    with pytest.raises(EmptyContext):
        chunk_context([], TokenBudget(), WS)


def test_token_budget_validation():
    with pytest.raises(ValueError):
        TokenBudget(budget=0)
    with pytest.raises(ValueError):
        TokenBudget(overlap_sentences=-1)


def greedy_oracle(counts: list[int], budget: int, overlap: int) -> list[tuple[int, int]]:
    """Straight transcription of the greedy fill + overlap shrink rule;
    returns (start, end) sentence index ranges."""
    ranges = []
    uncovered = 0
    while uncovered < len(counts):
        o = min(overlap, uncovered)
        while o > 0 and sum(counts[uncovered - o : uncovered + 1]) > budget:
            o -= 1
        start = uncovered - o
        end = uncovered + 1
        while end < len(counts) and sum(counts[start : end + 1]) <= budget:
            end += 1
        ranges.append((start, end))
        uncovered = end
    return ranges


def _chunk_ranges(chunks: list[Chunk], spans: list[SentenceSpan]) -> list[tuple[int, int]]:
    index = {(s.start, s.end): i for i, s in enumerate(spans)}
    return [
        (index[(c.sentences[0].start, c.sentences[0].end)],
         index[(c.sentences[-1].start, c.sentences[-1].end)] + 1)
        for c in chunks
    ]


def assert_chunk_invariants(
    chunks: list[Chunk],
    spans: list[SentenceSpan],
    counts: list[int],
    budget: TokenBudget,
) -> None:
    assert chunks, "at least one chunk for nonempty input"
    ranges = _chunk_ranges(chunks, spans)
    prev_start = -1
    prev_range = None
    covered: set[int] = set()
    for (start, end), chunk in zip(ranges, chunks):
        assert end > start
        # contiguity: the chunk's sentences are exactly spans[start:end]
        assert list(chunk.sentences) == spans[start:end]
        assert chunk.token_count == sum(counts[start:end])
        if end - start > 1:
            assert chunk.token_count <= budget.budget
        assert start > prev_start, "chunks must advance in source order"
        if prev_range is not None:
            shared = prev_range[1] - start
            wanted = min(budget.overlap_sentences, prev_range[1])
            assert 0 <= shared <= wanted
            if shared < wanted:
                # overlap was suppressed: re-including one more trailing
                # sentence plus the first uncovered one must break the budget
                widened = sum(counts[start - 1 : prev_range[1] + 1])
                assert widened > budget.budget
        prev_start = start
        prev_range = (start, end)
        covered.update(range(start, end))
    assert covered == set(range(len(spans))), "every sentence in some chunk"


def test_chunker_fuzz_invariants_and_oracle():
    rng = random.Random(2024)
    for _ in range(500):
        n = rng.randint(1, 12)
        counts = [rng.randint(1, 60) for _ in range(n)]
        budget = TokenBudget(budget=rng.randint(1, 90), overlap_sentences=rng.randint(0, 3))
        spans, tok = spans_of(counts)
        chunks = chunk_context(spans, budget, tok)
        assert_chunk_invariants(chunks, spans, counts, budget)
        assert _chunk_ranges(chunks, spans) == greedy_oracle(
            counts, budget.budget, budget.overlap_sentences
        )


def test_chunking_real_text_end_to_end():
    rng = random.Random(7)
    for _ in range(100):
        text = random_text(rng)
        spans = split_sentences(text)
        if not spans:
            continue
        counts = [WS.count(s.text) for s in spans]
        budget = TokenBudget(budget=rng.randint(2, 25), overlap_sentences=rng.randint(0, 2))
        chunks = chunk_context(spans, budget, WS)
        assert_chunk_invariants(chunks, spans, counts, budget)


def test_chunking_is_deterministic():
    spans, tok = spans_of([3, 7, 2, 9, 4])
    budget = TokenBudget(budget=10, overlap_sentences=1)
    first = chunk_context(spans, budget, tok)
    second = chunk_context(spans, budget, tok)
    assert first == second
