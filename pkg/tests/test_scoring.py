"""Scoring: aggregation vs brute-force max/mean oracle, stub-backend grids,
reference-backend end-to-end cases."""

from __future__ import annotations

import math
import random

import pytest

from alignru.backend.reference import ReferenceBackend
from alignru.errors import BatchItemError, EmptyClaim, EmptyContext
from alignru.scoring import aggregate_grid, align_score, align_score_batch
from alignru.segmentation import TokenBudget

from conftest import StubBackend


def brute_force_score(grid):
    return sum(max(row) for row in grid) / len(grid)


def grid_fixture(grid):
    """Build (context, claim, stub) whose chunk/sentence structure realizes
    ``grid``: one single-word sentence per chunk and per claim sentence."""
    n_sent = len(grid)
    n_chunks = len(grid[0])
    context = " ".join(f"K{j}." for j in range(n_chunks))
    claim = " ".join(f"C{i}." for i in range(n_sent))
    table = {
        (f"K{j}.", f"C{i}."): grid[i][j]
        for i in range(n_sent)
        for j in range(n_chunks)
    }
    # budget 1 and one-token sentences force one sentence per chunk
    return context, claim, StubBackend(table), TokenBudget(budget=1, overlap_sentences=1)


# ---------------------------------------------------------------- aggregation


def test_aggregate_matches_oracle_on_random_grids():
    rng = random.Random(42)
    for _ in range(500):
        rows = rng.randint(1, 8)
        cols = rng.randint(1, 8)
        grid = [[rng.random() for _ in range(cols)] for _ in range(rows)]
        score, best = aggregate_grid(grid)
        assert abs(score - brute_force_score(grid)) <= 1e-12
        for row, (idx, prob) in zip(grid, best):
            assert prob == max(row)
            assert idx == row.index(max(row))  # lowest index on ties


def test_aggregate_tie_breaks_to_lowest_chunk():
    score, best = aggregate_grid([[0.7, 0.7, 0.2]])
    assert best == [(0, 0.7)]
    assert score == 0.7


def test_spec_grid_two_by_two():
    grid = [[0.2, 0.9], [0.4, 0.1]]
    score, best = aggregate_grid(grid)
    assert math.isclose(score, 0.65, abs_tol=1e-12)
    assert [prob for _, prob in best] == [0.9, 0.4]


def test_appending_a_chunk_never_decreases_score():
    # max over a superset of chunks is monotone, hence so is the mean
    rng = random.Random(88)
    for _ in range(200):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        grid = [[rng.random() for _ in range(cols)] for _ in range(rows)]
        base, _ = aggregate_grid(grid)
        extra = [row + [rng.random()] for row in grid]
        grown, _ = aggregate_grid(extra)
        assert grown >= base - 1e-15


# ---------------------------------------------------------------- align_score


def test_identical_single_sentence_scores_one():
    backend = ReferenceBackend()
    report = align_score("Солнце светит.", "Солнце светит.", backend)
    assert report.score == 1.0
    assert report.n_chunks == 1
    assert report.n_claim_sentences == 1
    assert report.per_sentence[0].best_chunk_index == 0


def test_stub_grid_expected_score():
    context, claim, backend, budget = grid_fixture([[0.2, 0.9], [0.4, 0.1]])
    report = align_score(context, claim, backend, budget)
    assert report.n_chunks == 2
    assert report.n_claim_sentences == 2
    assert math.isclose(report.score, 0.65, abs_tol=1e-12)
    assert [s.best_chunk_index for s in report.per_sentence] == [1, 0]


def test_stub_random_grids_end_to_end():
    rng = random.Random(11)
    for _ in range(50):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        grid = [[round(rng.random(), 6) for _ in range(cols)] for _ in range(rows)]
        context, claim, backend, budget = grid_fixture(grid)
        report = align_score(context, claim, backend, budget)
        assert report.n_chunks == cols
        assert abs(report.score - brute_force_score(grid)) <= 1e-12


def test_zero_overlap_claim_sentence_contributes_zero():
    backend = ReferenceBackend()
    report = align_score("Кошка спит дома.", "Летит самолет. Кошка спит дома.", backend)
    probs = [s.best_prob for s in report.per_sentence]
    assert probs[0] == 0.0
    assert probs[1] == 1.0
    assert report.score == 0.5


def test_score_report_mean_invariant():
    rng = random.Random(31)
    backend = ReferenceBackend()
    for _ in range(30):
        n = rng.randint(1, 5)
        claim = " ".join(
            " ".join(rng.choice(["мама", "папа", "дом", "sun"]) for _ in range(3)).capitalize() + "."
            for _ in range(n)
        )
        report = align_score("Мама мыла раму. Папа строил дом.", claim, backend)
        mean = math.fsum(s.best_prob for s in report.per_sentence) / len(report.per_sentence)
        assert abs(report.score - mean) <= 1e-9
        assert 0.0 <= report.score <= 1.0
        for entry in report.per_sentence:
            assert 0 <= entry.best_chunk_index < report.n_chunks


def test_sentence_permutation_leaves_score_unchanged():
    backend = ReferenceBackend()
    a = "Мама мыла раму. Кошка спит."
    b = "Кошка спит. Мама мыла раму."
    context = "Мама мыла раму весь день."
    assert align_score(context, a, backend).score == align_score(context, b, backend).score


def test_single_chunk_single_sentence_equals_predict():
    backend = ReferenceBackend()
    context = "Мама мыла раму."
    claim = "Мама мыла пол."
    report = align_score(context, claim, backend)
    assert report.score == backend.predict(context, claim).p_aligned


def test_empty_errors():
    backend = ReferenceBackend()
    with pytest.raises(EmptyContext):
        align_score("", "claim", backend)
    with pytest.raises(EmptyClaim):
        align_score("context", "   ", backend)
    with pytest.raises(EmptyClaim):
        align_score("Контекст есть.", "...", backend)  # no sentences after split


def test_degenerate_punctuation_context():
    backend = ReferenceBackend()
    # "..." yields one span ("..." itself), so this is a valid context
    report = align_score("...", "Текст.", backend)
    assert report.score == 0.0


def test_determinism_bit_identical():
    backend = ReferenceBackend()
    context = "Мама мыла раму. Папа строил дом. Кошка спала."
    claim = "Кошка спала. Папа строил дом."
    first = align_score(context, claim, backend)
    second = align_score(context, claim, backend)
    assert first == second


# ---------------------------------------------------------------- batch


def test_batch_empty():
    assert align_score_batch([], ReferenceBackend()) == []


def test_batch_matches_single_calls():
    backend = ReferenceBackend()
    rng = random.Random(77)
    words = ["мама", "папа", "дом", "кошка", "sun", "moon"]
    pairs = []
    for _ in range(10):
        context = " ".join(rng.choice(words) for _ in range(6)).capitalize() + "."
        claim = " ".join(rng.choice(words) for _ in range(4)).capitalize() + "."
        pairs.append((context, claim))
    batch = align_score_batch(pairs, backend)
    singles = [align_score(c, s, backend) for c, s in pairs]
    assert batch == singles


def test_batch_error_index():
    backend = ReferenceBackend()
    with pytest.raises(BatchItemError) as err:
        align_score_batch([("Текст.", "Текст."), ("Текст.", "")], backend)
    assert err.value.index == 1
