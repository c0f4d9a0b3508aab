"""Evaluation metrics: micro-averaged multiclass classification, thresholded
binary classification with rank-based ROC AUC, and regression MSE / R².

Zero-division cases (no predicted positives, no gold positives) define the
affected metric as 0.0 and record a flag rather than returning NaN. ROC AUC
uses the O(n log n) midrank statistic with 0.5 credit for ties; it is
checked against the O(n²) pairwise oracle in the test suite.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from alignru.backend import Backend, HeadOutputs
from alignru.datasets import DatasetRecord, NLI3_LABELS
from alignru.errors import (
    EmptyInput,
    LengthMismatch,
    SingleClassAUC,
    TaskMismatch,
    ZeroVariance,
)
from alignru.segmentation import TokenBudget, chunk_context, split_sentences

NLI3_INDEX = {label: i for i, label in enumerate(NLI3_LABELS)}


@dataclass(frozen=True)
class ClassificationResult:
    precision: float
    recall: float
    f1: float
    accuracy: float
    confusion: tuple[tuple[int, ...], ...]
    zero_division_flags: tuple[str, ...] = ()

    def metrics_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
        }


@dataclass(frozen=True)
class BinaryResult:
    precision: float
    recall: float
    f1: float
    roc_auc: float
    threshold: float
    zero_division_flags: tuple[str, ...] = ()

    def metrics_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "roc_auc": self.roc_auc,
        }


@dataclass(frozen=True)
class RegressionResult:
    mse: float
    r2: float

    def metrics_dict(self) -> dict:
        return {"mse": self.mse, "r2": self.r2}


def _check_lengths(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise LengthMismatch(f"sequence lengths differ: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise EmptyInput("metric inputs are empty")


def eval_3way(predicted: Sequence[int], gold: Sequence[int], n_classes: int = 3) -> ClassificationResult:
    """Micro-averaged multiclass metrics plus the confusion matrix
    (rows gold, columns predicted)."""
    _check_lengths(predicted, gold)
    confusion = [[0] * n_classes for _ in range(n_classes)]
    for p, g in zip(predicted, gold):
        if not (0 <= p < n_classes and 0 <= g < n_classes):
            raise ValueError(f"class index outside [0, {n_classes}): pred={p}, gold={g}")
        confusion[g][p] += 1

    n = len(gold)
    tp = sum(confusion[k][k] for k in range(n_classes))
    fp = sum(sum(confusion[g][k] for g in range(n_classes)) - confusion[k][k] for k in range(n_classes))
    fn = sum(sum(confusion[k][p] for p in range(n_classes)) - confusion[k][k] for k in range(n_classes))

    flags: list[str] = []
    precision = tp / (tp + fp) if tp + fp else _flagged(flags, "no_predicted_positives")
    recall = tp / (tp + fn) if tp + fn else _flagged(flags, "no_gold_positives")
    # pooled-count F1: bit-identical to tp/n for single-label multiclass,
    # where fp == fn and the 2PR/(P+R) form would reround
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 0.0
    return ClassificationResult(
        precision=precision,
        recall=recall,
        f1=f1,
        accuracy=tp / n,
        confusion=tuple(tuple(row) for row in confusion),
        zero_division_flags=tuple(flags),
    )


def _flagged(flags: list[str], name: str) -> float:
    flags.append(name)
    return 0.0


def roc_auc(scores: Sequence[float], gold: Sequence[int]) -> float:
    """Rank-statistic AUC: probability a random positive outranks a random
    negative, ties worth 0.5."""
    _check_lengths(scores, gold)
    gold_arr = np.asarray(gold)
    n_pos = int((gold_arr == 1).sum())
    n_neg = int((gold_arr == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClassAUC("roc_auc needs both classes in gold")

    scores_arr = np.asarray(scores, dtype=np.float64)
    order = np.argsort(scores_arr, kind="mergesort")
    ranks = np.empty(len(scores_arr), dtype=np.float64)
    sorted_scores = scores_arr[order]
    i = 0
    while i < len(sorted_scores):
        j = i
        while j + 1 < len(sorted_scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0  # midrank, 1-based
        i = j + 1

    rank_sum_pos = float(ranks[gold_arr == 1].sum())
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def eval_binary(
    scores: Sequence[float], gold: Sequence[int], threshold: float = 0.5
) -> BinaryResult:
    """Thresholded precision/recall/F1 (score >= threshold is positive) plus
    threshold-free ROC AUC."""
    _check_lengths(scores, gold)
    auc = roc_auc(scores, gold)

    tp = fp = fn = 0
    for s, g in zip(scores, gold):
        pred = 1 if s >= threshold else 0
        if pred == 1 and g == 1:
            tp += 1
        elif pred == 1 and g == 0:
            fp += 1
        elif pred == 0 and g == 1:
            fn += 1

    flags: list[str] = []
    precision = tp / (tp + fp) if tp + fp else _flagged(flags, "no_predicted_positives")
    recall = tp / (tp + fn) if tp + fn else _flagged(flags, "no_gold_positives")
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return BinaryResult(
        precision=precision,
        recall=recall,
        f1=f1,
        roc_auc=auc,
        threshold=threshold,
        zero_division_flags=tuple(flags),
    )


def eval_regression(predicted: Sequence[float], gold: Sequence[float]) -> RegressionResult:
    """Mean squared error and coefficient of determination."""
    _check_lengths(predicted, gold)
    if len(gold) < 2:
        raise EmptyInput("regression metrics need at least 2 examples")
    pred = np.asarray(predicted, dtype=np.float64)
    gold_arr = np.asarray(gold, dtype=np.float64)
    ss_res = float(((gold_arr - pred) ** 2).sum())
    ss_tot = float(((gold_arr - gold_arr.mean()) ** 2).sum())
    if ss_tot == 0.0:
        raise ZeroVariance("gold values have zero variance; r2 undefined")
    return RegressionResult(mse=ss_res / len(gold_arr), r2=1.0 - ss_res / ss_tot)


def _chunk_pooled_predict(
    backend: Backend, context: str, claim: str, budget: TokenBudget
) -> HeadOutputs:
    """Prediction for a context too long for the model input: predict per
    chunk, keep the full 3-way distribution of the best-aligned chunk
    (lowest index on ties) and max-pool the binary and regression heads."""
    sentences = split_sentences(context)
    if not sentences:
        return backend.predict(context, claim)
    chunks = chunk_context(sentences, budget, backend.tokenizer)
    outputs = backend.predict_batch(
        [(context[chunk.start : chunk.end], claim) for chunk in chunks]
    )
    best = max(range(len(outputs)), key=lambda i: (outputs[i].p_aligned, -i))
    return HeadOutputs(
        probs3=outputs[best].probs3,
        prob_bin=max(out.prob_bin for out in outputs),
        regression=max(out.regression for out in outputs),
    )


def _pooled_outputs(
    records: Sequence[DatasetRecord], backend: Backend, budget: TokenBudget
) -> list[HeadOutputs]:
    outputs: list[HeadOutputs | None] = [None] * len(records)
    direct_pairs = []
    direct_idx = []
    for i, record in enumerate(records):
        if backend.pair_fits(record.context, record.claim):
            direct_pairs.append((record.context, record.claim))
            direct_idx.append(i)
    for i, out in zip(direct_idx, backend.predict_batch(direct_pairs)):
        outputs[i] = out
    for i, record in enumerate(records):
        if outputs[i] is None:
            outputs[i] = _chunk_pooled_predict(backend, record.context, record.claim, budget)
    return outputs  # type: ignore[return-value]


def run_task_eval(
    records: Sequence[DatasetRecord],
    backend: Backend,
    budget: TokenBudget | None = None,
    task: str | None = None,
    threshold: float = 0.5,
) -> ClassificationResult | BinaryResult | RegressionResult:
    """Evaluate a homogeneous record list with the task-appropriate metric."""
    if not records:
        raise EmptyInput("no records to evaluate")
    budget = budget or TokenBudget()
    task = task or records[0].task
    for record in records:
        if record.task != task:
            raise TaskMismatch(f"record task {record.task!r} does not match {task!r}")

    outputs = _pooled_outputs(records, backend, budget)

    if task == "nli3":
        predicted = [int(np.argmax(out.probs3)) for out in outputs]
        gold = [NLI3_INDEX[record.label] for record in records]
        return eval_3way(predicted, gold)
    if task == "binary":
        scores = [out.prob_bin for out in outputs]
        gold = [1 if record.label == "aligned" else 0 for record in records]
        return eval_binary(scores, gold, threshold)
    if task == "regression":
        predicted = [out.regression for out in outputs]
        gold_values = [float(record.label) for record in records]
        return eval_regression(predicted, gold_values)
    raise TaskMismatch(f"unknown task {task!r}")


def calibrate_threshold(
    scores: Sequence[float], gold: Sequence[int]
) -> tuple[float, list[tuple[float, float]]]:
    """Sweep every observed score as a candidate threshold and return the
    F1-maximizing one (lowest threshold on ties) plus the (threshold, F1)
    curve in ascending threshold order."""
    _check_lengths(scores, gold)
    n_pos = sum(1 for g in gold if g == 1)
    if n_pos == 0 or n_pos == len(gold):
        raise SingleClassAUC("calibration needs both classes in gold")

    # Descending sweep: at threshold t each score >= t is predicted positive,
    # so tp/fp grow monotonically as t drops through the unique scores.
    order = sorted(range(len(scores)), key=lambda i: -scores[i])
    curve: list[tuple[float, float]] = []
    best_t = best_f1 = None
    tp = fp = 0
    i = 0
    while i < len(order):
        t = scores[order[i]]
        while i < len(order) and scores[order[i]] == t:
            if gold[order[i]] == 1:
                tp += 1
            else:
                fp += 1
            i += 1
        fn = n_pos - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / n_pos
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        curve.append((t, f1))
        if best_f1 is None or f1 >= best_f1:  # >= keeps the lowest threshold
            best_f1, best_t = f1, t
    curve.reverse()
    assert best_t is not None
    return best_t, curve


def build_report(
    result: ClassificationResult | BinaryResult | RegressionResult,
    dataset: str,
    task: str,
    n: int,
    backend: Backend,
    threshold: float | None = None,
) -> dict:
    """The JSON report schema written by the evaluation CLI."""
    return {
        "dataset": dataset,
        "task": task,
        "n": n,
        "metrics": result.metrics_dict(),
        "threshold": threshold,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "backend_kind": backend.kind,
        "model_hash": backend.model_hash,
    }
