"""Factual-consistency scoring for Russian (or any UTF-8) text.

A claim is scored against a context by chunking the context at sentence
boundaries under a token budget, splitting the claim into sentences,
scoring every (sentence, chunk) pair with a three-headed alignment model,
and averaging the per-sentence maxima. The package also ships a dataset
evaluation harness and a CLI; see the README for the model interchange
format and the training companion package.
"""

from alignru.backend import Backend, BackendConfig, HeadOutputs, load_backend
from alignru.datasets import DatasetManifest, DatasetRecord, load_dataset, stratified_subsample
from alignru.metrics import (
    BinaryResult,
    ClassificationResult,
    RegressionResult,
    eval_3way,
    eval_binary,
    eval_regression,
    run_task_eval,
)
from alignru.scoring import ScoreReport, align_score, align_score_batch
from alignru.segmentation import (
    Chunk,
    SentenceSpan,
    TokenBudget,
    chunk_context,
    count_tokens,
    split_sentences,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "BackendConfig",
    "BinaryResult",
    "Chunk",
    "ClassificationResult",
    "DatasetManifest",
    "DatasetRecord",
    "HeadOutputs",
    "RegressionResult",
    "ScoreReport",
    "SentenceSpan",
    "TokenBudget",
    "align_score",
    "align_score_batch",
    "chunk_context",
    "count_tokens",
    "eval_3way",
    "eval_binary",
    "eval_regression",
    "load_backend",
    "load_dataset",
    "run_task_eval",
    "split_sentences",
    "stratified_subsample",
    "__version__",
]
