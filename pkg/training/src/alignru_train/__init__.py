"""Training companion for the alignru scoring engine.

Fine-tunes a BERT-family encoder with three task heads (3-way
classification, binary classification, bounded regression) under a
combined cross-entropy + MSE loss on task-homogeneous batches, then
exports the checkpoint to the npz + JSON interchange format the engine
loads. The two packages share only file formats: JSONL datasets in,
serialized models out.
"""

from alignru_train.config import EncoderSpec, TrainConfig
from alignru_train.model import MultiHeadModel, build_model
from alignru_train.losses import combined_loss
from alignru_train.data import mixed_task_batches, synthetic_corpus
from alignru_train.trainer import train
from alignru_train.export import export_model

__version__ = "0.1.0"

__all__ = [
    "EncoderSpec",
    "TrainConfig",
    "MultiHeadModel",
    "build_model",
    "combined_loss",
    "mixed_task_batches",
    "synthetic_corpus",
    "train",
    "export_model",
]
