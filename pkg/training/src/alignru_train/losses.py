"""Per-task losses: cross-entropy for the classification heads, mean
squared error for the regression head. Batches are task-homogeneous, so
exactly one head receives gradient per step."""

from __future__ import annotations

import torch
import torch.nn.functional as F

from alignru_train.data import BINARY_INDEX, NLI3_INDEX, Batch


def batch_targets(batch: Batch, device: torch.device | str = "cpu") -> torch.Tensor:
    if batch.task == "nli3":
        return torch.tensor([NLI3_INDEX[ex.label] for ex in batch.examples], device=device)
    if batch.task == "binary":
        return torch.tensor([BINARY_INDEX[ex.label] for ex in batch.examples], device=device)
    if batch.task == "regression":
        return torch.tensor(
            [float(ex.label) for ex in batch.examples], dtype=torch.float32, device=device
        )
    raise ValueError(f"unknown task {batch.task!r}")


def combined_loss(outputs: dict[str, torch.Tensor], task: str, targets: torch.Tensor) -> torch.Tensor:
    if task == "nli3":
        return F.cross_entropy(outputs["logits3"], targets)
    if task == "binary":
        return F.cross_entropy(outputs["logits_bin"], targets)
    if task == "regression":
        return F.mse_loss(outputs["regression"][:, 0], targets)
    raise ValueError(f"unknown task {task!r}")
