"""Training loop: AdamW with linear warmup then linear decay,
task-homogeneous batches, per-epoch checkpoints, divergence guard."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import torch

from alignru_train.config import TrainConfig
from alignru_train.data import Batch, Example, mixed_task_batches
from alignru_train.losses import batch_targets, combined_loss
from alignru_train.model import MultiHeadModel, build_model
from alignru_train.vocab import WordPieceEncoder


class TrainingDiverged(Exception):
    """Loss became non-finite; message carries the step diagnostics."""


@dataclass
class TrainResult:
    model: MultiHeadModel
    log: list[dict] = field(default_factory=list)
    epoch_mean_loss: list[float] = field(default_factory=list)
    checkpoint_paths: list[Path] = field(default_factory=list)


def featurize(
    batch: Batch, encoder: WordPieceEncoder, max_seq_len: int
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    encoded = [
        encoder.encode_pair(ex.context, ex.claim, max_seq_len) for ex in batch.examples
    ]
    width = max(len(ids) for ids, _, _ in encoded)
    ids = torch.full((len(encoded), width), encoder.pad_id, dtype=torch.long)
    mask = torch.zeros((len(encoded), width), dtype=torch.long)
    segments = torch.zeros((len(encoded), width), dtype=torch.long)
    for row, (tok_ids, tok_mask, tok_seg) in enumerate(encoded):
        ids[row, : len(tok_ids)] = torch.tensor(tok_ids)
        mask[row, : len(tok_mask)] = torch.tensor(tok_mask)
        segments[row, : len(tok_seg)] = torch.tensor(tok_seg)
    return ids, mask, segments


def warmup_linear_factor(step: int, total_steps: int, warmup_steps: int) -> float:
    """Learning-rate multiplier: linear 0 -> 1 over warmup, then linear
    decay to 0 at the final step."""
    if warmup_steps > 0 and step < warmup_steps:
        return (step + 1) / warmup_steps
    if total_steps <= warmup_steps:
        return 1.0
    return max(0.0, (total_steps - step) / (total_steps - warmup_steps))


def train(
    config: TrainConfig,
    corpus: dict[str, list[Example]],
    tokenizer: WordPieceEncoder,
    out_dir: str | Path | None = None,
    model: MultiHeadModel | None = None,
) -> TrainResult:
    """Fine-tune on ``corpus``; returns the model, the step log, and the
    per-epoch mean losses. Checkpoints are written per epoch when
    ``out_dir`` is given."""
    if model is None:
        model = build_model(config)
    model.train()

    steps_per_epoch = len(mixed_task_batches(corpus, config.batch_size, config.seed))
    total_steps = steps_per_epoch * config.epochs
    warmup_steps = int(round(config.warmup_ratio * total_steps))

    optimizer = torch.optim.AdamW(
        model.parameters(),
        lr=config.learning_rate,
        weight_decay=config.weight_decay,
        eps=config.adam_epsilon,
    )
    scheduler = torch.optim.lr_scheduler.LambdaLR(
        optimizer, lambda step: warmup_linear_factor(step, total_steps, warmup_steps)
    )

    result = TrainResult(model=model)
    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)

    step = 0
    for epoch in range(config.epochs):
        # fresh shuffle per epoch, still fully seed-determined
        batches = mixed_task_batches(corpus, config.batch_size, config.seed + epoch)
        epoch_losses: list[float] = []
        for batch in batches:
            ids, mask, segments = featurize(batch, tokenizer, config.max_seq_len)
            outputs = model(ids, mask, segments)
            targets = batch_targets(batch)
            loss = combined_loss(outputs, batch.task, targets)
            value = float(loss.detach())
            if not math.isfinite(value):
                raise TrainingDiverged(
                    f"non-finite loss {value} at epoch {epoch} step {step} "
                    f"(task {batch.task}, lr {scheduler.get_last_lr()[0]:.2e})"
                )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            scheduler.step()
            result.log.append(
                {"epoch": epoch, "step": step, "task": batch.task, "loss": value}
            )
            epoch_losses.append(value)
            step += 1
        result.epoch_mean_loss.append(sum(epoch_losses) / len(epoch_losses))

        if out_path is not None:
            checkpoint = out_path / f"checkpoint-epoch{epoch}.pt"
            torch.save(
                {
                    "model_state": model.state_dict(),
                    "config": asdict(config),
                    "epoch": epoch,
                },
                checkpoint,
            )
            result.checkpoint_paths.append(checkpoint)

    if out_path is not None:
        (out_path / "training_log.json").write_text(
            json.dumps(
                {"log": result.log, "epoch_mean_loss": result.epoch_mean_loss}, indent=2
            ),
            encoding="utf-8",
        )
    return result


def load_checkpoint(path: str | Path) -> tuple[MultiHeadModel, TrainConfig]:
    from alignru_train.config import EncoderSpec

    payload = torch.load(path, map_location="cpu", weights_only=False)
    raw = dict(payload["config"])
    raw["encoder"] = EncoderSpec(**raw["encoder"])
    config = TrainConfig(**raw)
    model = MultiHeadModel(config.encoder)
    model.load_state_dict(payload["model_state"])
    return model, config
