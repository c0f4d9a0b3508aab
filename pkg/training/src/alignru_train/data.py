"""Corpus loading, task-homogeneous batch scheduling, and the synthetic
separable corpus used for desk-scale runs."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

TASKS = ("nli3", "binary", "regression")
NLI3_INDEX = {"aligned": 0, "neutral": 1, "contradict": 2}
# binary positive class sits at index 1; matches the engine's prob_bin
BINARY_INDEX = {"not_aligned": 0, "aligned": 1}


class EmptyCorpus(Exception):
    """No training examples across all tasks."""


@dataclass(frozen=True)
class Example:
    task: str
    context: str
    claim: str
    label: str | float


@dataclass(frozen=True)
class Batch:
    task: str
    examples: tuple[Example, ...]


def load_task_file(path: str | Path, task: str, label_scale: float | None = None) -> list[Example]:
    """Read one canonical JSONL dataset (context/claim/label per line)."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    examples = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            obj = json.loads(line)
            label = obj["label"]
            if task == "regression":
                label = float(label)
                if label_scale:
                    label /= label_scale
                if not 0.0 <= label <= 1.0:
                    raise ValueError(f"{path}:{line_no}: regression label {label} outside [0,1]")
            examples.append(Example(task, obj["context"], obj["claim"], label))
    return examples


def load_corpus(manifest_path: str | Path) -> dict[str, list[Example]]:
    """Read a manifest (JSON array of {name, path, task, label_scale?})."""
    manifest_path = Path(manifest_path)
    entries = json.loads(manifest_path.read_text(encoding="utf-8"))
    corpus: dict[str, list[Example]] = {task: [] for task in TASKS}
    for entry in entries:
        data_path = Path(entry["path"])
        if not data_path.is_absolute():
            data_path = manifest_path.parent / data_path
        corpus[entry["task"]].extend(
            load_task_file(data_path, entry["task"], entry.get("label_scale"))
        )
    return corpus


def mixed_task_batches(
    corpus: dict[str, list[Example]], batch_size: int, seed: int
) -> list[Batch]:
    """Task-homogeneous batches, interleaved proportionally to task sizes.

    Each task's examples are shuffled and cut into batches; batch k of a
    task with n batches is scheduled at fractional position (k + 0.5) / n,
    so tasks interleave at rates proportional to their sizes. Deterministic
    for a fixed seed.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    rng = random.Random(seed)
    scheduled: list[tuple[float, str, Batch]] = []
    total = 0
    for task in TASKS:
        examples = list(corpus.get(task, ()))
        total += len(examples)
        if not examples:
            continue
        rng.shuffle(examples)
        batches = [
            Batch(task, tuple(examples[lo : lo + batch_size]))
            for lo in range(0, len(examples), batch_size)
        ]
        for k, batch in enumerate(batches):
            scheduled.append(((k + 0.5) / len(batches), task, batch))
    if total == 0:
        raise EmptyCorpus("no examples in any task")
    scheduled.sort(key=lambda item: (item[0], item[1]))
    return [batch for _, _, batch in scheduled]


# ------------------------------------------------------------ synthetic data

_TOPIC_WORDS = [
    "мама", "папа", "дом", "кошка", "собака", "книга", "стол", "окно",
    "река", "лес", "город", "утро",
]
_OTHER_WORDS = [
    "завод", "поезд", "море", "гора", "звезда", "хлеб", "волк", "снег",
    "трава", "камень", "мост", "вечер",
]
NEGATION = "не"


def synthetic_vocab_words() -> list[str]:
    return [*_TOPIC_WORDS, *_OTHER_WORDS, NEGATION, ".", ","]


def synthetic_corpus(n: int = 200, seed: int = 0) -> dict[str, list[Example]]:
    """A separable corpus: alignment is decidable from surface tokens
    (claim words copied from the context, drawn from a disjoint word set,
    or the context restated with a negation marker)."""
    rng = random.Random(seed)
    corpus: dict[str, list[Example]] = {task: [] for task in TASKS}
    per_task = [n // 3 + (1 if i < n % 3 else 0) for i in range(3)]

    def context_words() -> list[str]:
        return rng.sample(_TOPIC_WORDS, rng.randint(3, 6))

    for _ in range(per_task[0]):
        words = context_words()
        context = " ".join(words)
        kind = rng.randrange(3)
        if kind == 0:
            claim, label = " ".join(rng.sample(words, len(words) - 1)), "aligned"
        elif kind == 1:
            claim, label = " ".join(rng.sample(_OTHER_WORDS, 3)), "neutral"
        else:
            claim, label = NEGATION + " " + " ".join(words[:3]), "contradict"
        corpus["nli3"].append(Example("nli3", context, claim, label))

    for _ in range(per_task[1]):
        words = context_words()
        context = " ".join(words)
        if rng.random() < 0.5:
            claim, label = " ".join(rng.sample(words, 2)), "aligned"
        else:
            claim, label = " ".join(rng.sample(_OTHER_WORDS, 2)), "not_aligned"
        corpus["binary"].append(Example("binary", context, claim, label))

    for _ in range(per_task[2]):
        words = context_words()
        context = " ".join(words)
        n_claim = 4
        n_hit = rng.randint(0, n_claim)
        picked = rng.sample(words, min(n_hit, len(words)))
        picked += rng.sample(_OTHER_WORDS, n_claim - len(picked))
        rng.shuffle(picked)
        label = len([w for w in picked if w in words]) / n_claim
        corpus["regression"].append(Example("regression", context, " ".join(picked), label))
    return corpus


def save_corpus(corpus: dict[str, list[Example]], out_dir: str | Path) -> Path:
    """Write one JSONL per task plus a manifest; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for task, examples in corpus.items():
        if not examples:
            continue
        path = out_dir / f"{task}.jsonl"
        with path.open("w", encoding="utf-8") as fh:
            for ex in examples:
                fh.write(
                    json.dumps(
                        {"context": ex.context, "claim": ex.claim, "label": ex.label},
                        ensure_ascii=False,
                    )
                    + "\n"
                )
        entries.append({"name": task, "path": path.name, "task": task, "count": len(examples)})
    manifest = out_dir / "manifest.json"
    manifest.write_text(json.dumps(entries, indent=2), encoding="utf-8")
    return manifest
