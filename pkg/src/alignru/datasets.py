"""Loading and sampling of task datasets.

On-disk format is UTF-8 JSONL with exactly the keys ``context``, ``claim``,
``label`` (plus optional ``id``), one record per line. Labels are already
canonical: ``aligned``/``neutral``/``contradict`` for 3-way records,
``aligned``/``not_aligned`` for binary, and a real number for regression
(divided by ``label_scale`` at load when the source used e.g. a 0-5 scale).
See ``alignru.convert`` for mapping foreign label vocabularies into this
schema.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass
from math import floor
from pathlib import Path
from typing import Sequence

from alignru.errors import LabelOutOfRange, MalformedRecord

TASKS = ("nli3", "binary", "regression")
NLI3_LABELS = ("aligned", "neutral", "contradict")
BINARY_LABELS = ("aligned", "not_aligned")


@dataclass(frozen=True, slots=True)
class DatasetRecord:
    task: str
    context: str
    claim: str
    label: str | float
    id: str | None = None


@dataclass(frozen=True, slots=True)
class DatasetManifest:
    """One entry of a manifest file: where a dataset lives and how to read it."""

    name: str
    path: str
    task: str
    count: int | None = None
    label_scale: float | None = None
    threshold: float | None = None


def _validate_label(task: str, raw, line: int, label_scale: float | None):
    if task == "nli3":
        if raw not in NLI3_LABELS:
            raise MalformedRecord(line, f"label {raw!r} not in {NLI3_LABELS}")
        return raw
    if task == "binary":
        if raw not in BINARY_LABELS:
            raise MalformedRecord(line, f"label {raw!r} not in {BINARY_LABELS}")
        return raw
    if task == "regression":
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise MalformedRecord(line, f"regression label {raw!r} is not a number")
        value = float(raw)
        if label_scale is not None:
            value = value / label_scale
        if not 0.0 <= value <= 1.0:
            raise LabelOutOfRange(line, value)
        return value
    raise ValueError(f"unknown task {task!r}")


def load_dataset(
    path: str | Path,
    task: str,
    label_scale: float | None = None,
) -> list[DatasetRecord]:
    """Read and validate a JSONL dataset; order follows the file."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}, expected one of {TASKS}")
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"dataset file not found: {path}")

    records: list[DatasetRecord] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, f"invalid JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise MalformedRecord(line_no, "line is not a JSON object")
            missing = [key for key in ("context", "claim", "label") if key not in obj]
            if missing:
                raise MalformedRecord(line_no, f"missing keys: {', '.join(missing)}")
            context, claim = obj["context"], obj["claim"]
            if not isinstance(context, str) or not context.strip():
                raise MalformedRecord(line_no, "context must be a nonempty string")
            if not isinstance(claim, str) or not claim.strip():
                raise MalformedRecord(line_no, "claim must be a nonempty string")
            label = _validate_label(task, obj["label"], line_no, label_scale)
            record_id = obj.get("id")
            if record_id is not None:
                record_id = str(record_id)
            records.append(
                DatasetRecord(task=task, context=context, claim=claim, label=label, id=record_id)
            )
    return records


def save_dataset(records: Sequence[DatasetRecord], path: str | Path) -> None:
    """Write records back as canonical JSONL (round-trips with load_dataset)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            obj = {"context": record.context, "claim": record.claim, "label": record.label}
            if record.id is not None:
                obj["id"] = record.id
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load_manifest(path: str | Path) -> list[DatasetManifest]:
    """Read a manifest: a JSON array of dataset descriptors.

    Relative dataset paths are resolved against the manifest's directory.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"manifest file not found: {path}")
    with path.open(encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise MalformedRecord(0, "manifest must be a JSON array")
    entries = []
    for i, obj in enumerate(raw):
        for key in ("name", "path", "task"):
            if key not in obj:
                raise MalformedRecord(i, f"manifest entry missing {key!r}")
        data_path = Path(obj["path"])
        if not data_path.is_absolute():
            data_path = path.parent / data_path
        entries.append(
            DatasetManifest(
                name=obj["name"],
                path=str(data_path),
                task=obj["task"],
                count=obj.get("count"),
                label_scale=obj.get("label_scale"),
                threshold=obj.get("threshold"),
            )
        )
    return entries


def _stratum_key(record: DatasetRecord):
    if record.task == "regression":
        # continuous labels: stratify on decile bins
        return min(int(float(record.label) * 10), 9)
    return record.label


def stratified_subsample(
    records: Sequence[DatasetRecord], n: int, seed: int
) -> list[DatasetRecord]:
    """Deterministic stratified sample of ``n`` records.

    Per-stratum allocation uses largest-remainder apportionment, so each
    class count matches the population proportion within one record.
    ``n`` at or above the population size returns the full set.
    """
    if n < 0:
        raise ValueError(f"sample size must be >= 0, got {n}")
    if n >= len(records):
        return list(records)
    if n == 0:
        return []

    strata: dict = defaultdict(list)
    for idx, record in enumerate(records):
        strata[_stratum_key(record)].append(idx)
    keys = sorted(strata, key=str)

    total = len(records)
    exact = {key: n * len(strata[key]) / total for key in keys}
    alloc = {key: floor(exact[key]) for key in keys}
    shortfall = n - sum(alloc.values())
    by_remainder = sorted(
        keys, key=lambda key: (-(exact[key] - alloc[key]), -len(strata[key]), str(key))
    )
    for key in by_remainder[:shortfall]:
        alloc[key] += 1

    rng = random.Random(seed)
    chosen: list[int] = []
    for key in keys:
        take = min(alloc[key], len(strata[key]))
        chosen.extend(rng.sample(strata[key], take))
    chosen.sort()
    return [records[idx] for idx in chosen]
