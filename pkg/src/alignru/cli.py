"""Command-line interface.

Subcommands: ``score`` (single pair or JSONL batch), ``eval`` (manifest of
datasets, per-dataset JSON reports plus a summary table), ``chunk-debug``
(inspect chunking decisions) and ``calibrate`` (F1-maximizing threshold
sweep).

Exit codes: 0 success, 1 partial failure, 2 usage/input error, 3 backend
error. stdout carries only machine-parseable payload in json/tsv modes;
all diagnostics go to stderr.

Text arguments accept three source forms: a literal string, ``@path`` to
read a file, or ``-`` to read stdin.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from alignru.backend import Backend, BackendConfig, load_backend
from alignru.datasets import load_dataset, load_manifest, stratified_subsample
from alignru.errors import AlignRuError, BackendError, InputError
from alignru.metrics import (
    BinaryResult,
    ClassificationResult,
    RegressionResult,
    build_report,
    calibrate_threshold,
    run_task_eval,
)
from alignru.scoring import ScoreReport, align_score
from alignru.segmentation import TokenBudget, chunk_context, split_sentences

ENV_MODEL = "ALIGNRU_MODEL"
ENV_WORKERS = "ALIGNRU_WORKERS"

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_INPUT = 2
EXIT_BACKEND = 3


@dataclass(frozen=True)
class CliConfig:
    backend: str = "reference"
    model: str | None = None
    chunk_budget: int = 350
    overlap: int = 1
    threshold: float = 0.5
    format: str = "json"
    workers: int | None = None
    seed: int = 0
    batch_size: int = 32

    def token_budget(self) -> TokenBudget:
        return TokenBudget(budget=self.chunk_budget, overlap_sentences=self.overlap)

    def backend_config(self) -> BackendConfig:
        return BackendConfig(
            kind=self.backend, model_path=self.model, batch_size=self.batch_size
        )


_CONFIG_KEYS = set(CliConfig.__dataclass_fields__)


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """Defaults < config file < environment < explicit flags."""
    config = CliConfig()
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise InputError(f"config file not found: {path}")
        with path.open(encoding="utf-8") as fh:
            raw = json.load(fh)
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
        config = replace(config, **raw)
    if os.environ.get(ENV_MODEL):
        config = replace(config, model=os.environ[ENV_MODEL])
    if os.environ.get(ENV_WORKERS):
        config = replace(config, workers=int(os.environ[ENV_WORKERS]))
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key in _CONFIG_KEYS and value is not None
    }
    return replace(config, **overrides)


def read_source(value: str) -> str:
    """Interpret a text argument: literal, ``@file``, or ``-`` for stdin."""
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        path = Path(value[1:])
        if not path.is_file():
            raise InputError(f"file not found: {path}")
        return path.read_text(encoding="utf-8")
    return value


def _open_backend(config: CliConfig) -> Backend:
    return load_backend(config.backend_config())


# ---------------------------------------------------------------- score


def _emit_report(report: ScoreReport, fmt: str, header_done: bool) -> None:
    if fmt == "json":
        print(json.dumps(report.to_dict(), ensure_ascii=False))
    elif fmt == "tsv":
        if not header_done:
            print("score\tn_chunks\tn_claim_sentences")
        print(f"{report.score!r}\t{report.n_chunks}\t{report.n_claim_sentences}")
    else:
        print(f"score: {report.score:.6f}")
        print(f"chunks: {report.n_chunks}, claim sentences: {report.n_claim_sentences}")
        for entry in report.per_sentence:
            snippet = entry.sentence.text
            if len(snippet) > 60:
                snippet = snippet[:57] + "..."
            print(f"  [{entry.best_prob:.4f} @ chunk {entry.best_chunk_index}] {snippet}")


def cmd_score(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    backend = _open_backend(config)
    budget = config.token_budget()

    if args.batch is not None:
        if args.batch == "-":
            batch_text = sys.stdin.read()
        else:
            batch_path = Path(args.batch.lstrip("@"))
            if not batch_path.is_file():
                raise InputError(f"batch file not found: {batch_path}")
            batch_text = batch_path.read_text(encoding="utf-8")
        pairs = []
        for line_no, line in enumerate(batch_text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                pairs.append((obj["context"], obj["claim"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise InputError(f"batch line {line_no}: {exc}") from exc
        if not pairs:
            raise InputError("batch input contains no pairs")

        def worker(pair: tuple[str, str]):
            try:
                return align_score(pair[0], pair[1], backend, budget)
            except AlignRuError as exc:
                return exc

        workers = config.workers or os.cpu_count() or 1
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(worker, pairs))

        failures = 0
        backend_failures = 0
        header_done = False
        for index, result in enumerate(results):
            if isinstance(result, ScoreReport):
                _emit_report(result, config.format, header_done)
                header_done = True
            else:
                failures += 1
                if isinstance(result, BackendError):
                    backend_failures += 1
                print(f"error: pair {index}: {result}", file=sys.stderr)
                if config.format == "json":
                    print(json.dumps({"index": index, "error": str(result)}))
        if failures == 0:
            return EXIT_OK
        if failures == len(results):
            return EXIT_BACKEND if backend_failures else EXIT_INPUT
        return EXIT_PARTIAL

    if args.context is None or args.claim is None:
        raise InputError("score needs --context and --claim, or --batch")
    report = align_score(read_source(args.context), read_source(args.claim), backend, budget)
    _emit_report(report, config.format, header_done=False)
    return EXIT_OK


# ---------------------------------------------------------------- eval


_TASK_COLUMNS = {
    "nli3": ("precision", "recall", "f1", "accuracy"),
    "binary": ("precision", "recall", "f1", "roc_auc"),
    "regression": ("mse", "r2"),
}
_TASK_TITLES = {
    "nli3": "3-way classification",
    "binary": "binary classification",
    "regression": "regression",
}


def _summary_table(rows: list[dict]) -> str:
    lines = []
    for task in ("nli3", "binary", "regression"):
        task_rows = [row for row in rows if row["task"] == task]
        if not task_rows:
            continue
        columns = _TASK_COLUMNS[task]
        lines.append(f"# {_TASK_TITLES[task]}")
        header = ["dataset", *columns, "n"]
        widths = [max(len(header[0]), *(len(r["dataset"]) for r in task_rows))]
        widths += [max(9, len(c)) for c in columns] + [6]
        lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for row in task_rows:
            cells = [row["dataset"].ljust(widths[0])]
            for col, width in zip(columns, widths[1:]):
                cells.append(f"{row['metrics'][col]:.3f}".ljust(width))
            cells.append(str(row["n"]).ljust(widths[-1]))
            lines.append("  ".join(cells))
        lines.append("")
    return "\n".join(lines).rstrip()


def cmd_eval(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    backend = _open_backend(config)
    budget = config.token_budget()

    entries = load_manifest(args.manifest)
    if not entries:
        raise InputError(f"manifest {args.manifest} lists no datasets")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows: list[dict] = []
    failed = 0
    for entry in entries:
        try:
            records = load_dataset(entry.path, entry.task, entry.label_scale)
            if entry.count is not None and entry.count != len(records):
                raise InputError(
                    f"{entry.name}: manifest count {entry.count} != {len(records)} records"
                )
            if args.limit is not None and args.limit < len(records):
                records = stratified_subsample(records, args.limit, config.seed)
            threshold = entry.threshold if entry.threshold is not None else config.threshold
            result = run_task_eval(records, backend, budget, entry.task, threshold)
            report = build_report(
                result,
                dataset=entry.name,
                task=entry.task,
                n=len(records),
                backend=backend,
                threshold=threshold if entry.task == "binary" else None,
            )
            report_path = out_dir / f"{entry.name}.json"
            report_path.write_text(
                json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
            )
            rows.append(report)
            print(f"evaluated {entry.name}: report -> {report_path}", file=sys.stderr)
        except (AlignRuError, FileNotFoundError, OSError, ValueError) as exc:
            failed += 1
            print(f"error: dataset {entry.name}: {exc}", file=sys.stderr)

    if rows:
        print(_summary_table(rows))
    return EXIT_PARTIAL if failed else EXIT_OK


# ---------------------------------------------------------------- chunk-debug


def _verify_chunks(chunks, sentences, budget: TokenBudget) -> list[str]:
    problems = []
    covered = set()
    prev_start = -1
    for idx, chunk in enumerate(chunks):
        if len(chunk.sentences) > 1 and chunk.token_count > budget.budget:
            problems.append(f"chunk {idx} exceeds budget: {chunk.token_count} > {budget.budget}")
        if chunk.sentences[0].start <= prev_start:
            problems.append(f"chunk {idx} does not advance past its predecessor")
        prev_start = chunk.sentences[0].start
        covered.update((s.start, s.end) for s in chunk.sentences)
    missing = [s for s in sentences if (s.start, s.end) not in covered]
    if missing:
        problems.append(f"{len(missing)} sentences not covered by any chunk")
    return problems


def cmd_chunk_debug(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    backend = _open_backend(config)
    budget = config.token_budget()

    text = read_source(args.text)
    sentences = split_sentences(text)
    if not sentences:
        raise InputError("input contains no sentences")
    chunks = chunk_context(sentences, budget, backend.tokenizer)

    sentence_ordinal = {(s.start, s.end): i for i, s in enumerate(sentences)}
    if config.format == "json":
        payload = [
            {
                "index": idx,
                "first_sentence": sentence_ordinal[(c.sentences[0].start, c.sentences[0].end)],
                "last_sentence": sentence_ordinal[(c.sentences[-1].start, c.sentences[-1].end)],
                "token_count": c.token_count,
                "start": c.start,
                "end": c.end,
            }
            for idx, c in enumerate(chunks)
        ]
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(f"{len(sentences)} sentences -> {len(chunks)} chunks "
              f"(budget {budget.budget}, overlap {budget.overlap_sentences})")
        for idx, chunk in enumerate(chunks):
            first = sentence_ordinal[(chunk.sentences[0].start, chunk.sentences[0].end)]
            last = sentence_ordinal[(chunk.sentences[-1].start, chunk.sentences[-1].end)]
            print(f"chunk {idx}: sentences {first}-{last}, {chunk.token_count} tokens")

    problems = _verify_chunks(chunks, sentences, budget)
    for problem in problems:
        print(f"invariant violation: {problem}", file=sys.stderr)
    return EXIT_PARTIAL if problems else EXIT_OK


# ---------------------------------------------------------------- calibrate


def cmd_calibrate(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    backend = _open_backend(config)
    budget = config.token_budget()

    records = load_dataset(args.dataset, "binary")
    if args.limit is not None and args.limit < len(records):
        records = stratified_subsample(records, args.limit, config.seed)

    from alignru.metrics import _pooled_outputs

    outputs = _pooled_outputs(records, backend, budget)
    scores = [out.prob_bin for out in outputs]
    gold = [1 if record.label == "aligned" else 0 for record in records]
    best, curve = calibrate_threshold(scores, gold)

    if config.format == "json":
        print(json.dumps({
            "best_threshold": best,
            "curve": [{"threshold": t, "f1": f} for t, f in curve],
        }))
    else:
        print(f"best threshold: {best!r}")
        for t, f1 in curve:
            print(f"  t={t:.4f}  f1={f1:.4f}")
    return EXIT_OK


# ---------------------------------------------------------------- wiring


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", choices=["reference", "neural"], default=None)
    parser.add_argument("--model", default=None, help="serialized model directory or model.json")
    parser.add_argument("--chunk-budget", type=int, dest="chunk_budget", default=None)
    parser.add_argument("--overlap", type=int, default=None)
    parser.add_argument("--threshold", type=float, default=None)
    parser.add_argument("--format", choices=["json", "tsv", "pretty"], default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--batch-size", type=int, dest="batch_size", default=None)
    parser.add_argument("--config", default=None, help="JSON config file; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alignru", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score (context, claim) pairs")
    p_score.add_argument("--context", default=None, help="literal, @file, or -")
    p_score.add_argument("--claim", default=None, help="literal, @file, or -")
    p_score.add_argument("--batch", default=None, help="JSONL file of {context, claim} pairs, or - for stdin")
    _add_common(p_score)
    p_score.set_defaults(func=cmd_score)

    p_eval = sub.add_parser("eval", help="evaluate datasets from a manifest")
    p_eval.add_argument("--manifest", required=True)
    p_eval.add_argument("--out-dir", dest="out_dir", default="reports")
    p_eval.add_argument("--limit", type=int, default=None,
                        help="stratified subsample size per dataset")
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_chunk = sub.add_parser("chunk-debug", help="show chunking decisions for a text")
    p_chunk.add_argument("--text", required=True, help="literal, @file, or -")
    _add_common(p_chunk)
    p_chunk.set_defaults(func=cmd_chunk_debug)

    p_cal = sub.add_parser("calibrate", help="sweep thresholds to maximize F1")
    p_cal.add_argument("--dataset", required=True, help="binary-task JSONL dataset")
    p_cal.add_argument("--limit", type=int, default=None)
    _add_common(p_cal)
    p_cal.set_defaults(func=cmd_calibrate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except AlignRuError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
