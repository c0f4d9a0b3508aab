"""Best-effort converter from foreign dataset files to the canonical JSONL
schema (``context``/``claim``/``label``).

Source corpora name their fields and labels in many ways (premise/
hypothesis, entailment/contradiction, SUPPORTS/REFUTES, 0/1 flags,
0-5 similarity scores). This tool maps them into the three canonical
label sets, optionally rescaling regression labels. The built-in alias
tables below are the audit trail; pass ``--mapping`` to override or
extend them per source.

Run as ``python -m alignru.convert --help``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

# Alias tables: lowercased source label -> canonical label.
NLI3_ALIASES = {
    "aligned": "aligned",
    "entailment": "aligned",
    "entail": "aligned",
    "supports": "aligned",
    "neutral": "neutral",
    "not enough info": "neutral",
    "not_enough_info": "neutral",
    "contradict": "contradict",
    "contradiction": "contradict",
    "refutes": "contradict",
    "0": "aligned",
    "1": "neutral",
    "2": "contradict",
}

BINARY_ALIASES = {
    "aligned": "aligned",
    "not_aligned": "not_aligned",
    "not aligned": "not_aligned",
    "entailment": "aligned",
    "not_entailment": "not_aligned",
    "duplicate": "aligned",
    "not_duplicate": "not_aligned",
    "paraphrase": "aligned",
    "not_paraphrase": "not_aligned",
    "1": "aligned",
    "0": "not_aligned",
    "true": "aligned",
    "false": "not_aligned",
}


def convert_record(
    obj: dict,
    task: str,
    context_key: str,
    claim_key: str,
    label_key: str,
    label_scale: float | None,
    aliases: dict[str, str],
) -> dict | None:
    """Map one source object to the canonical schema; None when unmappable."""
    context = obj.get(context_key)
    claim = obj.get(claim_key)
    raw = obj.get(label_key)
    if not isinstance(context, str) or not isinstance(claim, str):
        return None
    if not context.strip() or not claim.strip():
        return None

    if task == "regression":
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            return None
        label = float(raw) / label_scale if label_scale else float(raw)
        if not 0.0 <= label <= 1.0:
            return None
    else:
        key = str(raw).strip().lower()
        if key not in aliases:
            return None
        label = aliases[key]

    out = {"context": context, "claim": claim, "label": label}
    if "id" in obj:
        out["id"] = str(obj["id"])
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m alignru.convert",
        description="Convert a foreign JSONL dataset to the canonical schema.",
    )
    parser.add_argument("--input", required=True, help="source JSONL file")
    parser.add_argument("--output", required=True, help="canonical JSONL to write")
    parser.add_argument("--task", required=True, choices=["nli3", "binary", "regression"])
    parser.add_argument("--context-key", default="context")
    parser.add_argument("--claim-key", default="claim")
    parser.add_argument("--label-key", default="label")
    parser.add_argument("--label-scale", type=float, default=None,
                        help="divide regression labels by this (e.g. 5.0 for 0-5 scales)")
    parser.add_argument("--mapping", default=None,
                        help="JSON file of extra label aliases {source: canonical}")
    args = parser.parse_args(argv)

    aliases = dict(NLI3_ALIASES if args.task == "nli3" else BINARY_ALIASES)
    if args.mapping:
        with open(args.mapping, encoding="utf-8") as fh:
            aliases.update({str(k).lower(): v for k, v in json.load(fh).items()})

    src = Path(args.input)
    if not src.is_file():
        print(f"error: input file not found: {src}", file=sys.stderr)
        return 2

    kept = skipped = 0
    with src.open(encoding="utf-8") as fin, open(args.output, "w", encoding="utf-8") as fout:
        for line_no, line in enumerate(fin, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                skipped += 1
                print(f"skip line {line_no}: invalid JSON", file=sys.stderr)
                continue
            converted = convert_record(
                obj, args.task, args.context_key, args.claim_key,
                args.label_key, args.label_scale, aliases,
            )
            if converted is None:
                skipped += 1
                print(f"skip line {line_no}: unmappable record", file=sys.stderr)
                continue
            fout.write(json.dumps(converted, ensure_ascii=False) + "\n")
            kept += 1

    print(f"converted {kept} records, skipped {skipped}", file=sys.stderr)
    return 0 if kept > 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
