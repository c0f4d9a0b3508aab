"""Benchmark: compiled kernels vs the pure-Python fallback.

Generates a synthetic Russian/ASCII corpus, then times the sentence
boundary scan and whitespace token counting under both implementations.

Run: python3 benchmarks/bench_kernels.py [--docs N] [--words-per-doc N]
"""

from __future__ import annotations

import argparse
import random
import time

import alignru._kernels_py as pure

try:
    import alignru._kernels as compiled
except ImportError:
    compiled = None

WORDS = [
    "мама", "папа", "дом", "кошка", "собака", "москва", "город", "жил",
    "быстро", "ярко", "солнце", "светит", "утро", "вечер", "книга", "стол",
    "alpha", "beta", "gamma", "value", "г.", "т.е.", "др.", "2024", "7",
]


def make_corpus(n_docs: int, words_per_doc: int, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    docs = []
    for _ in range(n_docs):
        parts = []
        written = 0
        while written < words_per_doc:
            length = rng.randint(3, 12)
            sentence = " ".join(rng.choice(WORDS) for _ in range(length))
            parts.append(sentence.capitalize() + rng.choice(".!?…"))
            parts.append(rng.choice([" ", "  ", "\n"]))
            written += length
        docs.append("".join(parts))
    return docs


def bench(func, docs: list[str], repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for doc in docs:
            func(doc)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--docs", type=int, default=2000)
    parser.add_argument("--words-per-doc", type=int, default=400)
    args = parser.parse_args()

    docs = make_corpus(args.docs, args.words_per_doc)
    total_chars = sum(len(d) for d in docs)
    print(f"corpus: {len(docs)} docs, {total_chars / 1e6:.1f} M chars")

    rows = []
    for name, func_pure, func_comp in (
        ("boundary_candidates", pure.boundary_candidates,
         compiled.boundary_candidates if compiled else None),
        ("count_ws_tokens", pure.count_ws_tokens,
         compiled.count_ws_tokens if compiled else None),
    ):
        t_pure = bench(func_pure, docs)
        if func_comp is not None:
            sample = docs[: min(50, len(docs))]
            for doc in sample:
                assert func_comp(doc) == func_pure(doc), "kernel mismatch"
            t_comp = bench(func_comp, docs)
            rows.append((name, t_pure, t_comp, t_pure / t_comp))
        else:
            rows.append((name, t_pure, None, None))

    print(f"{'kernel':24} {'pure (s)':>10} {'compiled (s)':>14} {'speedup':>9}")
    for name, t_pure, t_comp, speedup in rows:
        if t_comp is None:
            print(f"{name:24} {t_pure:10.3f} {'(not built)':>14} {'-':>9}")
        else:
            print(f"{name:24} {t_pure:10.3f} {t_comp:14.3f} {speedup:8.1f}x")


if __name__ == "__main__":
    main()
