"""Pure-Python fallback for the hot text-scanning loops.

The compiled extension ``alignru._kernels`` implements the same two
functions; ``alignru.kernels`` selects whichever is importable. The two
implementations must stay behaviourally identical -- tests/test_kernels.py
enforces equivalence on fuzzed input.
"""

from __future__ import annotations

TERMINALS = ".!?…"


def boundary_candidates(text: str) -> list[int]:
    """Indices of terminal punctuation followed by whitespace and then an
    uppercase letter or digit.

    Candidates are raw: the caller still applies the abbreviation filter.
    """
    n = len(text)
    out: list[int] = []
    for i in range(n):
        if text[i] not in TERMINALS:
            continue
        j = i + 1
        if j >= n or not text[j].isspace():
            continue
        while j < n and text[j].isspace():
            j += 1
        if j >= n:
            continue
        nxt = text[j]
        if nxt.isupper() or nxt.isdigit():
            out.append(i)
    return out


def count_ws_tokens(text: str) -> int:
    """Number of whitespace-separated tokens; equals ``len(text.split())``."""
    count = 0
    in_token = False
    for ch in text:
        if ch.isspace():
            in_token = False
        elif not in_token:
            in_token = True
            count += 1
    return count
