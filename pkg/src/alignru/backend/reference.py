"""Deterministic lexical-overlap backend.

Coverage c = |tokens(claim) ∩ tokens(context)| / |tokens(claim)| over
lowercased whitespace tokens. The three heads are derived from c alone:
p_aligned = prob_bin = regression = c, p_neutral = 1 - c, p_contradict = 0
(lexical overlap cannot see contradiction). Exists to exercise plumbing
end to end with hand-computable outputs, not to judge semantics.
"""

from __future__ import annotations

from alignru.backend import Backend, HeadOutputs
from alignru.tokenization import WhitespaceTokenizer


def lexical_coverage(context_text: str, claim_text: str) -> float:
    claim_tokens = claim_text.lower().split()
    context_tokens = set(context_text.lower().split())
    hits = sum(1 for tok in set(claim_tokens) if tok in context_tokens)
    return hits / len(set(claim_tokens))


class ReferenceBackend(Backend):
    kind = "reference"
    max_input_tokens = None
    model_hash = None

    def __init__(self, batch_size: int = 32):
        self.batch_size = batch_size
        self._tokenizer = WhitespaceTokenizer()

    @property
    def tokenizer(self) -> WhitespaceTokenizer:
        return self._tokenizer

    def _predict_validated(self, pairs: list[tuple[str, str]]) -> list[HeadOutputs]:
        outputs = []
        for context_text, claim_text in pairs:
            c = lexical_coverage(context_text, claim_text)
            outputs.append(
                HeadOutputs(
                    probs3=(c, 1.0 - c, 0.0),
                    prob_bin=c,
                    regression=c,
                )
            )
        return outputs
