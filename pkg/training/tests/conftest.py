from __future__ import annotations

import pytest

from alignru_train.config import EncoderSpec, TrainConfig
from alignru_train.data import synthetic_corpus, synthetic_vocab_words
from alignru_train.vocab import WordPieceEncoder, build_vocab


@pytest.fixture(scope="session")
def toy_vocab() -> list[str]:
    return build_vocab(synthetic_vocab_words())


@pytest.fixture(scope="session")
def tokenizer(toy_vocab) -> WordPieceEncoder:
    return WordPieceEncoder(toy_vocab)


@pytest.fixture
def toy_config(toy_vocab) -> TrainConfig:
    return TrainConfig(
        encoder=EncoderSpec.toy(len(toy_vocab)),
        max_seq_len=48,
    )


@pytest.fixture(scope="session")
def corpus():
    return synthetic_corpus(n=200, seed=3)
