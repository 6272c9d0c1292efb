from pathlib import Path

import numpy as np
import pytest

from stylewarp.corpus import Document, build_vocab
from stylewarp.embedding import TrainingConfig, train

FIXTURE_BOOKS = Path(__file__).parent / "fixtures" / "books"


def two_topic_document(seed: int, n_sentences: int = 100, length: int = 6) -> Document:
    """Synthetic corpus of two disjoint topic blocks: {a,b,c} and {x,y,z}.

    Sentences alternate between the blocks and draw tokens with replacement,
    so words co-occur only within their own block.
    """
    rng = np.random.default_rng(seed)
    blocks = [["a", "b", "c"], ["x", "y", "z"]]
    sentences = tuple(
        tuple(rng.choice(blocks[i % 2], size=length)) for i in range(n_sentences)
    )
    return Document(id=f"two-topic-{seed}", sentences=sentences)


@pytest.fixture(scope="session")
def topic_model():
    """One trained model on the synthetic two-topic corpus, shared across tests."""
    doc = two_topic_document(seed=0)
    vocab = build_vocab([doc], min_count=1)
    cfg = TrainingConfig(dim=16, window=3, epochs=50, seed=7)
    return train([doc], vocab, cfg)


@pytest.fixture(scope="session")
def fixture_books_dir() -> Path:
    assert FIXTURE_BOOKS.is_dir()
    return FIXTURE_BOOKS
