"""Book ingestion: boilerplate stripping, sentence splitting, tokenization, vocabulary.

All functions here are pure and total unless noted; documents can be
processed in parallel and vocabulary counts merged in any order.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError

START_MARKER = "*** START OF"
END_MARKER = "*** END OF"

# Abbreviations whose trailing period never ends a sentence. Deliberately
# short and documented: reproducibility beats recall here.
ABBREVIATIONS = frozenset(
    ["mr", "mrs", "ms", "dr", "st", "vs", "etc", "prof", "rev", "capt", "col", "gen", "jr", "sr"]
)

_TERMINATOR = re.compile(r"[.!?]")
_WORD = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")


@dataclass(frozen=True)
class Document:
    """A tokenized book: ordered sentences of tokens, plus size counters."""

    id: str
    sentences: tuple[tuple[str, ...], ...]
    word_count: int = field(init=False)
    sentence_count: int = field(init=False)

    def __post_init__(self):
        if any(len(s) == 0 for s in self.sentences):
            raise ValidationError(f"document {self.id!r} contains an empty sentence")
        object.__setattr__(self, "word_count", sum(len(s) for s in self.sentences))
        object.__setattr__(self, "sentence_count", len(self.sentences))


@dataclass
class Vocabulary:
    """Token/index bijection in descending-frequency order.

    ``counts`` is None for vocabularies reconstructed from a saved model,
    where only the order (still frequency-ranked) survives.
    """

    token_to_index: dict[str, int]
    index_to_token: list[str]
    counts: dict[str, int] | None
    min_count: int

    def __len__(self) -> int:
        return len(self.index_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_index

    def index(self, token: str) -> int:
        return self.token_to_index[token]

    @classmethod
    def from_tokens(cls, tokens: list[str]) -> "Vocabulary":
        """Rebuild a vocabulary from an ordered token list (counts unknown)."""
        return cls(
            token_to_index={t: i for i, t in enumerate(tokens)},
            index_to_token=list(tokens),
            counts=None,
            min_count=1,
        )


def strip_boilerplate(raw_text: str) -> str:
    """Drop license header/footer blocks delimited by ``*** START OF`` / ``*** END OF`` lines.

    Returns the text between the first start-marker line and the first
    end-marker line after it. Missing markers trim nothing on that side.
    """
    lines = raw_text.splitlines(keepends=True)
    start = 0
    for i, line in enumerate(lines):
        if START_MARKER in line:
            start = i + 1
            break
    end = len(lines)
    for i in range(start, len(lines)):
        if END_MARKER in lines[i]:
            end = i
            break
    if start == 0 and end == len(lines):
        return raw_text
    return "".join(lines[start:end])


def _ends_abbreviation(text: str, dot_pos: int) -> bool:
    j = dot_pos
    while j > 0 and text[j - 1].isalpha():
        j -= 1
    return text[j:dot_pos].lower() in ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Split on ``.``, ``!``, ``?`` followed by whitespace or end of text.

    A period directly after a known abbreviation does not split. Never
    returns empty strings.
    """
    sentences: list[str] = []
    start = 0
    for m in _TERMINATOR.finditer(text):
        end = m.end()
        if end < len(text) and not text[end].isspace():
            continue
        if m.group() == "." and _ends_abbreviation(text, m.start()):
            continue
        piece = text[start:end].strip()
        if piece:
            sentences.append(piece)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(sentence: str) -> list[str]:
    """Lowercase and keep alphabetic runs; apostrophes survive word-internally."""
    return _WORD.findall(sentence.lower().replace("’", "'"))


def make_document(book_id: str, raw_text: str) -> Document:
    """Full ingestion of one book: strip, split, tokenize, drop empty sentences."""
    body = strip_boilerplate(raw_text)
    sentences = tuple(
        tuple(tokens) for tokens in (tokenize(s) for s in split_sentences(body)) if tokens
    )
    return Document(id=book_id, sentences=sentences)


def load_document(path: str | Path) -> Document:
    """Read a UTF-8 text file (invalid bytes replaced); the file stem is the id."""
    path = Path(path)
    raw = path.read_text(encoding="utf-8", errors="replace")
    return make_document(path.stem, raw)


def load_corpus_dir(directory: str | Path) -> list[Document]:
    """Load every ``*.txt`` in a directory, sorted by filename for determinism."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ValidationError(f"corpus directory not found: {directory}")
    paths = sorted(directory.glob("*.txt"))
    if not paths:
        raise ValidationError(f"no .txt files in corpus directory: {directory}")
    return [load_document(p) for p in paths]


def build_vocab(documents: list[Document], min_count: int = 5) -> Vocabulary:
    """Count tokens over all documents and retain those seen at least ``min_count`` times.

    Indices are assigned in descending-count order, ties broken
    lexicographically, so index order is a total order.
    """
    if min_count < 1:
        raise ValidationError(f"min_count must be >= 1, got {min_count}")
    counts: Counter[str] = Counter()
    for doc in documents:
        for sentence in doc.sentences:
            counts.update(sentence)
    retained = {t: c for t, c in counts.items() if c >= min_count}
    if not retained:
        raise ValidationError("no trainable vocabulary: corpus is empty or below min_count")
    ordered = sorted(retained, key=lambda t: (-retained[t], t))
    return Vocabulary(
        token_to_index={t: i for i, t in enumerate(ordered)},
        index_to_token=ordered,
        counts=retained,
        min_count=min_count,
    )
