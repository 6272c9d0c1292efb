"""Book signals: per-sentence anchor similarities and Gaussian smoothing.

A book becomes an (N_s, k) matrix: one row per sentence that has at least
one in-vocabulary word, one column per anchor, entries are cosine
similarities. Smoothing runs per column with a truncated, renormalized
Gaussian kernel over reflect-padded data.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .anchors import AnchorSet
from .corpus import Document
from .embedding import EmbeddingModel
from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class SmoothingConfig:
    window: int = 200
    sigma: float = 60.0

    def __post_init__(self):
        if self.window < 1:
            raise ValidationError(f"window must be >= 1, got {self.window}")
        if self.sigma <= 0:
            raise ValidationError(f"sigma must be > 0, got {self.sigma}")

    @property
    def odd_window(self) -> int:
        """Kernel length: even window sizes are bumped up to the next odd."""
        return self.window + 1 if self.window % 2 == 0 else self.window


@dataclass
class SentenceSeries:
    """Mean word vectors per representable sentence, in sentence order."""

    matrix: np.ndarray
    book_id: str


@dataclass
class StyleSignal:
    """(N_s, k) anchor-similarity matrix; ``smoothing`` is None while raw."""

    matrix: np.ndarray
    book_id: str
    smoothing: SmoothingConfig | None = None


def sentence_vector(tokens, model: EmbeddingModel) -> np.ndarray | None:
    """Mean of the input vectors of in-vocabulary tokens; None if none qualify."""
    indices = [model.vocabulary.index(t) for t in tokens if t in model.vocabulary]
    if not indices:
        return None
    return model.input_vectors[indices].mean(axis=0)


def cosine_similarity(u, v) -> float:
    """u.v / (|u||v|); zero when either vector is numerically zero."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu < 1e-12 or nv < 1e-12:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def sentence_series(doc: Document, model: EmbeddingModel) -> SentenceSeries:
    rows = []
    for sentence in doc.sentences:
        vec = sentence_vector(sentence, model)
        if vec is not None:
            rows.append(vec)
    if not rows:
        raise ValidationError(f"book {doc.id!r} has no sentence with in-vocabulary words")
    return SentenceSeries(matrix=np.vstack(rows), book_id=doc.id)


def make_signal(doc: Document, model: EmbeddingModel, anchors: AnchorSet) -> StyleSignal:
    """Raw signal: entry (i, j) = cosine of sentence vector i against anchor j."""
    if anchors.k < 1:
        raise ValidationError(f"need at least one anchor, got k={anchors.k}")
    series = sentence_series(doc, model)
    rows = series.matrix
    centers = anchors.centers
    row_norms = np.linalg.norm(rows, axis=1)
    center_norms = np.linalg.norm(centers, axis=1)
    denom = row_norms[:, None] * center_norms[None, :]
    nonzero = (row_norms[:, None] >= 1e-12) & (center_norms[None, :] >= 1e-12)
    sims = np.divide(rows @ centers.T, denom, out=np.zeros((rows.shape[0], centers.shape[0])),
                     where=nonzero)
    return StyleSignal(matrix=sims, book_id=doc.id, smoothing=None)


def gaussian_kernel(window: int, sigma: float) -> np.ndarray:
    """Centered truncated Gaussian of given odd length, renormalized to sum 1."""
    offsets = np.arange(window, dtype=float) - (window - 1) / 2.0
    weights = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def gaussian_smooth(signal: StyleSignal, cfg: SmoothingConfig) -> StyleSignal:
    """Per-column convolution with a renormalized Gaussian; reflect padding at the ends.

    Kernels longer than the signal are truncated to the longest odd length
    that fits, so short texts smooth degenerately rather than failing.
    """
    matrix = signal.matrix
    if matrix.size == 0:
        raise ValidationError("cannot smooth an empty signal")
    n = matrix.shape[0]
    window = cfg.odd_window
    if window > n:
        window = n if n % 2 else n - 1
    if window <= 1:
        return StyleSignal(matrix=matrix.copy(), book_id=signal.book_id, smoothing=cfg)
    kernel = gaussian_kernel(window, cfg.sigma)
    half = window // 2
    out = np.empty_like(matrix)
    for col in range(matrix.shape[1]):
        padded = np.pad(matrix[:, col], half, mode="reflect")
        out[:, col] = np.convolve(padded, kernel, mode="valid")
    return StyleSignal(matrix=out, book_id=signal.book_id, smoothing=cfg)


def save_signal(signal: StyleSignal, path: str | Path) -> None:
    """CSV with header ``s0..s{k-1}``; 9 significant digits per value."""
    path = Path(path)
    k = signal.matrix.shape[1]
    lines = [",".join(f"s{j}" for j in range(k))]
    for row in signal.matrix:
        lines.append(",".join(f"{x:.9g}" for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_signal(path: str | Path, book_id: str | None = None) -> StyleSignal:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    lines = [l for l in lines if l.strip()]
    if not lines:
        raise ParseError(path, 1, "empty signal file")
    header = lines[0].split(",")
    if header != [f"s{j}" for j in range(len(header))]:
        raise ParseError(path, 1, f"malformed header: {lines[0]!r}")
    k = len(header)
    rows = np.empty((len(lines) - 1, k))
    for i, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != k:
            raise ParseError(path, i, f"expected {k} columns, found {len(fields)}")
        try:
            rows[i - 2] = [float(x) for x in fields]
        except ValueError:
            raise ParseError(path, i, "non-numeric value") from None
    if rows.shape[0] == 0:
        raise ParseError(path, 1, "signal has no rows")
    return StyleSignal(matrix=rows, book_id=book_id or path.stem, smoothing=None)
