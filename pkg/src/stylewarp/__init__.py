"""stylewarp: compare the flow of books as time series in word-embedding space.

Pipeline: train word embeddings on a corpus, pick anchor points by k-means
over the vocabulary, turn each book into a smoothed per-sentence
anchor-similarity signal, compare signals with dynamic time warping, and
project the resulting distance matrix to 2-D for plotting.
"""

from .analysis import (
    DistanceMatrix,
    Layout2D,
    classical_mds,
    distance_matrix,
    nearest_neighbor_author_fraction,
)
from .anchors import AnchorSet, kmeans, select_anchor_inputs
from .corpus import (
    Document,
    Vocabulary,
    build_vocab,
    load_corpus_dir,
    load_document,
    make_document,
    split_sentences,
    strip_boilerplate,
    tokenize,
)
from .dtw import WarpResult, band_dtw, dtw_exact, fastdtw, point_distance
from .embedding import (
    EmbeddingModel,
    TrainingConfig,
    analogy,
    context_windows,
    load_model,
    save_model,
    train,
)
from .errors import (
    ConvergenceError,
    InfeasibleWindowError,
    ParseError,
    StageError,
    StylewarpError,
    ValidationError,
)
from .manifest import Manifest, validate_manifest
from .pipeline import run_pipeline
from .signal import (
    SmoothingConfig,
    StyleSignal,
    cosine_similarity,
    gaussian_smooth,
    make_signal,
    sentence_vector,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorSet",
    "ConvergenceError",
    "DistanceMatrix",
    "Document",
    "EmbeddingModel",
    "InfeasibleWindowError",
    "Layout2D",
    "Manifest",
    "ParseError",
    "SmoothingConfig",
    "StageError",
    "StyleSignal",
    "StylewarpError",
    "TrainingConfig",
    "ValidationError",
    "Vocabulary",
    "WarpResult",
    "analogy",
    "band_dtw",
    "build_vocab",
    "classical_mds",
    "context_windows",
    "cosine_similarity",
    "distance_matrix",
    "dtw_exact",
    "fastdtw",
    "gaussian_smooth",
    "kmeans",
    "load_corpus_dir",
    "load_document",
    "load_model",
    "make_document",
    "make_signal",
    "nearest_neighbor_author_fraction",
    "point_distance",
    "run_pipeline",
    "save_model",
    "select_anchor_inputs",
    "sentence_vector",
    "split_sentences",
    "strip_boilerplate",
    "tokenize",
    "train",
    "validate_manifest",
]
