"""Word-embedding trainer: CBOW and skip-gram with negative sampling.

Single-worker training is bit-reproducible given (seed, corpus, config).
The optional multi-worker mode updates shared weights without locks, so
its results are approximate and excluded from reproducibility guarantees.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Document, Vocabulary
from .errors import ParseError, ValidationError

NS_EXPONENT = 0.75
LR_FLOOR_RATIO = 1e-4


@dataclass(frozen=True)
class TrainingConfig:
    dim: int = 100
    window: int = 10
    epochs: int = 5
    negative: int = 5
    initial_lr: float = 0.025
    seed: int = 1
    mode: str = "cbow"
    subsample: float = 0.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"dim must be >= 1, got {self.dim}")
        if self.window < 1:
            raise ValidationError(f"window must be >= 1, got {self.window}")
        if self.epochs < 1:
            raise ValidationError(f"epochs must be >= 1, got {self.epochs}")
        if self.negative < 1:
            raise ValidationError(f"negative must be >= 1, got {self.negative}")
        if self.initial_lr <= 0:
            raise ValidationError(f"initial_lr must be > 0, got {self.initial_lr}")
        if self.mode not in ("cbow", "skipgram"):
            raise ValidationError(f"mode must be 'cbow' or 'skipgram', got {self.mode!r}")
        if self.subsample < 0:
            raise ValidationError(f"subsample must be >= 0, got {self.subsample}")


@dataclass
class EmbeddingModel:
    """Trained vectors: one input and one output row per vocabulary token."""

    vocabulary: Vocabulary
    input_vectors: np.ndarray
    output_vectors: np.ndarray
    epoch_losses: list[float] = field(default_factory=list)

    def vector(self, token: str) -> np.ndarray:
        if token not in self.vocabulary:
            raise ValidationError(f"token not in vocabulary: {token!r}")
        return self.input_vectors[self.vocabulary.index(token)]


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def step_loss_and_grads(l1: np.ndarray, outputs: np.ndarray, labels: np.ndarray):
    """Negative-sampling logistic loss of one projected input against K+1 output rows.

    ``labels`` is 1 for the observed word and 0 for noise words. Returns
    (loss, grad wrt l1, grad wrt outputs); gradients are for descent.
    """
    scores = outputs @ l1
    signs = np.where(labels > 0, 1.0, -1.0)
    loss = float(np.logaddexp(0.0, -signs * scores).sum())
    residual = sigmoid(scores) - labels
    grad_l1 = residual @ outputs
    grad_outputs = np.outer(residual, l1)
    return loss, grad_l1, grad_outputs


def context_windows(tokens, c: int, rng: np.random.Generator | None = None):
    """(center, context) pairs with per-center window size drawn uniformly from 1..c.

    With ``rng=None`` the window is fixed at ``c``. Context is truncated at
    the sequence boundaries; centers with no context are omitted.
    """
    if c < 1:
        raise ValidationError(f"window size must be >= 1, got {c}")
    n = len(tokens)
    pairs = []
    for t in range(n):
        b = c if rng is None else int(rng.integers(1, c + 1))
        context = [tokens[u] for u in range(max(0, t - b), min(n, t + b + 1)) if u != t]
        if context:
            pairs.append((tokens[t], context))
    return pairs


def _noise_cumulative(vocabulary: Vocabulary) -> np.ndarray:
    counts = np.array(
        [vocabulary.counts[t] for t in vocabulary.index_to_token], dtype=float
    )
    return np.cumsum(counts**NS_EXPONENT)


def _draw_negatives(cum: np.ndarray, k: int, target: int, rng: np.random.Generator) -> list[int]:
    total = cum[-1]
    negatives = []
    while len(negatives) < k:
        w = int(np.searchsorted(cum, rng.random() * total, side="right"))
        if w >= len(cum):
            w = len(cum) - 1
        if w != target:
            negatives.append(w)
    return negatives


def _train_span(
    sentences: list[list[int]],
    inputs: np.ndarray,
    outputs: np.ndarray,
    cfg: TrainingConfig,
    cum: np.ndarray,
    keep_prob: np.ndarray | None,
    rng: np.random.Generator,
    total_steps: int,
    step_counter: list[int],
    epoch_loss: list[float],
) -> None:
    """One epoch over ``sentences``, mutating the weight matrices in place."""
    lr_hi = cfg.initial_lr
    lr_lo = cfg.initial_lr * LR_FLOOR_RATIO
    denom = max(total_steps - 1, 1)
    k = cfg.negative
    labels = np.zeros(k + 1)
    labels[0] = 1.0
    for sentence in sentences:
        if keep_prob is not None:
            sentence = [w for w in sentence if rng.random() < keep_prob[w]]
        n = len(sentence)
        for t in range(n):
            step = step_counter[0]
            step_counter[0] += 1
            alpha = lr_hi + (lr_lo - lr_hi) * (min(step, denom) / denom)
            b = int(rng.integers(1, cfg.window + 1))
            center = sentence[t]
            context = [sentence[u] for u in range(max(0, t - b), min(n, t + b + 1)) if u != t]
            if not context:
                continue
            if cfg.mode == "cbow":
                l1 = inputs[context].mean(axis=0)
                rows = [center] + _draw_negatives(cum, k, center, rng)
                loss, grad_l1, grad_out = step_loss_and_grads(l1, outputs[rows], labels)
                np.subtract.at(outputs, rows, alpha * grad_out)
                # full input-side correction to every context vector, the
                # convention of the reference trainers for averaged context
                np.subtract.at(inputs, context, alpha * grad_l1)
                epoch_loss[0] += loss
            else:
                for ctx in context:
                    l1 = inputs[center].copy()
                    rows = [ctx] + _draw_negatives(cum, k, ctx, rng)
                    loss, grad_l1, grad_out = step_loss_and_grads(l1, outputs[rows], labels)
                    np.subtract.at(outputs, rows, alpha * grad_out)
                    inputs[center] -= alpha * grad_l1
                    epoch_loss[0] += loss


def train(
    documents: list[Document],
    vocabulary: Vocabulary,
    config: TrainingConfig,
    workers: int = 1,
) -> EmbeddingModel:
    """Train embeddings over tokenized documents.

    The learning rate decays linearly from ``initial_lr`` down to
    ``initial_lr / 10**4`` across all (epoch, token) steps.
    """
    if len(vocabulary) == 0:
        raise ValidationError("cannot train on an empty vocabulary")
    if vocabulary.counts is None:
        raise ValidationError("vocabulary lacks frequency counts; build it from a corpus")
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")

    sentences = [
        [vocabulary.index(tok) for tok in sentence if tok in vocabulary]
        for doc in documents
        for sentence in doc.sentences
    ]
    sentences = [s for s in sentences if s]
    if not sentences:
        raise ValidationError("no in-vocabulary tokens to train on")

    rng = np.random.default_rng(config.seed)
    V, dim = len(vocabulary), config.dim
    bound = 0.5 / dim
    inputs = rng.uniform(-bound, bound, size=(V, dim))
    outputs = np.zeros((V, dim))
    cum = _noise_cumulative(vocabulary)

    keep_prob = None
    if config.subsample > 0:
        counts = np.array([vocabulary.counts[t] for t in vocabulary.index_to_token], dtype=float)
        freq = counts / counts.sum()
        ratio = config.subsample / freq
        keep_prob = np.minimum(1.0, np.sqrt(ratio) + ratio)

    token_total = sum(len(s) for s in sentences)
    total_steps = config.epochs * token_total
    epoch_losses: list[float] = []

    if workers == 1:
        step_counter = [0]
        for _ in range(config.epochs):
            epoch_loss = [0.0]
            _train_span(
                sentences, inputs, outputs, config, cum, keep_prob, rng,
                total_steps, step_counter, epoch_loss,
            )
            epoch_losses.append(epoch_loss[0])
    else:
        shards = [sentences[w::workers] for w in range(workers)]
        shard_steps = [config.epochs * sum(len(s) for s in shard) for shard in shards]
        for epoch in range(config.epochs):
            epoch_loss = [0.0]
            threads = []
            for w, shard in enumerate(shards):
                if not shard:
                    continue
                wrng = np.random.default_rng((config.seed, epoch, w))
                counter = [epoch * (shard_steps[w] // config.epochs)]
                threads.append(
                    threading.Thread(
                        target=_train_span,
                        args=(shard, inputs, outputs, config, cum, keep_prob,
                              wrng, shard_steps[w], counter, epoch_loss),
                    )
                )
            for th in threads:
                th.start()
            for th in threads:
                th.join()
            epoch_losses.append(epoch_loss[0])

    if not np.all(np.isfinite(inputs)) or not np.all(np.isfinite(outputs)):
        raise ValidationError("training diverged: non-finite weights (lower initial_lr)")
    return EmbeddingModel(vocabulary, inputs, outputs, epoch_losses)


def analogy(model: EmbeddingModel, a: str, b: str, c: str) -> str:
    """Token whose vector best matches W(a) - W(b) + W(c) by cosine, excluding a, b, c."""
    for token in (a, b, c):
        if token not in model.vocabulary:
            raise ValidationError(f"token not in vocabulary: {token!r}")
    query = model.vector(a) - model.vector(b) + model.vector(c)
    qn = np.linalg.norm(query)
    norms = np.linalg.norm(model.input_vectors, axis=1)
    denom = np.maximum(norms * qn, 1e-12)
    sims = (model.input_vectors @ query) / denom
    for token in (a, b, c):
        sims[model.vocabulary.index(token)] = -np.inf
    return model.vocabulary.index_to_token[int(np.argmax(sims))]


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    """Write vectors in the interchange text format: ``V dim`` header, one token per line."""
    path = Path(path)
    V, dim = model.input_vectors.shape
    lines = [f"{V} {dim}"]
    for i, token in enumerate(model.vocabulary.index_to_token):
        coords = " ".join(f"{x:.8f}" for x in model.input_vectors[i])
        lines.append(f"{token} {coords}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> EmbeddingModel:
    """Read a model saved by save_model; frequency counts do not survive the round trip."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()
    if not raw_lines:
        raise ParseError(path, 1, "empty model file")
    header = raw_lines[0].split()
    if len(header) != 2:
        raise ParseError(path, 1, f"malformed header: {raw_lines[0]!r}")
    try:
        V, dim = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(path, 1, f"malformed header: {raw_lines[0]!r}") from None
    if V < 1:
        raise ParseError(path, 1, "empty vocabulary (token count 0)")
    if dim < 1:
        raise ParseError(path, 1, f"invalid dimension {dim}")

    body = [(idx + 2, line) for idx, line in enumerate(raw_lines[1:]) if line.strip()]
    if len(body) != V:
        where = body[V][0] if len(body) > V else len(raw_lines) + 1
        raise ParseError(path, where, f"expected {V} token lines, found {len(body)}")

    tokens: list[str] = []
    vectors = np.empty((V, dim))
    for row, (lineno, line) in enumerate(body):
        fields = line.split()
        if len(fields) != dim + 1:
            raise ParseError(path, lineno, f"expected {dim + 1} fields, found {len(fields)}")
        try:
            vectors[row] = [float(x) for x in fields[1:]]
        except ValueError:
            raise ParseError(path, lineno, "non-numeric vector component") from None
        tokens.append(fields[0])
    if len(set(tokens)) != len(tokens):
        raise ParseError(path, 1, "duplicate tokens in model file")
    return EmbeddingModel(
        vocabulary=Vocabulary.from_tokens(tokens),
        input_vectors=vectors,
        output_vectors=np.zeros_like(vectors),
    )
