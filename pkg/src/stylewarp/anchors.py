"""Anchor selection: k-means over vocabulary vectors.

Points are canonically sorted (lexicographically by coordinates) before
seeding, so the result depends only on the point set, the seed, and k --
never on input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embedding import EmbeddingModel
from .errors import ParseError, ValidationError

DEFAULT_K = 4
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 100


@dataclass
class AnchorSet:
    """k cluster centers plus the inertia trace of the Lloyd iterations."""

    centers: np.ndarray
    k: int
    inertia: float
    history: list[float]


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    sq = (
        (points * points).sum(axis=1)[:, None]
        + (centers * centers).sum(axis=1)[None, :]
        - 2.0 * (points @ centers.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return sq


def _seed_centers(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++: subsequent centers drawn with probability proportional to D^2."""
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        total = d2.sum()
        if total <= 0.0:
            # all remaining mass on already-chosen points; take the first unchosen
            taken = set(chosen)
            idx = next(i for i in range(n) if i not in taken)
        else:
            cum = np.cumsum(d2)
            idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        chosen.append(idx)
        d2 = np.minimum(d2, ((points - points[idx]) ** 2).sum(axis=1))
    return points[chosen].copy()


def kmeans(
    points,
    k: int,
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
) -> AnchorSet:
    """Lloyd's algorithm with k-means++ seeding; deterministic given seed.

    Iterates until the largest center movement drops below ``tol`` (or the
    assignment stops changing, or ``max_iters``). An emptied cluster is
    repaired by handing it the point currently farthest from its center.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValidationError(f"points must be a 2-D matrix, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise ValidationError("points contain non-finite values")
    n = points.shape[0]
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if n < k:
        raise ValidationError(f"need at least k={k} points, got {n}")

    order = np.lexsort(points.T[::-1])
    pts = points[order]
    rng = np.random.default_rng(seed)
    centers = _seed_centers(pts, k, rng)

    history: list[float] = []
    prev_assign = None
    for _ in range(max_iters):
        sq = _squared_distances(pts, centers)
        assign = np.argmin(sq, axis=1)
        point_sq = sq[np.arange(n), assign]

        present = np.bincount(assign, minlength=k)
        for empty in np.flatnonzero(present == 0):
            idx = int(np.argmax(point_sq))
            assign[idx] = empty
            point_sq[idx] = -1.0
            present = np.bincount(assign, minlength=k)

        new_centers = centers.copy()
        for c in range(k):
            members = np.flatnonzero(assign == c)
            if members.size:
                new_centers[c] = pts[members].mean(axis=0)

        inertia = float(_squared_distances(pts, new_centers)[np.arange(n), assign].sum())
        if history and inertia > history[-1] + 1e-9 * max(1.0, history[-1]):
            raise AssertionError(
                f"inertia increased across Lloyd iterations: {history[-1]} -> {inertia}"
            )
        history.append(inertia)

        movement = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        centers = new_centers
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            break
        prev_assign = assign
        if movement < tol:
            break

    return AnchorSet(centers=centers, k=k, inertia=history[-1], history=history)


def select_anchor_inputs(model: EmbeddingModel, top_n: int = 0) -> np.ndarray:
    """Input vectors of the ``top_n`` most frequent tokens; 0 means the whole vocabulary.

    Vocabulary indices are frequency-ranked, so this is a row slice.
    """
    if top_n < 0:
        raise ValidationError(f"top_n must be >= 0, got {top_n}")
    V = model.input_vectors.shape[0]
    if top_n == 0 or top_n > V:
        top_n = V
    return model.input_vectors[:top_n].copy()


def normalize_rows(points: np.ndarray) -> np.ndarray:
    """Project points onto the unit sphere; zero rows are left at the origin."""
    norms = np.linalg.norm(points, axis=1, keepdims=True)
    return np.where(norms > 1e-12, points / np.maximum(norms, 1e-12), 0.0)


def save_anchors(anchors: AnchorSet, path: str | Path) -> None:
    """k rows of dim comma-separated coordinates, full round-trip precision."""
    path = Path(path)
    lines = [",".join(repr(float(x)) for x in row) for row in anchors.centers]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_anchors(path: str | Path) -> AnchorSet:
    path = Path(path)
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = [float(x) for x in line.split(",")]
            except ValueError:
                raise ParseError(path, lineno, "non-numeric coordinate") from None
            if rows and len(row) != len(rows[0]):
                raise ParseError(path, lineno, "inconsistent row width")
            rows.append(row)
    if not rows:
        raise ParseError(path, 1, "no anchor rows")
    centers = np.array(rows)
    return AnchorSet(centers=centers, k=centers.shape[0], inertia=float("nan"), history=[])
