"""Collection-level analysis: pairwise distance matrix, 2-D projection, diagnostics."""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dtw
from .errors import ConvergenceError, ParseError, ValidationError
from .signal import StyleSignal

MDS_TOL = 1e-10
MDS_MAX_ITERS = 10_000


@dataclass
class DistanceMatrix:
    labels: list[str]
    values: np.ndarray

    def validate(self) -> "DistanceMatrix":
        n = len(self.labels)
        if self.values.shape != (n, n):
            raise ValidationError(f"matrix shape {self.values.shape} does not match {n} labels")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("distance matrix contains non-finite values")
        if np.any(self.values < 0):
            raise ValidationError("distance matrix contains negative entries")
        if np.abs(self.values - self.values.T).max(initial=0.0) > 1e-9:
            raise ValidationError("distance matrix is not symmetric within 1e-9")
        if np.abs(np.diag(self.values)).max(initial=0.0) > 0:
            raise ValidationError("distance matrix diagonal is not zero")
        return self


@dataclass
class Layout2D:
    labels: list[str]
    coordinates: np.ndarray


def _pair_cost(args) -> tuple[int, int, float]:
    i, j, a, b, method, radius, normalize = args
    if method == "exact":
        result = dtw.dtw_exact(a, b)
    else:
        result = dtw.fastdtw(a, b, radius)
    cost = result.cost / len(result.path) if normalize else result.cost
    return i, j, cost


def distance_matrix(
    signals: list[StyleSignal],
    method: str = "fastdtw",
    radius: int = 1,
    workers: int = 1,
    normalize: bool = False,
) -> DistanceMatrix:
    """Symmetric book-by-book DTW cost matrix; each unordered pair computed once."""
    if len(signals) < 2:
        raise ValidationError(f"need at least 2 signals, got {len(signals)}")
    if method not in ("exact", "fastdtw"):
        raise ValidationError(f"method must be 'exact' or 'fastdtw', got {method!r}")
    k = signals[0].matrix.shape[1]
    for s in signals[1:]:
        if s.matrix.shape[1] != k:
            raise ValidationError(
                f"anchor dimension mismatch: {signals[0].book_id!r} has {k} channels, "
                f"{s.book_id!r} has {s.matrix.shape[1]}"
            )
    n = len(signals)
    tasks = [
        (i, j, signals[i].matrix, signals[j].matrix, method, radius, normalize)
        for i in range(n)
        for j in range(i + 1, n)
    ]
    values = np.zeros((n, n))
    if workers > 1 and tasks:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pair_cost, tasks))
    else:
        results = [_pair_cost(t) for t in tasks]
    for i, j, cost in results:
        values[i, j] = cost
        values[j, i] = cost
    return DistanceMatrix(labels=[s.book_id for s in signals], values=values).validate()


def _dominant_eigenpair(B: np.ndarray, rng: np.random.Generator, scale: float):
    """Power iteration for the largest-|eigenvalue| pair of a symmetric matrix."""
    n = B.shape[0]
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(MDS_MAX_ITERS):
        w = B @ v
        norm = np.linalg.norm(w)
        if norm <= MDS_TOL * scale:
            return 0.0, np.zeros(n)
        v_new = w / norm
        lam = float(v_new @ (B @ v_new))
        residual = float(np.linalg.norm(B @ v_new - lam * v_new))
        v = v_new
        if residual <= MDS_TOL * max(scale, abs(lam)):
            return lam, v
    raise ConvergenceError(
        f"power iteration did not converge in {MDS_MAX_ITERS} iterations; "
        f"residual={residual:.3e}"
    )


def classical_mds(D: DistanceMatrix, dim: int = 2, seed: int = 0) -> Layout2D:
    """Torgerson scaling: double-center the squared distances, take top eigenpairs.

    Eigenpairs come from seeded power iteration with deflation, so output is
    deterministic up to per-axis sign; signs are canonicalized by making each
    column's largest-magnitude entry positive. Negative eigenvalues among the
    top ``dim`` (possible for non-Euclidean inputs such as raw DTW costs) are
    clamped to zero with a warning.
    """
    D.validate()
    n = len(D.labels)
    if n < 2:
        raise ValidationError(f"need at least 2 points for a layout, got {n}")
    if dim > n - 1:
        raise ValidationError(f"dim={dim} exceeds n-1={n - 1}")

    sq = D.values**2
    J = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * (J @ sq @ J)
    B = (B + B.T) / 2.0
    scale = max(float(np.abs(B).max()), 1.0)

    rng = np.random.default_rng(seed)
    coords = np.zeros((n, dim))
    for axis in range(dim):
        lam, v = _dominant_eigenpair(B, rng, scale)
        clamped = max(lam, 0.0)
        if lam < 0:
            warnings.warn(
                f"clamping negative eigenvalue {lam:.6g} on axis {axis}; "
                "distances are not Euclidean-embeddable",
                RuntimeWarning,
                stacklevel=2,
            )
        coords[:, axis] = v * np.sqrt(clamped)
        B -= lam * np.outer(v, v)

    for axis in range(dim):
        col = coords[:, axis]
        idx = int(np.argmax(np.abs(col)))
        if col[idx] < 0:
            coords[:, axis] = -col
    return Layout2D(labels=list(D.labels), coordinates=coords)


def nearest_neighbor_author_fraction(
    D: DistanceMatrix, authors: dict[str, str]
) -> tuple[float, dict[str, dict[str, str | bool]]]:
    """Fraction of books whose closest other book shares their author.

    Returns (fraction, per-book detail). Books without an author entry never
    count as hits.
    """
    n = len(D.labels)
    if n < 2:
        raise ValidationError("need at least 2 books")
    detail: dict[str, dict[str, str | bool]] = {}
    hits = 0
    for i, label in enumerate(D.labels):
        row = D.values[i].copy()
        row[i] = np.inf
        j = int(np.argmin(row))
        same = (
            label in authors
            and D.labels[j] in authors
            and authors[label] == authors[D.labels[j]]
        )
        hits += int(same)
        detail[label] = {"nearest": D.labels[j], "same_author": bool(same)}
    return hits / n, detail


def save_distance_matrix(D: DistanceMatrix, path: str | Path) -> None:
    """CSV with a label header row and a label column, full-precision cells."""
    path = Path(path)
    lines = ["," + ",".join(D.labels)]
    for label, row in zip(D.labels, D.values):
        lines.append(label + "," + ",".join(repr(float(x)) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_distance_matrix(path: str | Path) -> DistanceMatrix:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ParseError(path, 1, "empty distance matrix file")
    header = lines[0].split(",")
    if header[0] != "":
        raise ParseError(path, 1, "header must start with an empty cell")
    labels = header[1:]
    n = len(labels)
    if len(lines) - 1 != n:
        raise ParseError(path, len(lines), f"expected {n} data rows, found {len(lines) - 1}")
    values = np.empty((n, n))
    for i, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != n + 1:
            raise ParseError(path, i, f"expected {n + 1} columns, found {len(fields)}")
        if fields[0] != labels[i - 2]:
            raise ParseError(path, i, f"row label {fields[0]!r} does not match header")
        try:
            values[i - 2] = [float(x) for x in fields[1:]]
        except ValueError:
            raise ParseError(path, i, "non-numeric cell") from None
    return DistanceMatrix(labels=labels, values=values).validate()


def save_layout(layout: Layout2D, path: str | Path) -> None:
    path = Path(path)
    lines = ["label,x,y"]
    for label, (x, y) in zip(layout.labels, layout.coordinates):
        lines.append(f"{label},{float(x)!r},{float(y)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_layout(path: str | Path) -> Layout2D:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines or lines[0] != "label,x,y":
        raise ParseError(path, 1, "expected header 'label,x,y'")
    labels: list[str] = []
    coords: list[list[float]] = []
    for i, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != 3:
            raise ParseError(path, i, f"expected 3 columns, found {len(fields)}")
        try:
            coords.append([float(fields[1]), float(fields[2])])
        except ValueError:
            raise ParseError(path, i, "non-numeric coordinate") from None
        labels.append(fields[0])
    if not labels:
        raise ParseError(path, 1, "layout has no rows")
    return Layout2D(labels=labels, coordinates=np.array(coords))


def load_groups(path: str | Path) -> dict[str, str]:
    """Two-column CSV mapping book id to group (author); no header."""
    path = Path(path)
    groups: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 2:
                raise ParseError(path, lineno, f"expected 2 columns, found {len(fields)}")
            if fields[0] in groups:
                raise ParseError(path, lineno, f"duplicate book id {fields[0]!r}")
            groups[fields[0]] = fields[1]
    return groups
