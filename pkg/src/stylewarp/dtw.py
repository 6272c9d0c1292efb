"""Dynamic time warping: exact quadratic DP, windowed DP, and the multiresolution approximation.

Series are (length, channels) arrays; scalar series are accepted as 1-D and
treated as single-channel. Warping-path indices are 1-based: a path runs
from (1, 1) to (m, n) and consecutive pairs differ by at most one in each
index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleWindowError, ValidationError


@dataclass(frozen=True)
class WarpResult:
    """Alignment cost plus the 1-based warping path that realizes it."""

    cost: float
    path: tuple[tuple[int, int], ...]


def as_series(values) -> np.ndarray:
    """Coerce input to a (length, channels) float array and validate it."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"series must be a non-empty 1-D or 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("series contains non-finite values")
    return arr


def point_distance(a, b) -> float:
    """Euclidean distance between two equally sized points."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValidationError(f"point dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(((a - b) ** 2).sum()))


def _check_pair(A, B) -> tuple[np.ndarray, np.ndarray]:
    A = as_series(A)
    B = as_series(B)
    if A.shape[1] != B.shape[1]:
        raise ValidationError(
            f"series have different channel counts: {A.shape[1]} vs {B.shape[1]}"
        )
    return A, B


def _distance_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # direct differences, one row at a time: the ||a||^2+||b||^2-2ab identity
    # would lose the exact zero for identical points to cancellation
    m = A.shape[0]
    d = np.empty((m, B.shape[0]))
    for i in range(m):
        d[i] = np.sqrt(((A[i] - B) ** 2).sum(axis=1))
    return d


def dtw_exact(A, B) -> WarpResult:
    """Exact DTW via the full cumulative-cost recurrence.

    Ties during backtracking prefer the diagonal predecessor, then the
    one-step-back-in-A predecessor, so paths are deterministic.
    """
    A, B = _check_pair(A, B)
    m, n = A.shape[0], B.shape[0]
    d = _distance_matrix(A, B).tolist()
    # 0 = diagonal, 1 = (i-1, j), 2 = (i, j-1)
    bp = np.empty((m, n), dtype=np.int8)

    row = d[0][:]
    for j in range(1, n):
        row[j] += row[j - 1]
    bp[0, :] = 2
    prev = row
    for i in range(1, m):
        di = d[i]
        cur = [0.0] * n
        cur[0] = prev[0] + di[0]
        bpi = [1] + [0] * (n - 1)
        for j in range(1, n):
            diag = prev[j - 1]
            up = prev[j]
            left = cur[j - 1]
            if diag <= up and diag <= left:
                best, b = diag, 0
            elif up <= left:
                best, b = up, 1
            else:
                best, b = left, 2
            cur[j] = di[j] + best
            bpi[j] = b
        bp[i, :] = bpi
        prev = cur

    path = []
    i, j = m - 1, n - 1
    while True:
        path.append((i + 1, j + 1))
        if i == 0 and j == 0:
            break
        b = bp[i, j]
        if b == 0:
            i -= 1
            j -= 1
        elif b == 1:
            i -= 1
        else:
            j -= 1
    path.reverse()
    return WarpResult(cost=float(prev[n - 1]), path=tuple(path))


def band_dtw(A, B, window) -> WarpResult:
    """DTW restricted to an explicit cell window; cells outside are unreachable.

    ``window`` is any iterable of 1-based (i, j) pairs. Raises
    InfeasibleWindowError when no monotone continuous path from (1, 1) to
    (m, n) stays inside the window.
    """
    A, B = _check_pair(A, B)
    m, n = A.shape[0], B.shape[0]
    cells = sorted(set(window))
    if not cells:
        raise InfeasibleWindowError("empty window")
    for i, j in cells:
        if not (1 <= i <= m and 1 <= j <= n):
            raise ValidationError(f"window cell ({i}, {j}) outside the {m} x {n} grid")

    gamma: dict[tuple[int, int], float] = {}
    bp: dict[tuple[int, int], int] = {}
    inf = float("inf")
    for i, j in cells:
        dij = point_distance(A[i - 1], B[j - 1])
        if i == 1 and j == 1:
            gamma[(1, 1)] = dij
            continue
        diag = gamma.get((i - 1, j - 1), inf)
        up = gamma.get((i - 1, j), inf)
        left = gamma.get((i, j - 1), inf)
        if diag <= up and diag <= left:
            best, b = diag, 0
        elif up <= left:
            best, b = up, 1
        else:
            best, b = left, 2
        if best == inf:
            continue
        gamma[(i, j)] = dij + best
        bp[(i, j)] = b

    if (m, n) not in gamma:
        raise InfeasibleWindowError(
            f"window admits no warping path from (1, 1) to ({m}, {n})"
        )

    path = []
    i, j = m, n
    while True:
        path.append((i, j))
        if (i, j) == (1, 1):
            break
        b = bp[(i, j)]
        if b == 0:
            i -= 1
            j -= 1
        elif b == 1:
            i -= 1
        else:
            j -= 1
    path.reverse()
    return WarpResult(cost=float(gamma[(m, n)]), path=tuple(path))


def _halve(series: np.ndarray) -> np.ndarray:
    """Coarsen by averaging adjacent pairs; an odd tail element is kept as-is."""
    m = series.shape[0]
    half = m // 2
    coarse = (series[0 : 2 * half : 2] + series[1 : 2 * half : 2]) / 2.0
    if m % 2:
        coarse = np.vstack([coarse, series[-1:]])
    return coarse


def _expand_window(path, m: int, n: int, radius: int) -> set[tuple[int, int]]:
    """Widen a coarse path by ``radius`` cells, then project onto the fine grid.

    Widening happens in coarse coordinates, so each radius step doubles when
    projected; each coarse cell covers a 2 x 2 block of fine cells.
    """
    widened: set[tuple[int, int]] = set()
    for ci, cj in path:
        for a in range(ci - radius, ci + radius + 1):
            for b in range(cj - radius, cj + radius + 1):
                widened.add((a, b))
    window: set[tuple[int, int]] = set()
    for ci, cj in widened:
        for i in (2 * ci - 1, 2 * ci):
            if i < 1 or i > m:
                continue
            for j in (2 * cj - 1, 2 * cj):
                if 1 <= j <= n:
                    window.add((i, j))
    return window


def fastdtw(A, B, radius: int = 1) -> WarpResult:
    """Multiresolution approximate DTW.

    Recursively coarsens both series, warps the half-resolution pair, and
    refines within a window of ``radius`` cells around the projected coarse
    path. The cost is that of a genuine warping path, so it never
    undershoots the exact optimum; with ``radius >= max(m, n)`` it equals it.
    """
    if radius < 0:
        raise ValidationError(f"radius must be >= 0, got {radius}")
    A, B = _check_pair(A, B)
    if min(A.shape[0], B.shape[0]) <= radius + 2:
        return dtw_exact(A, B)
    coarse = fastdtw(_halve(A), _halve(B), radius)
    window = _expand_window(coarse.path, A.shape[0], B.shape[0], radius)
    return band_dtw(A, B, window)


def is_valid_path(path, m: int, n: int) -> bool:
    """Check boundary, monotonicity, and continuity of a warping path."""
    if not path or path[0] != (1, 1) or path[-1] != (m, n):
        return False
    for (i0, j0), (i1, j1) in zip(path, path[1:]):
        di, dj = i1 - i0, j1 - j0
        if di < 0 or dj < 0 or di > 1 or dj > 1 or (di, dj) == (0, 0):
            return False
    return True


def path_cost(A, B, path) -> float:
    """Sum of point distances along a path; independent of any DP table."""
    A, B = _check_pair(A, B)
    return float(sum(point_distance(A[i - 1], B[j - 1]) for i, j in path))
