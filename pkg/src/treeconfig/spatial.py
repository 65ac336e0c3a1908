"""Fixed-radius neighbor search via uniform grid hashing.

Points are bucketed into axis-aligned cells of side >= the query radius, so
every point within radius r of a query lies in the query's own cell or one
of its 3^d neighbors. Queries are processed in cell groups so distance
evaluation is a handful of vectorized blocks instead of a per-point loop.
"""

from __future__ import annotations

from itertools import product

import numpy as np

# cap on rows*cols of a single distance block (keeps peak memory ~64 MB)
_BLOCK_CAP = 8_000_000


class UniformGrid:
    """Hash grid over an (n, d) point set for closed-ball candidate queries.

    Candidate index arrays are always ascending, so downstream accumulation
    in atom-index order is deterministic.
    """

    def __init__(self, points: np.ndarray, cell_size: float):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or len(points) == 0:
            raise ValueError("points must be a non-empty (n, d) array")
        if not (cell_size > 0):
            raise ValueError("cell_size must be positive")
        self.points = points
        self.cell_size = float(cell_size)
        self.d = points.shape[1]
        coords = np.floor(points / self.cell_size).astype(np.int64)
        self._cells: dict[tuple[int, ...], np.ndarray] = {}
        order = np.lexsort(coords.T[::-1])
        sorted_coords = coords[order]
        boundaries = np.flatnonzero(np.any(np.diff(sorted_coords, axis=0) != 0, axis=1))
        starts = np.concatenate(([0], boundaries + 1))
        ends = np.concatenate((boundaries + 1, [len(points)]))
        for s, e in zip(starts, ends):
            key = tuple(int(c) for c in sorted_coords[s])
            self._cells[key] = np.sort(order[s:e])

    def cell_of(self, point: np.ndarray) -> tuple[int, ...]:
        return tuple(int(c) for c in np.floor(np.asarray(point) / self.cell_size))

    def candidates_for_cell(self, cell: tuple[int, ...]) -> np.ndarray:
        """Ascending indices of points in the 3^d neighborhood of `cell`."""
        chunks = []
        for offset in product((-1, 0, 1), repeat=self.d):
            key = tuple(c + o for c, o in zip(cell, offset))
            hit = self._cells.get(key)
            if hit is not None:
                chunks.append(hit)
        if not chunks:
            return np.empty(0, dtype=np.int64)
        return np.sort(np.concatenate(chunks))

    def query_groups(self, queries: np.ndarray):
        """Yield (query_indices, candidate_indices) per occupied query cell.

        Query indices within a group are ascending; groups are emitted in
        lexicographic cell order, so iteration order is deterministic.
        """
        queries = np.asarray(queries, dtype=float)
        qcoords = np.floor(queries / self.cell_size).astype(np.int64)
        order = np.lexsort(qcoords.T[::-1])
        sorted_coords = qcoords[order]
        if len(queries) == 0:
            return
        boundaries = np.flatnonzero(np.any(np.diff(sorted_coords, axis=0) != 0, axis=1))
        starts = np.concatenate(([0], boundaries + 1))
        ends = np.concatenate((boundaries + 1, [len(queries)]))
        for s, e in zip(starts, ends):
            cell = tuple(int(c) for c in sorted_coords[s])
            yield np.sort(order[s:e]), self.candidates_for_cell(cell)


def pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, (len(a), len(b)), via the dot expansion.

    Built in place to keep memory traffic down. Rounding can leave tiny
    negatives for coincident points; callers comparing against positive
    squared bounds are unaffected.
    """
    sq = a @ b.T
    sq *= -2.0
    sq += np.einsum("ij,ij->i", a, a)[:, None]
    sq += np.einsum("ij,ij->i", b, b)[None, :]
    return sq


def block_rows(n_rows: int, n_cols: int) -> int:
    """Row chunk size keeping a distance block under the memory cap."""
    if n_cols <= 0:
        return n_rows
    return max(1, min(n_rows, _BLOCK_CAP // max(1, n_cols)))
