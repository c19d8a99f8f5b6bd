"""Fixed-radius neighbor search: exact all-pairs scan and a uniform cell grid.

Both return the same sorted (i, j) pair array with i < j, using the same
minimal-image distance, so they are interchangeable bit for bit.
"""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .space import SpaceTopology, displacement, pairwise_displacements


def pairs_within_exact(positions: np.ndarray, space: SpaceTopology, radius: float) -> np.ndarray:
    disp = pairwise_displacements(space, positions)
    dist = np.linalg.norm(disp, axis=-1)
    a, b = np.triu_indices(len(positions), k=1)
    keep = dist[a, b] <= radius
    return np.stack([a[keep], b[keep]], axis=1)


def pairs_within_grid(positions: np.ndarray, space: SpaceTopology, radius: float) -> np.ndarray:
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    if n < 2:
        return np.zeros((0, 2), dtype=int)
    # cells strictly wider than the radius so rounding in the cell key cannot
    # push a neighbor two cells away
    cell = max(radius, 1e-12) * (1 + 1e-6)
    if space.is_periodic:
        L = space.side_length
        ncell = int(math.floor(L / cell))
        if ncell < 3:
            return pairs_within_exact(positions, space, radius)
        cell = L / ncell
        keys = np.floor(positions / cell).astype(int) % ncell
    else:
        ncell = 0
        keys = np.floor(positions / cell).astype(int)

    buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, (cx, cy) in enumerate(keys):
        buckets[(int(cx), int(cy))].append(i)

    candidates: set[tuple[int, int]] = set()
    for (cx, cy), members in buckets.items():
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                nx, ny = cx + dx, cy + dy
                if ncell:
                    nx, ny = nx % ncell, ny % ncell
                others = buckets.get((nx, ny))
                if not others:
                    continue
                for i in members:
                    for j in others:
                        if i < j:
                            candidates.add((i, j))
    if not candidates:
        return np.zeros((0, 2), dtype=int)
    cand = np.array(sorted(candidates), dtype=int)
    # same elementwise expression as the exact scan
    d = np.linalg.norm(displacement(space, positions[cand[:, 0]], positions[cand[:, 1]]), axis=-1)
    return cand[d <= radius]


def pairs_within(positions, space: SpaceTopology, radius: float, method: str = "exact") -> np.ndarray:
    if method == "exact":
        return pairs_within_exact(np.asarray(positions, dtype=float), space, radius)
    if method == "grid":
        return pairs_within_grid(positions, space, radius)
    raise ValueError(f"unknown neighbor search method {method!r}")


def counts_from_pairs(pairs: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(pairs[:, 0], minlength=n) + np.bincount(pairs[:, 1], minlength=n)
