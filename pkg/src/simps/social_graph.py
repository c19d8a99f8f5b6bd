"""Directed, weighted acquaintance graphs.

Edge weights are the acquaintance felt from the origin toward the
destination, in [0, 1]. A missing edge means the destination is a total
stranger (acquaintance 0, strangeness 1).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np


class GraphFormatError(ValueError):
    """Raised for malformed edge-list documents; carries the line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class EdgeWeight:
    """Edge weight law: ``uniform`` on (0, 1] or ``constant:<w>``."""

    kind: str = "uniform"
    value: float = 1.0

    @classmethod
    def parse(cls, text: str) -> EdgeWeight:
        text = text.strip()
        if text == "uniform":
            return cls("uniform")
        if text.startswith("constant:"):
            w = float(text.split(":", 1)[1])
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"constant edge weight {w} outside [0, 1]")
            return cls("constant", w)
        raise ValueError(f"unknown edge weight law {text!r} (expected uniform or constant:<w>)")

    def __str__(self) -> str:
        return "uniform" if self.kind == "uniform" else f"constant:{self.value!r}"

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "constant":
            return np.full(size, self.value)
        # random() is in [0, 1); flip it onto (0, 1]
        return 1.0 - rng.random(size)


class SocialGraph:
    """Immutable directed graph with acquaintance weights.

    ``weights`` is a dense read-only (n, n) matrix holding A[i -> j]
    (zero where there is no edge); ``edges`` maps ordered pairs to weights.
    """

    def __init__(self, n: int, edges: Mapping[tuple[int, int], float]):
        if n < 1:
            raise ValueError("a social graph needs at least one node")
        w = np.zeros((n, n))
        clean: dict[tuple[int, int], float] = {}
        for (i, j), weight in edges.items():
            i, j, weight = int(i), int(j), float(weight)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) references a node outside 0..{n - 1}")
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not 0.0 <= weight <= 1.0:
                raise ValueError(f"edge ({i}, {j}) weight {weight} outside [0, 1]")
            w[i, j] = weight
            clean[(i, j)] = weight
        w.setflags(write=False)
        self._n = n
        self._edges = dict(sorted(clean.items()))
        self._weights = w

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> dict[tuple[int, int], float]:
        return dict(self._edges)

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    def __len__(self) -> int:
        return len(self._edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self._edges

    def out_degrees(self) -> np.ndarray:
        deg = np.zeros(self._n, dtype=int)
        for i, _ in self._edges:
            deg[i] += 1
        return deg

    def mean_out_degree(self) -> float:
        return len(self._edges) / self._n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SocialGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __repr__(self) -> str:
        return f"SocialGraph(n={self._n}, edges={len(self._edges)})"


def _check_node(g: SocialGraph, i: int) -> None:
    if not 0 <= i < g.n:
        raise IndexError(f"node id {i} outside 0..{g.n - 1}")


def acquaintance(g: SocialGraph, i: int, j: int) -> float:
    _check_node(g, i)
    _check_node(g, j)
    if i == j:
        raise ValueError("acquaintance is only defined between distinct individuals")
    return g._edges.get((i, j), 0.0)


def strangeness(g: SocialGraph, i: int, j: int) -> float:
    return 1.0 - acquaintance(g, i, j)


def generate_random(
    n: int, d: float, seed, edge_weight: EdgeWeight = EdgeWeight()
) -> SocialGraph:
    """Directed Erdos-Renyi graph: each ordered pair is linked with probability d/(n-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= d <= max(n - 1, 0):
        raise ValueError(f"average out-degree {d} outside [0, {n - 1}]")
    rng = np.random.default_rng(seed)
    if n == 1:
        return SocialGraph(1, {})
    p = d / (n - 1)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    weights = edge_weight.draw(rng, len(src))
    return SocialGraph(n, {(int(i), int(j)): float(w) for i, j, w in zip(src, dst, weights)})


def _barabasi_albert_edges(n: int, m_mean: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    # Node k attaches to floor(m) targets, plus one more with probability frac(m),
    # chosen without replacement proportionally to current degree.
    base = math.floor(m_mean)
    frac = m_mean - base
    degree = np.zeros(n)
    edges: list[tuple[int, int]] = []
    for k in range(1, n):
        m = base + (1 if frac > 0 and rng.random() < frac else 0)
        m = min(m, k)
        if m == 0:
            continue
        existing = degree[:k]
        total = existing.sum()
        if total > 0 and np.count_nonzero(existing) >= m:
            targets = rng.choice(k, size=m, replace=False, p=existing / total)
        else:
            targets = rng.choice(k, size=m, replace=False)
        for t in sorted(int(t) for t in targets):
            edges.append((t, k))
            degree[t] += 1
            degree[k] += 1
    return edges


def generate_scale_free(
    n: int, d: float, seed, edge_weight: EdgeWeight = EdgeWeight()
) -> SocialGraph:
    """Barabasi-Albert graph with mean attachment d/2, symmetrized into directed edges.

    Each undirected link becomes two directed edges with independent weights,
    so the mean out-degree is close to d.
    """
    if n < 2:
        raise ValueError("scale-free graphs need n >= 2")
    if not 2.0 <= d <= n - 1:
        raise ValueError(f"scale-free average out-degree {d} outside [2, {n - 1}]")
    rng = np.random.default_rng(seed)
    undirected = _barabasi_albert_edges(n, d / 2.0, rng)
    weights = edge_weight.draw(rng, 2 * len(undirected))
    edges: dict[tuple[int, int], float] = {}
    for k, (a, b) in enumerate(undirected):
        edges[(a, b)] = float(weights[2 * k])
        edges[(b, a)] = float(weights[2 * k + 1])
    return SocialGraph(n, edges)


def parse_graph(lines: Iterable[str]) -> SocialGraph:
    """Parse the ``origin destination weight`` edge-list format."""
    edges: dict[tuple[int, int], float] = {}
    declared_n: int | None = None
    max_id = -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "nodes":
            if len(parts) != 2:
                raise GraphFormatError(lineno, "header must read 'nodes <N>'")
            try:
                declared_n = int(parts[1])
            except ValueError:
                raise GraphFormatError(lineno, f"bad node count {parts[1]!r}") from None
            if declared_n < 1:
                raise GraphFormatError(lineno, "node count must be >= 1")
            continue
        if len(parts) != 3:
            raise GraphFormatError(lineno, f"expected 'origin destination weight', got {line!r}")
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise GraphFormatError(lineno, f"cannot parse {line!r}") from None
        if i < 0 or j < 0:
            raise GraphFormatError(lineno, "node ids must be non-negative")
        if i == j:
            raise GraphFormatError(lineno, f"self-loop on node {i}")
        if not (0.0 <= w <= 1.0):
            raise GraphFormatError(lineno, f"weight {w} outside [0, 1]")
        if (i, j) in edges:
            raise GraphFormatError(lineno, f"duplicate edge {i} -> {j}")
        edges[(i, j)] = w
        max_id = max(max_id, i, j)
    n = declared_n if declared_n is not None else max_id + 1
    if max_id >= n:
        raise GraphFormatError(0, f"node id {max_id} exceeds declared node count {n}")
    if n < 1:
        raise GraphFormatError(0, "empty graph with no 'nodes' header")
    return SocialGraph(n, edges)


def load_graph(source) -> SocialGraph:
    """Load an edge list from a path or an open text stream."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return parse_graph(fh)
    return parse_graph(source)


def format_graph(g: SocialGraph) -> str:
    out = [f"nodes {g.n}"]
    out.extend(f"{i} {j} {w!r}" for (i, j), w in g.edges.items())
    return "\n".join(out) + "\n"


def save_graph(g: SocialGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
