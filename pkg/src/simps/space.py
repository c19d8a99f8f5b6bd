"""Motion space geometry: the infinite plane and the periodic square (torus)."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class SpaceKind(str, enum.Enum):
    INFINITE = "infinite"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class SpaceTopology:
    kind: SpaceKind = SpaceKind.PERIODIC
    side_length: float | None = 200.0

    def __post_init__(self):
        kind = SpaceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is SpaceKind.PERIODIC:
            if self.side_length is None or not np.isfinite(self.side_length) or self.side_length <= 0:
                raise ValueError("periodic space needs a finite side length > 0")
        else:
            object.__setattr__(self, "side_length", None)

    @classmethod
    def infinite(cls) -> SpaceTopology:
        return cls(SpaceKind.INFINITE, None)

    @classmethod
    def torus(cls, side_length: float) -> SpaceTopology:
        return cls(SpaceKind.PERIODIC, float(side_length))

    @property
    def is_periodic(self) -> bool:
        return self.kind is SpaceKind.PERIODIC


def displacement(space: SpaceTopology, frm, to) -> np.ndarray:
    """Vector from ``frm`` to ``to`` (minimal image on the torus).

    Broadcasts over leading dimensions, so ``displacement(space, p[:, None], p[None, :])``
    gives the full pairwise matrix whose ``[i, j]`` entry points from i to j.
    """
    d = np.asarray(to, dtype=float) - np.asarray(frm, dtype=float)
    if space.is_periodic:
        L = space.side_length
        d = d - L * np.round(d / L)
    return d


def distance(space: SpaceTopology, frm, to) -> np.ndarray:
    return np.linalg.norm(displacement(space, frm, to), axis=-1)


def wrap(space: SpaceTopology, p) -> np.ndarray:
    """Canonicalize positions into [0, L) x [0, L); identity on the plane."""
    p = np.asarray(p, dtype=float)
    if not space.is_periodic:
        return p
    L = space.side_length
    q = np.mod(p, L)
    # fmod of a tiny negative value rounds up to exactly L
    return np.where(q >= L, 0.0, q)


def pairwise_displacements(space: SpaceTopology, positions: np.ndarray) -> np.ndarray:
    """(n, n, 2) array; entry [i, j] is the vector ij."""
    return displacement(space, positions[:, None, :], positions[None, :, :])
