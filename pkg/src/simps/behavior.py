"""Social motion influence.

Perceived surround (a low-pass filtered head count within the social
radius), the hysteresis switch between socializing and isolating, the
excitation level, and the tension field whose direction becomes the
willingness to move.

Scalar functions act on one individual and are the readable reference;
the ``*_all`` variants evaluate a whole population at once and are what
the simulator uses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .social_graph import SocialGraph
from .space import SpaceTopology, displacement, pairwise_displacements

# Lower bound on pair distance before raising it to the fading exponent.
DISTANCE_EPSILON = 0.01


class Mode(str, enum.Enum):
    SOCIALIZE = "socialize"
    ISOLATE = "isolate"


@dataclass(frozen=True)
class PerceptionParams:
    social_radius: float = 3.5
    half_perception_time: float = 4.0
    fading_exponent: float = 1.0

    def __post_init__(self):
        if self.social_radius < 0:
            raise ValueError("social radius must be >= 0")
        if self.half_perception_time <= 0:
            raise ValueError("half-perception time must be > 0")
        if not 0.0 <= self.fading_exponent <= 3.0:
            raise ValueError("distance fading exponent must lie in [0, 3]")


@dataclass
class BehaviorState:
    mode: Mode
    perceived_surround: float


def count_surround(positions, space: SpaceTopology, i: int, social_radius: float) -> int:
    positions = np.asarray(positions, dtype=float)
    d = np.linalg.norm(displacement(space, positions[i], positions), axis=-1)
    inside = d <= social_radius
    inside[i] = False
    return int(inside.sum())


def count_surround_all(distances: np.ndarray, social_radius: float) -> np.ndarray:
    """Head counts from an (n, n) distance matrix; the diagonal is ignored."""
    inside = distances <= social_radius
    np.fill_diagonal(inside, False)
    return inside.sum(axis=1)


def update_perceived_surround(u, count):
    return (count + u) / 2.0


def decide_behavior(prev_mode: Mode, u: float, s: float, t: float) -> Mode:
    if u > s * (1.0 + t):
        return Mode.ISOLATE
    if u < s * (1.0 - t):
        return Mode.SOCIALIZE
    return prev_mode


def decide_behavior_all(isolating: np.ndarray, u, s, t) -> np.ndarray:
    """Vectorized hysteresis; modes are encoded as a boolean ``isolating`` array."""
    out = np.array(isolating, dtype=bool, copy=True)
    out[u > s * (1.0 + t)] = True
    out[u < s * (1.0 - t)] = False
    return out


def initial_mode(u: float, s: float) -> Mode:
    return Mode.SOCIALIZE if u <= s else Mode.ISOLATE


def excitation(u, s, t):
    """Urge to move in [0, 1]: zero at u == s, saturating at the comfort-range edges."""
    u, s, t = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (u, s, t)))
    band = s * t
    dev = np.abs(u - s)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        e = np.minimum(dev / band, 1.0)
    e = np.where(band > 0, e, np.where(dev == 0, 0.0, 1.0))
    return float(e) if e.ndim == 0 else e


def social_tension(
    positions,
    graph: SocialGraph,
    space: SpaceTopology,
    i: int,
    fading_exponent: float,
    mode: Mode,
) -> np.ndarray:
    """Sum of attractive (socialize) or repulsive (isolate) tensions felt by ``i``."""
    positions = np.asarray(positions, dtype=float)
    total = np.zeros(2)
    for j in range(len(positions)):
        if j == i:
            continue
        ij = displacement(space, positions[i], positions[j])
        dist = float(np.hypot(ij[0], ij[1]))
        if dist == 0.0:
            continue
        unit = ij / dist
        a = graph.weights[i, j]
        fade = max(dist, DISTANCE_EPSILON) ** fading_exponent
        if mode is Mode.SOCIALIZE:
            total += unit * a / fade
        else:
            total += -unit * (1.0 - a) / fade
    return total


def social_tension_all(
    disp: np.ndarray,
    dist: np.ndarray,
    weights: np.ndarray,
    isolating: np.ndarray,
    fading_exponent: float,
) -> np.ndarray:
    """Tension for every individual from pairwise displacement/distance matrices.

    ``disp[i, j]`` is the vector ij and ``dist[i, j]`` its norm. Coincident
    pairs contribute nothing since their direction is undefined.
    """
    fade = np.maximum(dist, DISTANCE_EPSILON) ** fading_exponent
    coeff = np.where(isolating[:, None], -(1.0 - weights), weights) / fade
    with np.errstate(divide="ignore", invalid="ignore"):
        coeff = np.where(dist > 0, coeff / dist, 0.0)
    np.fill_diagonal(coeff, 0.0)
    return np.einsum("ij,ijk->ik", coeff, disp)


def willingness(tension, e) -> np.ndarray:
    """Unit tension direction scaled by excitation; zero when the tensions cancel."""
    tension = np.asarray(tension, dtype=float)
    norm = np.linalg.norm(tension, axis=-1, keepdims=True)
    e = np.asarray(e, dtype=float)
    if tension.ndim > 1:
        e = e[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(norm > 0, tension / norm, 0.0) * e
    # normalization can overshoot by an ulp; the bound |w| <= 1 is exact
    over = np.linalg.norm(w, axis=-1) > 1.0
    while np.any(over):
        w = np.where(over[..., None] if w.ndim > 1 else over, w * (1.0 - 2.0**-52), w)
        over = np.linalg.norm(w, axis=-1) > 1.0
    return w


def perceive(positions, space: SpaceTopology, social_radius: float) -> np.ndarray:
    disp = pairwise_displacements(space, np.asarray(positions, dtype=float))
    return count_surround_all(np.linalg.norm(disp, axis=-1), social_radius)
