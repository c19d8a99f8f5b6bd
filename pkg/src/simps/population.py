"""Per-individual parameters: sociability, tolerance and kinematic limits."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

_MAX_REDRAWS = 10_000


@dataclass(frozen=True)
class Individual:
    id: int
    sociability: float
    tolerance: float
    v_max: float
    a_max: float

    @property
    def comfort_range(self) -> tuple[float, float]:
        s, t = self.sociability, self.tolerance
        return s * (1.0 - t), s * (1.0 + t)


@dataclass(frozen=True)
class PopulationParams:
    """Distribution parameters. The second moment of every normal law is a variance."""

    n: int = 100
    sociability_mean: float = 2.5
    sociability_var: float = 1.0
    tolerance_low: float = 0.1
    tolerance_high: float = 0.7
    v_max_mean: float = 1.34
    v_max_var: float = 0.26
    a_max_mean: float = 1.3
    a_max_var: float = 0.4
    seed: int | None = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("population size n must be >= 1")
        for name in ("sociability_var", "v_max_var", "a_max_var"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 < self.tolerance_low <= self.tolerance_high < 1.0:
            raise ValueError("tolerance bounds must satisfy 0 < low <= high < 1")
        # Degenerate laws must already sit inside the admissible region,
        # otherwise rejection sampling never terminates.
        if self.sociability_var == 0 and self.sociability_mean < 0:
            raise ValueError("sociability mean must be >= 0 when its variance is 0")
        if self.v_max_var == 0 and self.v_max_mean <= 0:
            raise ValueError("v_max mean must be > 0 when its variance is 0")
        if self.a_max_var == 0 and self.a_max_mean <= 0:
            raise ValueError("a_max mean must be > 0 when its variance is 0")


def _truncated_normal(rng, mean, var, size, strict):
    sd = float(np.sqrt(var))
    out = rng.normal(mean, sd, size) if sd > 0 else np.full(size, float(mean))
    bad = out <= 0 if strict else out < 0
    for _ in range(_MAX_REDRAWS):
        k = int(bad.sum())
        if k == 0:
            return out
        out[bad] = rng.normal(mean, sd, k)
        bad = out <= 0 if strict else out < 0
    raise RuntimeError(f"could not draw admissible values from N({mean}, {var})")


def sample_population(params: PopulationParams, rng: np.random.Generator | None = None) -> list[Individual]:
    """Draw ``params.n`` individuals.

    Normal draws are resampled until admissible (s >= 0, v_max > 0, a_max > 0);
    tolerance is uniform on [low, high]. When ``rng`` is omitted a generator
    seeded with ``params.seed`` is used.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    n = params.n
    s = _truncated_normal(rng, params.sociability_mean, params.sociability_var, n, strict=False)
    if params.tolerance_low == params.tolerance_high:
        t = np.full(n, params.tolerance_low)
    else:
        t = rng.uniform(params.tolerance_low, params.tolerance_high, n)
    v = _truncated_normal(rng, params.v_max_mean, params.v_max_var, n, strict=True)
    a = _truncated_normal(rng, params.a_max_mean, params.a_max_var, n, strict=True)
    return [
        Individual(i, float(s[i]), float(t[i]), float(v[i]), float(a[i]))
        for i in range(n)
    ]


def population_arrays(people: list[Individual]) -> dict[str, np.ndarray]:
    return {
        "sociability": np.array([p.sociability for p in people]),
        "tolerance": np.array([p.tolerance for p in people]),
        "v_max": np.array([p.v_max for p in people]),
        "a_max": np.array([p.a_max for p in people]),
    }


def write_population_csv(people: list[Individual], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "s", "t", "v_max", "a_max"])
        for p in people:
            w.writerow([p.id, repr(p.sociability), repr(p.tolerance), repr(p.v_max), repr(p.a_max)])


def read_population_csv(path) -> list[Individual]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            Individual(int(r["id"]), float(r["s"]), float(r["t"]), float(r["v_max"]), float(r["a_max"]))
            for r in csv.DictReader(fh)
        ]
