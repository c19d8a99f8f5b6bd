"""Empirical CCDFs and log-log tail fits (power law and Weibull/stretched exponential)."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

MIN_FIT_POINTS = 5
MIN_CUTOFF_POINTS = 10


class InsufficientDataError(ValueError):
    pass


class TailModel(str, enum.Enum):
    POWER_LAW = "powerlaw"
    WEIBULL = "weibull"


@dataclass(frozen=True)
class EmpiricalCcdf:
    """CCDF evaluated at each distinct sample value.

    ``x`` holds every distinct value with ``p_ge = P(X >= x)``; the
    ``support``/``p_gt`` pair keeps only points where ``P(X > x) > 0``,
    which is what log-log plots and fits use.
    """

    x: np.ndarray
    p_ge: np.ndarray
    p_gt_all: np.ndarray
    n_samples: int

    @property
    def support(self) -> np.ndarray:
        return self.x[self.p_gt_all > 0]

    @property
    def p_gt(self) -> np.ndarray:
        return self.p_gt_all[self.p_gt_all > 0]

    def __len__(self) -> int:
        return int(np.count_nonzero(self.p_gt_all > 0))

    def evaluate(self, at) -> np.ndarray:
        """P(X > at) by step interpolation, for arbitrary query points."""
        at = np.asarray(at, dtype=float)
        idx = np.searchsorted(self.x, at, side="right")
        below = np.concatenate([[0.0], np.cumsum(self._counts())]) / self.n_samples
        return 1.0 - below[idx]

    def _counts(self) -> np.ndarray:
        # counts per distinct value recovered from p_ge steps
        nxt = np.append(self.p_ge[1:], 0.0)
        return np.rint((self.p_ge - nxt) * self.n_samples)


@dataclass(frozen=True)
class TailFit:
    model: TailModel
    parameter: float  # alpha for power law, shape k for Weibull
    scale: float | None
    x_min: float
    x_max: float
    r2: float
    n_points: int

    @property
    def alpha(self) -> float:
        if self.model is not TailModel.POWER_LAW:
            raise AttributeError("alpha is only defined for power-law fits")
        return self.parameter

    @property
    def k(self) -> float:
        if self.model is not TailModel.WEIBULL:
            raise AttributeError("k is only defined for Weibull fits")
        return self.parameter


def ccdf(samples) -> EmpiricalCcdf:
    values = np.sort(np.asarray(samples, dtype=float))
    if values.size == 0:
        raise InsufficientDataError("cannot build a CCDF from an empty sample")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ValueError("duration samples must be finite and > 0")
    n = values.size
    x, first = np.unique(values, return_index=True)
    p_ge = (n - first) / n
    last = np.searchsorted(values, x, side="right")
    p_gt = (n - last) / n
    return EmpiricalCcdf(x, p_ge, p_gt, n)


def _linear_fit(X: np.ndarray, Y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), min(max(r2, 0.0), 1.0)


def _points_in(c: EmpiricalCcdf, x_min: float, x_max: float):
    x, p = c.support, c.p_gt
    keep = (x >= x_min) & (x <= x_max)
    return x[keep], p[keep]


def fit_power_law(c: EmpiricalCcdf, x_min: float, x_max: float) -> TailFit:
    """Least squares on (log x, log P(X > x)); alpha is minus the slope."""
    x, p = _points_in(c, x_min, x_max)
    if x.size < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"power-law fit needs >= {MIN_FIT_POINTS} CCDF points in [{x_min}, {x_max}], got {x.size}"
        )
    slope, intercept, r2 = _linear_fit(np.log(x), np.log(p))
    return TailFit(TailModel.POWER_LAW, -slope, float(np.exp(intercept)), x_min, x_max, r2, int(x.size))


def fit_weibull_tail(c: EmpiricalCcdf, x_min: float, x_max: float) -> TailFit:
    """Least squares on (log x, log(-log P)); the slope is the shape k.

    For P = exp(-(x/scale)**k) the line is k*log x - k*log scale.
    """
    x, p = _points_in(c, x_min, x_max)
    keep = p < 1.0
    x, p = x[keep], p[keep]
    if x.size < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"Weibull fit needs >= {MIN_FIT_POINTS} CCDF points below 1 in [{x_min}, {x_max}], got {x.size}"
        )
    k, intercept, r2 = _linear_fit(np.log(x), np.log(-np.log(p)))
    scale = float(np.exp(-intercept / k)) if k != 0 else float("nan")
    return TailFit(TailModel.WEIBULL, k, scale, x_min, x_max, r2, int(x.size))


def log_binned(c: EmpiricalCcdf, per_decade: int = 20, min_count: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """CCDF sampled on a logarithmic grid spanning the sample range.

    Grid points with fewer than ``min_count`` samples above them are dropped
    (this always removes the zero at the largest sample).
    """
    lo, hi = float(c.x[0]), float(c.x[-1])
    if hi <= lo:
        grid = np.array([lo])
    else:
        n = max(int(np.ceil(np.log10(hi / lo) * per_decade)), 1) + 1
        grid = np.geomspace(lo, hi, n)
    p = c.evaluate(grid)
    keep = (p > 0) & (p * c.n_samples >= min_count - 1e-9)
    return grid[keep], p[keep]


def detect_cutoff(
    c: EmpiricalCcdf,
    per_decade: int = 20,
    run: int = 3,
    margin: float = 1.0,
    min_count: int = 5,
) -> float | None:
    """Heuristic location of the tail cut-off, or None when the tail stays straight.

    The CCDF is resampled on a log grid (``per_decade`` points per decade,
    keeping points with at least ``min_count`` samples beyond them). A
    reference exponent is fitted on the lower half of that grid. The local
    slope at a grid point is the secant from the previous point; the cut-off
    is the first point that starts ``run`` consecutive slopes steeper than
    the reference exponent plus ``margin``.
    """
    if len(c) < MIN_CUTOFF_POINTS:
        raise InsufficientDataError(f"cut-off detection needs >= {MIN_CUTOFF_POINTS} CCDF points")
    gx, gp = log_binned(c, per_decade, min_count)
    if gx.size < run + 3:
        return None
    lx, lp = np.log(gx), np.log(gp)
    half = max(gx.size // 2, 2)
    ref_slope, _, _ = _linear_fit(lx[:half], lp[:half])
    local = np.diff(lp) / np.diff(lx)  # local[k] belongs to gx[k + 1]
    steep = local < ref_slope - margin
    for k in range(len(steep) - run + 1):
        if steep[k : k + run].all():
            return float(gx[k + 1])
    return None


def write_ccdf_csv(c: EmpiricalCcdf, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x_s", "p_gt"])
        for x, p in zip(c.support, c.p_gt):
            w.writerow([f"{x:.10g}", f"{p:.10g}"])


def fit_rows(fits: list[TailFit]) -> list[list[str]]:
    return [[f.model.value, f"{f.parameter:.6g}", f"{f.x_min:g}", f"{f.x_max:g}", f"{f.r2:.6f}"] for f in fits]


def write_fit_report(fits: list[TailFit], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "alpha_or_k", "x_min", "x_max", "r2"])
        w.writerows(fit_rows(fits))
