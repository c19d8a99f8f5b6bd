"""Named parameter sweeps over the default scenario and the per-run fit pipeline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import InsufficientDataError, ccdf, fit_power_law, fit_weibull_tail
from .contact import DurationSamples
from .observers import ContactTracker
from .scenario import Scenario
from .simulator import run

KINDS = ("contact", "intercontact")


@dataclass(frozen=True)
class Variant:
    label: str
    overrides: dict

    def apply(self, base: Scenario) -> Scenario:
        return base.replace(**self.overrides)


def _axis(field: str, values, label: str | None = None) -> list[Variant]:
    return [Variant(f"{label or field}={v:g}" if isinstance(v, (int, float)) else f"{label or field}={v}",
                    {field: v}) for v in values]


def _isolate_only(base: Scenario) -> dict:
    # an exactly-zero need everywhere, and a social sphere wider than the
    # torus diagonal so every individual always sees the whole crowd
    return {"s_mean": 0.0, "s_var": 0.0, "r_soc": 1.5 * base.space_l}


def variants(aspect: str, base: Scenario | None = None) -> list[Variant]:
    base = base or Scenario()
    table = {
        "graph_type": lambda: _axis("graph_type", ["random", "scale_free"], "graph"),
        "node_degree": lambda: _axis("graph_d", [2, 5, 15, 50], "D"),
        "sociability": lambda: _axis("s_mean", [1.0, 2.5, 10.0], "S"),
        "socialize_only": lambda: [Variant("socialize_only", {"r_soc": 0.0})],
        "isolate_only": lambda: [Variant("isolate_only", _isolate_only(base))],
        "social_distance": lambda: _axis("r_soc", [1.0, 3.5, 15.0], "R_soc"),
        "reaction_time": lambda: _axis("tau_r", [1.0, 4.0, 20.0], "tau_r"),
        "distance_cost": lambda: _axis("lam", [0.0, 1.0, 2.0, 3.0], "lambda"),
        "space": lambda: [Variant("infinite", {"space_kind": "infinite", "init_side": 200.0})]
        + [Variant(f"periodic_L={L:g}", {"space_kind": "periodic", "space_l": L}) for L in (20.0, 200.0, 2000.0)],
        "duration": lambda: _axis("t_max", [600.0, 3600.0, 36000.0], "t_max"),
        # tau_r must stay a whole number of steps, so the coarsest step raises it
        "quantization": lambda: [Variant("dt=0.1", {"dt": 0.1}), Variant("dt=1", {"dt": 1.0}),
                                 Variant("dt=10", {"dt": 10.0, "tau_r": 10.0})],
    }
    if aspect not in table:
        raise KeyError(f"unknown sweep aspect {aspect!r} (choose from {', '.join(ASPECTS)})")
    return table[aspect]()


ASPECTS = ("graph_type", "node_degree", "sociability", "socialize_only", "isolate_only", "social_distance",
           "reaction_time", "distance_cost", "space", "duration", "quantization")


def simulate_durations(scenario: Scenario) -> DurationSamples:
    tracker = ContactTracker(scenario.n, scenario.contact_range, scenario.contact_debounce,
                             method=scenario.neighbor_index)
    run(scenario, [tracker])
    return tracker.durations()


@dataclass(frozen=True)
class KindFit:
    kind: str
    samples: int
    alpha: float = float("nan")
    alpha_r2: float = float("nan")
    weibull_k: float = float("nan")
    weibull_r2: float = float("nan")


def fit_kind(kind: str, values, x_min: float, x_max: float) -> KindFit:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return KindFit(kind, 0)
    c = ccdf(values)
    out = {}
    try:
        pl = fit_power_law(c, x_min, x_max)
        out.update(alpha=pl.alpha, alpha_r2=pl.r2)
    except InsufficientDataError:
        pass
    try:
        wb = fit_weibull_tail(c, x_min, x_max)
        out.update(weibull_k=wb.k, weibull_r2=wb.r2)
    except InsufficientDataError:
        pass
    return KindFit(kind, int(values.size), **out)


def fit_durations(samples: DurationSamples, x_min: float = 10.0, x_max: float = 300.0) -> list[KindFit]:
    return [fit_kind(k, getattr(samples, k), x_min, x_max) for k in KINDS]
