"""Scenario definition and the ``key = value`` scenario file format."""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field, fields

from .behavior import PerceptionParams
from .population import PopulationParams
from .social_graph import EdgeWeight
from .space import SpaceKind, SpaceTopology

GRAPH_TYPES = ("random", "scale_free", "file")
NEIGHBOR_METHODS = ("exact", "grid")


class ScenarioError(ValueError):
    """Invalid scenario; ``key`` names the offending file key when known."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


@dataclass(frozen=True)
class Scenario:
    n: int = field(default=100, metadata={"key": "n"})
    graph_type: str = field(default="scale_free", metadata={"key": "graph.type"})
    graph_d: float = field(default=5.0, metadata={"key": "graph.d"})
    graph_file: str | None = field(default=None, metadata={"key": "graph.file"})
    edge_weight: str = field(default="uniform", metadata={"key": "edge_weight"})
    s_mean: float = field(default=2.5, metadata={"key": "s.mean"})
    s_var: float = field(default=1.0, metadata={"key": "s.var"})
    t_low: float = field(default=0.1, metadata={"key": "t.low"})
    t_high: float = field(default=0.7, metadata={"key": "t.high"})
    vmax_mean: float = field(default=1.34, metadata={"key": "vmax.mean"})
    vmax_var: float = field(default=0.26, metadata={"key": "vmax.var"})
    amax_mean: float = field(default=1.3, metadata={"key": "amax.mean"})
    amax_var: float = field(default=0.4, metadata={"key": "amax.var"})
    r_soc: float = field(default=3.5, metadata={"key": "r_soc"})
    tau_r: float = field(default=4.0, metadata={"key": "tau_r"})
    lam: float = field(default=1.0, metadata={"key": "lambda"})
    space_kind: str = field(default="periodic", metadata={"key": "space.kind"})
    space_l: float = field(default=200.0, metadata={"key": "space.l"})
    init_side: float = field(default=200.0, metadata={"key": "space.init_side"})
    dt: float = field(default=1.0, metadata={"key": "dt"})
    t_max: float = field(default=3600.0, metadata={"key": "t_max"})
    contact_range: float = field(default=6.0, metadata={"key": "contact.range"})
    contact_debounce: int = field(default=2, metadata={"key": "contact.debounce"})
    seed: int = field(default=0, metadata={"key": "seed"})
    stagger: bool = field(default=False, metadata={"key": "perception.stagger"})
    neighbor_index: str = field(default="exact", metadata={"key": "neighbor.index"})

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(msg, attr):
            raise ScenarioError(msg, FIELD_KEYS[attr])

        if self.n < 1:
            bad("population size must be >= 1", "n")
        if self.graph_type not in GRAPH_TYPES:
            bad(f"unknown graph type {self.graph_type!r} (expected one of {', '.join(GRAPH_TYPES)})", "graph_type")
        if self.graph_type == "file" and not self.graph_file:
            bad("graph.type = file requires graph.file", "graph_file")
        if self.graph_type == "random" and not 0 <= self.graph_d <= max(self.n - 1, 0):
            bad(f"average degree must lie in [0, {self.n - 1}]", "graph_d")
        if self.graph_type == "scale_free" and not 2 <= self.graph_d <= self.n - 1:
            bad(f"scale-free average degree must lie in [2, {self.n - 1}]", "graph_d")
        try:
            EdgeWeight.parse(self.edge_weight)
        except ValueError as exc:
            bad(str(exc), "edge_weight")
        try:
            self.population_params()
        except ValueError as exc:
            raise ScenarioError(f"population parameters: {exc}") from None
        try:
            self.perception()
        except ValueError as exc:
            raise ScenarioError(f"perception parameters: {exc}") from None
        if self.space_kind not in (k.value for k in SpaceKind):
            bad(f"unknown space kind {self.space_kind!r}", "space_kind")
        if self.space_kind == "periodic" and not (math.isfinite(self.space_l) and self.space_l > 0):
            bad("side length must be finite and > 0", "space_l")
        if not self.init_side > 0:
            bad("initial placement side must be > 0", "init_side")
        if not (math.isfinite(self.dt) and self.dt > 0):
            bad("dt must be > 0", "dt")
        if not self.t_max >= self.dt:
            bad("t_max must be >= dt", "t_max")
        ratio = self.tau_r / self.dt
        if round(ratio) < 1 or abs(ratio - round(ratio)) > 1e-9 * max(ratio, 1.0):
            bad("tau_r not a multiple of dt", "tau_r")
        if self.contact_range < 0:
            bad("contact range must be >= 0", "contact_range")
        if self.contact_debounce < 1:
            bad("debounce must be >= 1", "contact_debounce")
        if self.neighbor_index not in NEIGHBOR_METHODS:
            bad(f"unknown neighbor index {self.neighbor_index!r}", "neighbor_index")

    # -- derived views -------------------------------------------------

    def population_params(self) -> PopulationParams:
        return PopulationParams(
            n=self.n,
            sociability_mean=self.s_mean,
            sociability_var=self.s_var,
            tolerance_low=self.t_low,
            tolerance_high=self.t_high,
            v_max_mean=self.vmax_mean,
            v_max_var=self.vmax_var,
            a_max_mean=self.amax_mean,
            a_max_var=self.amax_var,
            seed=self.seed,
        )

    def perception(self) -> PerceptionParams:
        return PerceptionParams(self.r_soc, self.tau_r, self.lam)

    def space(self) -> SpaceTopology:
        if self.space_kind == "infinite":
            return SpaceTopology.infinite()
        return SpaceTopology.torus(self.space_l)

    @property
    def steps(self) -> int:
        return int(math.ceil(self.t_max / self.dt - 1e-9))

    @property
    def perception_period(self) -> int:
        """Steps between perceived-surround updates."""
        return int(round(self.tau_r / self.dt))

    def replace(self, **changes) -> Scenario:
        return dataclasses.replace(self, **changes)


FIELD_KEYS = {f.name: f.metadata["key"] for f in fields(Scenario)}
KEY_FIELDS = {v: k for k, v in FIELD_KEYS.items()}
_TYPES = {f.name: f.type for f in fields(Scenario)}


def _convert(name: str, raw: str):
    kind = _TYPES[name]
    key = FIELD_KEYS[name]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "str | None":
            return None if raw.lower() in ("", "none") else raw
        return raw
    except ValueError:
        raise ScenarioError(f"cannot parse value {raw!r}", key) from None


def parse_scenario(text: str, base: Scenario | None = None, overrides: dict | None = None) -> Scenario:
    """Parse ``key = value`` lines (``#`` comments) on top of ``base`` (defaults)."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEY_FIELDS:
            raise ScenarioError(f"line {lineno}: unknown key", key)
        name = KEY_FIELDS[key]
        if name in values:
            raise ScenarioError(f"line {lineno}: duplicate key", key)
        values[name] = _convert(name, value)
    values.update(overrides or {})
    return dataclasses.replace(base or Scenario(), **values)


def load_scenario(path, overrides: dict | None = None) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    scenario = parse_scenario(text, overrides=overrides)
    if scenario.graph_file and not os.path.isabs(scenario.graph_file):
        # relative graph paths are resolved against the scenario file
        resolved = os.path.join(os.path.dirname(os.path.abspath(path)), scenario.graph_file)
        scenario = scenario.replace(graph_file=resolved)
    return scenario


def format_scenario(s: Scenario) -> str:
    """Every effective parameter, in a form :func:`parse_scenario` reads back exactly."""
    lines = []
    for f in fields(Scenario):
        v = getattr(s, f.name)
        if v is None:
            text = "none"
        elif isinstance(v, bool):
            text = "true" if v else "false"
        elif isinstance(v, float):
            text = repr(v)
        else:
            text = str(v)
        lines.append(f"{f.metadata['key']} = {text}")
    return "\n".join(lines) + "\n"
