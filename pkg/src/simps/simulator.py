"""Discrete-time, fully synchronous simulation loop.

Each step reads only the previous step's positions:

1. perceived surround is mixed with the instantaneous head count when the
   perception period comes due,
2. every individual re-decides its behavior (hysteresis),
3. tensions, excitation and willingness are computed,
4. kinematics integrate velocity and position, wrapping on the torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import behavior as bh
from .kinematics import acceleration_request, integrate_all
from .neighbors import counts_from_pairs, pairs_within_grid
from .population import Individual, population_arrays, sample_population
from .scenario import Scenario
from .social_graph import EdgeWeight, SocialGraph, generate_random, generate_scale_free, load_graph
from .space import SpaceTopology, pairwise_displacements

# Independent random substreams derived from the master seed.
STREAMS = ("graph", "population", "placement", "stagger")


def substreams(seed: int) -> dict[str, np.random.SeedSequence]:
    children = np.random.SeedSequence(seed).spawn(len(STREAMS))
    return dict(zip(STREAMS, children))


def build_graph(scenario: Scenario, seed) -> SocialGraph:
    weight = EdgeWeight.parse(scenario.edge_weight)
    if scenario.graph_type == "random":
        return generate_random(scenario.n, scenario.graph_d, seed, weight)
    if scenario.graph_type == "scale_free":
        return generate_scale_free(scenario.n, scenario.graph_d, seed, weight)
    g = load_graph(scenario.graph_file)
    if g.n != scenario.n:
        raise ValueError(f"graph file has {g.n} nodes but scenario n = {scenario.n}")
    return g


@dataclass(frozen=True, eq=False)
class SimulationContext:
    """Everything that stays fixed during a run."""

    scenario: Scenario
    space: SpaceTopology
    graph: SocialGraph
    people: tuple[Individual, ...]
    sociability: np.ndarray
    tolerance: np.ndarray
    v_max: np.ndarray
    a_max: np.ndarray
    perception_offset: np.ndarray

    @property
    def n(self) -> int:
        return self.scenario.n


@dataclass(eq=False)
class SimulationState:
    context: SimulationContext
    step_index: int
    positions: np.ndarray
    velocities: np.ndarray
    perceived: np.ndarray
    isolating: np.ndarray
    # diagnostics of the step that produced this state (inf / 0 at start)
    a_lim: np.ndarray = field(default=None)
    willingness: np.ndarray = field(default=None)

    @property
    def clock(self) -> float:
        return self.step_index * self.context.scenario.dt

    @property
    def modes(self) -> list[bh.Mode]:
        return [bh.Mode.ISOLATE if x else bh.Mode.SOCIALIZE for x in self.isolating]

    @cached_property
    def displacements(self) -> np.ndarray:
        return pairwise_displacements(self.context.space, self.positions)

    @cached_property
    def distances(self) -> np.ndarray:
        return np.linalg.norm(self.displacements, axis=-1)

    def head_counts(self) -> np.ndarray:
        sc = self.context.scenario
        if sc.neighbor_index == "grid":
            pairs = pairs_within_grid(self.positions, self.context.space, sc.r_soc)
            return counts_from_pairs(pairs, self.context.n)
        return bh.count_surround_all(self.distances, sc.r_soc)


def make_context(scenario: Scenario, graph: SocialGraph | None = None,
                 people: list[Individual] | None = None) -> SimulationContext:
    streams = substreams(scenario.seed)
    if graph is None:
        graph = build_graph(scenario, streams["graph"])
    if people is None:
        people = sample_population(scenario.population_params(), np.random.default_rng(streams["population"]))
    if graph.n != scenario.n or len(people) != scenario.n:
        raise ValueError("graph, population and scenario disagree on n")
    arrays = population_arrays(list(people))
    k = scenario.perception_period
    if scenario.stagger:
        offset = np.random.default_rng(streams["stagger"]).integers(0, k, scenario.n)
    else:
        offset = np.zeros(scenario.n, dtype=int)
    return SimulationContext(
        scenario=scenario,
        space=scenario.space(),
        graph=graph,
        people=tuple(people),
        perception_offset=offset,
        **arrays,
    )


def initialize(scenario: Scenario, positions: np.ndarray | None = None, **context_kw) -> SimulationState:
    """Uniform random placement, zero velocity, u(0) = U(0), mode from u(0) vs s."""
    ctx = make_context(scenario, **context_kw)
    if positions is None:
        rng = np.random.default_rng(substreams(scenario.seed)["placement"])
        side = scenario.space_l if ctx.space.is_periodic else scenario.init_side
        positions = rng.uniform(0.0, side, size=(scenario.n, 2))
    positions = np.array(positions, dtype=float).reshape(scenario.n, 2)
    state = SimulationState(
        context=ctx,
        step_index=0,
        positions=positions,
        velocities=np.zeros((scenario.n, 2)),
        perceived=np.zeros(scenario.n),
        isolating=np.zeros(scenario.n, dtype=bool),
        a_lim=np.full(scenario.n, np.inf),
        willingness=np.zeros((scenario.n, 2)),
    )
    u0 = state.head_counts().astype(float)
    state.perceived = u0
    state.isolating = u0 > ctx.sociability
    return state


def step(state: SimulationState) -> SimulationState:
    ctx = state.context
    sc = ctx.scenario

    u = state.perceived
    due = (state.step_index + ctx.perception_offset) % sc.perception_period == 0
    if due.any():
        u = np.where(due, bh.update_perceived_surround(u, state.head_counts()), u)

    isolating = bh.decide_behavior_all(state.isolating, u, ctx.sociability, ctx.tolerance)
    tension = bh.social_tension_all(
        state.displacements, state.distances, ctx.graph.weights, isolating, sc.lam
    )
    e = bh.excitation(u, ctx.sociability, ctx.tolerance)
    w = bh.willingness(tension, e)
    a_r = acceleration_request(w, ctx.a_max)
    positions, velocities, a_lim = integrate_all(
        state.positions, state.velocities, a_r, ctx.v_max, sc.dt, ctx.space
    )
    return SimulationState(
        context=ctx,
        step_index=state.step_index + 1,
        positions=positions,
        velocities=velocities,
        perceived=u,
        isolating=isolating,
        a_lim=a_lim,
        willingness=w,
    )


class SimulationIOError(OSError):
    pass


class Observer:
    """Hook invoked on the initial state and after every step."""

    def observe(self, state: SimulationState) -> None:  # pragma: no cover - interface
        pass

    def close(self, state: SimulationState) -> None:
        pass


@dataclass
class RunResult:
    final_state: SimulationState
    steps: int


def run(scenario: Scenario, observers=(), state: SimulationState | None = None) -> RunResult:
    """Run ``scenario.steps`` steps, feeding every state to the observers."""
    if state is None:
        state = initialize(scenario)
    observers = list(observers)

    def notify(s):
        for obs in observers:
            try:
                obs.observe(s)
            except OSError as exc:
                raise SimulationIOError(f"step {s.step_index} (t={s.clock:g} s): {exc}") from exc

    notify(state)
    for _ in range(scenario.steps):
        state = step(state)
        notify(state)
    for obs in observers:
        try:
            obs.close(state)
        except OSError as exc:
            raise SimulationIOError(f"closing observers at step {state.step_index}: {exc}") from exc
    return RunResult(state, scenario.steps)
