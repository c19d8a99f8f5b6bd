"""Run observers: position trace, behavior transitions, contact tracking."""

from __future__ import annotations

import csv

import numpy as np

from .contact import ContactLedger, DurationSamples
from .neighbors import pairs_within_grid
from .simulator import Observer, SimulationState


def _fmt(t: float) -> str:
    return f"{t:.10g}"


class _CsvObserver(Observer):
    header: list[str] = []

    def __init__(self, sink):
        if hasattr(sink, "write"):
            self._fh, self._owned = sink, False
        else:
            self._fh, self._owned = open(sink, "w", newline="", encoding="utf-8"), True
        self._w = csv.writer(self._fh, lineterminator="\n")
        self._w.writerow(self.header)

    def close(self, state):
        if self._owned:
            self._fh.close()
        else:
            self._fh.flush()


class TraceWriter(_CsvObserver):
    """``time_s,node_id,x_m,y_m,vx,vy,mode`` every ``decimate``-th step."""

    header = ["time_s", "node_id", "x_m", "y_m", "vx", "vy", "mode"]

    def __init__(self, sink, decimate: int = 1):
        if decimate < 1:
            raise ValueError("decimation factor must be >= 1")
        self.decimate = decimate
        super().__init__(sink)

    def observe(self, state: SimulationState) -> None:
        if state.step_index % self.decimate:
            return
        t = _fmt(state.clock)
        rows = []
        for i, ((x, y), (vx, vy), iso) in enumerate(zip(state.positions, state.velocities, state.isolating)):
            rows.append([t, i, f"{x:.6f}", f"{y:.6f}", f"{vx:.6f}", f"{vy:.6f}",
                         "isolate" if iso else "socialize"])
        self._w.writerows(rows)


class TransitionLog(_CsvObserver):
    header = ["time_s", "node_id", "old_mode", "new_mode"]

    def __init__(self, sink):
        super().__init__(sink)
        self._prev = None
        self.count = 0

    def observe(self, state: SimulationState) -> None:
        cur = state.isolating
        if self._prev is not None:
            t = _fmt(state.clock)
            for i in np.flatnonzero(cur != self._prev):
                old, new = ("isolate", "socialize") if self._prev[i] else ("socialize", "isolate")
                self._w.writerow([t, int(i), old, new])
                self.count += 1
        self._prev = cur.copy()


class ContactTracker(Observer):
    def __init__(self, n: int, contact_range: float = 6.0, debounce: int = 2, method: str = "exact"):
        self.ledger = ContactLedger(n, contact_range, debounce)
        self.method = method
        self._index = None

    def observe(self, state: SimulationState) -> None:
        ledger = self.ledger
        if self.method == "grid":
            pairs = pairs_within_grid(state.positions, state.context.space, ledger.contact_range)
            inside = np.zeros(len(ledger.pair_a), dtype=bool)
            if len(pairs):
                n = ledger.n
                # position of (a, b) in the row-major upper-triangle ordering
                a, b = pairs[:, 0], pairs[:, 1]
                inside[a * n - a * (a + 1) // 2 + (b - a - 1)] = True
        else:
            inside = state.distances[ledger.pair_a, ledger.pair_b] <= ledger.contact_range
        ledger.observe_in_range(state.clock, inside)

    def durations(self) -> DurationSamples:
        return self.ledger.finalize()


class StateRecorder(Observer):
    """Keeps per-step diagnostics in memory (for tests and invariant checks)."""

    def __init__(self, keep_positions: bool = True):
        self.keep_positions = keep_positions
        self.positions: list[np.ndarray] = []
        self.max_speed_excess = -np.inf
        self.min_a_lim = np.inf
        self.max_willingness = 0.0

    def observe(self, state: SimulationState) -> None:
        ctx = state.context
        if self.keep_positions:
            self.positions.append(state.positions.copy())
        speed = np.linalg.norm(state.velocities, axis=-1)
        self.max_speed_excess = max(self.max_speed_excess, float(np.max(speed - ctx.v_max)))
        self.min_a_lim = min(self.min_a_lim, float(np.min(state.a_lim)))
        self.max_willingness = max(self.max_willingness, float(np.max(np.linalg.norm(state.willingness, axis=-1))))
