"""Range-based contact sensing and contact / inter-contact duration extraction.

A pair is in contact while its minimal-image distance is within range.
A session ends only after ``debounce`` consecutive out-of-range samples and
its end time is the last in-range sample. Sessions or gaps still open when
the run stops are right-censored and excluded from the duration samples.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .space import SpaceTopology, pairwise_displacements


@dataclass(frozen=True)
class ContactEvent:
    a: int
    b: int
    start: float
    end: float

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass
class DurationSamples:
    contact: list[float] = field(default_factory=list)
    intercontact: list[float] = field(default_factory=list)


class ContactLedger:
    """Per-pair session tracker for an n-individual population.

    Feed it one sample per simulation step via :meth:`observe` (or
    :meth:`observe_in_range` with a precomputed boolean pair vector).
    """

    def __init__(self, n: int, contact_range: float = 6.0, debounce: int = 2):
        if contact_range < 0:
            raise ValueError("contact range must be >= 0")
        if debounce < 1:
            raise ValueError("debounce must be >= 1")
        self.n = n
        self.contact_range = float(contact_range)
        self.debounce = int(debounce)
        self.pair_a, self.pair_b = np.triu_indices(n, k=1)
        m = len(self.pair_a)
        self._open = np.zeros(m, dtype=bool)
        self._start = np.zeros(m)
        self._last_in = np.zeros(m)
        self._misses = np.zeros(m, dtype=int)
        self._prev_end = np.full(m, np.nan)
        self.sessions: list[ContactEvent] = []
        self.gaps: list[tuple[int, int, float, float]] = []
        self.last_time: float | None = None

    def in_range(self, positions, space: SpaceTopology) -> np.ndarray:
        disp = pairwise_displacements(space, np.asarray(positions, dtype=float))
        dist = np.linalg.norm(disp, axis=-1)
        return dist[self.pair_a, self.pair_b] <= self.contact_range

    def observe(self, time: float, positions, space: SpaceTopology) -> None:
        self.observe_in_range(time, self.in_range(positions, space))

    def observe_in_range(self, time: float, inside: np.ndarray) -> None:
        if self.last_time is not None and time <= self.last_time:
            raise ValueError("contact samples must be strictly time-ordered")
        self.last_time = time
        inside = np.asarray(inside, dtype=bool)

        # Pairs whose session survives or starts.
        starting = inside & ~self._open
        for k in np.flatnonzero(starting):
            prev = self._prev_end[k]
            if not np.isnan(prev):
                self.gaps.append((int(self.pair_a[k]), int(self.pair_b[k]), float(prev), time))
        self._start[starting] = time
        self._open |= inside
        self._last_in[inside] = time
        self._misses[inside] = 0

        missing = self._open & ~inside
        self._misses[missing] += 1
        closing = missing & (self._misses >= self.debounce)
        for k in np.flatnonzero(closing):
            self.sessions.append(
                ContactEvent(int(self.pair_a[k]), int(self.pair_b[k]), float(self._start[k]), float(self._last_in[k]))
            )
        self._prev_end[closing] = self._last_in[closing]
        self._open[closing] = False
        self._misses[closing] = 0

    def open_sessions(self) -> list[tuple[int, int, float]]:
        return [
            (int(self.pair_a[k]), int(self.pair_b[k]), float(self._start[k]))
            for k in np.flatnonzero(self._open)
        ]

    def events(self) -> list[ContactEvent]:
        """Closed sessions sorted by (start, a, b)."""
        return sorted(self.sessions, key=lambda e: (e.start, e.a, e.b))

    def finalize(self) -> DurationSamples:
        """Duration samples from closed sessions and completed gaps.

        A session whose only in-range sample is its start has zero measured
        duration; it still anchors gaps but yields no contact sample.
        """
        out = DurationSamples()
        for e in self.events():
            if e.duration > 0:
                out.contact.append(e.duration)
        for _, _, start, end in sorted(self.gaps, key=lambda g: (g[2], g[0], g[1])):
            out.intercontact.append(end - start)
        return out


def write_events_csv(events: list[ContactEvent], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_a", "node_b", "start_s", "end_s"])
        for e in events:
            w.writerow([e.a, e.b, _fmt_time(e.start), _fmt_time(e.end)])


def write_durations_csv(samples: DurationSamples, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "duration_s"])
        for d in samples.contact:
            w.writerow(["contact", _fmt_time(d)])
        for d in samples.intercontact:
            w.writerow(["intercontact", _fmt_time(d)])


def read_durations_csv(path) -> DurationSamples:
    out = DurationSamples()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) < {"kind", "duration_s"}:
            if reader.fieldnames is None:
                return out
            raise ValueError(f"{path}: expected columns kind,duration_s")
        for lineno, row in enumerate(reader, start=2):
            kind = row["kind"].strip()
            try:
                value = float(row["duration_s"])
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{lineno}: bad duration {row['duration_s']!r}") from None
            if kind == "contact":
                out.contact.append(value)
            elif kind == "intercontact":
                out.intercontact.append(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown kind {kind!r}")
    return out


def _fmt_time(t: float) -> str:
    # Times are multiples of dt; 10 significant digits strip float noise like 0.30000000000000004.
    return f"{t:.10g}"
