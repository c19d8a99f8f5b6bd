"""Motion execution: turn willingness into bounded acceleration and integrate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .space import SpaceTopology, wrap

# Rounding slack tolerated on the speed bound and on a_lim >= 0.
SPEED_SLACK = 1e-9


class SpeedLimitViolation(AssertionError):
    pass


@dataclass(frozen=True)
class KinematicState:
    position: np.ndarray
    velocity: np.ndarray


def acceleration_request(w, a_max):
    w = np.asarray(w, dtype=float)
    a_max = np.asarray(a_max, dtype=float)
    if w.ndim > 1:
        a_max = a_max[..., None]
    return a_max * w


def limit_acceleration(v_prev, direction, v_max, dt):
    """Largest acceleration along ``direction`` (unit) keeping |v| <= v_max after ``dt``.

    Works on single vectors or stacks of them. With h = |v| sin(theta) and
    z = -|v| cos(theta), theta measured from ``direction`` to ``v_prev``, the
    bound is (sqrt(v_max**2 - h**2) + z) / dt.
    """
    v_prev = np.asarray(v_prev, dtype=float)
    direction = np.asarray(direction, dtype=float)
    v_max = np.asarray(v_max, dtype=float)
    along = np.sum(v_prev * direction, axis=-1)  # -z
    # v_max**2 - h**2 == (v_max**2 - |v|**2) + along**2; the rationalized
    # branch avoids cancellation when |v| ~ v_max and along > 0
    headroom = v_max**2 - np.sum(v_prev * v_prev, axis=-1)
    root = np.sqrt(np.maximum(headroom + along**2, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        reach = np.where(along > 0, headroom / (root + along), root - along)
    a_lim = reach / dt
    if np.any(a_lim < -SPEED_SLACK / dt):
        raise SpeedLimitViolation(f"negative acceleration limit {np.min(a_lim)}")
    a_lim = np.maximum(a_lim, 0.0)
    return float(a_lim) if a_lim.ndim == 0 else a_lim


def final_acceleration(v_prev, a_r, v_max, dt):
    """Requested acceleration trimmed to the speed-limit bound; also returns a_lim.

    Where the request is zero no limit is computed (a_lim reported as +inf)
    and the acceleration is zero.
    """
    v_prev = np.atleast_2d(np.asarray(v_prev, dtype=float))
    a_r = np.atleast_2d(np.asarray(a_r, dtype=float))
    mag = np.linalg.norm(a_r, axis=-1)
    moving = mag > 0
    direction = np.zeros_like(a_r)
    direction[moving] = a_r[moving] / mag[moving, None]
    v_max = np.broadcast_to(np.asarray(v_max, dtype=float), mag.shape)
    a_lim = np.full(mag.shape, np.inf)
    if moving.any():
        a_lim[moving] = limit_acceleration(v_prev[moving], direction[moving], v_max[moving], dt)
    scale = np.where(moving, np.minimum(mag, np.where(moving, a_lim, 0.0)), 0.0)
    return direction * scale[:, None], a_lim


def integrate_all(positions, velocities, a_r, v_max, dt, space: SpaceTopology):
    """One explicit step for a whole population. Returns (positions, velocities, a_lim)."""
    a, a_lim = final_acceleration(velocities, a_r, v_max, dt)
    v_new = velocities + a * dt
    speed = np.linalg.norm(v_new, axis=-1)
    if np.any(speed > v_max + SPEED_SLACK):
        raise SpeedLimitViolation(f"speed {speed.max()} exceeds v_max")
    # landing exactly on the limit can overshoot by an ulp; pull back so the
    # next step sees non-negative headroom
    over = np.sum(v_new * v_new, axis=-1) > v_max**2
    while np.any(over):
        v_new[over] *= 1.0 - 2.0**-52
        over = np.sum(v_new * v_new, axis=-1) > v_max**2
    p_new = wrap(space, positions + v_new * dt)
    return p_new, v_new, a_lim


def integrate(state: KinematicState, a_r, v_max: float, dt: float, space: SpaceTopology) -> KinematicState:
    p, v, _ = integrate_all(
        np.atleast_2d(state.position), np.atleast_2d(state.velocity), np.atleast_2d(a_r),
        np.atleast_1d(v_max), dt, space,
    )
    return KinematicState(p[0], v[0])
