import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from simps.kinematics import (
    KinematicState,
    acceleration_request,
    final_acceleration,
    integrate,
    limit_acceleration,
)
from simps.space import SpaceTopology

PLANE = SpaceTopology.infinite()
TORUS = SpaceTopology.torus(200.0)


def bisect_limit(v, d, v_max, dt):
    """Largest a >= 0 with |v + a*dt*d| <= v_max, found by bisection."""
    v, d = np.asarray(v, float), np.asarray(d, float)
    lo, hi = 0.0, 4 * v_max / dt + 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if np.linalg.norm(v + mid * dt * d) <= v_max:
            lo = mid
        else:
            hi = mid
    return lo


def test_request_examples():
    np.testing.assert_array_equal(acceleration_request([0, 0], 1.3), [0, 0])
    np.testing.assert_allclose(acceleration_request([1, 0], 1.3), [1.3, 0])
    a = acceleration_request([0.3, 0.4], 2.0)
    np.testing.assert_allclose(a, [0.6, 0.8])
    assert np.linalg.norm(a) == pytest.approx(1.0)


def test_limit_from_rest():
    assert limit_acceleration([0, 0], [1, 0], 1.34, 0.5) == pytest.approx(1.34 / 0.5)


def test_limit_at_top_speed_forward():
    assert limit_acceleration([1.34, 0], [1, 0], 1.34, 1.0) == 0.0


def test_limit_braking():
    assert limit_acceleration([1.34, 0], [-1, 0], 1.34, 1.0) == pytest.approx(2 * 1.34)


@given(
    st.floats(0, 1), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi),
    st.floats(0.1, 3.0), st.sampled_from([0.1, 1.0, 10.0]),
)
def test_limit_matches_bisection(frac, phi_v, phi_a, v_max, dt):
    v = frac * v_max * np.array([math.cos(phi_v), math.sin(phi_v)])
    d = np.array([math.cos(phi_a), math.sin(phi_a)])
    a_lim = limit_acceleration(v, d, v_max, dt)
    assert a_lim >= 0
    assert a_lim == pytest.approx(bisect_limit(v, d, v_max, dt), abs=1e-9 * v_max / dt)
    assert np.linalg.norm(v + a_lim * dt * d) == pytest.approx(v_max, rel=1e-9)


def test_limit_perpendicular_at_top_speed_is_zero():
    # used to cancel catastrophically: sqrt(v^2 - h^2) with h ~ v
    v = np.array([0.7978501269617839, 0.0])
    d = np.array([2.586e-8 / 0.7978501269617839, 1.0])
    d /= np.linalg.norm(d)
    assert limit_acceleration(v, d, 0.7978501269617839, 1.0) >= 0.0


def test_integrate_zero_request_coasts():
    s = KinematicState(np.array([10.0, 10.0]), np.array([0.5, -0.25]))
    out = integrate(s, [0, 0], 1.34, 2.0, TORUS)
    np.testing.assert_array_equal(out.velocity, [0.5, -0.25])
    np.testing.assert_allclose(out.position, [11.0, 9.5])


def test_integrate_clamped_by_speed_limit():
    s = KinematicState(np.zeros(2), np.zeros(2))
    out = integrate(s, [10.0, 0.0], 1.34, 1.0, PLANE)
    assert np.linalg.norm(out.velocity) == pytest.approx(1.34)
    assert np.linalg.norm(out.velocity) <= 1.34


def test_integrate_within_limit():
    s = KinematicState(np.array([5.0, 5.0]), np.array([1.0, 0.0]))
    out = integrate(s, [0.1, 0.0], 1.34, 1.0, PLANE)
    np.testing.assert_allclose(out.velocity, [1.1, 0.0])
    np.testing.assert_allclose(out.position, [6.1, 5.0])


def test_integrate_wraps():
    s = KinematicState(np.array([199.5, 0.2]), np.array([1.0, -1.0]))
    out = integrate(s, [0, 0], 2.0, 1.0, TORUS)
    np.testing.assert_allclose(out.position, [0.5, 199.2])


def test_velocity_update_is_linear_in_dt():
    v0 = np.array([[0.2, 0.1]])
    a_r = np.array([[0.3, -0.2]])
    a, _ = final_acceleration(v0, a_r, np.array([5.0]), 1.0)
    full = v0 + a * 1.0
    half = v0 + a * 0.5
    half = half + a * 0.5
    np.testing.assert_allclose(full, half, rtol=0, atol=1e-15)


def test_speed_bound_random_walk():
    rng = np.random.default_rng(0)
    n = 500
    v_max = rng.uniform(0.5, 2.0, n)
    pos = np.zeros((n, 2))
    vel = np.zeros((n, 2))
    from simps.kinematics import integrate_all
    for _ in range(300):
        a_r = rng.normal(size=(n, 2)) * rng.uniform(0, 3, (n, 1))
        a, a_lim = final_acceleration(vel, a_r, v_max, 1.0)
        assert np.all(np.linalg.norm(a, axis=-1) <= np.minimum(np.linalg.norm(a_r, axis=-1), a_lim) + 1e-12)
        pos, vel, a_lim = integrate_all(pos, vel, a_r, v_max, 1.0, PLANE)
        assert np.all(a_lim >= 0)
        assert np.all(np.linalg.norm(vel, axis=-1) <= v_max)
