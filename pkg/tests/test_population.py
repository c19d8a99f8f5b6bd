import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simps.population import (
    PopulationParams,
    population_arrays,
    read_population_csv,
    sample_population,
    write_population_csv,
)


def test_default_sociability_mean():
    people = sample_population(PopulationParams(n=10_000, seed=1))
    s = population_arrays(people)["sociability"]
    # N(2.5, 1) truncated at 0 loses ~0.6% of mass; the mean shift is ~0.018
    assert abs(s.mean() - 2.5) <= 0.05


def test_degenerate_laws():
    p = PopulationParams(n=20, sociability_var=0, v_max_var=0, a_max_var=0,
                         tolerance_low=0.4, tolerance_high=0.4, seed=3)
    for ind in sample_population(p):
        assert (ind.sociability, ind.tolerance, ind.v_max, ind.a_max) == (2.5, 0.4, 1.34, 1.3)


def test_isolate_only_population():
    p = PopulationParams(n=10, sociability_mean=0.0, sociability_var=0.0)
    assert all(ind.sociability == 0.0 for ind in sample_population(p))


def test_same_seed_same_population():
    p = PopulationParams(n=50, seed=42)
    assert sample_population(p) == sample_population(p)
    assert sample_population(p) != sample_population(PopulationParams(n=50, seed=43))


@pytest.mark.parametrize(
    "kw",
    [
        dict(n=0),
        dict(sociability_var=-1),
        dict(tolerance_low=0.0),
        dict(tolerance_low=0.8, tolerance_high=0.7),
        dict(tolerance_high=1.0),
        dict(v_max_mean=-1, v_max_var=0),
        dict(sociability_mean=-1, sociability_var=0),
    ],
)
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        PopulationParams(**kw)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_individual_invariants(seed):
    for ind in sample_population(PopulationParams(n=200, seed=seed)):
        assert ind.sociability >= 0
        assert 0.1 <= ind.tolerance <= 0.7
        assert ind.v_max > 0 and ind.a_max > 0
        lo, hi = ind.comfort_range
        assert 0 <= lo <= hi


def test_heavily_truncated_law_terminates():
    people = sample_population(PopulationParams(n=100, v_max_mean=0.1, v_max_var=4.0, seed=5))
    assert min(p.v_max for p in people) > 0


def test_csv_round_trip(tmp_path):
    people = sample_population(PopulationParams(n=7, seed=8))
    path = tmp_path / "pop.csv"
    write_population_csv(people, path)
    assert path.read_text().splitlines()[0] == "id,s,t,v_max,a_max"
    assert read_population_csv(path) == people
