import io

import numpy as np
import pytest

from simps.social_graph import (
    EdgeWeight,
    GraphFormatError,
    SocialGraph,
    acquaintance,
    format_graph,
    generate_random,
    generate_scale_free,
    load_graph,
    strangeness,
)


def test_random_two_nodes_full():
    g = generate_random(2, 1.0, seed=0)
    assert set(g.edges) == {(0, 1), (1, 0)}


def test_random_single_node():
    assert len(generate_random(1, 0.0, seed=0)) == 0


def test_random_mean_outdegree():
    means = [generate_random(1000, 5.0, seed=s).mean_out_degree() for s in range(10)]
    for m in means:
        assert 4.5 <= m <= 5.5


def test_random_rejects_degree():
    with pytest.raises(ValueError):
        generate_random(10, 9.5, seed=0)
    with pytest.raises(ValueError):
        generate_random(10, -1, seed=0)


def test_weights_in_half_open_unit_interval():
    g = generate_random(200, 10.0, seed=4)
    w = np.array(list(g.edges.values()))
    assert np.all((w > 0) & (w <= 1))


def test_constant_weight_option():
    g = generate_scale_free(50, 4, seed=1, edge_weight=EdgeWeight.parse("constant:0.25"))
    assert set(g.edges.values()) == {0.25}


def test_scale_free_mean_outdegree():
    for s in range(10):
        assert 4.25 <= generate_scale_free(100, 5.0, seed=s).mean_out_degree() <= 5.75


def test_scale_free_tree_when_m_is_one():
    n = 100
    g = generate_scale_free(n, 2.0, seed=7)
    # n - 1 undirected links, each materialized in both directions
    assert len(g) == 2 * (n - 1)
    assert g.mean_out_degree() == pytest.approx(2 * (n - 1) / n)


def test_scale_free_heavy_tail():
    for s in range(10):
        deg = generate_scale_free(1000, 5.0, seed=s).out_degrees()
        assert deg.max() >= 5 * deg.mean()


def test_scale_free_symmetric_support():
    g = generate_scale_free(60, 5.0, seed=3)
    for i, j in g.edges:
        assert g.has_edge(j, i)


def test_scale_free_rejects_low_degree():
    with pytest.raises(ValueError):
        generate_scale_free(100, 1.5, seed=0)


@pytest.mark.parametrize("gen", [generate_random, generate_scale_free])
def test_generators_deterministic(gen):
    assert gen(80, 5.0, seed=11) == gen(80, 5.0, seed=11)
    assert gen(80, 5.0, seed=11).edges == gen(80, 5.0, seed=11).edges


def test_load_simple():
    g = load_graph(io.StringIO("0 1 0.5\n1 0 1.0"))
    assert g.n == 2
    assert g.edges == {(0, 1): 0.5, (1, 0): 1.0}


def test_load_header_and_comments():
    g = load_graph(io.StringIO("# social ties\nnodes 5\n0 3 0.2  # weak\n"))
    assert g.n == 5 and len(g) == 1


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("0 1 0.5\n2 2 0.3\n", 2, "self-loop"),
        ("0 1 1.5\n", 1, "outside [0, 1]"),
        ("0 1 0.5\n0 1 0.6\n", 2, "duplicate"),
        ("0 1\n", 1, "expected"),
        ("a b c\n", 1, "cannot parse"),
    ],
)
def test_load_errors(text, lineno, fragment):
    with pytest.raises(GraphFormatError) as err:
        load_graph(io.StringIO(text))
    assert err.value.lineno == lineno
    assert fragment in str(err.value)


def test_round_trip(tmp_path):
    g = generate_scale_free(30, 4.0, seed=2)
    path = tmp_path / "g.txt"
    path.write_text(format_graph(g))
    assert load_graph(path) == g


def test_acquaintance_and_strangeness():
    g = SocialGraph(2, {(0, 1): 0.7})
    assert acquaintance(g, 0, 1) == 0.7
    assert strangeness(g, 0, 1) == pytest.approx(0.3)
    assert acquaintance(g, 1, 0) == 0.0
    assert strangeness(g, 1, 0) == 1.0


def test_complete_graph_no_strangers():
    n = 6
    g = SocialGraph(n, {(i, j): 1.0 for i in range(n) for j in range(n) if i != j})
    assert all(strangeness(g, i, j) == 0 for i in range(n) for j in range(n) if i != j)


def test_complement_exact_everywhere():
    g = generate_random(40, 8.0, seed=9)
    for i in range(40):
        for j in range(40):
            if i != j:
                assert acquaintance(g, i, j) + strangeness(g, i, j) == 1.0


def test_invalid_ids():
    g = SocialGraph(3, {})
    with pytest.raises(IndexError):
        acquaintance(g, 0, 3)
    with pytest.raises(ValueError):
        acquaintance(g, 1, 1)
