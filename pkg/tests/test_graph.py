import itertools
import json

import pytest
from hypothesis import given, strategies as st

from lcqaoa.errors import (ChainInvalid, EmptyGraph, GenerationFailed, InvalidGraph, InvalidParams,
                           LengthMismatch, TooLarge)
from lcqaoa.graph import (WEIGHT_PALETTE, Chain, Graph, chain_prefix, complement, cut_value, exact_maxcut,
                          find_chain, generate_random_regular, graph_from_json, graph_to_json, load_graph,
                          random_baseline, save_graph)
from lcqaoa.rng import SplitMix64


def complete(n):
    return Graph(n, tuple((u, v, 1.0) for u, v in itertools.combinations(range(n), 2)))


def cycle(n):
    return Graph(n, tuple((min(i, (i + 1) % n), max(i, (i + 1) % n), 1.0) for i in range(n)))


def star(leaves):
    return Graph(leaves + 1, tuple((0, i, 1.0) for i in range(1, leaves + 1)))


def brute_force(g):
    return max(cut_value(g, bits) for bits in itertools.product((0, 1), repeat=g.n))


def random_graph(n, density, seed, weighted=False):
    rng = SplitMix64(seed)
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < density:
            edges.append((u, v, WEIGHT_PALETTE[rng.randbelow(4)] if weighted else 1.0))
    return Graph(n, tuple(edges))


# -- generation

def test_k4_is_unique_cubic_graph_on_four_vertices():
    g = generate_random_regular(4, 3, seed=17)
    assert g.edges == complete(4).edges
    assert g.num_edges == 6


@pytest.mark.parametrize("n,d", [(5, 3), (4, 4), (3, 5), (1, 0)])
def test_generation_rejects_bad_parameters(n, d):
    with pytest.raises(InvalidParams):
        generate_random_regular(n, d, seed=0)


def test_hundred_vertex_cubic():
    g = generate_random_regular(100, 3, seed=8)
    assert g.num_edges == 150
    assert all(g.degree(v) == 3 for v in range(100))


@pytest.mark.parametrize("d", [3, 5, 7])
def test_dense_degrees_generate(d):
    g = generate_random_regular(16, d, seed=3)
    assert {g.degree(v) for v in range(16)} == {d}


def test_generation_deterministic_and_seed_sensitive():
    a = generate_random_regular(30, 3, 5, weighted=True)
    assert a == generate_random_regular(30, 3, 5, weighted=True)
    assert a.edges != generate_random_regular(30, 3, 6, weighted=True).edges


def test_weights_from_palette():
    g = generate_random_regular(40, 3, 1, weighted=True)
    assert {w for _, _, w in g.edges} <= set(WEIGHT_PALETTE)
    assert len({w for _, _, w in g.edges}) > 1
    assert g.meta == {"generator": "random_regular", "degree": 3, "seed": 1, "weighted": True}


def test_generation_failure_is_signalled():
    # dense pairings often strand stubs that can only form repeated edges
    with pytest.raises(GenerationFailed):
        generate_random_regular(10, 8, seed=0, max_retries=1)
    assert generate_random_regular(10, 8, seed=0).num_edges == 40


@given(st.sampled_from([(6, 3), (10, 4), (12, 3), (14, 5), (20, 3)]), st.integers(0, 10**6))
def test_generated_graphs_are_simple_and_regular(nd, seed):
    n, d = nd
    g = generate_random_regular(n, d, seed)
    pairs = [(u, v) for u, v, _ in g.edges]
    assert len(set(pairs)) == len(pairs)
    assert all(0 <= u < v < n for u, v in pairs)
    assert all(g.degree(v) == d for v in range(n))


# -- graph invariants and files

@pytest.mark.parametrize("edges,fragment", [
    (((0, 0, 1.0),), "self-loop"),
    (((1, 0, 1.0),), "u < v"),
    (((0, 1, 1.0), (0, 1, 2.0)), "duplicate"),
    (((0, 1, -1.0),), "positive"),
    (((0, 5, 1.0),), "out of range"),
])
def test_graph_rejects_invariant_violations(edges, fragment):
    with pytest.raises(InvalidGraph) as err:
        Graph(3, edges)
    assert err.value.args[0].startswith("edges[")


def test_declared_degree_is_checked():
    with pytest.raises(InvalidGraph, match="degree"):
        Graph(3, ((0, 1, 1.0),), {"degree": 1})


def test_json_round_trip(tmp_path):
    g = generate_random_regular(10, 3, 4, weighted=True)
    assert graph_from_json(graph_to_json(g)) == g
    save_graph(g, tmp_path / "g.json")
    assert load_graph(tmp_path / "g.json") == g


def test_json_diagnostics():
    with pytest.raises(InvalidGraph, match="line 1 column"):
        graph_from_json('{"n": 3, "edges": [[0, 1, 1.0]')
    with pytest.raises(InvalidGraph, match=r"^edges\[1\]"):
        graph_from_json(json.dumps({"n": 3, "edges": [[0, 1, 1.0], [1, 1, 1.0]]}))
    with pytest.raises(InvalidGraph, match="^n:"):
        graph_from_json(json.dumps({"edges": []}))


# -- cuts

def test_cut_examples():
    assert cut_value(complete(4), "0011") == 4
    assert cut_value(generate_random_regular(10, 3, 0), "0" * 10) == 0
    assert cut_value(Graph(2, ((0, 1, 0.25),)), "01") == 0.25
    with pytest.raises(LengthMismatch):
        cut_value(complete(4), "001")


def test_random_baseline_examples():
    assert random_baseline(generate_random_regular(100, 3, 1)) == 75
    assert random_baseline(complete(4)) == 3
    assert random_baseline(Graph(2, ((0, 1, 0.75),))) == 0.375


@given(st.integers(0, 2**20 - 1))
def test_cut_complement_symmetry(z):
    g = generate_random_regular(20, 3, 2, weighted=True)
    x = f"{z:020b}"
    assert cut_value(g, x) == cut_value(g, complement(x))


# -- exact maxcut

def test_maxcut_examples():
    assert exact_maxcut(cycle(5)).value == 4
    assert exact_maxcut(complete(4)).value == 4
    g = generate_random_regular(12, 3, 9)
    assert exact_maxcut(g).value == brute_force(g)


def test_maxcut_tie_break_is_lexicographic():
    cut = exact_maxcut(complete(4))
    assert cut.assignment == "0011"
    cut = exact_maxcut(cycle(6))
    assert cut.assignment == "010101"


@pytest.mark.parametrize("seed", range(12))
def test_maxcut_matches_enumeration_small(seed):
    g = random_graph(4 + seed % 7, 0.5, seed, weighted=seed % 2 == 1)
    cut = exact_maxcut(g)
    assert cut.value == brute_force(g)
    assert cut_value(g, cut.assignment) == cut.value
    assert cut.assignment[:1] in ("", "0")


@pytest.mark.parametrize("seed", range(4))
def test_branch_and_bound_matches_enumeration(backend, seed):
    # n >= 16 takes the branch-and-bound path
    g = generate_random_regular(16, 3 + 2 * (seed % 2), seed, weighted=seed >= 2)
    cut = exact_maxcut(g)
    n = g.n
    best = None
    for z in range(0, 1 << n, 2):
        x = format(z, f"0{n}b")[::-1]
        v = cut_value(g, x)
        if best is None or v > best[0] or (v == best[0] and x < best[1]):
            best = (v, x)
    assert (cut.value, cut.assignment) == best


def test_maxcut_upper_bounds_samples():
    g = generate_random_regular(18, 3, 4, weighted=True)
    best = exact_maxcut(g).value
    rng = SplitMix64(1)
    assert all(cut_value(g, [rng.randbelow(2) for _ in range(18)]) <= best for _ in range(1000))


def test_maxcut_limit():
    with pytest.raises(TooLarge):
        exact_maxcut(generate_random_regular(26, 3, 0))


# -- chains

def assert_valid_chain(c, g):
    assert len(set(c.vertices)) == len(c.vertices) <= g.n
    assert all(g.has_edge(a, b) for a, b in zip(c.vertices, c.vertices[1:]))


def test_chain_examples():
    assert len(find_chain(cycle(8))) == 8
    assert len(find_chain(star(4))) == 3
    g = generate_random_regular(100, 3, 8)
    c = find_chain(g)
    assert 2 <= len(c) <= 100
    assert_valid_chain(c, g)


def test_chain_errors():
    with pytest.raises(EmptyGraph):
        find_chain(Graph(0, ()))
    with pytest.raises(ChainInvalid):
        Chain((0, 2), cycle(5))
    with pytest.raises(ChainInvalid):
        Chain((0, 1, 0), cycle(5))


@given(st.integers(6, 40).filter(lambda n: n % 2 == 0), st.integers(0, 1000), st.integers(0, 50))
def test_chain_valid_and_deterministic(n, graph_seed, chain_seed):
    g = generate_random_regular(n, 3, graph_seed)
    c = find_chain(g, restarts=8, seed=chain_seed)
    assert_valid_chain(c, g)
    assert c == find_chain(g, restarts=8, seed=chain_seed)


def test_chain_on_disconnected_graph():
    g = Graph(7, ((0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 6, 1.0)))
    c = find_chain(g)
    assert_valid_chain(c, g)
    assert len(c) == 4


def test_cubic_chains_are_hamiltonian_at_desk_scale():
    for n in (8, 12, 16, 20):
        for seed in range(10):
            assert len(find_chain(generate_random_regular(n, 3, seed))) == n


def test_chain_prefix_examples():
    g = cycle(10)
    c = Chain(tuple(range(10)), g)
    assert chain_prefix(c, 1.0) == c
    zero = chain_prefix(c, 0.0)
    assert len(zero) == 1 and zero.num_edges == 0
    half = chain_prefix(Chain(tuple(range(9)), g), 0.5)
    assert half.num_edges == 4 and len(half) == 5
    with pytest.raises(InvalidParams):
        chain_prefix(c, 1.5)
