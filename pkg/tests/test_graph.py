import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twolevel.graph import (
    Graph,
    GeneratorParams,
    align_colour,
    articulation_points,
    block_decompose,
    disk_graph,
    generate_neighbourhood_graph,
    k_core_reduce,
    peel,
    preprocess,
    recombine,
    sample_points,
    square,
)
from twolevel.model import Instance, evaluate_colouring
from twolevel.rng import SplitMix64

from conftest import complete, ids, node, random_graphs


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from(g.edges)
    return h


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.from_edges(n, chosen)


# ------------------------------------------------------------------- Graph


def test_graph_rejects_bad_input():
    with pytest.raises(ValueError, match="self-loop"):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError, match="parallel"):
        Graph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError, match="unknown"):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(ValueError, match="duplicate"):
        Graph([1, 1])


def test_graph_basics():
    g = Graph([5, 2, 9], [(9, 2), (5, 2)])
    assert g.nodes == (2, 5, 9)
    assert g.edges == ((2, 5), (2, 9))
    assert g.degree(2) == 2 and g.has_edge(9, 2) and not g.has_edge(5, 9)
    h, index = g.relabel()
    assert h.nodes == (0, 1, 2) and index == {2: 0, 5: 1, 9: 2}
    assert [c.nodes for c in Graph([0, 1, 2, 3], [(2, 3)]).components()] == [(0,), (1,), (2, 3)]


# -------------------------------------------------------------- generation


def test_splitmix_reference_values():
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]
    u = SplitMix64(0).random()
    assert u == (0xE220A8397B1DCDAF >> 11) / 2**53


def test_points_draw_x_then_y():
    rng = SplitMix64(42)
    expected = [[rng.random(), rng.random()] for _ in range(3)]
    assert sample_points(3, 42).tolist() == expected


def test_torus_wraparound():
    pts = [[0.05, 0.5], [0.95, 0.5]]
    assert disk_graph(pts, 0.12, "torus").m == 1
    assert disk_graph(pts, 0.12, "plain-euclidean").m == 0


def test_squared_path_is_triangle():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert square(path) == complete(3)


def test_radius_zero_gives_no_edges():
    for n in (1, 7, 30):
        assert generate_neighbourhood_graph(GeneratorParams(n, 0.0, 3)).m == 0


def test_generator_deterministic_and_squared():
    p = GeneratorParams(40, 0.15, 123)
    g = generate_neighbourhood_graph(p)
    assert g == generate_neighbourhood_graph(p)
    base = disk_graph(sample_points(40, 123), 0.15)
    assert g == square(base)
    assert generate_neighbourhood_graph(GeneratorParams(40, 0.15, 124)) != g


def test_generator_params_validation():
    with pytest.raises(ValueError):
        GeneratorParams(0, 0.1, 0)
    with pytest.raises(ValueError):
        GeneratorParams(5, -0.1, 0)
    with pytest.raises(ValueError):
        GeneratorParams(5, 0.1, 0, "manhattan")


# ------------------------------------------------------------------ k-core


def test_k_core_examples():
    k4_pendant = Graph.from_edges(5, list(itertools.combinations(range(4), 2)) + [(3, 4)])
    assert k_core_reduce(k4_pendant, 3) == [complete(4)]
    cycle = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert k_core_reduce(cycle, 3) == []


def test_grid15_three_core(grid15):
    (core,) = k_core_reduce(grid15, 3)
    assert core.n == 10
    assert set(core.nodes) == ids(
        [(0, .5), (0, 1.5), (1, .5), (1, 1.5), (2, .5), (2, 1.5), (3, 1.5), (3, 2.5), (4, 1.5), (4, 2.5)]
    )


def test_peel_order_is_round_major():
    # A path 0-1-2-3 with k=2: round one removes the ends, round two the rest.
    core, order = peel(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), 2)
    assert core == frozenset() and order == (0, 3, 1, 2)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.integers(1, 4))
def test_k_core_matches_networkx(g, k):
    expected = nx.k_core(to_nx(g), k)
    got = k_core_reduce(g, k)
    assert sorted(v for c in got for v in c.nodes) == sorted(expected.nodes)
    assert sorted(e for c in got for e in c.edges) == sorted(tuple(sorted(e)) for e in expected.edges)


# ------------------------------------------------------------------ blocks


def test_two_triangles_sharing_a_vertex():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert [b.nodes for b in block_decompose(g)] == [(0, 1, 2), (2, 3, 4)]
    assert articulation_points(g) == [2]


def test_biconnected_graph_is_one_block():
    assert block_decompose(complete(5)) == [complete(5)]
    cycle = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert block_decompose(cycle) == [cycle]


def test_grid15_blocks(grid15):
    (core,) = k_core_reduce(grid15, 3)
    blocks = block_decompose(core)
    assert sorted(set(b.nodes) for b in blocks) == sorted(
        [
            ids([(0, .5), (0, 1.5), (1, .5), (1, 1.5), (2, .5), (2, 1.5)]),
            ids([(2, 1.5), (3, 1.5), (3, 2.5), (4, 1.5), (4, 2.5)]),
        ],
        key=sorted,
    )
    assert articulation_points(core) == [node(2, 1.5)]


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_blocks_match_networkx(g):
    ours = sorted(tuple(b.edges) for b in block_decompose(g))
    theirs = sorted(
        tuple(sorted(tuple(sorted(e)) for e in comp)) for comp in nx.biconnected_component_edges(to_nx(g))
    )
    assert ours == theirs
    assert articulation_points(g) == sorted(nx.articulation_points(to_nx(g)))


# ------------------------------------------------------------- preprocess


def test_grid15_preprocess_leaves(grid15):
    tree = preprocess(grid15, 3)
    assert sorted(set(leaf.nodes) for leaf in tree.leaves) == sorted(
        [ids([(0, .5), (0, 1.5), (1, .5), (1, 1.5)]), ids([(3, 1.5), (3, 2.5), (4, 1.5), (4, 2.5)])],
        key=sorted,
    )
    assert all(leaf.n == 4 and leaf.m == 6 for leaf in tree.leaves)


def test_preprocess_trivial_cases():
    assert preprocess(complete(5), 3).leaves == (complete(5),)
    assert preprocess(Graph.from_edges(6, []), 2).leaves == ()


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=14), st.integers(1, 4))
def test_leaf_invariants(g, k):
    tree = preprocess(g, k)
    seen = set()
    for leaf in tree.leaves:
        assert all(leaf.degree(v) >= k for v in leaf.nodes)
        assert nx.is_biconnected(to_nx(leaf)) or leaf.n == 2
        assert not seen.intersection(leaf.edges)
        seen.update(leaf.edges)
        assert set(leaf.edges) <= set(g.edges)
        assert leaf == g.subgraph(leaf.nodes)
    assert tree.edges_eliminated() == g.m - len(seen)


# ------------------------------------------------------------- recombine


def test_align_colour_is_cost_preserving_bijection():
    for k, kp in [(2, 2), (2, 3), (3, 2)]:
        K = k * kp
        for a, b in itertools.product(range(K), repeat=2):
            img = [align_colour(c, a, b, k) for c in range(K)]
            assert sorted(img) == list(range(K))
            assert img[a] == b
            for c, d in itertools.product(range(K), repeat=2):
                assert (c % k == d % k) == (img[c] % k == img[d] % k)


def test_recombine_two_triangle_blocks():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    tree = preprocess(g, 2)
    assert [leaf.nodes for leaf in tree.leaves] == [(0, 1, 2), (2, 3, 4)]
    first = {0: 1, 1: 3, 2: 0}
    second = {2: 2, 3: 1, 4: 0}
    col = recombine(tree, [first, second])
    assert col[2] == 0
    inst = Instance(g, 2, 2)
    leaf_costs = sum(evaluate_colouring(inst.restrict(t), c).objective for t, c in zip(tree.leaves, (first, second)))
    assert evaluate_colouring(inst, col).objective == leaf_costs


def test_recombine_pendant_gets_free_residue():
    g = Graph.from_edges(5, list(itertools.combinations(range(4), 2)) + [(3, 4)])
    tree = preprocess(g, 3)
    leaf_col = {0: 0, 1: 1, 2: 2, 3: 4}
    col = recombine(tree, {0: leaf_col})
    inst = Instance(g, 3, 2)
    assert col[4] % 3 != col[3] % 3
    leaf_cost = evaluate_colouring(inst.restrict(tree.leaves[0]), leaf_col).objective
    assert evaluate_colouring(inst, col).objective == leaf_cost == 1


def test_recombine_single_leaf_identity():
    tree = preprocess(complete(5), 3)
    sol = {v: v for v in range(5)}
    assert recombine(tree, [sol]) == sol


def test_recombine_errors():
    tree = preprocess(complete(5), 3)
    with pytest.raises(ValueError):
        recombine(tree, [])
    with pytest.raises(ValueError):
        recombine(tree, {})
    with pytest.raises(ValueError):
        recombine(tree, [{0: 0, 1: 1}])


def test_recombine_adds_leaf_costs():
    # Arbitrary leaf colourings: the lifted cost is always the leaf sum.
    for g in random_graphs(40, [15, 25], [0.2, 0.3]):
        for k in (2, 3):
            inst = Instance(g, k, 2)
            tree = preprocess(g, k)
            sols = [{v: (v * 7 + i) % inst.n_colours for v in leaf.nodes} for i, leaf in enumerate(tree.leaves)]
            col = recombine(tree, sols)
            total = sum(evaluate_colouring(inst.restrict(t), s).objective for t, s in zip(tree.leaves, sols))
            assert evaluate_colouring(inst, col).objective == total
