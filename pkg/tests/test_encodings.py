import itertools
import random
from fractions import Fraction

import pytest

from branchdepth.errors import InterpretationError, PreconditionError
from branchdepth.encodings import (
    Rank3Matroid,
    binary_encode,
    edge_element_fraction,
    graph_interpret,
    interpretation_classes,
    rank3_encode,
    rank3_rational_rep,
    same_labelled_graph,
)
from branchdepth.graph import Graph, complete_graph, path_graph, random_graph
from branchdepth.matroid import (
    LinearMatroid,
    circuit_axioms_check,
    enumerate_circuit_masks,
    enumerate_circuits,
    free_matroid,
)


def single_edge():
    return Graph(2, ((0, 1),))


def test_rank3_single_edge():
    M = rank3_encode(single_edge(), 2)
    assert M.n == 5 and M.rank() == 3 - 1
    assert M.labels == ("0.0", "0.1", "1.0", "1.1", "0-1")
    for a in (0, 1):
        for b in (2, 3):
            assert not M.is_independent([a, b, 4])
            assert M.is_independent([a, b])


def test_rank3_empty_graph_transversals_independent():
    M = rank3_encode(Graph(3, ()), 2)
    assert M.rank() == 3
    for t in itertools.product((0, 1), (2, 3), (4, 5)):
        assert M.is_independent(t)


def test_rank3_rank_rule():
    G = Graph(4, ((0, 1), (2, 3)))
    M = rank3_encode(G, 2)
    e01, e23 = 8, 9
    assert M.point[e01] == 4 and M.edge_points[M.point[e01]] == (0, 1)
    assert M.rank_mask(1 << 0 | 1 << 1) == 1
    assert M.rank_mask(1 << 0 | 1 << 4 | 1 << e23) == 3
    assert M.rank_mask(1 << 0 | 1 << 2 | 1 << e01) == 2
    assert M.rank_mask(1 << 0 | 1 << 2 | 1 << 4 | 1 << e01) == 3
    assert M.dependent_triples() == [(0, 1, 4), (2, 3, 5)]
    assert M.is_edge_element(e01) and not M.is_edge_element(7)


def test_rank3_needs_k_two():
    with pytest.raises(PreconditionError):
        rank3_encode(single_edge(), 1)
    with pytest.raises(PreconditionError):
        binary_encode(single_edge(), 0)
    assert Rank3Matroid.from_graph(single_edge()).n == 3


def small_graphs(count, seed, max_vertices=6, max_elements=20):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_vertices)
        G = random_graph(n, rng.random(), rng)
        if 2 * n + len(G.edges) <= max_elements:
            out.append(G)
    return out


def test_rank3_circuit_axioms():
    for G in small_graphs(25, 1):
        M = rank3_encode(G, 2)
        assert circuit_axioms_check(enumerate_circuits(M), M.n), G


def test_rank3_axioms_catch_a_bad_family():
    M = rank3_encode(Graph(3, ((0, 1),)), 2)
    circuits = [c for c in enumerate_circuits(M) if len(c) != 2]
    assert not circuit_axioms_check(circuits, M.n)


def test_parabola_points_in_general_position():
    rep = rank3_rational_rep(Graph(3, ()), 2)
    M = rep.matroid()
    assert M.is_independent([0, 2, 4])
    assert rep.redraws == 0


def test_rational_single_edge():
    rep = rank3_rational_rep(single_edge(), 2, seed=5)
    M = rep.matroid()
    assert not M.is_independent([0, 2, 4])
    assert all(all(isinstance(x, int) for x in c) for c in rep.columns())


def test_rational_representation_agrees():
    for seed, G in enumerate(small_graphs(20, 2, max_vertices=6, max_elements=40)):
        M = rank3_encode(G, 2)
        R = rank3_rational_rep(G, 2, seed=seed).matroid()
        for size in range(5):
            for X in itertools.combinations(range(M.n), size):
                assert M.is_independent(X) == R.is_independent(X)


def test_rational_budget_exhausted():
    with pytest.raises(PreconditionError):
        rank3_rational_rep(complete_graph(4), 2, budget=0)


def test_binary_single_edge():
    M = binary_encode(single_edge(), 2)
    assert M.rank() == 2
    assert [tuple(c) for c in M.columns] == [(1, 0), (1, 0), (0, 1), (0, 1), (1, 1)]
    assert sorted(map(sorted, [c for c in _circuits(M) if len(c) == 3])) == [[0, 2, 4], [0, 3, 4], [1, 2, 4], [1, 3, 4]]


def _circuits(M):
    return [[e for e in range(M.n) if c >> e & 1] for c in enumerate_circuit_masks(M)]


def test_binary_empty_graph_only_parallel_pairs():
    M = binary_encode(Graph(3, ()), 2)
    assert M.rank() == 3
    assert sorted(_circuits(M)) == [[0, 1], [2, 3], [4, 5]]


def test_binary_rank_is_vertex_count():
    for G in small_graphs(30, 3, max_vertices=8, max_elements=60):
        if G.n:
            assert binary_encode(G, 3).rank() == G.n


@pytest.mark.parametrize("k", [2, 3])
def test_interpret_round_trip(k):
    rng = random.Random(10 + k)
    for _ in range(40):
        G = random_graph(rng.randint(1, 12), rng.random(), rng)
        for enc in (rank3_encode, binary_encode):
            H = graph_interpret(enc(G, k))
            assert same_labelled_graph(G, H)


def test_interpret_keeps_custom_labels():
    G = Graph(3, ((0, 2),), ("a", "b", "c"))
    H = graph_interpret(rank3_encode(G, 2))
    assert H.labels == ("a", "b", "c") and H.edges == ((0, 2),)


def test_interpret_strict_mode():
    G = path_graph(4)
    assert same_labelled_graph(G, graph_interpret(binary_encode(G, 3), strict=True))
    assert same_labelled_graph(G, graph_interpret(rank3_encode(G, 2), strict=True))


def test_interpret_free_matroid_is_empty():
    H = graph_interpret(free_matroid(4))
    assert H.n == 0 and H.edges == ()


def test_interpret_rejects_loops():
    M = LinearMatroid.from_rows(2, [[1, 1, 0]])
    with pytest.raises(InterpretationError):
        interpretation_classes(M)


def test_same_labelled_graph():
    assert same_labelled_graph(Graph(2, ((0, 1),)), Graph(2, ((0, 1),)))
    assert not same_labelled_graph(Graph(2, ((0, 1),)), Graph(2, ()))
    assert not same_labelled_graph(Graph(2, (), ("a", "b")), Graph(2, (), ("b", "a")))


def test_edge_element_fraction():
    for n in range(3, 9):
        G = path_graph(n)
        k = n * n
        M = rank3_encode(G, k)
        edges = sum(M.is_edge_element(e) for e in range(M.n))
        assert Fraction(edges, M.n) == edge_element_fraction(G, k) == Fraction(n - 1, n - 1 + k * n)
        assert edge_element_fraction(G, k) <= Fraction(1, n)
    assert edge_element_fraction(Graph(0, ()), 2) == 0
