import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from branchdepth.errors import ElementError, GuardExceeded, PreconditionError
from branchdepth.graph import Graph, complete_graph, cycle_graph
from branchdepth.matroid import (
    CircuitMatroid,
    GraphicMatroid,
    LinearMatroid,
    MinorView,
    UniformMatroid,
    _elimination_violation_dense,
    _elimination_violation_sparse,
    bits,
    circuit_axioms_check,
    circuit_matroid,
    closure,
    component_masks,
    components,
    contract,
    delete,
    enumerate_circuits,
    free_matroid,
    fundamental_circuit,
    greedy_base,
    independent_sets,
    is_connected,
    is_parallel,
    loops_and_bridges,
    mask_of,
    materialize,
    restrict,
)

from corpus import corpus, random_linear


def small_matroids(max_n=8):
    return [it.matroid for it in corpus() if it.matroid.n <= max_n]


@st.composite
def linear_matroids(draw, max_n=7):
    q = draw(st.sampled_from([2, 3, 4]))
    r = draw(st.integers(1, 4))
    n = draw(st.integers(1, max_n))
    rows = [[draw(st.integers(0, q - 1)) for _ in range(n)] for _ in range(r)]
    return LinearMatroid.from_rows(q, rows)


def _subsets(n):
    return range(1 << n)


@settings(max_examples=80, deadline=None)
@given(linear_matroids())
def test_rank_axioms(M):
    for X in _subsets(M.n):
        r = M.rank_mask(X)
        assert 0 <= r <= bin(X).count("1")
        for e in range(M.n):
            assert M.rank_mask(X | 1 << e) in (r, r + 1)
    for X, Y in itertools.product(_subsets(M.n), repeat=2):
        if M.n <= 5:
            assert M.rank_mask(X | Y) + M.rank_mask(X & Y) <= M.rank_mask(X) + M.rank_mask(Y)


def test_graphic_rank_matches_networkx():
    rng = random.Random(1)
    for _ in range(40):
        n = rng.randint(2, 6)
        G = Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5))
        M = GraphicMatroid(G)
        for X in _subsets(M.n):
            g = nx.Graph()
            g.add_nodes_from(range(n))
            g.add_edges_from(G.edges[i] for i in bits(X))
            assert M.rank_mask(X) == n - nx.number_connected_components(g)


def test_from_edge_list_keeps_order_and_multiedges():
    M = GraphicMatroid.from_edge_list(3, [(1, 2), (0, 1), (0, 1), (2, 2)])
    assert M.rank() == 2
    assert M.rank({1, 2}) == 1          # parallel edges
    assert M.rank({3}) == 0             # self-loop
    assert M.edge_list[0] == (1, 2)


def test_uniform_and_circuit():
    U = UniformMatroid(2, 4)
    assert U.rank({0, 1, 2}) == 2
    assert circuit_matroid(4).rank() == 3
    assert free_matroid(3).is_independent({0, 1, 2})
    with pytest.raises(ValueError):
        UniformMatroid(5, 3)


def test_element_errors():
    M = UniformMatroid(1, 3)
    with pytest.raises(ElementError):
        M.rank({3})
    with pytest.raises(ElementError):
        M.rank({-1})


def test_contraction_rank_formula():
    for M in small_matroids(7)[:120]:
        rng = random.Random(M.n)
        F = {e for e in range(M.n) if rng.random() < 0.4}
        N = contract(M, F)
        rest = [e for e in range(M.n) if e not in F]
        rF = M.rank(F)
        for X in _subsets(N.n):
            base_X = {rest[i] for i in bits(X)}
            assert N.rank_mask(X) == M.rank(base_X | F) - rF


def test_deletion_is_restriction_and_views_flatten():
    M = GraphicMatroid(complete_graph(4))
    D = delete(M, {0, 5})
    R = restrict(M, {1, 2, 3, 4})
    assert D.elements == R.elements == (1, 2, 3, 4)
    N = contract(D, {0})            # contracts base element 1
    assert isinstance(N, MinorView) and N.base is M
    assert N.elements == (2, 3, 4) and N.contracted == 1 << 1
    assert N.rank() == M.rank({1, 2, 3, 4}) - 1
    assert N.from_base(1 << 3) == 1 << 1
    with pytest.raises(ElementError):
        N.from_base(1 << 0)


def test_closure_loops_bridges_parallel():
    M = LinearMatroid(2, [(0, 0), (1, 0), (1, 0), (0, 1)])
    loops, bridges = loops_and_bridges(M)
    assert loops == {0} and bridges == {3}
    assert closure(M, {1}) == {0, 1, 2}
    assert is_parallel(M, 1, 2) and not is_parallel(M, 0, 1)
    with pytest.raises(PreconditionError):
        is_parallel(M, 1, 1)


def test_greedy_base_and_fundamental_circuit():
    M = GraphicMatroid(complete_graph(4))   # edges 01 02 03 12 13 23
    assert greedy_base(M) == {0, 1, 2}
    assert fundamental_circuit(M, {0, 1, 2}, 3) == {0, 1, 3}
    assert greedy_base(M, forbidden={0}) == {1, 2, 3}
    with pytest.raises(PreconditionError):
        greedy_base(M, forbidden={0, 1, 2})
    with pytest.raises(PreconditionError):
        fundamental_circuit(M, {0, 1, 2}, 0)


def _brute_circuits(M):
    dep = [X for X in _subsets(M.n) if M.rank_mask(X) < bin(X).count("1")]
    dset = set(dep)
    return sorted(
        (frozenset(bits(X)) for X in dep if not any((X & ~(1 << e)) in dset for e in bits(X))),
        key=lambda c: (len(c), sorted(c)))


def test_enumerate_circuits_matches_definition():
    for M in small_matroids(8):
        got = sorted(enumerate_circuits(M), key=lambda c: (len(c), sorted(c)))
        assert got == _brute_circuits(M)


def test_circuit_enumeration_guard():
    with pytest.raises(GuardExceeded):
        enumerate_circuits(UniformMatroid(2, 21))


def _brute_components(M):
    circs = _brute_circuits(M)
    adj = {e: {e} for e in range(M.n)}
    for C in circs:
        for a in C:
            adj[a] |= C
    seen, comps = set(), []
    for e in range(M.n):
        if e in seen:
            continue
        comp, stack = set(), [e]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return sorted(comps, key=min)


def test_components_match_common_circuit_classes():
    for M in small_matroids(8):
        assert components(M) == _brute_components(M)


def test_component_rank_decomposition():
    for M in small_matroids(8):
        comps = component_masks(M)
        for X in _subsets(M.n):
            assert M.rank_mask(X) == sum(M.rank_mask(X & c) for c in comps)


def test_component_edge_cases():
    assert components(UniformMatroid(0, 0)) == []
    assert components(UniformMatroid(0, 3)) == [{0}, {1}, {2}]
    assert is_connected(GraphicMatroid(cycle_graph(5)))
    two_triangles = GraphicMatroid(Graph(6, ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5))))
    assert components(two_triangles) == [{0, 1, 2}, {3, 4, 5}]


def test_independent_sets_complete():
    for M in small_matroids(7)[:80]:
        got = sorted(independent_sets(M))
        want = [X for X in _subsets(M.n) if M.rank_mask(X) == bin(X).count("1")]
        assert got == want


def test_circuit_matroid_roundtrip_via_materialize():
    for M in small_matroids(7)[:60]:
        C = materialize(M)
        for X in _subsets(M.n):
            assert C.rank_mask(X) == M.rank_mask(X)


def test_circuit_axioms_on_real_families():
    for M in small_matroids(9):
        assert circuit_axioms_check(enumerate_circuits(M), M.n).passed


def test_circuit_axioms_failures():
    v = circuit_axioms_check([set()], 2)
    assert not v and v.axiom == "C1"
    v = circuit_axioms_check([{0, 1}, {0, 1, 2}], 3)
    assert not v and v.axiom == "C2"
    v = circuit_axioms_check([{0, 1, 2}, {2, 3, 4}], 5)
    assert not v and v.axiom == "C3"
    c1, c2, e, f = v.witness
    assert e in c1 & c2 and f in c1 - c2
    with pytest.raises(ElementError):
        circuit_axioms_check([{0, 5}], 3)
    with pytest.raises(ValueError):
        CircuitMatroid(5, [{0, 1, 2}, {2, 3, 4}])


def test_dense_and_sparse_elimination_agree():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randint(2, 7)
        fam = {mask_of(rng.sample(range(n), rng.randint(1, n))) for _ in range(rng.randint(1, 5))}
        fam = sorted(fam)
        dense = _elimination_violation_dense(fam, n)
        sparse = _elimination_violation_sparse(fam, n)
        assert (dense is None) == (sparse is None)


def test_linear_matroid_validation():
    with pytest.raises(ValueError):
        LinearMatroid(2, [(0, 1), (1,)])
    with pytest.raises(ValueError):
        LinearMatroid(3, [(0, 3)])
    with pytest.raises(ValueError):
        LinearMatroid.from_rows(2, [[0, 1], [1]])


def test_random_linear_helper_is_seeded():
    a = random_linear(3, 5, 1)
    b = random_linear(3, 5, 1)
    assert [m.columns for m in a] == [m.columns for m in b]
