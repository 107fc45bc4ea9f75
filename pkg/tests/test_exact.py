import itertools
import math
import random

import pytest

from branchdepth.decomposition import DepthDecomposition, RootedTree, decompose, validate
from branchdepth.errors import GuardExceeded
from branchdepth.exact import (
    branch_depth_exact,
    optimal_decomposition,
    rooted_trees,
    tree_depth_exact,
    tree_from_levels,
)
from branchdepth.graph import Graph, complete_graph, cycle_graph, path_graph, star_graph
from branchdepth.matroid import (
    GraphicMatroid,
    LinearMatroid,
    UniformMatroid,
    circuit_matroid,
    contract,
    delete,
    free_matroid,
)

from corpus import connected_graphs, random_linear


def ahu(T: RootedTree, v=None) -> str:
    v = T.root if v is None else v
    return "(" + "".join(sorted(ahu(T, c) for c in T.children[v])) + ")"


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 4), (5, 9), (6, 20), (7, 48), (8, 115), (9, 286)])
def test_rooted_tree_counts(n, count):
    seqs = list(rooted_trees(n))
    assert len(seqs) == count
    assert len({ahu(tree_from_levels(s)) for s in seqs}) == count
    assert seqs[0] == tuple(range(n))
    assert all(s[0] == 0 for s in seqs)


def test_rooted_trees_empty():
    assert list(rooted_trees(0)) == []


def naive_branch_depth(M) -> int:
    r = M.rank()
    if r == 0:
        return 0
    best = r
    for parent in itertools.product(*[range(i) for i in range(1, r + 1)]):
        T = RootedTree((-1,) + parent)
        if T.depth >= best:
            continue
        for f in itertools.product(range(r + 1), repeat=M.n):
            if validate(M, DepthDecomposition(T, f), "exhaustive"):
                best = T.depth
                break
    return best


def small_matroids():
    out = [circuit_matroid(3), circuit_matroid(4), free_matroid(3), UniformMatroid(2, 5),
           UniformMatroid(0, 2), GraphicMatroid(complete_graph(3))]
    for q, seed in ((2, 5), (3, 6)):
        rng = random.Random(seed)
        while len(out) < 6 + 10 * (q - 1):
            r, n = rng.randint(1, 3), rng.randint(2, 5)
            M = LinearMatroid.from_rows(q, [[rng.randrange(q) for _ in range(n)] for _ in range(r)])
            out.append(M)
    return out


@pytest.mark.parametrize("M", small_matroids(), ids=repr)
def test_branch_depth_matches_naive_search(M):
    assert branch_depth_exact(M) == naive_branch_depth(M)


def test_branch_depth_backends_agree(backend):
    for M in random_linear(2, 40, 3):
        if M.rank() <= 4:
            assert branch_depth_exact(M) >= 0
    assert [branch_depth_exact(circuit_matroid(d)) for d in range(2, 9)] == [1, 2, 2, 3, 3, 3, 3]


def test_circuit_values():
    values = [branch_depth_exact(circuit_matroid(d)) for d in range(2, 9)]
    assert values == [1, 2, 2, 3, 3, 3, 3]
    for d, b in zip(range(2, 9), values):
        assert b >= math.ceil(math.log2(d))


def test_simple_values():
    assert branch_depth_exact(free_matroid(5)) == 1
    assert branch_depth_exact(UniformMatroid(0, 4)) == 0
    assert branch_depth_exact(UniformMatroid(1, 4)) == 1
    assert branch_depth_exact(GraphicMatroid(star_graph(4))) == 1


def test_optimal_decomposition_is_valid_and_optimal():
    for M in small_matroids():
        D = optimal_decomposition(M)
        assert validate(M, D, "exhaustive")
        assert D.depth == branch_depth_exact(M) or M.rank() == 0


def test_depth_cap():
    assert branch_depth_exact(circuit_matroid(8), d_max=2) is None
    assert branch_depth_exact(circuit_matroid(8), d_max=3) == 3
    assert optimal_decomposition(circuit_matroid(5), d_max=1) is None


def test_guard():
    with pytest.raises(GuardExceeded):
        branch_depth_exact(free_matroid(16))
    with pytest.raises(GuardExceeded):
        branch_depth_exact(circuit_matroid(9))


def test_minor_monotone_small():
    rng = random.Random(9)
    for M in random_linear(3, 30, 21):
        e = rng.randrange(M.n)
        b = branch_depth_exact(M)
        assert branch_depth_exact(contract(M, [e])) <= b
        assert branch_depth_exact(delete(M, [e])) <= b


def test_decompose_within_four_power():
    for M in small_matroids():
        assert decompose(M).depth <= 4 ** branch_depth_exact(M)


# -- tree-depth -----------------------------------------------------------

def naive_tree_depth(G: Graph) -> int:
    best = G.n
    for parent in itertools.product(range(-1, G.n), repeat=G.n):
        depth = [None] * G.n
        ok = True
        for v in range(G.n):
            seen, u, d = set(), v, 0
            while parent[u] != -1:
                if u in seen or parent[u] == u:
                    ok = False
                    break
                seen.add(u)
                u, d = parent[u], d + 1
            if not ok or d > G.n:
                ok = False
                break
            depth[v] = d
        if not ok:
            continue

        def anc(a, b):
            while b != -1:
                if b == a:
                    return True
                b = parent[b]
            return False

        if all(anc(u, v) or anc(v, u) for u, v in G.edges):
            best = min(best, max(depth))
    return best


@pytest.mark.parametrize("G", connected_graphs(4) + [Graph(4, ((0, 1), (2, 3)))], ids=lambda G: str(G.edges))
def test_tree_depth_matches_naive(G):
    assert tree_depth_exact(G) == naive_tree_depth(G)


def test_tree_depth_examples():
    assert tree_depth_exact(Graph(1, ())) == 0
    assert tree_depth_exact(Graph(0, ())) == 0
    assert tree_depth_exact(complete_graph(5)) == 4
    assert tree_depth_exact(star_graph(6)) == 1
    assert tree_depth_exact(cycle_graph(4)) == 2
    for n in range(1, 12):
        assert tree_depth_exact(path_graph(n)) == math.ceil(math.log2(n + 1)) - 1
    with pytest.raises(GuardExceeded):
        tree_depth_exact(path_graph(13))


def test_branch_depth_at_most_tree_depth_five_vertices():
    for G in connected_graphs(5):
        if G.n >= 2:
            assert branch_depth_exact(GraphicMatroid(G)) <= tree_depth_exact(G)
