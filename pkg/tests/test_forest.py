import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from branchdepth.algebra import field_build
from branchdepth.decomposition import DepthDecomposition, RootedTree, decompose
from branchdepth.errors import PreconditionError
from branchdepth.fileformats import format_forest, parse_forest
from branchdepth.forest import (
    ColoredForest,
    MalformedForest,
    forest_of,
    matroid_of,
    mutate_color,
    roundtrip_check,
)
from branchdepth.matroid import LinearMatroid, free_matroid

from corpus import linear_corpus

GF2 = field_build(2)


def c3_gf2():
    return LinearMatroid.from_rows(2, [[1, 0, 1], [0, 1, 1]])


def identity(q, n):
    return LinearMatroid.from_rows(q, [[int(i == j) for j in range(n)] for i in range(n)])


def test_free_matroid_gives_isolated_unit_vertices():
    M = identity(2, 4)
    D = decompose(M)
    assert D.depth == 1
    F = forest_of(M, D)
    assert F.roots() == [0, 1, 2, 3]
    assert all(c == (1,) for c in F.colors)


def test_c3_forest_is_a_path_with_sum_color():
    M = c3_gf2()
    D = decompose(M)
    F = forest_of(M, D)
    assert F.parent == (-1, 0, 1)
    assert F.colors == ((1, 0), (0, 1), (1, 1))
    assert roundtrip_check(M, D, F)


def test_single_vertex_forest():
    N = matroid_of(ColoredForest((-1,), ((1,),), 1, GF2))
    assert N.rank() == 1 and N.is_independent([0])


def test_isolated_vertices_forest_is_free():
    n = 5
    N = matroid_of(ColoredForest((-1,) * n, ((1, 0),) * n, 2, GF2))
    assert N.rank() == n and N.is_independent(range(n))


def test_formal_sums_over_the_path():
    F = ColoredForest((-1, 0, 1), ((1, 0, 0), (0, 1, 0), (1, 0, 1)), 3, GF2)
    N = matroid_of(F)
    assert N.formal_sum(2) == {0: 1, 2: 1}
    assert N.rank() == 3
    # vertex 2 refers to itself, so it is independent of its ancestors
    assert N.is_independent([0, 1, 2])
    G = ColoredForest((-1, 0, 1), ((1, 0, 0), (0, 1, 0), (1, 1, 0)), 3, GF2)
    assert not matroid_of(G).is_independent([0, 1, 2])


@pytest.mark.parametrize("parent,colors,D", [
    ((-1,), ((1, 0),), 1),                 # wrong color length
    ((-1, 0), ((1,), (2,)), 1),            # entry outside GF(2)
    ((-1, 0), ((1, 0), (0, 0, 1)), 2),     # wrong length again
    ((-1, 0, 1), ((1,), (0,), (0,)), 1),   # deeper than D
    ((1, 0), ((1,), (1,)), 1),             # cycle
    ((-1, 7), ((1,), (1,)), 1),            # bad parent
    ((-1,), ((0, 1),), 2),                 # nonzero beyond the path
])
def test_malformed_forests(parent, colors, D):
    with pytest.raises(MalformedForest):
        ColoredForest(parent, colors, D, GF2)


def test_forest_of_rejects_bad_inputs():
    M = c3_gf2()
    with pytest.raises(PreconditionError):
        forest_of(free_matroid(3), decompose(free_matroid(3)))
    with pytest.raises(PreconditionError):
        forest_of(M, decompose(M), bound=1)
    # not nice: the base is split over one vertex
    bad = DepthDecomposition(RootedTree((-1, 0, 1)), (2, 2, 2))
    with pytest.raises(PreconditionError):
        forest_of(M, bad)
    with pytest.raises(PreconditionError):
        forest_of(M, DepthDecomposition(RootedTree((-1, 0, 1)), (1, 2)))


def test_unit_vector_invariant_on_corpus():
    for it in linear_corpus():
        M = it.matroid
        D = decompose(M)
        F = forest_of(M, D)
        T = D.tree
        for b in D.base:
            t = T.depth_of(D.f[b])
            assert F.colors[b] == tuple(int(i == t - 1) for i in range(F.D))
            assert F.depths[b] == t - 1
        for e in set(range(M.n)) - D.base:
            assert not any(F.colors[e][F.depths[e]:]) or F.depths[e] == 0 and not any(F.colors[e])


def test_roundtrip_and_rank_on_corpus():
    for it in linear_corpus():
        M = it.matroid
        D = decompose(M)
        F = forest_of(M, D)
        assert roundtrip_check(M, D, F), it.name
        assert matroid_of(F).rank() == M.rank()


def test_roundtrip_both_backends(backend):
    for it in linear_corpus()[::5]:
        assert roundtrip_check(it.matroid, decompose(it.matroid))


def test_roundtrip_large_ground_set_uses_small_subsets():
    rng = random.Random(1)
    rows = [[rng.randrange(3) for _ in range(14)] for _ in range(3)]
    M = LinearMatroid.from_rows(3, rows)
    v = roundtrip_check(M, decompose(M))
    assert v and v.checked == sum(1 for k in range(5) for _ in itertools.combinations(range(14), k))


def test_mutation_is_detected():
    seen = 0
    for i, it in enumerate(linear_corpus()):
        M = it.matroid
        D = decompose(M)
        F = forest_of(M, D)
        G = mutate_color(F, seed=i)
        if M.rank() == 0:
            assert G is None
            continue
        v = roundtrip_check(M, D, G)
        assert not v and v.witness is not None
        seen += 1
    assert seen > 150


def test_mutation_deterministic():
    M = c3_gf2()
    F = forest_of(M, decompose(M))
    assert mutate_color(F, 4) == mutate_color(F, 4)


def _relabel_check(F, perm):
    N, P = matroid_of(F), matroid_of(F.relabel(perm))
    for k in range(F.n + 1):
        for X in itertools.combinations(range(F.n), k):
            assert N.is_independent(X) == P.is_independent([perm[x] for x in X])


def test_relabel_invariance():
    rng = random.Random(3)
    for it in linear_corpus()[:40]:
        F = forest_of(it.matroid, decompose(it.matroid))
        if F.n > 8:
            continue
        perm = list(range(F.n))
        rng.shuffle(perm)
        _relabel_check(F, perm)


def _restrict_to_closure(F, X):
    keep = sorted({w for x in X for w in F.path(x)})
    pos = {w: i for i, w in enumerate(keep)}
    parent = tuple(-1 if F.parent[w] == -1 else pos[F.parent[w]] for w in keep)
    return ColoredForest(parent, tuple(F.colors[w] for w in keep), F.D, F.field), pos


def test_independence_depends_only_on_the_path_closure():
    rng = random.Random(8)
    for it in linear_corpus()[::3]:
        F = forest_of(it.matroid, decompose(it.matroid))
        N = matroid_of(F)
        for _ in range(10):
            X = [e for e in range(F.n) if rng.random() < 0.4]
            sub, pos = _restrict_to_closure(F, X)
            assert N.is_independent(X) == matroid_of(sub).is_independent([pos[x] for x in X])


def test_forest_text_roundtrip():
    for it in linear_corpus()[::4]:
        F = forest_of(it.matroid, decompose(it.matroid))
        assert parse_forest(format_forest(F)) == F


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 9), st.data())
def test_roundtrip_property(r, n, data):
    q = data.draw(st.sampled_from([2, 3, 4, 5, 7]))
    rows = [[data.draw(st.integers(0, q - 1)) for _ in range(n)] for _ in range(r)]
    M = LinearMatroid.from_rows(q, rows)
    D = decompose(M)
    assert roundtrip_check(M, D)
