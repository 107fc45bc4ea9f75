"""Brute-force oracles: exact branch-depth and exact graph tree-depth.

Both are exponential and guarded.  They exist to check the approximation
algorithm and the bounds relating the parameters on small instances.
"""
from __future__ import annotations

from functools import lru_cache

from . import kernels
from .decomposition import DepthDecomposition, RootedTree
from .errors import GuardExceeded
from .graph import Graph, induced_components
from .matroid import Matroid, bits, popcount

MAX_RANK = 7
MAX_ELEMENTS = 15
MAX_VERTICES = 12


def rooted_trees(n: int):
    """Level sequences of all rooted trees on ``n`` vertices, one per isomorphism class.

    Sequences are canonical (each subtree's sequence is lexicographically at
    least its right siblings'), generated in decreasing order starting from the
    path.  The root has level 0.
    """
    if n <= 0:
        return
    L = list(range(n))
    while True:
        yield tuple(L)
        p = next((i for i in range(n - 1, 0, -1) if L[i] > 1), None)
        if p is None:
            return
        q = next(i for i in range(p - 1, -1, -1) if L[i] == L[p] - 1)
        for i in range(p, n):
            L[i] = L[i - p + q]


def tree_from_levels(levels) -> RootedTree:
    parent = [-1] * len(levels)
    last_at = {}
    for i, lv in enumerate(levels):
        if lv:
            parent[i] = last_at[lv - 1]
        last_at[lv] = i
    return RootedTree(tuple(parent))


def _classes(M: Matroid):
    """Non-loop parallel classes as lists of elements, ordered by lowest member."""
    classes: list[list[int]] = []
    for e in range(M.n):
        if M.rank_mask(1 << e) == 0:
            continue
        for cl in classes:
            if M.rank_mask(1 << cl[0] | 1 << e) == 1:
                cl.append(e)
                break
        else:
            classes.append([e])
    return classes


def _search(M: Matroid, d_max: int | None):
    r = M.rank_mask(M.ground_mask)
    if r > MAX_RANK or M.n > MAX_ELEMENTS:
        raise GuardExceeded(
            f"exact branch-depth needs rank <= {MAX_RANK} and at most {MAX_ELEMENTS} elements "
            f"(got rank {r}, {M.n} elements)")
    if r == 0:
        return 0, RootedTree((-1,)), (0,) * M.n
    classes = _classes(M)
    m = len(classes)
    reps = [cl[0] for cl in classes]
    # Co-locating a parallel class never hurts: adding a parallel element leaves
    # the rank unchanged, and loops contribute nothing to any rank.
    ranks = [0] * (1 << m)
    for X in range(1, 1 << m):
        ranks[X] = M.rank_mask(sum(1 << reps[i] for i in bits(X)))
    top = r if d_max is None else min(r, d_max)
    for d in range(1, top + 1):
        for levels in rooted_trees(r + 1):
            if max(levels) != d:
                continue
            T = tree_from_levels(levels)
            leaves = T.leaves
            paths = T.path_masks
            full = 1 << len(leaves)
            union_size = [0] * full
            umask = [0] * full
            for S in range(1, full):
                low = S & -S
                umask[S] = umask[S ^ low] | paths[leaves[low.bit_length() - 1]]
                union_size[S] = popcount(umask[S])
            twin_prev = []
            for i, v in enumerate(leaves):
                prev = -1
                for j in range(i - 1, -1, -1):
                    if T.parent[leaves[j]] == T.parent[v]:
                        prev = j
                        break
                twin_prev.append(prev)
            found = kernels.leaf_search(ranks, m, union_size, twin_prev)
            if found is not None:
                f = [leaves[0]] * M.n
                for i, cl in enumerate(classes):
                    for e in cl:
                        f[e] = leaves[found[i]]
                return d, T, tuple(f)
    return None


def branch_depth_exact(M: Matroid, d_max: int | None = None) -> int | None:
    """Smallest depth of a depth-decomposition of ``M``; ``None`` if it exceeds ``d_max``.

    Trees with ``r(M)`` edges are enumerated up to isomorphism in order of
    depth; elements are placed on leaves only, which loses nothing because any
    decomposition can be refined to one mapping into leaves.
    """
    res = _search(M, d_max)
    return None if res is None else res[0]


def optimal_decomposition(M: Matroid, d_max: int | None = None) -> DepthDecomposition | None:
    res = _search(M, d_max)
    if res is None:
        return None
    _, T, f = res
    return DepthDecomposition(T, f)


def tree_depth_exact(G: Graph) -> int:
    """Tree-depth of ``G`` counted in edges, so a single vertex has depth 0.

    A disconnected graph takes the maximum over its components.
    """
    if G.n > MAX_VERTICES:
        raise GuardExceeded(f"exact tree-depth is limited to {MAX_VERTICES} vertices")
    if G.n == 0:
        return 0
    adj = G.adjacency()

    @lru_cache(maxsize=None)
    def td(mask: int) -> int:
        comps = induced_components(adj, mask)
        if len(comps) > 1:
            return max(td(c) for c in comps)
        if popcount(mask) == 1:
            return 0
        return 1 + min(td(mask & ~(1 << v)) for v in bits(mask))

    return td((1 << G.n) - 1)
