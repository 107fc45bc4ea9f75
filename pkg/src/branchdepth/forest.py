"""Colored-forest representation of a matroid over GF(q).

Given a nice depth-decomposition (a base mapped bijectively to the non-root
tree vertices, every other element on a leaf), each base element becomes a
forest vertex colored with the unit vector of its depth, and each other
element becomes a new leaf under its tree leaf, colored with its coordinates
in the base elements along the root path.  Deleting the root leaves a forest
that determines the matroid.

Forest vertex ``i`` is matroid element ``i``, so the bijection between
elements and vertices is the identity.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .algebra import FieldSpec, solve_combination
from .decomposition import DepthDecomposition, Verdict, infer_base
from .errors import PreconditionError
from .matroid import LinearMatroid, Matroid, bits
from . import kernels


class MalformedForest(PreconditionError):
    """Parent links or colors violate the forest-representation invariants."""


@dataclass(frozen=True)
class ColoredForest:
    """A rooted forest with ``F_q^D`` vertex colors.

    ``parent[v] == -1`` marks a root.  ``depth`` counts edges from the root of
    the containing tree.
    """

    parent: tuple[int, ...]
    colors: tuple[tuple[int, ...], ...]
    D: int
    field: FieldSpec

    def __post_init__(self):
        n = len(self.parent)
        if len(self.colors) != n:
            raise MalformedForest("every vertex needs a color")
        depth = [-1] * n
        for v in range(n):
            chain, u = [], v
            while u != -1 and depth[u] < 0:
                if not -1 <= self.parent[u] < n:
                    raise MalformedForest(f"vertex {u} has invalid parent {self.parent[u]}")
                chain.append(u)
                u = self.parent[u]
                if len(chain) > n:
                    raise MalformedForest("parent links contain a cycle")
            base = -1 if u == -1 else depth[u]
            for w in reversed(chain):
                base += 1
                depth[w] = base
        q = self.field.q
        for v, c in enumerate(self.colors):
            if len(c) != self.D:
                raise MalformedForest(f"color of vertex {v} has length {len(c)}, expected {self.D}")
            if any(not 0 <= x < q for x in c):
                raise MalformedForest(f"color of vertex {v} has an entry outside GF({q})")
            if depth[v] > self.D:
                raise MalformedForest(f"vertex {v} has depth {depth[v]} > {self.D}")
            # the color may only refer to the path from the root down to v itself
            if any(c[depth[v] + 1:]):
                raise MalformedForest(f"color of vertex {v} is nonzero beyond its path")
        object.__setattr__(self, "depths", tuple(depth))

    @property
    def n(self) -> int:
        return len(self.parent)

    def path(self, v: int) -> list[int]:
        """Vertices from the root of ``v``'s tree down to ``v``."""
        out = []
        while v != -1:
            out.append(v)
            v = self.parent[v]
        return out[::-1]

    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent) if p == -1]

    def relabel(self, perm) -> "ColoredForest":
        """The same colored forest with vertex ``v`` renamed ``perm[v]``."""
        n = self.n
        parent = [0] * n
        colors = [()] * n
        for v in range(n):
            p = self.parent[v]
            parent[perm[v]] = -1 if p == -1 else perm[p]
            colors[perm[v]] = self.colors[v]
        return ColoredForest(tuple(parent), tuple(colors), self.D, self.field)


def forest_of(M: LinearMatroid, D: DepthDecomposition, bound: int | None = None) -> ColoredForest:
    """Forest representation of ``M`` built from the nice decomposition ``D``."""
    if not isinstance(M, LinearMatroid):
        raise PreconditionError("a forest representation needs vectors over a finite field")
    if D.n != M.n:
        raise PreconditionError("decomposition and matroid have different ground sets")
    T = D.tree
    depth = T.depth
    if bound is not None and depth > bound:
        raise PreconditionError(f"decomposition depth {depth} exceeds the bound {bound}")
    B = D.base if D.base is not None else infer_base(M, D)
    if B is None:
        raise PreconditionError("decomposition is not nice: no base is carried by the inner vertices")
    b_of = {}
    for b in B:
        v = D.f[b]
        if v == T.root or v in b_of:
            raise PreconditionError("base elements must map bijectively onto non-root vertices")
        b_of[v] = b
    if len(b_of) != T.edges:
        raise PreconditionError("base elements must map bijectively onto non-root vertices")

    F = M.field
    parent = [-1] * M.n
    colors: list[tuple[int, ...]] = [()] * M.n
    for v, b in b_of.items():
        p = T.parent[v]
        parent[b] = -1 if p == T.root else b_of[p]
        t = T.depth_of(v)
        colors[b] = tuple(1 if i == t - 1 else 0 for i in range(depth))
    for e in range(M.n):
        if e in B:
            continue
        v = D.f[e]
        if not T.is_leaf(v):
            raise PreconditionError(f"element {e} outside the base is not on a leaf")
        chain = _tree_path(T, v)[::-1]
        basis = [M.columns[b_of[u]] for u in chain]
        try:
            alpha = solve_combination(basis, M.columns[e], F) if chain else []
        except ValueError:
            raise PreconditionError(
                f"element {e} is not spanned by the base elements on its root path") from None
        if not chain and any(M.columns[e]):
            raise PreconditionError(f"element {e} is not a loop but sits on the root")
        parent[e] = b_of[v] if chain else -1
        colors[e] = tuple(alpha) + (0,) * (depth - len(alpha))
    return ColoredForest(tuple(parent), tuple(colors), depth, F)


def _tree_path(T, v):
    """Non-root vertices from ``v`` up to the root's child."""
    out = []
    while v != T.root:
        out.append(v)
        v = T.parent[v]
    return out


class ForestMatroid(Matroid):
    """The matroid a colored forest determines.

    Each vertex stands for the formal sum of the vertices on its root path,
    weighted by its color; a set is independent when these formal sums are
    linearly independent.  Only the paths of the queried vertices matter, so
    coordinates are taken over their union.
    """

    kind = "forest"

    def __init__(self, forest: ColoredForest):
        super().__init__(forest.n)
        self.forest = forest
        self._paths = [forest.path(v) for v in range(forest.n)]

    def formal_sum(self, v: int) -> dict[int, int]:
        c = self.forest.colors[v]
        return {w: c[j] for j, w in enumerate(self._paths[v]) if j < len(c) and c[j]}

    def _rank(self, mask):
        elems = list(bits(mask))
        support = sorted({w for v in elems for w in self._paths[v]})
        if not support:
            return 0
        pos = {w: i for i, w in enumerate(support)}
        vecs = []
        for v in elems:
            row = [0] * len(support)
            for w, a in self.formal_sum(v).items():
                row[pos[w]] = a
            vecs.append(row)
        F = self.forest.field
        return kernels.gf_rank(vecs, F.q, F.add, F.mul, F.neg, F.inv)


def matroid_of(forest: ColoredForest) -> ForestMatroid:
    return ForestMatroid(forest)


def roundtrip_check(M: LinearMatroid, D: DepthDecomposition, forest: ColoredForest | None = None) -> Verdict:
    """Compare independence in ``M`` and in the matroid of its forest representation.

    Subsets up to size ``r(M) + 1`` are compared (all subsets when ``n <= 12``);
    circuits have at most ``r + 1`` elements, so this decides equality.
    """
    F = forest if forest is not None else forest_of(M, D)
    N = matroid_of(F)
    if N.n != M.n:
        return Verdict(False, "vertex count differs from the ground set size")
    top = M.n if M.n <= 12 else min(M.n, M.rank() + 1)
    checked = 0
    for k in range(top + 1):
        for X in itertools.combinations(range(M.n), k):
            checked += 1
            if M.is_independent(X) != N.is_independent(X):
                return Verdict(False, "independence differs", frozenset(X), checked)
    return Verdict(True, checked=checked)


def mutate_color(forest: ColoredForest, seed: int = 0) -> ColoredForest | None:
    """Change one color so that the represented matroid changes.

    Meant for forests built by ``forest_of``.  A seeded vertex with a nonzero color gets one nonzero entry set to zero.
    If the entry was its only one the vertex becomes a loop; otherwise it
    leaves the span of the path vertices it referred to.  Returns ``None``
    when every color is zero, which happens only in rank zero.
    """
    rng = random.Random(seed)
    live = [v for v in range(forest.n) if any(forest.colors[v])]
    if not live:
        return None
    v = rng.choice(live)
    c = list(forest.colors[v])
    c[rng.choice([j for j, x in enumerate(c) if x])] = 0
    colors = list(forest.colors)
    colors[v] = tuple(c)
    return ColoredForest(forest.parent, tuple(colors), forest.D, forest.field)
