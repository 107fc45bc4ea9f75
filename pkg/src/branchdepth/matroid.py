"""Finite matroids behind a uniform rank oracle.

Elements are the integers ``0..n-1``.  Public functions take and return
ordinary sets of element indices; internally subsets travel as integer
bitmasks (``rank_mask``), which is what the brute-force routines iterate.
All "choose an element" decisions resolve to the lowest index.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import FieldSpec, field_build
from .errors import ElementError, GuardExceeded, PreconditionError

CIRCUIT_ENUMERATION_LIMIT = 20
_CACHE_LIMIT = 1 << 20


def bits(mask: int):
    """Indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


class Matroid:
    """Base class: subclasses implement ``_rank(mask)``."""

    kind = "abstract"

    def __init__(self, n: int, labels=None):
        if n < 0:
            raise ValueError("ground set size must be non-negative")
        self.n = n
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError(f"expected {n} labels, got {len(labels)}")
        self.labels = labels
        self._cache: dict[int, int] = {}

    # -- oracle -----------------------------------------------------------
    def _rank(self, mask: int) -> int:
        raise NotImplementedError

    def rank_mask(self, mask: int) -> int:
        r = self._cache.get(mask)
        if r is None:
            r = self._rank(mask)
            if len(self._cache) >= _CACHE_LIMIT:
                self._cache.clear()
            self._cache[mask] = r
        return r

    @property
    def ground_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def ground(self) -> range:
        return range(self.n)

    def mask(self, X) -> int:
        if X is None:
            return self.ground_mask
        m = 0
        for e in X:
            if not (isinstance(e, (int, np.integer)) and 0 <= e < self.n):
                raise ElementError(f"element {e!r} is not in the ground set of size {self.n}")
            m |= 1 << int(e)
        return m

    def rank(self, X=None) -> int:
        return self.rank_mask(self.mask(X))

    def is_independent(self, X) -> bool:
        m = self.mask(X)
        return self.rank_mask(m) == popcount(m)

    def closure(self, X) -> frozenset:
        m = self.mask(X)
        r = self.rank_mask(m)
        return frozenset(x for x in range(self.n) if m >> x & 1 or self.rank_mask(m | 1 << x) == r)

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels is not None else str(e)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"<{type(self).__name__} n={self.n} rank={self.rank()}>"


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, r: int, n: int, labels=None):
        if not 0 <= r <= n:
            raise ValueError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
        super().__init__(n, labels)
        self.r = r

    def _rank(self, mask):
        return min(self.r, popcount(mask))


def free_matroid(n: int) -> UniformMatroid:
    return UniformMatroid(n, n)


def circuit_matroid(d: int) -> UniformMatroid:
    """C_d: a single circuit of length ``d``."""
    if d < 1:
        raise ValueError("circuit length must be positive")
    return UniformMatroid(d - 1, d)


class LinearMatroid(Matroid):
    """Column matroid of a matrix over GF(q); element ``i`` is column ``i``."""

    kind = "linear"

    def __init__(self, field: FieldSpec | int, columns, labels=None):
        if isinstance(field, int):
            field = field_build(field)
        cols = [bytes(c) for c in columns]
        super().__init__(len(cols), labels)
        if cols and len({len(c) for c in cols}) != 1:
            raise ValueError("all columns must have the same length")
        for c in cols:
            if any(x >= field.q for x in c):
                raise ValueError(f"column entry outside GF({field.q})")
        self.field = field
        self.columns = tuple(cols)
        self.nrows = len(cols[0]) if cols else 0

    @classmethod
    def from_rows(cls, field, rows, labels=None) -> "LinearMatroid":
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("need at least one row")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix: rows have different lengths")
        return cls(field, list(zip(*rows)), labels)

    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(c[i] for c in self.columns) for i in range(self.nrows)]

    def _rank(self, mask):
        if not mask or self.nrows == 0:
            return 0
        F = self.field
        return kernels.gf_rank([self.columns[i] for i in bits(mask)], F.q, F.add, F.mul, F.neg, F.inv)


class GraphicMatroid(Matroid):
    """Cycle matroid of a graph; element ``i`` is ``graph.edges[i]``.

    ``from_edge_list`` keeps an arbitrary edge order and also accepts
    parallel edges and self-loops.
    """

    kind = "graphic"

    def __init__(self, graph, labels=None):
        super().__init__(len(graph.edges), labels)
        self.graph = graph
        self.vertices = graph.n
        self.edge_list = tuple(graph.edges)

    @classmethod
    def from_edge_list(cls, n: int, edges, labels=None) -> "GraphicMatroid":
        edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
        self = cls.__new__(cls)
        Matroid.__init__(self, len(edges), labels)
        self.graph = None
        self.vertices = n
        self.edge_list = edges
        return self

    def _rank(self, mask):
        parent = list(range(self.vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        r = 0
        edges = self.edge_list
        for i in bits(mask):
            u, v = edges[i]
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                r += 1
        return r


class CircuitMatroid(Matroid):
    """Matroid given by its list of circuits."""

    kind = "circuits"

    def __init__(self, n: int, circuits, labels=None, check: bool = True):
        super().__init__(n, labels)
        fam = sorted({frozenset(c) for c in circuits}, key=lambda c: (len(c), sorted(c)))
        for c in fam:
            for e in c:
                if not 0 <= e < n:
                    raise ElementError(f"circuit element {e} outside ground set of size {n}")
        if check:
            verdict = circuit_axioms_check(fam, n)
            if not verdict.passed:
                raise ValueError(f"not a circuit family: {verdict}")
        self.circuits = tuple(fam)
        self._masks = [mask_of(c) for c in fam]
        self._by_elem = [[m for m in self._masks if m >> e & 1] for e in range(n)]

    def _rank(self, mask):
        indep = 0
        for e in bits(mask):
            trial = indep | 1 << e
            if not any(c & ~trial == 0 for c in self._by_elem[e]):
                indep = trial
        return popcount(indep)


class MinorView(Matroid):
    """``(base / contracted) | elements`` with base elements relabelled ``0..k-1``.

    Views never nest: a minor of a view is a view of the same base.
    """

    kind = "minor"

    def __init__(self, base: Matroid, elements, contracted: int = 0):
        if isinstance(base, MinorView):
            elements = [base.elements[i] for i in elements]
            contracted = base.contracted | mask_of(base.elements[i] for i in bits(contracted))
            base = base.base
        elements = tuple(elements)
        if any(contracted >> e & 1 for e in elements):
            raise ValueError("a minor element cannot also be contracted")
        labels = None if base.labels is None else tuple(base.labels[e] for e in elements)
        super().__init__(len(elements), labels)
        self.base = base
        self.elements = elements
        self.contracted = contracted
        self._offset = base.rank_mask(contracted)

    def from_base(self, mask: int) -> int:
        """Local bitmask of the base elements in ``mask`` that belong to the view."""
        index = self.__dict__.get("_index")
        if index is None:
            index = self._index = {b: i for i, b in enumerate(self.elements)}
        out = 0
        for b in bits(mask):
            i = index.get(b)
            if i is None:
                raise ElementError(f"base element {b} is not part of this minor")
            out |= 1 << i
        return out

    def to_base(self, mask: int) -> int:
        out = 0
        els = self.elements
        for i in bits(mask):
            out |= 1 << els[i]
        return out

    def _rank(self, mask):
        return self.base.rank_mask(self.to_base(mask) | self.contracted) - self._offset


def _view(M: Matroid) -> MinorView:
    return M if isinstance(M, MinorView) else MinorView(M, range(M.n))


def contract(M: Matroid, F) -> MinorView:
    """``M / F`` on the remaining elements, in ascending index order."""
    fm = M.mask(F)
    keep = [e for e in range(M.n) if not fm >> e & 1]
    v = _view(M)
    contracted = v.contracted | v.to_base(fm)
    return MinorView(v.base, [v.elements[e] for e in keep], contracted)


def delete(M: Matroid, F) -> MinorView:
    fm = M.mask(F)
    return MinorView(M, [e for e in range(M.n) if not fm >> e & 1])


def restrict(M: Matroid, F) -> MinorView:
    fm = M.mask(F)
    return delete(M, [e for e in range(M.n) if not fm >> e & 1])


def is_independent(M: Matroid, X) -> bool:
    return M.is_independent(X)


def closure(M: Matroid, X) -> frozenset:
    return M.closure(X)


def rank(M: Matroid, X=None) -> int:
    return M.rank(X)


def loops_and_bridges(M: Matroid) -> tuple[frozenset, frozenset]:
    full = M.rank_mask(M.ground_mask)
    loops = frozenset(e for e in range(M.n) if M.rank_mask(1 << e) == 0)
    bridges = frozenset(e for e in range(M.n) if M.rank_mask(M.ground_mask & ~(1 << e)) == full - 1)
    return loops, bridges


def is_parallel(M: Matroid, e: int, f: int) -> bool:
    if e == f:
        raise PreconditionError("is_parallel needs two distinct elements")
    M.mask((e, f))
    if M.rank_mask(1 << e) == 0 or M.rank_mask(1 << f) == 0:
        return False
    return M.rank_mask(1 << e | 1 << f) == 1


def greedy_base_mask(M: Matroid, forbidden: int = 0) -> int:
    B = 0
    r = 0
    for e in range(M.n):
        if forbidden >> e & 1:
            continue
        if M.rank_mask(B | 1 << e) > r:
            B |= 1 << e
            r += 1
    if r != M.rank_mask(M.ground_mask):
        raise PreconditionError("the allowed elements do not span the matroid; no base avoids the forbidden set")
    return B


def greedy_base(M: Matroid, forbidden=()) -> frozenset:
    """Base found by scanning ``ground - forbidden`` in index order."""
    return frozenset(bits(greedy_base_mask(M, M.mask(forbidden))))


def fundamental_circuit_mask(M: Matroid, B: int, e: int) -> int:
    if B >> e & 1:
        raise PreconditionError(f"element {e} is already in the base")
    rB = M.rank_mask(B)
    if rB != popcount(B):
        raise PreconditionError("B is not independent")
    if M.rank_mask(B | 1 << e) > rB:
        raise PreconditionError(f"B + {e} is independent; no fundamental circuit")
    C = 1 << e
    with_e = B | 1 << e
    for f in bits(B):
        if M.rank_mask(with_e & ~(1 << f)) == rB:
            C |= 1 << f
    return C


def fundamental_circuit(M: Matroid, B, e: int) -> frozenset:
    """The unique circuit inside ``B + e``."""
    M.mask((e,))
    return frozenset(bits(fundamental_circuit_mask(M, M.mask(B), e)))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                ra, rb = rb, ra
            self.parent[ra] = rb


def component_masks(M: Matroid) -> list[int]:
    """Components as bitmasks, ordered by lowest element.

    Two elements share a component iff they are joined through fundamental
    circuits with respect to one greedy base.
    """
    if M.n == 0:
        return []
    B = greedy_base_mask(M)
    uf = _UnionFind(M.n)
    for e in range(M.n):
        if not B >> e & 1:
            for f in bits(fundamental_circuit_mask(M, B, e)):
                uf.union(e, f)
    groups: dict[int, int] = {}
    for e in range(M.n):
        root = uf.find(e)
        groups[root] = groups.get(root, 0) | 1 << e
    return sorted(groups.values(), key=lambda m: m & -m)


def components(M: Matroid) -> list[frozenset]:
    return [frozenset(bits(m)) for m in component_masks(M)]


def is_connected(M: Matroid) -> bool:
    return len(component_masks(M)) <= 1


def independent_sets(M: Matroid):
    """All independent sets as bitmasks, by depth-first extension in index order."""
    stack = [(0, 0, 0)]  # (mask, size, next element)
    while stack:
        mask, size, start = stack.pop()
        yield mask
        for e in range(M.n - 1, start - 1, -1):
            m = mask | 1 << e
            if M.rank_mask(m) == size + 1:
                stack.append((m, size + 1, e + 1))


def enumerate_circuit_masks(M: Matroid, max_size: int | None = None) -> list[int]:
    if M.n > CIRCUIT_ENUMERATION_LIMIT:
        raise GuardExceeded(f"circuit enumeration is limited to {CIRCUIT_ENUMERATION_LIMIT} elements, got {M.n}")
    top = M.rank_mask(M.ground_mask) + 1
    if max_size is not None:
        top = min(top, max_size)
    found: list[int] = []
    for k in range(1, top + 1):
        for combo in itertools.combinations(range(M.n), k):
            m = mask_of(combo)
            if any(c & ~m == 0 for c in found):
                continue
            if M.rank_mask(m) < k:
                found.append(m)
    return found


def enumerate_circuits(M: Matroid, max_size: int | None = None) -> list[frozenset]:
    """All circuits with at most ``max_size`` elements (brute force, ``n <= 20``)."""
    return [frozenset(bits(m)) for m in enumerate_circuit_masks(M, max_size)]


def materialize(M: Matroid) -> CircuitMatroid:
    """Re-express ``M`` by its full circuit list."""
    return CircuitMatroid(M.n, enumerate_circuits(M), labels=M.labels, check=False)


@dataclass(frozen=True)
class AxiomVerdict:
    passed: bool
    axiom: str | None = None
    witness: tuple = ()

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return "pass"
        return f"fail ({self.axiom}): {self.witness}"


def circuit_axioms_check(circuits, n: int) -> AxiomVerdict:
    """Check (C1), (C2) and strong circuit elimination (C3) for a set family on ``0..n-1``.

    (C3): for circuits ``C1, C2``, ``e`` in both and ``f`` in ``C1 - C2`` there
    is a circuit ``C3`` with ``f in C3 <= (C1 | C2) - {e}``.  The witness on
    failure is ``(C1, C2, e, f)``.
    """
    fam = []
    for c in circuits:
        c = frozenset(c)
        if any(not 0 <= x < n for x in c):
            raise ElementError(f"circuit {sorted(c)} leaves the ground set of size {n}")
        fam.append(c)
    fam = sorted(set(fam), key=lambda c: (len(c), sorted(c)))
    if frozenset() in fam:
        return AxiomVerdict(False, "C1", (frozenset(),))
    masks = [mask_of(c) for c in fam]
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if a & ~b == 0:
                return AxiomVerdict(False, "C2", (fam[i], frozenset(bits(b))))
    if n <= 22:
        w = _elimination_violation_dense(masks, n)
    else:
        w = _elimination_violation_sparse(masks, n)
    if w is None:
        return AxiomVerdict(True)
    c1, c2, e, f = w
    return AxiomVerdict(False, "C3", (frozenset(bits(c1)), frozenset(bits(c2)), e, f))


def _elimination_violation_sparse(masks, n):
    for c1 in masks:
        for c2 in masks:
            common = c1 & c2
            if c1 == c2 or not common:
                continue
            for e in bits(common):
                U = (c1 | c2) & ~(1 << e)
                for f in bits(c1 & ~c2):
                    if not any(c >> f & 1 and c & ~U == 0 for c in masks):
                        return c1, c2, e, f
    return None


def _elimination_violation_dense(masks, n):
    """Vectorised (C3) check using the union of circuits below every subset."""
    if not masks:
        return None
    dtype = np.uint32
    cover = np.zeros(1 << n, dtype=dtype)
    arr = np.array(masks, dtype=dtype)
    cover[arr] = arr
    for b in range(n):
        view = cover.reshape(-1, 2, 1 << b)
        view[:, 1, :] |= view[:, 0, :]
    for e in range(n):
        ebit = dtype(1 << e)
        idx = np.nonzero(arr & ebit)[0]
        if len(idx) < 2:
            continue
        A = arr[idx]
        for start in range(0, len(A), 512):
            blk = A[start:start + 512]
            U = (blk[:, None] | A[None, :]) & ~ebit
            bad = blk[:, None] & ~A[None, :] & ~cover[U]
            hits = np.argwhere(bad != 0)
            if len(hits):
                i, j = hits[0]
                fbits = int(bad[i, j])
                return int(blk[i]), int(A[j]), e, (fbits & -fbits).bit_length() - 1
    return None
    return best
