"""Depth-decompositions of matroids and the approximation algorithm.

A depth-decomposition ``(T, f)`` of ``M`` is a rooted tree with exactly
``r(M)`` edges and a map ``f`` from elements to tree vertices such that
``r(X) <= ||T*(X)||`` for every set ``X``, where ``T*(X)`` is the union of the
root paths of the images of ``X``.  ``construct`` and ``decompose`` build one
of depth at most ``4**bd(M)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .errors import AlgorithmError, GuardExceeded, PreconditionError
from .matroid import (
    Matroid,
    MinorView,
    bits,
    component_masks,
    fundamental_circuit_mask,
    greedy_base_mask,
    independent_sets,
    popcount,
)

EXHAUSTIVE_LIMIT = 22


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree as a parent array; ``parent[root] == -1``."""

    parent: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(int(p) for p in self.parent))
        roots = [v for v, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise ValueError(f"a rooted tree needs exactly one root, found {len(roots)}")
        n = len(self.parent)
        for v, p in enumerate(self.parent):
            if p != -1 and not 0 <= p < n:
                raise ValueError(f"vertex {v} has invalid parent {p}")
        # every vertex must reach the root
        depth = [-1] * n
        depth[roots[0]] = 0
        for v in range(n):
            chain = []
            u = v
            while depth[u] < 0:
                chain.append(u)
                u = self.parent[u]
                if len(chain) > n:
                    raise ValueError("parent array contains a cycle")
            for w in reversed(chain):
                depth[w] = depth[self.parent[w]] + 1
        object.__setattr__(self, "_depths", tuple(depth))

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def edges(self) -> int:
        return len(self.parent) - 1

    def depth_of(self, v: int) -> int:
        return self._depths[v]

    @property
    def depth(self) -> int:
        return max(self._depths)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.size) if not self.children[v])

    @cached_property
    def path_masks(self) -> tuple[int, ...]:
        """Bitmask of the non-root vertices on the path from the root to each vertex."""
        masks = [0] * self.size
        for v in sorted(range(self.size), key=self.depth_of):
            p = self.parent[v]
            if p >= 0:
                masks[v] = masks[p] | 1 << v
        return tuple(masks)

    def descendants(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out


@dataclass(frozen=True)
class DepthDecomposition:
    """A tree plus the element map ``f``; ``base`` is set for nice decompositions."""

    tree: RootedTree
    f: tuple[int, ...]
    base: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(v) for v in self.f))
        for e, v in enumerate(self.f):
            if not 0 <= v < self.tree.size:
                raise ValueError(f"element {e} is mapped to missing vertex {v}")

    @property
    def depth(self) -> int:
        return self.tree.depth

    @property
    def n(self) -> int:
        return len(self.f)

    def elements_at(self, v: int) -> list[int]:
        return [e for e, u in enumerate(self.f) if u == v]


def subtree_size_mask(D: DepthDecomposition, mask: int) -> int:
    paths = D.tree.path_masks
    f = D.f
    u = 0
    for e in bits(mask):
        u |= paths[f[e]]
    return popcount(u)


def subtree_size(D: DepthDecomposition, X) -> int:
    """Number of edges of ``T*(X)``."""
    m = 0
    for e in X:
        if not 0 <= e < D.n:
            raise PreconditionError(f"element {e} is not mapped by the decomposition")
        m |= 1 << e
    return subtree_size_mask(D, m)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    reason: str = ""
    witness: frozenset | None = None
    checked: int = 0

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return "pass"
        w = "" if self.witness is None else f" witness={sorted(self.witness)}"
        return f"fail: {self.reason}{w}"


def validate(M: Matroid, D: DepthDecomposition, mode: str = "independent", samples: int = 1000,
             seed: int = 0) -> Verdict:
    """Check both conditions of a depth-decomposition.

    ``exhaustive`` tests every subset.  ``independent`` tests only independent
    sets, which suffices: a maximal independent ``X' <= X`` has the rank of
    ``X`` and ``T*(X') <= T*(X)``.  ``sampled`` tests ``samples`` random subsets.
    """
    if D.n != M.n:
        return Verdict(False, f"map covers {D.n} elements, matroid has {M.n}")
    rM = M.rank_mask(M.ground_mask)
    if D.tree.edges != rM:
        return Verdict(False, f"tree has {D.tree.edges} edges but r(M) = {rM}")
    paths = D.tree.path_masks
    elem_path = [paths[v] for v in D.f]
    if mode == "exhaustive":
        if M.n > EXHAUSTIVE_LIMIT:
            raise GuardExceeded(f"exhaustive validation is limited to {EXHAUSTIVE_LIMIT} elements")
        union = [0] * (1 << M.n)
        for X in range(1, 1 << M.n):
            low = X & -X
            union[X] = union[X ^ low] | elem_path[low.bit_length() - 1]
            if M.rank_mask(X) > popcount(union[X]):
                return Verdict(False, "rank exceeds subtree size", frozenset(bits(X)), X)
        return Verdict(True, checked=1 << M.n)
    if mode == "independent":
        checked = 0
        for X in independent_sets(M):
            checked += 1
            u = 0
            for e in bits(X):
                u |= elem_path[e]
            if popcount(X) > popcount(u):
                return Verdict(False, "independent set larger than its subtree", frozenset(bits(X)), checked)
        return Verdict(True, checked=checked)
    if mode == "sampled":
        rng = random.Random(seed)
        for i in range(samples):
            X = rng.getrandbits(M.n) if M.n else 0
            u = 0
            for e in bits(X):
                u |= elem_path[e]
            if M.rank_mask(X) > popcount(u):
                return Verdict(False, "rank exceeds subtree size", frozenset(bits(X)), i + 1)
        return Verdict(True, checked=samples)
    raise ValueError(f"unknown validation mode {mode!r}")


def trivial_decomposition(M: Matroid) -> DepthDecomposition:
    """Path of length ``r(M)`` with every element on its far end."""
    r = M.rank()
    return DepthDecomposition(RootedTree((-1,) + tuple(range(r))), (r,) * M.n)


def normalize_to_leaves(M: Matroid, D: DepthDecomposition) -> DepthDecomposition:
    """Move every element on an inner vertex to its lowest-numbered descendant leaf."""
    verdict = validate(M, D, mode="independent")
    if not verdict:
        raise PreconditionError(f"input is not a valid depth-decomposition: {verdict}")
    T = D.tree
    target: dict[int, int] = {}
    for v in set(D.f):
        if T.is_leaf(v):
            target[v] = v
        else:
            target[v] = min(u for u in T.descendants(v) if T.is_leaf(u))
    return DepthDecomposition(T, tuple(target[v] for v in D.f))


def is_nice(M: Matroid, D: DepthDecomposition) -> bool:
    """Base-to-non-root-vertex bijection with all other elements on leaves."""
    B = D.base if D.base is not None else infer_base(M, D)
    if B is None:
        return False
    T = D.tree
    images = [D.f[b] for b in B]
    if sorted(images) != sorted(v for v in range(T.size) if v != T.root):
        return False
    if not M.is_independent(B) or len(B) != M.rank():
        return False
    return all(T.is_leaf(D.f[e]) for e in range(M.n) if e not in B)


def infer_base(M: Matroid, D: DepthDecomposition) -> frozenset | None:
    """Recover a base witnessing niceness, or ``None``.

    Inner vertices must carry exactly one element; at each leaf the lowest
    element keeping the chosen set independent is taken.
    """
    T = D.tree
    chosen = 0
    order = sorted((v for v in range(T.size) if v != T.root), key=lambda v: (T.depth_of(v), v))
    at = {v: D.elements_at(v) for v in range(T.size)}
    for v in order:
        cands = at[v]
        if not T.is_leaf(v) and len(cands) != 1:
            return None
        for e in cands:
            trial = chosen | 1 << e
            if M.rank_mask(trial) == popcount(trial):
                chosen = trial
                break
        else:
            return None
    return frozenset(bits(chosen))


# -- the construction ------------------------------------------------------


@dataclass
class Trace:
    """Instrumentation: number of ``construct`` invocations and the steps taken."""

    calls: int = 0
    steps: list = field(default_factory=list)
    # (ground, contracted, e, part) as base-level masks, one per circuit search
    circuit_sites: list = field(default_factory=list)


class _Node:
    __slots__ = ("elems", "base_elem", "children")

    def __init__(self, elems=(), base_elem=None, children=()):
        self.elems = list(elems)
        self.base_elem = base_elem
        self.children = list(children)


def _greedy_within(V: MinorView, allowed: int) -> int:
    B, r = 0, 0
    for x in bits(allowed):
        if V.rank_mask(B | 1 << x) > r:
            B |= 1 << x
            r += 1
    return B


def _construct(base: Matroid, ground: int, contracted: int, C: int, e: int, trace: Trace) -> _Node:
    """Recursive routine on ``(base / contracted) | ground``; masks are base-level."""
    trace.calls += 1
    V = MinorView(base, bits(ground), contracted)
    r = V.rank_mask(V.ground_mask)
    elems = list(bits(ground))
    if r == 0:
        trace.steps.append(("step0", len(elems)))
        return _Node(elems)
    if r == 1:
        trace.steps.append(("step1", len(elems)))
        anchor = next(x for x in elems if V.rank_mask(V.from_base(1 << x)) == 1)
        return _Node(children=[_Node(elems, base_elem=anchor)])
    if popcount(C) <= 2:
        trace.steps.append(("step2", len(elems)))
        le = V.from_base(1 << e)
        forbidden = le
        for x in range(V.n):
            if x != le.bit_length() - 1 and V.rank_mask(1 << x) == 1 and V.rank_mask(le | 1 << x) == 1:
                forbidden |= 1 << x
        try:
            B = greedy_base_mask(V, forbidden)
        except PreconditionError as exc:
            raise AlgorithmError(f"no base avoids the parallel class of {e}: {exc}") from None
        C2 = fundamental_circuit_mask(V, B, le.bit_length() - 1)
        if popcount(C2) < 3:
            raise AlgorithmError(f"replacement circuit through {e} has length {popcount(C2)} < 3")
        return _construct(base, ground, contracted, V.to_base(C2), e, trace)

    rest = ground & ~(1 << e)
    W = MinorView(base, bits(rest), contracted | 1 << e)
    comps = [W.to_base(c) for c in component_masks(W)]
    C_rest = C & ~(1 << e)
    low = C_rest & -C_rest
    if len(comps) == 1:
        trace.steps.append(("step3", len(elems)))
        sub = _construct(base, rest, contracted | 1 << e, C_rest, low.bit_length() - 1, trace)
        sub.elems.append(e)
        sub.base_elem = e
        return _Node(children=[sub])

    trace.steps.append(("step4", len(elems)))
    home = [c for c in comps if C_rest & ~c == 0]
    if len(home) != 1:
        raise AlgorithmError("C - e is not confined to a single component of M/e")
    merged = _Node([e], base_elem=e)
    for comp in comps:
        if comp == home[0]:
            circ, start = C_rest, low.bit_length() - 1
        else:
            trace.steps.append(("step5", popcount(comp)))
            trace.circuit_sites.append((ground, contracted, e, comp))
            Ci = V.to_base(_circuit_through_mask(V, V.from_base(1 << e).bit_length() - 1, V.from_base(comp)))
            circ = Ci & ~(1 << e)
            start = (circ & -circ).bit_length() - 1
        sub = _construct(base, comp, contracted | 1 << e, circ, start, trace)
        merged.elems.extend(sub.elems)
        merged.children.extend(sub.children)
    return _Node(children=[merged])


def _circuit_through_mask(M: Matroid, e: int, part: int) -> int:
    part &= ~(1 << e)
    B = _greedy_within(M, part)
    if M.rank_mask(B | 1 << e) > M.rank_mask(B):
        raise PreconditionError(f"no circuit through {e} inside the given part")
    return fundamental_circuit_mask(M, B, e)


def find_circuit_through(M: Matroid, e: int, part) -> frozenset:
    """A circuit containing ``e`` and contained in ``part | {e}``."""
    pm = M.mask(part)
    M.mask((e,))
    return frozenset(bits(_circuit_through_mask(M, e, pm)))


def _flatten(root: _Node, to_local) -> DepthDecomposition:
    """Number vertices in preorder, children ordered by smallest element below them.

    Non-base elements left on inner vertices (loops, elements parallel to a
    contracted element) are moved to the first leaf below; this keeps the
    decomposition valid and makes it nice.
    """
    def min_elem(node):
        best = min((to_local[x] for x in node.elems), default=None)
        for ch in node.children:
            m = min_elem(ch)
            if m is not None and (best is None or m < best):
                best = m
        return best

    def first_leaf(node):
        while node.children:
            node.children.sort(key=lambda c: (min_elem(c) is None, min_elem(c) or 0))
            node = node.children[0]
        return node

    stack = [root]
    while stack:
        node = stack.pop()
        if node.children:
            stray = [x for x in node.elems if x != node.base_elem]
            if stray:
                node.elems = [x for x in node.elems if x == node.base_elem]
                first_leaf(node).elems.extend(stray)
        stack.extend(node.children)

    parent: list[int] = []
    f: dict[int, int] = {}
    base = set()
    order = [(root, -1)]
    while order:
        node, par = order.pop()
        v = len(parent)
        parent.append(par)
        for x in node.elems:
            f[to_local[x]] = v
        if node.base_elem is not None:
            base.add(to_local[node.base_elem])
        kids = sorted(node.children, key=lambda c: (min_elem(c) is None, min_elem(c) or 0))
        order.extend((c, v) for c in reversed(kids))
    n = len(to_local)
    return DepthDecomposition(RootedTree(tuple(parent)), tuple(f[i] for i in range(n)), frozenset(base))


def _is_circuit(M: Matroid, C: int) -> bool:
    k = popcount(C)
    if k == 0 or M.rank_mask(C) != k - 1:
        return False
    return all(M.rank_mask(C & ~(1 << x)) == k - 1 for x in bits(C))


def construct(M: Matroid, C, e: int, trace: Trace | None = None) -> DepthDecomposition:
    """Run the recursive construction on a connected matroid from circuit ``C`` and ``e in C``."""
    trace = trace if trace is not None else Trace()
    Cm = M.mask(C)
    M.mask((e,))
    if len(component_masks(M)) > 1:
        raise PreconditionError("construct needs a connected matroid; use decompose")
    if not _is_circuit(M, Cm):
        raise PreconditionError(f"{sorted(bits(Cm))} is not a circuit")
    if not Cm >> e & 1:
        raise PreconditionError(f"element {e} is not in the circuit")
    if M.rank_mask(1 << e) == 0:
        raise PreconditionError(f"element {e} is a loop")
    V = M if isinstance(M, MinorView) else MinorView(M, range(M.n))
    root = _construct(V.base, V.to_base(V.ground_mask), V.contracted, V.to_base(Cm), V.elements[e], trace)
    return _flatten(root, {b: i for i, b in enumerate(V.elements)})


def decompose(M: Matroid, trace: Trace | None = None) -> DepthDecomposition:
    """Depth-decomposition of an arbitrary matroid, component by component."""
    trace = trace if trace is not None else Trace()
    V = M if isinstance(M, MinorView) else MinorView(M, range(M.n))
    base = V.base
    glued = _Node()
    for comp in component_masks(V):
        r = V.rank_mask(comp)
        bcomp = V.to_base(comp)
        if r == 0:
            glued.elems.extend(bits(bcomp))
            continue
        if popcount(comp) == 1:
            x = bcomp.bit_length() - 1
            glued.children.append(_Node([x], base_elem=x))
            continue
        sub = MinorView(base, bits(bcomp), V.contracted)
        B = greedy_base_mask(sub)
        e0 = next(x for x in range(sub.n) if not B >> x & 1)
        C = sub.to_base(fundamental_circuit_mask(sub, B, e0))
        start = (C & -C).bit_length() - 1
        node = _construct(base, bcomp, V.contracted, C, start, trace)
        glued.elems.extend(node.elems)
        glued.children.extend(node.children)
    return _flatten(glued, {b: i for i, b in enumerate(V.elements)})
