"""Graph-to-matroid encodings and the interpretation that recovers the graph.

Element order in both encodings: the ``k`` copies of vertex 0, then of
vertex 1, and so on, followed by one element per edge in the graph's sorted
edge order.  Copies are labelled ``"<vertex>.<i>"`` and edge elements
``"<u>-<v>"``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .algebra import collinear, rational_rank
from .errors import InterpretationError, PreconditionError
from .graph import Graph
from .matroid import LinearMatroid, Matroid, bits

RETRY_BUDGET = 1000


def _labels(G: Graph, k: int) -> list[str]:
    out = [f"{G.vertex_label(v)}.{i}" for v in range(G.n) for i in range(k)]
    out += [f"{G.vertex_label(u)}-{G.vertex_label(v)}" for u, v in G.edges]
    return out


def _check_k(k):
    if not isinstance(k, int) or k < 2:
        raise PreconditionError(f"the encodings need k >= 2 parallel copies, got {k!r}")


class Rank3Matroid(Matroid):
    """Rank-3 matroid of a graph: vertex points in general position, one point per edge.

    The edge point of ``uv`` lies on the line through the points of ``u`` and
    ``v`` and on no other line spanned by two points.  So a set's rank is
    decided by its distinct points: up to two points, their number; four or
    more, three; exactly three, two if they form ``{u, v, uv}`` and three
    otherwise.
    """

    kind = "rank3"

    def __init__(self, graph: Graph, k: int, labels=None):
        self.graph = graph
        self.k = k
        nv = graph.n * k
        super().__init__(nv + len(graph.edges), labels if labels is not None else _labels(graph, k))
        self.point = [e // k for e in range(nv)] + [graph.n + i for i in range(len(graph.edges))]
        self.edge_points = {}
        for i, (u, v) in enumerate(graph.edges):
            self.edge_points[graph.n + i] = (u, v)
        self._lines = {frozenset((u, v, graph.n + i)) for i, (u, v) in enumerate(graph.edges)}

    @classmethod
    def from_graph(cls, graph: Graph, k: int = 1) -> "Rank3Matroid":
        return cls(graph, k)

    def _rank(self, mask):
        pts = {self.point[e] for e in bits(mask)}
        if len(pts) <= 2:
            return len(pts)
        if len(pts) >= 4:
            return 3
        return 2 if frozenset(pts) in self._lines else 3

    def is_edge_element(self, e: int) -> bool:
        return e >= self.graph.n * self.k

    def dependent_triples(self):
        """Point triples ``(u, v, uv)`` that are collinear."""
        return sorted(tuple(sorted(t)) for t in self._lines)


def rank3_encode(G: Graph, k: int) -> Rank3Matroid:
    _check_k(k)
    return Rank3Matroid(G, k)


@dataclass(frozen=True)
class RationalRepresentation:
    """Points of Q^2 for every element, plus integer homogeneous columns."""

    points: tuple[tuple[Fraction, Fraction], ...]
    seed: int
    redraws: int

    def columns(self) -> list[tuple[int, int, int]]:
        cols = []
        for x, y in self.points:
            d = lcm(x.denominator, y.denominator)
            cols.append((int(x * d), int(y * d), d))
        return cols

    def matroid(self) -> "RationalMatroid":
        return RationalMatroid(self.columns())


class RationalMatroid(Matroid):
    """Column matroid over Q with exact elimination."""

    kind = "rational"

    def __init__(self, columns, labels=None):
        cols = [tuple(Fraction(x) for x in c) for c in columns]
        super().__init__(len(cols), labels)
        self.columns = tuple(cols)

    def _rank(self, mask):
        if not mask:
            return 0
        return rational_rank([self.columns[e] for e in bits(mask)])


def rank3_rational_rep(G: Graph, k: int, seed: int = 0, budget: int = RETRY_BUDGET) -> RationalRepresentation:
    """Place the points of the rank-3 encoding exactly.

    Vertex ``v`` sits at ``(v, v^2)`` on the parabola, so no three vertex
    points are collinear.  Each edge point is drawn (seeded) at a rational
    position on its segment and redrawn while it lies on a line through two
    other placed points, or coincides with one.
    """
    _check_k(k)
    rng = random.Random(seed)
    placed = [(Fraction(v), Fraction(v * v)) for v in range(G.n)]
    redraws = 0
    for u, v in G.edges:
        pu, pv = placed[u], placed[v]
        for _ in range(budget):
            den = rng.randint(2, 1000)
            lam = Fraction(rng.randint(1, den - 1), den)
            p = (pu[0] + lam * (pv[0] - pu[0]), pu[1] + lam * (pv[1] - pu[1]))
            if _in_general_position(p, placed, u, v):
                placed.append(p)
                break
            redraws += 1
        else:
            raise PreconditionError(
                f"no admissible point for edge {u}-{v} after {budget} draws; try another seed")
    points = [placed[e // k] for e in range(G.n * k)] + placed[G.n:]
    return RationalRepresentation(tuple(points), seed, redraws)


def _in_general_position(p, placed, u, v) -> bool:
    if p in placed:
        return False
    m = len(placed)
    for a in range(m):
        for b in range(a + 1, m):
            if (a, b) == (u, v):
                continue
            if collinear(placed[a], placed[b], p):
                return False
    return True


def binary_encode(G: Graph, k: int) -> LinearMatroid:
    """Binary matroid with ``k`` copies of ``e_v`` per vertex and ``e_u + e_v`` per edge."""
    _check_k(k)
    if G.n == 0:
        raise PreconditionError("the binary encoding needs at least one vertex")
    cols = []
    for v in range(G.n):
        unit = bytes(1 if i == v else 0 for i in range(G.n))
        cols.extend([unit] * k)
    for u, v in G.edges:
        cols.append(bytes(1 if i in (u, v) else 0 for i in range(G.n)))
    return LinearMatroid(2, cols, labels=_labels(G, k))


# -- interpretation --------------------------------------------------------


def _independent2(M, x, y):
    return x != y and M.rank_mask(1 << x | 1 << y) == 2


def interpretation_classes(M: Matroid) -> list[list[int]]:
    """Equivalence classes of the elements having a parallel partner.

    An element qualifies when some other element forms a dependent pair with
    it; two qualifying elements are equivalent when their pair is dependent.
    Classes are ordered by their lowest element.
    """
    if any(M.rank_mask(1 << e) == 0 for e in range(M.n)):
        # a loop is dependent with everything, so pair-dependence is not transitive
        raise InterpretationError("matroid has loops; pair dependence is not an equivalence")
    classes: list[list[int]] = []
    for e in range(M.n):
        for cl in classes:
            if not _independent2(M, cl[0], e):
                cl.append(e)
                break
        else:
            classes.append([e])
    return [cl for cl in classes if len(cl) >= 2]


def _vertex_label(M: Matroid, cls: list[int], index: int) -> str:
    if M.labels is None:
        return str(index)
    lab = M.labels[cls[0]]
    head, dot, tail = lab.rpartition(".")
    return head if dot and tail.isdigit() else lab


def _edge_between(M: Matroid, x: int, y: int, exclude: int) -> bool:
    r = M.rank_mask(1 << x | 1 << y)
    for z in range(M.n):
        if exclude >> z & 1:
            continue
        if M.rank_mask(1 << x | 1 << y | 1 << z) == r:
            return True
    return False


def graph_interpret(M: Matroid, strict: bool = False) -> Graph:
    """Read a graph back from a matroid.

    Vertices are the classes of :func:`interpretation_classes`; two classes
    are adjacent when some third element is independent of each of their
    representatives yet dependent on the pair.  On loopless matroids the
    answer cannot depend on the representatives (a parallel substitute spans
    the same line), so ``strict=True`` rechecks every pair of representatives
    only as a diagnostic; a disagreement raises ``InterpretationError``.
    """
    classes = interpretation_classes(M)
    cmask = [sum(1 << e for e in cl) for cl in classes]
    # z must avoid both classes: I_2(x, z) fails exactly on x's class
    edges = []
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            excl = cmask[i] | cmask[j]
            adj = _edge_between(M, classes[i][0], classes[j][0], excl)
            if strict:
                for x in classes[i]:
                    for y in classes[j]:
                        if _edge_between(M, x, y, excl) != adj:
                            raise InterpretationError(
                                f"edge relation differs between representatives {x}, {y}")
            if adj:
                edges.append((i, j))
    labels = tuple(_vertex_label(M, cl, i) for i, cl in enumerate(classes))
    return Graph(len(classes), tuple(edges), labels)


def same_labelled_graph(G: Graph, H: Graph) -> bool:
    """Equality of vertex labels (in order) and of edge sets expressed in labels."""
    if [G.vertex_label(v) for v in range(G.n)] != [H.vertex_label(v) for v in range(H.n)]:
        return False
    def lab_edges(X):
        return {frozenset((X.vertex_label(u), X.vertex_label(v))) for u, v in X.edges}
    return lab_edges(G) == lab_edges(H)


def edge_element_fraction(G: Graph, k: int) -> Fraction:
    return Fraction(len(G.edges), len(G.edges) + k * G.n) if (G.edges or G.n) else Fraction(0)
