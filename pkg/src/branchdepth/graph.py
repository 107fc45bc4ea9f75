"""Simple undirected graphs on vertices ``0..n-1``."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Graph:
    """A simple graph.  Edges are stored as sorted ``(u, v)`` pairs with ``u < v``.

    ``labels`` optionally names the vertices; it defaults to their indices.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must name every vertex")

    @classmethod
    def from_edges(cls, n, edges, labels=None) -> "Graph":
        return cls(n, tuple((int(u), int(v)) for u, v in edges), labels)

    def vertex_label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def adjacency(self) -> list[int]:
        """Neighbourhood bitmask per vertex."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return _component_of(self.adjacency(), 1, (1 << self.n) - 1) == (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def __str__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


def _component_of(adj, start_bit, allowed):
    comp = start_bit
    frontier = start_bit
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        v = low.bit_length() - 1
        new = adj[v] & allowed & ~comp
        comp |= new
        frontier |= new
    return comp


def induced_components(adj, mask):
    """Vertex bitmasks of the connected components of the subgraph induced by ``mask``."""
    out = []
    rest = mask
    while rest:
        comp = _component_of(adj, rest & -rest, mask)
        out.append(comp)
        rest &= ~comp
    return out


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def random_graph(n: int, p: float, rng) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))
