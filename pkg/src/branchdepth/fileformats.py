"""Plain-text file formats and DOT export.

Matroid files start with ``matroid <kind> key=value ...``; an optional
``labels`` line names the elements; the body depends on the kind::

    matroid linear q=3        one matrix row per line, entries 0..q-1
    matroid graphic n=4       one "u v" edge per line, in element order
    matroid circuits n=5      one circuit per line, as element indices
    matroid uniform r=2 n=5   no body
    matroid rank3 k=2 n=3     the graph's "u v" edges; optional "vertices" line

Graph files are ``n m`` followed by ``m`` lines ``u v``, with an optional
``labels`` line after the header.  Lines starting with ``#`` are comments
everywhere.
"""
from __future__ import annotations

from .algebra import field_build
from .decomposition import DepthDecomposition, RootedTree
from .encodings import Rank3Matroid
from .errors import ParseError
from .forest import ColoredForest
from .graph import Graph
from .matroid import (
    CircuitMatroid,
    GraphicMatroid,
    LinearMatroid,
    Matroid,
    UniformMatroid,
    enumerate_circuits,
)


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield i, line


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _params(tokens, lineno, required, allowed=()):
    out = {}
    for t in tokens:
        key, eq, val = t.partition("=")
        if not eq:
            raise ParseError(f"expected key=value, got {t!r}", lineno)
        if key not in required and key not in allowed:
            raise ParseError(f"unknown parameter {key!r}", lineno)
        try:
            out[key] = int(val)
        except ValueError:
            raise ParseError(f"parameter {key} must be an integer, got {val!r}", lineno) from None
    for key in required:
        if key not in out:
            raise ParseError(f"missing parameter {key}=", lineno)
    return out


def _edges(body, n):
    edges = []
    for lineno, line in body:
        e = _ints(line.split(), lineno)
        if len(e) != 2:
            raise ParseError("an edge line needs exactly two vertices", lineno)
        if not (0 <= e[0] < n and 0 <= e[1] < n):
            raise ParseError(f"edge {e[0]} {e[1]} references a vertex outside 0..{n - 1}", lineno)
        edges.append((e[0], e[1]))
    return edges


def parse_matroid(text: str) -> Matroid:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty matroid file", 1)
    lineno, header = lines[0]
    parts = header.split()
    if parts[0] != "matroid" or len(parts) < 2:
        raise ParseError("expected header 'matroid <kind> ...'", lineno)
    kind = parts[1]
    body = lines[1:]
    labels = None
    if body and body[0][1].split()[0] == "labels":
        labels = body[0][1].split()[1:]
        body = body[1:]
    try:
        if kind == "linear":
            p = _params(parts[2:], lineno, ("q",))
            try:
                F = field_build(p["q"])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            rows = []
            for ln, line in body:
                row = _ints(line.split(), ln)
                if any(not 0 <= x < F.q for x in row):
                    raise ParseError(f"row entry outside GF({F.q})", ln)
                if rows and len(row) != len(rows[0]):
                    raise ParseError("rows have different lengths", ln)
                rows.append(row)
            if not rows:
                raise ParseError("a linear matroid needs at least one row", lineno)
            return LinearMatroid.from_rows(F, rows, labels)
        if kind == "graphic":
            p = _params(parts[2:], lineno, ("n",))
            return GraphicMatroid.from_edge_list(p["n"], _edges(body, p["n"]), labels)
        if kind == "circuits":
            p = _params(parts[2:], lineno, ("n",))
            circuits = []
            for ln, line in body:
                c = _ints(line.split(), ln)
                if any(not 0 <= x < p["n"] for x in c):
                    raise ParseError(f"circuit element outside 0..{p['n'] - 1}", ln)
                circuits.append(c)
            return CircuitMatroid(p["n"], circuits, labels)
        if kind == "uniform":
            p = _params(parts[2:], lineno, ("r", "n"))
            if body:
                raise ParseError("a uniform matroid has no body", body[0][0])
            return UniformMatroid(p["r"], p["n"], labels)
        if kind == "rank3":
            p = _params(parts[2:], lineno, ("k", "n"))
            vlabels = None
            if body and body[0][1].split()[0] == "vertices":
                vlabels = tuple(body[0][1].split()[1:])
                body = body[1:]
            G = Graph.from_edges(p["n"], _edges(body, p["n"]), vlabels)
            M = Rank3Matroid(G, p["k"], labels)
            return M
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None
    raise ParseError(f"unknown matroid kind {kind!r}", lineno)


def format_matroid(M: Matroid) -> str:
    """Serialize ``M``; kinds without a native form are written as circuit lists."""
    out = []
    if isinstance(M, LinearMatroid):
        out.append(f"matroid linear q={M.field.q}")
        body = [" ".join(map(str, r)) for r in M.rows()]
    elif isinstance(M, GraphicMatroid):
        out.append(f"matroid graphic n={M.vertices}")
        body = [f"{u} {v}" for u, v in M.edge_list]
    elif isinstance(M, UniformMatroid):
        out.append(f"matroid uniform r={M.r} n={M.n}")
        body = []
    elif isinstance(M, Rank3Matroid):
        G = M.graph
        out.append(f"matroid rank3 k={M.k} n={G.n}")
        body = []
        if G.labels is not None:
            body.append("vertices " + " ".join(G.labels))
        body += [f"{u} {v}" for u, v in G.edges]
        if M.labels == Rank3Matroid(G, M.k).labels:
            return "\n".join(out + body) + "\n"
    else:
        circuits = M.circuits if isinstance(M, CircuitMatroid) else enumerate_circuits(M)
        out.append(f"matroid circuits n={M.n}")
        body = [" ".join(map(str, sorted(c))) for c in circuits]
    if M.labels is not None:
        out.append("labels " + " ".join(M.labels))
    out += body
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> Graph:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty graph file", 1)
    lineno, header = lines[0]
    head = _ints(header.split(), lineno)
    if len(head) != 2:
        raise ParseError("graph header must be 'n m'", lineno)
    n, m = head
    body = lines[1:]
    labels = None
    if body and body[0][1].split()[0] == "labels":
        labels = tuple(body[0][1].split()[1:])
        if len(labels) != n:
            raise ParseError(f"expected {n} labels", body[0][0])
        body = body[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} edges, found {len(body)}", lineno)
    try:
        return Graph.from_edges(n, _edges(body, n), labels)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_graph(G: Graph) -> str:
    out = [f"{G.n} {len(G.edges)}"]
    if G.labels is not None and list(G.labels) != [str(v) for v in range(G.n)]:
        out.append("labels " + " ".join(G.labels))
    out += [f"{u} {v}" for u, v in G.edges]
    return "\n".join(out) + "\n"


def format_decomposition(D: DepthDecomposition) -> str:
    out = [f"decomposition vertices={D.tree.size} elements={D.n} depth={D.depth}",
           "parent " + " ".join(map(str, D.tree.parent)),
           "map " + " ".join(map(str, D.f))]
    if D.base is not None:
        out.append("base " + " ".join(map(str, sorted(D.base))))
    return "\n".join(out) + "\n"


def parse_decomposition(text: str) -> DepthDecomposition:
    fields = {}
    for lineno, line in _lines(text):
        key, *rest = line.split()
        if key == "decomposition":
            continue
        if key not in ("parent", "map", "base"):
            raise ParseError(f"unknown decomposition line {key!r}", lineno)
        fields[key] = _ints(rest, lineno)
    if "parent" not in fields or "map" not in fields:
        raise ParseError("decomposition needs 'parent' and 'map' lines")
    try:
        base = frozenset(fields["base"]) if "base" in fields else None
        return DepthDecomposition(RootedTree(tuple(fields["parent"])), tuple(fields["map"]), base)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_forest(F: ColoredForest) -> str:
    out = [f"forest q={F.field.q} D={F.D} n={F.n}"]
    for v in range(F.n):
        out.append(" ".join([str(v), str(F.parent[v])] + [str(x) for x in F.colors[v]]))
    return "\n".join(out) + "\n"


def parse_forest(text: str) -> ColoredForest:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty forest file", 1)
    lineno, header = lines[0]
    parts = header.split()
    if parts[0] != "forest":
        raise ParseError("expected header 'forest q=.. D=.. n=..'", lineno)
    p = _params(parts[1:], lineno, ("q", "D", "n"))
    if len(lines) - 1 != p["n"]:
        raise ParseError(f"expected {p['n']} vertex lines, found {len(lines) - 1}", lineno)
    parent = [0] * p["n"]
    colors = [()] * p["n"]
    seen = set()
    for ln, line in lines[1:]:
        vals = _ints(line.split(), ln)
        if len(vals) != 2 + p["D"]:
            raise ParseError(f"vertex line needs 2 + {p['D']} integers", ln)
        v = vals[0]
        if not 0 <= v < p["n"] or v in seen:
            raise ParseError(f"bad or repeated vertex id {v}", ln)
        seen.add(v)
        parent[v] = vals[1]
        colors[v] = tuple(vals[2:])
    try:
        return ColoredForest(tuple(parent), tuple(colors), p["D"], field_build(p["q"]))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def decomposition_dot(D: DepthDecomposition, M: Matroid | None = None) -> str:
    """DOT text for the tree; children appear in order of their smallest mapped element."""
    T = D.tree
    at = {v: [] for v in range(T.size)}
    for e, v in enumerate(D.f):
        at[v].append(e)
    low = {}
    for v in sorted(range(T.size), key=T.depth_of, reverse=True):
        cands = at[v] + [low[c] for c in T.children[v] if low[c] is not None]
        low[v] = min(cands) if cands else None

    def name(e):
        return M.label(e) if M is not None else str(e)

    lines = ["digraph decomposition {", "  node [shape=circle];"]
    order, stack = [], [T.root]
    while stack:
        v = stack.pop()
        order.append(v)
        kids = sorted(T.children[v], key=lambda c: (low[c] is None, low[c] if low[c] is not None else 0, c))
        stack.extend(reversed(kids))
    for v in order:
        label = f"v{v}"
        if at[v]:
            label += "\\n{" + ",".join(name(e) for e in at[v]) + "}"
        lines.append(f'  v{v} [label="{label}"];')
    for v in order:
        kids = sorted(T.children[v], key=lambda c: (low[c] is None, low[c] if low[c] is not None else 0, c))
        for c in kids:
            lines.append(f"  v{v} -> v{c};")
    lines.append("}")
    return "\n".join(lines) + "\n"
