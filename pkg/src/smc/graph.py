"""Simple undirected graphs with stable integer vertex ids.

Vertex ids are arbitrary non-negative integers and are never re-indexed
by removals, so external bookkeeping (separations, labellings, score
tables) stays valid while a graph shrinks.  Everything is deterministic:
vertex lists, neighbor lists and component orders are sorted.

Graphs are value-like: operations either return a fresh graph or mutate
an explicitly owned copy; nothing shares adjacency sets behind the
caller's back.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class Graph:
    """Mutable simple undirected graph: no loops, no parallel edges."""

    __slots__ = ("_adj",)

    def __init__(
        self,
        vertices: Iterable[int] = (),
        edges: Iterable[tuple[int, int]] = (),
    ) -> None:
        self._adj: dict[int, set[int]] = {}
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_vertex(u)
            self.add_vertex(v)
            self.add_edge(u, v)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph(range(n), [(i, i + 1) for i in range(n - 1)])

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = {v: set(nbrs) for v, nbrs in self._adj.items()}
        return g

    # -- mutation ------------------------------------------------------------

    def add_vertex(self, v: int) -> None:
        self._adj.setdefault(v, set())

    def add_edge(self, u: int, v: int) -> None:
        """Insert edge u-v (idempotent).  Loops are rejected."""
        if u == v:
            raise ValueError(f"loop at vertex {u} not allowed in a simple graph")
        if u not in self._adj or v not in self._adj:
            raise KeyError(f"unknown endpoint in edge ({u},{v})")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        if v not in self._adj.get(u, ()):
            raise ValueError(f"edge ({u},{v}) not present")
        self._adj[u].discard(v)
        self._adj[v].discard(u)

    def delete_vertex(self, v: int) -> None:
        """Remove v and its incident edges, in place."""
        if v not in self._adj:
            raise KeyError(f"unknown vertex id {v}")
        for u in self._adj[v]:
            self._adj[u].discard(v)
        del self._adj[v]

    # -- queries -------------------------------------------------------------

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(
            (min(u, v), max(u, v))
            for u in self._adj
            for v in self._adj[u]
            if u < v
        )

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._adj[v]))

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self._adj.values()), default=0)

    def degrees(self) -> dict[int, int]:
        return {v: len(nbrs) for v, nbrs in self._adj.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class MultiGraph:
    """Undirected multigraph with loops and parallel edges.

    A loop contributes 2 to its endpoint's degree.  Stored as symmetric
    multiplicity maps; ``_adj[v][v] = k`` means k loops at v.
    """

    __slots__ = ("_adj",)

    def __init__(self) -> None:
        self._adj: dict[int, dict[int, int]] = {}

    @staticmethod
    def from_graph(g: Graph) -> "MultiGraph":
        m = MultiGraph()
        for v in g.vertices():
            m.add_vertex(v)
        for u, v in g.edges():
            m.add_edge(u, v)
        return m

    def add_vertex(self, v: int) -> None:
        self._adj.setdefault(v, {})

    def add_edge(self, u: int, v: int) -> None:
        self.add_vertex(u)
        self.add_vertex(v)
        self._adj[u][v] = self._adj[u].get(v, 0) + 1
        if u != v:
            self._adj[v][u] = self._adj[v].get(u, 0) + 1

    def delete_vertex(self, v: int) -> None:
        if v not in self._adj:
            raise KeyError(f"unknown vertex id {v}")
        for u in self._adj[v]:
            if u != v:
                del self._adj[u][v]
        del self._adj[v]

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    @property
    def n(self) -> int:
        return len(self._adj)

    def degree(self, v: int) -> int:
        nbrs = self._adj[v]
        return sum(k for u, k in nbrs.items() if u != v) + 2 * nbrs.get(v, 0)

    def multiplicity(self, u: int, v: int) -> int:
        return self._adj.get(u, {}).get(v, 0)

    def incidences(self, v: int) -> list[int]:
        """Endpoints of non-loop edges at v, one entry per edge, sorted."""
        out: list[int] = []
        for u in sorted(self._adj[v]):
            if u != v:
                out.extend([u] * self._adj[v][u])
        return out

    def loops_at(self, v: int) -> int:
        return self._adj[v].get(v, 0)

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge multiset: (u,v) with u <= v, repeated by multiplicity."""
        out: list[tuple[int, int]] = []
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if u < v:
                    out.extend([(u, v)] * self._adj[u][v])
                elif u == v:
                    out.extend([(u, u)] * self._adj[u][u])
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, m={len(self.edges())})"


# -- pure graph operations ---------------------------------------------------


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph on vertex set s, keeping edges with both endpoints in s."""
    keep = set(s)
    unknown = keep - set(g._adj)
    if unknown:
        raise KeyError(f"unknown vertex ids {sorted(unknown)}")
    out = Graph()
    out._adj = {v: g._adj[v] & keep for v in keep}
    return out


def remove_vertex(g: Graph, v: int) -> Graph:
    """Copy of g with v and its incident edges removed."""
    out = g.copy()
    out.delete_vertex(v)
    return out


def connected_components(g: Graph) -> list[list[int]]:
    """Maximal connected vertex sets, each sorted, ordered by smallest id."""
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in g.vertices():
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        frontier = [start]
        while frontier:
            nxt: list[int] = []
            for v in frontier:
                for u in g._adj[v]:
                    if u not in seen:
                        seen.add(u)
                        comp.append(u)
                        nxt.append(u)
            frontier = nxt
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def cubic_structure(g: Graph) -> MultiGraph:
    """The 3-regular multigraph left after dissolving all degree <= 2 parts.

    Repeatedly: delete degree-0 and degree-1 vertices; suppress a degree-2
    vertex by replacing it with an edge between its two incidences (which
    may create a parallel edge or a loop).  A vertex whose whole degree
    comes from a loop is a collapsed cycle component and is removed.  The
    result is independent of the elimination order; we scan by smallest id
    for determinism.
    """
    if g.max_degree() > 3:
        raise ValueError("cubic_structure requires max degree <= 3")
    m = MultiGraph.from_graph(g)
    while True:
        v = next((u for u in m.vertices() if m.degree(u) < 3), None)
        if v is None:
            return m
        if m.degree(v) <= 1:
            m.delete_vertex(v)
        elif m.loops_at(v):
            m.delete_vertex(v)
        else:
            a, b = m.incidences(v)
            m.delete_vertex(v)
            m.add_edge(a, b)


# -- text format ---------------------------------------------------------------
#
# First line "graph <n> <m>", then m lines "<u> <v>" with 0-based ids;
# '#' starts a comment.  The writer emits the canonical form (sorted edge
# list, no comments), which round-trips bit-exactly.


def parse_graph(text: str) -> Graph:
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows or rows[0][0] != "graph" or len(rows[0]) != 3:
        raise ValueError("expected header 'graph <n> <m>'")
    n, m = int(rows[0][1]), int(rows[0][2])
    if len(rows) - 1 != m:
        raise ValueError(f"header promises {m} edges, found {len(rows) - 1}")
    g = Graph(range(n))
    for row in rows[1:]:
        if len(row) != 2:
            raise ValueError(f"bad edge line {' '.join(row)!r}")
        u, v = int(row[0]), int(row[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"loop at {u} not allowed")
        if g.has_edge(u, v):
            raise ValueError(f"duplicate edge ({u},{v})")
        g.add_edge(u, v)
    return g


def format_graph(g: Graph) -> str:
    vs = g.vertices()
    if vs != list(range(len(vs))):
        raise ValueError("text format needs contiguous 0-based ids; relabel first")
    lines = [f"graph {g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def relabel_contiguous(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Copy of g with ids remapped to 0..n-1 in sorted order, plus the map."""
    mapping = {v: i for i, v in enumerate(g.vertices())}
    out = Graph(mapping.values(), [(mapping[u], mapping[v]) for u, v in g.edges()])
    return out, mapping
