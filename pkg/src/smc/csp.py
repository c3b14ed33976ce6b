"""Max 2-CSP instances: score model, reductions 0-III, encodings, text I/O.

An instance carries a niladic score, a monadic score vector per vertex and
a dyadic score table per edge; the objective is the assignment maximizing
their sum.  Scores are exact Python integers (arbitrary precision, so
"overflow" cannot wrap).  Edge tables are stored row-major over
(color(u), color(v)) for the canonical orientation u < v.

Each reduction returns the reduced instance together with an *extender*
mapping any optimal assignment of the child back to one of the parent
(realizing the argmax choices); extenders compose across a whole solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .graph import Graph, induced_subgraph

Edge = tuple[int, int]
Assignment = dict[int, int]
Extender = Callable[[Assignment], Assignment]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass
class CspInstance:
    r: int
    graph: Graph
    s_nil: int
    s_v: dict[int, tuple[int, ...]]
    s_e: dict[Edge, tuple[int, ...]]

    def copy(self) -> "CspInstance":
        return CspInstance(
            self.r, self.graph.copy(), self.s_nil, dict(self.s_v), dict(self.s_e)
        )

    def check(self) -> None:
        assert self.r >= 2
        assert set(self.s_v) == set(self.graph.vertices())
        assert set(self.s_e) == set(self.graph.edges())
        for v, vec in self.s_v.items():
            assert len(vec) == self.r, f"s_v[{v}] wrong arity"
        for e, tab in self.s_e.items():
            assert len(tab) == self.r * self.r, f"s_e[{e}] wrong arity"

    def edge_score(self, u: int, v: int, cu: int, cv: int) -> int:
        """Dyadic score of edge u-v under colors cu (at u), cv (at v)."""
        if u < v:
            return self.s_e[(u, v)][cu * self.r + cv]
        return self.s_e[(v, u)][cv * self.r + cu]

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass
class CspSolution:
    score: int
    assignment: Assignment


def zero_instance(r: int, g: Graph) -> CspInstance:
    zv = (0,) * r
    ze = (0,) * (r * r)
    return CspInstance(
        r, g.copy(), 0, {v: zv for v in g.vertices()}, {e: ze for e in g.edges()}
    )


def restrict(inst: CspInstance, vertices: Iterable[int]) -> CspInstance:
    """Sub-instance induced on a vertex set; the niladic score stays behind."""
    keep = set(vertices)
    g = induced_subgraph(inst.graph, keep)
    s_v = {v: inst.s_v[v] for v in keep}
    s_e = {e: t for e, t in inst.s_e.items() if e[0] in keep and e[1] in keep}
    return CspInstance(inst.r, g, 0, s_v, s_e)


def evaluate(inst: CspInstance, phi: Assignment) -> int:
    if set(phi) != set(inst.graph.vertices()):
        raise ValueError("assignment must be total on the vertex set")
    total = inst.s_nil
    for v, vec in inst.s_v.items():
        total += vec[phi[v]]
    for (u, v), tab in inst.s_e.items():
        total += tab[phi[u] * inst.r + phi[v]]
    return total


def _argmax_color(values: list[int]) -> int:
    """Smallest color achieving the max (deterministic tie-break)."""
    best = max(values)
    return values.index(best)


# -- reductions ----------------------------------------------------------------


def reduce0(inst: CspInstance, y: int) -> tuple[CspInstance, Extender]:
    """Delete isolated y, absorbing max_C s_y(C) into the niladic score."""
    if inst.graph.degree(y) != 0:
        raise ValueError(f"reduce0 needs degree 0, vertex {y} has {inst.graph.degree(y)}")
    vec = inst.s_v[y]
    child = inst.copy()
    child.graph.delete_vertex(y)
    del child.s_v[y]
    child.s_nil += max(vec)
    c_y = _argmax_color(list(vec))

    def extend(phi: Assignment) -> Assignment:
        out = dict(phi)
        out[y] = c_y
        return out

    return child, extend


def reduceI(inst: CspInstance, y: int) -> tuple[CspInstance, Extender]:
    """Fold pendant y into its neighbor: s'_x(C) = s_x(C) + max_D (s_xy(C,D)+s_y(D))."""
    if inst.graph.degree(y) != 1:
        raise ValueError(f"reduceI needs degree 1, vertex {y} has {inst.graph.degree(y)}")
    (x,) = inst.graph.neighbors(y)
    r = inst.r
    best_d: list[int] = []
    new_x = []
    for c in range(r):
        opts = [inst.edge_score(x, y, c, d) + inst.s_v[y][d] for d in range(r)]
        new_x.append(inst.s_v[x][c] + max(opts))
        best_d.append(_argmax_color(opts))
    child = inst.copy()
    child.graph.delete_vertex(y)
    del child.s_v[y]
    del child.s_e[edge_key(x, y)]
    child.s_v[x] = tuple(new_x)

    def extend(phi: Assignment) -> Assignment:
        out = dict(phi)
        out[y] = best_d[phi[x]]
        return out

    return child, extend


def reduceII(inst: CspInstance, y: int) -> tuple[CspInstance, Extender]:
    """Contract degree-2 y between x and z into a (possibly merged) xz table.

    s'_xz(C,D) = [existing s_xz(C,D)] + max_F (s_xy(C,F) + s_yz(F,D) + s_y(F)).
    A would-be parallel edge folds into the existing table, keeping the
    graph simple.
    """
    if inst.graph.degree(y) != 2:
        raise ValueError(f"reduceII needs degree 2, vertex {y} has {inst.graph.degree(y)}")
    x, z = inst.graph.neighbors(y)
    r = inst.r
    merged = []
    best_f: list[list[int]] = [[0] * r for _ in range(r)]
    had_edge = inst.graph.has_edge(x, z)
    for c in range(r):
        for d in range(r):
            opts = [
                inst.edge_score(x, y, c, f) + inst.edge_score(y, z, f, d) + inst.s_v[y][f]
                for f in range(r)
            ]
            val = max(opts)
            best_f[c][d] = _argmax_color(opts)
            if had_edge:
                val += inst.edge_score(x, z, c, d)
            merged.append(val)
    child = inst.copy()
    child.graph.delete_vertex(y)
    del child.s_v[y]
    del child.s_e[edge_key(x, y)]
    del child.s_e[edge_key(y, z)]
    if not had_edge:
        child.graph.add_edge(x, z)
    # merged is row-major over (color_x, color_z); re-orient if z < x
    if x < z:
        child.s_e[(x, z)] = tuple(merged)
    else:
        child.s_e[(z, x)] = tuple(
            merged[c * r + d] for d in range(r) for c in range(r)
        )

    def extend(phi: Assignment) -> Assignment:
        out = dict(phi)
        out[y] = best_f[phi[x]][phi[z]]
        return out

    return child, extend


def reduceIII(inst: CspInstance, y: int) -> list[tuple[CspInstance, Extender]]:
    """Branch on y (degree >= 3): one subinstance per color C of y.

    The C-instance lives on G - y with s_nil += s_y(C) and, for every
    neighbor x, s'_x(D) = s_x(D) + s_xy(D,C).
    """
    if inst.graph.degree(y) < 3:
        raise ValueError(f"reduceIII needs degree >= 3, vertex {y} has {inst.graph.degree(y)}")
    r = inst.r
    nbrs = inst.graph.neighbors(y)
    out: list[tuple[CspInstance, Extender]] = []
    for color in range(r):
        child = inst.copy()
        child.graph.delete_vertex(y)
        del child.s_v[y]
        child.s_nil += inst.s_v[y][color]
        for x in nbrs:
            del child.s_e[edge_key(x, y)]
            child.s_v[x] = tuple(
                child.s_v[x][d] + inst.edge_score(x, y, d, color) for d in range(r)
            )

        def extend(phi: Assignment, _c: int = color) -> Assignment:
            out_phi = dict(phi)
            out_phi[y] = _c
            return out_phi

        out.append((child, extend))
    return out


# -- encodings -----------------------------------------------------------------


def encode_maxcut(g: Graph) -> CspInstance:
    """Max Cut as r=2 Max 2-CSP: each edge scores 1 iff endpoint colors differ."""
    inst = zero_instance(2, g)
    inst.s_e = {e: (0, 1, 1, 0) for e in inst.s_e}
    return inst


def encode_max2sat(n_vars: int, clauses: Iterable[tuple[int, ...]]) -> CspInstance:
    """Max 2-SAT as r=2 Max 2-CSP.

    Literals are DIMACS-style nonzero ints over variables 1..n_vars;
    variable i becomes vertex i-1; color 1 means true.  Width-2 clauses on
    distinct variables become edge tables; unit and same-variable clauses
    fold into monadic/niladic scores.
    """
    g = Graph(range(n_vars))
    s_v = {v: [0, 0] for v in range(n_vars)}
    s_e: dict[Edge, list[int]] = {}
    s_nil = 0
    for clause in clauses:
        lits = tuple(clause)
        if len(lits) > 2 or any(l == 0 or abs(l) > n_vars for l in lits):
            raise ValueError(f"bad clause {lits!r}")
        if len(lits) == 0:
            continue  # unsatisfiable clause: contributes nothing
        if len(lits) == 2 and abs(lits[0]) == abs(lits[1]):
            a, b = lits
            if a == b:
                lits = (a,)  # (x v x)
            else:
                s_nil += 1  # (x v -x) always satisfied
                continue
        if len(lits) == 1:
            lit = lits[0]
            v = abs(lit) - 1
            sat_color = 1 if lit > 0 else 0
            s_v[v][sat_color] += 1
            continue
        a, b = lits
        u, v = abs(a) - 1, abs(b) - 1
        if u > v:
            a, b = b, a
            u, v = v, u
        tab = s_e.setdefault((u, v), [0, 0, 0, 0])
        for cu in range(2):
            for cv in range(2):
                sat_u = (cu == 1) == (a > 0)
                sat_v = (cv == 1) == (b > 0)
                if sat_u or sat_v:
                    tab[cu * 2 + cv] += 1
    for (u, v) in s_e:
        g.add_edge(u, v)
    return CspInstance(
        2, g, s_nil, {v: tuple(vec) for v, vec in s_v.items()},
        {e: tuple(tab) for e, tab in s_e.items()},
    )


# -- text formats ----------------------------------------------------------------
#
# Instance format: "max2csp <r> <n> <m>", "nil <int>", n lines
# "v <id> <r ints>", m lines "e <u> <v> <r*r ints>"; '#' comments.


def parse_csp(text: str) -> CspInstance:
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows or rows[0][0] != "max2csp" or len(rows[0]) != 4:
        raise ValueError("expected header 'max2csp <r> <n> <m>'")
    r, n, m = (int(x) for x in rows[0][1:])
    if r < 2:
        raise ValueError(f"domain size {r} < 2")
    inst = zero_instance(r, Graph(range(n)))
    seen_v: set[int] = set()
    for row in rows[1:]:
        kind = row[0]
        if kind == "nil" and len(row) == 2:
            inst.s_nil = int(row[1])
        elif kind == "v" and len(row) == 2 + r:
            v = int(row[1])
            if not 0 <= v < n or v in seen_v:
                raise ValueError(f"bad or repeated vertex line for id {v}")
            seen_v.add(v)
            inst.s_v[v] = tuple(int(x) for x in row[2:])
        elif kind == "e" and len(row) == 3 + r * r:
            u, v = int(row[1]), int(row[2])
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge ({u},{v})")
            if edge_key(u, v) in inst.s_e:
                raise ValueError(f"duplicate edge ({u},{v})")
            inst.graph.add_edge(u, v)
            tab = tuple(int(x) for x in row[3:])
            if u > v:
                tab = tuple(tab[c * r + d] for d in range(r) for c in range(r))
            inst.s_e[edge_key(u, v)] = tab
        else:
            raise ValueError(f"bad line {' '.join(row)!r}")
    if len(inst.s_e) != m:
        raise ValueError(f"header promises {m} edges, found {len(inst.s_e)}")
    inst.check()
    return inst


def format_csp(inst: CspInstance) -> str:
    vs = inst.graph.vertices()
    if vs != list(range(len(vs))):
        raise ValueError("text format needs contiguous 0-based ids")
    lines = [f"max2csp {inst.r} {inst.n} {inst.graph.m}", f"nil {inst.s_nil}"]
    for v in vs:
        lines.append("v " + str(v) + " " + " ".join(map(str, inst.s_v[v])))
    for (u, v) in inst.graph.edges():
        lines.append(f"e {u} {v} " + " ".join(map(str, inst.s_e[(u, v)])))
    return "\n".join(lines) + "\n"


def parse_dimacs_2cnf(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """DIMACS CNF restricted to clause width <= 2."""
    n_vars = None
    clauses: list[tuple[int, ...]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            n_vars = int(parts[2])
            continue
        if n_vars is None:
            raise ValueError("clause before problem line")
        lits = [int(x) for x in line.split()]
        if not lits or lits[-1] != 0:
            raise ValueError(f"clause line must end with 0: {line!r}")
        clause = tuple(lits[:-1])
        if len(clause) > 2:
            raise ValueError(f"clause width {len(clause)} > 2")
        clauses.append(clause)
    if n_vars is None:
        raise ValueError("missing problem line")
    return n_vars, clauses
