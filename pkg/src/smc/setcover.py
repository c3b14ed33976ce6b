"""Counting set covers per cardinality, and the dominating-set translation.

An instance is carried as its bipartite incidence graph: element vertices
on one side, set vertices on the other, with an edge when the element
belongs to the set.  Solving machinery works on the *active* part I - A,
where A is the set of annotated vertices: annotation removes a vertex
from play without deleting its edges, so annotated vertices can be
resolved exactly at the leaves from the recorded order and neighbor
snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .counts import CountVector
from .graph import Graph, connected_components, induced_subgraph
from .measures import sc_mu3, sc_mu3_parts, sc_mu4, sc_progress, sc_side_weights
from .separator import (
    Separation,
    separate_balanced_by_measure,
    trivial_separation,
    verify_separation,
)
from .weights import ScWeights

MU_REL_SLACK = 1e-9


@dataclass
class Annotation:
    vertex: int
    reason: str  # "deg<=1" | "dup-deg2"
    neighbors: tuple[int, ...]  # active neighbors at annotation time
    attached_to: int | None  # lowest-id active neighbor (side bookkeeping)


@dataclass
class ScIncidence:
    incidence: Graph
    set_ids: set[int]
    annotated: set[int] = field(default_factory=set)
    sep: Separation = field(default_factory=lambda: Separation(set(), set(), set()))
    annotation_log: list[Annotation] = field(default_factory=list)

    def copy(self) -> "ScIncidence":
        return ScIncidence(
            self.incidence.copy(),
            set(self.set_ids),
            set(self.annotated),
            self.sep.copy(),
            list(self.annotation_log),
        )

    def element_ids(self) -> list[int]:
        return [v for v in self.incidence.vertices() if v not in self.set_ids]

    def is_set(self, v: int) -> bool:
        return v in self.set_ids

    # -- the active instance I - A ------------------------------------------

    def active_vertices(self) -> list[int]:
        return [v for v in self.incidence.vertices() if v not in self.annotated]

    def active_neighbors(self, v: int) -> list[int]:
        return [u for u in self.incidence.neighbors(v) if u not in self.annotated]

    def active_degree(self, v: int) -> int:
        return len(self.active_neighbors(v))

    def active_graph(self) -> Graph:
        return induced_subgraph(
            self.incidence, set(self.incidence.vertices()) - self.annotated
        )

    def check(self) -> None:
        for v in self.incidence.vertices():
            sv = self.is_set(v)
            for u in self.incidence.neighbors(v):
                assert self.is_set(u) != sv, f"edge ({v},{u}) not across roles"
        assert self.annotated <= set(self.incidence.vertices())
        active = set(self.incidence.vertices()) - self.annotated
        assert self.sep.vertices() == active, "sep must partition I - A"
        assert verify_separation(self.active_graph(), self.sep)


def ds_to_sc(g: Graph) -> ScIncidence:
    """Dominating sets of g as set covers: one element per vertex, one set
    per closed neighborhood.  Element i and set n+i follow sorted vertex
    order; a size-k dominating set corresponds to a size-k cover."""
    vs = g.vertices()
    n = len(vs)
    idx = {v: i for i, v in enumerate(vs)}
    inc = Graph(range(2 * n))
    for i, v in enumerate(vs):
        inc.add_edge(i, n + i)  # v in N[v]
        for u in g.neighbors(v):
            inc.add_edge(idx[u], n + i)
    return ScIncidence(inc, set(range(n, 2 * n)), sep=trivial_separation(range(2 * n)))


# -- text format -----------------------------------------------------------------
#
# "setcover <|U|> <|S|>" then one line per set: "set <j> <element ids...>"
# with j in 0..|S|-1 (its incidence-vertex id is |U|+j) and elements
# 0-based.  '#' comments.  Empty sets are legal.


def parse_sc(text: str) -> ScIncidence:
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows or rows[0][0] != "setcover" or len(rows[0]) != 3:
        raise ValueError("expected header 'setcover <|U|> <|S|>'")
    n_u, n_s = int(rows[0][1]), int(rows[0][2])
    inc = Graph(range(n_u + n_s))
    seen: set[int] = set()
    for row in rows[1:]:
        if row[0] != "set" or len(row) < 2:
            raise ValueError(f"bad set line {' '.join(row)!r}")
        j = int(row[1])
        if not 0 <= j < n_s or j in seen:
            raise ValueError(f"bad or repeated set id {j}")
        seen.add(j)
        for tok in row[2:]:
            e = int(tok)
            if not 0 <= e < n_u:
                raise ValueError(f"element {e} out of range")
            inc.add_edge(e, n_u + j)
    if len(seen) != n_s:
        raise ValueError(f"header promises {n_s} sets, found {len(seen)}")
    return ScIncidence(
        inc, set(range(n_u, n_u + n_s)), sep=trivial_separation(range(n_u + n_s))
    )


def format_sc(inst: ScIncidence) -> str:
    if inst.annotated:
        raise ValueError("cannot format an instance with annotations")
    elems = inst.element_ids()
    n_u = len(elems)
    if elems != list(range(n_u)) or sorted(inst.set_ids) != list(
        range(n_u, n_u + len(inst.set_ids))
    ):
        raise ValueError("text format needs elements 0..|U|-1 then sets")
    lines = [f"setcover {n_u} {len(inst.set_ids)}"]
    for j, s in enumerate(sorted(inst.set_ids)):
        members = " ".join(str(e) for e in inst.incidence.neighbors(s))
        lines.append(f"set {j} {members}".rstrip())
    return "\n".join(lines) + "\n"


# -- leaf counting: max active degree <= 2 ----------------------------------


def _fold_set_under(target: tuple[CountVector, CountVector],
                    va: CountVector, vb: CountVector,
                    ) -> tuple[CountVector, CountVector]:
    """Absorb a set pair (covers=va, idle=vb) into the vertex it hangs on.

    The target's first component gains the cross term: a taken pendant
    set does the covering even when the target's own slot is idle (twin
    set) or unsatisfied (element).
    """
    ta, tb = target
    return ta.convolve(va + vb) + tb.convolve(va), tb.convolve(vb)


def _fold_elt_under(target: tuple[CountVector, CountVector],
                    va: CountVector, vb: CountVector,
                    ) -> tuple[CountVector, CountVector]:
    """Absorb an element pair (sat=va, pend=vb) into its remaining set.

    The set's idle branch survives only when the element was already
    satisfied inside the folded material; taking the set frees both
    branches of the element."""
    ta, tb = target
    return ta.convolve(va + vb), tb.convolve(va)


def sc_dp(inst: ScIncidence) -> CountVector:
    """Exact cover counts once the active part has maximum degree <= 2.

    The active structure is a disjoint union of alternating paths and
    cycles; annotated vertices are folded back in annotation order.
    Every vertex carries a generating-function pair over the choices in
    the material already folded onto it:

      set vertex:      (covers, idle)  split by whether its slot covers
                       the remaining neighbors       (base z, 1);
      element vertex:  (sat, pend)     split by whether it is already
                       covered inside the folded part (base 0, 1).

    An annotated vertex folds onto its single surviving snapshot
    neighbor, or onto its duplicate twin when both snapshot neighbors
    survive; if nothing survives it folds into a global factor, which is
    exact because a deleted set is never taken and a deleted element
    needs no cover.  Leftover paths and cycles are swept with a
    pending-coverage transfer DP.
    """
    g = inst.incidence
    for v in inst.active_vertices():
        if inst.active_degree(v) > 2:
            raise ValueError(f"sc_dp needs max active degree <= 2, vertex {v}")
    assert {a.vertex for a in inst.annotation_log} == set(inst.annotated), (
        "every annotated vertex needs a log entry")

    pairs: dict[int, tuple[CountVector, CountVector]] = {}
    for v in g.vertices():
        if inst.is_set(v):
            pairs[v] = (CountVector.unit(1), CountVector.one())
        else:
            pairs[v] = (CountVector.zero(), CountVector.one())

    live = set(g.vertices())
    absorbed: set[int] = set()

    def nbrs_now(u: int) -> set[int]:
        return {x for x in g.neighbors(u) if x not in absorbed}

    total = CountVector.one()
    for a in inst.annotation_log:
        v = a.vertex
        va, vb = pairs[v]
        targets = [u for u in a.neighbors if u in live and u not in absorbed]
        if len(targets) == 2:
            # Duplicate: some un-absorbed same-role twin shares exactly
            # these two neighbors (branches can only delete a twin by
            # deleting v as well, so it is still here).
            cands = [u for u in live
                     if u != v and u not in absorbed
                     and inst.is_set(u) == inst.is_set(v)
                     and nbrs_now(u) == set(targets)]
            assert cands, f"duplicate-annotated {v} lost its twin"
            tw = min(cands)
            ta, tb = pairs[tw]
            if inst.is_set(v):
                # slot semantics: covers iff at least one of the pair taken
                pairs[tw] = (ta.convolve(va + vb) + tb.convolve(va),
                             tb.convolve(vb))
            else:
                # both elements need the same outside cover unless satisfied
                sat = ta.convolve(va)
                both = (ta + tb).convolve(va + vb)
                pairs[tw] = (sat, both - sat)
        elif len(targets) == 1:
            fold = _fold_set_under if inst.is_set(v) else _fold_elt_under
            pairs[targets[0]] = fold(pairs[targets[0]], va, vb)
        else:
            total = total.convolve(va + vb if inst.is_set(v) else va)
        absorbed.add(v)

    active = set(g.vertices()) - inst.annotated
    ag = induced_subgraph(g, active)
    for comp in connected_components(ag):
        total = total.convolve(_sweep_chain(ag, comp, pairs, inst))
    return total


def _chain_states(order: list[int], pairs, inst: ScIncidence,
                  init_bit: int | None = None) -> dict[int, CountVector]:
    """Transfer DP along an alternating chain.

    State bit after a set vertex: 1 iff its slot covers its neighbors;
    after an element vertex: 1 iff the element still needs the next set
    (pending).  `init_bit` forces the first vertex (a set) for cycles.
    """
    v0 = order[0]
    a, b = pairs[v0]
    if init_bit is None:
        states = {1: a, 0: b} if inst.is_set(v0) else {0: a, 1: b}
    else:
        states = {init_bit: a if init_bit else b}
    for v in order[1:]:
        a, b = pairs[v]
        new = {0: CountVector.zero(), 1: CountVector.zero()}
        if inst.is_set(v):
            for p, acc in states.items():
                new[1] = new[1] + acc.convolve(a)
                if p == 0:  # pending predecessor kills the idle branch
                    new[0] = new[0] + acc.convolve(b)
        else:
            for c, acc in states.items():
                new[0] = new[0] + acc.convolve(a)
                if c == 1:
                    new[0] = new[0] + acc.convolve(b)
                else:
                    new[1] = new[1] + acc.convolve(b)
        states = new
    return states


def _sweep_chain(ag: Graph, comp: list[int], pairs,
                 inst: ScIncidence) -> CountVector:
    if len(comp) == 1:
        a, b = pairs[comp[0]]
        return a + b if inst.is_set(comp[0]) else a
    ends = sorted(v for v in comp if ag.degree(v) <= 1)
    if ends:  # path
        order = [ends[0]]
        prev: int | None = None
        while len(order) < len(comp):
            nxt = min(u for u in ag.neighbors(order[-1]) if u != prev)
            prev = order[-1]
            order.append(nxt)
        states = _chain_states(order, pairs, inst)
        if inst.is_set(order[-1]):
            return states[0] + states[1]
        return states[0]
    # cycle: start at the smallest set vertex, close the pending element
    # against the start's cover bit
    start = min(v for v in comp if inst.is_set(v))
    order = [start, min(ag.neighbors(start))]
    while len(order) < len(comp):
        order.append(next(u for u in ag.neighbors(order[-1])
                          if u != order[-2]))
    total = CountVector.zero()
    for c0 in (0, 1):
        states = _chain_states(order, pairs, inst, init_bit=c0)
        total = total + states[0]
        if c0 == 1:
            total = total + states[1]
    return total


# -- engine ------------------------------------------------------------------


@dataclass
class ScStats:
    branchings: int = 0
    annotations: int = 0
    dp_calls: int = 0
    splits: int = 0
    leaves: int = 0
    max_depth: int = 0
    separator_recomputes: int = 0


@dataclass
class ScAuditEntry:
    kind: str
    hard: bool
    mu_ok: bool
    step_ok: bool
    mu_parent: float | None
    mu_children: tuple[float, ...]
    note: str = ""
    # "more progress on the heavy side" whenever the imbalance exceeds B
    # before the step; tracked separately from ok because the drag rules
    # themselves trade it against the literal mu bookkeeping.
    balance_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.mu_ok and self.step_ok


# Hard steps carry the full obligation: sum_j 2^mu(I_j) <= 2^mu(I) with
# mu = mu4 while some active degree is >= 4 and mu = mu3 in the subcubic
# phase, plus the per-call progress drop.  Splits, re-separations, the
# mu3 <= mu4 handover and stall branches are recorded but only logged:
# their quality rests on the separator, not on the weight system.
_SC_HARD = frozenset({
    "annotate", "branch-set", "branch-elt",
    "drag-R", "drag-L", "drag-path-R", "drag-path-L",
    "rotate", "rotate-pair", "branch3-set", "branch3-elt",
    "dp", "leaf",
})

# Subcubic ladder steps must also drop the progress potential by >= 1.
_SC_LADDER = frozenset({
    "drag-R", "drag-L", "drag-path-R", "drag-path-L",
    "rotate", "rotate-pair", "branch3-set", "branch3-elt",
})


def _max_active_degree(inst: ScIncidence) -> int:
    return max((inst.active_degree(v) for v in inst.active_vertices()),
               default=0)


class ScAudit:
    """Per-step measure bookkeeping for the set-cover engine."""

    def __init__(self, weights: ScWeights | None = None, strict: bool = False):
        self.weights = weights or ScWeights.published()
        self.strict = strict
        self.entries: list[ScAuditEntry] = []

    @property
    def violations(self) -> list[ScAuditEntry]:
        return [e for e in self.entries if e.hard and not e.ok]

    @property
    def balance_violations(self) -> list[ScAuditEntry]:
        return [e for e in self.entries if not e.balance_ok]

    def record(self, kind: str, parent: ScIncidence,
               children: list[ScIncidence], note: str = "",
               frozen_arg: Fraction | None = None) -> None:
        w = self.weights
        hard = kind in _SC_HARD
        subcubic = _max_active_degree(parent) <= 3
        if subcubic:
            # within a phase the log argument stays frozen at its value
            # from the last re-separation; eq:sep pays for its growth
            def measure(i):
                return sc_mu3(i, w, frozen_arg=frozen_arg)
        else:
            def measure(i):
                return sc_mu4(i, w)
        mu_p = float(measure(parent))
        mu_cs = tuple(float(measure(c)) for c in children)
        mu_ok = (sum(2.0 ** m for m in mu_cs)
                 <= (2.0 ** mu_p) * (1.0 + MU_REL_SLACK))
        step_ok = True
        balance_ok = True
        if kind in _SC_LADDER:
            limit = sc_progress(parent, w) - 1
            step_ok = all(sc_progress(c, w) <= limit for c in children)
            # separator-phase steps can move weight toward the heavy side;
            # sides are exact Fractions and physically aligned parent/child
            pl, _, pr = sc_side_weights(parent, w)
            if abs(pr - pl) > w.B:
                for c in children:
                    cl, _, cr = sc_side_weights(c, w)
                    heavy, light = ((pr - cr, pl - cl) if pr >= pl
                                    else (pl - cl, pr - cr))
                    if heavy < light:
                        balance_ok = False
        elif kind in ("annotate", "branch-set", "branch-elt"):
            limit = len(parent.active_vertices()) - 1
            step_ok = all(len(c.active_vertices()) <= limit for c in children)
        entry = ScAuditEntry(kind, hard, mu_ok, step_ok, mu_p, mu_cs, note,
                             balance_ok)
        self.entries.append(entry)
        if self.strict and hard and not entry.ok:
            raise AssertionError(f"measure audit violation at {kind}: {entry}")
        if self.strict and not balance_ok:
            raise AssertionError(f"balance condition violated at {kind}: {entry}")

    def record_handover(self, inst: ScIncidence) -> None:
        """Lemma-style handover: entering the subcubic engine should not
        raise the measure (can fail on tiny instances where the additive
        log term dominates; logged, never hard)."""
        w = self.weights
        m4, m3 = float(sc_mu4(inst, w)), float(sc_mu3(inst, w))
        self.entries.append(ScAuditEntry(
            "handover", False, m3 <= m4 + 1e-9, True, m4, (m3,),
            note=f"mu3={m3:.6f} mu4={m4:.6f}"))

    def record_reseparation(self, inst: ScIncidence, arg_old: Fraction,
                            arg_new: Fraction) -> None:
        """(mu_r + mu_s) of the worked side must shrink by 1+eps for the
        log-term amortization; heuristic separators may miss, so this is
        logged and asserted only under strict."""
        ok = arg_new * (1 + self.weights.eps) <= arg_old or arg_old == 0
        self.entries.append(ScAuditEntry(
            "reseparate", False, ok, True, None, (),
            note=f"arg {float(arg_old):.6f} -> {float(arg_new):.6f}"))
        if self.strict and not ok:
            raise AssertionError(
                f"re-separation shrink below 1+eps: {arg_old} -> {arg_new}")


@dataclass
class _ScEnv:
    weights: ScWeights
    stats: ScStats
    audit: ScAudit | None


def _component(inst: ScIncidence, comp: list[int]) -> ScIncidence:
    keep = set(comp)
    return ScIncidence(
        induced_subgraph(inst.incidence, keep),
        set(inst.set_ids) & keep,
        set(inst.annotated) & keep,
        trivial_separation(keep - inst.annotated),
        [a for a in inst.annotation_log if a.vertex in keep],
    )


def _annotated(inst: ScIncidence, v: int, reason: str) -> ScIncidence:
    child = inst.copy()
    nbrs = tuple(sorted(child.active_neighbors(v)))
    child.annotation_log.append(
        Annotation(v, reason, nbrs, min(nbrs) if nbrs else None))
    child.annotated.add(v)
    child.sep.discard(v)
    return child


def _without(inst: ScIncidence, doomed: set[int],
             reset_sep: bool = False) -> ScIncidence:
    child = inst.copy()
    for v in doomed:
        child.incidence.delete_vertex(v)
        child.annotated.discard(v)
        child.set_ids.discard(v)
        child.sep.discard(v)
    child.annotation_log = [a for a in child.annotation_log
                            if a.vertex not in doomed]
    if reset_sep:
        child.sep = trivial_separation(child.active_vertices())
    return child


def _find_duplicate(inst: ScIncidence) -> int | None:
    """Smallest active degree-2 vertex sharing both neighbors with a twin."""
    sig: dict[tuple[bool, frozenset[int]], list[int]] = {}
    for v in sorted(inst.active_vertices()):
        if inst.active_degree(v) == 2:
            key = (inst.is_set(v), frozenset(inst.active_neighbors(v)))
            sig.setdefault(key, []).append(v)
    twins = [vs[0] for vs in sig.values() if len(vs) >= 2]
    return min(twins) if twins else None


def sc_count(inst: ScIncidence, weights: ScWeights | None = None,
             audit: ScAudit | None = None) -> tuple[CountVector, ScStats]:
    """Count set covers of every cardinality (duplicate sets distinct).

    Branches on sets/elements of degree >= 4 until the incidence graph is
    subcubic, then follows the separator ladder; paths and cycles are
    counted directly and annotated vertices are resolved at the leaves.
    """
    work = inst.copy()
    work.check()
    env = _ScEnv(weights or ScWeights.published(), ScStats(), audit)
    vec = _sc(work, env, 0, -1, None)
    return vec, env.stats


def sc3_count(inst: ScIncidence, weights: ScWeights | None = None,
              audit: ScAudit | None = None) -> CountVector:
    """Subcubic entry point: separator ladder for max active degree <= 3.

    Same counts as sc_count (the two engines are mutually recursive); this
    front door only checks the degree bound and skips the handover record.
    """
    if _max_active_degree(inst) > 3:
        raise ValueError("sc3_count requires max degree <= 3 on I - A")
    work = inst.copy()
    work.check()
    env = _ScEnv(weights or ScWeights.published(), ScStats(), audit)
    return _sc3(work, env, 0, -1, sc_mu3_parts(work, env.weights)[1])


def _sc(inst: ScIncidence, env: _ScEnv, depth: int, resep_n: int,
        frozen: Fraction | None) -> CountVector:
    st, aud = env.stats, env.audit
    st.max_depth = max(st.max_depth, depth)
    if aud is not None:
        inst.check()
    g = inst.incidence

    if not g.vertices():
        st.leaves += 1
        if aud:
            aud.record("leaf", inst, [])
        return CountVector.one()

    comps = connected_components(g)
    if len(comps) > 1:
        st.splits += 1
        children = [_component(inst, comp) for comp in comps]
        if aud:
            aud.record("split", inst, children, note=f"{len(comps)} parts")
        vec = CountVector.one()
        for child in children:
            vec = vec.convolve(_sc(child, env, depth + 1, -1, None))
        return vec

    low = [v for v in inst.active_vertices() if inst.active_degree(v) <= 1]
    if low:
        child = _annotated(inst, min(low), "deg<=1")
        st.annotations += 1
        if aud:
            aud.record("annotate", inst, [child], note=f"v={min(low)}",
                       frozen_arg=frozen)
        return _sc(child, env, depth + 1, -1, frozen)

    dup = _find_duplicate(inst)
    if dup is not None:
        child = _annotated(inst, dup, "dup-deg2")
        st.annotations += 1
        if aud:
            aud.record("annotate", inst, [child], note=f"dup v={dup}",
                       frozen_arg=frozen)
        return _sc(child, env, depth + 1, -1, frozen)

    d_set = max((inst.active_degree(v) for v in inst.active_vertices()
                 if inst.is_set(v)), default=0)
    d_elt = max((inst.active_degree(v) for v in inst.active_vertices()
                 if not inst.is_set(v)), default=0)

    if d_set <= 2 and d_elt <= 2:
        st.dp_calls += 1
        st.leaves += 1
        if aud:
            aud.record("dp", inst, [], frozen_arg=frozen)
        return sc_dp(inst)

    if d_set <= 3 and d_elt <= 3:
        if frozen is None:
            frozen = sc_mu3_parts(inst, env.weights)[1]
            if aud:
                aud.record_handover(inst)
        return _sc3(inst, env, depth, resep_n, frozen)

    # general phase: branch on a maximum-degree set or element
    st.branchings += 1
    if d_set > d_elt:
        s = min(v for v in inst.active_vertices()
                if inst.is_set(v) and inst.active_degree(v) == d_set)
        take = _without(inst, {s} | set(g.neighbors(s)), reset_sep=True)
        disc = _without(inst, {s}, reset_sep=True)
        if aud:
            aud.record("branch-set", inst, [take, disc], note=f"s={s}")
        return (_sc(take, env, depth + 1, -1, None).shift(1)
                + _sc(disc, env, depth + 1, -1, None))
    e = min(v for v in inst.active_vertices()
            if not inst.is_set(v) and inst.active_degree(v) == d_elt)
    opt = _without(inst, {e}, reset_sep=True)
    forb = _without(inst, {e} | set(g.neighbors(e)), reset_sep=True)
    if aud:
        aud.record("branch-elt", inst, [opt, forb], note=f"e={e}")
    return (_sc(opt, env, depth + 1, -1, None)
            - _sc(forb, env, depth + 1, -1, None))


def _sc3(inst: ScIncidence, env: _ScEnv, depth: int,
         resep_n: int, frozen: Fraction) -> CountVector:
    """Subcubic ladder; every action recurses through the outer engine."""
    st, aud, w = env.stats, env.audit, env.weights
    g = inst.incidence

    if not inst.sep.sep:
        n_act = len(inst.active_vertices())
        if n_act == resep_n:
            return _stall(inst, env, depth)
        mu_l, mu_s, mu_r = sc_side_weights(inst, w)
        arg_old = max(mu_l, mu_r) + mu_s
        ag = inst.active_graph()
        inst.sep = separate_balanced_by_measure(
            ag, lambda v: w.wright(ag.degree(v)), w.B)
        st.separator_recomputes += 1
        resep_n = n_act
        mu_l, mu_s, mu_r = sc_side_weights(inst, w)
        frozen = max(mu_l, mu_r) + mu_s
        if aud:
            aud.record_reseparation(inst, arg_old, frozen)

    mu_l, mu_s, mu_r = sc_side_weights(inst, w)
    if mu_l > mu_r:
        inst.sep.swap()
        mu_l, mu_r = mu_r, mu_l
    gap = mu_r - mu_l
    sep = inst.sep
    s_sorted = sorted(sep.sep)

    def side_nbrs(v: int, side: str) -> list[int]:
        return [u for u in inst.active_neighbors(v)
                if sep.side_of(u) == side]

    def step(kind: str, child: ScIncidence, token: int) -> CountVector:
        if aud:
            aud.record(kind, inst, [child], frozen_arg=frozen)
        return _sc(child, env, depth + 1, token, frozen)

    for s in s_sorted:
        if not side_nbrs(s, "L"):
            child = inst.copy()
            child.sep.discard(s)
            child.sep.right.add(s)
            return step("drag-R", child, resep_n)
        if not side_nbrs(s, "R"):
            child = inst.copy()
            child.sep.discard(s)
            child.sep.left.add(s)
            return step("drag-L", child, resep_n)

    deg2 = [s for s in s_sorted if inst.active_degree(s) == 2]
    if deg2:
        # every S vertex now has a neighbor on each side, so a degree-2
        # one has exactly one per side; walk the chain away from the
        # heavy side and push it (plus s) onto the heavy side
        s = deg2[0]
        balanced = gap <= 2 * w.B
        walk_side = "L" if balanced else "R"
        prev, cur = s, side_nbrs(s, walk_side)[0]
        while cur not in sep.sep and inst.active_degree(cur) == 2:
            prev, cur = cur, next(u for u in inst.active_neighbors(cur)
                                  if u != prev)
        child = inst.copy()
        cs = child.sep
        dest = cs.right if balanced else cs.left
        run, scan = [s], s
        back, at = s, side_nbrs(s, walk_side)[0]
        while at != cur:
            run.append(at)
            back, at = at, next(u for u in inst.active_neighbors(at)
                                if u != back)
        for v in run:
            cs.discard(v)
            dest.add(v)
        if cur not in cs.sep:
            cs.discard(cur)
            cs.sep.add(cur)
        kind = "drag-path-R" if balanced else "drag-path-L"
        return step(kind, child, resep_n)

    if gap > w.B:
        for s in s_sorted:
            ell, arr = side_nbrs(s, "L"), side_nbrs(s, "R")
            if len(ell) == 2 and len(arr) == 1 \
                    and inst.active_degree(arr[0]) == 3:
                r = arr[0]
                child = inst.copy()
                child.sep.discard(s)
                child.sep.left.add(s)
                child.sep.discard(r)
                child.sep.sep.add(r)
                return step("rotate", child, resep_n)
        for s in s_sorted:
            ell, arr = side_nbrs(s, "L"), side_nbrs(s, "R")
            if len(ell) == 2 and len(arr) == 1 \
                    and inst.active_degree(arr[0]) == 2:
                r = arr[0]
                other = [u for u in inst.active_neighbors(r) if u != s]
                if other and other[0] in sep.sep:
                    child = inst.copy()
                    for v in (s, r):
                        child.sep.discard(v)
                        child.sep.left.add(v)
                    return step("rotate-pair", child, resep_n)

    st.branchings += 1
    elts = [s for s in s_sorted if not inst.is_set(s)]
    if elts:
        e = elts[0]
        opt = _without(inst, {e})
        forb = _without(inst, {e} | set(g.neighbors(e)))
        if aud:
            aud.record("branch3-elt", inst, [opt, forb], note=f"e={e}",
                       frozen_arg=frozen)
        return (_sc(opt, env, depth + 1, -1, frozen)
                - _sc(forb, env, depth + 1, -1, frozen))
    s = s_sorted[0]
    disc = _without(inst, {s})
    take = _without(inst, {s} | set(g.neighbors(s)))
    if aud:
        aud.record("branch3-set", inst, [disc, take], note=f"s={s}",
                   frozen_arg=frozen)
    return (_sc(disc, env, depth + 1, -1, frozen)
            + _sc(take, env, depth + 1, -1, frozen).shift(1))


def _stall(inst: ScIncidence, env: _ScEnv, depth: int) -> CountVector:
    """Drags emptied a fresh separator without touching the graph; break
    the loop by branching on the smallest degree-3 active vertex."""
    st, aud = env.stats, env.audit
    g = inst.incidence
    st.branchings += 1
    v = min(u for u in inst.active_vertices() if inst.active_degree(u) == 3)
    if inst.is_set(v):
        disc = _without(inst, {v}, reset_sep=True)
        take = _without(inst, {v} | set(g.neighbors(v)), reset_sep=True)
        if aud:
            aud.record("stall-set", inst, [disc, take], note=f"s={v}")
        return (_sc(disc, env, depth + 1, -1, None)
                + _sc(take, env, depth + 1, -1, None).shift(1))
    opt = _without(inst, {v}, reset_sep=True)
    forb = _without(inst, {v} | set(g.neighbors(v)), reset_sep=True)
    if aud:
        aud.record("stall-elt", inst, [opt, forb], note=f"e={v}")
    return (_sc(opt, env, depth + 1, -1, None)
            - _sc(forb, env, depth + 1, -1, None))
