"""Branching measures and potentials used by the runtime audits.

Everything here is pure bookkeeping: the solvers never consult a measure
to make a decision, they only report (separation, instance) snapshots to
the audit layer, which evaluates these functions.

Logarithms are evaluated from exact rational inputs at 30 significant
decimal digits and returned as exact ``Fraction`` snapshots of that
evaluation, so measure values are deterministic across platforms.
"""

from __future__ import annotations

import functools
from decimal import Decimal, localcontext
from fractions import Fraction

from .graph import Graph
from .separator import Separation
from .weights import CspWeights, ScWeights

LOG_PRECISION = 30


@functools.lru_cache(maxsize=None)
def _ln(num: int, den: int) -> Fraction:
    with localcontext() as ctx:
        ctx.prec = LOG_PRECISION
        return Fraction((Decimal(num) / Decimal(den)).ln())


def rational_log(x: Fraction, base: Fraction) -> Fraction:
    """log_base(x) evaluated at fixed precision; requires x > 0, base > 1."""
    if x <= 0 or base <= 1:
        raise ValueError("rational_log needs x > 0 and base > 1")
    return _ln(x.numerator, x.denominator) / _ln(base.numerator, base.denominator)


# -- Max 2-CSP measure (subcubic phase) -------------------------------------------


def csp_side_counts(g: Graph, sep: Separation) -> tuple[int, int, int, int]:
    """(l3, s3, s2, r3): degree-3 counts per side and degree-2 count in S."""
    l3 = s3 = s2 = r3 = 0
    for v in g.vertices():
        d = g.degree(v)
        if d > 3:
            raise ValueError(f"vertex {v} has degree {d} > 3")
        side = sep.side_of(v)
        if d == 3:
            if side == "L":
                l3 += 1
            elif side == "S":
                s3 += 1
            else:
                r3 += 1
        elif d == 2 and side == "S":
            s2 += 1
    return l3, s3, s2, r3


def csp_mu(g: Graph, sep: Separation, w: CspWeights) -> Fraction:
    """μ(L,S,R) for a subcubic instance graph, in the physical orientation.

    The side roles are taken exactly as presented: the solver keeps
    |L₃| ≤ |R₃| at the entry of each step, and each step's output is
    measured as produced, before the child renormalizes.  (Measuring the
    renormalized child instead would charge a step for the relabeling
    itself; the per-case analysis pays for real work only.)  The log
    argument is clamped at 1 so near-empty instances stay nonnegative.
    """
    l3, s3, s2, r3 = csp_side_counts(g, sep)
    mu = w.w_s * s3 + w.w2_s * s2 + w.w_r_eff * r3
    if r3 == l3:
        mu += w.w_b
    elif r3 == l3 + 1:
        mu += w.w_c
    arg = max(1, r3 + s3)
    mu += w.w_d * rational_log(Fraction(arg), Fraction(3, 2))
    return mu


def csp_eta(g: Graph, sep: Separation) -> int:
    """η = 3|S| + 2|R| + |L| + 2|E|; strictly decreases at every solver step."""
    return 3 * len(sep.sep) + 2 * len(sep.right) + len(sep.left) + 2 * g.m


# -- counting set cover measures ---------------------------------------------------
#
# The instance argument is duck-typed: it must provide active_vertices(),
# active_degree(v), is_set(v) and .sep (see ScIncidence).


def sc_mu4(inst, w: ScWeights) -> Fraction:
    """Degree-weighted measure for the general (max degree ≥ 4) phase."""
    mu = Fraction(0)
    for v in inst.active_vertices():
        d = inst.active_degree(v)
        mu += w.wset(d) if inst.is_set(v) else w.welt(d)
    return mu


def sc_side_weights(inst, w: ScWeights) -> tuple[Fraction, Fraction, Fraction]:
    """(μ_r(L), μ_s(S), μ_r(R)) in the instance's physical orientation."""
    mu_l = mu_s = mu_r = Fraction(0)
    for v in inst.active_vertices():
        d = inst.active_degree(v)
        side = inst.sep.side_of(v)
        if side == "S":
            mu_s += w.wsep(d)
        elif side == "L":
            mu_l += w.wright(d)
        else:
            mu_r += w.wright(d)
    return mu_l, mu_s, mu_r


def sc_mu3_parts(inst, w: ScWeights) -> tuple[Fraction, Fraction]:
    """(linear part, log argument) of the subcubic separation measure.

    μ₃ = μ_s(S) + μ_r(R) + max(0, B − (μ_r(R) − μ_r(L))/2)
         + (1+B)·log_{1+ε}(μ_r(R) + μ_s(S)),

    computed orientation-canonically (the heavier side plays R).  The
    log argument is returned separately so the audit can freeze it
    across a parent/child comparison.
    """
    mu_l, mu_s, mu_r = sc_side_weights(inst, w)
    lo, hi = min(mu_l, mu_r), max(mu_l, mu_r)
    linear = mu_s + hi + max(Fraction(0), w.B - (hi - lo) / 2)
    return linear, hi + mu_s


def sc_mu3(inst, w: ScWeights, frozen_arg: Fraction | None = None) -> Fraction:
    linear, arg = sc_mu3_parts(inst, w)
    if frozen_arg is not None:
        arg = frozen_arg
    arg = max(Fraction(1), arg)
    return linear + (1 + w.B) * rational_log(arg, 1 + w.eps)


def sc_progress(inst, w: ScWeights) -> Fraction:
    """Termination potential for the subcubic phase; drops ≥ 1 per step.

    (|S₂| + |S|)·μ_r(V)/w_right(2) + |μ_r(R) − μ_r(L)|/w_right(2),
    where μ_r(V) weights every active vertex with w_right.
    """
    s2 = s_total = 0
    mu_all = Fraction(0)
    for v in inst.active_vertices():
        d = inst.active_degree(v)
        mu_all += w.wright(d)
        if inst.sep.side_of(v) == "S":
            s_total += 1
            if d == 2:
                s2 += 1
    mu_l, _, mu_r = sc_side_weights(inst, w)
    wr2 = w.wright(2)
    return (s2 + s_total) * mu_all / wr2 + abs(mu_r - mu_l) / wr2
