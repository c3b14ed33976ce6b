"""Weight vectors for the two measure systems, with exact rational values.

The branching measure for Max 2-CSP instances over a separation (L,S,R):

    μ = w_s·|S₃| + w²_s·|S₂| + w_r·|R₃| + w_b·1[|R₃|=|L₃|]
        + w_c·1[|R₃|=|L₃|+1] + w_d·log_{3/2}(|R₃|+|S₃|),   w_d = w_b + 1,

where the stored ``w_r`` is the base value and the measure uses
``w_r + eps`` (the separator-quality slack ε is arbitrarily small; the
feasibility analysis works in the ε → 0 limit, see audit).

The set-cover system weights element/set vertices by degree (capped at 6)
for instances of maximum degree ≥ 4, and separator/right vertices by
degree (2..3) for the subcubic phase; B = 6·w_right(3).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction


@dataclass(frozen=True)
class CspWeights:
    w_s: Fraction
    w2_s: Fraction
    w_r: Fraction  # base value; measure uses w_r + eps
    w_b: Fraction
    w_c: Fraction
    eps: Fraction = Fraction(1, 1000)

    @property
    def w_d(self) -> Fraction:
        return self.w_b + 1

    @property
    def w_r_eff(self) -> Fraction:
        return self.w_r + self.eps

    @staticmethod
    def published() -> "CspWeights":
        return CspWeights(
            w_s=Fraction(7, 10),
            w2_s=Fraction(3, 5),
            w_r=Fraction(1, 5),
            w_b=Fraction(1, 5),
            w_c=Fraction(1, 10),
            eps=Fraction(1, 1000),
        )

    def replaced(self, **kw) -> "CspWeights":
        return replace(self, **kw)


@dataclass(frozen=True)
class ScWeights:
    w_elt: tuple[Fraction, ...]  # degrees 0..6; constant beyond 6
    w_set: tuple[Fraction, ...]  # degrees 0..6
    w_sep: tuple[Fraction, ...]  # degrees 0..3 (0 for degree <= 1)
    w_right: tuple[Fraction, ...]  # degrees 0..3
    eps: Fraction = Fraction(1, 100)

    @property
    def B(self) -> Fraction:
        return 6 * self.w_right[3]

    def welt(self, d: int) -> Fraction:
        return self.w_elt[min(d, 6)]

    def wset(self, d: int) -> Fraction:
        return self.w_set[min(d, 6)]

    def wsep(self, d: int) -> Fraction:
        return self.w_sep[min(d, 3)]

    def wright(self, d: int) -> Fraction:
        return self.w_right[min(d, 3)]

    def d_elt(self, d: int) -> Fraction:
        """Δw_elt(d) = w_elt(d) - w_elt(d-1); zero beyond the cap."""
        return self.welt(d) - self.welt(d - 1) if d <= 6 else Fraction(0)

    def d_set(self, d: int) -> Fraction:
        return self.wset(d) - self.wset(d - 1) if d <= 6 else Fraction(0)

    def d_sep(self, d: int) -> Fraction:
        return self.wsep(d) - self.wsep(d - 1) if d <= 3 else Fraction(0)

    def d_right(self, d: int) -> Fraction:
        return self.wright(d) - self.wright(d - 1) if d <= 3 else Fraction(0)

    def delta_deg_dec(self) -> Fraction:
        """Minimum measure decrease per degree decrement in the subcubic phase."""
        return min(
            min(self.d_sep(i), self.d_right(i) / 2) for i in (2, 3)
        )

    @staticmethod
    def published() -> "ScWeights":
        f = Fraction
        return ScWeights(
            w_elt=(f(0), f(0), f("0.15384"), f("0.22732"), f("0.26684"),
                   f("0.29023"), f("0.30019")),
            w_set=(f(0), f(0), f("0.16408"), f("0.24592"), f("0.29320"),
                   f("0.30224"), f("0.30224")),
            w_sep=(f(0), f(0), f("0.75630"), f("0.78943")),
            w_right=(f(0), f(0), f("0.15282"), f("0.22669")),
            eps=f(1, 100),
        )

    def replaced(self, **kw) -> "ScWeights":
        return replace(self, **kw)

    def with_entry(self, family: str, degree: int, value: Fraction) -> "ScWeights":
        cur = list(getattr(self, family))
        cur[degree] = value
        return self.replaced(**{family: tuple(cur)})


# -- weights files ---------------------------------------------------------------
#
# CSP:  one "name value" pair per line (w_s, w2_s, w_r, w_b, w_c, eps).
# SC:   "w_elt <degree> <value>" etc. keyed by degree, plus "eps <value>".
# Values are decimal strings or p/q rationals, parsed exactly.  Entries
# not present keep the published value.


def parse_csp_weights(text: str) -> CspWeights:
    w = CspWeights.published()
    fields = {"w_s", "w2_s", "w_r", "w_b", "w_c", "eps"}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in fields:
            raise ValueError(f"bad weights line {line!r}")
        w = w.replaced(**{parts[0]: Fraction(parts[1])})
    return w


def format_csp_weights(w: CspWeights) -> str:
    lines = [
        f"w_s {w.w_s}",
        f"w2_s {w.w2_s}",
        f"w_r {w.w_r}",
        f"w_b {w.w_b}",
        f"w_c {w.w_c}",
        f"eps {w.eps}",
    ]
    return "\n".join(lines) + "\n"


def parse_sc_weights(text: str) -> ScWeights:
    w = ScWeights.published()
    sizes = {"w_elt": 7, "w_set": 7, "w_sep": 4, "w_right": 4}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "eps" and len(parts) == 2:
            w = w.replaced(eps=Fraction(parts[1]))
        elif parts[0] in sizes and len(parts) == 3:
            d = int(parts[1])
            if not 0 <= d < sizes[parts[0]]:
                raise ValueError(f"degree {d} out of range for {parts[0]}")
            w = w.with_entry(parts[0], d, Fraction(parts[2]))
        else:
            raise ValueError(f"bad weights line {line!r}")
    return w


def format_sc_weights(w: ScWeights) -> str:
    lines = []
    for family in ("w_elt", "w_set", "w_sep", "w_right"):
        for d, val in enumerate(getattr(w, family)):
            lines.append(f"{family} {d} {val}")
    lines.append(f"eps {w.eps}")
    return "\n".join(lines) + "\n"
