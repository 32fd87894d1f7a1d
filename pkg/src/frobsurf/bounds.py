"""Closed-form point-count and genus bounds, all in exact integer/rational
arithmetic, plus comparison reports and CSV emission."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt

from .errors import BadDegree, NonIntegerResult


def main_bound(delta: int, d: int, q: int):
    """delta*(d+q-1)/2 as an exact rational together with its floor."""
    if d <= 1:
        raise BadDegree(f"surface degree must be > 1, got {d}")
    if delta < 1:
        raise BadDegree(f"curve degree must be >= 1, got {delta}")
    exact = Fraction(delta * (d + q - 1), 2)
    return exact, exact.numerator // exact.denominator


def homma_bound(delta: int, q: int) -> int:
    """q*(delta-1) + 1."""
    if delta < 1:
        raise BadDegree(f"curve degree must be >= 1, got {delta}")
    return q * (delta - 1) + 1


def stohr_voloch_bound(delta: int, q: int, g: int, nu1: int = 1, nu2: int = 2) -> int:
    """floor((2*(nu1+nu2)*(g-1) + delta*(q+3)) / 3)."""
    if g < 0 or not 1 <= nu1 < nu2:
        raise BadDegree("need g >= 0 and 1 <= nu1 < nu2")
    val = Fraction(2 * (nu1 + nu2) * (g - 1) + delta * (q + 3), 3)
    return val.numerator // val.denominator


def stohr_voloch_plotted_variant(delta: int, q: int, g: int) -> Fraction:
    """4*(g-1) + delta*(q+3)/3: the plotted expression, which doubles the
    genus term of the classical formula at nu1+nu2 = 3.  Kept for comparison
    reports only."""
    return Fraction(4 * (g - 1)) + Fraction(delta * (q + 3), 3)


def serre_weil_bound(g: int, q: int) -> int:
    """q + 1 + g*floor(2*sqrt(q)), with exact integer square root."""
    if g < 0:
        raise BadDegree("genus must be >= 0")
    return q + 1 + g * isqrt(4 * q)


def _harris_pi(delta: int, d: int) -> Fraction:
    eps = (-delta) % d
    return (Fraction(delta, 2) * (Fraction(delta, d) + d - 4) + 1
            - Fraction(eps, 2) * (d - eps - 1 + Fraction(eps, d)))


def harris_genus_bound(delta: int, d: int):
    """(branched, unbranched) maximal-genus values for a degree-delta curve on
    a degree-d surface.

    The unbranched value is pi(delta, d); the branched one replaces d by
    floor((delta-1)/d) + 1 when delta <= d*(d-1).  Both are returned because
    they disagree for small delta; callers choose per context.
    """
    if d < 2 or delta < 1:
        raise BadDegree("need d >= 2 and delta >= 1")
    unbranched = _harris_pi(delta, d)
    if delta > d * (d - 1):
        branched = unbranched
    else:
        branched = _harris_pi(delta, (delta - 1) // d + 1)
    out = []
    for name, val in (("branched", branched), ("unbranched", unbranched)):
        if val.denominator != 1:
            raise NonIntegerResult(f"{name} genus formula gave {val} for (delta={delta}, d={d})")
        out.append(val.numerator)
    return tuple(out)


def weierstrass_divisor_degree(eps, g: int, delta: int) -> int:
    """(eps1+eps2+eps3)*(2g-2) + 4*delta."""
    if g < 0:
        raise BadDegree("genus must be >= 0")
    e1, e2, e3 = eps[1], eps[2], eps[3]
    return (e1 + e2 + e3) * (2 * g - 2) + 4 * delta


@dataclass
class BoundReport:
    q: int
    d: int
    delta: int
    genus_bound: int
    genus_bound_branched: int
    nu1: int
    nu2: int
    main_exact: Fraction
    main_floor: int
    homma: int
    stohr_voloch: int
    serre_weil: int
    winners: list
    notes: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "q": self.q, "d": self.d, "delta": self.delta,
            "genus_bound": self.genus_bound,
            "genus_bound_branched": self.genus_bound_branched,
            "nu1": self.nu1, "nu2": self.nu2,
            "main_exact": f"{self.main_exact.numerator}/{self.main_exact.denominator}",
            "main_floor": self.main_floor,
            "homma": self.homma,
            "stohr_voloch": self.stohr_voloch,
            "serre_weil": self.serre_weil,
            "winners": list(self.winners),
            "notes": list(self.notes),
        }


_WINNER_ORDER = ["main", "homma", "sv", "serre_weil"]


def compare(delta: int, d: int, q: int, g: int | None = None, nu=None) -> BoundReport:
    """All bounds at one (delta, d, q); genus defaults to the unbranched
    Harris value and (nu1, nu2) to (1, 2)."""
    branched, unbranched = harris_genus_bound(delta, d)
    if g is None:
        g = unbranched
    nu1, nu2 = nu if nu is not None else (1, 2)
    exact, floor = main_bound(delta, d, q)
    values = {
        "main": floor,
        "homma": homma_bound(delta, q),
        "sv": stohr_voloch_bound(delta, q, g, nu1, nu2),
        "serre_weil": serre_weil_bound(g, q),
    }
    best = min(values.values())
    winners = [name for name in _WINNER_ORDER if values[name] == best]
    notes = []
    if exact.denominator != 1:
        notes.append(f"exact bound {exact} is not an integer: floor is {floor}, "
                     f"a rounded-up reading gives {floor + 1}")
    if branched != unbranched:
        notes.append(f"branched genus formula gives {branched}, unbranched {unbranched}; "
                     "the report uses the unbranched value")
    return BoundReport(q=q, d=d, delta=delta, genus_bound=g,
                       genus_bound_branched=branched, nu1=nu1, nu2=nu2,
                       main_exact=exact, main_floor=floor,
                       homma=values["homma"], stohr_voloch=values["sv"],
                       serre_weil=values["serre_weil"], winners=winners,
                       notes=notes)


CSV_HEADER = "delta,main,main_floor,homma,sv,serre_weil,winner"


def figure_csv(q: int, d: int, deltas=None) -> str:
    """Bound comparison rows for delta = 1..q (exact rationals as a/b)."""
    if deltas is None:
        deltas = range(1, q + 1)
    lines = [CSV_HEADER]
    for delta in deltas:
        r = compare(delta, d, q)
        main = f"{r.main_exact.numerator}/{r.main_exact.denominator}"
        lines.append(f"{delta},{main},{r.main_floor},{r.homma},"
                     f"{r.stohr_voloch},{r.serre_weil},{'+'.join(r.winners)}")
    return "\n".join(lines) + "\n"
