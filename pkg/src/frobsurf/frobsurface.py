"""Frobenius classicality of surfaces, the tangency curve {f = h = 0}, curve
containment with certificates, and verification of the point-count bound."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    FrobeniusNonClassical,
    HypothesisNotMet,
    IrreducibilityNotAsserted,
)
from .geometry import (
    DEFAULT_POINT_BUDGET,
    CurveSpec,
    Surface,
    count_points,
    enumerate_points,
    estimate_degree,
    lines_contained_in,
)
from .localgeom import default_truncation, evaluate_on_chart, parametrize_curve
from .poly import build_h, divides, evaluate


def is_frobenius_classical(S: Surface) -> bool:
    """True iff the tangency locus is a curve, decided by f not dividing h.

    The divisibility criterion needs irreducibility of f, which this tool
    cannot decide in general; the caller must assert it.
    """
    if not S.irreducible_asserted:
        raise IrreducibilityNotAsserted(
            "the f | h criterion is only valid for irreducible surfaces; "
            "construct the Surface with irreducible_asserted=True")
    h = build_h(S.f, S.field.order)
    if h.is_zero():
        warnings.warn("h vanished identically: f is a p-th power, so the "
                      "irreducibility assertion is wrong", stacklevel=2)
        return False
    return not divides(S.f, h)


def phi_degree(S: Surface) -> int:
    return S.d * (S.d + S.field.order - 1)


def phi_curve(S: Surface) -> CurveSpec:
    """The curve {f = h = 0} when S is Frobenius classical."""
    if not is_frobenius_classical(S):
        raise FrobeniusNonClassical("the tangency locus is the whole surface")
    h = build_h(S.f, S.field.order)
    return CurveSpec((S.f, h), delta=phi_degree(S),
                     irreducible_asserted=False, complete_asserted=True)


@dataclass
class ContainmentVerdict:
    state: str                      # Contained | NotContained | Unknown
    certificate: object = None
    assertions_used: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    def to_json(self):
        cert = self.certificate
        if cert is not None and not isinstance(cert, (str, int, dict, list)):
            cert = repr(cert)
        return {"state": self.state, "certificate": cert,
                "assertions_used": list(self.assertions_used),
                "notes": list(self.notes)}


def curve_in_phi(S: Surface, C: CurveSpec, budget: int = DEFAULT_POINT_BUDGET,
                 max_ext: int = 8, chart_truncation: int | None = None) -> ContainmentVerdict:
    """Containment of C in the tangency curve of S.

    NotContained is certified by a single point of C with h != 0.  Contained
    is certified by more distinct points of C on {h = 0} than a proper
    intersection allows (valid under the irreducibility and completeness
    assertions).  Otherwise Unknown, with series evidence.
    """
    q = S.field.order
    h = build_h(S.f, q)
    # sanity: C lies on S at its rational points
    sample = enumerate_points(C.polys, 1, budget=budget)
    for P in sample[:32]:
        if not evaluate(S.f, P.coords).is_zero():
            raise HypothesisNotMet("curve_on_surface", f"{P} is not on the surface")
    if set(C.polys) == {S.f, h}:
        return ContainmentVerdict("Contained", certificate="identical defining system")
    delta = C.delta if C.delta is not None else estimate_degree(C, budget=budget)
    threshold = delta * (S.d + q - 1)
    best_count = 0
    for k in range(1, max_ext + 1):
        if q ** (3 * k) > budget:
            break
        pts = enumerate_points(C.polys, k, budget=budget) if k > 1 else sample
        for P in pts:
            if not evaluate(h, P.coords).is_zero():
                return ContainmentVerdict("NotContained", certificate=P)
        best_count = max(best_count, len(pts))
        if best_count > threshold:
            if C.irreducible_asserted and C.complete_asserted:
                return ContainmentVerdict(
                    "Contained",
                    certificate={"points_on_h": best_count, "threshold": threshold,
                                 "extension": k},
                    assertions_used=["irreducible", "complete"])
            verdict = ContainmentVerdict(
                "Unknown",
                certificate={"points_on_h": best_count, "threshold": threshold},
                notes=["point count exceeds the Bezout threshold but the curve "
                       "is not asserted irreducible and complete"])
            return verdict
    # series evidence on a few charts
    notes = [f"all {best_count} points found lie on h = 0 "
             f"(Bezout threshold {threshold} not reached)"]
    T = chart_truncation if chart_truncation is not None \
        else default_truncation(q, delta, S.d)
    from .orders import sample_smooth_points
    try:
        samples, _ = sample_smooth_points(C, 2, max_ext, 0, budget)
        for P, _k in samples:
            chart = parametrize_curve(C, P, T)
            s = evaluate_on_chart(h, chart)
            if s.is_zero_to_truncation():
                notes.append(f"h vanishes to t^{T} on the chart at {P}")
            else:
                # analytically decisive, but a NotContained verdict is reserved
                # for an explicit witness point with h != 0
                notes.append(f"h has finite order {s.order()} on the chart at {P}: "
                             "containment excluded analytically, no witness point "
                             "within budget")
    except Exception as exc:  # chart evidence is best-effort
        notes.append(f"no chart evidence ({type(exc).__name__})")
    return ContainmentVerdict("Unknown", certificate=None, notes=notes)


@dataclass
class BoundCheck:
    q: int
    d: int
    delta: int
    points: int
    bound_exact: Fraction
    bound_floor: int
    holds: bool
    tight: bool
    assertions_used: list
    witness: object
    alerts: list = dc_field(default_factory=list)

    def to_json(self):
        return {"q": self.q, "d": self.d, "delta": self.delta,
                "points": self.points,
                "bound_exact": f"{self.bound_exact.numerator}/{self.bound_exact.denominator}",
                "bound_floor": self.bound_floor, "holds": self.holds,
                "tight": self.tight, "assertions_used": list(self.assertions_used),
                "witness": repr(self.witness), "alerts": list(self.alerts)}


def verify_bound(S: Surface, C: CurveSpec, budget: int = DEFAULT_POINT_BUDGET,
                 verdict: ContainmentVerdict | None = None) -> BoundCheck:
    """Compare #C(F_q) against floor(delta*(d+q-1)/2) under the hypotheses:
    S Frobenius classical of degree > 1, C irreducible, C not contained in
    the tangency curve."""
    if S.d <= 1:
        raise HypothesisNotMet("surface_degree", "need degree d > 1")
    if not is_frobenius_classical(S):
        raise HypothesisNotMet("frobenius_classical", "the surface is Frobenius non-classical")
    if not C.irreducible_asserted:
        raise HypothesisNotMet("curve_irreducible", "assert irreducibility of the curve")
    if verdict is None:
        verdict = curve_in_phi(S, C, budget=budget)
    if verdict.state != "NotContained":
        raise HypothesisNotMet("not_contained",
                               f"containment verdict is {verdict.state}")
    q = S.field.order
    delta = C.delta if C.delta is not None else estimate_degree(C, budget=budget)
    n = count_points(C.polys, 1, budget=budget)
    exact = Fraction(delta * (S.d + q - 1), 2)
    floor = exact.numerator // exact.denominator
    check = BoundCheck(q=q, d=S.d, delta=delta, points=n, bound_exact=exact,
                       bound_floor=floor, holds=n <= floor, tight=n == floor,
                       assertions_used=["surface irreducible", "curve irreducible"]
                       + (["curve complete"] if C.complete_asserted else []),
                       witness=verdict.certificate)
    if not check.holds:
        check.alerts.append(
            "bound violated on asserted-irreducible input: manual review required")
    return check


@dataclass
class ApplicabilityDecision:
    state: str       # Applicable | ApplicableUnderConjecture | NotApplicable
    rule: str
    verdict: ContainmentVerdict | None = None

    def to_json(self):
        return {"state": self.state, "rule": self.rule,
                "verdict": self.verdict.to_json() if self.verdict else None}


def bound_applicability(S: Surface, C: CurveSpec, profile,
                        assume_conjecture: bool = False,
                        budget: int = DEFAULT_POINT_BUDGET) -> ApplicabilityDecision:
    """Decide whether the main bound governs C on S, given an order profile."""
    q = S.field.order
    delta = C.delta if C.delta is not None else estimate_degree(C, budget=budget)
    if profile.degenerate:
        return ApplicabilityDecision("NotApplicable", "degenerate (plane) curve: out of scope")
    nu1 = profile.nu[0]
    if nu1 > 1:
        return ApplicabilityDecision(
            "NotApplicable", f"nu1 = {nu1} > 1: the curve is a component of the tangency curve")
    if not profile.frobenius_classical:
        return ApplicabilityDecision(
            "Applicable", "Frobenius non-classical with nu1 = 1: never a component")
    verdict = curve_in_phi(S, C, budget=budget)
    if verdict.state == "NotContained":
        return ApplicabilityDecision("Applicable", "direct witness: not a component", verdict)
    if verdict.state == "Contained":
        return ApplicabilityDecision("NotApplicable", "certified component of the tangency curve", verdict)
    if 2 < delta <= q and assume_conjecture:
        return ApplicabilityDecision(
            "ApplicableUnderConjecture",
            f"Frobenius classical of degree {delta} <= q: not a component if the "
            "low-degree-component conjecture holds", verdict)
    return ApplicabilityDecision("NotApplicable",
                                 "Frobenius classical with undecided containment", verdict)


@dataclass
class SurfaceReport:
    q: int
    d: int
    frobenius_classical: bool
    phi_degree: int | None
    point_counts: dict
    contained_lines: list
    residual_degree: int | None
    assertions: list
    notes: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "q": self.q, "d": self.d,
            "frobenius_classical": self.frobenius_classical,
            "phi_degree": self.phi_degree,
            "point_counts": {str(k): v for k, v in self.point_counts.items()},
            "contained_lines": [L.key() for L in self.contained_lines],
            "residual_degree": self.residual_degree,
            "assertions": list(self.assertions),
            "notes": list(self.notes),
        }


def analyze_surface(S: Surface, ext_budget: int = 2,
                    budget: int = DEFAULT_POINT_BUDGET,
                    extract_lines: bool = True) -> SurfaceReport:
    """Classicality, tangency-curve point counts, line extraction, residual degree."""
    q = S.field.order
    fc = is_frobenius_classical(S)
    h = build_h(S.f, q)
    system = [S.f] if h.is_zero() else [S.f, h]
    counts = {}
    for k in range(1, ext_budget + 1):
        if q ** (3 * k) > budget:
            break
        counts[k] = count_points(system, k, budget=budget)
    lines = []
    residual = None
    notes = []
    if fc and extract_lines:
        lines = lines_contained_in(system, S.field)
        residual = phi_degree(S) - len(lines)
        notes.append("line multiplicities are not computed; each line counted once")
    return SurfaceReport(
        q=q, d=S.d, frobenius_classical=fc,
        phi_degree=phi_degree(S) if fc else None,
        point_counts=counts, contained_lines=lines, residual_degree=residual,
        assertions=["irreducible (asserted)"] if S.irreducible_asserted else [],
        notes=notes)
