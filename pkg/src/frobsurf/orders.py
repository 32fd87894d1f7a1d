"""Order sequences of space curves: P-orders, generic and Frobenius orders,
degeneracy detection, and classification against a host surface.

"Generic" quantities are realized by sampling smooth points over growing
extensions with a seeded PRNG; points with special behavior are finitely many,
so the componentwise minimum over samples stabilizes at the generic value.
Nonzero verdicts on twisted Wronskians are certain; zero verdicts are only as
good as the truncation and are recorded as probabilistic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import (
    AllCandidatesVanish,
    DegenerateCurve,
    HypothesisNotMet,
    InconsistentProfile,
    NoSmoothPointFound,
    TooFewPoints,
    TruncationTooSmall,
)
from . import linalg
from .fields import embed
from .geometry import (
    DEFAULT_POINT_BUDGET,
    CurveSpec,
    ProjectivePoint,
    Surface,
    enumerate_points,
    is_smooth_point,
)
from .localgeom import (
    LocalChart,
    TruncatedSeries,
    evaluate_on_chart,
    hasse_derivative,
    parametrize_curve,
)
from .poly import NVARS, Poly, evaluate

DEFAULT_TRIALS = 5
DEFAULT_MAX_EXT = 6


# ---------------------------------------------------------------------------
# Per-point orders
# ---------------------------------------------------------------------------

def point_orders(chart: LocalChart, delta: int | None = None):
    """The four P-orders at the chart point: row indices where the rank of the
    series coefficient matrix jumps."""
    T = chart.truncation
    if T < 3:
        raise TruncationTooSmall("need truncation >= 3 to see four orders")
    pivots = []          # reduced independent rows
    pivot_cols = []
    jumps = []
    for m in range(T + 1):
        row = [s.coeffs[m] for s in chart.series]
        for prow, pcol in zip(pivots, pivot_cols):
            c = row[pcol]
            if not c.is_zero():
                row = [a - c * b for a, b in zip(row, prow)]
        col = next((j for j in range(NVARS) if not row[j].is_zero()), None)
        if col is None:
            continue
        inv = row[col].inverse()
        pivots.append([a * inv for a in row])
        pivot_cols.append(col)
        jumps.append(m)
        if len(jumps) == 4:
            return tuple(jumps)
    if delta is not None and T >= delta:
        raise DegenerateCurve(
            f"only {len(jumps)} independent orders up to t^{T} >= degree {delta}: "
            "the curve spans no more than a plane")
    raise TruncationTooSmall(
        f"only {len(jumps)} rank jumps up to t^{T}; raise the truncation or pass the degree")


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@dataclass
class SampleEvidence:
    point: str
    ext_degree: int
    j_orders: tuple | None = None

    def to_json(self):
        return {"point": self.point, "ext_degree": self.ext_degree,
                "j_orders": list(self.j_orders) if self.j_orders else None}


def _curve_truncation(C: CurveSpec, q: int) -> int:
    delta = C.delta if C.delta else 8
    return max(16, 2 * q + 4 * delta + 8)


def sample_smooth_points(C: CurveSpec, trials: int, max_ext: int, seed: int,
                         budget: int = DEFAULT_POINT_BUDGET):
    """Deterministic seeded sample of smooth points over growing extensions.

    Returns (samples, all_points_seen) where samples is a list of
    (point, ext_degree) pairs.
    """
    q = C.field.order
    rng = random.Random(seed)
    samples = []
    seen_keys = set()
    everything = []
    for k in range(1, max_ext + 1):
        if q ** (3 * k) > budget:
            break
        pts = enumerate_points(C.polys, k, budget=budget)
        everything.append((k, pts))
        fresh = [P for P in pts if repr(P) not in seen_keys]
        rng.shuffle(fresh)
        for P in fresh:
            try:
                smooth = is_smooth_point(list(C.polys), P, 2)
            except Exception:
                smooth = False
            if not smooth:
                continue
            seen_keys.add(repr(P))
            samples.append((P, k))
            if len(samples) >= trials:
                return samples, everything
    return samples, everything


# ---------------------------------------------------------------------------
# Generic and Frobenius orders
# ---------------------------------------------------------------------------

def generic_orders(C: CurveSpec, trials: int = DEFAULT_TRIALS,
                   max_ext: int = DEFAULT_MAX_EXT, seed: int = 0,
                   budget: int = DEFAULT_POINT_BUDGET):
    """(eps0..eps3) as the componentwise minimum over sampled smooth points,
    with the per-point evidence."""
    samples, _ = sample_smooth_points(C, trials, max_ext, seed, budget)
    if not samples:
        raise NoSmoothPointFound("no smooth point over the budgeted extensions")
    q = C.field.order
    T = _curve_truncation(C, q)
    eps = None
    evidence = []
    for P, k in samples:
        chart = parametrize_curve(C, P, T)
        js = point_orders(chart, delta=C.delta)
        evidence.append(SampleEvidence(repr(P), k, js))
        eps = js if eps is None else tuple(min(a, b) for a, b in zip(eps, js))
    return eps, evidence


_WRONSKIAN_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _series_det4(rows):
    """Determinant of a 4x4 matrix of TruncatedSeries via Laplace expansion
    along the first two rows."""
    desc = rows[0][0].desc
    T = rows[0][0].truncation
    total = TruncatedSeries.constant(desc, 0, T)
    sign_flip = desc.element(-1)
    for i, j in _WRONSKIAN_PAIRS:
        comp = [c for c in range(4) if c not in (i, j)]
        top = rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i]
        bot = rows[2][comp[0]] * rows[3][comp[1]] - rows[2][comp[1]] * rows[3][comp[0]]
        term = top * bot
        if (i + j) % 2 == 0:
            term = term.scale(sign_flip)
        total = total + term
    return total


def twisted_wronskian(chart: LocalChart, nu1: int, nu2: int) -> TruncatedSeries:
    """det of rows (x^q, x, D^(nu1)x, D^(nu2)x) as a series in t."""
    rows = [
        list(chart.twisted),
        list(chart.series),
        [hasse_derivative(s, nu1) for s in chart.series],
        [hasse_derivative(s, nu2) for s in chart.series],
    ]
    T = min(min(s.truncation for s in r) for r in rows)
    rows = [[s.truncate(T) for s in r] for r in rows]
    return _series_det4(rows)


def frobenius_orders(C: CurveSpec, trials: int = DEFAULT_TRIALS,
                     max_ext: int = DEFAULT_MAX_EXT, seed: int = 0,
                     budget: int = DEFAULT_POINT_BUDGET,
                     eps: tuple | None = None, evidence=None):
    """Lexicographically minimal (nu1, nu2) in {eps1, eps2, eps3} making the
    twisted Wronskian a nonzero function on some sampled chart."""
    if eps is None:
        eps, evidence = generic_orders(C, trials, max_ext, seed, budget)
    samples, _ = sample_smooth_points(C, trials, max_ext, seed, budget)
    if not samples:
        raise NoSmoothPointFound("no smooth point over the budgeted extensions")
    q = C.field.order
    T = _curve_truncation(C, q)
    charts = [parametrize_curve(C, P, T) for P, _ in samples]
    notes = []
    candidates = [(eps[1], eps[2]), (eps[1], eps[3]), (eps[2], eps[3])]
    for nu1, nu2 in candidates:
        for chart in charts:
            det = twisted_wronskian(chart, nu1, nu2)
            if not det.is_zero_to_truncation():
                return (nu1, nu2), notes
        notes.append(f"candidate ({nu1},{nu2}) vanished to t^{T} on {len(charts)} charts "
                     "(zero verdict is probabilistic)")
    raise AllCandidatesVanish(
        f"all twisted Wronskians vanished to t^{T}: truncation or sampling failure")


def q_deleted_order(eps, nu):
    """(index I, eps_I): the generic order missing from the Frobenius pair."""
    upper = list(eps[1:])
    if not set(nu) <= set(upper):
        raise InconsistentProfile(f"Frobenius orders {nu} not among {upper}")
    missing = [v for v in upper if v not in nu]
    if len(missing) != 1:
        raise InconsistentProfile(f"expected one deleted order, got {missing}")
    return upper.index(missing[0]) + 1, missing[0]


# ---------------------------------------------------------------------------
# Degeneracy
# ---------------------------------------------------------------------------

def _prime_basis_rows(points, base):
    """GF(p)-linear system for a plane over GF(q) through all the points.

    The plane coefficients are 4 unknowns over GF(q) = 4e unknowns over GF(p);
    each point over GF(q^m) contributes e*m prime-field conditions.
    """
    p = base.p
    e = base.e
    rows = []
    basis = []
    for s in range(e):
        coeffs = [0] * e
        coeffs[s] = 1
        basis.append(base.element(coeffs))
    for P in points:
        desc = P.desc
        emb_basis = [embed(b, desc) for b in basis]
        for slot in range(desc.e):
            row = []
            for i in range(NVARS):
                for s in range(e):
                    v = emb_basis[s] * P.coords[i]
                    row.append(v.coeffs[slot] % p)
            rows.append(row)
    return rows


def _nullspace_mod_p(rows, p):
    if not rows:
        return []
    ncols = len(rows[0])
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for rr, pc in enumerate(pivots):
            vec[pc] = (-m[rr][fc]) % p
        basis.append(vec)
    return basis


def is_degenerate(C: CurveSpec, trials: int = 8, max_ext: int = DEFAULT_MAX_EXT,
                  seed: int = 0, budget: int = DEFAULT_POINT_BUDGET):
    """(flag, witness): witness is the plane (as a Poly) when degenerate, or a
    spanning point list / note when not."""
    base = C.field
    q = base.order
    points = []
    keys = set()
    for k in range(1, max_ext + 1):
        if q ** (3 * k) > budget:
            break
        for P in enumerate_points(C.polys, k, budget=budget):
            if repr(P) not in keys:
                keys.add(repr(P))
                points.append(P)
        if len(points) >= max(8, trials):
            break
    if len(points) < 4:
        raise TooFewPoints(f"only {len(points)} points over the budgeted extensions")
    rows = _prime_basis_rows(points, base)
    kernel = _nullspace_mod_p(rows, base.p)
    if not kernel:
        # non-degenerate: exhibit 4 spanning points over a common field if possible
        by_k = {}
        for P in points:
            by_k.setdefault(P.k, []).append(P)
        for k in sorted(by_k, reverse=True):
            pts = by_k[k]
            if len(pts) >= 4:
                for i in range(len(pts) - 3):
                    quad = pts[i:i + 4]
                    if linalg.rank([list(P.coords) for P in quad]) == 4:
                        return False, quad
        return False, "no rational plane through the sampled points"
    # assemble the GF(q) plane from GF(p) coordinates
    e = base.e
    vec = kernel[0]
    coeffs = []
    for i in range(NVARS):
        coeffs.append(base.element(tuple(vec[i * e:(i + 1) * e])))
    terms = {}
    for i, c in enumerate(coeffs):
        if not c.is_zero():
            exps = [0] * NVARS
            exps[i] = 1
            terms[tuple(exps)] = c
    plane = Poly(base, terms)
    # chart evidence: the plane must compose to the zero series somewhere
    try:
        samples, _ = sample_smooth_points(C, 2, max_ext, seed, budget)
    except Exception:
        samples = []
    T = _curve_truncation(C, q)
    for P, _k in samples:
        chart = parametrize_curve(C, P, T)
        if not evaluate_on_chart(plane, chart).is_zero_to_truncation():
            return False, "plane through samples fails on a chart"
    return True, plane


def frobenius_on_tangent_line(chart: LocalChart) -> bool:
    """True when all 3x3 minors of rows (x^q, x, D^(1)x) vanish to truncation:
    the Frobenius image sits on the tangent line along this branch."""
    rows = [
        list(chart.twisted),
        list(chart.series),
        [hasse_derivative(s, 1) for s in chart.series],
    ]
    T = min(min(s.truncation for s in r) for r in rows)
    rows = [[s.truncate(T) for s in r] for r in rows]
    for c in range(4):
        cols = [j for j in range(4) if j != c]
        a, b, d = rows[0], rows[1], rows[2]
        det = (a[cols[0]] * (b[cols[1]] * d[cols[2]] - b[cols[2]] * d[cols[1]])
               - a[cols[1]] * (b[cols[0]] * d[cols[2]] - b[cols[2]] * d[cols[0]])
               + a[cols[2]] * (b[cols[0]] * d[cols[1]] - b[cols[1]] * d[cols[0]]))
        if not det.is_zero_to_truncation():
            return False
    return True


# ---------------------------------------------------------------------------
# Order-sequence validation (the five admissible families)
# ---------------------------------------------------------------------------

def _power_exponent(x: int, p: int):
    if x < p:
        return None
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e if x == 1 else None


def validate_order_sequence(eps, p: int) -> bool:
    """Membership in the admissible families:
    (0,1,2,3) p>3; (0,1,2,p^e) p>2; (0,1,p^e,2p^e); (0,1,p^e,p^e') p>2;
    (0,1,p^e,p^e+1) with p^e > 2."""
    eps = tuple(eps)
    if len(eps) != 4 or eps[0] != 0 or eps[1] != 1:
        return False
    if not (eps[0] < eps[1] < eps[2] < eps[3]):
        return False
    e2, e3 = eps[2], eps[3]
    if eps == (0, 1, 2, 3) and p > 3:
        return True
    if p > 2 and e2 == 2 and _power_exponent(e3, p) is not None:
        return True
    a = _power_exponent(e2, p)
    if a is not None and e3 == 2 * e2:
        return True
    if p > 2 and a is not None and _power_exponent(e3, p) is not None:
        return True
    if a is not None and e2 > 2 and e3 == e2 + 1:
        return True
    return False


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass
class OrderProfile:
    eps: tuple | None
    nu: tuple | None
    deleted_index: int | None
    degenerate: bool
    classical: bool | None
    frobenius_classical: bool | None
    evidence: list
    seed: int
    notes: list = dc_field(default_factory=list)
    alerts: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "eps": list(self.eps) if self.eps else None,
            "nu": list(self.nu) if self.nu else None,
            "deleted_index": self.deleted_index,
            "degenerate": self.degenerate,
            "classical": self.classical,
            "frobenius_classical": self.frobenius_classical,
            "evidence": [ev.to_json() for ev in self.evidence],
            "seed": self.seed,
            "notes": list(self.notes),
            "alerts": list(self.alerts),
        }


def profile_curve(C: CurveSpec, trials: int = DEFAULT_TRIALS,
                  max_ext: int = DEFAULT_MAX_EXT, seed: int = 0,
                  budget: int = DEFAULT_POINT_BUDGET) -> OrderProfile:
    """Full order profile of a space curve (no surface involved)."""
    p = C.field.p
    q = C.field.order
    degen, witness = is_degenerate(C, max(trials, 5), max_ext, seed, budget)
    if degen:
        return OrderProfile(eps=None, nu=None, deleted_index=None, degenerate=True,
                            classical=None, frobenius_classical=None, evidence=[],
                            seed=seed, notes=[f"contained in the plane {witness!r}"])
    eps, evidence = generic_orders(C, trials, max_ext, seed, budget)
    nu, notes = frobenius_orders(C, trials, max_ext, seed, budget, eps=eps, evidence=evidence)
    deleted_index, _ = q_deleted_order(eps, nu)
    profile = OrderProfile(
        eps=eps, nu=nu, deleted_index=deleted_index, degenerate=False,
        classical=eps == (0, 1, 2, 3), frobenius_classical=nu == (1, 2),
        evidence=evidence, seed=seed, notes=notes)
    delta = C.delta
    if not validate_order_sequence(eps, p):
        profile.alerts.append(f"order sequence {eps} outside the admissible families for p={p}")
    if nu[0] > 1 and delta is not None and delta <= q:
        profile.alerts.append(
            f"non-degenerate curve with nu1={nu[0]}>1 and degree {delta} <= q={q}: "
            "should be a plane curve")
        a = _power_exponent(nu[0], p)
        ok_shape = a is not None and (nu[1] == 2 * nu[0] or _power_exponent(nu[1], p) is not None)
        if not ok_shape:
            profile.alerts.append(f"Frobenius orders {nu} have an impossible shape for degree <= q")
    if p > 3 and not profile.frobenius_classical and profile.classical:
        profile.alerts.append(
            f"Frobenius non-classical but classical in characteristic {p} > 3")
    return profile


def classify(C: CurveSpec, S: Surface, trials: int = DEFAULT_TRIALS,
             max_ext: int = DEFAULT_MAX_EXT, seed: int = 0,
             budget: int = DEFAULT_POINT_BUDGET, check_containment: bool = True):
    """OrderProfile of C plus its predicted and observed position w.r.t. the
    tangency curve of S."""
    for P in enumerate_points(C.polys, 1, budget=budget)[:24]:
        if not evaluate(S.f, P.coords).is_zero():
            raise HypothesisNotMet("curve_on_surface", f"{P} not on the surface")
    profile = profile_curve(C, trials, max_ext, seed, budget)
    report = {"profile": profile, "prediction": None, "verdict": None,
              "discrepancy": False}
    if profile.degenerate:
        if C.delta == 1:
            # rational lines on the surface are always components
            report["prediction"] = "contained"
        else:
            report["prediction"] = "degenerate: out of scope for the space bound"
            check_containment = False
    elif profile.nu[0] > 1:
        report["prediction"] = "contained"
    elif not profile.frobenius_classical:
        report["prediction"] = "not-contained"
    else:
        report["prediction"] = "conjecture-dependent"
    if check_containment:
        from .frobsurface import curve_in_phi, is_frobenius_classical
        if is_frobenius_classical(S):
            verdict = curve_in_phi(S, C, budget=budget)
            report["verdict"] = verdict.state
            observed = {"Contained": "contained", "NotContained": "not-contained"}.get(verdict.state)
            if observed is not None and report["prediction"] in ("contained", "not-contained") \
                    and observed != report["prediction"]:
                report["discrepancy"] = True
                profile.alerts.append(
                    f"predicted {report['prediction']} but containment verdict is {verdict.state}")
    return report
