"""Truncated power series, Hasse derivatives, and local charts of space curves.

A chart at a smooth point P solves the defining system degree by degree in a
local parameter t = (transverse affine coordinate) - (its value at P).  The
Jacobian has rank 2 at a smooth point of a space curve, so each coefficient
is determined by one 2x2 linear solve.  The Frobenius twist x_i(t)^q is kept
alongside the series, computed in the original coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import (
    ChartInconsistent,
    DegenerateCurve,
    FieldMismatch,
    NoTransverseCoordinate,
    RankDeficient,
    SingularPoint,
    TruncationTooSmall,
)
from . import linalg
from .fields import FieldDesc, embed, is_extension
from .geometry import CurveSpec, ProjectivePoint, jacobian_at
from .poly import NVARS, Poly


class TruncatedSeries:
    """Coefficients c_0..c_T of a power series in t, exact through t^T."""

    __slots__ = ("desc", "coeffs")

    def __init__(self, desc: FieldDesc, coeffs):
        self.desc = desc
        self.coeffs = list(coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, desc: FieldDesc, value, T: int) -> "TruncatedSeries":
        c = desc.element(value)
        return cls(desc, [c] + [desc.zero()] * T)

    @classmethod
    def parameter(cls, desc: FieldDesc, T: int, shift=0) -> "TruncatedSeries":
        """shift + t."""
        coeffs = [desc.element(shift), desc.one()] + [desc.zero()] * (T - 1)
        return cls(desc, coeffs[: T + 1])

    def _align(self, other):
        if other.desc is not self.desc:
            raise FieldMismatch("series over different fields")
        T = min(self.truncation, other.truncation)
        return T

    def __add__(self, other):
        T = self._align(other)
        return TruncatedSeries(self.desc,
                               [a + b for a, b in zip(self.coeffs[:T + 1], other.coeffs[:T + 1])])

    def __sub__(self, other):
        T = self._align(other)
        return TruncatedSeries(self.desc,
                               [a - b for a, b in zip(self.coeffs[:T + 1], other.coeffs[:T + 1])])

    def __neg__(self):
        return TruncatedSeries(self.desc, [-a for a in self.coeffs])

    def __mul__(self, other):
        T = self._align(other)
        zero = self.desc.zero()
        out = [zero] * (T + 1)
        a, b = self.coeffs, other.coeffs
        for i in range(min(len(a), T + 1)):
            ai = a[i]
            if ai.is_zero():
                continue
            for j in range(min(len(b), T + 1 - i)):
                bj = b[j]
                if not bj.is_zero():
                    out[i + j] = out[i + j] + ai * bj
        return TruncatedSeries(self.desc, out)

    def scale(self, c) -> "TruncatedSeries":
        c = self.desc.element(c)
        return TruncatedSeries(self.desc, [a * c for a in self.coeffs])

    def truncate(self, T: int) -> "TruncatedSeries":
        if T >= self.truncation:
            return self
        return TruncatedSeries(self.desc, self.coeffs[: T + 1])

    def power(self, n: int, T: int | None = None) -> "TruncatedSeries":
        if T is None:
            T = self.truncation
        result = TruncatedSeries.constant(self.desc, 1, T)
        base = self.truncate(T)
        while n > 0:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def order(self):
        """Exact order of vanishing, or None if zero through t^T."""
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return None

    def is_zero_to_truncation(self) -> bool:
        return self.order() is None

    def at_zero(self):
        return self.coeffs[0]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.desc is other.desc and self.coeffs == other.coeffs

    def __repr__(self):
        shown = ", ".join(c.literal() for c in self.coeffs[:8])
        tail = ", ..." if len(self.coeffs) > 8 else ""
        return f"Series[{shown}{tail}; T={self.truncation}]"


def hasse_derivative(s: TruncatedSeries, i: int) -> TruncatedSeries:
    """D^(i): coefficient of t^m becomes C(m+i, i) * c_{m+i}; truncation drops by i."""
    if i < 0:
        raise ValueError("derivative order must be >= 0")
    if i == 0:
        return s
    desc = s.desc
    p = desc.p
    T = s.truncation - i
    if T < 0:
        raise TruncationTooSmall(f"cannot take D^({i}) of a series known to t^{s.truncation}")
    out = []
    for m in range(T + 1):
        b = comb(m + i, i) % p
        c = s.coeffs[m + i]
        out.append(c * desc.element(b) if b else desc.zero())
    return TruncatedSeries(desc, out)


def frobenius_series(s: TruncatedSeries, q: int) -> TruncatedSeries:
    """(sum a_k t^k)^q = sum a_k^q t^(kq), truncated at the input order."""
    desc = s.desc
    T = s.truncation
    out = [desc.zero()] * (T + 1)
    k = 0
    while k * q <= T:
        c = s.coeffs[k]
        if not c.is_zero():
            out[k * q] = c ** q
        k += 1
    return TruncatedSeries(desc, out)


# ---------------------------------------------------------------------------
# Affine dictionary polynomials (3 free coordinates of a patch)
# ---------------------------------------------------------------------------

def _affine_poly(g: Poly, patch: int, target: FieldDesc):
    """g with X_patch set to 1, as a dict over the 3 remaining coordinates."""
    mapped = g.map_field(target)
    free = [i for i in range(NVARS) if i != patch]
    out = {}
    for exps, c in mapped.terms.items():
        key = tuple(exps[i] for i in free)
        cur = out.get(key)
        s = c if cur is None else cur + c
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return out


def _affine_partial(poly: dict, j: int, desc: FieldDesc):
    out = {}
    for exps, c in poly.items():
        n = exps[j]
        if n == 0:
            continue
        scaled = c * desc.element(n)
        if scaled.is_zero():
            continue
        key = list(exps)
        key[j] = n - 1
        key = tuple(key)
        cur = out.get(key)
        s = scaled if cur is None else cur + scaled
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return out


def _affine_eval(poly: dict, values, desc: FieldDesc):
    total = desc.zero()
    for exps, c in poly.items():
        v = c
        for x, e in zip(values, exps):
            for _ in range(e):
                v = v * x
        total = total + v
    return total


def _compose_affine(poly: dict, series, T: int, desc: FieldDesc):
    """poly(series[0], series[1], series[2]) truncated at T."""
    pow_cache = [{0: TruncatedSeries.constant(desc, 1, T)} for _ in series]

    def powed(j, e):
        cache = pow_cache[j]
        if e not in cache:
            cache[e] = series[j].power(e, T)
        return cache[e]

    total = TruncatedSeries.constant(desc, 0, T)
    for exps, c in poly.items():
        term = TruncatedSeries.constant(desc, c, T)
        for j, e in enumerate(exps):
            if e:
                term = term * powed(j, e)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# Charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalChart:
    point: ProjectivePoint
    patch: int                 # coordinate normalized to the constant series 1
    param_index: int           # coordinate whose series is a_c + t
    series: tuple              # 4 TruncatedSeries in the original coordinates
    twisted: tuple             # series[i]^q, q the size of the curve's base field
    truncation: int
    base_order: int            # q

    @property
    def desc(self) -> FieldDesc:
        return self.point.desc


def default_truncation(q: int, delta: int, d: int) -> int:
    """Generous order for containment evidence: 2(q + delta(d+q-1))."""
    return 2 * (q + delta * (d + q - 1))


def parametrize_curve(C: CurveSpec, P: ProjectivePoint, T: int,
                      param_rotation: int = 0) -> LocalChart:
    """Chart of C at the smooth point P, exact through t^T.

    param_rotation skips that many admissible transverse coordinates before
    picking the parameter, which yields an honestly different chart for
    reparametrization checks.
    """
    if T < 1:
        raise TruncationTooSmall("truncation must be at least 1")
    desc = P.desc
    if desc is not C.field and not is_extension(C.field, desc):
        raise FieldMismatch("point field does not extend the curve field")
    rows = jacobian_at([g.map_field(desc) for g in C.polys], P)
    patch = next(i for i, c in enumerate(P.coords) if not c.is_zero())
    free = [i for i in range(NVARS) if i != patch]
    # affine Jacobian: d/du_j of g(X_patch = 1) equals the X_j partial at P
    J = [[row[j] for j in free] for row in rows]
    if linalg.rank(J) != 2:
        raise SingularPoint(f"Jacobian rank {linalg.rank(J)} != 2 at {P}")
    kernel = linalg.nullspace(J, desc)
    if len(kernel) != 1:
        raise SingularPoint(f"tangent space at {P} is not a line")
    v = kernel[0]
    candidates = [j for j in range(3) if not v[j].is_zero()]
    if not candidates:
        raise NoTransverseCoordinate("kernel vector vanished; not a curve point")
    c_idx = candidates[param_rotation % len(candidates)]
    w_idx = [j for j in range(3) if j != c_idx]
    affine = [_affine_poly(g, patch, desc) for g in C.polys]
    # rows with an invertible 2x2 minor on the solved coordinates
    pair = None
    n = len(affine)
    for i1 in range(n):
        for i2 in range(i1 + 1, n):
            det = (J[i1][w_idx[0]] * J[i2][w_idx[1]]
                   - J[i1][w_idx[1]] * J[i2][w_idx[0]])
            if not det.is_zero():
                pair = (i1, i2, det)
                break
        if pair:
            break
    if pair is None:
        raise SingularPoint(f"no invertible 2x2 Jacobian minor at {P}")
    i1, i2, det = pair
    det_inv = det.inverse()
    m11, m12 = J[i1][w_idx[0]], J[i1][w_idx[1]]
    m21, m22 = J[i2][w_idx[0]], J[i2][w_idx[1]]
    a = [P.coords[j] for j in free]
    vc_inv = v[c_idx].inverse()
    zero = desc.zero()
    series3 = [None, None, None]
    series3[c_idx] = TruncatedSeries.parameter(desc, T, shift=a[c_idx])
    for j in w_idx:
        coeffs = [a[j], v[j] * vc_inv] + [zero] * (T - 1)
        series3[j] = TruncatedSeries(desc, coeffs[: T + 1])
    for m in range(2, T + 1):
        r1 = _compose_affine(affine[i1], series3, m, desc).coeffs[m]
        r2 = _compose_affine(affine[i2], series3, m, desc).coeffs[m]
        # solve M * delta = -r with the constant 2x2 Jacobian minor
        d1 = (m22 * (-r1) - m12 * (-r2)) * det_inv
        d2 = (m11 * (-r2) - m21 * (-r1)) * det_inv
        series3[w_idx[0]].coeffs[m] = series3[w_idx[0]].coeffs[m] + d1
        series3[w_idx[1]].coeffs[m] = series3[w_idx[1]].coeffs[m] + d2
    full = [None] * NVARS
    full[patch] = TruncatedSeries.constant(desc, 1, T)
    for pos, j in enumerate(free):
        full[j] = series3[pos]
    # soundness: every defining polynomial vanishes through t^T
    for g, aff in zip(C.polys, affine):
        composed = _compose_affine(aff, series3, T, desc)
        if not composed.is_zero_to_truncation():
            raise ChartInconsistent(
                f"defining polynomial {g!r} has order {composed.order()} on the chart at {P}")
    q = C.field.order
    twisted = tuple(frobenius_series(s, q) for s in full)
    return LocalChart(point=P, patch=patch, param_index=free[c_idx],
                      series=tuple(full), twisted=twisted, truncation=T,
                      base_order=q)


def evaluate_on_chart(g: Poly, chart: LocalChart) -> TruncatedSeries:
    desc = chart.desc
    if g.field is not desc and not is_extension(g.field, desc):
        raise FieldMismatch("polynomial field does not embed into the chart field")
    mapped = g.map_field(desc)
    T = chart.truncation
    pow_cache = [{} for _ in range(NVARS)]

    def powed(i, e):
        cache = pow_cache[i]
        if e not in cache:
            cache[e] = chart.series[i].power(e, T)
        return cache[e]

    total = TruncatedSeries.constant(desc, 0, T)
    for exps, c in mapped.terms.items():
        term = TruncatedSeries.constant(desc, c, T)
        for i, e in enumerate(exps):
            if e:
                term = term * powed(i, e)
        total = total + term
    return total


def intersection_multiplicity(C: CurveSpec, g: Poly, P: ProjectivePoint,
                              T: int = 32, param_rotation: int = 0):
    """ord_t of g along the chart of C at P; None when zero through t^T.

    None signals possible containment of the branch in V(g) and should be
    read as "at least T+1"; a definite integer is exact.
    """
    chart = parametrize_curve(C, P, T, param_rotation=param_rotation)
    return evaluate_on_chart(g, chart).order()


def osculating_plane(chart: LocalChart, j1: int, j2: int):
    """Kernel of the rows (x(0), D^(j1)x(0), D^(j2)x(0)): the plane meeting the
    branch to order at least the next P-order.

    D^(j)x evaluated at t=0 is just the t^j coefficient, so the matrix is made
    of coefficient rows of the chart series.
    """
    desc = chart.desc
    if max(j1, j2) > chart.truncation:
        raise TruncationTooSmall("chart truncation below requested orders")
    rows = [
        [s.coeffs[0] for s in chart.series],
        [s.coeffs[j1] for s in chart.series],
        [s.coeffs[j2] for s in chart.series],
    ]
    if linalg.rank(rows) != 3:
        raise RankDeficient(f"orders (0, {j1}, {j2}) do not span: wrong P-orders?")
    kernel = linalg.nullspace(rows, desc)
    vec = kernel[0]
    lead = next(c for c in vec if not c.is_zero())
    inv = lead.inverse()
    return tuple(c * inv for c in vec)
