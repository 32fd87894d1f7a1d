"""Projective points, brute-force enumeration, smoothness, and F_q-lines in P^3.

Point enumeration visits each projective point exactly once, patch by patch:
first the points with X0 = 1, then X0 = 0, X1 = 1, and so on.  Inside a patch
the free coordinates run through the field in canonical index order, leftmost
coordinate most significant.  Enumeration over GF(q^k) is table-driven numpy
on integer-encoded field elements; a pure-Python reference path with the same
ordering is kept for cross-checking.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FieldMismatch,
    PointNotOnVariety,
    SingularPoint,
)
from . import linalg
from .fields import FieldDesc, FieldElement, embed, extension_of, make_field
from .poly import NVARS, Poly, evaluate, gradient, partial_derivative

DEFAULT_POINT_BUDGET = 10 ** 8
_TABLE_LIMIT = 1 << 16


class ProjectivePoint:
    """Point of P^3 over GF(q^k), normalized so the first nonzero coord is 1."""

    __slots__ = ("coords", "k")

    def __init__(self, coords, k: int = 1):
        coords = tuple(coords)
        if len(coords) != NVARS:
            raise ValueError("need 4 coordinates")
        desc = coords[0].desc
        if any(c.desc is not desc for c in coords):
            raise FieldMismatch("coordinates over different fields")
        lead = next((c for c in coords if not c.is_zero()), None)
        if lead is None:
            raise ValueError("all coordinates zero")
        if lead != desc.one():
            inv = lead.inverse()
            coords = tuple(c * inv for c in coords)
        self.coords = coords
        self.k = k

    @property
    def desc(self) -> FieldDesc:
        return self.coords[0].desc

    def frobenius(self, q: int) -> "ProjectivePoint":
        return ProjectivePoint(tuple(c ** q for c in self.coords), self.k)

    def embed(self, target: FieldDesc, k: int | None = None) -> "ProjectivePoint":
        return ProjectivePoint(tuple(embed(c, target) for c in self.coords),
                               k if k is not None else self.k)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + ":".join(c.literal() for c in self.coords) + ")"


@dataclass(frozen=True)
class Surface:
    f: Poly
    d: int
    irreducible_asserted: bool = False

    def __post_init__(self):
        if self.f.is_zero() or self.f.degree != self.d or self.d < 1:
            raise ValueError("surface degree must match its defining form")

    @classmethod
    def from_poly(cls, f: Poly, irreducible_asserted: bool = False) -> "Surface":
        return cls(f, f.degree, irreducible_asserted)

    @property
    def field(self) -> FieldDesc:
        return self.f.field


@dataclass(frozen=True)
class CurveSpec:
    polys: tuple
    delta: int | None = None
    irreducible_asserted: bool = False
    complete_asserted: bool = False

    def __post_init__(self):
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("a curve needs at least one defining polynomial")
        f0 = polys[0].field
        if any(p.field is not f0 for p in polys) or any(p.is_zero() for p in polys):
            raise ValueError("defining polynomials must be nonzero over one field")
        if self.delta is not None and self.delta < 1:
            raise ValueError("declared degree must be >= 1")
        object.__setattr__(self, "polys", polys)

    @property
    def field(self) -> FieldDesc:
        return self.polys[0].field


# ---------------------------------------------------------------------------
# Table-driven bulk arithmetic (indices encode elements, see fields.from_index)
# ---------------------------------------------------------------------------

class _FieldTable:
    def __init__(self, desc: FieldDesc):
        self.desc = desc
        q = desc.order
        self.q = q
        gen = desc.generator()
        log = np.zeros(q, dtype=np.int64)
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        acc = desc.one()
        for i in range(q - 1):
            idx = acc.index()
            exp[i] = idx
            exp[i + q - 1] = idx
            log[idx] = i
            acc = acc * gen
        self.log = log
        self.exp = exp
        self.p = desc.p
        self.e = desc.e

    def mul(self, u, v):
        nz = (u != 0) & (v != 0)
        idx = self.log[u] + self.log[v]
        return np.where(nz, self.exp[idx], 0)

    def pow(self, u, n: int):
        if n == 0:
            return np.ones_like(u)
        nz = u != 0
        idx = (self.log[u] * n) % (self.q - 1)
        return np.where(nz, self.exp[idx], 0)

    def add(self, u, v):
        if self.e == 1:
            return (u + v) % self.p
        if self.p == 2:
            return u ^ v
        out = np.zeros_like(u)
        pk = 1
        for _ in range(self.e):
            du = (u // pk) % self.p
            dv = (v // pk) % self.p
            out += ((du + dv) % self.p) * pk
            pk *= self.p
        return out

    def mul_scalar(self, u, idx: int):
        if idx == 0:
            return np.zeros_like(u)
        nz = u != 0
        return np.where(nz, self.exp[self.log[u] + int(self.log[idx])], 0)


_TABLES: dict = {}


def _field_table(desc: FieldDesc) -> _FieldTable:
    t = _TABLES.get(desc)
    if t is None:
        t = _FieldTable(desc)
        _TABLES[desc] = t
    return t


def _encoded_terms(poly: Poly, target: FieldDesc):
    mapped = poly.map_field(target)
    return [(exps, c.index()) for exps, c in mapped.sorted_terms()]


def _eval_terms_on_patch(table, terms, coord_arrays, n):
    """coord_arrays[i] is an int array, or the constants 0/1 for fixed coords."""
    total = np.zeros(n, dtype=np.int64)
    for exps, cidx in terms:
        term = None
        dead = False
        for i, e in enumerate(exps):
            if e == 0:
                continue
            ci = coord_arrays[i]
            if isinstance(ci, int):
                if ci == 0:
                    dead = True
                    break
                continue  # coordinate fixed to 1
            powed = table.pow(ci, e)
            term = powed if term is None else table.mul(term, powed)
        if dead:
            continue
        if term is None:
            term = np.full(n, cidx, dtype=np.int64)
        else:
            term = table.mul_scalar(term, cidx)
        total = table.add(total, term)
    return total


def _check_budget(q: int, k: int, budget: int):
    if q ** (3 * k) > budget:
        raise BudgetExceeded(f"q^(3k) = {q}^{3 * k} exceeds the point budget {budget}")


def enumerate_points(polys, k: int = 1, base: FieldDesc | None = None,
                     budget: int = DEFAULT_POINT_BUDGET):
    """Points of P^3(F_{q^k}) where every poly vanishes, in canonical order."""
    return list(iter_points(polys, k, base=base, budget=budget))


def iter_points(polys, k: int = 1, base: FieldDesc | None = None,
                budget: int = DEFAULT_POINT_BUDGET):
    polys = list(polys)
    if base is None:
        if not polys:
            raise ValueError("an empty system needs an explicit base field")
        base = polys[0].field
    _check_budget(base.order, k, budget)
    target = extension_of(base, k)
    if target.order <= _TABLE_LIMIT:
        yield from _iter_points_table(polys, target, k)
    else:
        yield from _iter_points_reference(polys, target, k)


def _iter_points_table(polys, target: FieldDesc, k: int):
    table = _field_table(target)
    q = target.order
    enc = [_encoded_terms(p, target) for p in polys]
    idx_range = np.arange(q, dtype=np.int64)

    def decode(patch_prefix, free_idx_tuples):
        for idxs in free_idx_tuples:
            coords = list(patch_prefix) + [target.from_index(int(i)) for i in idxs]
            yield ProjectivePoint(coords, k)

    # patch 0: (1 : x1 : x2 : x3)
    one, zero = target.one(), target.zero()
    x2 = np.repeat(idx_range, q)
    x3 = np.tile(idx_range, q)
    n = q * q
    for i1 in range(q):
        x1 = np.full(n, i1, dtype=np.int64)
        mask = np.ones(n, dtype=bool)
        for terms in enc:
            if not mask.any():
                break
            mask &= _eval_terms_on_patch(table, terms, [1, x1, x2, x3], n) == 0
        if mask.any():
            sel = np.nonzero(mask)[0]
            yield from decode((one,), zip(x1[sel], x2[sel], x3[sel]))
    # patch 1: (0 : 1 : x2 : x3)
    mask = np.ones(n, dtype=bool)
    for terms in enc:
        mask &= _eval_terms_on_patch(table, terms, [0, 1, x2, x3], n) == 0
    sel = np.nonzero(mask)[0]
    yield from decode((zero, one), zip(x2[sel], x3[sel]))
    # patch 2: (0 : 0 : 1 : x3)
    mask = np.ones(q, dtype=bool)
    for terms in enc:
        mask &= _eval_terms_on_patch(table, terms, [0, 0, 1, idx_range], q) == 0
    sel = np.nonzero(mask)[0]
    yield from decode((zero, zero, one), zip(idx_range[sel]))
    # patch 3: (0 : 0 : 0 : 1)
    pt = [zero, zero, zero, one]
    if all(evaluate(p, pt).is_zero() for p in polys):
        yield ProjectivePoint(pt, k)


def _iter_points_reference(polys, target: FieldDesc, k: int):
    mapped = [p.map_field(target) for p in polys]
    one, zero = target.one(), target.zero()
    elems = list(target.elements())

    def vanish(coords):
        return all(evaluate(p, coords).is_zero() for p in mapped)

    for x1 in elems:
        for x2 in elems:
            for x3 in elems:
                c = (one, x1, x2, x3)
                if vanish(c):
                    yield ProjectivePoint(c, k)
    for x2 in elems:
        for x3 in elems:
            c = (zero, one, x2, x3)
            if vanish(c):
                yield ProjectivePoint(c, k)
    for x3 in elems:
        c = (zero, zero, one, x3)
        if vanish(c):
            yield ProjectivePoint(c, k)
    c = (zero, zero, zero, one)
    if vanish(c):
        yield ProjectivePoint(c, k)


def count_points(polys, k: int = 1, base: FieldDesc | None = None,
                 budget: int = DEFAULT_POINT_BUDGET) -> int:
    """Cardinality of the vanishing set in P^3(F_{q^k})."""
    polys = list(polys)
    if base is None:
        if not polys:
            raise ValueError("an empty system needs an explicit base field")
        base = polys[0].field
    _check_budget(base.order, k, budget)
    target = extension_of(base, k)
    if target.order > _TABLE_LIMIT:
        return sum(1 for _ in _iter_points_reference(polys, target, k))
    table = _field_table(target)
    q = target.order
    enc = [_encoded_terms(p, target) for p in polys]
    idx_range = np.arange(q, dtype=np.int64)
    total = 0
    x2 = np.repeat(idx_range, q)
    x3 = np.tile(idx_range, q)
    n = q * q
    for i1 in range(q):
        x1 = np.full(n, i1, dtype=np.int64)
        mask = np.ones(n, dtype=bool)
        for terms in enc:
            if not mask.any():
                break
            mask &= _eval_terms_on_patch(table, terms, [1, x1, x2, x3], n) == 0
        total += int(mask.sum())
    mask = np.ones(n, dtype=bool)
    for terms in enc:
        mask &= _eval_terms_on_patch(table, terms, [0, 1, x2, x3], n) == 0
    total += int(mask.sum())
    mask = np.ones(q, dtype=bool)
    for terms in enc:
        mask &= _eval_terms_on_patch(table, terms, [0, 0, 1, idx_range], q) == 0
    total += int(mask.sum())
    target_one = [target.zero()] * 3 + [target.one()]
    if all(evaluate(p, target_one).is_zero() for p in polys):
        total += 1
    return total


def projective_space_size(q: int, k: int = 1) -> int:
    Q = q ** k
    return Q ** 3 + Q ** 2 + Q + 1


# ---------------------------------------------------------------------------
# Smoothness and tangent planes
# ---------------------------------------------------------------------------

def jacobian_at(polys, P: ProjectivePoint):
    rows = []
    for g in polys:
        rows.append([evaluate(partial_derivative(g, i), P.coords) for i in range(NVARS)])
    return rows


def is_smooth_point(polys, P: ProjectivePoint, expected_codim: int) -> bool:
    for g in polys:
        if not evaluate(g, P.coords).is_zero():
            raise PointNotOnVariety(f"{P} does not lie on the variety")
    return linalg.rank(jacobian_at(polys, P)) == expected_codim


def tangent_plane(S: Surface, P: ProjectivePoint):
    """Gradient of f at P as plane coefficients, first nonzero scaled to 1."""
    if not evaluate(S.f, P.coords).is_zero():
        raise PointNotOnVariety(f"{P} does not lie on the surface")
    grads = [evaluate(g, P.coords) for g in gradient(S.f)]
    lead = next((g for g in grads if not g.is_zero()), None)
    if lead is None:
        raise SingularPoint(f"{P} is a singular point of the surface")
    inv = lead.inverse()
    return tuple(g * inv for g in grads)


def find_singular_point(S: Surface, max_ext: int = 3,
                        budget: int = DEFAULT_POINT_BUDGET):
    """First singular point of S over F_{q^k}, k = 1..max_ext, or None."""
    system = [S.f] + [g for g in gradient(S.f) if not g.is_zero()]
    for k in range(1, max_ext + 1):
        try:
            for P in iter_points(system, k, base=S.field, budget=budget):
                return P
        except BudgetExceeded:
            break
    return None


# ---------------------------------------------------------------------------
# F_q-rational lines
# ---------------------------------------------------------------------------

_PIVOT_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


class Line:
    """Line of P^3 over GF(q), held as the unique RREF basis of its span."""

    __slots__ = ("a", "b")

    def __init__(self, a: ProjectivePoint, b: ProjectivePoint):
        self.a = a
        self.b = b

    @classmethod
    def through(cls, a: ProjectivePoint, b: ProjectivePoint) -> "Line":
        rows, pivots = linalg._rref([list(a.coords), list(b.coords)])
        if len(pivots) != 2:
            raise ValueError("points do not span a line")
        return cls(ProjectivePoint(rows[0], a.k), ProjectivePoint(rows[1], a.k))

    def key(self) -> str:
        return f"{self.a!r}|{self.b!r}"

    def plucker(self):
        """Normalized Plucker 6-vector (p01, p02, p03, p12, p13, p23)."""
        a, b = self.a.coords, self.b.coords
        coords = [a[i] * b[j] - a[j] * b[i] for i, j in _PIVOT_PAIRS]
        lead = next(c for c in coords if not c.is_zero())
        inv = lead.inverse()
        return tuple(c * inv for c in coords)

    def spanning_forms(self):
        """Two independent linear forms over GF(q) cutting out the line."""
        field = self.a.desc
        basis = linalg.nullspace([list(self.a.coords), list(self.b.coords)], field)
        forms = []
        for vec in basis:
            terms = {}
            for i, c in enumerate(vec):
                if not c.is_zero():
                    exps = [0] * NVARS
                    exps[i] = 1
                    terms[tuple(exps)] = c
            forms.append(Poly(field, terms))
        return forms

    def as_curve(self) -> CurveSpec:
        return CurveSpec(tuple(self.spanning_forms()), delta=1,
                         irreducible_asserted=True, complete_asserted=True)

    def __eq__(self, other):
        if not isinstance(other, Line):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"Line[{self.a!r}, {self.b!r}]"


def line_points(L: Line):
    """All q+1 rational points: a, and a*s + b for s in GF(q)."""
    field = L.a.desc
    pts = [L.a]
    for s in field.elements():
        coords = [ca * s + cb for ca, cb in zip(L.a.coords, L.b.coords)]
        pts.append(ProjectivePoint(coords, L.a.k))
    return pts


def enumerate_lines(field: FieldDesc, max_q: int = 16):
    """Every F_q-line of P^3 exactly once, canonical (RREF) order."""
    q = field.order
    if q > max_q:
        raise BudgetExceeded(f"line enumeration limited to q <= {max_q}, got q = {q}")
    zero, one = field.zero(), field.one()
    elems = list(field.elements())
    for i, j in _PIVOT_PAIRS:
        free0 = [c for c in range(NVARS) if c > i and c != j]
        free1 = [c for c in range(NVARS) if c > j]
        combos0 = _tuples(elems, len(free0))
        for vals0 in combos0:
            row0 = [zero] * NVARS
            row0[i] = one
            for c, v in zip(free0, vals0):
                row0[c] = v
            for vals1 in _tuples(elems, len(free1)):
                row1 = [zero] * NVARS
                row1[j] = one
                for c, v in zip(free1, vals1):
                    row1[c] = v
                yield Line(ProjectivePoint(row0), ProjectivePoint(row1))


def _tuples(elems, n):
    if n == 0:
        yield ()
        return
    for head in elems:
        for tail in _tuples(elems, n - 1):
            yield (head,) + tail


def line_contained(polys, L: Line) -> bool:
    """Exact containment: substituting s*a + t*b must vanish identically."""
    for g in polys:
        if not _restriction_is_zero(g, L):
            return False
    return True


def _restriction_is_zero(g: Poly, L: Line) -> bool:
    field = g.field
    a, b = L.a.coords, L.b.coords
    if a[0].desc is not field:
        a = tuple(embed(c, field) for c in a)
        b = tuple(embed(c, field) for c in b)
    acc = {}
    for exps, coeff in g.terms.items():
        conv = [coeff]
        for i, e in enumerate(exps):
            if e == 0:
                continue
            # (a_i s + b_i t)^e as coefficients of s^(e-r) t^r
            row = [field.element(comb(e, r)) * a[i] ** (e - r) * b[i] ** r
                   for r in range(e + 1)]
            conv = _convolve(conv, row, field)
        for r, c in enumerate(conv):
            if c.is_zero():
                continue
            cur = acc.get(r)
            s = c if cur is None else cur + c
            if s.is_zero():
                acc.pop(r, None)
            else:
                acc[r] = s
    return not acc


def _convolve(u, v, field):
    out = [field.zero()] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a.is_zero():
            continue
        for j, b in enumerate(v):
            out[i + j] = out[i + j] + a * b
    return out


def lines_contained_in(polys, field: FieldDesc):
    """All F_q-lines on which every poly vanishes identically."""
    return [L for L in enumerate_lines(field) if line_contained(polys, L)]


# ---------------------------------------------------------------------------
# Degree estimation by plane sections
# ---------------------------------------------------------------------------

def plane_through(points, field: FieldDesc):
    """An F_q-plane through up to 3 points, or None if they do not span one."""
    rows = [list(p.coords) for p in points]
    basis = linalg.nullspace(rows, field)
    if len(basis) != 1:
        return None
    return tuple(basis[0])


def estimate_degree(C: CurveSpec, trials: int = 8, seed: int = 0,
                    budget: int = DEFAULT_POINT_BUDGET) -> int:
    """Degree estimate: largest plane-section size over GF(q^k).

    Sections only undercount (a plane not containing a component meets the
    curve in at most deg(C) points), so the max over sampled planes is a
    lower bound that reaches the degree once a fully split section is hit.
    Planes are drawn through sampled triples of rational points to force at
    least three section points each.
    """
    if C.complete_asserted and len(C.polys) == 2:
        return C.polys[0].degree * C.polys[1].degree
    field = C.field
    q = field.order
    prod = 1
    for g in C.polys:
        prod *= g.degree
    k = 1
    while q ** k <= 2 * prod:
        k += 1
    _check_budget(q, k, budget)
    pts = enumerate_points(C.polys, k, budget=budget)
    if not pts:
        raise DimensionMismatch("no points found over the sampling extension")
    target = extension_of(field, k)
    rng = random.Random(seed)
    degrees = sorted(g.degree for g in C.polys)
    cap = degrees[0] * degrees[1] if len(degrees) >= 2 else degrees[0] * q
    best = 0
    for _ in range(trials):
        plane = None
        if len(pts) >= 3:
            for _ in range(20):
                triple = rng.sample(pts, 3)
                plane = plane_through(triple, target)
                if plane is not None:
                    break
        if plane is None:
            while True:
                plane = tuple(target.from_index(rng.randrange(target.order))
                              for _ in range(NVARS))
                if any(not c.is_zero() for c in plane):
                    break
        section = 0
        for P in pts:
            acc = target.zero()
            for c, x in zip(plane, P.coords):
                acc = acc + c * x
            if acc.is_zero():
                section += 1
        best = max(best, section)
    if best > cap:
        raise DimensionMismatch(
            f"plane sections reach {best} > {cap}: the system does not cut a curve")
    return best
