"""Exhaustive scans of surface families: classicality, line extraction,
residual bookkeeping, and conservative conjecture verdicts.

A scan never claims a decomposition it cannot certify.  "Consistent" means no
counterexample was exhibited (and, when the residual degree is zero, that the
tangency curve was set-theoretically verified to be the union of the found
lines); "NeedsCAS" marks surfaces whose residual curve would need a real
primary decomposition.  "CandidateCounterexample" is reserved for an
explicitly exhibited non-degenerate, Frobenius classical component of degree
at most q, which the cheap plane-section discovery implemented here can never
produce on its own.
"""
from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass, field as dc_field
from itertools import product
from math import comb

from .errors import BudgetExceeded
from . import linalg
from .fields import FieldDesc, extension_of, make_field
from .geometry import (
    DEFAULT_POINT_BUDGET,
    CurveSpec,
    ProjectivePoint,
    Surface,
    count_points,
    enumerate_points,
    is_smooth_point,
    line_points,
    lines_contained_in,
)
from .localgeom import parametrize_curve
from .orders import frobenius_on_tangent_line
from .poly import NVARS, Poly, build_h, divides, serialize

_MAX_FAMILY = 2 ** 21


def degree_monomials(d: int):
    """Exponent vectors of total degree d in graded-lex descending order."""
    out = []
    for e0 in range(d, -1, -1):
        for e1 in range(d - e0, -1, -1):
            for e2 in range(d - e0 - e1, -1, -1):
                out.append((e0, e1, e2, d - e0 - e1 - e2))
    return out


@dataclass
class ScanConfig:
    p: int
    e: int = 1
    d: int = 2
    point_budget: int = DEFAULT_POINT_BUDGET
    ext_budget: int = 2
    seed: int = 0
    irreducible_only: bool = True
    smooth_only: bool = False
    resume_after_key: str | None = None
    max_surfaces: int | None = None

    @property
    def field(self) -> FieldDesc:
        return make_field(self.p, self.e)

    def family_size(self) -> int:
        q = self.p ** self.e
        m = comb(self.d + 3, 3)
        return (q ** m - 1) // (q - 1)


def enumerate_surfaces(config: ScanConfig):
    """One representative per coefficient vector up to scalar, in canonical
    order: leading (graded-lex largest) nonzero coefficient normalized to 1."""
    field = config.field
    size = config.family_size()
    if size > _MAX_FAMILY and config.max_surfaces is None:
        raise BudgetExceeded(f"family has {size} members; pass max_surfaces to cap")
    monos = degree_monomials(config.d)
    elems = list(field.elements())
    count = 0
    for lead in range(len(monos)):
        rest = len(monos) - lead - 1
        for tail in product(elems, repeat=rest):
            terms = {monos[lead]: field.one()}
            for pos, c in enumerate(tail):
                if not c.is_zero():
                    terms[monos[lead + 1 + pos]] = c
            yield Poly(field, terms)
            count += 1
            if config.max_surfaces is not None and count >= config.max_surfaces:
                return


# ---------------------------------------------------------------------------
# Quadric irreducibility and smoothness (exact)
# ---------------------------------------------------------------------------

def _linear_forms(field: FieldDesc, nvars: int = NVARS):
    zero, one = field.zero(), field.one()
    elems = list(field.elements())
    for lead in range(nvars):
        for tail in product(elems, repeat=nvars - lead - 1):
            vec = [zero] * nvars
            vec[lead] = one
            for pos, c in enumerate(tail):
                vec[lead + 1 + pos] = c
            yield vec


def _linear_poly(field, vec):
    terms = {}
    for i, c in enumerate(vec):
        if not c.is_zero():
            exps = [0] * NVARS
            exps[i] = 1
            terms[tuple(exps)] = c
    return Poly(field, terms)


def _has_linear_factor(f: Poly, field: FieldDesc) -> bool:
    for vec in _linear_forms(field):
        if divides(_linear_poly(field, vec), f):
            return True
    return False


def quadric_is_irreducible(f: Poly) -> bool:
    """True iff the quadric is not a product of two linear forms over the
    algebraic closure.

    In odd characteristic this is the rank(B) >= 3 criterion for the symmetric
    Gram matrix; in characteristic 2 we search for linear factors over F_q and
    over F_{q^2} (conjugate splittings live there), which is exhaustive and
    exact at these sizes.
    """
    if f.degree != 2:
        raise ValueError("quadric expected")
    field = f.field
    if field.p != 2:
        inv2 = field.element(2).inverse()
        B = [[field.zero() for _ in range(NVARS)] for _ in range(NVARS)]
        for exps, c in f.terms.items():
            idx = [i for i, e in enumerate(exps) for _ in range(e)]
            i, j = idx[0], idx[1]
            if i == j:
                B[i][i] = c
            else:
                B[i][j] = B[i][j] + c * inv2
                B[j][i] = B[j][i] + c * inv2
        return linalg.rank(B) >= 3
    if _has_linear_factor(f, field):
        return False
    ext = extension_of(field, 2)
    return not _has_linear_factor(f.map_field(ext), ext)


def quadric_is_smooth(f: Poly) -> bool:
    """Exact smoothness: the partials are linear forms, so the singular locus
    is (common kernel) intersected with V(f)."""
    if f.degree != 2:
        raise ValueError("quadric expected")
    field = f.field
    from .poly import gradient, evaluate
    rows = []
    for g in gradient(f):
        row = [field.zero()] * NVARS
        for exps, c in g.terms.items():
            row[exps.index(1)] = c
        rows.append(row)
    kernel = linalg.nullspace(rows, field)
    if not kernel:
        return True
    if len(kernel) == 1:
        x = kernel[0]
        return not evaluate(f, x).is_zero()
    # kernel of projective dimension >= 1: a quadric restricted there always
    # has zeros over the closure
    return False


# ---------------------------------------------------------------------------
# Trivariate forms on a plane (cheap component discovery)
# ---------------------------------------------------------------------------

def _tri_mul(a: dict, b: dict, field):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
            v = c1 * c2
            cur = out.get(key)
            s = v if cur is None else cur + v
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def restrict_to_plane(g: Poly, basis):
    """g(X = sum_s Y_s * basis[s]) as a trivariate dict over the plane."""
    field = g.field
    unit = {(0, 0, 0): field.one()}
    lin = []
    for i in range(NVARS):
        li = {}
        for s in range(3):
            c = basis[s][i]
            if not c.is_zero():
                key = tuple(1 if t == s else 0 for t in range(3))
                li[key] = c
        lin.append(li)
    out = {}
    for exps, c in g.terms.items():
        term = {(0, 0, 0): c}
        for i, e in enumerate(exps):
            if e == 0:
                continue
            if not lin[i]:
                term = {}
                break
            powd = unit
            base = lin[i]
            n = e
            while n:
                if n & 1:
                    powd = _tri_mul(powd, base, field)
                n >>= 1
                if n:
                    base = _tri_mul(base, base, field)
            term = _tri_mul(term, powd, field)
        for key, v in term.items():
            cur = out.get(key)
            s = v if cur is None else cur + v
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _tri_degree(t: dict):
    return max(sum(e) for e in t) if t else None


def _tri_leading(t: dict):
    key = max(t)
    return key, t[key]


def _tri_divide(num: dict, den: dict, field):
    """Exact division of trivariate forms, or None."""
    r = dict(num)
    d_key, d_c = _tri_leading(den)
    d_inv = d_c.inverse()
    q = {}
    while r:
        r_key, r_c = _tri_leading(r)
        quot = tuple(a - b for a, b in zip(r_key, d_key))
        if any(x < 0 for x in quot):
            return None
        coeff = r_c * d_inv
        q[quot] = coeff
        for key, c in den.items():
            tgt = (key[0] + quot[0], key[1] + quot[1], key[2] + quot[2])
            cur = r.get(tgt, field.zero())
            s = cur - coeff * c
            if s.is_zero():
                r.pop(tgt, None)
            else:
                r[tgt] = s
    return q


# univariate helpers over FieldElements (little-endian lists)

def _u_trim(v):
    while v and v[-1].is_zero():
        v.pop()
    return v


def _u_mul(a, b, field):
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _u_trim(out)


def _u_divmod(a, b, field):
    r = list(a)
    q = [field.zero()] * max(0, len(a) - len(b) + 1)
    inv = b[-1].inverse()
    while r and len(r) >= len(b):
        c = r[-1] * inv
        shift = len(r) - len(b)
        q[shift] = c
        for i in range(len(b)):
            r[shift + i] = r[shift + i] - c * b[i]
        _u_trim(r)
    return q, r


def _u_gcd(a, b, field):
    a, b = _u_trim(list(a)), _u_trim(list(b))
    while b:
        _, r = _u_divmod(a, b, field)
        a, b = b, r
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _biv_from_tri(t: dict):
    """Dehomogenize Y2 = 1: dict (i, j) -> coeff in (Y0, Y1)."""
    out = {}
    for (i, j, _k), c in t.items():
        key = (i, j)
        cur = out.get(key)
        s = c if cur is None else cur + c
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return out


def _biv_to_y1_coeffs(b: dict, field):
    """List over y1-degree of univariate-in-y0 coefficient lists."""
    dy1 = max(j for (_i, j) in b)
    out = [[] for _ in range(dy1 + 1)]
    for j in range(dy1 + 1):
        di = [i for (i, jj) in b if jj == j]
        row = [field.zero()] * ((max(di) + 1) if di else 0)
        for (i, jj), c in b.items():
            if jj == j:
                row[i] = c
        out[j] = _u_trim(row)
    return out


def _content(coeffs, field):
    g = []
    for row in coeffs:
        if row:
            g = _u_gcd(g, row, field) if g else _u_trim(list(row))
    return g


def _primitive_part(coeffs, field):
    cont = _content(coeffs, field)
    if len(cont) == 1 and cont[0] == field.one():
        return [list(r) for r in coeffs], cont
    out = []
    for row in coeffs:
        if not row:
            out.append([])
            continue
        q, r = _u_divmod(row, cont, field)
        out.append(q)
    return out, cont


def _pseudo_rem(a, b, field):
    """Pseudo-remainder of a by b in (F[y0])[y1]; b nonzero, deg_y1 a >= deg_y1 b."""
    r = [list(row) for row in a]
    db = len(b) - 1
    lead_b = b[-1]
    while len(r) - 1 >= db and any(r):
        while r and not r[-1]:
            r.pop()
        if len(r) - 1 < db:
            break
        lead_r = r[-1]
        shift = len(r) - 1 - db
        # r = lead_b * r - lead_r * y1^shift * b
        r = [_u_mul(row, lead_b, field) for row in r]
        for i in range(db + 1):
            piece = _u_mul(b[i], lead_r, field)
            tgt = shift + i
            row = r[tgt]
            n = max(len(row), len(piece))
            row = row + [field.zero()] * (n - len(row))
            for k, c in enumerate(piece):
                row[k] = row[k] - c
            r[tgt] = _u_trim(row)
        r.pop()
        while r and not r[-1]:
            r.pop()
    return r


def tri_gcd(a: dict, b: dict, field):
    """GCD of two trivariate homogeneous forms (monic-normalized), as a dict."""
    if not a or not b:
        return dict(a or b)
    # strip common Y2 powers (lost under dehomogenization)
    va = min(k for (_i, _j, k) in a)
    vb = min(k for (_i, _j, k) in b)
    v = min(va, vb)
    a = {(i, j, k - va): c for (i, j, k), c in a.items()}
    b = {(i, j, k - vb): c for (i, j, k), c in b.items()}
    da, db = _tri_degree(a), _tri_degree(b)
    A, B = _biv_from_tri(a), _biv_from_tri(b)
    ca = _biv_to_y1_coeffs(A, field)
    cb = _biv_to_y1_coeffs(B, field)
    # content-and-primitive-part Euclid in (F[y0])[y1]
    ppa, conta = _primitive_part(ca, field)
    ppb, contb = _primitive_part(cb, field)
    cont_gcd = _u_gcd(conta, contb, field)
    r0, r1 = (ppa, ppb) if len(ppa) >= len(ppb) else (ppb, ppa)
    while any(r1):
        rem = _pseudo_rem(r0, r1, field)
        rem, _ = _primitive_part(rem, field) if any(rem) else (rem, None)
        r0, r1 = r1, rem
    pp_gcd = r0
    # assemble: cont_gcd(y0) * pp_gcd(y0, y1), rehomogenize to its total degree
    biv = {}
    for j, row in enumerate(pp_gcd):
        for i, c in enumerate(row):
            if c.is_zero():
                continue
            for i0, c0 in enumerate(cont_gcd):
                if c0.is_zero():
                    continue
                key = (i + i0, j)
                cur = biv.get(key, field.zero())
                s = cur + c * c0
                if s.is_zero():
                    biv.pop(key, None)
                else:
                    biv[key] = s
    if not biv:
        return {}
    deg = max(i + j for (i, j) in biv)
    tri = {(i, j, deg - i - j): c for (i, j), c in biv.items()}
    tri = {(i, j, k + v): c for (i, j, k), c in tri.items()}
    lead_key, lead_c = _tri_leading(tri)
    inv = lead_c.inverse()
    return {k: c * inv for k, c in tri.items()}


def _strip_linear_factors(t: dict, field):
    """Divide out F_q-rational linear forms (in the plane coordinates); returns
    (remaining, count_stripped)."""
    count = 0
    changed = True
    while changed and t and _tri_degree(t) >= 1:
        changed = False
        for vec in _linear_forms(field, 3):
            lin = {}
            for i, c in enumerate(vec):
                if not c.is_zero():
                    lin[tuple(1 if s == i else 0 for s in range(3))] = c
            q = _tri_divide(t, lin, field)
            if q is not None:
                t = q
                count += 1
                changed = True
                break
    return t, count


def _conic_geometrically_irreducible(t: dict, field) -> bool:
    """Degree-2 trivariate form: irreducible over the closure?"""
    if field.p != 2:
        zero = field.zero()
        inv2 = field.element(2).inverse()
        B = [[zero] * 3 for _ in range(3)]
        for exps, c in t.items():
            idx = [i for i, e in enumerate(exps) for _ in range(e)]
            i, j = idx[0], idx[1]
            if i == j:
                B[i][i] = c
            else:
                B[i][j] = B[i][j] + c * inv2
                B[j][i] = B[j][i] + c * inv2
        return linalg.rank(B) >= 3

    def has_lin(form, fld):
        for vec in _linear_forms(fld, 3):
            lin = {}
            for i, c in enumerate(vec):
                if not c.is_zero():
                    lin[tuple(1 if s == i else 0 for s in range(3))] = c
            if _tri_divide(form, lin, fld) is not None:
                return True
        return False

    if has_lin(t, field):
        return False
    ext = extension_of(field, 2)
    from .fields import embed
    t_ext = {k: embed(c, ext) for k, c in t.items()}
    return not has_lin(t_ext, ext)


def _lift_to_p3(t: dict, basis, plane_vec, field):
    """A form on P^3 restricting to t on the plane: substitute the retraction
    Y_s = B * X_R through an invertible 3x3 row-submatrix of the basis."""
    import itertools as _it
    A = [[basis[s][i] for s in range(3)] for i in range(NVARS)]  # 4x3
    rows_idx = None
    for combo in _it.combinations(range(NVARS), 3):
        sub = [A[i] for i in combo]
        if linalg.rank(sub) == 3:
            rows_idx = combo
            break
    sub = [A[i] for i in rows_idx]
    # invert the 3x3 submatrix over the field
    n = 3
    aug = [list(sub[i]) + [field.one() if j == i else field.zero() for j in range(n)]
           for i in range(n)]
    rref, piv = linalg._rref(aug)
    inv = [row[n:] for row in rref]
    # Y_s = sum_r inv[s][r] * X_{rows_idx[r]}
    lin = []
    for s in range(3):
        form = {}
        for r in range(3):
            c = inv[s][r]
            if not c.is_zero():
                exps = [0] * NVARS
                exps[rows_idx[r]] = 1
                form[tuple(exps)] = c
        lin.append(Poly(field, form) if form else Poly.zero(field))
    out = Poly.zero(field)
    for exps, c in t.items():
        term = Poly(field, {(0, 0, 0, 0): c})
        for s, e in enumerate(exps):
            for _ in range(e):
                term = term * lin[s]
        out = out + term
    return out


# ---------------------------------------------------------------------------
# Scan records
# ---------------------------------------------------------------------------

@dataclass
class ScanRecord:
    key: str
    q: int
    d: int
    fc: bool
    phi_degree: int | None
    lines: list
    residual_degree: int | None
    points: dict
    flag: str
    assertions: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "key": self.key, "q": self.q, "d": self.d, "fc": self.fc,
            "phi_degree": self.phi_degree,
            "lines": list(self.lines),
            "residual_degree": self.residual_degree,
            "points": {str(k): v for k, v in sorted(self.points.items())},
            "flag": self.flag,
            "assertions": list(self.assertions),
        }


def _phi_is_union_of_lines(system, lines, field, ext_budget, budget) -> bool:
    """Set-theoretic check over k <= ext_budget: every point of the tangency
    locus lies on one of the lines."""
    q = field.order
    for k in range(1, ext_budget + 1):
        if q ** (3 * k) > budget:
            break
        target = extension_of(field, k)
        from .fields import embed
        spans = []
        for L in lines:
            A = [embed(c, target) for c in L.a.coords]
            B = [embed(c, target) for c in L.b.coords]
            spans.append((A, B))
        for P in enumerate_points(system, k, budget=budget):
            on = any(linalg.rank([A, B, list(P.coords)]) == 2 for A, B in spans)
            if not on:
                return False
    return True


def analyze_scan_surface(f: Poly, config: ScanConfig) -> ScanRecord:
    field = f.field
    q = field.order
    key = serialize(f)
    assertions = []
    if config.d == 2:
        if not quadric_is_irreducible(f):
            return ScanRecord(key=key, q=q, d=config.d, fc=False, phi_degree=None,
                              lines=[], residual_degree=None, points={},
                              flag="Consistent",
                              assertions=["reducible quadric: analysis skipped"])
        assertions.append("irreducible: decided exactly")
        irreducible = True
    else:
        assertions.append("irreducible: assumed, not checked")
        irreducible = True
    S = Surface(f, config.d, irreducible_asserted=irreducible)
    h = build_h(f, q)
    fc = not h.is_zero() and not divides(f, h)
    system = [f] if h.is_zero() else [f, h]
    points = {}
    for k in range(1, config.ext_budget + 1):
        if q ** (3 * k) > config.point_budget:
            break
        points[k] = count_points(system, k, budget=config.point_budget)
    if not fc:
        return ScanRecord(key=key, q=q, d=config.d, fc=False, phi_degree=None,
                          lines=[], residual_degree=None, points=points,
                          flag="Consistent",
                          assertions=assertions + ["Frobenius non-classical: "
                                                   "tangency locus is the surface"])
    phi_deg = config.d * (config.d + q - 1)
    lines = lines_contained_in(system, field)
    residual = phi_deg - len(lines)
    if residual < 0:
        assertions.append("ALERT: more lines than the tangency degree")
    line_keys = [L.key() for L in lines]
    if residual == 0:
        verified = _phi_is_union_of_lines(system, lines, field,
                                          config.ext_budget, config.point_budget)
        if verified:
            flag = "Consistent"
            assertions.append("tangency curve is set-theoretically the union of its lines")
        else:
            flag = "NeedsCAS"
            assertions.append("line count matches the degree but extra points exist: "
                              "multiplicities unresolved")
        return ScanRecord(key=key, q=q, d=config.d, fc=True, phi_degree=phi_deg,
                          lines=line_keys, residual_degree=residual, points=points,
                          flag=flag, assertions=assertions)
    # residual curve present: best-effort degenerate-component discovery
    smooth_known = quadric_is_smooth(f) if config.d == 2 else None
    discovered = _discover_plane_components(f, h, lines, field, config, smooth_known,
                                            assertions)
    flag = "NeedsCAS"
    assertions.append(f"residual degree {residual}: decomposition beyond "
                      "rational lines not attempted (line multiplicities unknown)")
    return ScanRecord(key=key, q=q, d=config.d, fc=True, phi_degree=phi_deg,
                      lines=line_keys, residual_degree=residual, points=points,
                      flag=flag, assertions=assertions)


def _discover_plane_components(f, h, lines, field, config, smooth_known, assertions):
    """Plane-section gcds of {f, h}: degenerate pieces of the tangency curve.

    Any non-linear geometrically irreducible piece found on a certified-smooth
    surface must keep its Frobenius image on the tangent line (nu1 > 1); a
    failure of that invariant is recorded as a fatal alert.
    """
    found = []
    one = field.one()
    for vec in _linear_forms(field):
        basis = linalg.nullspace([vec], field)
        rf = restrict_to_plane(f, basis)
        rh = restrict_to_plane(h, basis)
        if not rf or not rh:
            continue  # the plane lies inside f = 0 or h = 0: not a curve section
        g = tri_gcd(rf, rh, field)
        if not g or _tri_degree(g) == 0:
            continue
        g, n_lin = _strip_linear_factors(g, field)
        deg = _tri_degree(g)
        if not g or deg == 0:
            continue
        plane_poly = _linear_poly(field, vec)
        note = f"degenerate piece of degree {deg} in the plane {serialize(plane_poly)}"
        if deg == 2 and _conic_geometrically_irreducible(g, field):
            lift = _lift_to_p3(g, basis, vec, field)
            piece = CurveSpec((plane_poly, lift), delta=deg)
            ok = _check_tangent_line_property(piece, field, config)
            if ok is False:
                if smooth_known:
                    assertions.append(
                        "ALERT: smooth surface with a degenerate non-linear tangency "
                        f"component whose Frobenius image leaves the tangent line ({note})")
                else:
                    assertions.append(
                        f"warning: {note} has Frobenius image off the tangent line; "
                        "surface smoothness not certified")
            elif ok is True:
                assertions.append(f"{note}: Frobenius image stays on the tangent line")
            else:
                assertions.append(f"{note}: no smooth point found for the tangent check")
        else:
            assertions.append(note + " (geometric irreducibility not decided)")
        found.append((vec, g))
    return found


def _check_tangent_line_property(piece: CurveSpec, field, config):
    q = field.order
    for k in range(1, 4):
        if q ** (3 * k) > config.point_budget:
            break
        try:
            pts = enumerate_points(piece.polys, k, budget=config.point_budget)
        except BudgetExceeded:
            break
        for P in pts:
            try:
                if not is_smooth_point(list(piece.polys), P, 2):
                    continue
                chart = parametrize_curve(piece, P, max(16, 2 * q + 8))
            except Exception:
                continue
            return frobenius_on_tangent_line(chart)
    return None


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def _worker(args):
    p, e, d, exps_coeffs, cfg_kwargs = args
    field = make_field(p, e)
    terms = {tuple(exps): field.from_index(idx) for exps, idx in exps_coeffs}
    f = Poly(field, terms)
    config = ScanConfig(p=p, e=e, d=d, **cfg_kwargs)
    return analyze_scan_surface(f, config).to_json()


def scan_conjecture(config: ScanConfig, jobs: int = 1):
    """Stream of record dicts, in canonical surface order."""
    skipping = config.resume_after_key is not None
    if jobs <= 1:
        for f in enumerate_surfaces(config):
            if skipping:
                if serialize(f) == config.resume_after_key:
                    skipping = False
                continue
            yield analyze_scan_surface(f, config).to_json()
        return
    cfg_kwargs = dict(point_budget=config.point_budget, ext_budget=config.ext_budget,
                      seed=config.seed, irreducible_only=config.irreducible_only,
                      smooth_only=config.smooth_only)

    def tasks():
        nonlocal skipping
        for f in enumerate_surfaces(config):
            if skipping:
                if serialize(f) == config.resume_after_key:
                    skipping = False
                continue
            yield (config.p, config.e, config.d,
                   [(exps, c.index()) for exps, c in f.terms.items()], cfg_kwargs)

    with multiprocessing.Pool(jobs) as pool:
        for rec in pool.imap(_worker, tasks(), chunksize=16):
            yield rec


def export_records(records, path, checkpoint_every: int = 10 ** 4) -> int:
    """Write records as JSONL (deterministic bytes); returns the line count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            if not isinstance(rec, dict):
                rec = rec.to_json()
            fh.write(json.dumps(rec) + "\n")
            n += 1
            if n % checkpoint_every == 0:
                fh.flush()
    return n


def summarize(records) -> dict:
    out = {"total": 0, "fc": 0, "flags": {}, "alerts": 0}
    for rec in records:
        if not isinstance(rec, dict):
            rec = rec.to_json()
        out["total"] += 1
        if rec["fc"]:
            out["fc"] += 1
        out["flags"][rec["flag"]] = out["flags"].get(rec["flag"], 0) + 1
        out["alerts"] += sum(1 for a in rec["assertions"] if a.startswith("ALERT"))
    return out
