"""Sparse homogeneous polynomials in X0..X3 over a finite field.

Terms are kept in a dict mapping exponent 4-tuples to nonzero field elements.
The term order everywhere is graded lexicographic with X0 > X1 > X2 > X3;
since all stored polynomials are homogeneous this is plain lexicographic
comparison of exponent tuples, largest first.

The text grammar (ASCII, whitespace insignificant):

    poly   := ["-"] term (("+"|"-") term)*
    term   := [coef "*"?] factor ("*" factor)* | coef
    factor := var ("^" int)?
    var    := ("X"|"x") ("0".."3")
    coef   := int | gen ("^" int)?
    gen    := "a"            (the canonical generator of the declared field)

Integer coefficients are reduced mod p.  A coefficient like 2*a^3 cannot be
written as a single term; the serializer emits the term repeatedly instead
(the parser sums coinciding monomials), which keeps round-trips exact.
"""
from __future__ import annotations

from .errors import (
    BadFieldLiteral,
    FieldMismatch,
    NotHomogeneous,
    PolySyntaxError,
    UnknownVariable,
    ZeroDivisor,
)
from .fields import FieldDesc, FieldElement, embed, is_extension

NVARS = 4


class Poly:
    """Homogeneous polynomial; the zero polynomial has degree None."""

    __slots__ = ("field", "terms", "degree")

    def __init__(self, field: FieldDesc, terms: dict):
        clean = {}
        degree = None
        for exps, coeff in terms.items():
            if coeff.desc is not field:
                raise FieldMismatch("coefficient from a different field")
            if coeff.is_zero():
                continue
            total = sum(exps)
            if degree is None:
                degree = total
            elif total != degree:
                raise NotHomogeneous(f"mixed total degrees {degree} and {total}")
            clean[exps] = coeff
        self.field = field
        self.terms = clean
        self.degree = degree if clean else None

    # --- constructors ---

    @classmethod
    def zero(cls, field: FieldDesc) -> "Poly":
        return cls(field, {})

    @classmethod
    def monomial(cls, field: FieldDesc, exps, coeff=1) -> "Poly":
        c = field.element(coeff)
        return cls(field, {tuple(exps): c})

    @classmethod
    def variable(cls, field: FieldDesc, i: int) -> "Poly":
        exps = [0] * NVARS
        exps[i] = 1
        return cls.monomial(field, exps)

    # --- predicates ---

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.field), tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def __repr__(self):
        return f"Poly({self.field!r}, {serialize(self)!r})"

    # --- arithmetic (results stay homogeneous or zero) ---

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            cur = out.get(exps)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(exps, None)
            else:
                out[exps] = s
        return Poly(self.field, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(self.field, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                cur = out.get(exps)
                s = prod if cur is None else cur + prod
                if s.is_zero():
                    out.pop(exps, None)
                else:
                    out[exps] = s
        return Poly(self.field, out)

    def scale(self, coeff) -> "Poly":
        c = self.field.element(coeff)
        if c.is_zero():
            return Poly.zero(self.field)
        return Poly(self.field, {e: v * c for e, v in self.terms.items()})

    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError(f"cannot combine Poly with {type(other).__name__}")
        if other.field is not self.field:
            raise FieldMismatch("polynomials over different fields")

    # --- structure ---

    def leading_term(self):
        """(exponents, coefficient) maximal in graded-lex order."""
        exps = max(self.terms)
        return exps, self.terms[exps]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def map_field(self, target: FieldDesc) -> "Poly":
        """Coefficient-wise canonical embedding into an extension field."""
        if target is self.field:
            return self
        return Poly(target, {e: embed(c, target) for e, c in self.terms.items()})


def partial_derivative(f: Poly, i: int) -> Poly:
    """Formal partial derivative; exponents multiply coefficients mod p."""
    out = {}
    for exps, c in f.terms.items():
        n = exps[i]
        if n == 0:
            continue
        scaled = c * f.field.element(n)
        if scaled.is_zero():
            continue
        new = list(exps)
        new[i] = n - 1
        out[tuple(new)] = scaled
    return Poly(f.field, out)


def gradient(f: Poly):
    return [partial_derivative(f, i) for i in range(NVARS)]


def build_h(f: Poly, q: int) -> Poly:
    """X0^q*f_0 + X1^q*f_1 + X2^q*f_2 + X3^q*f_3 (may be zero)."""
    field = f.field
    h = Poly.zero(field)
    for i in range(NVARS):
        fi = partial_derivative(f, i)
        if fi.is_zero():
            continue
        exps = [0] * NVARS
        exps[i] = q
        h = h + Poly.monomial(field, exps) * fi
    return h


def divides(f: Poly, g: Poly) -> bool:
    """True iff g lies in the principal ideal (f).

    Division by the single divisor f under graded-lex order; a one-element
    set is a Groebner basis of its principal ideal, so remainder zero is an
    exact membership test.  Any term that escapes to the remainder can never
    be cancelled, so the test short-circuits.
    """
    if f.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    r = g
    f_exps, f_lead = f.leading_term()
    f_lead_inv = f_lead.inverse()
    while not r.is_zero():
        r_exps, r_lead = r.leading_term()
        quot = tuple(a - b for a, b in zip(r_exps, f_exps))
        if any(e < 0 for e in quot):
            return False
        r = r - Poly.monomial(f.field, quot, r_lead * f_lead_inv) * f
    return True


def exact_quotient(f: Poly, g: Poly):
    """g / f if f divides g exactly, else None."""
    if f.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    r = g
    q = Poly.zero(f.field)
    f_exps, f_lead = f.leading_term()
    f_lead_inv = f_lead.inverse()
    while not r.is_zero():
        r_exps, r_lead = r.leading_term()
        quot = tuple(a - b for a, b in zip(r_exps, f_exps))
        if any(e < 0 for e in quot):
            return None
        t = Poly.monomial(f.field, quot, r_lead * f_lead_inv)
        q = q + t
        r = r - t * f
    return q


def evaluate(f: Poly, coords) -> FieldElement:
    """Value of f at affine coordinates lying in an extension of f's field."""
    coords = list(coords)
    if len(coords) != NVARS:
        raise ValueError("need 4 coordinates")
    target = coords[0].desc
    for c in coords[1:]:
        if c.desc is not target:
            raise FieldMismatch("coordinates over different fields")
    if target is not f.field and not is_extension(f.field, target):
        raise FieldMismatch(f"{target} does not extend {f.field}")
    # precompute coordinate powers up to needed exponents
    maxe = [0] * NVARS
    for exps in f.terms:
        for i, e in enumerate(exps):
            maxe[i] = max(maxe[i], e)
    powers = []
    for i in range(NVARS):
        row = [target.one()]
        for _ in range(maxe[i]):
            row.append(row[-1] * coords[i])
        powers.append(row)
    total = target.zero()
    for exps, c in f.terms.items():
        v = embed(c, target)
        for i, e in enumerate(exps):
            if e:
                v = v * powers[i][e]
        total = total + v
    return total


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_poly(text: str, field: FieldDesc) -> Poly:
    return _Parser(text, field).parse()


class _Parser:
    def __init__(self, text: str, field: FieldDesc):
        self.text = text
        self.field = field
        self.pos = 0

    def parse(self) -> Poly:
        terms = {}
        self._skip_ws()
        sign = 1
        if self._peek() == "-":
            self.pos += 1
            sign = -1
        elif self._peek() == "+":
            raise PolySyntaxError("unexpected '+'", self.pos)
        exps, coeff = self._term()
        self._accumulate(terms, exps, coeff, sign)
        while True:
            self._skip_ws()
            ch = self._peek()
            if ch is None:
                break
            if ch == "+":
                sign = 1
            elif ch == "-":
                sign = -1
            else:
                raise PolySyntaxError(f"expected '+' or '-', found {ch!r}", self.pos)
            self.pos += 1
            exps, coeff = self._term()
            self._accumulate(terms, exps, coeff, sign)
        poly_terms = {e: c for e, c in terms.items() if not c.is_zero()}
        degrees = {sum(e) for e in poly_terms}
        if len(degrees) > 1:
            raise NotHomogeneous(f"monomials of total degrees {sorted(degrees)}")
        return Poly(self.field, poly_terms)

    def _accumulate(self, terms, exps, coeff, sign):
        if sign < 0:
            coeff = -coeff
        cur = terms.get(exps)
        terms[exps] = coeff if cur is None else cur + coeff

    def _term(self):
        self._skip_ws()
        coeff = self.field.one()
        exps = [0] * NVARS
        start = self.pos
        ch = self._peek()
        saw_anything = False
        if ch is not None and (ch.isdigit() or ch == "a"):
            coeff = self._coef()
            saw_anything = True
            self._skip_ws()
            if self._peek() == "*":
                self.pos += 1
                self._skip_ws()
                self._factor(exps)
                saw_anything = True
            elif self._peek() in ("X", "x"):
                self._factor(exps)
        while True:
            self._skip_ws()
            nxt = self._peek()
            if nxt == "*":
                save = self.pos
                self.pos += 1
                self._skip_ws()
                self._factor(exps)
            elif nxt in ("X", "x"):
                self._factor(exps)
            else:
                break
            saw_anything = True
        if not saw_anything and sum(exps) == 0:
            raise PolySyntaxError("expected a term", start)
        return tuple(exps), coeff

    def _factor(self, exps):
        self._skip_ws()
        ch = self._peek()
        if ch not in ("X", "x"):
            raise PolySyntaxError(f"expected a variable, found {ch!r}", self.pos)
        var_pos = self.pos
        self.pos += 1
        digit = self._peek()
        if digit is None or not digit.isdigit():
            raise UnknownVariable("variable index missing", var_pos)
        if digit not in "0123":
            raise UnknownVariable(f"unknown variable X{digit}", var_pos)
        self.pos += 1
        # a stray second digit like X12 is an unknown variable, not X1*2
        if self._peek() is not None and self._peek().isdigit():
            raise UnknownVariable(f"unknown variable X{digit}{self._peek()}", var_pos)
        idx = int(digit)
        exp = 1
        self._skip_ws()
        if self._peek() == "^":
            self.pos += 1
            exp = self._int()
            if exp < 0:
                raise PolySyntaxError("negative exponent", self.pos)
        exps[idx] += exp

    def _coef(self) -> FieldElement:
        self._skip_ws()
        ch = self._peek()
        if ch == "a":
            pos = self.pos
            if self.field.e == 1:
                raise BadFieldLiteral("generator literal 'a' needs an extension field", pos)
            self.pos += 1
            exp = 1
            if self._peek() == "^":
                self.pos += 1
                exp = self._int()
                if exp < 0:
                    raise BadFieldLiteral("negative generator power", pos)
            return self.field.gen() ** exp
        if ch is not None and ch.isdigit():
            return self.field.element(self._int())
        raise PolySyntaxError("expected a coefficient", self.pos)

    def _int(self) -> int:
        self._skip_ws()
        start = self.pos
        while self._peek() is not None and self._peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise PolySyntaxError("expected an integer", start)
        return int(self.text[start:self.pos])

    def _peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1


# ---------------------------------------------------------------------------
# Serialization (canonical form)
# ---------------------------------------------------------------------------

def _monomial_str(exps) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"X{i}")
        elif e > 1:
            parts.append(f"X{i}^{e}")
    return "*".join(parts)


def serialize(f: Poly) -> str:
    """Canonical text: graded-lex descending terms joined by ' + '.

    Extension-field coefficients are split into generator powers a^k; a
    GF(p)-multiple c*a^k with c > 1 is emitted as c repetitions of the term
    so the output stays inside the grammar.
    """
    if f.is_zero():
        return "0"
    chunks = []
    for exps, coeff in f.sorted_terms():
        mono = _monomial_str(exps)
        if f.field.e == 1:
            c = coeff.coeffs[0]
            if not mono:
                chunks.append(str(c))
            elif c == 1:
                chunks.append(mono)
            else:
                chunks.append(f"{c}*{mono}")
            continue
        for k in range(f.field.e - 1, -1, -1):
            ck = coeff.coeffs[k]
            if ck == 0:
                continue
            if k == 0:
                if not mono:
                    chunks.append(str(ck))
                elif ck == 1:
                    chunks.append(mono)
                else:
                    chunks.append(f"{ck}*{mono}")
            else:
                gen = "a" if k == 1 else f"a^{k}"
                piece = f"{gen}*{mono}" if mono else gen
                chunks.extend([piece] * ck)
    return " + ".join(chunks)
