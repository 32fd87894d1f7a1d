"""Exact arithmetic in GF(p^e) and its extensions, with compatible embeddings.

Every field is represented absolutely as GF(p)[X]/(m_e) where m_e is the first
monic irreducible of degree e (candidates ordered by their coefficient index,
most significant coefficient first).  Elements are coefficient tuples over
GF(p) in the basis 1, X, ..., X^(e-1).

Embeddings GF(p^a) -> GF(p^b) for a | b are the unique field maps sending the
canonical multiplicative generator g_a to g_b^((p^b-1)/(p^a-1)).  The g_m are
chosen as the first primitive element whose norms down the tower have the
minimal polynomials of the smaller generators, so composing embeddings along
any chain of subfields gives the same map as the direct embedding.
"""
from __future__ import annotations

import threading

from .errors import (
    DegreeTooLarge,
    DivisionByZero,
    FieldMismatch,
    NoCompatibleRoot,
    NotAnExtension,
    NotPrime,
)

MAX_EXTENSION_DEGREE = 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# Univariate arithmetic over GF(p).  Polynomials are little-endian int lists
# with no trailing zeros; [] is the zero polynomial.
# ---------------------------------------------------------------------------

def _trim(v):
    while v and v[-1] == 0:
        v.pop()
    return v


def _uadd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _usub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _umul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _umod(a, m, p):
    # m monic
    r = list(a)
    dm = len(m) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1]
        shift = len(r) - 1 - dm
        if lead:
            for i in range(dm + 1):
                r[shift + i] = (r[shift + i] - lead * m[i]) % p
        r.pop()
        _trim(r)
    return r


def _upowmod(a, n, m, p):
    result = [1]
    base = _umod(a, m, p)
    while n > 0:
        if n & 1:
            result = _umod(_umul(result, base, p), m, p)
        base = _umod(_umul(base, base, p), m, p)
        n >>= 1
    return result


def _ugcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _umod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _prime_factors(n: int):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(m, p):
    """Rabin's test: exact for monic m over GF(p)."""
    e = len(m) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    x = [0, 1]
    xq = _upowmod(x, p ** e, m, p)
    if _usub(xq, x, p):
        return False
    for r in _prime_factors(e):
        xr = _upowmod(x, p ** (e // r), m, p)
        g = _ugcd(_usub(xr, x, p), m, p)
        if len(g) != 1:
            return False
    return True


def _first_irreducible(p: int, e: int):
    """First monic irreducible of degree e, candidates ordered by coefficient
    index with the X^(e-1) coefficient most significant."""
    for idx in range(p ** e):
        coeffs = [0] * e
        a = idx
        for i in range(e):
            coeffs[i] = a % p
            a //= p
        m = coeffs + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError(f"no irreducible of degree {e} over GF({p})")


# ---------------------------------------------------------------------------
# Field descriptors
# ---------------------------------------------------------------------------

_FIELD_REGISTRY: dict = {}
_REGISTRY_LOCK = threading.Lock()


class FieldDesc:
    """Descriptor of GF(p^e): prime, extension degree and fixed modulus.

    Interned: make_field(p, e) always returns the same object, so identity
    comparison is safe and the modulus choice is deterministic.
    """

    __slots__ = (
        "p", "e", "modulus", "order",
        "_reduction_rows", "_generator", "_generator_minpoly",
        "_embed_cache", "_lock",
    )

    def __init__(self, p: int, e: int, modulus: tuple):
        self.p = p
        self.e = e
        self.modulus = modulus
        self.order = p ** e
        self._reduction_rows = self._build_reduction_rows()
        self._generator = None
        self._generator_minpoly = None
        self._embed_cache = {}
        self._lock = threading.Lock()

    def _build_reduction_rows(self):
        # X^(e+k) mod modulus for k = 0..e-2, as coefficient tuples.
        p, e, m = self.p, self.e, list(self.modulus)
        rows = []
        cur = [(-c) % p for c in m[:e]]  # X^e
        rows.append(tuple(cur))
        for _ in range(e - 2):
            nxt = [0] + cur[: e - 1]
            lead = cur[e - 1]
            if lead:
                for i in range(e):
                    nxt[i] = (nxt[i] + lead * rows[0][i]) % p
            rows.append(tuple(nxt))
            cur = nxt
        return rows

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    # --- element constructors ---

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.e)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.e - 1))

    def gen(self) -> "FieldElement":
        """Class of X: the root of the modulus (0 in a prime field)."""
        if self.e == 1:
            return self.zero()
        return FieldElement(self, (0, 1) + (0,) * (self.e - 2))

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.desc is not self:
                raise FieldMismatch(f"element of {value.desc} used in {self}")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.e - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.e:
            raise ValueError(f"need {self.e} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def from_index(self, idx: int) -> "FieldElement":
        coeffs = []
        for _ in range(self.e):
            coeffs.append(idx % self.p)
            idx //= self.p
        return FieldElement(self, tuple(coeffs))

    def elements(self):
        """All field elements in canonical (index) order."""
        for idx in range(self.order):
            yield self.from_index(idx)

    # --- canonical multiplicative generator (norm-compatible down the tower) ---

    def generator(self) -> "FieldElement":
        with self._lock:
            if self._generator is None:
                self._generator, self._generator_minpoly = _find_compatible_generator(self)
            return self._generator

    def generator_minpoly(self) -> tuple:
        self.generator()
        return self._generator_minpoly


def make_field(p: int, e: int) -> FieldDesc:
    """GF(p^e) with the deterministic modulus (same object per (p, e))."""
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not 1 <= e <= MAX_EXTENSION_DEGREE:
        raise DegreeTooLarge(f"extension degree {e} outside 1..{MAX_EXTENSION_DEGREE}")
    key = (p, e)
    with _REGISTRY_LOCK:
        desc = _FIELD_REGISTRY.get(key)
        if desc is None:
            desc = FieldDesc(p, e, _first_irreducible(p, e))
            _FIELD_REGISTRY[key] = desc
        return desc


# ---------------------------------------------------------------------------
# Field elements
# ---------------------------------------------------------------------------

class FieldElement:
    __slots__ = ("desc", "coeffs")

    def __init__(self, desc: FieldDesc, coeffs: tuple):
        self.desc = desc
        self.coeffs = coeffs

    # --- helpers ---

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.desc is not self.desc:
            raise FieldMismatch(f"{self.desc} vs {other.desc}")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def index(self) -> int:
        idx = 0
        for c in reversed(self.coeffs):
            idx = idx * self.desc.p + c
        return idx

    # --- arithmetic ---

    def __add__(self, other):
        self._check(other)
        p = self.desc.p
        return FieldElement(self.desc, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        p = self.desc.p
        return FieldElement(self.desc, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.desc.p
        return FieldElement(self.desc, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        desc = self.desc
        p, e = desc.p, desc.e
        if e == 1:
            return FieldElement(desc, ((self.coeffs[0] * other.coeffs[0]) % p,))
        a, b = self.coeffs, other.coeffs
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        out = list(prod[:e])
        rows = desc._reduction_rows
        for k in range(e, 2 * e - 1):
            ck = prod[k]
            if ck:
                row = rows[k - e]
                for i in range(e):
                    out[i] = (out[i] + ck * row[i]) % p
        return FieldElement(desc, tuple(out))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        desc = self.desc
        p = desc.p
        if desc.e == 1:
            return FieldElement(desc, (pow(self.coeffs[0], p - 2, p),))
        # extended Euclid against the modulus
        a = _trim(list(self.coeffs))
        m = list(desc.modulus)
        r0, r1 = m, a
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1
            q = []
            rem = list(r0)
            d1 = len(r1) - 1
            inv_lead = pow(r1[-1], p - 2, p)
            while rem and len(rem) - 1 >= d1:
                shift = len(rem) - 1 - d1
                c = (rem[-1] * inv_lead) % p
                while len(q) < shift + 1:
                    q.append(0)
                q[shift] = c
                for i in range(d1 + 1):
                    rem[shift + i] = (rem[shift + i] - c * r1[i]) % p
                _trim(rem)
            r0, r1 = r1, rem
            s0, s1 = s1, _usub(s0, _umul(q, s1, p), p)
        # r0 = gcd (a constant, nonzero since modulus irreducible)
        scale = pow(r0[0], p - 2, p)
        inv = [(c * scale) % p for c in s0]
        inv = _umod(inv, m, p)
        inv += [0] * (desc.e - len(inv))
        return FieldElement(desc, tuple(inv))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.desc.one()
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # --- comparisons and hashing ---

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.desc is other.desc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.desc), self.coeffs))

    def __repr__(self):
        return self.literal()

    def literal(self) -> str:
        """Display form: an integer for prime fields, a polynomial in `a` otherwise."""
        if self.desc.e == 1:
            return str(self.coeffs[0])
        parts = []
        for k in range(self.desc.e - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                base = "a" if k == 1 else f"a^{k}"
                parts.append(base if c == 1 else f"{c}*{base}")
        return "+".join(parts) if parts else "0"


def frobenius(elem: FieldElement, q: int) -> FieldElement:
    """q-power map (q the size of the base field acting on an extension element)."""
    return elem ** q


# ---------------------------------------------------------------------------
# Canonical generators and embeddings
# ---------------------------------------------------------------------------

def multiplicative_order(elem: FieldElement) -> int:
    if elem.is_zero():
        raise DivisionByZero("order of zero")
    n = elem.desc.order - 1
    order = n
    for r in _prime_factors(n):
        while order % r == 0 and (elem ** (order // r)) == elem.desc.one():
            order //= r
    return order


def _is_primitive(elem: FieldElement) -> bool:
    n = elem.desc.order - 1
    if n == 1:
        return not elem.is_zero()
    one = elem.desc.one()
    if elem.is_zero():
        return False
    for r in _prime_factors(n):
        if elem ** (n // r) == one:
            return False
    return True


def minimal_polynomial(elem: FieldElement) -> tuple:
    """Minimal polynomial over GF(p), little-endian integer tuple (monic)."""
    desc = elem.desc
    p = desc.p
    conjugates = [elem]
    cur = elem ** p
    while cur != elem:
        conjugates.append(cur)
        cur = cur ** p
    poly = [desc.one()]
    for c in conjugates:
        nxt = [desc.zero() for _ in range(len(poly) + 1)]
        for i, coeff in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + coeff
            nxt[i] = nxt[i] - coeff * c
        poly = nxt
    out = []
    for coeff in poly:
        if any(coeff.coeffs[1:]):
            raise AssertionError("minimal polynomial coefficient outside the prime field")
        out.append(coeff.coeffs[0])
    return tuple(out)


def _maximal_proper_divisors(m: int):
    return sorted({m // r for r in _prime_factors(m)}) if m > 1 else []


def _find_compatible_generator(desc: FieldDesc):
    """First primitive element whose norm to every maximal subfield is a root
    of that subfield's canonical generator minimal polynomial."""
    p, m = desc.p, desc.e
    n = desc.order - 1
    constraints = []
    for d in _maximal_proper_divisors(m):
        sub = make_field(p, d)
        constraints.append((n // (p ** d - 1), sub.generator_minpoly()))
    for idx in range(1, desc.order):
        cand = desc.from_index(idx)
        if not _is_primitive(cand):
            continue
        ok = True
        for exponent, minpoly in constraints:
            image = cand ** exponent
            if minimal_polynomial(image) != minpoly:
                ok = False
                break
        if ok:
            return cand, minimal_polynomial(cand)
    raise AssertionError(f"no compatible generator found for {desc}")


def _embedding_matrix(src: FieldDesc, dst: FieldDesc):
    """Images of 1, X, ..., X^(e-1) of src inside dst (list of FieldElements)."""
    if src.e == 1:
        return [dst.one()]
    g_src = src.generator()
    g_img = dst.generator() ** ((dst.order - 1) // (src.order - 1))
    if minimal_polynomial(g_img) != src.generator_minpoly():
        raise NoCompatibleRoot(f"generator image in {dst} is not a root of the {src} generator minpoly")
    # express X_src in the basis of powers of g_src (linear solve over GF(p))
    p, e = src.p, src.e
    cols = []
    acc = src.one()
    for _ in range(e):
        cols.append(list(acc.coeffs))
        acc = acc * g_src
    # solve sum_i lam_i * g^i = X  (coeff vector (0,1,0,...))
    mat = [[cols[j][i] for j in range(e)] for i in range(e)]
    rhs = [0] * e
    rhs[1] = 1
    lam = _solve_prime_linear(mat, rhs, p)
    if lam is None:
        raise NoCompatibleRoot(f"powers of the {src} generator do not span the field")
    x_img = dst.zero()
    acc = dst.one()
    for l in lam:
        if l:
            x_img = x_img + dst.element(l) * acc
        acc = acc * g_img
    # verify: modulus_src(x_img) == 0
    val = dst.zero()
    acc = dst.one()
    for c in src.modulus:
        if c:
            val = val + dst.element(c) * acc
        acc = acc * x_img
    if not val.is_zero():
        raise NoCompatibleRoot(f"computed image of the {src} generator is not a modulus root")
    images = [dst.one()]
    for _ in range(e - 1):
        images.append(images[-1] * x_img)
    return images


def _solve_prime_linear(mat, rhs, p):
    """Solve a square system over GF(p); returns None if singular."""
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] % p), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], p - 2, p)
        a[col] = [(x * inv) % p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def is_extension(src: FieldDesc, dst: FieldDesc) -> bool:
    return src.p == dst.p and dst.e % src.e == 0


def embed(elem: FieldElement, target: FieldDesc) -> FieldElement:
    """Image of elem under the canonical embedding into target."""
    src = elem.desc
    if src is target:
        return elem
    if not is_extension(src, target):
        raise NotAnExtension(f"{target} is not an extension of {src}")
    with src._lock:
        images = src._embed_cache.get(target)
    if images is None:
        images = _embedding_matrix(src, target)
        with src._lock:
            src._embed_cache[target] = images
    out = target.zero()
    for c, img in zip(elem.coeffs, images):
        if c:
            out = out + target.element(c) * img
    return out


def extension_of(desc: FieldDesc, k: int) -> FieldDesc:
    """GF(q^k) for q the order of desc."""
    return make_field(desc.p, desc.e * k)
