"""Sparse multivariate polynomials over a prime field.

Monomials are exponent tuples ``(a_0, ..., a_n)``.  Iteration and printing
use graded-lex order, largest monomial first.
"""

from operator import add

from .errors import DegreeOverflow, MismatchedContext
from .field import PrimeField, base_digits

EXPONENT_LIMIT = 2**31


def grlex_key(m):
    return (sum(m), m)


def monomials_of_degree(nvars, d):
    """All monomials of total degree d in nvars variables, grlex-descending."""
    if nvars == 0:
        if d == 0:
            yield ()
        return
    if nvars == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - a):
            yield (a,) + rest


def count_monomials(nvars, d):
    from math import comb
    return comb(d + nvars - 1, nvars - 1)


class Polynomial:
    """Immutable sparse polynomial: a dict from exponent tuples to ints in [1, p)."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field, nvars, terms=None):
        if not isinstance(field, PrimeField):
            field = PrimeField(field)
        self.field = field
        self.nvars = nvars
        p = field.p
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != nvars:
                    raise MismatchedContext(f"monomial {m} does not have {nvars} exponents")
                if any(a < 0 for a in m):
                    raise ValueError(f"negative exponent in {m}")
                if any(a >= EXPONENT_LIMIT for a in m):
                    raise DegreeOverflow(f"exponent in {m} exceeds the 32-bit guard")
                c = (clean.get(m, 0) + c) % p
                if c:
                    clean[m] = c
                else:
                    clean.pop(m, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, nvars, terms):
        # terms already reduced, nonzero, well-formed
        obj = object.__new__(cls)
        obj.field = field
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, field, nvars):
        return cls._raw(_as_field(field), nvars, {})

    @classmethod
    def constant(cls, field, nvars, c):
        field = _as_field(field)
        c %= field.p
        return cls._raw(field, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, field, nvars):
        return cls.constant(field, nvars, 1)

    @classmethod
    def monomial(cls, field, exponents, c=1):
        exponents = tuple(exponents)
        return cls(field, len(exponents), {exponents: c})

    @classmethod
    def variable(cls, field, nvars, i):
        m = [0] * nvars
        m[i] = 1
        return cls.monomial(field, m)

    # inspection

    @property
    def p(self):
        return self.field.p

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degrees(self):
        return {sum(m) for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def homogeneous_components(self):
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(sum(m), {})[m] = c
        return {d: Polynomial._raw(self.field, self.nvars, t) for d, t in sorted(parts.items())}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    def leading_monomial(self):
        return max(self.terms, key=grlex_key) if self.terms else None

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()] if self.terms else 0

    def coefficient(self, m):
        return self.terms.get(tuple(m), 0)

    def max_exponents(self):
        mx = [0] * self.nvars
        for m in self.terms:
            for i, a in enumerate(m):
                if a > mx[i]:
                    mx[i] = a
        return mx

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            _check_context(self, other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.field, self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Polynomial._raw(self.field, self.nvars, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, m):
        return poly_pow(self, m)

    def scale(self, c):
        p = self.p
        c %= p
        if not c:
            return Polynomial.zero(self.field, self.nvars)
        if c == 1:
            return self
        return Polynomial._raw(self.field, self.nvars, {m: v * c % p for m, v in self.terms.items()})

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient()))

    def shift(self, m):
        """Multiply by the monomial x^m."""
        m = tuple(m)
        if len(m) != self.nvars:
            raise MismatchedContext("monomial length does not match nvars")
        _guard(a + b for a, b in zip(self.max_exponents(), m))
        return Polynomial._raw(
            self.field, self.nvars, {tuple(map(add, k, m)): c for k, c in self.terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.field, self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, p={self.p}, nvars={self.nvars})"

    def __str__(self):
        return format_poly(self)


def _as_field(field):
    return field if isinstance(field, PrimeField) else PrimeField(field)


def _check_context(a, b):
    if a.field != b.field or a.nvars != b.nvars:
        raise MismatchedContext(
            f"cannot combine polynomials over F_{a.p} in {a.nvars} variables "
            f"and F_{b.p} in {b.nvars} variables"
        )


def _guard(exponents):
    if any(a >= EXPONENT_LIMIT for a in exponents):
        raise DegreeOverflow("exponent exceeds the 32-bit guard")


def poly_add(a, b):
    _check_context(a, b)
    if len(a.terms) < len(b.terms):
        a, b = b, a
    p = a.p
    terms = dict(a.terms)
    for m, c in b.terms.items():
        v = (terms.get(m, 0) + c) % p
        if v:
            terms[m] = v
        else:
            del terms[m]
    return Polynomial._raw(a.field, a.nvars, terms)


def poly_mul(a, b):
    _check_context(a, b)
    if not a.terms or not b.terms:
        return Polynomial.zero(a.field, a.nvars)
    _guard(x + y for x, y in zip(a.max_exponents(), b.max_exponents()))
    if len(a.terms) > len(b.terms):
        a, b = b, a
    p = a.p
    acc = {}
    get = acc.get
    bterms = list(b.terms.items())
    for ma, ca in a.terms.items():
        for mb, cb in bterms:
            m = tuple(map(add, ma, mb))
            acc[m] = get(m, 0) + ca * cb
    terms = {}
    for m, c in acc.items():
        c %= p
        if c:
            terms[m] = c
    return Polynomial._raw(a.field, a.nvars, terms)


def _small_pow(f, m):
    result = Polynomial.one(f.field, f.nvars)
    base = f
    while m:
        if m & 1:
            result = poly_mul(result, base)
        m >>= 1
        if m:
            base = poly_mul(base, base)
    return result


def poly_pow(f, m):
    """f**m, assembled from the base-p digits of m.

    Since g -> g^p is additive in characteristic p, f^m is the product of
    frobenius_twist(f^d_i, i) over the digits d_i of m.  For m = p^e - 1 this
    needs a single generic power f^(p-1).
    """
    if m < 0:
        raise ValueError("negative power")
    if m == 0:
        return Polynomial.one(f.field, f.nvars)
    p = f.p
    small = {}
    result = None
    for i, d in enumerate(base_digits(m, p)):
        if not d:
            continue
        if d not in small:
            small[d] = _small_pow(f, d)
        piece = frobenius_twist(small[d], i)
        result = piece if result is None else poly_mul(result, piece)
    return result


def frobenius_twist(f, e):
    """f^(p^e), obtained by scaling every exponent by p^e."""
    if e < 0:
        raise ValueError("negative Frobenius power")
    if e == 0:
        return f
    q = f.p ** e
    _guard(a * q for a in f.max_exponents())
    return Polynomial._raw(
        f.field, f.nvars, {tuple(a * q for a in m): c for m, c in f.terms.items()}
    )


def coefficient_of(f, m):
    return f.terms.get(tuple(m), 0)


def format_monomial(m, names=None):
    parts = []
    for i, a in enumerate(m):
        if not a:
            continue
        name = names[i] if names else f"x{i}"
        parts.append(name if a == 1 else f"{name}^{a}")
    return "*".join(parts)


def format_poly(f, names=None):
    """Canonical text: grlex-descending terms, coefficients in [1, p)."""
    if not f.terms:
        return "0"
    out = []
    for m, c in f.sorted_terms():
        mono = format_monomial(m, names)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)
