"""Differential operators of bounded level and witnesses for the level.

An operator is a finite sum of terms  post ∘ core ∘ pre,  where ``pre`` and
``post`` multiply by polynomials and ``core`` is either a divided-power
product  prod_i D_{t_i, i}  or a Frobenius-dual projection  pi_{e, mu}.
Both cores are linear over p^E-th powers once t_i < p^E, resp. e <= E.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import (
    InvalidCongruence,
    InvalidExponent,
    MismatchedContext,
    NotHomogeneous,
    VerificationFailed,
)
from .field import PrimeField, lucas_binomial
from .frobenius import phi_decompose, root_generators
from .homideal import express
from .poly import Polynomial, frobenius_twist, poly_pow


@dataclass(frozen=True)
class DProduct:
    """prod_i D_{t_i, i}:  x^a  ->  prod_i C(a_i, t_i) * x^(a - t)."""

    t: Tuple[int, ...]

    def max_level_index(self, p):
        top = max(self.t, default=0)
        e = 0
        while p**e <= top:
            e += 1
        return max(e, 1)

    def act(self, g):
        t = self.t
        if len(t) != g.nvars:
            raise MismatchedContext("D-product index length does not match nvars")
        p = g.p
        cache = {}
        out = {}
        for m, c in g.terms.items():
            coef = c
            for a, s in zip(m, t):
                if a < s:
                    coef = 0
                    break
                key = (a, s)
                b = cache.get(key)
                if b is None:
                    b = cache[key] = lucas_binomial(a, s, p)
                coef = coef * b % p
                if not coef:
                    break
            if coef:
                k = tuple(a - s for a, s in zip(m, t))
                out[k] = (out.get(k, 0) + coef) % p
        return Polynomial(g.field, g.nvars, out)

    def text(self):
        return "D(%s)" % ",".join(map(str, self.t))


@dataclass(frozen=True)
class Projection:
    """pi_{e, mu}:  x^a  ->  x^(a - mu) when a ≡ mu (mod p^e), else 0."""

    e: int
    mu: Tuple[int, ...]

    def max_level_index(self, p):
        return self.e

    def act(self, g):
        if len(self.mu) != g.nvars:
            raise MismatchedContext("projection residue length does not match nvars")
        h = phi_decompose(g, self.e).parts.get(self.mu)
        if h is None:
            return Polynomial.zero(g.field, g.nvars)
        return frobenius_twist(h, self.e)

    def text(self):
        return "P(%d;%s)" % (self.e, ",".join(map(str, self.mu)))


@dataclass(frozen=True)
class OpTerm:
    post: Polynomial
    core: object
    pre: Polynomial


class DiffOp:
    """Sum of  post ∘ core ∘ pre  terms, with a declared level E."""

    def __init__(self, terms, level, field, nvars):
        if not isinstance(field, PrimeField):
            field = PrimeField(field)
        self.field = field
        self.nvars = nvars
        self.level = level
        clean = []
        for term in terms:
            if not isinstance(term, OpTerm):
                term = OpTerm(*term)
            for poly in (term.post, term.pre):
                if poly.field != field or poly.nvars != nvars:
                    raise MismatchedContext("operator term lives in a different ring")
            if term.core.max_level_index(field.p) > level:
                raise InvalidExponent(f"core {term.core.text()} exceeds declared level {level}")
            if term.post and term.pre:
                clean.append(term)
        self.terms = tuple(clean)

    @classmethod
    def zero(cls, field, nvars, level=1):
        return cls([], level, field, nvars)

    @property
    def p(self):
        return self.field.p

    def apply(self, g):
        if g.field != self.field or g.nvars != self.nvars:
            raise MismatchedContext("operator and polynomial live in different rings")
        total = Polynomial.zero(self.field, self.nvars)
        for term in self.terms:
            arg = g if term.pre == 1 else term.pre * g
            image = term.core.act(arg)
            if image:
                total = total + term.post * image
        return total

    __call__ = apply

    def __add__(self, other):
        if (other.field, other.nvars) != (self.field, self.nvars):
            raise MismatchedContext("operators live in different rings")
        return DiffOp(self.terms + other.terms, max(self.level, other.level), self.field, self.nvars)

    def post_multiply(self, q):
        """The operator  q * self."""
        if isinstance(q, int):
            q = Polynomial.constant(self.field, self.nvars, q)
        return DiffOp(
            [OpTerm(q * t.post, t.core, t.pre) for t in self.terms], self.level, self.field, self.nvars
        )

    __rmul__ = post_multiply

    def to_text(self):
        from .parse import format_operator
        return format_operator(self)

    def __repr__(self):
        return f"DiffOp(p={self.p}, nvars={self.nvars}, level={self.level}, terms={len(self.terms)})"


@dataclass
class OperatorCertificate:
    op: DiffOp
    e: int
    residual: Polynomial
    valid: bool
    proportional_unit: Optional[int] = None
    method: str = ""


def verify_level_operator(op, f, e):
    """Check op(f^(p^e - 1)) == f^(p^e - p), and report a proportional unit if any."""
    p = f.p
    image = op.apply(poly_pow(f, p**e - 1))
    target = poly_pow(f, p**e - p)
    residual = image - target
    unit = None
    if image and target:
        lm = target.leading_monomial()
        c = image.coefficient(lm) * f.field.inv(target.coefficient(lm)) % p
        if c and image == target.scale(c):
            unit = c
    return OperatorCertificate(op, e, residual, not residual, unit)


def fermat_poly(n, F):
    """x_0^(n+1) + ... + x_n^(n+1)."""
    F = F if isinstance(F, PrimeField) else PrimeField(F)
    terms = {}
    for i in range(n + 1):
        m = [0] * (n + 1)
        m[i] = n + 1
        terms[tuple(m)] = 1
    return Polynomial(F, n + 1, terms)


def _check_fermat_args(n, F):
    if n < 2 or F.p <= n:
        raise InvalidExponent(f"need p > n >= 2, got n={n}, p={F.p}")


def fermat_psi1(n, F, normalize=True):
    """prod_i D_{p-1, i}, scaled so that it sends f_n^(p-1) to 1."""
    F = F if isinstance(F, PrimeField) else PrimeField(F)
    _check_fermat_args(n, F)
    p = F.p
    if (p - 1) % (n + 1):
        raise InvalidCongruence(f"p = {p} is not 1 mod {n + 1}")
    scale = 1
    if normalize:
        f = fermat_poly(n, F)
        c = poly_pow(f, p - 1).coefficient((p - 1,) * (n + 1))
        scale = F.inv(c)
    nv = n + 1
    core = DProduct((p - 1,) * nv)
    term = OpTerm(Polynomial.constant(F, nv, scale), core, Polynomial.one(F, nv))
    return DiffOp([term], 1, F, nv)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for a in range(total, -1, -1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def delta_target(n, p, j):
    """Exponent vector k (monomial x^((n+1)k) of f_n^(p^2-1)) isolated by delta_j.

    The classical choice is k_i = p for i != j.  It needs
    (n+1)k_j <= 2p^2 - 1, which only holds for small p; otherwise the first
    carry-free split of p^2 - 1 (so the multinomial is a unit mod p) that
    keeps every multiplier exponent non-negative is used.  Returns None when
    no such split exists.
    """
    nv = n + 1
    q = p * p
    caps = [(q - 1) // nv] * nv
    caps[j] = (2 * q - 1) // nv
    classic = [p] * nv
    classic[j] = q - 1 - n * p
    if classic[j] >= 0 and all(k <= c for k, c in zip(classic, caps)):
        return tuple(classic)
    for high in _compositions(p - 1, nv):
        room = [min(p - 1, c - h * p) for h, c in zip(high, caps)]
        if min(room) < 0 or sum(room) < p - 1:
            continue
        low, left = [], p - 1
        for r in room:
            take = min(r, left)
            low.append(take)
            left -= take
        return tuple(h * p + l for h, l in zip(high, low))
    return None


def _delta_op(F, n, k, j):
    p = F.p
    nv = n + 1
    q = p * p
    m = [q - 1 - nv * ki for ki in k]
    m[j] = 2 * q - 1 - nv * k[j]
    if min(m) < 0:
        raise InvalidExponent(f"multiplier exponent {min(m)} is negative for n={n}, p={p}")
    term = OpTerm(Polynomial.one(F, nv), DProduct((q - 1,) * nv), Polynomial.monomial(F, m))
    return DiffOp([term], 2, F, nv)


def fermat_delta_j(n, F, j):
    """x_0^b ... x_j^(2p^2-1-alpha) ... x_n^b precomposed with prod_i D_{p^2-1, i}.

    With alpha = (n+1)(p^2-1) - n(n+1)p and b = p^2 - 1 - (n+1)p; the
    multiplier is applied to the argument first.  Raises InvalidExponent
    when either exponent is negative (p = n + 1, or p too large for the
    classical target monomial).
    """
    F = F if isinstance(F, PrimeField) else PrimeField(F)
    _check_fermat_args(n, F)
    if not 0 <= j <= n:
        raise ValueError(f"index j={j} out of range")
    p = F.p
    k = [p] * (n + 1)
    k[j] = p * p - 1 - n * p
    return _delta_op(F, n, k, j)


def general_delta_j(n, F, j):
    """delta_j built on delta_target(n, p, j); equals fermat_delta_j when that one exists."""
    F = F if isinstance(F, PrimeField) else PrimeField(F)
    _check_fermat_args(n, F)
    k = delta_target(n, F.p, j)
    if k is None:
        raise InvalidExponent(f"no admissible target monomial for n={n}, p={F.p}, j={j}")
    return _delta_op(F, n, k, j)


def pigeonhole_assignment(n, F):
    """Split f_n^(p^2-p) as sum_j q_j * x_j^(p^2).

    Each monomial goes to the smallest index whose exponent is at least p^2.
    """
    p = F.p
    q = p * p
    nv = n + 1
    g = poly_pow(fermat_poly(n, F), q - p)
    parts = [dict() for _ in range(nv)]
    for m, c in g.sorted_terms():
        for j, a in enumerate(m):
            if a >= q:
                k = list(m)
                k[j] -= q
                parts[j][tuple(k)] = c
                break
        else:
            raise VerificationFailed(f"monomial {m} has no exponent >= p^2")
    return [Polynomial(F, nv, t) for t in parts]


def fermat_level2(n, F):
    """A certified operator sending f_n^(p^2-1) to f_n^(p^2-p)."""
    F = F if isinstance(F, PrimeField) else PrimeField(F)
    _check_fermat_args(n, F)
    p = F.p
    f = fermat_poly(n, F)
    nv = n + 1
    balanced = poly_pow(f, p * p - p).coefficient((p * p - p,) * nv)
    if balanced:
        op = fermat_psi1(n, F)
        method = "psi1"
    elif nv % p == 0 or any(delta_target(n, p, j) is None for j in range(nv)):
        # p | n+1: the delta_j no longer isolate a single monomial
        cert = synthesize(f, 2)
        if cert is None:
            raise VerificationFailed(f"no level-2 operator found for n={n}, p={p}")
        cert.method = "synthesized"
        return cert
    else:
        qs = pigeonhole_assignment(n, F)
        big = poly_pow(f, p * p - 1)
        terms = []
        for j in range(nv):
            (term,) = general_delta_j(n, F, j).terms
            image = term.core.act(term.pre * big)
            target = [0] * nv
            target[j] = p * p
            c = image.coefficient(target)
            if not c or len(image) != 1:
                raise VerificationFailed(f"delta_{j} does not map f^(p^2-1) to a multiple of x_{j}^(p^2)")
            terms.append(OpTerm(qs[j].scale(F.inv(c)), term.core, term.pre))
        op = DiffOp(terms, 2, F, nv)
        method = "pigeonhole"
    cert = verify_level_operator(op, f, 2)
    cert.method = method
    if not cert.valid:
        raise VerificationFailed("assembled operator failed verification", cert.residual)
    return cert


def synthesize(f, e):
    """Find op in D^(e) with op(f^(p^e-1)) = f^(p^e-p), or None if none exists.

    Such an operator exists exactly when J_(e-1) = J_e, i.e. when the level
    of f is at most e.  The operator is a combination of projections
    pi_{e, mu} with polynomial post-multipliers.
    """
    if e < 1:
        raise InvalidExponent("operator level must be positive")
    if not f.is_homogeneous():
        raise NotHomogeneous(f"{f} is not homogeneous")
    p = f.p
    q = p**e
    g = poly_pow(f, q - 1)
    chosen = root_generators([g], e)
    mus = [mu for (_, mu), _ in chosen]
    hs = [h for _, h in chosen]
    target = poly_pow(f, q - p)
    field, nv = f.field, f.nvars
    coeffs = [Polynomial.zero(field, nv) for _ in hs]
    # target ∈ (h^q) iff each Frobenius component of target lies in (h)
    for nu_, u in phi_decompose(target, e).ordered():
        b = express(u, hs) if hs else None
        if b is None:
            return None
        for k, bk in enumerate(b):
            if bk:
                coeffs[k] = coeffs[k] + frobenius_twist(bk, e).shift(nu_)
    one = Polynomial.one(field, nv)
    terms = [OpTerm(a, Projection(e, mu), one) for a, mu in zip(coeffs, mus) if a]
    op = DiffOp(terms, e, field, nv)
    cert = verify_level_operator(op, f, e)
    cert.method = "synthesized"
    if not cert.valid:
        raise VerificationFailed("synthesized operator failed verification", cert.residual)
    return cert
