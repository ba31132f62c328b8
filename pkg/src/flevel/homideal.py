"""Homogeneous ideals decided degree by degree with exact linear algebra.

The degree-d slice of a homogeneous ideal is the F_p-span of the products
m*g (g a generator, m a monomial of degree d - deg g).  Membership,
inclusion and explicit expressions all reduce to sparse Gaussian
elimination inside one slice, so no Groebner basis is ever needed.
"""

import heapq
import threading

from .errors import MismatchedContext, NotHomogeneous
from .poly import Polynomial, grlex_key, monomials_of_degree

# set by the test-suite: re-multiply every solution returned by express()
VERIFY_EXPRESS = False


def _heap_key(m):
    return tuple(-a for a in m)


class Echelon:
    """Semi-echelon basis of a subspace of one homogeneous slice.

    Each stored row is keyed by its leading (grlex-largest) monomial and is
    normalised so that the leading coefficient is 1.  When ``track`` is set,
    every row also carries the combination of input rows it came from.
    """

    def __init__(self, p, track=False):
        self.p = p
        self.track = track
        self.rows = {}
        self.combos = {}

    def __len__(self):
        return len(self.rows)

    rank = property(__len__)

    def reduce(self, vec, combo=None):
        """Return (remainder, combo') with vec - remainder = sum combo' * rows."""
        p = self.p
        rows = self.rows
        work = dict(vec)
        heap = [_heap_key(m) for m in work]
        heapq.heapify(heap)
        rem = {}
        combo = dict(combo) if combo is not None else ({} if self.track else None)
        while heap:
            m = tuple(-a for a in heapq.heappop(heap))
            c = work.pop(m) % p
            if not c:
                continue
            row = rows.get(m)
            if row is None:
                rem[m] = c
                continue
            for k, v in row.items():
                if k == m:
                    continue
                old = work.get(k)
                if old is None:
                    work[k] = -c * v
                    heapq.heappush(heap, _heap_key(k))
                else:
                    work[k] = old - c * v
            if combo is not None:
                for k, v in self.combos[m].items():
                    combo[k] = (combo.get(k, 0) - c * v) % p
        return rem, combo

    def add(self, vec, combo=None):
        """Insert a row; return True when it enlarged the span."""
        rem, combo = self.reduce(vec, combo)
        if not rem:
            return False
        lead = next(iter(rem))  # remainder is filled in descending order
        inv = pow(rem[lead], -1, self.p)
        p = self.p
        self.rows[lead] = {k: v * inv % p for k, v in rem.items()}
        if combo is not None:
            self.combos[lead] = {k: v * inv % p for k, v in combo.items() if v % p}
        return True

    def contains(self, vec):
        return not self.reduce(vec)[0]

    def reduced_rows(self):
        """Rows of the reduced row-echelon form, leading monomial first."""
        p = self.p
        out = {}
        for lead in sorted(self.rows, key=grlex_key):
            row = self.rows[lead]
            tail = {k: v for k, v in row.items() if k != lead}
            rem, _ = _reduce_plain(tail, out, p)
            rem[lead] = 1
            out[lead] = rem
        return [out[m] for m in sorted(out, key=grlex_key, reverse=True)]


def _reduce_plain(vec, rows, p):
    e = Echelon(p)
    e.rows = rows
    return e.reduce(vec)


def _poly_key(g):
    # by degree, then larger leading monomials first
    return (g.degree(), [tuple(-a for a in m) + (c,) for m, c in g.sorted_terms()])


class HomIdeal:
    """A homogeneous ideal of F_p[x_0..x_n] given by generators.

    Generators are made monic, deduplicated and sorted by degree.  Degree
    slices are computed on demand and cached.
    """

    def __init__(self, gens, field=None, nvars=None):
        gens = list(gens)
        if gens:
            field = gens[0].field
            nvars = gens[0].nvars
        if field is None or nvars is None:
            raise ValueError("an ideal without generators needs field and nvars")
        seen = {}
        for g in gens:
            if g.field != field or g.nvars != nvars:
                raise MismatchedContext("generators live in different rings")
            if not g.is_homogeneous():
                raise NotHomogeneous(f"generator {g} is not homogeneous")
            if g:
                g = g.monic()
                seen.setdefault(g, None)
        gens = sorted(seen, key=_poly_key)
        if gens and gens[0].degree() == 0:
            gens = [gens[0]]
        self.field = field
        self.nvars = nvars
        self.gens = tuple(gens)
        self._slices = {}
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, field, nvars):
        return cls([Polynomial.one(field, nvars)])

    @classmethod
    def zero(cls, field, nvars):
        return cls([], field, nvars)

    @classmethod
    def maximal(cls, field, nvars):
        """The irrelevant ideal (x_0, ..., x_n)."""
        return cls([Polynomial.variable(field, nvars, i) for i in range(nvars)])

    @property
    def p(self):
        return self.field.p

    def __repr__(self):
        return "HomIdeal(%s)" % ", ".join(str(g) for g in self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def is_unit(self):
        return bool(self.gens) and self.gens[0].degree() == 0

    def is_zero(self):
        return not self.gens

    def degree_slice(self, d):
        with self._lock:
            slc = self._slices.get(d)
            if slc is None:
                slc = Echelon(self.p)
                for g in self.gens:
                    k = d - g.degree()
                    if k < 0:
                        break
                    for m in monomials_of_degree(self.nvars, k):
                        slc.add(g.shift(m).terms)
                self._slices[d] = slc
            return slc

    def degree_basis(self, d):
        """Reduced row-echelon basis of the degree-d part, as polynomials."""
        rows = self.degree_slice(d).reduced_rows()
        return [Polynomial._raw(self.field, self.nvars, r) for r in rows]

    def rank(self, d):
        return self.degree_slice(d).rank

    def contains(self, g):
        if g.field != self.field or g.nvars != self.nvars:
            raise MismatchedContext("polynomial and ideal live in different rings")
        if self.is_unit():
            return True
        for d, part in g.homogeneous_components().items():
            if not self.degree_slice(d).contains(part.terms):
                return False
        return True

    __contains__ = contains

    def is_subset(self, other):
        return all(other.contains(g) for g in self.gens)

    def equals(self, other):
        return self.is_subset(other) and other.is_subset(self)

    def minimalized(self):
        """The same ideal with redundant generators removed."""
        return HomIdeal([self.gens[i] for i in minimal_subset(self.gens)], self.field, self.nvars)

    def bracket_power(self, q):
        from .frobenius import bracket_power
        return bracket_power(self, q)


def minimal_subset(gens):
    """Indices of a minimal generating subset, chosen greedily in order of degree.

    A generator is kept only if it is not in the ideal spanned by the kept
    generators of smaller degree and the earlier kept ones of equal degree.
    """
    gens = list(gens)
    order = sorted(range(len(gens)), key=lambda i: (gens[i].degree(), i))
    kept = []
    i = 0
    while i < len(order):
        d = gens[order[i]].degree()
        if d < 0:
            i += 1
            continue
        if kept and gens[kept[0]].degree() == 0:
            break
        nvars = gens[order[i]].nvars
        slc = Echelon(gens[order[i]].p)
        for k in kept:
            g = gens[k]
            for m in monomials_of_degree(nvars, d - g.degree()):
                slc.add(g.shift(m).terms)
        while i < len(order) and gens[order[i]].degree() == d:
            if slc.add(gens[order[i]].terms):
                kept.append(order[i])
            i += 1
    return kept


def express(g, gens):
    """Solve g = sum a_i * gens[i] with homogeneous a_i, or return None.

    The solution is the one produced by elimination with rows inserted in
    generator order and grlex-descending multiplier order.
    """
    gens = list(gens)
    if not g.is_homogeneous() or not all(h.is_homogeneous() for h in gens):
        raise NotHomogeneous("express needs homogeneous input")
    field, nvars = g.field, g.nvars
    for h in gens:
        if h.field != field or h.nvars != nvars:
            raise MismatchedContext("generators live in a different ring")
    zero = Polynomial.zero(field, nvars)
    if not g:
        return [zero] * len(gens)
    d = g.degree()
    slc = Echelon(field.p, track=True)
    for i, h in enumerate(gens):
        if not h:
            continue
        k = d - h.degree()
        if k < 0:
            continue
        for m in monomials_of_degree(nvars, k):
            slc.add(h.shift(m).terms, {(i, m): 1})
    rem, combo = slc.reduce(g.terms, {})
    if rem:
        return None
    # g - 0 = -combo . rows  =>  g = sum(-combo) * inputs
    coeffs = [{} for _ in gens]
    p = field.p
    for (i, m), c in combo.items():
        c = -c % p
        if c:
            coeffs[i][m] = c
    result = [Polynomial._raw(field, nvars, t) for t in coeffs]
    if VERIFY_EXPRESS:
        total = zero
        for a, h in zip(result, gens):
            total = total + a * h
        assert total == g, "express produced a wrong certificate"
    return result
