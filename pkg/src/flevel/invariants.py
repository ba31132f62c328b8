"""Level, HSL number, F-pure threshold bounds, grid jumps and ordinarity."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .errors import CutoffExceeded, InvalidExponent, NotHomogeneous, WrongDegree
from .frobenius import chain_ideal
from .homideal import HomIdeal
from .poly import Polynomial, poly_mul, poly_pow

DEFAULT_CUTOFF = 4


class FrobeniusChain:
    """Lazily computed, memoised chain J_0 ⊇ J_1 ⊇ ... for one polynomial."""

    def __init__(self, f, threads=1):
        if not f or f.degree() < 1:
            raise ValueError("the chain needs a nonzero non-constant polynomial")
        if not f.is_homogeneous():
            raise NotHomogeneous(f"{f} is not homogeneous")
        self.f = f
        self.threads = max(1, int(threads))
        self._ideals = {}

    def __getitem__(self, e):
        if e not in self._ideals:
            self._ideals[e] = chain_ideal(self.f, e)
        return self._ideals[e]

    def prefetch(self, indices):
        todo = [e for e in indices if e not in self._ideals]
        if self.threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                for e, J in zip(todo, pool.map(lambda k: chain_ideal(self.f, k), todo)):
                    self._ideals[e] = J

    def stable_at(self, e):
        """True when J_e = J_(e+1)."""
        self.prefetch([e, e + 1])
        return self[e].equals(self[e + 1])


def _as_chain(f, threads=1):
    return f if isinstance(f, FrobeniusChain) else FrobeniusChain(f, threads)


@dataclass
class LevelResult:
    stabilization_index: Optional[int]
    level: Optional[int]
    chain: List[HomIdeal]
    determined: bool = True


def level(f, cutoff=DEFAULT_CUTOFF, threads=1):
    """Level of f: one more than the first e with J_e = J_(e+1).

    Raises CutoffExceeded (carrying the partial result) when no equality is
    found among J_0..J_cutoff.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    ch = _as_chain(f, threads)
    for e in range(cutoff):
        if ch.stable_at(e):
            return LevelResult(e, e + 1, [ch[k] for k in range(e + 2)])
    partial = LevelResult(None, None, [ch[k] for k in range(cutoff + 1)], determined=False)
    raise CutoffExceeded(f"chain did not stabilise for e < {cutoff}", partial)


def hsl_number(f, cutoff=DEFAULT_CUTOFF, threads=1):
    """Smallest l >= 1 with J_l = J_(l+1) (test ideals at exponents 1 - 1/p^l)."""
    ch = _as_chain(f, threads)
    for ell in range(1, cutoff + 1):
        if ch.stable_at(ell):
            return ell
    raise CutoffExceeded(f"no HSL index found up to {cutoff}")


def largest_grid_jump(f, cutoff=DEFAULT_CUTOFF, threads=1):
    """Largest 1 - 1/p^k with J_(k-1) != J_k, or None when J_1 is the unit ideal."""
    res = level(f, cutoff, threads)
    k = res.stabilization_index
    if k == 0:
        return None
    p = (f.f if isinstance(f, FrobeniusChain) else f).p
    return 1 - Fraction(1, p**k)


def level_from_exponent(lam, F):
    """ceil(1 - log_p(1 - lam)) in exact integer arithmetic."""
    p = F.p if hasattr(F, "p") else int(F)
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise InvalidExponent(f"{lam} is not in the open interval (0, 1)")
    rest = 1 - lam
    a, den = rest.numerator, rest.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if den != 1:
        raise InvalidExponent(f"denominator of 1 - {lam} is not a power of {p}")
    target = p**k
    m, scaled = 1, a
    while scaled < target:
        m += 1
        scaled *= p
    return m


def _trunc_mul(a, b, q):
    # product modulo the monomial ideal (x_0^q, ..., x_n^q)
    p = a.p
    acc = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            if max(m) < q:
                acc[m] = acc.get(m, 0) + ca * cb
    return Polynomial._raw(a.field, a.nvars, {m: c % p for m, c in acc.items() if c % p})


def _trunc_pow(f, r, q):
    result = Polynomial.one(f.field, f.nvars)
    base = Polynomial._raw(f.field, f.nvars, {m: c for m, c in f.terms.items() if max(m) < q})
    while r:
        if r & 1:
            result = _trunc_mul(result, base, q)
        r >>= 1
        if r:
            base = _trunc_mul(base, base, q)
    return result


def outside_frobenius_power_of_max(f, r, q):
    """True when f^r is not in (x_0^q, ..., x_n^q)."""
    return bool(_trunc_pow(f, r, q))


def nu(f, e):
    """nu_f(p^e) = max{ r : f^r not in m^[p^e] }, by binary search."""
    if f.coefficient((0,) * f.nvars):
        raise ValueError("f must lie in the irrelevant maximal ideal")
    if not f:
        raise ValueError("nu is undefined for f = 0")
    q = f.p**e
    lo, hi = 0, q - 1  # invariant: f^lo is outside
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if outside_frobenius_power_of_max(f, mid, q):
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class FptBound:
    e: int
    nu: int
    lower: Fraction
    upper: Fraction


def fpt_bounds(f, e_max):
    """Nested intervals (nu/p^e, (nu+1)/p^e] containing the F-pure threshold."""
    out = []
    for e in range(1, e_max + 1):
        v = nu(f, e)
        q = f.p**e
        out.append(FptBound(e, v, Fraction(v, q), Fraction(v + 1, q)))
    return out


def hasse_witt_scalar(f):
    """Coefficient of (x_0...x_n)^(p-1) in f^(p-1); nonzero iff ordinary."""
    if not f.is_homogeneous() or f.degree() != f.nvars:
        raise WrongDegree(
            f"need a form of degree {f.nvars} in {f.nvars} variables, got degree {f.degree()}"
        )
    p = f.p
    return poly_pow(f, p - 1).coefficient((p - 1,) * f.nvars)


def is_ordinary_cy(f):
    return hasse_witt_scalar(f) != 0


def is_calabi_yau_shape(f):
    return f.is_homogeneous() and f.degree() == f.nvars and f.nvars >= 2


def above_cy_bound(f):
    """p > n^2 - n - 1 for a hypersurface in P^n (n = nvars - 1)."""
    n = f.nvars - 1
    return f.p > n * n - n - 1


@dataclass
class InvariantReport:
    level: LevelResult
    hsl: Optional[int]
    nu_values: List[int]
    fpt_interval: Optional[tuple]
    hasse_witt: Optional[int]
    ordinary: Optional[bool]
    grid_jump: Optional[Fraction]
    fpt: List[FptBound] = field(default_factory=list)
    above_cy_bound: Optional[bool] = None


def invariant_report(f, cutoff=DEFAULT_CUTOFF, e_max=2, threads=1):
    """All invariants of f sharing one chain computation.

    Propagates CutoffExceeded from the level computation.
    """
    ch = FrobeniusChain(f, threads)
    lv = level(ch, cutoff)
    hsl = hsl_number(ch, cutoff)
    k = lv.stabilization_index
    jump = None if k == 0 else 1 - Fraction(1, f.p**k)
    bounds = fpt_bounds(f, e_max) if e_max >= 1 else []
    hw = ordinary = bound = None
    if is_calabi_yau_shape(f):
        hw = hasse_witt_scalar(f)
        ordinary = hw != 0
        bound = above_cy_bound(f)
    return InvariantReport(
        level=lv,
        hsl=hsl,
        nu_values=[b.nu for b in bounds],
        fpt_interval=(bounds[-1].lower, bounds[-1].upper) if bounds else None,
        hasse_witt=hw,
        ordinary=ordinary,
        grid_jump=jump,
        fpt=bounds,
        above_cy_bound=bound,
    )
