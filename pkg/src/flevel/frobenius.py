"""Frobenius roots, bracket powers and the descending chain of root ideals.

Over F_p, R is free over R^(p^e) on the monomials x^mu with every exponent
below p^e, so each g splits uniquely as  g = sum_mu h_mu^(p^e) * x^mu.  The
root ideal (g)^[1/p^e] is generated by the h_mu.
"""

from dataclasses import dataclass, field

from .errors import InvalidExponent, NotHomogeneous
from .homideal import HomIdeal, minimal_subset
from .poly import Polynomial, frobenius_twist, grlex_key, poly_pow


@dataclass(frozen=True)
class RootDecomposition:
    e: int
    parts: dict = field(default_factory=dict)  # residue monomial mu -> h_mu
    nvars: int = 0

    def reassemble(self, template):
        total = Polynomial.zero(template.field, template.nvars)
        for mu, h in self.parts.items():
            total = total + frobenius_twist(h, self.e).shift(mu)
        return total

    def ordered(self):
        """(mu, h_mu) pairs with mu in grlex-descending order."""
        return sorted(self.parts.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)


def phi_decompose(g, e):
    if e < 1:
        raise InvalidExponent("the root level e must be positive")
    q = g.p ** e
    buckets = {}
    for m, c in g.terms.items():
        mu = tuple(a % q for a in m)
        buckets.setdefault(mu, {})[tuple(a // q for a in m)] = c
    parts = {mu: Polynomial._raw(g.field, g.nvars, t) for mu, t in buckets.items()}
    return RootDecomposition(e, parts, g.nvars)


def _root_candidates(gens, e):
    """All h_mu of all generators, in a deterministic order, with their origin."""
    out = []
    for idx, g in enumerate(gens):
        if not g.is_homogeneous():
            raise NotHomogeneous(f"{g} is not homogeneous")
        for mu, h in phi_decompose(g, e).ordered():
            out.append(((idx, mu), h))
    return out


def root_generators(gens, e):
    """Minimal list of ((generator index, mu), h_mu) generating the root ideal."""
    cands = _root_candidates(gens, e)
    # cheap scalar dedupe before the linear algebra
    seen = {}
    for key, h in cands:
        seen.setdefault(h.monic(), (key, h))
    uniq = list(seen.values())
    keep = minimal_subset([h for _, h in uniq])
    return [uniq[i] for i in keep]


def frobenius_root_ideal(gens, e):
    gens = list(gens.gens) if isinstance(gens, HomIdeal) else list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    chosen = root_generators(gens, e)
    if not chosen:
        return HomIdeal.zero(gens[0].field, gens[0].nvars)
    return HomIdeal([h for _, h in chosen])


def bracket_power(I, q):
    e = I.field.power_exponent(q)
    if e is None:
        raise InvalidExponent(f"{q} is not a power of p = {I.p}")
    if I.is_unit() or I.is_zero():
        return I
    return HomIdeal([frobenius_twist(g, e) for g in I.gens], I.field, I.nvars)


def chain_ideal(f, e):
    """J_e = (f^(p^e - 1))^[1/p^e], with J_0 the unit ideal."""
    if not f:
        raise ValueError("the chain is defined for nonzero f")
    if not f.is_homogeneous():
        raise NotHomogeneous(f"{f} is not homogeneous")
    if e == 0:
        return HomIdeal.unit(f.field, f.nvars)
    g = poly_pow(f, f.p ** e - 1)
    return frobenius_root_ideal([g], e)


def in_bracket_power(g, I, q):
    """Membership g in I^[q], decided on the Frobenius components of g.

    Uses that I^[q] is the direct sum of x^mu * (I^(q)) over residues mu, so
    g lies in it exactly when every h_mu lies in I.
    """
    e = I.field.power_exponent(q)
    if e is None or e == 0:
        raise InvalidExponent(f"{q} is not a positive power of p = {I.p}")
    return all(I.contains(h) for h in phi_decompose(g, e).parts.values())
