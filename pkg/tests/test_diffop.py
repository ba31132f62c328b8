import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flevel.diffop import (
    DiffOp,
    DProduct,
    OpTerm,
    Projection,
    delta_target,
    fermat_delta_j,
    fermat_level2,
    fermat_poly,
    fermat_psi1,
    general_delta_j,
    pigeonhole_assignment,
    synthesize,
    verify_level_operator,
)
from flevel.errors import InvalidCongruence, InvalidExponent, MismatchedContext
from flevel.field import PrimeField
from flevel.frobenius import bracket_power, chain_ideal, frobenius_root_ideal, phi_decompose
from flevel.homideal import HomIdeal
from flevel.invariants import level
from flevel.parse import format_operator, parse_operator, parse_poly
from flevel.poly import Polynomial, frobenius_twist, poly_pow

from conftest import random_form
from oracles import fermat_expansion, multinomial

GOLDEN = Path(__file__).parent / "data" / "fermat_p5_n2_operator.txt"

# the displayed p = 5, n = 2 operator: coefficient of delta_j for j = 0, 1, 2
DISPLAYED_COEFFS = [
    "x0^35 + x0^5*x1^30 - x0^20*x1^15 - x0^20*x2^15 + 2*x0^5*x1^15*x2^15",
    "x1^35 + x1^5*x2^30 - x0^15*x1^20 - x1^20*x2^15 + 2*x0^15*x1^5*x2^15",
    "x2^35 + x2^5*x0^30 - x0^15*x2^20 - x1^15*x2^20 + 2*x0^15*x1^15*x2^5",
]


def P(text, p, nvars=None):
    return parse_poly(text, p, nvars)


def single(core, F, nvars, level):
    one = Polynomial.one(F, nvars)
    return DiffOp([OpTerm(one, core, one)], level, F, nvars)


def displayed_operator():
    F = PrimeField(5)
    terms = []
    for j, q in enumerate(DISPLAYED_COEFFS):
        (t,) = fermat_delta_j(2, F, j).terms
        terms.append(OpTerm(P(q, F, 3), t.core, t.pre))
    return DiffOp(terms, 2, F, 3)


def test_apply_examples():
    F = PrimeField(5)
    d10 = single(DProduct((1,)), F, 1, 1)
    assert d10.apply(P("x^2", F)) == P("2*x", F)
    d = single(DProduct((24, 24, 24)), F, 3, 2)
    assert d.apply(P("x^24*y^49*z^24", F)) == P("y^25", F, 3)
    proj = single(Projection(1, (2, 0, 0)), F, 3, 1)
    assert proj.apply(poly_pow(P("x^3+y^3+z^3", F), 4)) == P("x^10", F, 3)


def test_apply_rejects_other_ring():
    F = PrimeField(5)
    op = single(DProduct((1, 0)), F, 2, 1)
    with pytest.raises(MismatchedContext):
        op.apply(P("x", 7, 2))


def test_declared_level_is_enforced():
    F = PrimeField(5)
    with pytest.raises(InvalidExponent):
        single(DProduct((5,)), F, 1, 1)
    with pytest.raises(InvalidExponent):
        single(Projection(2, (0,)), F, 1, 1)


def test_psi1_unnormalised_constant():
    F = PrimeField(7)
    psi = fermat_psi1(2, F, normalize=False)
    assert psi.apply(poly_pow(fermat_poly(2, F), 6)) == Polynomial.constant(F, 3, multinomial((2, 2, 2)) % 7)
    assert multinomial((2, 2, 2)) % 7 == 6


@pytest.mark.parametrize("n,p", [(2, 7), (2, 13), (3, 5)])
def test_psi1_normalised(n, p):
    F = PrimeField(p)
    f = fermat_poly(n, F)
    assert fermat_psi1(n, F).apply(poly_pow(f, p - 1)) == Polynomial.one(F, n + 1)


def test_psi1_needs_congruence():
    with pytest.raises(InvalidCongruence):
        fermat_psi1(2, PrimeField(5))


def test_delta_j_multiplier():
    F = PrimeField(5)
    (t,) = fermat_delta_j(2, F, 0).terms
    assert t.pre == P("x0^7*x1^9*x2^9", F, 3)
    assert t.core == DProduct((24, 24, 24))


def test_delta_j_maps_target_monomial():
    F = PrimeField(5)
    for j in range(3):
        k = [15, 15, 15]
        k[j] = 42
        m_j = Polynomial.monomial(F, k)
        x25 = [0, 0, 0]
        x25[j] = 25
        # C(2p^2-1, p^2-1) = C(49, 24) is 1 mod 5
        assert fermat_delta_j(2, F, j).apply(m_j) == Polynomial.monomial(F, x25)


def test_delta_0_kills_low_y_exponents():
    F = PrimeField(5)
    d0 = fermat_delta_j(2, F, 0)
    for m in poly_pow(fermat_poly(2, F), 24).terms:
        if m[1] < 15:
            assert not d0.apply(Polynomial.monomial(F, m))


def test_classical_delta_unavailable_for_large_p():
    with pytest.raises(InvalidExponent):
        fermat_delta_j(2, PrimeField(11), 0)
    with pytest.raises(InvalidExponent):
        fermat_delta_j(2, PrimeField(3), 0)


@pytest.mark.parametrize("n,p", [(2, 5), (2, 11), (3, 7), (3, 11)])
def test_general_delta_isolates_one_monomial(n, p):
    F = PrimeField(p)
    big = poly_pow(fermat_poly(n, F), p * p - 1)
    for j in range(n + 1):
        k = delta_target(n, p, j)
        assert multinomial(k) % p
        image = general_delta_j(n, F, j).apply(big)
        assert list(image.terms) == [tuple(p * p if i == j else 0 for i in range(n + 1))]


def test_pigeonhole_assignment_reassembles():
    for n, p in [(2, 5), (2, 11), (3, 7)]:
        F = PrimeField(p)
        qs = pigeonhole_assignment(n, F)
        total = Polynomial.zero(F, n + 1)
        for j, q in enumerate(qs):
            total = total + q.shift(tuple(p * p if i == j else 0 for i in range(n + 1)))
        assert total.terms == fermat_expansion(n, p * p - p, p)


def test_fermat_level2_p5_contains_displayed_terms():
    F = PrimeField(5)
    cert = fermat_level2(2, F)
    assert cert.valid and cert.method == "pigeonhole"
    qs = pigeonhole_assignment(2, F)
    q0 = qs[0]
    # coefficients 1, -1, -1, 1, 2 from multinomial(4; .) mod 5
    assert q0.coefficient((35, 0, 0)) == 1
    assert q0.coefficient((20, 15, 0)) == 4
    assert q0.coefficient((20, 0, 15)) == 4
    assert q0.coefficient((5, 30, 0)) == 1
    assert q0.coefficient((5, 15, 15)) == 2


@pytest.mark.parametrize("n,p,method", [(2, 7, "psi1"), (3, 5, "psi1"), (2, 3, "synthesized")])
def test_fermat_level2_branches(n, p, method):
    cert = fermat_level2(n, PrimeField(p))
    assert cert.valid and cert.method == method


@pytest.mark.parametrize("n,p", [(n, p) for n in (2, 3) for p in (3, 5, 7, 11, 13) if p > n])
def test_fermat_certificates(n, p):
    cert = fermat_level2(n, PrimeField(p))
    assert cert.valid and not cert.residual


def test_synthesize_examples():
    F5, F7 = PrimeField(5), PrimeField(7)
    f5, f7 = fermat_poly(2, F5), fermat_poly(2, F7)
    assert synthesize(f5, 1) is None
    cert = synthesize(f5, 2)
    assert cert.valid
    assert cert.op.apply(poly_pow(f5, 24)) == poly_pow(f5, 20)
    cert = synthesize(f7, 1)
    assert cert.valid and cert.op.apply(poly_pow(f7, 6)) == Polynomial.one(F7, 3)


def test_verify_zero_operator():
    F = PrimeField(5)
    f = fermat_poly(2, F)
    cert = verify_level_operator(DiffOp.zero(F, 3, 2), f, 2)
    assert not cert.valid and cert.proportional_unit is None
    assert cert.residual == -poly_pow(f, 20)


def test_displayed_operator_is_proportionally_valid():
    F = PrimeField(5)
    cert = verify_level_operator(displayed_operator(), fermat_poly(2, F), 2)
    assert not cert.valid
    # each unnormalised delta_j sends f^24 to multinomial(24; 5, 5, 14) * x_j^25
    assert cert.proportional_unit == multinomial((5, 5, 14)) % 5 == 2


def test_golden_operator_text():
    text = GOLDEN.read_text()
    body = "".join(ln + "\n" for ln in text.splitlines() if not ln.startswith("#"))
    assert format_operator(displayed_operator()) == body
    op = parse_operator(text)
    assert format_operator(op) == body
    cert = verify_level_operator(op, fermat_poly(2, PrimeField(5)), 2)
    assert cert.proportional_unit == 2


def test_operator_text_round_trip():
    F = PrimeField(7)
    for cert in (fermat_level2(2, F), synthesize(fermat_poly(2, F), 1)):
        op = parse_operator(format_operator(cert.op))
        assert format_operator(op) == format_operator(cert.op)
        assert verify_level_operator(op, fermat_poly(2, F), cert.e).valid


# ----- properties -----

def _random_ops(rng, F, nvars, E):
    q = F.p**E
    one = Polynomial.one(F, nvars)
    ops = []
    t = tuple(rng.randrange(q) for _ in range(nvars))
    ops.append(DiffOp([OpTerm(random_form(rng, F, nvars, 1), DProduct(t), random_form(rng, F, nvars, 2))], E, F, nvars))
    mu = tuple(rng.randrange(q) for _ in range(nvars))
    ops.append(DiffOp([OpTerm(random_form(rng, F, nvars, 2), Projection(E, mu), one)], E, F, nvars))
    return ops


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 2), st.integers(0, 2**32))
def test_linear_over_frobenius_powers(p, E, seed):
    rng = random.Random(seed)
    F = PrimeField(p)
    nvars = 2
    g = random_form(rng, F, nvars, rng.randrange(0, 2 * p**E), 0.4)
    g2 = random_form(rng, F, nvars, g.degree(), 0.4)
    h = random_form(rng, F, nvars, rng.randrange(0, 2), 0.8)
    hq = frobenius_twist(h, E)
    for op in _random_ops(rng, F, nvars, E):
        assert op.apply(hq * g) == hq * op.apply(g)
        assert op.apply(g + g2) == op.apply(g) + op.apply(g2)


@pytest.mark.parametrize("cert_fn", [lambda: fermat_level2(2, PrimeField(5)), lambda: fermat_level2(2, PrimeField(7)),
                                     lambda: synthesize(fermat_poly(2, PrimeField(5)), 2)])
def test_constructed_operators_are_linear(cert_fn, rng):
    op = cert_fn().op
    F = op.field
    q = F.p**op.level
    for _ in range(3):
        g = random_form(rng, F, 3, rng.randrange(20, 60), 0.05)
        h = random_form(rng, F, 3, 1)
        assert op.apply(frobenius_twist(h, op.level) * g) == frobenius_twist(h, op.level) * op.apply(g)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 2), st.integers(0, 2**32))
def test_projection_images_generate_bracket_power(p, e, seed):
    rng = random.Random(seed)
    F = PrimeField(p)
    g = random_form(rng, F, 2, rng.randrange(1, 3 * p**e), 0.5)
    one = Polynomial.one(F, 2)
    images = []
    for mu in phi_decompose(g, e).parts:
        images.append(DiffOp([OpTerm(one, Projection(e, mu), one)], e, F, 2).apply(g))
    assert HomIdeal(images).equals(bracket_power(frobenius_root_ideal([g], e), p**e))


@pytest.mark.parametrize("seed", range(10))
def test_synthesis_iff_stabilisation(seed):
    rng = random.Random(seed)
    p = [3, 5][seed % 2]
    F = PrimeField(p)
    f = random_form(rng, F, 3, 3, 0.6)
    J = [chain_ideal(f, e) for e in range(3)]
    for e in (1, 2):
        cert = synthesize(f, e)
        assert (cert is not None) == J[e - 1].equals(J[e])
        if cert is not None:
            assert verify_level_operator(cert.op, f, e).valid
