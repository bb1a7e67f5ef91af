import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conglab.dvr import (
    AtLeast,
    PadicElement,
    PadicPoly,
    ValuationRing,
    factor_over_qp,
    hensel_lift,
    newton_polygon,
    norm_valuation,
    _factor_mod_p,
    _pmul,
)
from conglab.errors import NotCoprime, NotSquarefree, PrecisionExhausted

from oracles import resultant, sympy_decomposition, vp


def poly(coeffs, p, K=40):
    return PadicPoly.from_ints(coeffs, p, K)


def test_padic_element_valuation():
    x = PadicElement(50, 5, 6)
    assert x.valuation() == 2
    z = PadicElement(0, 5, 6)
    assert isinstance(z.valuation(), AtLeast) and z.valuation().bound == 6


def test_newton_polygon_examples():
    assert newton_polygon(poly([-5, 0, 1], 5)).root_valuations() == [Fraction(1, 2)] * 2
    assert newton_polygon(poly([125, 5, 1], 5)).root_valuations() == [1, 2]


@given(st.lists(st.integers(0, 4), min_size=1, max_size=5), st.sampled_from([2, 3, 5]), st.integers(0, 10**6))
def test_newton_slopes_are_root_valuations(vals, p, seed):
    """prod (x - p^v u) has root valuations exactly vals."""
    rng = random.Random(seed)
    f = [1]
    for v in vals:
        u = rng.randrange(1, 10**6)
        while u % p == 0:
            u += 1
        f = _pmul(f, [-(p**v) * u, 1], p**200)
    got = newton_polygon(poly(f, p, 40)).root_valuations()
    assert got == sorted(Fraction(v) for v in vals)


@given(st.integers(0, 10**6), st.sampled_from([3, 5, 7]))
def test_hensel_lift_property(seed, p):
    rng = random.Random(seed)
    K = 25
    g = [rng.randrange(p) for _ in range(2)] + [1]
    h = [rng.randrange(p) for _ in range(1)] + [1]
    f_res = _pmul(g, h, p)
    facs_g = {tuple(a) for a, _ in _factor_mod_p(g, p)}
    facs_h = {tuple(a) for a, _ in _factor_mod_p(h, p)}
    f = [c + p * rng.randrange(p**K) for c in f_res[:-1]] + [1]
    F = poly(f, p, K)
    if facs_g & facs_h:
        with pytest.raises(NotCoprime):
            hensel_lift(F, g, h)
        return
    G, H = hensel_lift(F, g, h)
    assert (G * H).coeffs == F.coeffs
    assert [c % p for c in G.as_list()] == [c % p for c in g]


@given(
    st.lists(st.integers(-30, 30), min_size=2, max_size=4),
    st.lists(st.integers(-30, 30), min_size=1, max_size=4),
    st.sampled_from([2, 3, 5]),
)
def test_norm_valuation_is_resultant_valuation(gl, hl, p):
    g = gl + [1]
    res = resultant(g, hl)
    if res == 0 or not any(hl):
        return
    v = vp(res, p)
    if v >= 30:
        return
    assert norm_valuation(poly(g, p, 40), poly(hl, p, 40)) == v


# --- factorization over Q_p ------------------------------------------------

PINNED = [
    ([9, 0, 3, 0, 1], 3),
    ([-2, 0, 1], 2),
    ([1, 0, 1], 5),
    ([-2, 0, 0, 1], 3),
    ([-2, 0, 0, 1], 5),
    ([16, 0, 0, 0, 1], 2),
    ([1, 1, 1], 7),
    ([-3, 0, 1], 3),
    ([5, 5, 0, 1], 5),
]


@pytest.mark.parametrize("coeffs,p", PINNED)
def test_factor_over_qp_matches_sympy(coeffs, p):
    expected = sympy_decomposition(coeffs, p)
    K = 32
    while True:
        try:
            facs = factor_over_qp(poly(coeffs, p, K))
            break
        except PrecisionExhausted:
            K *= 2
    got = sorted((f.certificate.ramification, f.certificate.residue_degree) for f in facs)
    assert got == expected


def _random_eisenstein(rng, p, d):
    return [p * rng.randrange(1, p)] + [p * rng.randrange(p) for _ in range(d - 1)] + [1]


def _random_irreducible_mod_p(rng, p, d):
    while True:
        g = [rng.randrange(p) for _ in range(d)] + [1]
        facs = _factor_mod_p(g, p)
        if len(facs) == 1 and facs[0][1] == 1:
            return g


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]))
def test_schoenemann_products(seed, p):
    """Products of Eisenstein, residue-irreducible and linear factors with distinct residues."""
    rng = random.Random(seed)
    pieces = []
    d_e = rng.randint(2, 3)
    pieces.append((_random_eisenstein(rng, p, d_e), (d_e, 1)))
    d_u = rng.randint(2, 3)
    g = _random_irreducible_mod_p(rng, p, d_u)
    pieces.append(([c + p * rng.randrange(p) for c in g[:-1]] + [1], (1, d_u)))
    if p > 2:
        c = rng.randrange(1, p)
        pieces.append(([-c + p * rng.randrange(p), 1], (1, 1)))
    f = [1]
    for piece, _ in pieces:
        f = _pmul(f, piece, p**200)
    K = 64
    while True:
        try:
            facs = factor_over_qp(poly(f, p, K))
            break
        except PrecisionExhausted:
            K *= 2
    got = sorted((x.certificate.ramification, x.certificate.residue_degree) for x in facs)
    assert got == sorted(ef for _, ef in pieces)
    for x in facs:
        assert x.certificate.ramification * x.certificate.residue_degree == x.degree


def test_eisenstein_certificate_and_generator():
    (fac,) = factor_over_qp(poly([-2, 0, 1], 2, 32))
    assert fac.certificate.kind == "eisenstein-shift"
    assert fac.certificate.ramification == 2
    assert fac.certificate.generator_minpoly is not None


def test_linear_split():
    facs = factor_over_qp(poly([-1, 0, 1], 5, 32))
    assert [f.degree for f in facs] == [1, 1]


def test_not_squarefree():
    with pytest.raises(NotSquarefree):
        factor_over_qp(poly([1, 2, 1], 5, 20))


# --- valuation rings ------------------------------------------------------


@pytest.mark.parametrize(
    "p,modulus,e,f",
    [(5, None, 1, 1), (3, [-3, 0, 1], 2, 1), (2, [1, 1, 1], 1, 2), (5, [2, 0, 1], 1, 2), (3, [-3, 0, 0, 1], 3, 1)],
)
def test_valuation_ring_invariants(p, modulus, e, f):
    R = ValuationRing(p, 20, modulus)
    assert (R.e, R.f) == (e, f)
    assert R.residue_order == p**f
    units = R.unit_representatives()
    assert len(units) == p**f - 1 and len(set(units)) == len(units)
    assert all(R.varpi_valuation(u) == 0 for u in units)
    assert R.varpi_valuation(R.uniformizer()) == 1
    assert R.varpi_valuation(R.scalar(p)) == e
    assert not R.in_maximal_ideal(R.one())
    assert R.in_maximal_ideal(R.uniformizer())
    # the residue map is a ring homomorphism on units
    if f == 1:
        a, b = units[0], units[-1]
        ra = R.residue_vector(a)[0]
        rb = R.residue_vector(b)[0]
        assert R.residue_vector(R.mul(a, b))[0] == (ra * rb) % p


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=2), st.lists(st.integers(-50, 50), min_size=2, max_size=2))
def test_valuation_ring_norm_is_multiplicative(a, b):
    R = ValuationRing(3, 30, [-3, 0, 1])
    A, B = R.coerce(a), R.coerce(b)
    na, nb, nab = R.norm_val(A), R.norm_val(B), R.norm_val(R.mul(A, B))
    if any(isinstance(v, AtLeast) for v in (na, nb, nab)):
        return
    assert nab == na + nb
    # norm of a + b sqrt3 is a^2 - 3 b^2
    n = a[0] ** 2 - 3 * a[1] ** 2
    if n:
        assert na == vp(n, 3)
