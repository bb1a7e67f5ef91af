import random

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conglab.errors import InfiniteModule, NotSublattice, RankDeficient
from conglab.lattice import (
    FinPresModule,
    LatticeBasis,
    algebra_closure,
    elementary_divisors,
    fitting_order,
    hermite_normal_form,
    integer_kernel,
    is_closed,
    lattice_index,
    smith_normal_form,
)

from oracles import coset_count, smith_diagonal, vp

int_mats = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda mn: st.lists(st.lists(st.integers(-20, 20), min_size=mn[1], max_size=mn[1]), min_size=mn[0], max_size=mn[0])
)


@given(int_mats)
def test_smith_normal_form_against_sympy(M):
    U, D, V = smith_normal_form(M)
    A = np.array(M, dtype=object)
    assert (U.dot(A).dot(V) == D).all()
    assert abs(int(sympy.Matrix(U.tolist()).det())) == 1
    assert abs(int(sympy.Matrix(V.tolist()).det())) == 1
    diag = [int(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0]
    assert diag == smith_diagonal(M)
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    assert elementary_divisors(M) == diag


def _minor_gcd(A, r):
    from itertools import combinations
    from math import gcd

    g = 0
    for rows in combinations(range(A.rows), r):
        for cols in combinations(range(A.cols), r):
            g = gcd(g, int(A.extract(list(rows), list(cols)).det()))
    return g


@given(int_mats)
def test_hermite_normal_form_spans_same_lattice(M):
    H = hermite_normal_form(M)
    A = sympy.Matrix(M)
    Hs = sympy.Matrix(H.tolist()) if H.shape[1] else sympy.zeros(A.rows, 0)
    assert Hs.rank() == A.rank() == H.shape[1]
    if H.shape[1] == 0:
        return
    # equal lattices: the gcd of maximal minors agrees for A, H and [A | H]
    r = A.rank()
    assert _minor_gcd(A, r) == _minor_gcd(Hs, r) == _minor_gcd(A.row_join(Hs), r)
    # column echelon: pivot rows strictly increase
    pivots = [next(i for i in range(H.shape[0]) if H[i, j] != 0) for j in range(H.shape[1])]
    assert pivots == sorted(set(pivots))
    for j, i in enumerate(pivots):
        assert H[i, j] > 0


@given(int_mats)
def test_integer_kernel(M):
    Kmat = integer_kernel(M)
    A = sympy.Matrix(M)
    assert Kmat.shape[1] == A.cols - A.rank()
    if Kmat.shape[1]:
        Ks = sympy.Matrix(Kmat.tolist())
        assert A * Ks == sympy.zeros(A.rows, Ks.cols)
        # saturated: the gcd of the maximal minors is 1
        assert elementary_divisors(Kmat.tolist()) == [1] * Kmat.shape[1]


def _random_presentation(rng):
    m = rng.randint(1, 3)
    k = rng.randint(m, m + 2)
    while True:
        R = [[rng.randint(-6, 6) for _ in range(k)] for _ in range(m)]
        if sympy.Matrix(R).rank() == m:
            return R


def test_fitting_order_matches_coset_enumeration():
    """200 random small presentations, every prime dividing the order."""
    rng = random.Random(20240611)
    checked = 0
    while checked < 200:
        R = _random_presentation(rng)
        m = len(R)
        order = 1
        for d in smith_diagonal(R):
            order *= d
        if order ** m > 40000:
            continue
        count = coset_count(R, m, order)
        assert count == order
        M = FinPresModule.from_relations(R)
        for p in (2, 3, 5, 7, 11, 13):
            expected = vp(count, p) if count % p == 0 else 0
            assert fitting_order(M, p) == expected
        checked += 1


def test_fitting_order_infinite():
    with pytest.raises(InfiniteModule):
        fitting_order(FinPresModule.from_relations([[1, 0], [2, 0]]), 2)


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]))
def test_lattice_index_local_equals_exact_and_cosets(seed, p):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    while True:
        B = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(B).det() != 0:
            break
    C = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
    if sympy.Matrix(C).det() == 0:
        return
    sub = (sympy.Matrix(B) * sympy.Matrix(C)).tolist()
    L1 = LatticeBasis.exact(B)
    L2 = LatticeBasis.exact(sub)
    exact = lattice_index(L1, L2, p)
    det = int(sympy.Matrix(C).det())
    assert exact == (vp(det, p) if det % p == 0 else 0)
    K = 30
    loc1 = LatticeBasis.span([list(c) for c in zip(*B)], p, K, n)
    loc2 = LatticeBasis.span([list(c) for c in zip(*sub)], p, K, n)
    assert lattice_index(loc1, loc2, p) == exact
    # brute force: #(Z^n / C Z^n) equals |det C|
    assert coset_count(C, n, abs(det)) == abs(det)


def test_lattice_index_errors():
    L1 = LatticeBasis.exact([[2, 0], [0, 1]])
    L2 = LatticeBasis.exact([[1, 0], [0, 1]])
    with pytest.raises(NotSublattice):
        lattice_index(L1, L2, 2)
    with pytest.raises(RankDeficient):
        lattice_index(L2, LatticeBasis.exact([[1], [0]]), 2)


@given(st.lists(st.lists(st.integers(-30, 30), min_size=3, max_size=3), min_size=1, max_size=4), st.sampled_from([3, 5]))
def test_local_membership(gens, p):
    K = 20
    L = LatticeBasis.span(gens, p, K, 3)
    for g in gens:
        assert L.contains(g)
    combo = [sum((i + 1) * g[k] for i, g in enumerate(gens)) for k in range(3)]
    assert L.contains(combo)
    coords = L.coordinates(combo)
    m = p**L.reliable_precision
    back = [sum(c * col[k] for c, col in zip(coords, L.columns)) % m for k in range(3)]
    assert back == [x % m for x in combo]


def test_algebra_closure_coordinatewise():
    p, K = 5, 20
    g = [0, 5, 25]
    L = algebra_closure([1, 1, 1], [g], p, K)
    assert L.rank == 3
    assert is_closed(L, [g])
    assert L.contains([1, 1, 1]) and L.contains(g)
    # Z_5[g] = span(1, g, g^2): index is the Vandermonde valuation v(5 * 25 * 20) = 4
    assert lattice_index(LatticeBasis.span([[1, 0, 0], [0, 1, 0], [0, 0, 1]], p, K, 3), L, p) == 4
