import random

import sympy
from hypothesis import given, strategies as st

from conglab import padic_matrix as pm
from conglab.arith import inv_mod, is_prime, primes_upto, vp
from conglab.errors import PrecisionExhausted

from oracles import vp as vp_oracle

small_mats = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-60, 60), min_size=n, max_size=n), min_size=n, max_size=n)
)


def test_vp_and_primes():
    assert vp(250, 5) == 3
    assert vp(-48, 2) == 4
    assert primes_upto(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert [n for n in range(50) if is_prime(n)] == list(sympy.primerange(0, 50))
    assert (7 * inv_mod(7, 30)) % 30 == 1


@given(small_mats, st.sampled_from([2, 3, 5]))
def test_smith_reduce_factors(A, p):
    K = 20
    q = p**K
    red = pm.smith_reduce(A, p, K)
    D = pm.mat_mul(pm.mat_mul(red.U, A, q), red.V, q)
    n = len(A)
    for i in range(n):
        for j in range(n):
            expected = p ** red.vals[i] if i == j and i < red.rank else 0
            assert D[i][j] % q == expected % q
    assert pm.mat_mul(red.U, red.Uinv, q) == pm.identity(n)


@given(small_mats, st.sampled_from([2, 3, 7]))
def test_det_valuation_matches_exact_determinant(A, p):
    det = int(sympy.Matrix(A).det())
    if det == 0:
        try:
            pm.det_valuation(A, p, 12)
        except PrecisionExhausted:
            return
        raise AssertionError("singular matrix certified")
    if vp_oracle(det, p) >= 12:
        return
    assert pm.det_valuation(A, p, 12) == vp_oracle(det, p)


@given(small_mats)
def test_charpoly_matches_sympy(A):
    x = sympy.Symbol("x")
    expected = [int(c) for c in reversed(sympy.Matrix(A).charpoly(x).all_coeffs())]
    assert pm.charpoly(A) == expected


def test_kernel_is_saturated():
    p, K = 5, 20
    A = [[5, 10, 0], [1, 2, 0]]
    ker, prec = pm.kernel_basis(A, p, K)
    q = p**K
    assert prec >= 1
    cols = pm.transpose(ker)
    assert len(cols) == 2
    for c in cols:
        assert all(x % q == 0 for x in pm.mat_vec(A, c, q))
    # saturated: the kernel basis reduces to independent vectors mod p
    assert pm.rank_mod_p(ker, p) == 2


def test_solve_and_restrict():
    rng = random.Random(3)
    p, K = 3, 30
    q = p**K
    A = [[rng.randrange(-9, 10) for _ in range(3)] for _ in range(3)]
    while int(sympy.Matrix(A).det()) % p == 0:
        A = [[rng.randrange(-9, 10) for _ in range(3)] for _ in range(3)]
    x = [4, -7, 11]
    b = pm.mat_vec(A, x, q)
    sol, shift, prec = pm.solve(A, b, p, K)
    assert shift == 0
    assert [s % p**prec for s in sol] == [v % p**prec for v in x]
    # restricting to an invariant subspace: the span of e1 under an upper triangular matrix
    M = [[2, 1], [0, 5]]
    assert pm.restrict(M, [[1], [0]], p, K) == [[2]]
