"""Independent reference computations used by the tests.

Nothing here calls into conglab: these are brute-force or textbook
routines whose only job is to disagree loudly when the library is wrong.
"""

from __future__ import annotations

from fractions import Fraction

import sympy


def coset_count(relations: list[list[int]], m: int, modulus: int) -> int:
    """#(Z^m / L) by enumeration, where L is spanned by the relation columns.

    ``modulus`` must be a multiple of the exponent of Z^m/L (for instance the
    absolute determinant of a full-rank square subset of relations), so that
    L contains modulus * Z^m.  The subgroup L / modulus Z^m is generated by
    breadth-first search inside (Z/modulus)^m.
    """
    gens = [tuple(col[i] % modulus for i in range(m)) for col in zip(*relations)] if relations and relations[0] else []
    seen = {(0,) * m}
    frontier = [(0,) * m]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % modulus for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return modulus**m // len(seen)


def vp(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise ValueError("v_p(0)")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def eta_product_11(n_terms: int) -> list[int]:
    """q-expansion of q prod (1 - q^n)^2 (1 - q^{11 n})^2, the newform of level 11."""
    N = n_terms + 1
    series = [0] * N
    series[0] = 1
    for n in range(1, N):
        for step, power in ((n, 2), (11 * n, 2)):
            if step >= N:
                continue
            for _ in range(power):
                for i in range(N - 1, step - 1, -1):
                    series[i] -= series[i - step]
    return [0] + series[: N - 1]


def sympy_decomposition(coeffs_low_to_high: list[int], p: int) -> list[tuple[int, int]]:
    """Sorted (e, f) of the primes above p in Q[x]/(f), f irreducible over Q."""
    from sympy.polys.numberfields.basis import round_two
    from sympy.polys.numberfields.primes import prime_decomp

    x = sympy.Symbol("x")
    T = sympy.Poly(list(reversed(coeffs_low_to_high)), x)
    ZK, dK = round_two(T)
    return sorted((P.e, P.f) for P in prime_decomp(p, T, dK=dK, ZK=ZK))


def resultant(f: list[int], g: list[int]) -> int:
    x = sympy.Symbol("x")
    return int(sympy.resultant(sympy.Poly(list(reversed(f)), x), sympy.Poly(list(reversed(g)), x)))


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Non-zero invariant factors from sympy."""
    from sympy.matrices.normalforms import smith_normal_form

    D = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    return [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]


def rational_det(rows: list[list[int]]) -> Fraction:
    return Fraction(int(sympy.Matrix(rows).det()))

