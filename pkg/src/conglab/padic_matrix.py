"""Dense matrices over Z/p^K.

Matrices are lists of row lists holding residues in ``[0, p^K)``. The
central routine is :func:`smith_reduce`, an elimination that always pivots
on an entry of minimal valuation; it never divides by a non-unit, so every
result is the exact image of the corresponding computation over Z_p.
"""

from dataclasses import dataclass

from .arith import vp
from .errors import PrecisionExhausted

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def reduce(A: Matrix, q: int) -> Matrix:
    return [[x % q for x in row] for row in A]


def mat_mul(A: Matrix, B: Matrix, q: int | None = None) -> Matrix:
    Bt = list(zip(*B))
    if q is None:
        return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]
    return [[sum(a * b for a, b in zip(row, col)) % q for col in Bt] for row in A]


def mat_vec(A: Matrix, v: list[int], q: int | None = None) -> list[int]:
    if q is None:
        return [sum(a * b for a, b in zip(row, v)) for row in A]
    return [sum(a * b for a, b in zip(row, v)) % q for row in A]


def mat_add(A: Matrix, B: Matrix, q: int, scale: int = 1) -> Matrix:
    return [[(a + scale * b) % q for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scalar(A: Matrix, c: int, q: int) -> Matrix:
    return [[(c * a) % q for a in row] for row in A]


def shift_diagonal(A: Matrix, c: int, q: int) -> Matrix:
    """Return A + c*I."""
    out = [row[:] for row in A]
    for i in range(len(out)):
        out[i][i] = (out[i][i] + c) % q
    return out


def poly_at_matrix(f: list[int], A: Matrix, q: int) -> Matrix:
    """Evaluate f (low-to-high coefficients) at the square matrix A by Horner."""
    n = len(A)
    out = zeros(n, n)
    for c in reversed(f):
        out = mat_mul(out, A, q)
        for i in range(n):
            out[i][i] = (out[i][i] + c) % q
    return out


def charpoly(A: Matrix, q: int | None = None) -> list[int]:
    """Characteristic polynomial det(xI - A), low-to-high, via Berkowitz.

    Division free, so it is valid over Z and over Z/q alike.
    """
    n = len(A)
    red = (lambda x: x % q) if q is not None else (lambda x: x)
    coeffs = [1]  # high-to-low
    for r in range(n):
        a = A[r][r]
        row = A[r][:r]
        col = [A[i][r] for i in range(r)]
        toeplitz = [1, red(-a)]
        vec = col
        for _ in range(r):
            toeplitz.append(red(-sum(x * y for x, y in zip(row, vec))))
            vec = [red(sum(A[i][j] * vec[j] for j in range(r))) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = 0
            for j in range(max(0, i - len(toeplitz) + 1), min(i, r) + 1):
                s += toeplitz[i - j] * coeffs[j]
            new.append(red(s))
        coeffs = new
    return coeffs[::-1]


@dataclass
class SmithReduction:
    """Result of :func:`smith_reduce`: ``U A V = diag(p^vals) mod p^K``."""

    U: Matrix
    Uinv: Matrix
    V: Matrix
    vals: list[int]
    p: int
    K: int

    @property
    def rank(self) -> int:
        return len(self.vals)

    @property
    def max_val(self) -> int:
        return max(self.vals, default=0)


def smith_reduce(A: Matrix, p: int, K: int) -> SmithReduction:
    q = p**K
    m = len(A)
    n = len(A[0]) if m else 0
    M = reduce(A, q)
    U = identity(m)
    Uinv = identity(m)
    V = identity(n)
    vals: list[int] = []
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            Mi = M[i]
            for j in range(k, n):
                x = Mi[j]
                if x:
                    v = vp(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != k:
            M[i], M[k] = M[k], M[i]
            U[i], U[k] = U[k], U[i]
            for row in Uinv:
                row[i], row[k] = row[k], row[i]
        if j != k:
            for row in M:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]
        pv = p**v
        u = M[k][k] // pv
        uinv = pow(u, -1, q)
        M[k] = [(x * uinv) % q for x in M[k]]
        U[k] = [(x * uinv) % q for x in U[k]]
        for row in Uinv:
            row[k] = (row[k] * u) % q
        Mk, Uk = M[k], U[k]
        for r in range(k + 1, m):
            x = M[r][k]
            if x:
                f = x // pv
                M[r] = [(a - f * b) % q for a, b in zip(M[r], Mk)]
                U[r] = [(a - f * b) % q for a, b in zip(U[r], Uk)]
                for row in Uinv:
                    row[k] = (row[k] + f * row[r]) % q
        for c in range(k + 1, n):
            x = M[k][c]
            if x:
                f = x // pv
                M[k][c] = 0
                for row in V:
                    row[c] = (row[c] - f * row[k]) % q
        vals.append(v)
    return SmithReduction(U, Uinv, V, vals, p, K)


def det_valuation(A: Matrix, p: int, K: int) -> int:
    """v_p(det A), certified below K; raises PrecisionExhausted otherwise."""
    n = len(A)
    if n == 0:
        return 0
    red = smith_reduce(A, p, K)
    total = sum(red.vals)
    if red.rank < n or total >= K:
        raise PrecisionExhausted(f"determinant vanishes modulo {p}^{K}")
    return total


def kernel_basis(A: Matrix, p: int, K: int) -> tuple[Matrix, int]:
    """Saturated basis (as columns) of the right kernel of A over Q_p.

    Returns ``(B, precision)``; the columns are accurate modulo p^precision.
    """
    n = len(A[0])
    red = smith_reduce(A, p, K)
    cols = [[red.V[i][k] for k in range(red.rank, n)] for i in range(n)]
    return cols, K - red.max_val


def image_basis(A: Matrix, p: int, K: int) -> tuple[Matrix, int]:
    """Saturated basis (as columns) of the Q_p-column space of A intersected with Z_p^m."""
    red = smith_reduce(A, p, K)
    m = len(A)
    cols = [[red.Uinv[i][k] for k in range(red.rank)] for i in range(m)]
    return cols, K - red.max_val


def solve(A: Matrix, b: list[int], p: int, K: int) -> tuple[list[int], int, int]:
    """Solve A x = b over Q_p for A of full column rank.

    Returns ``(x_int, shift, precision)`` with ``x = x_int / p^shift``, the
    numerator accurate modulo p^precision.
    """
    q = p**K
    n = len(A[0])
    red = smith_reduce(A, p, K)
    if red.rank < n:
        raise PrecisionExhausted("matrix is not of full column rank at this precision")
    y = mat_vec(red.U, b, q)
    shift = red.max_val
    for k in range(n, len(y)):
        if y[k] % p ** max(K - shift, 0):
            raise ValueError("inconsistent linear system")
    scaled = [(y[k] * p ** (shift - red.vals[k])) % q for k in range(n)]
    x = mat_vec(red.V, scaled, q)
    return x, shift, K - shift


def unit_pivot_rows(B: Matrix, p: int) -> list[int]:
    """Indices of rows of B whose submatrix is invertible modulo p."""
    m = len(B)
    d = len(B[0]) if m else 0
    rows = [[x % p for x in r] for r in B]
    chosen: list[int] = []
    used = [False] * m
    for j in range(d):
        piv = None
        for i in range(m):
            if not used[i] and rows[i][j]:
                piv = i
                break
        if piv is None:
            raise PrecisionExhausted("basis is not saturated modulo p")
        used[piv] = True
        chosen.append(piv)
        inv = pow(rows[piv][j], -1, p)
        for i in range(m):
            if i != piv and rows[i][j]:
                f = rows[i][j] * inv % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[piv])]
    return chosen


def inverse_unimodular(A: Matrix, p: int, K: int) -> Matrix:
    red = smith_reduce(A, p, K)
    if red.rank < len(A) or red.max_val:
        raise PrecisionExhausted("matrix is not invertible over Z_p")
    return mat_mul(red.V, red.U, p**K)


def restrict(A: Matrix, B: Matrix, p: int, K: int) -> Matrix:
    """Matrix X with A B = B X for a saturated A-stable column basis B."""
    q = p**K
    rows = unit_pivot_rows(B, p)
    BR = [B[i] for i in rows]
    AB = mat_mul(A, B, q)
    ABR = [AB[i] for i in rows]
    return mat_mul(inverse_unimodular(BR, p, K), ABR, q)


def rank_mod_p(A: Matrix, p: int) -> int:
    return smith_reduce(A, p, 1).rank
