"""Exact integer and p-local lattice linear algebra.

Two kinds of lattice appear.  Exact Z-lattices come from integer data
(relation matrices, modular symbols) and are canonicalized by the
Hermite normal form over Z.  p-local lattices live in Z_p^n, are known
modulo p^K, and are canonicalized by a valuation-pivoted column echelon
form that plays the role of a Hermite form over Z_p.

Matrices cross the API as numpy object arrays so that entries stay
arbitrary-precision Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from . import padic_matrix as pm
from .arith import vp
from .errors import (
    InfiniteModule,
    NotSublattice,
    PrecisionExhausted,
    RankDeficient,
)

__all__ = [
    "IntMatrix",
    "as_int_matrix",
    "LatticeBasis",
    "FinPresModule",
    "smith_normal_form",
    "hermite_normal_form",
    "integer_kernel",
    "padic_echelon",
    "lattice_index",
    "fitting_order",
    "algebra_closure",
]

IntMatrix = np.ndarray


def as_int_matrix(M) -> IntMatrix:
    """Copy M into a 2-d numpy array of Python ints."""
    if isinstance(M, np.ndarray):
        rows = M.tolist()
    else:
        rows = [list(r) for r in M]
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = int(x)
    return out


def _rows(M) -> list[list[int]]:
    if isinstance(M, np.ndarray):
        return [[int(x) for x in r] for r in M.tolist()]
    return [[int(x) for x in r] for r in M]


# --- Smith and Hermite forms over Z -------------------------------------


def _snf_lists(A: list[list[int]]):
    m = len(A)
    n = len(A[0]) if m else 0
    A = [r[:] for r in A]
    U = pm.identity(m)
    V = pm.identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        A[dst] = [a - f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for M in (A, V):
            for r in M:
                r[dst] -= f * r[src]

    for k in range(min(m, n)):
        while True:
            piv = None
            for i in range(k, m):
                for j in range(k, n):
                    x = A[i][j]
                    if x and (piv is None or abs(x) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return A, U, V
            swap_rows(k, piv[0])
            swap_cols(k, piv[1])
            d = A[k][k]
            done = True
            for i in range(k + 1, m):
                if A[i][k]:
                    add_row(i, k, A[i][k] // d)
                    if A[i][k]:
                        done = False
            for j in range(k + 1, n):
                if A[k][j]:
                    add_col(j, k, A[k][j] // d)
                    if A[k][j]:
                        done = False
            if not done:
                continue
            # divisibility: fold in any row whose entries the pivot does not divide
            bad = next(
                (i for i in range(k + 1, m) if any(A[i][j] % d for j in range(k + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(k, bad, -1)
        if A[k][k] < 0:
            A[k] = [-x for x in A[k]]
            U[k] = [-x for x in U[k]]
    return A, U, V


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U M V = D, U and V unimodular, d_1 | d_2 | ..."""
    A = _rows(M)
    if not A or not A[0]:
        m = len(A)
        n = len(A[0]) if A else 0
        return (as_int_matrix(pm.identity(m)) if m else np.empty((0, 0), dtype=object),
                np.empty((m, n), dtype=object),
                as_int_matrix(pm.identity(n)) if n else np.empty((0, 0), dtype=object))
    D, U, V = _snf_lists(A)
    return as_int_matrix(U), as_int_matrix(D), as_int_matrix(V)


def elementary_divisors(M) -> list[int]:
    """Nonzero Smith invariants of M (positive, in divisibility order)."""
    A = _rows(M)
    if not A or not A[0]:
        return []
    D, _, _ = _snf_lists(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]


def hermite_normal_form(M) -> IntMatrix:
    """Column-style Hermite form over Z of the column span of M.

    Returns an n x r matrix whose columns are lower-echelon with positive
    pivots and entries left of each pivot reduced into [0, pivot).
    """
    A = pm.transpose(_rows(M))  # work on rows = generators
    n = len(A[0]) if A else 0
    basis: list[list[int]] = []
    pivots: list[int] = []
    rows = [r for r in A if any(r)]
    row = 0
    while rows and row < n:
        nz = [r for r in rows if r[row]]
        if not nz:
            row += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[row]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                f = r[row] // piv[row]
                r2 = [a - f * b for a, b in zip(r, piv)]
                rest.append(r2)
            others = [r for r in rows if not r[row]]
            rows = others + [piv] + rest
            nz = [r for r in rows if r[row]]
        piv = nz[0]
        if piv[row] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        pivots.append(row)
        rows = [r for r in rows if not r[row] and any(r)]
        row += 1
    # reduce entries in pivot rows of the other basis vectors
    for a in range(len(basis)):
        pr = pivots[a]
        for b in range(a):
            f = basis[b][pr] // basis[a][pr]
            if f:
                basis[b] = [x - f * y for x, y in zip(basis[b], basis[a])]
    if not basis:
        return np.empty((n, 0), dtype=object)
    return as_int_matrix(pm.transpose(basis))


def integer_kernel(M) -> IntMatrix:
    """Saturated Z-basis (columns) of the integer right kernel of M."""
    A = _rows(M)
    n = len(A[0]) if A else 0
    if not A:
        return as_int_matrix(pm.identity(n))
    D, _, V = _snf_lists(A)
    rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    cols = [[V[i][j] for j in range(rank, n)] for i in range(n)]
    if rank == n:
        return np.empty((n, 0), dtype=object)
    return hermite_normal_form(cols)


# --- p-local echelon form -------------------------------------------------


def padic_echelon(gens: Sequence[Sequence[int]], p: int, K: int):
    """Canonical basis of the Z_p-span of column vectors known modulo p^K.

    Returns ``(columns, pivots, vals)``.  Basis vector j has its pivot in
    row ``pivots[j]`` equal to p^vals[j], zeros above, and the entries of
    every other basis vector in that row reduced modulo p^vals[j].
    Each pivot of valuation v costs v digits of precision, so entries that
    vanish modulo p^(K - digits lost so far) are treated as zero.
    """
    q = p**K
    vecs = [[int(x) % q for x in g] for g in gens]
    vecs = [v for v in vecs if any(v)]
    n = len(gens[0]) if gens else 0
    basis: list[list[int]] = []
    pivots: list[int] = []
    vals: list[int] = []
    lost = 0
    for row in range(n):
        if not vecs:
            break
        best = None
        for idx, v in enumerate(vecs):
            if v[row]:
                val = vp(v[row], p)
                if val >= K - lost:
                    continue
                if best is None or val < best[0]:
                    best = (val, idx)
                    if val == 0:
                        break
        if best is None:
            continue
        val, idx = best
        piv = vecs.pop(idx)
        u = piv[row] // p**val
        uinv = pow(u, -1, q)
        piv = [(x * uinv) % q for x in piv]
        pv = p**val
        lost += val
        exact = p ** (K - lost)
        nxt = []
        for v in vecs:
            if v[row]:
                f = v[row] // pv
                v = [(a - f * b) % q for a, b in zip(v, piv)]
            if any(a % exact for a in v):
                nxt.append(v)
        vecs = nxt
        basis.append(piv)
        pivots.append(row)
        vals.append(val)
    for a in range(len(basis)):
        pr, pv = pivots[a], p ** vals[a]
        for b in range(a):
            f = basis[b][pr] // pv
            if f:
                basis[b] = [(x - f * y) % q for x, y in zip(basis[b], basis[a])]
    return basis, pivots, vals


# --- lattices -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticeBasis:
    """A lattice given by the columns of a basis matrix.

    ``prime``/``precision`` are None for an exact Z-lattice; otherwise the
    lattice lives in Z_p^n and the basis is known modulo p^precision.
    """

    ambient_rank: int
    columns: tuple[tuple[int, ...], ...]
    prime: int | None = None
    precision: int | None = None
    pivots: tuple[int, ...] = ()
    pivot_vals: tuple[int, ...] = ()

    @classmethod
    def exact(cls, M) -> "LatticeBasis":
        H = hermite_normal_form(M)
        cols = tuple(tuple(int(x) for x in H[:, j]) for j in range(H.shape[1]))
        return cls(H.shape[0], cols)

    @classmethod
    def span(cls, gens: Sequence[Sequence[int]], p: int, K: int, ambient_rank: int | None = None) -> "LatticeBasis":
        """p-local lattice spanned by the given column vectors."""
        n = ambient_rank if ambient_rank is not None else len(gens[0])
        basis, pivots, vals = padic_echelon(gens, p, K) if gens else ([], [], [])
        if sum(vals) >= K:
            raise PrecisionExhausted("lattice is not determined at this precision")
        return cls(n, tuple(tuple(v) for v in basis), p, K, tuple(pivots), tuple(vals))

    @property
    def rank(self) -> int:
        return len(self.columns)

    @property
    def full_rank(self) -> bool:
        return self.rank == self.ambient_rank

    @property
    def basis(self) -> IntMatrix:
        if not self.columns:
            return np.empty((self.ambient_rank, 0), dtype=object)
        return as_int_matrix(pm.transpose([list(c) for c in self.columns]))

    @property
    def is_local(self) -> bool:
        return self.prime is not None

    @property
    def reliable_precision(self) -> int | None:
        """Basis entries are exact modulo p to this power.

        Each division by a pivot p^v during reduction costs v digits.
        """
        if not self.is_local:
            return None
        return self.precision - sum(self.pivot_vals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeBasis):
            return NotImplemented
        if (self.ambient_rank, self.prime, self.rank) != (other.ambient_rank, other.prime, other.rank):
            return False
        if not self.is_local:
            return self.columns == other.columns
        if (self.pivots, self.pivot_vals) != (other.pivots, other.pivot_vals):
            return False
        m = self.prime ** min(self.reliable_precision, other.reliable_precision)
        return all((a - b) % m == 0 for c1, c2 in zip(self.columns, other.columns) for a, b in zip(c1, c2))

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.prime, self.pivots, self.pivot_vals))

    def coordinates(self, v: Sequence[int]) -> list[int]:
        """Coordinates of v in this p-local basis; NotSublattice if v is outside."""
        if not self.is_local:
            raise ValueError("coordinates are only defined for p-local lattices")
        p, q = self.prime, self.prime**self.precision
        r = [int(x) % q for x in v]
        coords = []
        for col, pr, val in zip(self.columns, self.pivots, self.pivot_vals):
            x = r[pr]
            if x % p**val:
                raise NotSublattice("vector is not in the lattice")
            c = x // p**val
            coords.append(c)
            if c:
                r = [(a - c * b) % q for a, b in zip(r, col)]
        m = p**self.reliable_precision
        if any(x % m for x in r):
            raise NotSublattice("vector is not in the lattice")
        return coords

    def contains(self, v: Sequence[int]) -> bool:
        try:
            self.coordinates(v)
            return True
        except NotSublattice:
            return False

    def contains_lattice(self, other: "LatticeBasis") -> bool:
        return all(self.contains(c) for c in other.columns)

    def scale(self, c: int) -> "LatticeBasis":
        return LatticeBasis.span([[c * x for x in col] for col in self.columns], self.prime, self.precision, self.ambient_rank)

    def __add__(self, other: "LatticeBasis") -> "LatticeBasis":
        return LatticeBasis.span(list(self.columns) + list(other.columns), self.prime, self.precision, self.ambient_rank)


@dataclass(frozen=True, eq=False)
class FinPresModule:
    """O^m modulo the column span of ``relations`` (an m x k matrix)."""

    generators: int
    relations: IntMatrix

    @classmethod
    def from_relations(cls, relations) -> "FinPresModule":
        R = as_int_matrix(relations)
        return cls(R.shape[0], R)


def _exact_coords(B1: LatticeBasis, B2: LatticeBasis) -> DomainMatrix:
    A = DomainMatrix([[QQ(x) for x in row] for row in _rows(B1.basis)], (B1.ambient_rank, B1.rank), QQ)
    B = DomainMatrix([[QQ(x) for x in row] for row in _rows(B2.basis)], (B2.ambient_rank, B2.rank), QQ)
    At = A.transpose()
    X = (At * A).inv() * (At * B)
    if A * X != B:
        raise NotSublattice("lattice is not contained in the span of the other")
    return X


def lattice_index(L1: LatticeBasis, L2: LatticeBasis, p: int) -> int:
    """v_p([L1 : L2]) for L2 contained in L1 (containment checked after localizing at p)."""
    if L1.ambient_rank != L2.ambient_rank:
        raise ValueError("lattices live in different ambient spaces")
    if L1.rank != L2.rank or L1.rank == 0:
        raise RankDeficient("lattices must have equal positive rank")
    if L1.is_local or L2.is_local:
        K = min(x for x in (L1.precision, L2.precision) if x is not None)
        if not L1.is_local:
            L1 = LatticeBasis.span(list(L1.columns), p, K, L1.ambient_rank)
        X = [L1.coordinates(c) for c in L2.columns]
        return pm.det_valuation(pm.transpose(X), p, min(K, L1.reliable_precision))
    X = _exact_coords(L1, L2)
    rows = X.to_Matrix().tolist()
    for row in rows:
        for x in row:
            if x.q % p == 0:
                raise NotSublattice("lattice is not contained in the other at p")
    det = X.det()
    if det == 0:
        raise RankDeficient("sublattice does not have full rank")
    return vp(int(det.numerator), p) - vp(int(det.denominator), p)


def fitting_order(M: FinPresModule, p: int) -> int:
    """v_p(#M) as the p-valuation of the generator of the Fitting ideal."""
    if M.generators == 0:
        return 0
    R = _rows(M.relations)
    if not R or not R[0]:
        raise InfiniteModule("module has no relations")
    divs = elementary_divisors(R)
    if len(divs) < M.generators:
        raise InfiniteModule("some elementary divisor vanishes")
    return sum(vp(d, p) for d in divs)


def _coordinatewise(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    return [(x * y) % q for x, y in zip(a, b)]


def algebra_closure(
    one: Sequence[int],
    gens: Sequence[Sequence[int]],
    p: int,
    K: int,
    mul: Callable[[Sequence[int], Sequence[int], int], list[int]] | None = None,
) -> LatticeBasis:
    """Smallest p-local lattice containing ``one`` and stable under each generator.

    ``mul(a, b, q)`` multiplies two ambient vectors modulo q; the default is
    the coordinatewise product.  The lattice is grown by adjoining products
    of the current basis with the generators until its echelon form stops
    changing.
    """
    mul = mul or _coordinatewise
    q = p**K
    n = len(one)
    L = LatticeBasis.span([list(one)], p, K, n)
    for _ in range(4 * n + 4):
        prods = [mul(list(g), list(b), q) for g in gens for b in L.columns]
        new = LatticeBasis.span(list(L.columns) + list(gens) + prods, p, K, n)
        if new == L:
            return L
        L = new
    raise PrecisionExhausted("algebra closure did not stabilize")


def is_closed(L: LatticeBasis, gens: Sequence[Sequence[int]], mul=None) -> bool:
    """Check that every product of a generator with a basis vector lies in L."""
    mul = mul or _coordinatewise
    q = L.prime**L.precision
    return all(L.contains(mul(list(g), list(b), q)) for g in gens for b in L.columns)
