"""Weight-2 modular symbols for Gamma_0(N), N prime.

The space is presented by Manin symbols (c:d) in P^1(Z/N) subject to the
two- and three-term relations, then passed to the quotient by the star
involution (c:d) -> (-c:d).  The integral structure is the lattice spanned
by the images of the integral Manin symbols, and the cuspidal part is the
kernel of the boundary map to the two cusps.  Hecke operators T_l act via
the Heilbronn-Merel matrices of determinant l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .arith import is_prime
from .errors import BadPrime, CompositeLevel, InvariantViolation
from .lattice import IntMatrix, as_int_matrix, hermite_normal_form, integer_kernel

__all__ = [
    "ManinSpace",
    "HeckeMatrix",
    "build_space",
    "hecke_matrix",
    "heilbronn_merel",
    "eisenstein_eigenvalue",
    "sturm_bound",
    "genus",
]


def genus(N: int) -> int:
    """Genus of X_0(N) for N prime."""
    if not is_prime(N):
        raise CompositeLevel(f"level {N} is not prime")
    nu2 = sum(1 for x in range(N) if (x * x + 1) % N == 0)
    nu3 = sum(1 for x in range(N) if (x * x + x + 1) % N == 0)
    # 1 + index/12 - nu2/4 - nu3/3 - cusps/2, with index N + 1 and two cusps
    g = Fraction(N + 1, 12) - Fraction(nu2, 4) - Fraction(nu3, 3)
    if g.denominator != 1:
        raise InvariantViolation("genus formula returned a fraction")
    return int(g)


def sturm_bound(N: int) -> int:
    return ceil((N + 1) / 6)


def eisenstein_eigenvalue(ell: int, N: int | None = None) -> int:
    """T_l eigenvalue of the weight-2 Eisenstein series: 1 + l."""
    if not is_prime(ell) or (N is not None and ell == N):
        raise BadPrime(f"{ell} is not a prime different from the level")
    return 1 + ell


def heilbronn_merel(ell: int) -> list[tuple[int, int, int, int]]:
    """Matrices [[a, b], [c, d]] with ad - bc = l, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, ell + 1):
        for d in range(1, ell + 2 - a):
            for b in range(a):
                rem = a * d - ell
                if b == 0:
                    if rem == 0:
                        out.extend((a, 0, c, d) for c in range(d))
                    continue
                if rem >= 0 and rem % b == 0 and rem // b < d:
                    out.append((a, b, rem // b, d))
    return out


@dataclass
class ManinSpace:
    """Plus quotient of weight-2 modular symbols for Gamma_0(N).

    ``gen_of[i]`` maps Manin symbol i to ``(generator index, sign)`` or None
    if the symbol is killed by the two-term and star relations.
    ``projection[g]`` expresses free generator g in the coordinates of the
    quotient Q^dim.  ``cuspidal`` holds an integral basis (columns, in
    quotient coordinates) of the cuspidal lattice.
    """

    level: int
    gen_of: list[tuple[int, int] | None]
    free_gens: list[int]
    projection: list[list[Fraction]]
    full_lattice: list[list[Fraction]]
    cuspidal: list[list[Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.projection[0]) if self.projection else 0

    @property
    def rank(self) -> int:
        """Rank of the cuspidal lattice."""
        return len(self.cuspidal[0]) if self.cuspidal and self.cuspidal[0] else 0

    def symbol_index(self, c: int, d: int) -> int | None:
        N = self.level
        return _p1_index(c, d, N)


@dataclass(frozen=True, eq=False)
class HeckeMatrix:
    ell: int
    matrix: IntMatrix
    eisenstein_eigenvalue: int

    def as_lists(self) -> list[list[int]]:
        return [[int(x) for x in r] for r in self.matrix.tolist()]


def _p1_index(c: int, d: int, N: int) -> int | None:
    c %= N
    d %= N
    if d:
        return c * pow(d, -1, N) % N
    if c:
        return N
    return None


def _p1_rep(i: int, N: int) -> tuple[int, int]:
    return (1, 0) if i == N else (i, 1)


class _SignedUnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.sign = [1] * n  # x_i = sign[i] * x_parent[i]
        self.dead = [False] * n

    def find(self, i: int) -> tuple[int, int]:
        s = 1
        path = []
        while self.parent[i] != i:
            path.append(i)
            s *= self.sign[i]
            i = self.parent[i]
        root = i
        # path compression
        acc = s
        for j in path:
            sj = self.sign[j]
            self.parent[j] = root
            self.sign[j] = acc
            acc *= sj
        return root, s

    def union(self, i: int, j: int, s: int) -> None:
        """Impose x_i = s * x_j."""
        ri, si = self.find(i)
        rj, sj = self.find(j)
        if ri == rj:
            if si != s * sj:
                self.dead[ri] = True
            return
        # x_ri = si * x_i = si * s * sj * x_rj
        self.parent[ri] = rj
        self.sign[ri] = si * s * sj
        if self.dead[ri]:
            self.dead[rj] = True


def _to_dm(rows: list[list], shape) -> DomainMatrix:
    return DomainMatrix([[QQ(x.numerator, x.denominator) if isinstance(x, Fraction) else QQ(x) for x in r] for r in rows], shape, QQ)


def _from_dm(M: DomainMatrix) -> list[list[Fraction]]:
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in r] for r in M.to_list()]


def build_space(N: int) -> ManinSpace:
    if not is_prime(N):
        raise CompositeLevel(f"level {N} is not prime")
    n = N + 1
    uf = _SignedUnionFind(n)
    for i in range(n):
        c, d = _p1_rep(i, N)
        uf.union(i, _p1_index(d, -c, N), -1)
        uf.union(i, _p1_index(-c, d, N), 1)
    roots = sorted({uf.find(i)[0] for i in range(n)})
    live = [r for r in roots if not uf.dead[r]]
    gidx = {r: k for k, r in enumerate(live)}
    gen_of: list[tuple[int, int] | None] = []
    for i in range(n):
        r, s = uf.find(i)
        gen_of.append(None if uf.dead[r] else (gidx[r], s))
    ng = len(live)

    rels = []
    seen = set()
    for i in range(n):
        c, d = _p1_rep(i, N)
        trip = (i, _p1_index(d, -c - d, N), _p1_index(-c - d, c, N))
        key = frozenset(trip)
        if key in seen:
            continue
        seen.add(key)
        row = [0] * ng
        for j in trip:
            g = gen_of[j]
            if g is not None:
                row[g[0]] += g[1]
        if any(row):
            rels.append(row)

    if rels:
        R = DomainMatrix([[QQ(x) for x in r] for r in rels], (len(rels), ng), QQ)
        rref, pivots = R.rref()
        rref_rows = _from_dm(rref)
    else:
        pivots, rref_rows = (), []
    pivots = list(pivots)
    free = [j for j in range(ng) if j not in set(pivots)]
    dim = len(free)
    fpos = {j: k for k, j in enumerate(free)}
    projection = [[Fraction(0)] * dim for _ in range(ng)]
    for j in free:
        projection[j][fpos[j]] = Fraction(1)
    for r, pc in enumerate(pivots):
        for j in free:
            projection[pc][fpos[j]] = -rref_rows[r][j]

    full = _lattice_span(projection, dim)

    # boundary to the cusps (infinity, 0) in the coordinates of the full lattice
    def cusp(x: int) -> int:
        return 0 if x % N == 0 else 1

    bmap = [[Fraction(0)] * dim for _ in range(2)]
    # the boundary kills the relations, so a representative symbol of each
    # free generator determines it
    reps = _generator_reps(gen_of, ng)
    for j in free:
        i, s = reps[j]
        c, d = _p1_rep(i, N)
        bmap[cusp(c)][fpos[j]] += s
        bmap[cusp(d)][fpos[j]] -= s
    # boundary of each full-lattice basis vector
    Bfull = [[sum(bmap[r][k] * full[k][j] for k in range(dim)) for j in range(len(full[0]))] for r in range(2)]
    if any(x.denominator != 1 for row in Bfull for x in row):
        raise InvariantViolation("boundary of an integral symbol is not integral")
    ker = integer_kernel([[int(x) for x in row] for row in Bfull])
    cusp_cols = [[sum(full[i][k] * int(ker[k, j]) for k in range(len(full[0]))) for j in range(ker.shape[1])] for i in range(dim)]
    space = ManinSpace(N, gen_of, free, projection, full, cusp_cols)
    if space.rank != genus(N):
        raise InvariantViolation(f"cuspidal rank {space.rank} differs from the genus {genus(N)}")
    return space


def _generator_reps(gen_of, ng) -> list[tuple[int, int]]:
    """For each generator a symbol index i and sign s with x_i = s * gen."""
    reps: list[tuple[int, int] | None] = [None] * ng
    for i, g in enumerate(gen_of):
        if g is not None and reps[g[0]] is None:
            reps[g[0]] = (i, g[1])
    return reps  # type: ignore[return-value]


def _lattice_span(vectors: list[list[Fraction]], dim: int) -> list[list[Fraction]]:
    """Z-basis (columns) of the span of rational vectors."""
    den = 1
    for v in vectors:
        for x in v:
            den = den * x.denominator // _gcd(den, x.denominator)
    cols = [[int(x * den) for x in v] for v in vectors]
    H = hermite_normal_form([[cols[k][i] for k in range(len(cols))] for i in range(dim)])
    if H.shape[1] != dim:
        raise InvariantViolation("integral symbols do not span the quotient")
    return [[Fraction(int(H[i, j]), den) for j in range(dim)] for i in range(dim)]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _hecke_on_free(space: ManinSpace, ell: int) -> list[list[Fraction]]:
    """Matrix (columns) of T_l on the quotient in free-generator coordinates."""
    N = space.level
    mats = heilbronn_merel(ell)
    reps = _generator_reps(space.gen_of, len(space.projection))
    dim = space.dimension
    cols = []
    for j in space.free_gens:
        i, s = reps[j]
        u, v = _p1_rep(i, N)
        acc = [0] * len(space.projection)
        for a, b, c, d in mats:
            k = _p1_index(u * a + v * c, u * b + v * d, N)
            if k is None:
                continue
            g = space.gen_of[k]
            if g is not None:
                acc[g[0]] += s * g[1]
        col = [Fraction(0)] * dim
        for g, m in enumerate(acc):
            if m:
                pr = space.projection[g]
                for t in range(dim):
                    if pr[t]:
                        col[t] += m * pr[t]
        cols.append(col)
    return [[cols[j][i] for j in range(dim)] for i in range(dim)]


def hecke_matrix(space: ManinSpace, ell: int, cache=None) -> HeckeMatrix:
    """Integer matrix of T_l on the cuspidal lattice (column convention)."""
    N = space.level
    ev = eisenstein_eigenvalue(ell, N)
    if cache is not None:
        hit = cache.get(N, ell)
        if hit is not None:
            return HeckeMatrix(ell, as_int_matrix(hit) if hit else _empty(), ev)
    r = space.rank
    if r == 0:
        M = _empty()
    else:
        T = _hecke_on_free(space, ell)
        dim = space.dimension
        S = _to_dm(space.cuspidal, (dim, r))
        TS = _to_dm(T, (dim, dim)) * S
        St = S.transpose()
        X = (St * S).inv() * (St * TS)
        if S * X != TS:
            raise InvariantViolation("cuspidal lattice is not Hecke stable")
        rows = _from_dm(X)
        if any(x.denominator != 1 for row in rows for x in row):
            raise InvariantViolation("Hecke matrix is not integral on the cuspidal lattice")
        M = as_int_matrix([[int(x) for x in row] for row in rows])
    if cache is not None:
        cache.put(N, ell, M.tolist())
    return HeckeMatrix(ell, M, ev)


def _empty() -> IntMatrix:
    import numpy as np

    return np.empty((0, 0), dtype=object)
