"""Finite-precision arithmetic over Z_p and its finite extensions.

Elements of Z_p are held as residues modulo p^K.  A residue of 0 means
"zero at precision K" and its valuation is reported as ``AtLeast(K)``,
never as the integer K.

Newton polygon slopes follow the root convention: each slope is the
common valuation of a group of roots, and slopes are listed in
non-decreasing order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_gcdex

from . import padic_matrix as pm
from .arith import vp
from .errors import (
    IndeterminatePrecision,
    InvariantViolation,
    NotCoprime,
    NotSquarefree,
    PrecisionExhausted,
)

__all__ = [
    "AtLeast",
    "PadicElement",
    "PadicPoly",
    "ExtElement",
    "NewtonPolygon",
    "Certificate",
    "QpFactor",
    "ValuationRing",
    "valuation",
    "newton_polygon",
    "hensel_lift",
    "factor_over_qp",
    "norm_valuation",
]

@dataclass(frozen=True)
class AtLeast:
    """Valuation flag for an element that is zero at the working precision."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


@dataclass(frozen=True)
class PadicElement:
    residue: int
    prime: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        object.__setattr__(self, "residue", self.residue % self.prime**self.precision)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def _coerce(self, other) -> int:
        if isinstance(other, PadicElement):
            if (other.prime, other.precision) != (self.prime, self.precision):
                raise ValueError("mismatched prime or precision")
            return other.residue
        return int(other)

    def __add__(self, other):
        return PadicElement(self.residue + self._coerce(other), self.prime, self.precision)

    __radd__ = __add__

    def __sub__(self, other):
        return PadicElement(self.residue - self._coerce(other), self.prime, self.precision)

    def __rsub__(self, other):
        return PadicElement(self._coerce(other) - self.residue, self.prime, self.precision)

    def __mul__(self, other):
        return PadicElement(self.residue * self._coerce(other), self.prime, self.precision)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicElement(-self.residue, self.prime, self.precision)

    def valuation(self) -> int | AtLeast:
        return valuation(self)

    def is_zero(self) -> bool:
        return self.residue == 0


def valuation(x: PadicElement) -> int | AtLeast:
    if x.residue == 0:
        return AtLeast(x.precision)
    return vp(x.residue, x.prime)


# --- dense polynomials over Z/q, coefficient lists low-to-high -------------


def _trim(f: list[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(f: list[int], g: list[int], q: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim([c % q for c in out])


def _padd(f: list[int], g: list[int], q: int, scale: int = 1) -> list[int]:
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _trim([(a + scale * b) % q for a, b in zip(f, g)])


def _pdivmod(f: list[int], g: list[int], q: int) -> tuple[list[int], list[int]]:
    """Division by a monic g."""
    f = [c % q for c in f]
    dg = len(g) - 1
    if g[-1] % q != 1:
        raise ValueError("divisor must be monic")
    if len(f) - 1 < dg:
        return [], _trim(f)
    quo = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c:
            quo[i - dg] = c
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % q
    return _trim(quo), _trim(f[:dg])


def _pmod(f: list[int], g: list[int], q: int) -> list[int]:
    return _pdivmod(f, g, q)[1]


def _pderiv(f: list[int], q: int) -> list[int]:
    return _trim([(i * c) % q for i, c in enumerate(f)][1:])


def _gf(f: list[int], p: int) -> list:
    return [c % p for c in reversed(_trim([c % p for c in f]))] or []


def _from_gf(g: list, q: int | None = None) -> list[int]:
    out = [int(c) for c in reversed(g)]
    return [c % q for c in out] if q else out


def _factor_mod_p(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Monic irreducible factors of f mod p with multiplicities, low-to-high."""
    lc, facs = gf_factor(_gf(f, p), p, ZZ)
    out = [(_from_gf(g), int(k)) for g, k in facs]
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def _xgcd_mod_p(f: list[int], g: list[int], p: int):
    s, t, h = gf_gcdex(_gf(f, p), _gf(g, p), p, ZZ)
    return _from_gf(s), _from_gf(t), _from_gf(h)


def _ppow_mod(f: list[int], e: int, modpoly: list[int], q: int) -> list[int]:
    out = [1]
    base = _pmod(f, modpoly, q)
    while e:
        if e & 1:
            out = _pmod(_pmul(out, base, q), modpoly, q)
        base = _pmod(_pmul(base, base, q), modpoly, q)
        e >>= 1
    return out


@dataclass(frozen=True)
class PadicPoly:
    """Dense polynomial over Z/p^K; ``coeffs`` are residues, low-to-high."""

    coeffs: tuple[int, ...]
    prime: int
    precision: int

    def __post_init__(self):
        q = self.prime**self.precision
        object.__setattr__(self, "coeffs", tuple(int(c) % q for c in self.coeffs))

    @classmethod
    def from_ints(cls, coeffs, p: int, K: int) -> "PadicPoly":
        q = p**K
        return cls(tuple(_trim([int(c) % q for c in coeffs])), p, K)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c]
        if not nz:
            raise IndeterminatePrecision("polynomial is zero at this precision")
        return nz[-1]

    @property
    def leading(self) -> PadicElement:
        return self.coefficient(self.degree)

    def coefficient(self, i: int) -> PadicElement:
        c = self.coeffs[i] if i < len(self.coeffs) else 0
        return PadicElement(c, self.prime, self.precision)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[self.degree] == 1

    def as_list(self) -> list[int]:
        return _trim(list(self.coeffs))

    def _new(self, coeffs) -> "PadicPoly":
        return PadicPoly(tuple(coeffs), self.prime, self.precision)

    def __mul__(self, other: "PadicPoly") -> "PadicPoly":
        return self._new(_pmul(self.as_list(), other.as_list(), self.modulus))

    def __add__(self, other: "PadicPoly") -> "PadicPoly":
        return self._new(_padd(self.as_list(), other.as_list(), self.modulus))

    def __sub__(self, other: "PadicPoly") -> "PadicPoly":
        return self._new(_padd(self.as_list(), other.as_list(), self.modulus, -1))

    def __mod__(self, other: "PadicPoly") -> "PadicPoly":
        return self._new(_pmod(self.as_list(), other.as_list(), self.modulus))

    def derivative(self) -> "PadicPoly":
        return self._new(_pderiv(self.as_list(), self.modulus))

    def reduce_precision(self, k: int) -> "PadicPoly":
        return PadicPoly(self.coeffs, self.prime, min(k, self.precision))

    def __call__(self, x: int) -> int:
        q = self.modulus
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % q
        return acc

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        return " + ".join(reversed(terms)) or "0"


# --- Newton polygons ----------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]
    slopes: tuple[tuple[Fraction, int], ...]

    def root_valuations(self) -> list[Fraction]:
        return [s for s, m in self.slopes for _ in range(m)]


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(f: PadicPoly) -> NewtonPolygon:
    p = f.prime
    n = f.degree
    if f.coeffs[0] == 0:
        raise IndeterminatePrecision("constant coefficient is zero at this precision")
    points = [(i, vp(c, p)) for i, c in enumerate(f.coeffs[: n + 1]) if c]
    hull = _lower_hull(points)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y1 - y2, x2 - x1), x2 - x1))
    segs.sort()
    return NewtonPolygon(tuple(hull), tuple(segs))


# --- Hensel lifting -------------------------------------------------------


def _hensel_lift_lists(f, g, h, p, K):
    """Lift f = g h (mod p) with g, h monic and coprime to a factorization mod p^K."""
    s, t, one = _xgcd_mod_p(g, h, p)
    if one != [1]:
        raise NotCoprime("residue factors are not coprime")
    m = p
    g = [c % p for c in g]
    h = [c % p for c in h]
    target = p**K
    while m < target:
        m2 = min(m * m, target)
        e = _padd(f, _pmul(g, h, m2), m2, -1)
        quo, rem = _pdivmod(_pmul(s, e, m2), h, m2)
        g = _padd(_padd(g, _pmul(t, e, m2), m2), _pmul(quo, g, m2), m2)
        h = _padd(h, rem, m2)
        b = _padd(_padd(_pmul(s, g, m2), _pmul(t, h, m2), m2), [1], m2, -1)
        c, d = _pdivmod(_pmul(s, b, m2), h, m2)
        s = _padd(s, d, m2, -1)
        t = _padd(_padd(t, _pmul(t, b, m2), m2, -1), _pmul(c, g, m2), m2, -1)
        m = m2
    return g, h


def hensel_lift(f: PadicPoly, f1_bar, f2_bar) -> tuple[PadicPoly, PadicPoly]:
    """Lift a coprime factorization of f modulo p to one modulo p^K.

    ``f1_bar`` and ``f2_bar`` are monic residue factors given as coefficient
    lists (low-to-high) or PadicPolys; the lifts are monic and unique.
    """
    p, K = f.prime, f.precision
    if not f.is_monic():
        raise ValueError("f must be monic")
    g = f1_bar.as_list() if isinstance(f1_bar, PadicPoly) else [int(c) for c in f1_bar]
    h = f2_bar.as_list() if isinstance(f2_bar, PadicPoly) else [int(c) for c in f2_bar]
    g, h = _trim([c % p for c in g]), _trim([c % p for c in h])
    if not g or not h or g[-1] != 1 or h[-1] != 1:
        raise ValueError("residue factors must be monic")
    if _pmul(g, h, p) != _trim([c % p for c in f.as_list()]):
        raise ValueError("residue factors do not multiply to f modulo p")
    g, h = _hensel_lift_lists(f.as_list(), g, h, p, K)
    return PadicPoly(tuple(g), p, K), PadicPoly(tuple(h), p, K)


def _inverse_mod(a: list[int], m: list[int], p: int, K: int) -> list[int]:
    """Inverse of a modulo the monic m over Z/p^K (a, m coprime mod p)."""
    s, _, one = _xgcd_mod_p(a, m, p)
    if one != [1]:
        raise NotCoprime("not invertible modulo p")
    q = p**K
    inv = [c % q for c in s]
    prec = 1
    while prec < K:
        prec = min(2 * prec, K)
        err = _pmod(_pmul(inv, a, q), m, q)
        inv = _pmod(_pmul(inv, _padd([2], err, q, -1), q), m, q)
    return inv


# --- norm valuations ------------------------------------------------------


def companion(f: list[int], q: int) -> pm.Matrix:
    """Matrix of multiplication by x on the power basis of Z/q[x]/(f), f monic."""
    n = len(f) - 1
    C = pm.zeros(n, n)
    for i in range(1, n):
        C[i][i - 1] = 1
    for i in range(n):
        C[i][n - 1] = (-f[i]) % q
    return C


def norm_valuation(g: PadicPoly, h: PadicPoly) -> int:
    """v_p of Res(g, h) = v_p of the norm of h(theta) for theta a root of g.

    Divide by the residue degree of g for the valuation of h(theta) in its
    own uniformizer, or by deg g for the p-normalized valuation.
    """
    p, K = g.prime, min(g.precision, h.precision)
    q = p**K
    if not g.is_monic():
        raise ValueError("g must be monic")
    gl = [c % q for c in g.as_list()]
    hl = _pmod([c % q for c in h.as_list()], gl, q)
    if not hl:
        raise PrecisionExhausted("h vanishes modulo g at this precision")
    M = pm.poly_at_matrix(hl, companion(gl, q), q)
    try:
        return pm.det_valuation(M, p, K)
    except PrecisionExhausted:
        raise PrecisionExhausted(f"resultant vanishes modulo {p}^{K}") from None


# --- factorization over Q_p ---------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Why a factor is irreducible over Q_p.

    kind is ``degree-1``, ``unramified`` (irreducible modulo p),
    ``eisenstein-shift`` (Eisenstein after a shift x -> x + c) or
    ``maximal-order`` (the factor is one local component of the p-maximal
    order of Q_p[x]/(f), found by Round 2 and split by idempotents).

    ``generator`` is an element of the component's ring of integers that
    generates it over Z_p, as ``(coefficients in theta, shift)`` meaning
    sum(c_i theta^i) / p^shift; ``generator_minpoly`` is its minimal
    polynomial, residue-irreducible or Eisenstein after a shift.  Both are
    None when no presentation was found (only possible if e > 1 and f > 1).
    """

    kind: str
    ramification: int
    residue_degree: int
    precision: int
    generator: tuple[tuple[int, ...], int] | None = None
    generator_minpoly: tuple[int, ...] | None = None


@dataclass(frozen=True)
class QpFactor:
    poly: PadicPoly
    certificate: Certificate

    @property
    def degree(self) -> int:
        return len(self.poly.as_list()) - 1


def _span_basis(A: pm.Matrix, p: int, k: int) -> pm.Matrix:
    """Z_p-basis (columns) of the column span of A, assumed of full row rank."""
    red = pm.smith_reduce(A, p, k)
    m = len(A)
    if red.rank < m:
        raise PrecisionExhausted("lattice is not of full rank at this precision")
    q = p**k
    return [[(red.Uinv[i][j] * p ** red.vals[j]) % q for j in range(m)] for i in range(m)]


def _left_divide(C: pm.Matrix, Y: pm.Matrix, p: int, k: int) -> tuple[pm.Matrix, int]:
    """X with C X = Y over Z_p, C square and nonsingular; returns (X, precision)."""
    red = pm.smith_reduce(C, p, k)
    if red.rank < len(C):
        raise PrecisionExhausted("singular change of basis")
    q = p**k
    Z = pm.mat_mul(red.U, Y, q)
    kk = k - red.max_val
    for r, v in enumerate(red.vals):
        pv = p**v
        if any(x % pv for x in Z[r]):
            raise InvariantViolation("left division is not integral")
        Z[r] = [x // pv for x in Z[r]]
    return pm.mat_mul(red.V, Z, p**kk), kk


class _Order:
    """A Z_p-order in Q_p[x]/(f) given by multiplication matrices.

    ``mats[i]`` is the matrix (column convention) of multiplication by the
    i-th basis vector; ``one`` and ``theta`` are coordinate vectors and
    ``basis`` holds the basis in power-basis coordinates as basis / p^shift.
    """

    def __init__(self, mats, one, theta, basis, shift, p, k):
        self.mats, self.one, self.theta = mats, one, theta
        self.basis, self.shift = basis, shift
        self.p, self.k = p, k
        self.d = len(one)

    @property
    def q(self):
        return self.p**self.k

    def mult_matrix(self, u, q=None) -> pm.Matrix:
        q = q or self.q
        d = self.d
        M = pm.zeros(d, d)
        for i, c in enumerate(u):
            if c % q:
                M = pm.mat_add(M, self.mats[i], q, c)
        return M

    def mul(self, u, v, q=None):
        q = q or self.q
        return pm.mat_vec(self.mult_matrix(u, q), v, q)

    def power(self, u, e, q=None):
        q = q or self.q
        out = [x % q for x in self.one]
        base = [x % q for x in u]
        while e:
            if e & 1:
                out = self.mul(out, base, q)
            base = self.mul(base, base, q)
            e >>= 1
        return out


def _equation_order(f: list[int], p: int, k: int) -> _Order:
    q = p**k
    d = len(f) - 1
    C = companion(f, q)
    mats = [pm.identity(d)]
    for _ in range(d - 1):
        mats.append(pm.mat_mul(C, mats[-1], q))
    one = [1] + [0] * (d - 1)
    theta = [0, 1] + [0] * (d - 2) if d > 1 else [(-f[0]) % q]
    return _Order(mats, one, theta, pm.identity(d), 0, p, k)


def _frobenius_matrix(O: _Order) -> pm.Matrix:
    p = O.p
    cols = []
    for i in range(O.d):
        e = [int(i == j) for j in range(O.d)]
        cols.append(O.power(e, p, p))
    return pm.transpose(cols)


def _radical_mod_p(O: _Order) -> pm.Matrix:
    """Columns spanning the nilradical of O/pO (kernel of a Frobenius power)."""
    p, d = O.p, O.d
    Fr = _frobenius_matrix(O)
    Fj = Fr
    pj = p
    while pj < d:
        Fj = pm.mat_mul(Fr, Fj, p)
        pj *= p
    B, _ = pm.kernel_basis(Fj, p, 1)
    return B


def _enlarge(O: _Order) -> _Order | None:
    """One Round-2 step: the ring of multipliers of the p-radical, or None if O is p-maximal."""
    p, d, k = O.p, O.d, O.k
    R = _radical_mod_p(O)
    r = len(R[0]) if R and R[0] else 0
    if r == 0:
        return None
    gens = [[R[i][j] for j in range(r)] + [p * int(i == j) for j in range(d)] for i in range(d)]
    C = _span_basis(gens, p, k)
    # u is a multiplier iff C^{-1} M_u C vanishes mod p; this is F_p-linear in u mod p
    cols = []
    for i in range(d):
        Q, _ = _left_divide(C, pm.mat_mul(O.mats[i], C, O.q), p, k)
        cols.append([x % p for row in Q for x in row])
    A = pm.transpose(cols)
    U, _ = pm.kernel_basis(A, p, 1)
    u = len(U[0]) if U and U[0] else 0
    if u == 0:
        return None
    gens = [[U[i][j] for j in range(u)] + [p * int(i == j) for j in range(d)] for i in range(d)]
    D = _span_basis(gens, p, k)
    q = O.q
    new_mats = []
    kk = k
    for j in range(d):
        Dj = [D[i][j] for i in range(d)]
        Y = pm.mat_mul(O.mult_matrix(Dj), D, q)
        X, kj = _left_divide(D, Y, p, k)
        if any(x % p for row in X for x in row):
            raise InvariantViolation("enlarged order is not closed under multiplication")
        X = [[x // p for x in row] for row in X]
        kj -= 1
        new_mats.append(X)
        kk = min(kk, kj)
    def coords(v):
        X, kv = _left_divide(D, [[x * p % q] for x in v], p, k)
        return [row[0] for row in X], kv
    one, k1 = coords(O.one)
    theta, k2 = coords(O.theta)
    kk = min(kk, k1, k2)
    if kk < 2:
        raise PrecisionExhausted("maximal order computation exhausted the working precision")
    qq = p**kk
    new_mats = [pm.reduce(M, qq) for M in new_mats]
    basis = pm.mat_mul(O.basis, D, p ** (kk + O.shift + 1))
    shift = O.shift + 1
    while shift and all(x % p == 0 for row in basis for x in row):
        basis = [[x // p for x in row] for row in basis]
        shift -= 1
    return _Order(new_mats, [x % qq for x in one], [x % qq for x in theta], basis, shift, p, kk)


def _maximal_order(f: list[int], p: int, k: int) -> _Order:
    O = _equation_order(f, p, k)
    while True:
        nxt = _enlarge(O)
        if nxt is None:
            return O
        O = nxt


def _primitive_idempotents(O: _Order) -> list[list[int]]:
    """Primitive idempotents of O/pO via the Berlekamp subalgebra x^p = x."""
    p, d = O.p, O.d
    Fr = _frobenius_matrix(O)
    B, _ = pm.kernel_basis(pm.shift_diagonal(Fr, -1, p), p, 1)
    r = len(B[0]) if B and B[0] else 0
    idems = [[x % p for x in O.one]]
    for j in range(r):
        b = [B[i][j] for i in range(d)]
        refined = []
        for e in idems:
            eb = O.mul(e, b, p)
            for c in range(p):
                # 1 - (eb - c e)^(p-1) restricted to e is the indicator of the value c
                diff = [(x - c * y) % p for x, y in zip(eb, e)]
                ind = O.power(diff, p - 1, p)
                part = [(y - O.mul(e, ind, p)[i]) % p for i, y in enumerate(e)]
                if any(part):
                    refined.append(part)
        idems = refined
    if len(idems) != r:
        raise InvariantViolation("idempotent splitting does not match the Berlekamp dimension")
    return idems


def _lift_idempotent(O: _Order, e: list[int]) -> list[int]:
    q = O.q
    prec = 1
    while prec < O.k:
        prec *= 2
        e2 = O.mul(e, e, q)
        e3 = O.mul(e2, e, q)
        e = [(3 * a - 2 * b) % q for a, b in zip(e2, e3)]
    return e


def _is_eisenstein_shift(g: list[int], p: int) -> bool:
    facs = _factor_mod_p(g, p)
    if len(facs) != 1 or len(facs[0][0]) != 2:
        return False
    c = (-facs[0][0][0]) % p
    sh = _taylor_shift(g, c, p ** 3)
    return all(x % p == 0 for x in sh[:-1]) and sh[0] % (p * p) != 0


def _is_residue_irreducible(g: list[int], p: int) -> bool:
    facs = _factor_mod_p(g, p)
    return len(facs) == 1 and facs[0][1] == 1


def _to_theta(O: _Order, v: list[int], k: int) -> tuple[tuple[int, ...], int]:
    q = p_k = O.p**k
    coeffs = pm.mat_vec(O.basis, v, p_k)
    shift = O.shift
    while shift and all(c % O.p == 0 for c in coeffs):
        coeffs = [c // O.p for c in coeffs]
        shift -= 1
    return tuple(c % q for c in coeffs), shift


def _component(O: _Order, e: list[int], rad_dim: int, rng) -> QpFactor:
    p, k = O.p, O.k
    Me = O.mult_matrix(e)
    B, kb = pm.image_basis(Me, p, k)
    kb = min(kb, k)
    if kb < 1:
        raise PrecisionExhausted("component basis undetermined at this precision")
    dim = len(B[0])
    qb = p**kb
    B = pm.reduce(B, qb)
    f_deg = dim - rad_dim
    if f_deg < 1 or dim % f_deg:
        raise InvariantViolation("inconsistent residue degree")
    e_ram = dim // f_deg

    def restricted_charpoly(v):
        X = pm.restrict(O.mult_matrix(v, qb), B, p, kb)
        return pm.charpoly(X, qb)

    g = restricted_charpoly(O.theta)
    if dim == 1:
        cert = Certificate("degree-1", 1, 1, kb, ((0, 1), 0), tuple(g))
        return QpFactor(PadicPoly(tuple(g), p, kb), cert)
    if e_ram == 1 and _is_residue_irreducible(g, p):
        return QpFactor(PadicPoly(tuple(g), p, kb), Certificate("unramified", 1, dim, kb, ((0, 1), 0), tuple(g)))
    if f_deg == 1 and _is_eisenstein_shift(g, p):
        return QpFactor(PadicPoly(tuple(g), p, kb), Certificate("eisenstein-shift", dim, 1, kb, ((0, 1), 0), tuple(g)))
    gen = mp = None
    if e_ram == 1 or f_deg == 1:
        test = _is_residue_irreducible if e_ram == 1 else _is_eisenstein_shift
        cols = [[B[i][j] for i in range(O.d)] for j in range(dim)]
        candidates = list(cols)
        candidates += [[(a + b) % qb for a, b in zip(x, y)] for x, y in itertools.combinations(cols, 2)]
        for _ in range(200):
            candidates.append([sum(rng.randrange(p) * c[i] for c in cols) % qb for i in range(O.d)])
        for v in candidates:
            h = restricted_charpoly(v)
            if test(h, p):
                gen, mp = _to_theta(O, v, kb), tuple(h)
                break
    return QpFactor(PadicPoly(tuple(g), p, kb), Certificate("maximal-order", e_ram, f_deg, kb, gen, mp))


def factor_over_qp(f: PadicPoly) -> list[QpFactor]:
    """Factor a monic squarefree polynomial into irreducibles over Q_p.

    The p-maximal order of Q_p[x]/(f) is built by Round 2; its local
    components, split by idempotents, are the factors.  Each factor carries
    a :class:`Certificate`; factors are sorted by degree then coefficients
    and returned at the precision they are certified to.
    """
    import random

    p, K = f.prime, f.precision
    if not f.is_monic():
        raise ValueError("f must be monic")
    fl = f.as_list()
    n = len(fl) - 1
    if n < 1:
        raise ValueError("f must have positive degree")
    if n == 1:
        return [QpFactor(f, Certificate("degree-1", 1, 1, K, ((0, 1), 0), tuple(fl)))]
    try:
        vd = norm_valuation(f, f.derivative())
    except PrecisionExhausted:
        raise NotSquarefree("gcd(f, f') is nontrivial at this precision") from None
    # the factorization pattern is only determined once K clearly exceeds v_p(disc)
    if K <= 2 * vd + 1:
        raise PrecisionExhausted("precision too small relative to the discriminant")
    O = _maximal_order(fl, p, K)
    R = _radical_mod_p(O)
    rad = [[R[i][j] for i in range(O.d)] for j in range(len(R[0]) if R and R[0] else 0)]
    rng = random.Random(0)
    out = []
    for e_bar in _primitive_idempotents(O):
        e = _lift_idempotent(O, e_bar)
        rad_dim = 0
        if rad:
            img = [O.mul(e_bar, v, p) for v in rad]
            rad_dim = pm.rank_mod_p(pm.transpose(img), p) if any(any(v) for v in img) else 0
        out.append(_component(O, e, rad_dim, rng))
    kmin = min(fac.poly.precision for fac in out)
    prod = [1]
    for fac in out:
        prod = _pmul(prod, fac.poly.as_list(), p**kmin)
    if prod != _trim([c % p**kmin for c in fl]):
        raise InvariantViolation("factors do not multiply back to f")
    out.sort(key=lambda fac: (fac.degree, fac.poly.coeffs))
    return out


# --- extensions ---------------------------------------------------------


@dataclass(frozen=True)
class ExtElement:
    """Element of Z_p[x]/(g), with g monic irreducible over Q_p."""

    modulus: PadicPoly
    value: PadicPoly

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _wrap(self, v: PadicPoly) -> "ExtElement":
        return ExtElement(self.modulus, v)

    def __add__(self, other: "ExtElement") -> "ExtElement":
        return self._wrap(self.value + other.value)

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self._wrap(self.value - other.value)

    def __mul__(self, other: "ExtElement") -> "ExtElement":
        return self._wrap(self.value * other.value)

    def norm_valuation(self) -> int:
        return norm_valuation(self.modulus, self.value)


class ValuationRing:
    """O = Z_p or Z_p[x]/(g) presented by an Eisenstein-after-shift or
    residue-irreducible monic g, at precision p^K.

    Elements are tuples of ``degree`` residues (power-basis coordinates).
    """

    def __init__(self, p: int, K: int, modulus=None):
        self.p = p
        self.K = K
        self.q = p**K
        if modulus is None or len(_trim([int(c) for c in modulus])) <= 2:
            self.modulus = None
            self.degree = 1
            self.e = 1
            self.f = 1
        else:
            g = [int(c) % self.q for c in _trim([int(c) for c in modulus])]
            if g[-1] != 1:
                raise ValueError("extension modulus must be monic")
            self.modulus = tuple(g)
            self.degree = len(g) - 1
            self.e, self.f = self._classify(g)
        self.residue_order = p**self.f
        self._mult_cache: dict = {}

    def _classify(self, g: list[int]) -> tuple[int, int]:
        p, d = self.p, len(g) - 1
        facs = _factor_mod_p(g, p)
        if len(facs) == 1 and facs[0][1] == 1:
            return 1, d
        if len(facs) == 1 and len(facs[0][0]) == 2:
            c = (-facs[0][0][0]) % p
            shifted = _taylor_shift(g, c, self.q)
            if all(x % p == 0 for x in shifted[:-1]) and shifted[0] % (p * p):
                return d, 1
        raise ValueError("modulus must be residue-irreducible or Eisenstein after a shift")

    def __repr__(self) -> str:
        return f"ValuationRing(p={self.p}, K={self.K}, modulus={self.modulus})"

    @property
    def rank(self) -> int:
        """[O : Z_p]."""
        return self.degree

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.degree

    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.degree - 1)

    def scalar(self, c: int) -> tuple[int, ...]:
        return (c % self.q,) + (0,) * (self.degree - 1)

    def theta(self) -> tuple[int, ...]:
        if self.degree == 1:
            return (0,)
        return (0, 1) + (0,) * (self.degree - 2)

    def power_basis(self, j: int) -> tuple[int, ...]:
        """theta^j for 0 <= j < degree."""
        return tuple(int(i == j) for i in range(self.degree))

    def uniformizer(self) -> tuple[int, ...]:
        if self.e == 1:
            return self.scalar(self.p)
        return self.sub(self.theta(), self.scalar(self._ramified_root()))

    def coerce(self, value) -> tuple[int, ...]:
        if isinstance(value, int):
            return self.scalar(value)
        vals = [int(c) for c in value]
        if len(vals) > self.degree:
            vals = _pmod(vals, list(self.modulus), self.q) if self.modulus else vals[:1]
        vals = vals + [0] * (self.degree - len(vals))
        return tuple(c % self.q for c in vals)

    def add(self, a, b):
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.q for x, y in zip(a, b))

    def mul(self, a, b):
        if self.degree == 1:
            return ((a[0] * b[0]) % self.q,)
        prod = _pmod(_pmul(list(a), list(b), self.q), list(self.modulus), self.q)
        return tuple(prod + [0] * (self.degree - len(prod)))

    def is_zero(self, a) -> bool:
        return not any(a)

    def mult_matrix(self, a) -> pm.Matrix:
        """Matrix of multiplication by a on the power basis (columns)."""
        cols = []
        basis = [tuple(int(i == j) for j in range(self.degree)) for i in range(self.degree)]
        for b in basis:
            cols.append(self.mul(a, b))
        return pm.transpose([list(c) for c in cols])

    def norm_val(self, a) -> int | AtLeast:
        """v_p of the norm of a down to Q_p."""
        if self.is_zero(a):
            return AtLeast(self.K)
        if self.degree == 1:
            return vp(a[0], self.p)
        g = PadicPoly(self.modulus, self.p, self.K)
        try:
            return norm_valuation(g, PadicPoly(tuple(a), self.p, self.K))
        except PrecisionExhausted:
            return AtLeast(self.K)

    def varpi_valuation(self, a) -> int | AtLeast:
        """Valuation in the uniformizer of O."""
        v = self.norm_val(a)
        if isinstance(v, AtLeast):
            return AtLeast(self.K * self.e)
        if v % self.f:
            raise InvariantViolation("norm valuation is not a multiple of the residue degree")
        return v // self.f

    def in_maximal_ideal(self, a) -> bool:
        if self.degree == 1:
            return a[0] % self.p == 0
        if self.e == 1:
            return all(c % self.p == 0 for c in a)
        v = self.varpi_valuation(a)
        return isinstance(v, AtLeast) or v >= 1

    def residue_vector(self, a) -> list[int]:
        """Coordinates over F_p of the residue of a in F = O / varpi."""
        if self.e == 1:
            return [c % self.p for c in a]
        # totally ramified: the residue is that of the constant term after shift
        return [self._residue_ramified(a)]

    def _residue_ramified(self, a) -> int:
        # theta is congruent to the residue root c, so a(theta) = a(c) mod varpi
        c = self._ramified_root()
        acc = 0
        for x in reversed(a):
            acc = (acc * c + x) % self.p
        return acc

    def _ramified_root(self) -> int:
        facs = _factor_mod_p(list(self.modulus), self.p)
        return (-facs[0][0][0]) % self.p

    def unit_representatives(self) -> list[tuple[int, ...]]:
        """Fixed representatives of F^x, enumerated 1, 2, ..., q-1."""
        p = self.p
        if self.f == 1:
            return [self.scalar(c) for c in range(1, p)]
        reps = []
        for digits in itertools.product(range(p), repeat=self.degree):
            if any(digits):
                reps.append(tuple(reversed(digits)))
        reps.sort(key=lambda t: sum(c * p**i for i, c in enumerate(t)))
        return reps


def _taylor_shift(f: list[int], c: int, q: int) -> list[int]:
    """Coefficients of f(x + c)."""
    out: list[int] = []
    for coef in reversed(f):
        out = _padd(_pmul(out, [c, 1], q), [coef], q)
    return out + [0] * (len(f) - len(out))


def root_valuations(f: PadicPoly) -> list[Fraction]:
    return newton_polygon(f).root_valuations()


def gcd_int(a: int, b: int) -> int:
    return gcd(a, b)
