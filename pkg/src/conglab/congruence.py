"""Finite-index ideals in blocked subalgebras of O^n.

The ambient algebra is A = O^n = O^{n_1} x ... x O^{n_s} with coordinatewise
multiplication.  A local subalgebra T of full rank and an ideal J of finite
index are stored as p-local lattices in Z_p^{n t}, where t = [O : Z_p] and
each O-coordinate is written in the power basis of O.

Principality of an ideal J of a local T is decided exactly: J is principal
iff J / m_T J is one-dimensional over the residue field (Nakayama), and then
any element of J outside m_T J generates it.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import padic_matrix as pm
from .dvr import AtLeast, ValuationRing
from .errors import (
    GeneratorFailure,
    HypothesisViolated,
    InfiniteQuotient,
    InvariantViolation,
    NotIdeal,
    NotPrincipal,
    NotSubalgebra,
    NotSublattice,
    PrecisionExhausted,
    SchemaError,
)
from .lattice import LatticeBasis, lattice_index

log = logging.getLogger(__name__)

__all__ = [
    "BlockedAmbient",
    "Subalgebra",
    "FiniteIndexIdeal",
    "EigenTable",
    "CongruenceReport",
    "AnnihilatorResult",
    "block_project",
    "quotient_order",
    "maximal_ideal",
    "principal_generator",
    "find_block_generator",
    "find_simultaneous_generator",
    "compare_block_orders",
    "verify_kr12",
    "annihilator_ideal",
    "depth_report",
    "random_instance",
    "strict_fixture",
    "strict_fixture_non_ideal",
]


# --- ambient ----------------------------------------------------------------


class BlockedAmbient:
    """O^{n_1} x ... x O^{n_s} at precision p^K."""

    def __init__(self, prime: int, precision: int, block_sizes, modulus=None, ring: ValuationRing | None = None):
        self.prime = prime
        self.precision = precision
        self.block_sizes = tuple(int(b) for b in block_sizes)
        if not self.block_sizes or min(self.block_sizes) < 1:
            raise ValueError("need at least one block, each of positive size")
        self.ring = ring or ValuationRing(prime, precision, modulus)
        self.t = self.ring.degree
        self.offsets = list(itertools.accumulate((0,) + self.block_sizes))[:-1]

    def __repr__(self) -> str:
        return f"BlockedAmbient(p={self.prime}, K={self.precision}, blocks={self.block_sizes}, O={self.ring.modulus})"

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    @property
    def s(self) -> int:
        return len(self.block_sizes)

    @property
    def dim(self) -> int:
        """Rank over Z_p."""
        return self.n * self.t

    @property
    def residue_field_order(self) -> int:
        return self.ring.residue_order

    @property
    def q(self) -> int:
        return self.prime**self.precision

    def coord(self, v, pos: int) -> tuple[int, ...]:
        return tuple(v[pos * self.t:(pos + 1) * self.t])

    def from_coords(self, coords) -> list[int]:
        out: list[int] = []
        for c in coords:
            out.extend(self.ring.coerce(c))
        return out

    def one(self) -> list[int]:
        return self.from_coords([self.ring.one()] * self.n)

    def scalar(self, c) -> list[int]:
        return self.from_coords([self.ring.coerce(c)] * self.n)

    def mul(self, a, b, q=None) -> list[int]:
        out: list[int] = []
        for pos in range(self.n):
            out.extend(self.ring.mul(self.coord(a, pos), self.coord(b, pos)))
        return out

    def block_positions(self, i: int) -> range:
        return range(self.offsets[i], self.offsets[i] + self.block_sizes[i])

    def project(self, v, i: int) -> list[int]:
        pos = self.block_positions(i)
        return list(v[pos.start * self.t:pos.stop * self.t])

    def project_positions(self, v, positions) -> list[int]:
        out: list[int] = []
        for pos in positions:
            out.extend(self.coord(v, pos))
        return out

    def block_ambient(self, i: int) -> "BlockedAmbient":
        return BlockedAmbient(self.prime, self.precision, (self.block_sizes[i],), ring=self.ring)

    def span(self, gens) -> LatticeBasis:
        gens = [list(g) for g in gens]
        if not gens:
            return LatticeBasis(self.dim, (), self.prime, self.precision)
        return LatticeBasis.span(gens, self.prime, self.precision, self.dim)

    def o_span(self, gens) -> LatticeBasis:
        """O-module generated by the vectors."""
        gens = [list(g) for g in gens]
        if self.t > 1:
            gens = [self.mul(self.scalar(self.ring.power_basis(j)), g) for j in range(self.t) for g in gens]
        return self.span(gens)

    def random_element(self, rng: random.Random, scale: int = 1) -> list[int]:
        q = self.q
        return [scale * rng.randrange(q) % q for _ in range(self.dim)]


# --- subalgebras and ideals -----------------------------------------------


@dataclass(eq=False)
class Subalgebra:
    ambient: BlockedAmbient
    lattice: LatticeBasis
    check: bool = True

    def __post_init__(self):
        if self.check:
            self.validate()

    @classmethod
    def generated_by(cls, ambient: BlockedAmbient, gens) -> "Subalgebra":
        """Smallest O-subalgebra containing 1 and the generators."""
        L = ambient.o_span([ambient.one()] + [list(g) for g in gens])
        for _ in range(4 * ambient.dim + 4):
            prods = [ambient.mul(g, b) for g in gens for b in L.columns]
            new = ambient.o_span(list(L.columns) + prods)
            if new == L:
                return cls(ambient, L)
            L = new
        raise PrecisionExhausted("subalgebra closure did not stabilize")

    @property
    def basis(self) -> list[list[int]]:
        return [list(c) for c in self.lattice.columns]

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def contains(self, v) -> bool:
        return self.lattice.contains(v)

    def validate(self) -> None:
        amb = self.ambient
        if self.lattice.rank != amb.dim:
            raise NotSubalgebra("subalgebra is not of full rank")
        if not self.contains(amb.one()):
            raise NotSubalgebra("subalgebra does not contain 1")
        if amb.t > 1 and not all(self.contains(amb.mul(amb.scalar(amb.ring.theta()), b)) for b in self.basis):
            raise NotSubalgebra("subalgebra is not an O-module")
        for a, b in itertools.combinations_with_replacement(self.basis, 2):
            if not self.contains(amb.mul(a, b)):
                raise NotSubalgebra("subalgebra is not closed under multiplication")
        if not self.is_local():
            raise NotSubalgebra("subalgebra is not local")

    def is_local(self) -> bool:
        """All coordinates of every basis vector share one residue in F."""
        amb = self.ambient
        ring = amb.ring
        for b in self.basis:
            res = {tuple(ring.residue_vector(amb.coord(b, pos))) for pos in range(amb.n)}
            if len(res) > 1:
                return False
        return True


@dataclass(eq=False)
class FiniteIndexIdeal:
    parent: Subalgebra
    lattice: LatticeBasis
    check: bool = True

    def __post_init__(self):
        if self.check:
            self.validate()

    @classmethod
    def generated_by(cls, T: Subalgebra, gens) -> "FiniteIndexIdeal":
        amb = T.ambient
        prods = [amb.mul(list(g), b) for g in gens for b in T.basis]
        return cls(T, amb.span(prods))

    @property
    def ambient(self) -> BlockedAmbient:
        return self.parent.ambient

    @property
    def basis(self) -> list[list[int]]:
        return [list(c) for c in self.lattice.columns]

    def contains(self, v) -> bool:
        return self.lattice.contains(v)

    def validate(self) -> None:
        T = self.parent
        if not T.lattice.contains_lattice(self.lattice):
            raise NotIdeal("J is not contained in T")
        if self.lattice.rank != T.lattice.rank:
            raise NotIdeal("J does not have finite index in T")
        amb = self.ambient
        for t in T.basis:
            for j in self.basis:
                if not self.contains(amb.mul(t, j)):
                    raise NotIdeal("J is not stable under multiplication by T")


def block_project(X, i: int):
    """T_i or J_i: the image of X under the projection to block i."""
    if isinstance(X, Subalgebra):
        amb = X.ambient
        sub = amb.block_ambient(i)
        return Subalgebra(sub, sub.span([amb.project(b, i) for b in X.basis]))
    if isinstance(X, FiniteIndexIdeal):
        Ti = block_project(X.parent, i)
        amb = X.ambient
        return FiniteIndexIdeal(Ti, Ti.ambient.span([amb.project(b, i) for b in X.basis]))
    raise TypeError("expected a Subalgebra or FiniteIndexIdeal")


def quotient_order(T: Subalgebra, J: FiniteIndexIdeal) -> int:
    """v_p(#T/J)."""
    if J.parent is not T:
        raise ValueError("J is not an ideal of this T")
    return lattice_index(T.lattice, J.lattice, T.ambient.prime)


# --- principality ---------------------------------------------------------


def maximal_ideal(T: Subalgebra) -> LatticeBasis:
    """m_T: the kernel of the residue map T -> F (read at the first coordinate)."""
    amb = T.ambient
    p = amb.prime
    ring = amb.ring
    rows = pm.transpose([ring.residue_vector(amb.coord(b, 0)) for b in T.basis])
    K, _ = pm.kernel_basis(rows, p, 1)
    k = len(K[0]) if K and K[0] else 0
    gens = []
    basis = T.basis
    for j in range(k):
        gens.append([sum(K[i][j] * basis[i][c] for i in range(len(basis))) for c in range(amb.dim)])
    gens += [[p * x for x in b] for b in basis]
    return amb.span(gens)


def _product_lattice(amb: BlockedAmbient, A: LatticeBasis, B: LatticeBasis) -> LatticeBasis:
    return amb.span([amb.mul(a, b) for a in A.columns for b in B.columns])


def principal_generator(T: Subalgebra, J: FiniteIndexIdeal) -> list[int] | None:
    """A generator of J if J is principal, else None (exact, by Nakayama)."""
    amb = T.ambient
    m = maximal_ideal(T)
    mJ = _product_lattice(amb, m, J.lattice)
    if lattice_index(J.lattice, mJ, amb.prime) != amb.ring.f:
        return None
    for b in J.basis:
        if not mJ.contains(b):
            if not _generates(T, J, b):
                raise InvariantViolation("element outside m J does not generate a principal J")
            return b
    raise InvariantViolation("J equals m J")


def _generates(T: Subalgebra, J: FiniteIndexIdeal, a) -> bool:
    amb = T.ambient
    return amb.span([amb.mul(a, t) for t in T.basis]) == J.lattice


def find_block_generator(Ti: Subalgebra, Ji: FiniteIndexIdeal) -> list[int]:
    """A generator of J_i; raises NotPrincipal when J_i is provably not principal."""
    g = principal_generator(Ti, Ji)
    if g is None:
        raise NotPrincipal("J_i / m J_i has dimension greater than one")
    return g


class _BlockTester:
    """Membership tests deciding whether a coordinate block generates J_i."""

    def __init__(self, T: Subalgebra, J: FiniteIndexIdeal):
        self.T, self.J = T, J
        amb = T.ambient
        self.amb = amb
        self.blocks = []
        for i in range(amb.s):
            Ti = block_project(T, i)
            Ji = block_project(J, i)
            gen = principal_generator(Ti, Ji)
            if gen is None:
                raise NotPrincipal(f"J_{i + 1} is not principal")
            mJi = _product_lattice(Ti.ambient, maximal_ideal(Ti), Ji.lattice)
            self.blocks.append((Ti, Ji, gen, mJi))

    def good_at(self, v, i: int) -> bool:
        Ti, Ji, _, mJi = self.blocks[i]
        w = self.amb.project(v, i)
        return Ji.contains(w) and not mJi.contains(w)

    def good_on(self, v, S) -> bool:
        return all(self.good_at(v, i) for i in S)


def _solve_any(cols: list[list[int]], y: list[int], p: int, K: int) -> list[int]:
    """Integer c with sum c_j cols[j] = y modulo p^K (cols need not be independent)."""
    A = pm.transpose(cols)
    red = pm.smith_reduce(A, p, K)
    q = p**K
    z = pm.mat_vec(red.U, y, q)
    for r in range(red.rank, len(z)):
        if z[r]:
            raise NotSublattice("no solution")
    w = [0] * len(cols)
    for r, v in enumerate(red.vals):
        if z[r] % p**v:
            raise NotSublattice("no integral solution")
        w[r] = z[r] // p**v
    return pm.mat_vec(red.V, w, q)


def _lift(amb: BlockedAmbient, X_basis, i: int, y) -> list[int]:
    """An element of the lattice X whose block-i projection is y."""
    cols = [amb.project(b, i) for b in X_basis]
    c = _solve_any(cols, list(y), amb.prime, amb.precision)
    q = amb.q
    return [sum(ci * b[k] for ci, b in zip(c, X_basis)) % q for k in range(amb.dim)]


def _divide_in_block(Ti: Subalgebra, num, den) -> list[int]:
    """z in T_i with z * den = num (den a non-zero-divisor generating num's ideal)."""
    amb = Ti.ambient
    cols = [amb.mul(b, den) for b in Ti.basis]
    c = _solve_any(cols, list(num), amb.prime, amb.precision)
    q = amb.q
    return [sum(ci * b[k] for ci, b in zip(c, Ti.basis)) % q for k in range(amb.dim)]


def find_simultaneous_generator(T: Subalgebra, J: FiniteIndexIdeal, seed: int = 0, random_trials: int = 200):
    """alpha in J whose every block projection generates J_i.

    Seeded random combinations of the J-basis are tried first.  If they
    fail, the inductive construction is run: for a block set S an element
    good on S is built from elements good on S minus one block, either
    directly or from the elements a_j vanishing at block j via a_1 + a_2
    or a scan a_first + u a_last over unit representatives u.
    Returns (alpha, method).
    """
    amb = T.ambient
    s = amb.s
    q_res = amb.residue_field_order
    if q_res - 1 < s - 1:
        raise HypothesisViolated(f"#F^x = {q_res - 1} < s - 1 = {s - 1}")
    tester = _BlockTester(T, J)
    allS = tuple(range(s))
    rng = random.Random(seed)
    p, q = amb.prime, amb.q
    basis = J.basis
    for _ in range(random_trials):
        coeffs = [rng.randrange(p) for _ in basis]
        v = [sum(c * b[k] for c, b in zip(coeffs, basis)) % q for k in range(amb.dim)]
        if tester.good_on(v, allS):
            return v, "random"
    alpha = _inductive_generator(T, J, tester)
    return alpha, "induction"


def _inductive_generator(T: Subalgebra, J: FiniteIndexIdeal, tester: _BlockTester) -> list[int]:
    amb = T.ambient
    q = amb.q
    memo: dict[tuple[int, ...], list[int]] = {}

    def good(S: tuple[int, ...]) -> list[int]:
        if S in memo:
            return memo[S]
        if len(S) == 1:
            i = S[0]
            _, _, gen, _ = tester.blocks[i]
            v = _lift(amb, J.basis, i, gen)
        else:
            v = _extend(S)
        if not tester.good_on(v, S):
            raise GeneratorFailure(f"construction failed on blocks {S}")
        memo[S] = v
        return v

    def vanishing_element(S, j):
        """Either an element good on S, or one zero at j and good on S minus j."""
        rest = tuple(i for i in S if i != j)
        alpha = good(rest)
        k = rest[0]
        beta = good(tuple(i for i in S if i != k))
        for cand in (alpha, beta):
            if tester.good_on(cand, S):
                return cand, True
        Tj = block_project(T, j)
        z_j = _divide_in_block(Tj, amb.project(alpha, j), amb.project(beta, j))
        z = _lift(amb, T.basis, j, z_j)
        gamma = [(a - b) % q for a, b in zip(alpha, amb.mul(z, beta))]
        if any(x % q for x in amb.project(gamma, j)):
            raise GeneratorFailure("lifted quotient does not cancel block j")
        if not tester.good_on(gamma, rest):
            raise GeneratorFailure(f"dichotomy failed for blocks {S} at {j}")
        return gamma, False

    def _extend(S):
        a = {}
        for j in S:
            v, done = vanishing_element(S, j)
            if done:
                return v
            a[j] = v
        first, last = S[0], S[-1]
        if len(S) == 2:
            return [(x + y) % q for x, y in zip(a[first], a[last])]
        for u in amb.ring.unit_representatives():
            cand = [(x + y) % q for x, y in zip(a[first], amb.mul(amb.scalar(u), a[last]))]
            if tester.good_on(cand, S):
                return cand
        raise GeneratorFailure(f"no unit u gives a simultaneous generator on blocks {S}")

    return good(tuple(range(amb.s)))


# --- reports --------------------------------------------------------------


@dataclass
class CongruenceReport:
    order_T_mod_J: int
    block_orders: list[int]
    depths: list[Fraction] = field(default_factory=list)
    principal: bool | None = None
    verdict: str = ""
    precision: int = 0
    hypotheses_hold: bool | None = None
    generator_method: str | None = None
    normalized_total: Fraction | None = None
    normalized_order: Fraction | None = None
    congruence_module_order: int | None = None
    residue_field_ok: bool | None = None
    labels: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "order_T_mod_J": self.order_T_mod_J,
            "block_orders": self.block_orders,
            "depths": [str(d) for d in self.depths],
            "labels": self.labels,
            "principal": self.principal,
            "verdict": self.verdict,
            "hypotheses_hold": self.hypotheses_hold,
            "generator_method": self.generator_method,
            "normalized_total": None if self.normalized_total is None else str(self.normalized_total),
            "normalized_order": None if self.normalized_order is None else str(self.normalized_order),
            "congruence_module_order": self.congruence_module_order,
            "residue_field_ok": self.residue_field_ok,
            "notes": self.notes,
        }


def _compare(lhs, rhs) -> str:
    if lhs == rhs:
        return "equality"
    return "strict-inequality" if lhs > rhs else "reversed"


def compare_block_orders(T: Subalgebra, J: FiniteIndexIdeal, seed: int = 0) -> CongruenceReport:
    """Compare sum of v_p(#T_i/J_i) with v_p(#T/J) and check the supporting identities."""
    amb = T.ambient
    p = amb.prime
    order = quotient_order(T, J)
    blocks = []
    principal_blocks = True
    for i in range(amb.s):
        Ti, Ji = block_project(T, i), block_project(J, i)
        blocks.append(lattice_index(Ti.lattice, Ji.lattice, p))
        if principal_generator(Ti, Ji) is None:
            principal_blocks = False
    total = sum(blocks)
    gen = principal_generator(T, J)
    report = CongruenceReport(order, blocks, principal=gen is not None, precision=amb.precision)
    hyp = principal_blocks and amb.residue_field_order - 1 >= amb.s - 1
    report.hypotheses_hold = hyp
    if hyp:
        alpha, method = find_simultaneous_generator(T, J, seed)
        report.generator_method = method
        _check_product_order(T, J, alpha, blocks)
        if total < order:
            raise InvariantViolation(f"block sum {total} is below the order {order}")
    if gen is not None:
        _check_product_order(T, J, gen, blocks)
        if total != order:
            raise InvariantViolation(f"principal J but block sum {total} differs from order {order}")
    report.verdict = _compare(total, order)
    return report


verify_kr12 = compare_block_orders


def _check_product_order(T: Subalgebra, J: FiniteIndexIdeal, alpha, blocks) -> None:
    """#T/alpha T = prod #T_i/alpha_i T_i, both equal to the norm of alpha."""
    amb = T.ambient
    p = amb.prime
    aT = amb.span([amb.mul(alpha, t) for t in T.basis])
    lhs = lattice_index(T.lattice, aT, p)
    norm = 0
    for pos in range(amb.n):
        v = amb.ring.norm_val(amb.coord(alpha, pos))
        if isinstance(v, AtLeast):
            raise InvariantViolation("generator has a zero coordinate")
        norm += v
    per_block = 0
    for i in range(amb.s):
        Ti = block_project(T, i)
        sub = Ti.ambient
        ai = amb.project(alpha, i)
        per_block += lattice_index(Ti.lattice, sub.span([sub.mul(ai, t) for t in Ti.basis]), p)
        Ji = block_project(J, i)
        if sub.span([sub.mul(ai, t) for t in Ti.basis]) != Ji.lattice:
            raise GeneratorFailure(f"block {i + 1} of the generator does not generate J_{i + 1}")
    if not (lhs == norm == per_block == sum(blocks)):
        raise InvariantViolation(f"product order identity failed: {lhs}, {norm}, {per_block}, {sum(blocks)}")


# --- eigenvalue tables ------------------------------------------------------


@dataclass
class EigenTable:
    """Systems of eigenvalues lambda(g) in O for a list of generators g.

    Values are O-elements as tuples of power-basis coordinates.
    """

    prime: int
    precision: int
    generators: list[str]
    systems: list[tuple[str, list[tuple[int, ...]]]]
    distinguished: str
    ext_modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        labels = [lab for lab, _ in self.systems]
        if labels.count(self.distinguished) != 1:
            raise SchemaError("distinguished label must occur exactly once")
        for lab, vals in self.systems:
            if len(vals) != len(self.generators):
                raise SchemaError(f"system {lab} has {len(vals)} values for {len(self.generators)} generators")

    @cached_property
    def ring(self) -> ValuationRing:
        return ValuationRing(self.prime, self.precision, self.ext_modulus)

    def values(self, label: str) -> list[tuple[int, ...]]:
        for lab, vals in self.systems:
            if lab == label:
                return [self.ring.coerce(v) for v in vals]
        raise KeyError(label)


@dataclass
class AnnihilatorResult:
    T0: LatticeBasis
    T: Subalgebra | None
    J: LatticeBasis
    order: int
    congruence_module_order: int
    labels: list[str]
    ambient0: BlockedAmbient
    merged: list[str]


def _dedupe(table: EigenTable) -> tuple[list[str], list[list[tuple[int, ...]]], list[str]]:
    lam0 = table.values(table.distinguished)
    labels = [table.distinguished]
    vals = [lam0]
    merged = []
    for lab, _ in table.systems:
        if lab == table.distinguished:
            continue
        v = table.values(lab)
        if v == lam0:
            raise InfiniteQuotient(
                f"system {lab} agrees with the distinguished system on every generator, so T/J is infinite"
            )
        if v in vals[1:]:
            log.warning("merging duplicate eigensystem %s", lab)
            merged.append(lab)
            continue
        labels.append(lab)
        vals.append(v)
    return labels, vals, merged


def annihilator_ideal(table: EigenTable) -> AnnihilatorResult:
    """T0 inside O^{#Pi0}, J = projection of Ann(pi_0), and the congruence module check."""
    labels, vals, merged = _dedupe(table)
    ring = table.ring
    p, K = table.prime, table.precision
    r0 = len(labels)
    amb0 = BlockedAmbient(p, K, (1,) * r0, ring=ring)
    gens = [amb0.from_coords([vals[i][g] for i in range(r0)]) for g in range(len(table.generators))]
    L = amb0.o_span([amb0.one()] + gens)
    for _ in range(4 * amb0.dim + 4):
        prods = [amb0.mul(g, b) for g in gens for b in L.columns]
        new = amb0.o_span(list(L.columns) + prods)
        if new == L:
            break
        L = new
    else:
        raise PrecisionExhausted("T0 closure did not stabilize")
    T0 = L
    t = ring.degree
    basis = [list(c) for c in T0.columns]
    # Ann(pi_0): elements of T0 whose lambda_0 coordinate vanishes
    rows = [[b[j] for b in basis] for j in range(t)]
    ker, prec = pm.kernel_basis(rows, p, K)
    if prec < 1:
        raise PrecisionExhausted("annihilator not determined at this precision")
    q = p**K
    nk = len(ker[0]) if ker and ker[0] else 0
    ann = [[sum(ker[i][j] * basis[i][c] for i in range(len(basis))) % q for c in range(amb0.dim)] for j in range(nk)]
    amb = BlockedAmbient(p, K, (1,) * (r0 - 1), ring=ring) if r0 > 1 else None
    if amb is None:
        raise InfiniteQuotient("table has no systems besides the distinguished one")
    drop = lambda v: v[t:]
    T_lat = amb.span([drop(b) for b in basis])
    J_lat = amb.span([drop(a) for a in ann])
    if J_lat.rank < T_lat.rank:
        raise InfiniteQuotient("J has infinite index in T")
    order = lattice_index(T_lat, J_lat, p)
    # congruence module: (O x T) / T0
    OxT = amb0.span([amb0.from_coords([ring.power_basis(j)] + [ring.zero()] * (r0 - 1)) for j in range(t)]
                    + [[0] * t + list(c) for c in T_lat.columns])
    cong = lattice_index(OxT, T0, p)
    if cong != order:
        raise InvariantViolation(f"#T/J ({order}) differs from the congruence module ({cong})")
    T = Subalgebra(amb, T_lat, check=False)
    return AnnihilatorResult(T0, T, J_lat, order, cong, labels, amb0, merged)


def depth_report(table: EigenTable, seed: int = 0, extra_elements: int = 50) -> CongruenceReport:
    """Depths m_lambda, their normalized total, and the comparison with #T/J.

    The depths are minima over the generators; they are re-derived over the
    generators plus ``extra_elements`` random elements of T0 as a check that
    the generator set suffices.
    """
    res = annihilator_ideal(table)
    ring = table.ring
    labels = res.labels
    lam = [table.values(lab) for lab in labels]
    depths = []
    for i in range(1, len(labels)):
        m = None
        for g in range(len(table.generators)):
            v = ring.varpi_valuation(ring.sub(lam[0][g], lam[i][g]))
            if isinstance(v, AtLeast):
                continue
            m = v if m is None else min(m, v)
        if m is None:
            raise InfiniteQuotient(f"system {labels[i]} agrees with the distinguished system")
        depths.append(m)
    _check_generator_sufficiency(res, depths, extra_elements, seed)
    amb = res.T.ambient
    t = ring.degree
    # cross-check: lambda(J) = varpi^m O, of Z_p-length f*m
    for i, m in enumerate(depths):
        Ji = LatticeBasis.span([list(c)[i * t:(i + 1) * t] for c in res.J.columns], table.prime, table.precision, t)
        Oi = LatticeBasis.span([list(ring.power_basis(j)) for j in range(t)], table.prime, table.precision, t)
        if lattice_index(Oi, Ji, table.prime) != ring.f * m:
            raise InvariantViolation(f"projection of J to {labels[i + 1]} does not have length {m}")
    local = [i for i, m in enumerate(depths) if m >= 1]
    principal: bool | None = True
    if local:
        lamb = BlockedAmbient(table.prime, table.precision, (1,) * len(local), ring=ring)
        pos = lambda v: amb.project_positions(v, local)
        Tm = Subalgebra(lamb, lamb.span([pos(list(c)) for c in res.T.lattice.columns]), check=False)
        Jm = FiniteIndexIdeal(Tm, lamb.span([pos(list(c)) for c in res.J.columns]), check=False)
        if not Tm.is_local():
            raise InvariantViolation("localized Hecke algebra is not local")
        principal = principal_generator(Tm, Jm) is not None
    e = ring.e
    total = Fraction(sum(depths), e)
    norm_order = Fraction(res.order, ring.degree)
    n_pi = len(labels) - 1
    field_ok = ring.residue_order - 1 >= n_pi - 1
    report = CongruenceReport(
        order_T_mod_J=res.order,
        block_orders=[ring.f * m for m in depths],
        depths=[Fraction(m, e) for m in depths],
        principal=principal,
        precision=table.precision,
        hypotheses_hold=field_ok,
        normalized_total=total,
        normalized_order=norm_order,
        congruence_module_order=res.congruence_module_order,
        residue_field_ok=field_ok,
        labels=labels[1:],
    )
    if res.merged:
        report.notes.append("merged duplicate systems: " + ", ".join(res.merged))
    if not field_ok:
        report.notes.append(f"#F^x = {ring.residue_order - 1} < #Pi - 1 = {n_pi - 1}")
    report.verdict = _compare(total, norm_order)
    if report.verdict == "reversed" and (field_ok or principal):
        raise InvariantViolation(f"normalized depth total {total} is below the order {norm_order}")
    if principal and report.verdict != "equality":
        raise InvariantViolation("J is principal but the depth total differs from the order")
    return report


def _check_generator_sufficiency(res: AnnihilatorResult, depths: list[int], count: int, seed: int) -> None:
    amb0 = res.ambient0
    ring = amb0.ring
    rng = random.Random(seed)
    basis = [list(c) for c in res.T0.columns]
    for _ in range(count):
        coeffs = [rng.randrange(amb0.q) for _ in basis]
        x = [sum(c * b[k] for c, b in zip(coeffs, basis)) % amb0.q for k in range(amb0.dim)]
        x0 = amb0.coord(x, 0)
        for i, m in enumerate(depths):
            v = ring.varpi_valuation(ring.sub(x0, amb0.coord(x, i + 1)))
            if not isinstance(v, AtLeast) and v < m:
                raise InvariantViolation(f"an algebra element separates system {i + 1} below its generator depth")


# --- generators of instances ------------------------------------------------


def random_instance(s: int, p: int, K: int = 64, seed: int = 0, block_sizes=None, modulus=None, max_tries: int = 200):
    """Reproducible (T, J) with T local of full rank and every J_i principal.

    T is generated by two elements c + p u (c an integer, u random in O^n),
    so every element of T is congruent to a scalar mod p.  J is generated
    by one to three random elements of m_T.  Draws are repeated until T has
    full rank, J has finite index and each J_i is principal.
    """
    rng = random.Random(seed)
    for _ in range(max_tries):
        sizes = tuple(block_sizes) if block_sizes is not None else tuple(rng.choice((1, 2)) for _ in range(s))
        amb = BlockedAmbient(p, K, sizes, modulus)
        gens = []
        for _ in range(2):
            c = rng.randrange(p)
            u = amb.random_element(rng)
            gens.append([(x + p * y) % amb.q for x, y in zip(amb.scalar(c), u)])
        # mix in block-separating elements so that T has full rank
        for pos in range(amb.n):
            e = [0] * amb.dim
            e[pos * amb.t] = p ** rng.randint(1, 2)
            gens.append(e) if rng.random() < 0.8 else None
        try:
            T = Subalgebra.generated_by(amb, gens)
        except (NotSubalgebra, PrecisionExhausted):
            continue
        m = maximal_ideal(T)
        mb = [list(c) for c in m.columns]
        k = rng.randint(1, 3)
        jg = []
        for _ in range(k):
            coeffs = [rng.randrange(p) for _ in mb]
            jg.append([sum(c * b[i] for c, b in zip(coeffs, mb)) % amb.q for i in range(amb.dim)])
        try:
            J = FiniteIndexIdeal.generated_by(T, jg)
        except NotIdeal:
            continue
        if any(principal_generator(block_project(T, i), block_project(J, i)) is None for i in range(amb.s)):
            continue
        return T, J
    raise PrecisionExhausted("could not draw an instance with principal blocks")


def strict_fixture(p: int, K: int = 32, modulus=None):
    """T = {(a, b) : a = b mod varpi} in O x O with J its maximal ideal varpi O x varpi O."""
    amb = BlockedAmbient(p, K, (1, 1), modulus)
    ring = amb.ring
    pi = ring.uniformizer()
    T = Subalgebra(amb, amb.o_span([amb.one(), amb.from_coords([pi, ring.zero()])]))
    J = FiniteIndexIdeal(T, amb.o_span([amb.from_coords([pi, ring.zero()]), amb.from_coords([ring.zero(), pi])]))
    return T, J


def strict_fixture_non_ideal(p: int, K: int = 32, modulus=None):
    """The same T with the O-submodule {(a, b) : a = b mod varpi^2}; construction raises NotIdeal."""
    T, _ = strict_fixture(p, K, modulus)
    amb = T.ambient
    ring = amb.ring
    pi2 = ring.mul(ring.uniformizer(), ring.uniformizer())
    lat = amb.o_span([amb.one(), amb.from_coords([pi2, ring.zero()])])
    return FiniteIndexIdeal(T, lat)
